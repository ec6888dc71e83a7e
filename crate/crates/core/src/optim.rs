//! Deterministic Nelder-Mead simplex minimizer.

/// Stopping rules for [`nelder_mead`].
#[derive(Debug, Clone, Copy)]
pub struct SimplexOptions {
    /// Converged once the spread of objective values across the simplex
    /// falls below this.
    pub f_tolerance: f64,
    /// Cap on iterations, summed over restarts.
    pub max_iterations: usize,
    /// Restarts from the best vertex after a convergence, to escape
    /// collapsed simplices.
    pub max_restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            f_tolerance: 1e-10,
            max_iterations: 2000,
            max_restarts: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Minimizes `objective` starting from `start`, with initial simplex edges
/// `steps`. Non-finite objective values are treated as `+inf`.
pub fn nelder_mead<F>(
    objective: F,
    start: &[f64],
    steps: &[f64],
    options: &SimplexOptions,
) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    assert_eq!(start.len(), steps.len(), "one step per coordinate");
    let eval = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let dim = start.len();
    let mut best_x = start.to_vec();
    let mut best_f = eval(start);
    if dim == 0 {
        return SimplexResult {
            x: best_x,
            value: best_f,
            iterations: 0,
            converged: best_f.is_finite(),
        };
    }

    let mut iterations = 0;
    let mut converged = false;
    for _ in 0..=options.max_restarts {
        let before = best_f;
        let (x, f, ok) = run_simplex(
            &eval,
            &best_x,
            best_f,
            steps,
            options,
            &mut iterations,
        );
        if f <= best_f {
            best_x = x;
            best_f = f;
        }
        if !ok {
            converged = false;
            break;
        }
        converged = true;
        // A restart that finds nothing new confirms the minimum.
        if before - best_f < options.f_tolerance {
            break;
        }
    }
    SimplexResult {
        x: best_x,
        value: best_f,
        iterations,
        converged: converged && best_f.is_finite(),
    }
}

fn run_simplex<F>(
    eval: &F,
    start: &[f64],
    start_f: f64,
    steps: &[f64],
    options: &SimplexOptions,
    iterations: &mut usize,
) -> (Vec<f64>, f64, bool)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = start.len();
    let mut vertices: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    let mut values: Vec<f64> = Vec::with_capacity(dim + 1);
    vertices.push(start.to_vec());
    values.push(start_f);
    for (i, step) in steps.iter().enumerate() {
        let mut v = start.to_vec();
        v[i] += step;
        values.push(eval(&v));
        vertices.push(v);
    }

    let mut centroid = vec![0.0; dim];
    loop {
        // Stable sort keeps the vertex order reproducible on ties.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let vertices_sorted: Vec<Vec<f64>> = order.iter().map(|&i| vertices[i].clone()).collect();
        let values_sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        vertices = vertices_sorted;
        values = values_sorted;

        let spread = values[dim] - values[0];
        if spread.is_finite() && spread < options.f_tolerance {
            return (vertices.swap_remove(0), values[0], true);
        }
        if *iterations >= options.max_iterations {
            return (vertices.swap_remove(0), values[0], false);
        }
        *iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for v in &vertices[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / dim as f64;
            }
        }
        let worst = &vertices[dim];
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let reflected = along(REFLECT);
        let f_reflected = eval(&reflected);
        if f_reflected < values[0] {
            let expanded = along(REFLECT * EXPAND);
            let f_expanded = eval(&expanded);
            if f_expanded < f_reflected {
                vertices[dim] = expanded;
                values[dim] = f_expanded;
            } else {
                vertices[dim] = reflected;
                values[dim] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[dim - 1] {
            vertices[dim] = reflected;
            values[dim] = f_reflected;
            continue;
        }

        let (contracted, f_contracted) = if f_reflected < values[dim] {
            let c = along(REFLECT * CONTRACT);
            let f = eval(&c);
            (c, f)
        } else {
            let c = along(-CONTRACT);
            let f = eval(&c);
            (c, f)
        };
        if f_contracted < values[dim].min(f_reflected) {
            vertices[dim] = contracted;
            values[dim] = f_contracted;
            continue;
        }

        let best = vertices[0].clone();
        for i in 1..=dim {
            for (x, b) in vertices[i].iter_mut().zip(&best) {
                *x = b + SHRINK * (*x - b);
            }
            values[i] = eval(&vertices[i]);
        }
    }
}
