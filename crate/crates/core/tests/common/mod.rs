//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use measlescast::rng::SplitMix64;

/// Standard-normal draws for test inputs.
pub fn normal_series(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = SplitMix64::new(seed);
    (0..n).map(|_| rng.next_normal()).collect()
}

/// Autocorrelations at lags `0..=max_lag` from explicit covariance sums.
pub fn acf_oracle(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let m = x.iter().sum::<f64>() / n as f64;
    let cov = |k: usize| -> f64 {
        let mut s = 0.0;
        for t in k..n {
            s += (x[t] - m) * (x[t - k] - m);
        }
        s / n as f64
    };
    let c0 = cov(0);
    (0..=max_lag).map(|k| cov(k) / c0).collect()
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// Lag-`k` partial autocorrelation: last coefficient of the least-squares
/// regression of the mean-centred series on its first `k` lags, with the
/// series padded by zeros outside its observed range.
pub fn pacf_oracle(x: &[f64], k: usize) -> f64 {
    let n = x.len();
    let m = x.iter().sum::<f64>() / n as f64;
    let at = |t: isize| -> f64 {
        if t >= 0 && (t as usize) < n {
            x[t as usize] - m
        } else {
            0.0
        }
    };
    let mut xtx = vec![vec![0.0; k]; k];
    let mut xty = vec![0.0; k];
    for t in 0..(n + k) as isize {
        let y = at(t);
        for i in 0..k {
            let xi = at(t - 1 - i as isize);
            xty[i] += xi * y;
            for j in 0..k {
                xtx[i][j] += xi * at(t - 1 - j as isize);
            }
        }
    }
    solve(xtx, xty)[k - 1]
}

/// `Gamma(k/2)` from `Gamma(1) = 1`, `Gamma(1/2) = sqrt(pi)` and the
/// recurrence.
pub fn gamma_half(k: usize) -> f64 {
    let (mut a, mut g) = if k % 2 == 0 {
        (1.0, 1.0)
    } else {
        (0.5, std::f64::consts::PI.sqrt())
    };
    while a < k as f64 / 2.0 {
        g *= a;
        a += 1.0;
    }
    g
}

/// Composite Simpson rule with `intervals` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, intervals: usize) -> f64 {
    let h = (hi - lo) / intervals as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(lo + i as f64 * h);
    }
    s * h / 3.0
}

/// Chi-square CDF by integrating the density after substituting `t = u^2`,
/// which removes the singularity at zero for `k = 1`.
pub fn chi_square_cdf_oracle(x: f64, k: usize) -> f64 {
    let norm = 2f64.powf(k as f64 / 2.0) * gamma_half(k);
    let density = |u: f64| 2.0 * u.powi(k as i32 - 1) * (-u * u / 2.0).exp() / norm;
    simpson(density, 0.0, x.sqrt(), 20_000)
}

/// Standard normal CDF by integrating the density from zero.
pub fn normal_cdf_oracle(z: f64) -> f64 {
    let pdf = |t: f64| (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    0.5 + simpson(pdf, 0.0, z, 20_000)
}

/// First `h` coefficients of `theta(B) / phi(B)` by polynomial long
/// division, with `phi(B) = 1 - phi_1 B - ...` and `theta(B) = 1 - theta_1 B - ...`.
pub fn psi_by_division(phi: &[f64], theta: &[f64], h: usize) -> Vec<f64> {
    let mut num = vec![0.0; h];
    num[0] = 1.0;
    for (j, t) in theta.iter().enumerate() {
        if j + 1 < h {
            num[j + 1] = -t;
        }
    }
    let mut den = vec![1.0];
    den.extend(phi.iter().map(|p| -p));

    let mut quotient = vec![0.0; h];
    let mut rem = num;
    for j in 0..h {
        let q = rem[j] / den[0];
        quotient[j] = q;
        for (i, d) in den.iter().enumerate() {
            if j + i < h {
                rem[j + i] -= q * d;
            }
        }
    }
    quotient
}

/// Stationary coefficients of order `p` drawn through random partial
/// autocorrelations in `(-0.9, 0.9)`.
pub fn random_stable(rng: &mut SplitMix64, p: usize) -> Vec<f64> {
    let partials: Vec<f64> = (0..p).map(|_| 1.8 * rng.next_uniform() - 0.9).collect();
    measlescast::arima::partials_to_coefficients(&partials)
}
