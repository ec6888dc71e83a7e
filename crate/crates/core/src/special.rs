//! Special functions behind the diagnostics and interval code: log-gamma,
//! regularized incomplete gamma, chi-square tail and the standard normal
//! CDF/quantile.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const GAMMA_EPS: f64 = 1e-16;
const GAMMA_MAX_ITER: usize = 10_000;
const TINY: f64 = 1e-300;

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the approximation in its accurate range.
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut denom = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..GAMMA_MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * GAMMA_EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

/// Modified Lentz evaluation of the continued fraction for `Q(a, x)`.
fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..GAMMA_MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < GAMMA_EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Upper tail `P(X > x)` of a chi-square distribution with `k` degrees of
/// freedom.
pub fn chi_square_sf(x: f64, k: usize) -> Result<f64> {
    check_chi_square_args(x, k)?;
    Ok(gamma_q(k as f64 / 2.0, x / 2.0))
}

/// Lower tail `P(X <= x)` of a chi-square distribution with `k` degrees of
/// freedom.
pub fn chi_square_cdf(x: f64, k: usize) -> Result<f64> {
    check_chi_square_args(x, k)?;
    Ok(gamma_p(k as f64 / 2.0, x / 2.0))
}

fn check_chi_square_args(x: f64, k: usize) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("chi-square argument {x} is negative")));
    }
    if k == 0 {
        return Err(Error::Domain("chi-square needs at least one degree of freedom".into()));
    }
    Ok(())
}

/// Standard normal CDF, via `erfc(t) = Q(1/2, t^2)`.
pub fn normal_cdf(z: f64) -> f64 {
    let tail = 0.5 * gamma_q(0.5, z * z / 2.0);
    if z < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

// Acklam's rational approximation, refined below by one Halley step.
const ACKLAM_A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const ACKLAM_B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const ACKLAM_C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const ACKLAM_D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];
const ACKLAM_LOW: f64 = 0.02425;

/// Standard normal quantile: the `z` with `normal_cdf(z) = prob`.
pub fn z_quantile(prob: f64) -> Result<f64> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(Error::Domain(format!(
            "normal quantile needs 0 < p < 1, got {prob}"
        )));
    }
    if prob > 0.5 {
        return Ok(-lower_quantile(1.0 - prob));
    }
    Ok(lower_quantile(prob))
}

/// Quantile for `p <= 0.5`, where `normal_cdf` is evaluated as a direct
/// tail and keeps full relative precision.
fn lower_quantile(p: f64) -> f64 {
    let x = if p < ACKLAM_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        let [c0, c1, c2, c3, c4, c5] = ACKLAM_C;
        let [d0, d1, d2, d3] = ACKLAM_D;
        (((((c0 * q + c1) * q + c2) * q + c3) * q + c4) * q + c5)
            / ((((d0 * q + d1) * q + d2) * q + d3) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        let [a0, a1, a2, a3, a4, a5] = ACKLAM_A;
        let [b0, b1, b2, b3, b4] = ACKLAM_B;
        (((((a0 * r + a1) * r + a2) * r + a3) * r + a4) * r + a5) * q
            / (((((b0 * r + b1) * r + b2) * r + b3) * r + b4) * r + 1.0)
    };
    if x == 0.0 {
        return 0.0;
    }
    let err = normal_cdf(x) - p;
    let u = err * (2.0 * PI).sqrt() * (x * x / 2.0).exp();
    x - u / (1.0 + x * u / 2.0)
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    (-z * z / 2.0).exp() / (SQRT_2 * PI.sqrt())
}
