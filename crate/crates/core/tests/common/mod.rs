//! Independent oracles shared by integration tests. Nothing here calls into
//! the code paths being checked except to obtain samples.

#![allow(dead_code)]

use astro_float::{BigFloat, Consts, Radix, RoundingMode};

const PREC: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

/// Logistic exponent function written out directly.
pub fn logistic_v(x: &[f64], alpha: f64) -> f64 {
    x.iter().map(|v| v.powf(-1.0 / alpha)).sum::<f64>().powf(alpha)
}

/// Mixed partial derivative of `f` over the coordinates in `subset` at `x`
/// by nested central differences with relative steps, Richardson-extrapolated
/// twice (error O(h^6)).
pub fn mixed_partial(f: &dyn Fn(&[f64]) -> f64, x: &[f64], subset: &[usize], rel_step: f64) -> f64 {
    let diff = |h: f64| -> f64 {
        let s = subset.len();
        let mut total = 0.0;
        let mut point = x.to_vec();
        for signs in 0u32..(1 << s) {
            let mut sign = 1.0;
            for (k, &j) in subset.iter().enumerate() {
                let up = signs >> k & 1 == 1;
                point[j] = x[j] * (1.0 + if up { h } else { -h });
                if !up {
                    sign = -sign;
                }
            }
            total += sign * f(&point);
        }
        let denom: f64 = subset.iter().map(|&j| 2.0 * h * x[j]).product();
        total / denom
    };
    let (d1, d2, d3) = (diff(rel_step), diff(rel_step / 2.0), diff(rel_step / 4.0));
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    (16.0 * r2 - r1) / 15.0
}

/// Kolmogorov–Smirnov statistic of `sample` against the continuous CDF `cdf`.
pub fn ks_statistic(sample: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(|a, b| a.total_cmp(b));
    let n = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic 1% critical value of the KS statistic.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.627_61 / (n as f64).sqrt()
}

pub fn frechet_cdf(x: f64) -> f64 {
    (-1.0 / x).exp()
}

/// `phi(t) = (1 + t^alpha)^(-1)` and its inverse.
pub fn opc_phi(t: f64, alpha: f64) -> f64 {
    1.0 / (1.0 + t.powf(alpha))
}

pub fn opc_phi_inv(u: f64, alpha: f64) -> f64 {
    (1.0 / u - 1.0).powf(1.0 / alpha)
}

/// Analytic CDF at the all-ones corner for each model.
pub fn logistic_corner_cdf(d: usize, alpha: f64) -> f64 {
    (-(d as f64).powf(alpha)).exp()
}

pub fn opc_corner_cdf(d: usize, alpha: f64) -> f64 {
    opc_phi(d as f64 * opc_phi_inv((-1.0f64).exp(), alpha), alpha)
}

/// `|p_hat - p| / sqrt(p (1 - p) / m)`.
pub fn binomial_z(hits: usize, m: usize, p: f64) -> f64 {
    let p_hat = hits as f64 / m as f64;
    (p_hat - p).abs() / (p * (1.0 - p) / m as f64).sqrt()
}

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * k as f64);
    }
    s * h / 3.0
}

/// Bell numbers by the Bell triangle in plain u128 arithmetic.
pub fn bell_triangle(d: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 1..d {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    *row.last().unwrap()
}

/// Mixed partial `V_S(x)` of the logistic exponent function by nested
/// central differences of `V` evaluated in 320-bit floating point.
///
/// With relative step `1e-12` the truncation error is ~1e-24 and roundoff
/// is far below f64 resolution, so the result is accurate to f64 precision.
pub fn logistic_partial_fd(x: &[f64], subset: &[usize], alpha: f64) -> f64 {
    let mut cc = Consts::new().expect("constants cache");
    let one = BigFloat::from_f64(1.0, PREC);
    let alpha_hp = BigFloat::from_f64(alpha, PREC);
    let neg_inv_alpha = one.div(&alpha_hp, PREC, RM).neg();
    let h = BigFloat::from_f64(1e-12, PREC);
    let xs: Vec<BigFloat> = x.iter().map(|&v| BigFloat::from_f64(v, PREC)).collect();

    let mut v_at = |point: &[BigFloat]| -> BigFloat {
        let mut t = BigFloat::from_f64(0.0, PREC);
        for xj in point {
            t = t.add(&xj.pow(&neg_inv_alpha, PREC, RM, &mut cc), PREC, RM);
        }
        t.pow(&alpha_hp, PREC, RM, &mut cc)
    };

    let s = subset.len();
    let mut total = BigFloat::from_f64(0.0, PREC);
    for signs in 0u32..(1 << s) {
        let mut point = xs.clone();
        let mut negative = false;
        for (k, &j) in subset.iter().enumerate() {
            let up = signs >> k & 1 == 1;
            let delta = xs[j].mul(&h, PREC, RM);
            point[j] = if up {
                xs[j].add(&delta, PREC, RM)
            } else {
                negative = !negative;
                xs[j].sub(&delta, PREC, RM)
            };
        }
        let value = v_at(&point);
        total = if negative { total.sub(&value, PREC, RM) } else { total.add(&value, PREC, RM) };
    }
    let two_h = h.add(&h, PREC, RM);
    for &j in subset {
        total = total.div(&xs[j].mul(&two_h, PREC, RM), PREC, RM);
    }
    total
        .format(Radix::Dec, RM, &mut cc)
        .expect("decimal formatting")
        .parse()
        .expect("f64 parse")
}
