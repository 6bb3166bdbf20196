//! Independent numerical oracles shared by the integration tests.
//!
//! Nothing here calls into the crate's closed-form moment code: densities are
//! written out directly and integrated by adaptive Gauss–Kronrod quadrature.

#![allow(dead_code)]

use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, (kronrod - gauss).abs() * h)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (val, err) = gk15(f, a, b);
    if err <= tol || depth >= 40 {
        return val;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth + 1) + adapt(f, mid, b, 0.5 * tol, depth + 1)
}

/// Adaptive Gauss–Kronrod (7/15) on a finite interval, pre-split into 16 panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    assert!(a.is_finite() && b.is_finite() && a < b);
    let panels = 16;
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + w * i as f64;
            let hi = if i + 1 == panels { b } else { lo + w };
            adapt(&f, lo, hi, tol / panels as f64, 0)
        })
        .sum()
}

pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Normal CDF by quadrature of the density from its tail.
pub fn normal_cdf_quad(x: f64) -> f64 {
    if x <= 0.0 {
        integrate(normal_pdf, (x - 40.0).min(-40.0), x, 1e-16)
    } else {
        1.0 - normal_cdf_quad(-x)
    }
}

/// Clip an extended-real window to where N(m, s) carries any representable mass.
fn clip(l: f64, r: f64, m: f64, s: f64) -> (f64, f64) {
    (l.max(m - 40.0 * s), r.min(m + 40.0 * s))
}

/// Mean and variance of N(m, s²) restricted to (l, r), by quadrature.
pub fn truncated_moments(l: f64, r: f64, m: f64, s: f64) -> (f64, f64) {
    let (a, b) = clip(l, r, m, s);
    let dens = |v: f64| normal_pdf((v - m) / s) / s;
    let z = integrate(dens, a, b, 1e-15);
    let mean = integrate(|v| v * dens(v), a, b, 1e-15) / z;
    let var = integrate(|v| (v - mean).powi(2) * dens(v), a, b, 1e-15) / z;
    (mean, var)
}

/// Differential entropy of N(m, s²) restricted to (l, r), by quadrature of −p ln p.
pub fn truncated_entropy(l: f64, r: f64, m: f64, s: f64) -> f64 {
    let (a, b) = clip(l, r, m, s);
    let dens = |v: f64| normal_pdf((v - m) / s) / s;
    let z = integrate(dens, a, b, 1e-15);
    integrate(
        |v| {
            let p = dens(v) / z;
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        },
        a,
        b,
        1e-15,
    )
}

/// Exact posterior mean and variance of a N(mu, sigma²) prior after observing
/// sign `x` of V + z − theta with z ~ N(0, sigma_z²).
pub fn exact_posterior_moments(mu: f64, sigma: f64, theta: f64, x: f64, sigma_z: f64) -> (f64, f64) {
    let (a, b) = (mu - 40.0 * sigma, mu + 40.0 * sigma);
    let lik = |v: f64| {
        // Φ(x(v − θ)/σ_z) straight from libm, bypassing the crate's normal module.
        0.5 * libm::erfc(-x * (v - theta) / sigma_z / std::f64::consts::SQRT_2)
    };
    let post = |v: f64| normal_pdf((v - mu) / sigma) / sigma * lik(v);
    let z = integrate(post, a, b, 1e-15);
    let mean = integrate(|v| v * post(v), a, b, 1e-15) / z;
    let var = integrate(|v| (v - mean).powi(2) * post(v), a, b, 1e-15) / z;
    (mean, var)
}
