//! Standard normal special functions and the standardized truncated normal.
//!
//! Tail quantities go through the scaled complementary error function
//! `erfcx(x) = exp(x²)·erfc(x)` so that masses, log-masses and Mills ratios
//! stay accurate when a truncation bound sits tens of standard deviations
//! away from the mean.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// 1/√(2π)
pub const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
/// ln(2πe)/2, the differential entropy of the standard normal.
pub const STD_ENTROPY: f64 = 1.418_938_533_204_672_7;

/// Standard normal density.
#[inline]
pub fn pdf(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF, Φ(x).
#[inline]
pub fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail, 1 − Φ(x), accurate for large positive `x`.
#[inline]
pub fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Scaled complementary error function, exp(x²)·erfc(x).
pub fn erfcx(x: f64) -> f64 {
    if x < 26.0 {
        // exp(x²) overflows below roughly -26.6, where erfcx is effectively infinite anyway.
        return (x * x).exp() * libm::erfc(x);
    }
    if x.is_infinite() {
        return 0.0;
    }
    // Asymptotic series; at x >= 26 the ninth term is below 1e-15 relative.
    let inv2x2 = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..9 {
        term *= -((2 * n - 1) as f64) * inv2x2;
        sum += term;
    }
    sum / (x * PI.sqrt())
}

/// ln(1 − Φ(x)).
pub fn ln_sf(x: f64) -> f64 {
    if x < 1.0 {
        sf(x).ln()
    } else if x.is_infinite() {
        f64::NEG_INFINITY
    } else {
        (0.5 * erfcx(x * FRAC_1_SQRT_2)).ln() - 0.5 * x * x
    }
}

/// ln Φ(x).
#[inline]
pub fn ln_cdf(x: f64) -> f64 {
    ln_sf(-x)
}

/// Hazard function N(x)/(1 − Φ(x)), the inverse Mills ratio.
pub fn hazard(x: f64) -> f64 {
    if x >= 0.0 {
        (2.0 / PI).sqrt() / erfcx(x * FRAC_1_SQRT_2)
    } else {
        pdf(x) / sf(x)
    }
}

/// Inverse of the standard normal CDF.
///
/// Acklam's rational approximation (relative error about 1e-9) followed by
/// one Halley step against the erfc-based CDF.
pub fn inv_cdf(p: f64) -> f64 {
    if p.is_nan() || !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }

    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let tail = |q: f64| {
        let t = (-2.0 * q.ln()).sqrt();
        (((((C[0] * t + C[1]) * t + C[2]) * t + C[3]) * t + C[4]) * t + C[5])
            / ((((D[0] * t + D[1]) * t + D[2]) * t + D[3]) * t + 1.0)
    };

    let x = if p < P_LOW {
        tail(p)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail(1.0 - p)
    };

    // Residual taken in whichever tail keeps it free of cancellation.
    let e = if x <= 0.0 { cdf(x) - p } else { (1.0 - p) - sf(x) };
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    x - u / (1.0 + 0.5 * x * u)
}

/// A standard normal restricted to the open window (alpha, beta).
///
/// Holds the log of the normalizing mass Z = Φ(beta) − Φ(alpha) and the two
/// ratios N(alpha)/Z and N(beta)/Z from which every moment follows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedStdNormal {
    alpha: f64,
    beta: f64,
    ln_mass: f64,
    ratio_lo: f64,
    ratio_hi: f64,
}

impl TruncatedStdNormal {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if alpha.is_nan() || beta.is_nan() || alpha >= beta {
            return Err(Error::InvalidRange(format!(
                "truncation window ({alpha}, {beta}) is empty"
            )));
        }
        let out = if alpha >= 0.0 {
            Self::upper_tail(alpha, beta)
        } else if beta <= 0.0 {
            let m = Self::upper_tail(-beta, -alpha);
            Self {
                alpha,
                beta,
                ln_mass: m.ln_mass,
                ratio_lo: m.ratio_hi,
                ratio_hi: m.ratio_lo,
            }
        } else {
            // Window straddles zero, no cancellation in the erf difference.
            let mass = 0.5 * (libm::erf(beta * FRAC_1_SQRT_2) - libm::erf(alpha * FRAC_1_SQRT_2));
            Self {
                alpha,
                beta,
                ln_mass: mass.ln(),
                ratio_lo: pdf(alpha) / mass,
                ratio_hi: pdf(beta) / mass,
            }
        };
        if !out.ln_mass.is_finite() || !out.ratio_lo.is_finite() || !out.ratio_hi.is_finite() {
            return Err(Error::DegenerateMass { alpha, beta });
        }
        Ok(out)
    }

    /// Both bounds on the nonnegative side: work with upper-tail masses.
    fn upper_tail(alpha: f64, beta: f64) -> Self {
        let ln_q_lo = ln_sf(alpha);
        let (one_minus, tail_ratio) = if beta.is_infinite() {
            (1.0, 0.0)
        } else {
            let d = ln_sf(beta) - ln_q_lo;
            (-d.exp_m1(), d.exp())
        };
        let ratio_hi = if beta.is_infinite() {
            0.0
        } else {
            hazard(beta) * tail_ratio / one_minus
        };
        Self {
            alpha,
            beta,
            ln_mass: ln_q_lo + one_minus.ln(),
            ratio_lo: hazard(alpha) / one_minus,
            ratio_hi,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// ln(Φ(beta) − Φ(alpha)).
    pub fn ln_mass(&self) -> f64 {
        self.ln_mass
    }

    pub fn mass(&self) -> f64 {
        self.ln_mass.exp()
    }

    /// alpha·N(alpha)/Z − beta·N(beta)/Z, with infinite bounds contributing zero.
    fn edge_term(&self) -> f64 {
        let lo = if self.alpha.is_finite() {
            self.alpha * self.ratio_lo
        } else {
            0.0
        };
        let hi = if self.beta.is_finite() {
            self.beta * self.ratio_hi
        } else {
            0.0
        };
        lo - hi
    }

    pub fn mean(&self) -> f64 {
        self.ratio_lo - self.ratio_hi
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        1.0 + self.edge_term() - mean * mean
    }

    /// Differential entropy in nats.
    pub fn entropy(&self) -> f64 {
        STD_ENTROPY + self.ln_mass + 0.5 * self.edge_term()
    }

    /// ln of the variance of the normal whose entropy equals [`Self::entropy`].
    pub fn ln_entropy_matched_variance(&self) -> f64 {
        2.0 * self.ln_mass + self.edge_term()
    }

    /// Density of the truncated variable at standardized point `z`.
    pub fn density(&self, z: f64) -> f64 {
        if z <= self.alpha || z >= self.beta {
            0.0
        } else {
            (-0.5 * z * z - self.ln_mass).exp() * FRAC_1_SQRT_2PI
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn cdf_reference_values() {
        assert!(close(cdf(0.0), 0.5, 1e-15));
        assert!(close(cdf(1.0), 0.841_344_746_068_542_9, 1e-14));
        assert!(close(cdf(-1.0), 0.158_655_253_931_457_05, 1e-14));
        // Φ(-10) ≈ 7.6199e-24, relative accuracy matters here
        assert!((sf(10.0) / 7.619_853_024_160_527e-24 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn erfcx_matches_direct_form_across_switch() {
        for &x in &[0.0f64, 0.5, 3.0, 10.0, 25.9] {
            let direct = (x * x).exp() * libm::erfc(x);
            assert!(close(erfcx(x), direct, 1e-13), "x={x}");
        }
        // continuity at the asymptotic switch
        let below = (25.999_999f64).powi(2).exp() * libm::erfc(25.999_999);
        assert!((erfcx(26.0) / below - 1.0).abs() < 1e-7);
        assert!(close(erfcx(1e6), 1.0 / (1e6 * PI.sqrt()), 1e-12));
    }

    #[test]
    fn ln_sf_deep_tail() {
        assert!(close(ln_sf(0.0), 0.5f64.ln(), 1e-15));
        assert!(close(ln_sf(5.0), sf(5.0).ln(), 1e-13));
        // Mills asymptote: ln Q(x) ~ -x²/2 - ln(x√(2π))
        let x = 100.0;
        let asym = -0.5 * x * x - (x * (2.0 * PI).sqrt()).ln() + (1.0 - 1.0 / (x * x)).ln();
        assert!((ln_sf(x) - asym).abs() < 1e-6);
        assert_eq!(ln_sf(f64::INFINITY), f64::NEG_INFINITY);
    }

    #[test]
    fn hazard_is_continuous_at_zero() {
        let left = hazard(-1e-12);
        let right = hazard(0.0);
        assert!((left - right).abs() < 1e-10);
        assert!(close(right, 2.0 * FRAC_1_SQRT_2PI, 1e-14));
    }

    #[test]
    fn inverse_cdf_reference_values() {
        assert!(close(inv_cdf(0.975), 1.959_963_984_540_054, 1e-12));
        assert!(close(inv_cdf(0.5), 0.0, 1e-15));
        assert!(close(inv_cdf(cdf(-2.0)), -2.0, 1e-11));
        assert!(close(inv_cdf(1e-20), -9.262_340_089_798_408, 1e-10));
        assert!(inv_cdf(1.5).is_nan());
        assert_eq!(inv_cdf(0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn inverse_cdf_round_trip() {
        for i in 1..1000 {
            let p = i as f64 / 1000.0;
            let x = inv_cdf(p);
            assert!((cdf(x) - p).abs() < 1e-9 * p.min(1.0 - p).max(1e-3), "p={p}");
        }
    }

    #[test]
    fn half_normal_moments() {
        let t = TruncatedStdNormal::new(0.0, f64::INFINITY).unwrap();
        assert!(close(t.mean(), (2.0 / PI).sqrt(), 1e-15));
        assert!(close(t.variance(), 1.0 - 2.0 / PI, 1e-15));
        assert!(close(t.mass(), 0.5, 1e-15));
    }

    #[test]
    fn mirror_symmetry() {
        let a = TruncatedStdNormal::new(-1.0, f64::INFINITY).unwrap();
        let b = TruncatedStdNormal::new(f64::NEG_INFINITY, 1.0).unwrap();
        assert!(close(a.mean(), -b.mean(), 1e-15));
        assert!(close(a.variance(), b.variance(), 1e-15));
        assert!(close(a.entropy(), b.entropy(), 1e-15));
    }

    #[test]
    fn far_tail_window_stays_finite() {
        // A window 40 standard deviations out: Φ differences underflow, log form does not.
        let t = TruncatedStdNormal::new(40.0, 40.5).unwrap();
        assert!(t.ln_mass() < -800.0);
        let mean = t.mean();
        assert!(mean > 40.0 && mean < 40.1, "mean={mean}");
        assert!(t.variance() > 0.0);
        let one_sided = TruncatedStdNormal::new(40.0, f64::INFINITY).unwrap();
        // E[Z | Z > a] ≈ a + 1/a
        assert!((one_sided.mean() - (40.0 + 1.0 / 40.0)).abs() < 1e-4);
    }

    #[test]
    fn empty_window_is_rejected() {
        assert!(TruncatedStdNormal::new(1.0, 1.0).is_err());
        assert!(TruncatedStdNormal::new(2.0, 1.0).is_err());
        assert!(TruncatedStdNormal::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn full_line_is_standard_normal() {
        let t = TruncatedStdNormal::new(f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!(t.ln_mass(), 0.0);
        assert_eq!(t.mean(), 0.0);
        assert_eq!(t.variance(), 1.0);
        assert!(close(t.entropy(), 0.5 * (2.0 * PI * std::f64::consts::E).ln(), 1e-15));
        assert!(close(t.density(0.0), FRAC_1_SQRT_2PI, 1e-15));
    }
}
