//! Closed-form densities and two-sided bounds used as oracles.
//!
//! The bang-bang diffusion dY = β sgn(α − Y) dt + dW admits a closed-form
//! density at its center point α,
//!
//!   q^{α,β}_t(x, α) = Π_i (1/√(2πt)) ∫_{|x_i−α_i|/√t}^∞ z e^{−(z−β_i√t)²/2} dz,
//!
//! and sandwiches the density of any Brownian motion with drift bounded
//! by |β|: q^{y,−‖b‖}_t(x,y) ≤ p_t(x,y) ≤ q^{y,‖b‖}_t(x,y). The constant
//! follows from the Tanaka representation: weighting the Brownian bridge
//! by exp(β|z₀| − β²t/2 + βL_t) against the joint endpoint/local-time
//! law (z₀ + l)(2πt³)^{-1/2} exp(−(z₀+l)²/2t) collapses to exactly
//! (2πt)^{-1/2} I(a, c); the β → 0 limit is then the Gaussian itself, and
//! direct simulation of the bang-bang process confirms the value. Each
//! 1-D factor reduces to exp and erfc:
//!
//!   I(a, c) = ∫_a^∞ z e^{−(z−c)²/2} dz
//!           = e^{−(a−c)²/2} + c √(π/2) erfc((a−c)/√2).

use crate::error::{PathdriftError, Result};
use crate::girsanov::DensityEstimate;
use crate::parametrix::gaussian_density_1d;
use crate::special::erfc;
use crate::stats::fit_line;

/// ∫_a^∞ z exp(−(z−c)²/2) dz in closed form.
pub fn tail_moment_integral(a: f64, c: f64) -> f64 {
    let d = a - c;
    (-0.5 * d * d).exp()
        + c * (std::f64::consts::PI / 2.0).sqrt() * erfc(d / std::f64::consts::SQRT_2)
}

/// Density of the bang-bang diffusion with parameters (α, β) at its center
/// point: q^{α,β}_t(x, α). Only the center value has a closed form, and it
/// is the only point the sharp two-sided bound ever evaluates.
pub fn bangbang_peak_density(x: &[f64], alpha: &[f64], beta: &[f64], t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(PathdriftError::domain("bang-bang density needs t > 0"));
    }
    if x.len() != alpha.len() || x.len() != beta.len() {
        return Err(PathdriftError::domain("dimension mismatch"));
    }
    let norm = 1.0 / (2.0 * std::f64::consts::PI * t).sqrt();
    let mut prod = 1.0;
    for i in 0..x.len() {
        let a = (x[i] - alpha[i]).abs() / t.sqrt();
        let c = beta[i] * t.sqrt();
        prod *= norm * tail_moment_integral(a, c);
    }
    Ok(prod)
}

/// Verdict of the sharp bracket check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail => write!(f, "fail"),
            Verdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Tests an estimate of p_t(x, y) against the two-sided bang-bang bracket
/// for drift bound `b_sup`: pass if [est − 3SE, est + 3SE] sits inside
/// [lower, upper], fail if it sits outside, inconclusive otherwise.
pub fn sharp_bound_verdict(
    p_hat: &DensityEstimate,
    x: &[f64],
    y: &[f64],
    t: f64,
    b_sup: f64,
) -> Result<(Verdict, f64, f64)> {
    let d = x.len();
    let lower = bangbang_peak_density(x, y, &vec![-b_sup; d], t)?;
    let upper = bangbang_peak_density(x, y, &vec![b_sup; d], t)?;
    let lo = p_hat.value - 3.0 * p_hat.stderr;
    let hi = p_hat.value + 3.0 * p_hat.stderr;
    let verdict = if lo >= lower && hi <= upper {
        Verdict::Pass
    } else if hi < lower || lo > upper {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok((verdict, lower, upper))
}

/// Ornstein–Uhlenbeck transition density: dX = −κX dt + σ dW has
/// X_t | X_0 = x ~ Normal(x e^{−κt}, σ²(1 − e^{−2κt})/(2κ)), with the
/// κ → 0 limit σ² t.
pub fn ou_density(x: f64, y: f64, t: f64, kappa: f64, sigma: f64) -> Result<f64> {
    if t <= 0.0 {
        return Err(PathdriftError::domain("ou density needs t > 0"));
    }
    if sigma <= 0.0 {
        return Err(PathdriftError::domain("ou density needs sigma > 0"));
    }
    let mean = x * (-kappa * t).exp();
    let var = if kappa == 0.0 {
        sigma * sigma * t
    } else {
        // -expm1(-2κt)/(2κ) is stable for κ near 0
        sigma * sigma * (-libm::expm1(-2.0 * kappa * t)) / (2.0 * kappa)
    };
    Ok(gaussian_density_1d(var, mean, y))
}

/// Mean and variance of the OU marginal, for oracles that need them.
pub fn ou_moments(x: f64, t: f64, kappa: f64, sigma: f64) -> (f64, f64) {
    let mean = x * (-kappa * t).exp();
    let var = if kappa == 0.0 {
        sigma * sigma * t
    } else {
        sigma * sigma * (-libm::expm1(-2.0 * kappa * t)) / (2.0 * kappa)
    };
    (mean, var)
}

/// Constants (C₋, c₋, C₊, c₊) of a two-sided Gaussian bracket
/// C₋ g_{c₋t}(x,y) ≤ p_t(x,y) ≤ C₊ g_{c₊t}(x,y).
#[derive(Clone, Copy, Debug)]
pub struct GaussianEnvelope {
    pub c_lower_scale: f64,
    pub c_lower_time: f64,
    pub c_upper_scale: f64,
    pub c_upper_time: f64,
}

impl GaussianEnvelope {
    pub fn validate(&self) -> Result<()> {
        if self.c_lower_scale <= 0.0
            || self.c_lower_time <= 0.0
            || self.c_upper_scale <= 0.0
            || self.c_upper_time <= 0.0
        {
            return Err(PathdriftError::domain(
                "envelope constants must be positive",
            ));
        }
        Ok(())
    }
}

/// (lower, upper) of the bracket at (x, y, t). Coordinates are isotropic:
/// g_c means g_{cI}.
pub fn envelope_bracket(env: &GaussianEnvelope, x: &[f64], y: &[f64], t: f64) -> (f64, f64) {
    let r2: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
    let d = x.len() as f64;
    let g = |c: f64| -> f64 {
        (-0.5 * r2 / (c * t)).exp() / (2.0 * std::f64::consts::PI * c * t).powf(d / 2.0)
    };
    (
        env.c_lower_scale * g(env.c_lower_time),
        env.c_upper_scale * g(env.c_upper_time),
    )
}

/// Least-squares calibration of envelope constants from density estimates
/// at several y (fixed x, t): fits log p̂ against −|y−x|²/(2ct), then
/// scales the fitted curve so every sample lies inside with the given
/// relative margin. These constants are empirical, not certified.
pub fn calibrate_envelope(
    x: &[f64],
    samples: &[(Vec<f64>, f64)],
    t: f64,
    margin: f64,
) -> Result<GaussianEnvelope> {
    if samples.len() < 3 {
        return Err(PathdriftError::domain(
            "envelope calibration needs at least 3 points",
        ));
    }
    let d = x.len() as f64;
    let mut us = Vec::new();
    let mut logs = Vec::new();
    for (y, p) in samples {
        if *p <= 0.0 {
            continue;
        }
        let r2: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        us.push(r2 / (2.0 * t));
        logs.push(p.ln());
    }
    if us.len() < 3 {
        return Err(PathdriftError::domain(
            "too few positive estimates for calibration",
        ));
    }
    let (_, slope) = fit_line(&us, &logs);
    let c_time = if slope < 0.0 { -1.0 / slope } else { 1.0 };
    // scale factors from the extreme ratios p̂ / g_{ct}
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for (y, p) in samples {
        if *p <= 0.0 {
            continue;
        }
        let r2: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
        let g = (-0.5 * r2 / (c_time * t)).exp()
            / (2.0 * std::f64::consts::PI * c_time * t).powf(d / 2.0);
        let ratio = p / g;
        hi = hi.max(ratio);
        lo = lo.min(ratio);
    }
    let env = GaussianEnvelope {
        c_lower_scale: lo * (1.0 - margin),
        c_lower_time: c_time,
        c_upper_scale: hi * (1.0 + margin),
        c_upper_time: c_time,
    };
    env.validate()?;
    Ok(env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::girsanov::MethodTag;
    use crate::rng::SeedSpec;

    fn estimate(value: f64, stderr: f64) -> DensityEstimate {
        DensityEstimate {
            value,
            stderr,
            n_samples: 1000,
            method: MethodTag::GirsanovKernel,
            bandwidth: None,
            seed: SeedSpec::new(0, 0),
        }
    }

    #[test]
    fn peak_density_at_zero_drift_is_gaussian() {
        // β = 0, x = α: the drift vanishes and the center density is the
        // heat kernel itself
        let t = 0.7;
        let v = bangbang_peak_density(&[0.4], &[0.4], &[0.0], t).unwrap();
        assert!((v - gaussian_density_1d(t, 0.4, 0.4)).abs() < 1e-14);
        // and off-center the β → 0 value matches the Gaussian too
        let v = bangbang_peak_density(&[0.1], &[0.6], &[0.0], t).unwrap();
        assert!((v - gaussian_density_1d(t, 0.1, 0.6)).abs() < 1e-14);
    }

    #[test]
    fn tail_integral_matches_quadrature() {
        // adaptive-free check at (a, c) = (0.7, 0.4) with a fine rule
        let (a, c) = (0.7, 0.4);
        let numeric = crate::special::integrate_gl(a, a + 40.0, 400, |z| {
            z * (-(z - c) * (z - c) / 2.0).exp()
        });
        let closed = tail_moment_integral(a, c);
        assert!(
            ((closed - numeric) / closed).abs() < 1e-10,
            "closed={closed} numeric={numeric}"
        );
    }

    #[test]
    fn tail_integral_grid_including_negative_c() {
        for &a in &[0.0, 0.3, 0.8, 1.5, 3.0] {
            for &c in &[-1.5, -0.4, 0.0, 0.6, 2.0] {
                let numeric = crate::special::integrate_gl(a, a + 45.0, 600, |z| {
                    z * (-(z - c) * (z - c) / 2.0).exp()
                });
                let closed = tail_moment_integral(a, c);
                let denom = closed.abs().max(1e-12);
                assert!(
                    ((closed - numeric) / denom).abs() < 1e-8,
                    "a={a} c={c}: closed={closed} numeric={numeric}"
                );
            }
        }
    }

    #[test]
    fn peak_density_monotone_in_beta() {
        let t = 0.9;
        let mut prev = 0.0;
        for i in 0..8 {
            let beta = -1.0 + 0.35 * i as f64;
            let v = bangbang_peak_density(&[0.5], &[0.0], &[beta], t).unwrap();
            if i > 0 {
                assert!(v > prev, "not increasing at beta={beta}");
            }
            prev = v;
        }
    }

    #[test]
    fn verdict_degenerate_and_constructed_cases() {
        let t = 1.0;
        // b_sup = 0: bracket collapses; only the exact value passes
        let exact = bangbang_peak_density(&[0.0], &[0.4], &[0.0], t).unwrap();
        let (v, lo, hi) =
            sharp_bound_verdict(&estimate(exact, 0.0), &[0.0], &[0.4], t, 0.0).unwrap();
        assert_eq!(lo, hi);
        assert_eq!(v, Verdict::Pass);
        // a deliberately shifted estimate fails
        let (v, _, hi) =
            sharp_bound_verdict(&estimate(exact + 10.0 * hi, 1e-6), &[0.0], &[0.4], t, 0.5)
                .unwrap();
        assert!(hi < exact + 10.0 * hi);
        assert_eq!(v, Verdict::Fail);
    }

    #[test]
    fn ou_limits() {
        // κ → 0 recovers the heat kernel
        let a = ou_density(0.3, -0.2, 0.8, 1e-8, 1.0).unwrap();
        let b = gaussian_density_1d(0.8, 0.3, -0.2);
        assert!((a - b).abs() < 1e-8);
        // long-time variance σ²/(2κ) = 0.5 at κ = σ = 1
        let (_, var) = ou_moments(1.0, 50.0, 1.0, 1.0);
        assert!((var - 0.5).abs() < 1e-10);
    }

    #[test]
    fn ou_integrates_to_one() {
        let total = crate::special::integrate_gl(-12.0, 12.0, 400, |y| {
            ou_density(1.0, y, 0.5, 1.0, 1.0).unwrap()
        });
        assert!((total - 1.0).abs() < 1e-8, "total={total}");
    }

    #[test]
    fn ou_chapman_kolmogorov() {
        // p_{t1+t2}(x, y) = ∫ p_{t1}(x, z) p_{t2}(z, y) dz
        let (x, y, t1, t2, kappa, sigma) = (0.4, -0.3, 0.35, 0.55, 1.2, 0.9);
        let direct = ou_density(x, y, t1 + t2, kappa, sigma).unwrap();
        let conv = crate::special::integrate_gl(-10.0, 10.0, 600, |z| {
            ou_density(x, z, t1, kappa, sigma).unwrap()
                * ou_density(z, y, t2, kappa, sigma).unwrap()
        });
        assert!((direct - conv).abs() < 1e-6, "direct={direct} conv={conv}");
    }

    #[test]
    fn envelope_bracket_basics() {
        let env = GaussianEnvelope {
            c_lower_scale: 1.0,
            c_lower_time: 1.0,
            c_upper_scale: 1.0,
            c_upper_time: 1.0,
        };
        let (lo, hi) = envelope_bracket(&env, &[0.2], &[0.9], 0.7);
        assert_eq!(lo, hi);
        assert!((lo - gaussian_density_1d(0.7, 0.2, 0.9)).abs() < 1e-15);

        // at x = y the width ratio is (C₊/C₋)(c₋/c₊)^{d/2}
        let env = GaussianEnvelope {
            c_lower_scale: 0.5,
            c_lower_time: 0.8,
            c_upper_scale: 2.0,
            c_upper_time: 1.6,
        };
        let (lo, hi) = envelope_bracket(&env, &[0.3], &[0.3], 1.0);
        let expected = (2.0 / 0.5) * (0.8f64 / 1.6).powf(0.5);
        assert!((hi / lo - expected).abs() < 1e-12);
    }

    #[test]
    fn envelope_monotone_in_scales() {
        let base = GaussianEnvelope {
            c_lower_scale: 0.5,
            c_lower_time: 0.8,
            c_upper_scale: 2.0,
            c_upper_time: 1.6,
        };
        let bigger = GaussianEnvelope {
            c_upper_scale: 3.0,
            ..base
        };
        let (_, hi1) = envelope_bracket(&base, &[0.1], &[0.7], 0.5);
        let (_, hi2) = envelope_bracket(&bigger, &[0.1], &[0.7], 0.5);
        assert!(hi2 > hi1);
    }

    #[test]
    fn calibration_brackets_its_own_samples() {
        // synthetic Gaussian data: p = g_{0.9 t}, slight noise-free case
        let t = 1.0;
        let ys: Vec<f64> = (0..9).map(|i| -1.0 + 0.25 * i as f64).collect();
        let samples: Vec<(Vec<f64>, f64)> = ys
            .iter()
            .map(|&y| (vec![y], gaussian_density_1d(0.9 * t, 0.0, y)))
            .collect();
        let env = calibrate_envelope(&[0.0], &samples, t, 0.05).unwrap();
        for (y, p) in &samples {
            let (lo, hi) = envelope_bracket(&env, &[0.0], y, t);
            assert!(lo <= *p && *p <= hi, "y={y:?} p={p} outside [{lo}, {hi}]");
        }
    }
}
