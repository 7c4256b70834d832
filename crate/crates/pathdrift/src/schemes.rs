//! Time-stepping schemes.
//!
//! - Euler–Maruyama with path-dependent drift:
//!   X_{k+1} = X_k + b(t_k, X^{(0..k)})·Δt + σ(t_k, X_k)·ΔW_k;
//! - the same scheme with the discretized functional A^(n,m) (time lookups
//!   floored to the scheme grid, delay list truncated at m);
//! - the one-step tamed scheme for super-linear coefficients on (t−ε, t]:
//!   b_ε(s,x) = b(s,x)/(1 + ε^{1/2}|x|^ℓ), σ_ε(x) = σ(x)/(1 + ε^{1/2}|x|^{ℓ/2}).
//!
//! The exact solution on [0, t−ε] is replaced by a fine per-step-tamed
//! Euler proxy driven by the same noise; the measured ε-slope is valid
//! while the fine step is ≪ ε (enforced below).

use crate::error::{PathdriftError, Result};
use crate::model::{Drift, DriftWalker, PathDependentModel};
use crate::rng::{uniform_grid, DiscretePath, PathRng, PathView, SeedSpec};
use crate::stats::{parallel_fold, Aggregate};

/// Parameters of the taming family.
#[derive(Clone, Copy, Debug)]
pub struct TamedCoefficients {
    /// Local-Lipschitz exponent ℓ ∈ (0, (p0−2)/4].
    pub ell: f64,
    /// Taming parameter ε ∈ (0, 1).
    pub epsilon: f64,
    pub p0: f64,
    pub p1: f64,
    /// Growth constant K of the Khasminskii condition.
    pub k: f64,
}

impl TamedCoefficients {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(PathdriftError::domain("epsilon must lie in (0,1)"));
        }
        if self.p0 <= 2.0 || self.p1 <= 2.0 {
            return Err(PathdriftError::domain("p0, p1 must exceed 2"));
        }
        if !(self.ell > 0.0 && self.ell <= (self.p0 - 2.0) / 4.0) {
            return Err(PathdriftError::domain("ell must lie in (0, (p0-2)/4]"));
        }
        Ok(())
    }
}

/// b_ε(s, x) = b(s, x) / (1 + ε^{1/2} |x|^ℓ)
pub fn tame_drift(b_val: f64, x: f64, ell: f64, epsilon: f64) -> f64 {
    b_val / (1.0 + epsilon.sqrt() * x.abs().powf(ell))
}

/// σ_ε(x) = σ(x) / (1 + ε^{1/2} |x|^{ℓ/2})
pub fn tame_diffusion(sigma_val: f64, x: f64, ell: f64, epsilon: f64) -> f64 {
    sigma_val / (1.0 + epsilon.sqrt() * x.abs().powf(0.5 * ell))
}

/// Euler–Maruyama on the given grid; stores the driving increments.
pub fn euler_maruyama(
    model: &PathDependentModel,
    x0: &[f64],
    grid: &[f64],
    seed: SeedSpec,
) -> Result<DiscretePath> {
    em_with_truncation(model, x0, grid, None, seed)
}

/// Path-dependent Euler–Maruyama with the discretized functional A^(n,m):
/// uniform grid of n steps over [0, horizon], delay entries beyond m read
/// as zero. On its own grid the time-flooring of A^(n,m) coincides with
/// discrete node evaluation, so only the truncation is explicit here.
pub fn em_path_dependent(
    model: &PathDependentModel,
    x0: &[f64],
    horizon: f64,
    n: usize,
    m: usize,
    seed: SeedSpec,
) -> Result<DiscretePath> {
    let grid = uniform_grid(horizon, n)?;
    em_with_truncation(model, x0, &grid, Some(m), seed)
}

/// Euler–Maruyama driven by caller-supplied Brownian increments (one
/// d-vector per step, flat layout). The workhorse for coupling schemes at
/// different resolutions on one noise realization: aggregate the fine
/// increments over coarse cells and feed both schemes.
pub fn euler_maruyama_with_noise(
    model: &PathDependentModel,
    x0: &[f64],
    grid: &[f64],
    increments: &[f64],
    truncate_m: Option<usize>,
) -> Result<DiscretePath> {
    em_core(model, x0, grid, truncate_m, NoiseSource::Given(increments))
}

fn em_with_truncation(
    model: &PathDependentModel,
    x0: &[f64],
    grid: &[f64],
    truncate_m: Option<usize>,
    seed: SeedSpec,
) -> Result<DiscretePath> {
    em_core(model, x0, grid, truncate_m, NoiseSource::Seeded(seed))
}

enum NoiseSource<'a> {
    Seeded(SeedSpec),
    Given(&'a [f64]),
}

fn em_core(
    model: &PathDependentModel,
    x0: &[f64],
    grid: &[f64],
    truncate_m: Option<usize>,
    noise: NoiseSource<'_>,
) -> Result<DiscretePath> {
    let dim = model.dim;
    if x0.len() != dim {
        return Err(PathdriftError::domain("x0 dimension mismatch"));
    }
    let n_nodes = grid.len();
    let mut rng = match noise {
        NoiseSource::Seeded(seed) => Some(PathRng::new(seed)),
        NoiseSource::Given(inc) => {
            if inc.len() != n_nodes.saturating_sub(1) * dim {
                return Err(PathdriftError::domain(
                    "increment count does not match the grid",
                ));
            }
            None
        }
    };
    let mut states = vec![0.0; n_nodes * dim];
    let mut increments = vec![0.0; n_nodes.saturating_sub(1) * dim];
    states[..dim].copy_from_slice(x0);

    let mut walker = DriftWalker::new(model, truncate_m);
    let mut b = vec![0.0; dim];
    let mut dw = vec![0.0; dim];
    // constant-diffusion matrices are formed once, outside the loop
    let sigma_const = if model.diffusion.is_constant() {
        Some(model.diffusion.matrix_at(dim, x0))
    } else {
        None
    };

    for k in 0..n_nodes - 1 {
        let dt = grid[k + 1] - grid[k];
        // the walker reads the path as it is being built
        let view = PathView {
            dim,
            grid,
            states: &states,
        };
        walker
            .drift_at(view, k, &mut b)
            .map_err(|e| PathdriftError::numeric(format!("drift failure at step {k}: {e}")))?;
        match (&mut rng, &noise) {
            (Some(rng), _) => {
                let sd = dt.sqrt();
                for i in 0..dim {
                    dw[i] = sd * rng.normal();
                    increments[k * dim + i] = dw[i];
                }
            }
            (None, NoiseSource::Given(inc)) => {
                for i in 0..dim {
                    dw[i] = inc[k * dim + i];
                    increments[k * dim + i] = dw[i];
                }
            }
            (None, NoiseSource::Seeded(_)) => unreachable!(),
        }
        if dim == 1 {
            let s = match &sigma_const {
                Some(m) => m.at(0, 0),
                None => model.diffusion.scalar_at(states[k]),
            };
            let next = states[k] + b[0] * dt + s * dw[0];
            if !next.is_finite() {
                return Err(PathdriftError::numeric(format!(
                    "non-finite state at step {}",
                    k + 1
                )));
            }
            states[k + 1] = next;
        } else {
            let sigma = match &sigma_const {
                Some(m) => m.clone(),
                None => model
                    .diffusion
                    .matrix_at(dim, &states[k * dim..(k + 1) * dim]),
            };
            let sdw = sigma.mul_vec(&dw);
            for i in 0..dim {
                let next = states[k * dim + i] + b[i] * dt + sdw[i];
                if !next.is_finite() {
                    return Err(PathdriftError::numeric(format!(
                        "non-finite state at step {}",
                        k + 1
                    )));
                }
                states[(k + 1) * dim + i] = next;
            }
        }
    }
    DiscretePath::new(dim, grid.to_vec(), states, Some(increments))
}

/// Coupled pair (fine proxy X_t, one-step tamed X_t^(ε)) on one noise path;
/// d = 1 only. The proxy is a fine per-step-tamed Euler scheme; the tamed
/// terminal is X_{t−ε} + b_ε(t−ε, X_{t−ε})·ε + σ_ε(X_{t−ε})·(W_t − W_{t−ε})
/// with both legs consuming the identical increments.
#[allow(clippy::too_many_arguments)]
pub fn one_step_tamed_terminal(
    model: &PathDependentModel,
    x0: f64,
    t: f64,
    epsilon: f64,
    n_fine_per_unit: usize,
    ell: f64,
    seed: SeedSpec,
) -> Result<(f64, f64)> {
    let pair = one_step_tamed_multi(model, x0, t, &[epsilon], n_fine_per_unit, ell, seed)?;
    Ok((pair.proxy_terminal, pair.tamed_terminals[0]))
}

/// The fine proxy at t plus one-step tamed terminals for several ε values,
/// all coupled on the same fine path.
pub struct TamedCouple {
    pub proxy_terminal: f64,
    pub tamed_terminals: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn one_step_tamed_multi(
    model: &PathDependentModel,
    x0: f64,
    t: f64,
    epsilons: &[f64],
    n_fine_per_unit: usize,
    ell: f64,
    seed: SeedSpec,
) -> Result<TamedCouple> {
    if model.dim != 1 {
        return Err(PathdriftError::unsupported(
            "one-step tamed scheme is implemented for d = 1",
        ));
    }
    for &eps in epsilons {
        if eps >= t {
            return Err(PathdriftError::domain("epsilon must be smaller than t"));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(PathdriftError::domain("epsilon must lie in (0,1)"));
        }
    }
    let n_steps = ((t * n_fine_per_unit as f64).round() as usize).max(1);
    let dt = t / n_steps as f64;
    let eps_min = epsilons.iter().cloned().fold(f64::INFINITY, f64::min);
    if dt > eps_min / 32.0 {
        return Err(PathdriftError::domain(format!(
            "fine step {dt:e} too coarse for epsilon {eps_min:e}; need dt <= eps/32"
        )));
    }

    let mut rng = PathRng::new(seed);
    let sqrt_dt = dt.sqrt();
    // The proxy is tamed per step only when the drift is super-linear
    // (where plain Euler can explode); for Lipschitz-class drifts plain
    // Euler is the more faithful stand-in for the exact solution.
    let tame_proxy = model.drift.is_super_linear();
    let mut xs = Vec::with_capacity(n_steps + 1);
    let mut ws = Vec::with_capacity(n_steps + 1);
    let mut x = x0;
    let mut w = 0.0;
    xs.push(x);
    ws.push(w);
    let drift_at = |state: f64| -> Option<f64> {
        match &model.drift {
            Drift::Heston32 { lambda, mu } => Some(lambda * state * (mu - state.abs())),
            Drift::Zero => Some(0.0),
            Drift::Constant { value } => Some(value[0]),
            Drift::Linear { gain } => Some(gain * state),
            Drift::Tanh { scale } => Some(scale * state.tanh()),
            _ => None,
        }
    };
    for _ in 0..n_steps {
        let b = drift_at(x).ok_or_else(|| {
            PathdriftError::unsupported("one-step tamed scheme needs a Markovian scalar drift")
        })?;
        let s = model.diffusion.scalar_at(x);
        let dwk = sqrt_dt * rng.normal();
        if tame_proxy {
            // per-step taming with the step size as the taming parameter
            x += tame_drift(b, x, ell, dt) * dt + tame_diffusion(s, x, ell, dt) * dwk;
        } else {
            x += b * dt + s * dwk;
        }
        w += dwk;
        if !x.is_finite() {
            return Err(PathdriftError::numeric("fine proxy exploded"));
        }
        xs.push(x);
        ws.push(w);
    }

    let mut tamed = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        // index of t − ε on the fine grid (rounded to the nearest node)
        let k = ((t - eps) / dt).round() as usize;
        let x_m = xs[k];
        let dw = ws[n_steps] - ws[k];
        let b = drift_at(x_m).expect("checked along the proxy");
        let s = model.diffusion.scalar_at(x_m);
        let step_len = t - k as f64 * dt;
        let x_eps =
            x_m + tame_drift(b, x_m, ell, eps) * step_len + tame_diffusion(s, x_m, ell, eps) * dw;
        tamed.push(x_eps);
    }
    Ok(TamedCouple {
        proxy_terminal: xs[n_steps],
        tamed_terminals: tamed,
    })
}

/// One row of a strong-error sweep.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub epsilon: f64,
    /// Coupled estimate of E|X_t − X_t^(ε)|², NaN if the run blew up.
    pub mean_square_error: f64,
    pub stderr: f64,
    pub n: u64,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Fitted slope of log mse against log ε over the finite rows.
    pub fitted_slope: f64,
}

/// Coupled mean-square error E|X_t − X_t^(ε)|² per ε, with the log-log
/// slope across ε. Replications share nothing; each owns its stream.
#[allow(clippy::too_many_arguments)]
pub fn strong_error_sweep(
    model: &PathDependentModel,
    x0: f64,
    t: f64,
    epsilons: &[f64],
    n_replications: u64,
    n_fine_per_unit: usize,
    ell: f64,
    seed: SeedSpec,
) -> Result<SweepResult> {
    if epsilons.is_empty() {
        return Err(PathdriftError::domain("empty epsilon list"));
    }
    if n_replications < 2 {
        return Err(PathdriftError::domain("need at least 2 replications"));
    }
    let n_eps = epsilons.len();
    let aggs = parallel_fold(
        n_replications,
        vec![Aggregate::new(); n_eps],
        |i, accs| {
            match one_step_tamed_multi(model, x0, t, epsilons, n_fine_per_unit, ell, seed.offset(i))
            {
                Ok(couple) => {
                    for (j, acc) in accs.iter_mut().enumerate() {
                        let d = couple.proxy_terminal - couple.tamed_terminals[j];
                        acc.push(d * d);
                    }
                }
                Err(_) => {
                    // numeric blow-up reported per-row via NaN, not fatal
                    for acc in accs.iter_mut() {
                        acc.push(f64::NAN);
                    }
                }
            }
        },
        |total, part| {
            for (t, p) in total.iter_mut().zip(part.iter()) {
                t.merge(p);
            }
        },
    );
    let rows: Vec<SweepRow> = epsilons
        .iter()
        .zip(aggs.iter())
        .map(|(&epsilon, agg)| SweepRow {
            epsilon,
            mean_square_error: agg.mean(),
            stderr: agg.stderr().unwrap_or(f64::NAN),
            n: agg.n,
        })
        .collect();
    let mut lx = Vec::new();
    let mut ly = Vec::new();
    for row in &rows {
        if row.mean_square_error.is_finite() && row.mean_square_error > 0.0 {
            lx.push(row.epsilon.ln());
            ly.push(row.mean_square_error.ln());
        }
    }
    let fitted_slope = if lx.len() >= 2 {
        crate::stats::fit_line(&lx, &ly).1
    } else {
        f64::NAN
    };
    Ok(SweepResult { rows, fitted_slope })
}
