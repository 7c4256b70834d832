//! Maruyama–Girsanov weights and the density estimators built on them.
//!
//! For the driftless process dY = σ(t, Y) dW started at x, the weight
//!
//!   Z_t(q, Y) = exp( Σ_j ∫ q μ^j dW^j − ½ ∫ |qμ|² ds ),   μ = σ⁻¹ b,
//!
//! is a true martingale under a local Novikov condition: it suffices that
//! the partition mesh obey Δt ≤ 1/(2 a̲ |qK|² ĉ₊ T). Expectations under
//! the SDE law become driftless expectations weighted by Z, and the
//! density factorizes as p_t(x,y) = q(0,x;t,y)·E[Z_t | Y_t = y].
//!
//! Two estimators:
//! - `density_girsanov_kernel`: the conditional expectation has no
//!   constructive form, so it is approximated by product-Gaussian kernel
//!   smoothing at a reported bandwidth (stochastic integrals by left-point
//!   Itô sums on the simulation grid);
//! - `density_first_order`: for constant σ the kernel q is an explicit
//!   Gaussian and p_t(x,y) = g_{ta}(x,y) + ∫₀ᵗ E[⟨∇_x g_{(t−s)a}(X_s,y),
//!   b(s,X)⟩] ds; the (t−s)^{−1/2} endpoint singularity is removed by the
//!   substitution s = t(1−u²) before Gauss–Legendre quadrature.

use serde::Serialize;

use crate::error::{PathdriftError, Result};
use crate::linalg::SquareMat;
use crate::model::{DriftWalker, PathDependentModel, SublinearEntry};
use crate::rng::{uniform_grid, DiscretePath, SeedSpec};
use crate::schemes::euler_maruyama;
use crate::special::gauss_legendre;
use crate::stats::{parallel_fold, Aggregate};

/// Estimator identity carried by every density figure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodTag {
    GirsanovKernel,
    FirstOrder,
    Unbiased,
    EmKernel,
}

impl std::fmt::Display for MethodTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MethodTag::GirsanovKernel => write!(f, "girsanov-kernel"),
            MethodTag::FirstOrder => write!(f, "first-order"),
            MethodTag::Unbiased => write!(f, "unbiased"),
            MethodTag::EmKernel => write!(f, "em-kernel"),
        }
    }
}

/// A density point estimate with its provenance.
#[derive(Clone, Debug)]
pub struct DensityEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub method: MethodTag,
    pub bandwidth: Option<f64>,
    pub seed: SeedSpec,
}

/// Running Girsanov exposure along one path.
#[derive(Clone, Copy, Debug, Default)]
pub struct GirsanovAccumulator {
    pub log_weight: f64,
    pub q: f64,
    pub steps: u64,
}

impl GirsanovAccumulator {
    pub fn new(q: f64) -> Self {
        GirsanovAccumulator {
            log_weight: 0.0,
            q,
            steps: 0,
        }
    }

    /// Adds one left-point Itô term: qμ·ΔW − ½|qμ|²Δt.
    pub fn push(&mut self, mu: &[f64], dw: &[f64], dt: f64) {
        let mut drift_dot = 0.0;
        let mut mu2 = 0.0;
        for (m, w) in mu.iter().zip(dw.iter()) {
            drift_dot += m * w;
            mu2 += m * m;
        }
        self.log_weight += self.q * drift_dot - 0.5 * self.q * self.q * mu2 * dt;
        self.steps += 1;
    }

    pub fn weight(&self) -> f64 {
        self.log_weight.exp()
    }
}

/// Z_t(q) along a stored driftless path carrying its increments; μ is
/// evaluated on the path prefix at each left endpoint.
pub fn girsanov_weight(model: &PathDependentModel, path: &DiscretePath, q: f64) -> Result<f64> {
    if !path.has_increments() {
        return Err(PathdriftError::domain(
            "girsanov weight needs the driving increments",
        ));
    }
    let dim = model.dim;
    let mut walker = DriftWalker::new(model, None);
    let mut acc = GirsanovAccumulator::new(q);
    let mut b = vec![0.0; dim];
    let mut mu = vec![0.0; dim];
    let sigma_solver = SigmaSolver::new(model)?;
    for k in 0..path.len() - 1 {
        let dt = path.time(k + 1) - path.time(k);
        walker.drift_at(path.view(), k, &mut b)?;
        sigma_solver.mu_at(model, path.state(k), &b, &mut mu)?;
        acc.push(&mu, path.increment(k).unwrap(), dt);
    }
    Ok(acc.weight())
}

/// Solves μ = σ⁻¹ b, reusing the factorization when σ is constant.
enum SigmaSolver {
    ConstantScalar(f64),
    Constant(crate::linalg::Cholesky, SquareMat),
    Pointwise,
}

impl SigmaSolver {
    fn new(model: &PathDependentModel) -> Result<Self> {
        match &model.diffusion {
            crate::model::Diffusion::Constant { matrix } => {
                if model.dim == 1 {
                    let s = matrix[0];
                    if s == 0.0 {
                        return Err(PathdriftError::numeric("singular diffusion"));
                    }
                    Ok(SigmaSolver::ConstantScalar(s))
                } else {
                    let m = SquareMat::from_rows(model.dim, matrix.clone())?;
                    // solve σ μ = b through the normal equations of σσᵀ when
                    // σ is not symmetric; for the symmetric case Cholesky of
                    // σ itself would do, but σσᵀ works uniformly
                    let a = m.mul_transpose();
                    let ch = a
                        .cholesky()
                        .map_err(|_| PathdriftError::numeric("singular diffusion matrix"))?;
                    Ok(SigmaSolver::Constant(ch, m))
                }
            }
            crate::model::Diffusion::Zero => Err(PathdriftError::numeric("singular diffusion")),
            _ => Ok(SigmaSolver::Pointwise),
        }
    }

    fn mu_at(
        &self,
        model: &PathDependentModel,
        x: &[f64],
        b: &[f64],
        mu: &mut [f64],
    ) -> Result<()> {
        match self {
            SigmaSolver::ConstantScalar(s) => {
                mu[0] = b[0] / s;
                Ok(())
            }
            SigmaSolver::Constant(ch, sigma) => {
                // μ = σᵀ (σσᵀ)⁻¹ b solves σ μ = b with minimal norm; for
                // invertible σ this is exactly σ⁻¹ b
                let y = ch.solve(b);
                for (i, m) in mu.iter_mut().enumerate() {
                    *m = y
                        .iter()
                        .enumerate()
                        .map(|(j, yj)| sigma.at(j, i) * yj)
                        .sum();
                }
                Ok(())
            }
            SigmaSolver::Pointwise => {
                let s = model.diffusion.scalar_at(x[0]);
                if s == 0.0 || !s.is_finite() {
                    return Err(PathdriftError::numeric(format!(
                        "singular diffusion at x={}",
                        x[0]
                    )));
                }
                mu[0] = b[0] / s;
                Ok(())
            }
        }
    }
}

/// Simulates the driftless process Y on the grid: exactly (σ·increments)
/// when σ is constant, by Euler–Maruyama otherwise.
pub fn driftless_path(
    model: &PathDependentModel,
    x0: &[f64],
    grid: &[f64],
    seed: SeedSpec,
) -> Result<DiscretePath> {
    if model.diffusion.is_constant() {
        let sigma = model.diffusion.matrix_at(model.dim, x0);
        crate::rng::scaled_brownian_path(x0, &sigma, grid, seed)
    } else {
        let driftless = PathDependentModel {
            drift: crate::model::Drift::Zero,
            ..model.clone()
        };
        euler_maruyama(&driftless, x0, grid, seed)
    }
}

/// Monte Carlo check that E[Z_t(1)] = 1.
#[derive(Clone, Copy, Debug)]
pub struct MartingaleCheck {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub pass: bool,
}

pub fn martingale_check(
    model: &PathDependentModel,
    x0: &[f64],
    t: f64,
    n_steps: usize,
    n_samples: u64,
    seed: SeedSpec,
) -> Result<MartingaleCheck> {
    let grid = uniform_grid(t, n_steps)?;
    #[derive(Clone, Default)]
    struct Acc {
        agg: Aggregate,
        error: Option<String>,
    }
    let acc = parallel_fold(
        n_samples,
        Acc::default(),
        |i, acc| {
            if acc.error.is_some() {
                return;
            }
            match driftless_path(model, x0, &grid, seed.offset(i))
                .and_then(|y| girsanov_weight(model, &y, 1.0))
            {
                Ok(z) => acc.agg.push(z),
                Err(e) => acc.error = Some(e.to_string()),
            }
        },
        |total, part| {
            if total.error.is_none() {
                if let Some(e) = part.error {
                    total.error = Some(e);
                }
            }
            total.agg.merge(&part.agg);
        },
    );
    if let Some(e) = acc.error {
        return Err(PathdriftError::numeric(e));
    }
    let mean = acc.agg.mean();
    let stderr = acc.agg.stderr().unwrap_or(0.0);
    Ok(MartingaleCheck {
        mean,
        stderr,
        n: acc.agg.n,
        pass: (mean - 1.0).abs() <= 3.0 * stderr,
    })
}

/// Coarsest uniform partition of [0, T] whose mesh satisfies the local
/// Novikov bound Δt ≤ 1/(2 a̲ |qK|² ĉ₊ T). A single interval when the
/// bound already covers T.
pub fn novikov_partition(
    horizon: f64,
    q: f64,
    k_growth: f64,
    a_lower: f64,
    c_hat_plus: f64,
) -> Result<Vec<f64>> {
    if horizon <= 0.0 || a_lower <= 0.0 || c_hat_plus <= 0.0 {
        return Err(PathdriftError::domain(
            "novikov partition needs positive constants",
        ));
    }
    let qk = (q * k_growth).abs();
    if qk == 0.0 {
        return Ok(vec![0.0, horizon]);
    }
    let mesh_bound = 1.0 / (2.0 * a_lower * qk * qk * c_hat_plus * horizon);
    if mesh_bound >= horizon {
        return Ok(vec![0.0, horizon]);
    }
    let n = (horizon / mesh_bound).ceil() as usize;
    uniform_grid(horizon, n)
}

/// tᵣ = min{T, 1/(2K √(3 a̲ (2r²−r) ĉ₊))}; T itself when 2r²−r ≤ 0 (the
/// moment bound is then vacuously 1 on all of [0, T]).
pub fn t_threshold(r: f64, k_growth: f64, a_lower: f64, c_hat_plus: f64, horizon: f64) -> f64 {
    let w = 2.0 * r * r - r;
    if w <= 0.0 {
        return horizon;
    }
    horizon.min(1.0 / (2.0 * k_growth * (3.0 * a_lower * w * c_hat_plus).sqrt()))
}

/// Analytic upper bound on sup_{s≤t} E[Z_s(1)^r]:
///
/// - 1                                  when 2r²−r ≤ 0;
/// - 2^{1+d/4} Ĉ₊ e^{(3/2)K² a̲ (2r²−r) t (1+|x|²)}   when t ≤ tᵣ;
/// - 2^{1+d/4} (T/tᵣ)^{d/4} Ĉ₊^{1/2}
///   e^{(3/2) a̲ (2r²−r) K_T(δ)² t} e^{|x|²/(8 ĉ₊ T)}  when t > tᵣ,
///   with δ chosen from the sub-linear table as the largest tabulated
///   value ≤ δ_{r,T} = 1/(2T √(3 ĉ₊ a̲ (2r²−r))); smaller δ keeps the
///   bound valid (K_T(δ) only grows), so table lookups stay conservative.
#[allow(clippy::too_many_arguments)]
pub fn z_moment_bound(
    r: f64,
    t: f64,
    x: &[f64],
    k_growth: f64,
    a_lower: f64,
    c_hat_plus: f64,
    c_cap_plus: f64,
    horizon: f64,
    sublinear: Option<&[SublinearEntry]>,
) -> Result<f64> {
    if k_growth <= 0.0 || a_lower <= 0.0 || c_hat_plus <= 0.0 || c_cap_plus <= 0.0 {
        return Err(PathdriftError::domain(
            "moment bound needs positive constants",
        ));
    }
    let w = 2.0 * r * r - r;
    if w <= 0.0 {
        return Ok(1.0);
    }
    let d = x.len() as f64;
    let x2: f64 = x.iter().map(|v| v * v).sum();
    let t_r = t_threshold(r, k_growth, a_lower, c_hat_plus, horizon);
    if t <= t_r {
        return Ok(2.0f64.powf(1.0 + d / 4.0)
            * c_cap_plus
            * (1.5 * k_growth * k_growth * a_lower * w * t * (1.0 + x2)).exp());
    }
    let table = sublinear
        .filter(|t| !t.is_empty())
        .ok_or_else(|| PathdriftError::domain("t > t_r case needs a sub-linear growth table"))?;
    let delta_target = 1.0 / (2.0 * horizon * (3.0 * c_hat_plus * a_lower * w).sqrt());
    let entry = table
        .iter()
        .filter(|e| e.delta <= delta_target)
        .max_by(|a, b| a.delta.partial_cmp(&b.delta).unwrap())
        .ok_or_else(|| {
            PathdriftError::domain(format!(
                "sub-linear table has no entry with delta ≤ {delta_target:.3e}"
            ))
        })?;
    let kd = entry.k_delta;
    Ok(2.0f64.powf(1.0 + d / 4.0)
        * (horizon / t_r).powf(d / 4.0)
        * c_cap_plus.sqrt()
        * (1.5 * a_lower * w * kd * kd * t).exp()
        * (x2 / (8.0 * c_hat_plus * horizon)).exp())
}

/// Silverman-order default bandwidth (t/N)^{1/(d+4)}.
pub fn default_bandwidth(t: f64, n_samples: u64, dim: usize) -> f64 {
    (t / n_samples as f64).powf(1.0 / (dim as f64 + 4.0))
}

/// Product-Gaussian kernel of bandwidth h at offset u.
fn product_kernel(h: f64, u: &[f64]) -> f64 {
    let mut k = 1.0;
    let norm = 1.0 / (h * (2.0 * std::f64::consts::PI).sqrt());
    for ui in u {
        k *= norm * (-0.5 * ui * ui / (h * h)).exp();
    }
    k
}

/// Girsanov-kernel density estimate at one target point.
#[allow(clippy::too_many_arguments)]
pub fn density_girsanov_kernel(
    model: &PathDependentModel,
    x: &[f64],
    y: &[f64],
    t: f64,
    bandwidth: f64,
    n_steps: usize,
    n_samples: u64,
    seed: SeedSpec,
) -> Result<DensityEstimate> {
    let v = density_girsanov_kernel_multi(
        model,
        x,
        std::slice::from_ref(&y.to_vec()),
        t,
        bandwidth,
        n_steps,
        n_samples,
        seed,
    )?;
    Ok(v.into_iter().next().unwrap())
}

/// Kernel estimates at several target points sharing one set of weighted
/// driftless paths: estimate(y) = mean over paths of K_h(Y_t − y)·Z_t(1).
#[allow(clippy::too_many_arguments)]
pub fn density_girsanov_kernel_multi(
    model: &PathDependentModel,
    x: &[f64],
    ys: &[Vec<f64>],
    t: f64,
    bandwidth: f64,
    n_steps: usize,
    n_samples: u64,
    seed: SeedSpec,
) -> Result<Vec<DensityEstimate>> {
    if bandwidth <= 0.0 {
        return Err(PathdriftError::domain("bandwidth must be positive"));
    }
    let grid = uniform_grid(t, n_steps)?;
    let n_targets = ys.len();
    #[derive(Clone, Default)]
    struct Acc {
        aggs: Vec<Aggregate>,
        error: Option<String>,
    }
    let init = Acc {
        aggs: vec![Aggregate::new(); n_targets],
        error: None,
    };
    let acc = parallel_fold(
        n_samples,
        init,
        |i, acc| {
            if acc.error.is_some() {
                return;
            }
            let mut run = || -> Result<()> {
                let path = driftless_path(model, x, &grid, seed.offset(i))?;
                let z = girsanov_weight(model, &path, 1.0)?;
                let terminal = path.terminal();
                let mut u = vec![0.0; terminal.len()];
                for (j, y) in ys.iter().enumerate() {
                    for (c, (ti, yi)) in u.iter_mut().zip(terminal.iter().zip(y.iter())) {
                        *c = ti - yi;
                    }
                    acc.aggs[j].push(product_kernel(bandwidth, &u) * z);
                }
                Ok(())
            };
            if let Err(e) = run() {
                acc.error = Some(e.to_string());
            }
        },
        |total, part| {
            if total.error.is_none() {
                if let Some(e) = part.error {
                    total.error = Some(e);
                }
            }
            for (t, p) in total.aggs.iter_mut().zip(part.aggs.iter()) {
                t.merge(p);
            }
        },
    );
    if let Some(e) = acc.error {
        return Err(PathdriftError::numeric(e));
    }
    Ok(acc
        .aggs
        .into_iter()
        .map(|agg| DensityEstimate {
            value: agg.mean(),
            stderr: agg.stderr().unwrap_or(0.0),
            n_samples: agg.n,
            method: MethodTag::GirsanovKernel,
            bandwidth: Some(bandwidth),
            seed,
        })
        .collect())
}

/// Plain kernel density on simulated endpoints of the SDE itself (no
/// change of measure). The workhorse cross-check for models where the
/// Girsanov route is awkward.
#[allow(clippy::too_many_arguments)]
pub fn density_em_kernel(
    model: &PathDependentModel,
    x: &[f64],
    y: &[f64],
    t: f64,
    bandwidth: f64,
    n_steps: usize,
    n_samples: u64,
    seed: SeedSpec,
) -> Result<DensityEstimate> {
    if bandwidth <= 0.0 {
        return Err(PathdriftError::domain("bandwidth must be positive"));
    }
    let grid = uniform_grid(t, n_steps)?;
    #[derive(Clone, Default)]
    struct Acc {
        agg: Aggregate,
        error: Option<String>,
    }
    let acc = parallel_fold(
        n_samples,
        Acc::default(),
        |i, acc| {
            if acc.error.is_some() {
                return;
            }
            match euler_maruyama(model, x, &grid, seed.offset(i)) {
                Ok(path) => {
                    let u: Vec<f64> = path
                        .terminal()
                        .iter()
                        .zip(y.iter())
                        .map(|(a, b)| a - b)
                        .collect();
                    acc.agg.push(product_kernel(bandwidth, &u));
                }
                Err(e) => acc.error = Some(e.to_string()),
            }
        },
        |total, part| {
            if total.error.is_none() {
                if let Some(e) = part.error {
                    total.error = Some(e);
                }
            }
            total.agg.merge(&part.agg);
        },
    );
    if let Some(e) = acc.error {
        return Err(PathdriftError::numeric(e));
    }
    Ok(DensityEstimate {
        value: acc.agg.mean(),
        stderr: acc.agg.stderr().unwrap_or(0.0),
        n_samples: acc.agg.n,
        method: MethodTag::EmKernel,
        bandwidth: Some(bandwidth),
        seed,
    })
}

/// First-order representation for constant σ: Gaussian leading term plus
/// the time quadrature of the drift term along full-SDE paths.
#[allow(clippy::too_many_arguments)]
pub fn density_first_order(
    model: &PathDependentModel,
    x: &[f64],
    y: &[f64],
    t: f64,
    quad_nodes: usize,
    n_steps: usize,
    n_samples: u64,
    seed: SeedSpec,
) -> Result<DensityEstimate> {
    if !model.diffusion.is_constant() {
        return Err(PathdriftError::unsupported(
            "the first-order representation needs constant diffusion",
        ));
    }
    if quad_nodes < 2 {
        return Err(PathdriftError::domain("need at least 2 quadrature nodes"));
    }
    let dim = model.dim;
    let a = model.a_matrix(x);
    let a_ch = a
        .cholesky()
        .map_err(|_| PathdriftError::numeric("σσᵀ not positive definite"))?;
    let a_det = a_ch.det();
    let a_inv = a_ch.inverse();

    // leading term g_{ta}(x, y)
    let kernel = crate::parametrix::GaussianKernelParams::new(a.scale(t))
        .map_err(|e| PathdriftError::numeric(format!("leading kernel not SPD: {e}")))?;
    let lead = crate::parametrix::gaussian_density(&kernel, x, y);

    // quadrature nodes in u over [0,1] with s = t(1−u²), weight 2tu
    let (gl_nodes, gl_weights) = gauss_legendre(quad_nodes);
    let mut squad: Vec<(f64, f64)> = gl_nodes
        .iter()
        .zip(gl_weights.iter())
        .map(|(&xi, &wi)| {
            let u = 0.5 * (xi + 1.0);
            let w = 0.5 * wi;
            let s = t * (1.0 - u * u);
            (s, w * 2.0 * t * u)
        })
        .collect();
    squad.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());

    // simulation grid: uniform refinement merged with the quadrature times
    let mut grid = uniform_grid(t, n_steps)?;
    grid.extend(squad.iter().map(|(s, _)| *s));
    grid.sort_by(|p, q| p.partial_cmp(q).unwrap());
    grid.dedup_by(|p, q| (*p - *q).abs() < 1e-13);
    let node_of: Vec<usize> = squad
        .iter()
        .map(|(s, _)| {
            grid.iter()
                .position(|g| (g - s).abs() < 1e-12)
                .expect("quad node merged into grid")
        })
        .collect();

    #[derive(Clone, Default)]
    struct Acc {
        agg: Aggregate,
        error: Option<String>,
    }
    let acc = parallel_fold(
        n_samples,
        Acc::default(),
        |i, acc| {
            if acc.error.is_some() {
                return;
            }
            let run = || -> Result<f64> {
                let path = euler_maruyama(model, x, &grid, seed.offset(i))?;
                let mut walker = DriftWalker::new(model, None);
                let mut b = vec![0.0; dim];
                let mut integral = 0.0;
                for (q_idx, &k) in node_of.iter().enumerate() {
                    let (s, w) = squad[q_idx];
                    walker.drift_at(path.view(), k, &mut b)?;
                    let xs = path.state(k);
                    // ⟨a⁻¹(y−x_s), b⟩ · g_{(t−s)a}(x_s, y) / (t−s)
                    let dt_rem = t - s;
                    let v: Vec<f64> = y.iter().zip(xs.iter()).map(|(yi, xi)| yi - xi).collect();
                    let av = a_inv.mul_vec(&v);
                    let mut dot = 0.0;
                    let mut quad = 0.0;
                    for i in 0..dim {
                        dot += av[i] * b[i];
                        quad += av[i] * v[i];
                    }
                    let g = (-0.5 * quad / dt_rem).exp()
                        / ((2.0 * std::f64::consts::PI * dt_rem).powf(dim as f64 / 2.0)
                            * a_det.sqrt());
                    integral += w * dot / dt_rem * g;
                }
                Ok(integral)
            };
            match run() {
                Ok(v) => acc.agg.push(v),
                Err(e) => acc.error = Some(e.to_string()),
            }
        },
        |total, part| {
            if total.error.is_none() {
                if let Some(e) = part.error {
                    total.error = Some(e);
                }
            }
            total.agg.merge(&part.agg);
        },
    );
    if let Some(e) = acc.error {
        return Err(PathdriftError::numeric(e));
    }
    Ok(DensityEstimate {
        value: lead + acc.agg.mean(),
        stderr: acc.agg.stderr().unwrap_or(0.0),
        n_samples: acc.agg.n,
        method: MethodTag::FirstOrder,
        bandwidth: None,
        seed,
    })
}

/// Empirical Hölder quotient max |p̂(y) − p̂(y′)| / |y − y′|^γ over all
/// pairs of estimates sharing (x, t, method).
pub fn holder_modulus_diagnostic(
    estimates: &[(Vec<f64>, DensityEstimate)],
    gamma: f64,
) -> Result<f64> {
    if estimates.len() < 2 {
        return Err(PathdriftError::domain(
            "Hölder diagnostic needs at least 2 points",
        ));
    }
    let mut quotient: f64 = 0.0;
    for i in 0..estimates.len() {
        for j in (i + 1)..estimates.len() {
            let (yi, pi) = &estimates[i];
            let (yj, pj) = &estimates[j];
            let dist: f64 = yi
                .iter()
                .zip(yj.iter())
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist == 0.0 {
                continue;
            }
            quotient = quotient.max((pi.value - pj.value).abs() / dist.powf(gamma));
        }
    }
    Ok(quotient)
}

/// Ratio of Hölder quotients at two horizons, normalized by the t^{−γ/2}
/// scaling; near 1 when the modulus scales as predicted.
pub fn holder_scaling_ratio(q1: f64, t1: f64, q2: f64, t2: f64, gamma: f64) -> f64 {
    (q1 * t1.powf(gamma / 2.0)) / (q2 * t2.powf(gamma / 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedforms::ou_density;
    use crate::model::{Drift, GrowthInfo, PathDependentModel};
    use crate::parametrix::gaussian_density_1d;

    fn growth_k(k: f64) -> GrowthInfo {
        GrowthInfo {
            linear_k: k,
            bound: None,
            sublinear: vec![],
        }
    }

    #[test]
    fn weight_is_one_for_zero_drift_or_zero_exposure() {
        let grid = uniform_grid(1.0, 64).unwrap();
        let model = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
        let path = driftless_path(&model, &[0.0], &grid, SeedSpec::new(2, 0)).unwrap();
        assert_eq!(girsanov_weight(&model, &path, 1.0).unwrap(), 1.0);

        let ou = PathDependentModel::scalar(Drift::Linear { gain: -0.5 }, growth_k(0.5));
        assert_eq!(girsanov_weight(&ou, &path, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn single_step_weight_closed_form() {
        // d=1, σ=1, b≡c, one step of length h with increment w:
        // Z = exp(cw − c²h/2)
        let c = 0.8;
        let h = 0.3;
        let model = PathDependentModel::scalar(Drift::Constant { value: vec![c] }, growth_k(c));
        let grid = vec![0.0, h];
        let path = driftless_path(&model, &[0.0], &grid, SeedSpec::new(5, 9)).unwrap();
        let w = path.increment(0).unwrap()[0];
        let z = girsanov_weight(&model, &path, 1.0).unwrap();
        assert!((z - (c * w - c * c * h / 2.0).exp()).abs() < 1e-14);
    }

    #[test]
    fn weight_scaling_in_q_matches_scaled_drift() {
        // exact in real arithmetic; ulp-level in floats because the
        // scaled drift rounds (q·gain) before multiplying by the state
        let grid = uniform_grid(1.0, 32).unwrap();
        let base = PathDependentModel::scalar(Drift::Linear { gain: -0.7 }, growth_k(0.7));
        let q = 1.7;
        let scaled = PathDependentModel::scalar(base.drift.scaled(q).unwrap(), growth_k(0.7 * q));
        let path = driftless_path(&base, &[0.4], &grid, SeedSpec::new(6, 1)).unwrap();
        let a = girsanov_weight(&base, &path, q).unwrap();
        let b = girsanov_weight(&scaled, &path, 1.0).unwrap();
        assert!((a - b).abs() <= 1e-13 * a.abs());
    }

    #[test]
    fn weight_always_positive() {
        let grid = uniform_grid(1.0, 16).unwrap();
        let model = PathDependentModel::scalar(Drift::Tanh { scale: 2.0 }, growth_k(2.0));
        for i in 0..64 {
            let path = driftless_path(&model, &[0.0], &grid, SeedSpec::new(7, i)).unwrap();
            assert!(girsanov_weight(&model, &path, 1.0).unwrap() > 0.0);
        }
    }

    #[test]
    fn martingale_for_bounded_and_ou_drifts() {
        let tanh = PathDependentModel::scalar(Drift::Tanh { scale: 1.0 }, growth_k(1.0));
        let chk = martingale_check(&tanh, &[0.0], 1.0, 256, 20_000, SeedSpec::new(11, 0)).unwrap();
        assert!(chk.pass, "tanh: mean={} se={}", chk.mean, chk.stderr);

        let ou = PathDependentModel::scalar(Drift::Linear { gain: -0.5 }, growth_k(0.5));
        let chk = martingale_check(&ou, &[0.0], 1.0, 256, 20_000, SeedSpec::new(12, 0)).unwrap();
        assert!(chk.pass, "ou: mean={} se={}", chk.mean, chk.stderr);
    }

    #[test]
    fn novikov_partition_cases() {
        // tiny K: single interval
        let p = novikov_partition(1.0, 1.0, 1e-6, 1.0, 1.0).unwrap();
        assert_eq!(p, vec![0.0, 1.0]);
        // T=1, all ones: mesh bound 0.5 → (0, 0.5, 1)
        let p = novikov_partition(1.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.len(), 3);
        assert!((p[1] - 0.5).abs() < 1e-15);
        // T=2: mesh bound 0.25 → 8 intervals
        let p = novikov_partition(2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_eq!(p.len(), 9);
        assert!(novikov_partition(1.0, 1.0, 1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn partition_mesh_satisfies_bound_and_refines_with_horizon() {
        let mut prev_intervals = 0usize;
        for i in 1..=6 {
            let horizon = i as f64 * 0.75;
            let p = novikov_partition(horizon, 1.3, 0.9, 1.1, 1.4).unwrap();
            let bound = 1.0 / (2.0 * 1.1 * (1.3f64 * 0.9).powi(2) * 1.4 * horizon);
            for w in p.windows(2) {
                assert!(w[1] - w[0] <= bound + 1e-12);
            }
            let n = p.len() - 1;
            assert!(n >= prev_intervals);
            prev_intervals = n;
        }
    }

    #[test]
    fn threshold_cases() {
        // 2r²−r = 0 at r = 0.5 → T
        assert_eq!(t_threshold(0.5, 1.0, 1.0, 1.0, 10.0), 10.0);
        // r=1, all ones, T=10 → 1/(2√3)
        let v = t_threshold(1.0, 1.0, 1.0, 1.0, 10.0);
        assert!((v - 1.0 / (2.0 * 3.0f64.sqrt())).abs() < 1e-15);
        // min clips at small T
        assert_eq!(t_threshold(1.0, 1.0, 1.0, 1.0, 0.1), 0.1);
    }

    #[test]
    fn moment_bound_cases() {
        // 2r²−r < 0 → 1
        let v = z_moment_bound(0.25, 0.5, &[0.3], 1.0, 1.0, 1.0, 1.0, 1.0, None).unwrap();
        assert_eq!(v, 1.0);
        // r=1, d=1, t=0.1 ≤ t_r, x=0, all ones → 2^{5/4} e^{0.15}
        let v = z_moment_bound(1.0, 0.1, &[0.0], 1.0, 1.0, 1.0, 1.0, 1.0, None).unwrap();
        let expected = 2.0f64.powf(1.25) * 0.15f64.exp();
        assert!((v - expected).abs() < 1e-12, "v={v} expected={expected}");
        // third case without a table is a domain error
        assert!(z_moment_bound(1.0, 0.9, &[0.0], 1.0, 1.0, 1.0, 1.0, 1.0, None).is_err());
        // and succeeds with one
        let table = [SublinearEntry {
            delta: 0.05,
            k_delta: 2.0,
        }];
        let v = z_moment_bound(1.0, 0.9, &[0.0], 1.0, 1.0, 1.0, 1.0, 1.0, Some(&table)).unwrap();
        assert!(v.is_finite() && v > 1.0);
    }

    #[test]
    fn moment_bound_dominates_monte_carlo() {
        // bounded drift: E[Z^r] estimated by MC must sit below the bound;
        // boundedness gives the sub-linear table K(δ) = ‖b‖∞ for every δ
        let scale = 0.8;
        let model = PathDependentModel::scalar(Drift::Tanh { scale }, growth_k(scale));
        let table = [SublinearEntry {
            delta: 1e-9,
            k_delta: scale,
        }];
        let grid = uniform_grid(0.4, 128).unwrap();
        for (r, seed) in [(1.0, 31u64), (1.5, 32), (2.0, 33)] {
            let mut agg = Aggregate::new();
            for i in 0..20_000u64 {
                let path = driftless_path(&model, &[0.2], &grid, SeedSpec::new(seed, i)).unwrap();
                let z = girsanov_weight(&model, &path, 1.0).unwrap();
                agg.push(z.powf(r));
            }
            // K(b,T) for tanh-scale drift: |b| ≤ scale ≤ scale(1+w*)
            let bound =
                z_moment_bound(r, 0.4, &[0.2], scale, 1.0, 1.0, 1.0, 0.4, Some(&table)).unwrap();
            assert!(
                agg.mean() + 3.0 * agg.stderr().unwrap() <= bound,
                "r={r}: mc={} bound={bound}",
                agg.mean()
            );
        }
    }

    #[test]
    fn kernel_estimator_hits_standard_gaussian() {
        let model = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
        let est = density_girsanov_kernel(
            &model,
            &[0.0],
            &[0.0],
            1.0,
            0.05,
            8,
            200_000,
            SeedSpec::new(40, 0),
        )
        .unwrap();
        let target = gaussian_density_1d(1.0, 0.0, 0.0);
        assert!(
            (est.value - target).abs() < 3.0 * est.stderr + 0.01,
            "est={} ± {} target={target}",
            est.value,
            est.stderr
        );
    }

    #[test]
    fn kernel_estimator_matches_ou_closed_form() {
        let model = PathDependentModel::scalar(Drift::Linear { gain: -1.0 }, growth_k(1.0));
        let est = density_girsanov_kernel(
            &model,
            &[1.0],
            &[0.0],
            1.0,
            0.05,
            256,
            200_000,
            SeedSpec::new(41, 0),
        )
        .unwrap();
        let target = ou_density(1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        assert!(
            (est.value - target).abs() < 3.0 * est.stderr + 0.01,
            "est={} ± {} target={target}",
            est.value,
            est.stderr
        );
    }

    #[test]
    fn kernel_bias_shrinks_with_bandwidth() {
        // halving h (and quadrupling N) moves the estimate toward the
        // exact Gaussian over three levels, within statistical noise
        let model = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
        let target = gaussian_density_1d(1.0, 0.0, 0.5);
        let mut errors = Vec::new();
        let mut ns = [40_000u64, 160_000, 640_000].into_iter();
        for (level, h) in [0.4, 0.2, 0.1].into_iter().enumerate() {
            let n = ns.next().unwrap();
            let est = density_girsanov_kernel(
                &model,
                &[0.0],
                &[0.5],
                1.0,
                h,
                4,
                n,
                SeedSpec::new(42 + level as u64, 0),
            )
            .unwrap();
            errors.push((est.value - target).abs());
        }
        assert!(errors[0] > errors[2], "bias not shrinking: {errors:?}");
    }

    #[test]
    fn first_order_is_exact_gaussian_for_zero_drift() {
        let model = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
        let est = density_first_order(
            &model,
            &[0.2],
            &[0.7],
            0.8,
            16,
            16,
            256,
            SeedSpec::new(50, 0),
        )
        .unwrap();
        assert_eq!(est.stderr, 0.0);
        assert!((est.value - gaussian_density_1d(0.8, 0.2, 0.7)).abs() < 1e-14);
    }

    #[test]
    fn first_order_matches_shifted_gaussian_for_constant_drift() {
        // b ≡ c: X_t ~ Normal(x + ct, t)
        let c = 0.3;
        let model = PathDependentModel::scalar(Drift::Constant { value: vec![c] }, growth_k(c));
        let est = density_first_order(
            &model,
            &[0.0],
            &[0.3],
            1.0,
            24,
            64,
            60_000,
            SeedSpec::new(51, 0),
        )
        .unwrap();
        let target = gaussian_density_1d(1.0, 0.3, 0.3);
        assert!(
            (est.value - target).abs() < 3.0 * est.stderr + 0.005,
            "est={} ± {} target={target}",
            est.value,
            est.stderr
        );
    }

    #[test]
    fn first_order_refuses_state_dependent_sigma() {
        let model = PathDependentModel::new(
            1,
            Drift::Zero,
            crate::model::Diffusion::ScalarAffine {
                base: 1.0,
                slope: 0.1,
            },
            growth_k(0.0),
            crate::model::Ellipticity {
                lower: 0.5,
                upper: 2.0,
            },
            crate::model::Holder {
                alpha: 1.0,
                norm: 0.1,
            },
        )
        .unwrap();
        assert!(matches!(
            density_first_order(&model, &[0.0], &[0.0], 1.0, 8, 8, 100, SeedSpec::new(0, 0)),
            Err(PathdriftError::Unsupported(_))
        ));
    }

    #[test]
    fn holder_diagnostic_cases() {
        let mk = |v: f64| DensityEstimate {
            value: v,
            stderr: 0.0,
            n_samples: 1,
            method: MethodTag::GirsanovKernel,
            bandwidth: None,
            seed: SeedSpec::new(0, 0),
        };
        // flat field → 0
        let flat = vec![
            (vec![0.0], mk(0.25)),
            (vec![0.1], mk(0.25)),
            (vec![0.2], mk(0.25)),
        ];
        assert_eq!(holder_modulus_diagnostic(&flat, 0.5).unwrap(), 0.0);
        // exact Gaussian values at y ∈ {0, 0.1, 0.2}, γ = 0.5
        let g = |y: f64| gaussian_density_1d(1.0, 0.0, y);
        let pts = vec![
            (vec![0.0], mk(g(0.0))),
            (vec![0.1], mk(g(0.1))),
            (vec![0.2], mk(g(0.2))),
        ];
        let q = holder_modulus_diagnostic(&pts, 0.5).unwrap();
        let expected = [
            ((g(0.0) - g(0.1)).abs() / 0.1f64.powf(0.5)),
            ((g(0.0) - g(0.2)).abs() / 0.2f64.powf(0.5)),
            ((g(0.1) - g(0.2)).abs() / 0.1f64.powf(0.5)),
        ]
        .into_iter()
        .fold(0.0f64, f64::max);
        assert!((q - expected).abs() < 1e-15);
        // fewer than 2 points is a domain error
        assert!(holder_modulus_diagnostic(&flat[..1], 0.5).is_err());
    }
}
