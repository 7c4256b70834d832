//! Path-dependent SDE models.
//!
//! A model is dX_t = b(t, X) dt + σ(t, X_t) dW_t where the drift b sees the
//! whole trajectory up to t (running maxima, delays, running integrals),
//! not just X_t. Drifts are a closed set of builtin combinators rather
//! than arbitrary closures: each builtin knows its own growth constants,
//! which the estimators downstream need (a generic closure cannot declare
//! them).
//!
//! The composite functional drift evaluates ν at the state
//!
//!   A_t(w) = (t, w_t, max_{s≤t} ζ(s, w_s), {w_{τ_i(t)}}_i, ∫_0^t c(s, w_s) ds)
//!
//! with τ_i(t) = (t − τ_i)·1{t > τ_i}. Running max and running integral are
//! computed from discrete path nodes (left-endpoint rule), i.e. the
//! continuous-time functionals are approximated at the grid resolution.
//! The delay list is stored truncated with the analytic tail mass recorded.

use serde::{Deserialize, Serialize};

use crate::error::{PathdriftError, Result};
use crate::linalg::{norm2, SquareMat};
use crate::rng::{DiscretePath, PathView};

/// Scalar field (t, x) → ℝ used for ζ and the components of c.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ScalarField {
    Zero,
    Constant {
        value: f64,
    },
    /// |x| (euclidean norm of the state)
    Norm,
    /// x_1 (first coordinate)
    First,
}

impl ScalarField {
    pub fn eval(&self, _t: f64, x: &[f64]) -> f64 {
        match self {
            ScalarField::Zero => 0.0,
            ScalarField::Constant { value } => *value,
            ScalarField::Norm => norm2(x),
            ScalarField::First => x[0],
        }
    }

    /// Hölder seminorm bound declared for the builtin (γ = 1 for all of
    /// these; constants are exact).
    pub fn holder_norm(&self) -> f64 {
        match self {
            ScalarField::Zero | ScalarField::Constant { .. } => 0.0,
            ScalarField::Norm | ScalarField::First => 1.0,
        }
    }
}

/// One delay term: lag τ_i with summability weight θ_i.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DelayTerm {
    pub tau: f64,
    pub theta: f64,
}

/// Specification of the composite functional A_t.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionalSpec {
    /// Running-max integrand ζ(t, x) ≥ 0.
    pub zeta: ScalarField,
    /// Delay terms, stored truncated; `tail_theta` is Σ θ_i beyond the
    /// stored list.
    pub delays: Vec<DelayTerm>,
    #[serde(default)]
    pub tail_theta: f64,
    /// Components of the running integrand c (ℓ = len).
    pub integrand_c: Vec<ScalarField>,
}

impl FunctionalSpec {
    /// A spec whose functional state carries no information beyond (t, w_t).
    pub fn state_only() -> Self {
        FunctionalSpec {
            zeta: ScalarField::Zero,
            delays: Vec::new(),
            tail_theta: 0.0,
            integrand_c: Vec::new(),
        }
    }

    /// Σ_{i>m} θ_i over the stored list plus the analytic tail.
    pub fn tail_mass(&self, m: usize) -> f64 {
        let stored: f64 = self.delays.iter().skip(m).map(|d| d.theta).sum();
        stored + self.tail_theta
    }

    pub fn total_theta(&self) -> f64 {
        self.tail_mass(0)
    }
}

/// The composite state A_t(w).
#[derive(Clone, Debug)]
pub struct FunctionalState {
    pub t: f64,
    pub w_t: Vec<f64>,
    pub running_max: f64,
    /// Delayed values w_{τ_i(t)}, one per stored delay. Truncated entries
    /// (index > m) are the zero vector.
    pub delayed: Vec<Vec<f64>>,
    pub integral: Vec<f64>,
}

/// How ν maps the composite state to a drift vector.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NuKind {
    /// ν(χ) = w (the scheme collapses to a plain state-dependent drift).
    StateIdentity,
    Constant {
        value: Vec<f64>,
    },
    /// ν(χ) = z broadcast to every coordinate.
    RunningMax,
    /// ν(χ) = state_gain·w + max_gain·z·𝟙 + delay_gain·Σ θ_i u_i
    ///        + integral_gain·v₁·𝟙.
    /// Linear (β = 1) in every argument; the delay sensitivity matches the
    /// θ-weighted Hölder form.
    Linear {
        #[serde(default)]
        state_gain: f64,
        #[serde(default)]
        max_gain: f64,
        #[serde(default)]
        delay_gain: f64,
        #[serde(default)]
        integral_gain: f64,
    },
    /// Bounded: ν_i(χ) = scale·tanh(w_i).
    Tanh {
        scale: f64,
    },
}

/// Borrowed composite state, so hot loops evaluate ν without copying.
#[derive(Clone, Copy, Debug)]
pub struct FunctionalStateRef<'a> {
    pub t: f64,
    pub w_t: &'a [f64],
    pub running_max: f64,
    pub delayed: &'a [Vec<f64>],
    pub integral: &'a [f64],
}

impl FunctionalState {
    pub fn as_ref(&self) -> FunctionalStateRef<'_> {
        FunctionalStateRef {
            t: self.t,
            w_t: &self.w_t,
            running_max: self.running_max,
            delayed: &self.delayed,
            integral: &self.integral,
        }
    }
}

impl NuKind {
    pub fn eval(&self, spec: &FunctionalSpec, chi: FunctionalStateRef<'_>, out: &mut [f64]) {
        match self {
            NuKind::StateIdentity => out.copy_from_slice(chi.w_t),
            NuKind::Constant { value } => out.copy_from_slice(value),
            NuKind::RunningMax => out.fill(chi.running_max),
            NuKind::Linear {
                state_gain,
                max_gain,
                delay_gain,
                integral_gain,
            } => {
                let mut base = max_gain * chi.running_max;
                if let Some(v1) = chi.integral.first() {
                    base += integral_gain * v1;
                }
                for (i, o) in out.iter_mut().enumerate() {
                    *o = base + state_gain * chi.w_t[i];
                }
                for (term, u) in spec.delays.iter().zip(chi.delayed.iter()) {
                    for (o, ui) in out.iter_mut().zip(u.iter()) {
                        *o += delay_gain * term.theta * ui;
                    }
                }
            }
            NuKind::Tanh { scale } => {
                for (o, w) in out.iter_mut().zip(chi.w_t.iter()) {
                    *o = scale * w.tanh();
                }
            }
        }
    }
}

/// Builtin drift functionals. Each carries its growth constants implicitly;
/// `declared_*` below turn them into the metadata the estimators consume.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Drift {
    Zero,
    Constant {
        value: Vec<f64>,
    },
    /// b(x) = gain·x (gain < 0 is Ornstein–Uhlenbeck mean reversion).
    Linear {
        gain: f64,
    },
    /// b_i(x) = scale·tanh(x_i); bounded by |scale|.
    Tanh {
        scale: f64,
    },
    /// b(x) = β sgn(α − x), componentwise.
    BangBang {
        center: Vec<f64>,
        strength: Vec<f64>,
    },
    /// d = 1 only: b(x) = λ x (μ − |x|). Super-linear; outside the
    /// linear-growth class, admitted for the tamed one-step scheme.
    Heston32 {
        lambda: f64,
        mu: f64,
    },
    /// b = ν ∘ A with the composite functional of `spec`.
    Functional {
        spec: FunctionalSpec,
        nu: NuKind,
    },
}

impl Drift {
    pub fn is_path_dependent(&self) -> bool {
        matches!(self, Drift::Functional { .. })
    }

    pub fn is_super_linear(&self) -> bool {
        matches!(self, Drift::Heston32 { .. })
    }

    /// Scales the drift by q where the combinator family is closed under
    /// scaling. Used by the Girsanov q-linearity property.
    pub fn scaled(&self, q: f64) -> Option<Drift> {
        match self {
            Drift::Zero => Some(Drift::Zero),
            Drift::Constant { value } => Some(Drift::Constant {
                value: value.iter().map(|v| q * v).collect(),
            }),
            Drift::Linear { gain } => Some(Drift::Linear { gain: q * gain }),
            Drift::Functional { spec, nu } => {
                let nu = match nu {
                    NuKind::Constant { value } => NuKind::Constant {
                        value: value.iter().map(|v| q * v).collect(),
                    },
                    NuKind::Linear {
                        state_gain,
                        max_gain,
                        delay_gain,
                        integral_gain,
                    } => NuKind::Linear {
                        state_gain: q * state_gain,
                        max_gain: q * max_gain,
                        delay_gain: q * delay_gain,
                        integral_gain: q * integral_gain,
                    },
                    _ => return None,
                };
                Some(Drift::Functional {
                    spec: spec.clone(),
                    nu,
                })
            }
            _ => None,
        }
    }
}

/// Diffusion fields σ(t, x).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Diffusion {
    /// Constant d×d matrix.
    Constant { matrix: Vec<f64> },
    /// Degenerate zero diffusion, for deterministic sanity checks only.
    Zero,
    /// d = 1: σ(x) = xi·|x|^power (Heston-3/2 volatility has power 3/2).
    ScalarPower { xi: f64, power: f64 },
    /// d = 1: σ(x) = base + slope·x.
    ScalarAffine { base: f64, slope: f64 },
}

impl Diffusion {
    pub fn is_constant(&self) -> bool {
        matches!(self, Diffusion::Constant { .. } | Diffusion::Zero)
    }

    pub fn scalar_at(&self, x: f64) -> f64 {
        match self {
            Diffusion::Constant { matrix } => matrix[0],
            Diffusion::Zero => 0.0,
            Diffusion::ScalarPower { xi, power } => xi * x.abs().powf(*power),
            Diffusion::ScalarAffine { base, slope } => base + slope * x,
        }
    }

    pub fn matrix_at(&self, dim: usize, x: &[f64]) -> SquareMat {
        match self {
            Diffusion::Constant { matrix } => {
                SquareMat::from_rows(dim, matrix.clone()).expect("validated at construction")
            }
            Diffusion::Zero => SquareMat::scaled_identity(dim, 0.0),
            Diffusion::ScalarPower { .. } | Diffusion::ScalarAffine { .. } => {
                SquareMat::scaled_identity(1, self.scalar_at(x[0]))
            }
        }
    }
}

/// Growth and regularity metadata declared with a model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthInfo {
    /// Linear-growth constant: |b(t,w)| ≤ K·(1 + w*_t).
    #[serde(rename = "K")]
    pub linear_k: f64,
    /// ‖b‖_∞ when the drift is bounded.
    #[serde(default)]
    pub bound: Option<f64>,
    /// Sub-linear table: |b(t,w)| ≤ δ·w*_t + K(δ) per tabulated δ.
    #[serde(default)]
    pub sublinear: Vec<SublinearEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SublinearEntry {
    pub delta: f64,
    #[serde(rename = "K_delta")]
    pub k_delta: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Ellipticity {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Holder {
    pub alpha: f64,
    pub norm: f64,
}

/// A path-dependent SDE model with its declared metadata.
#[derive(Clone, Debug)]
pub struct PathDependentModel {
    pub dim: usize,
    pub drift: Drift,
    pub diffusion: Diffusion,
    pub growth: GrowthInfo,
    pub ellipticity: Ellipticity,
    pub holder: Holder,
}

impl PathDependentModel {
    pub fn new(
        dim: usize,
        drift: Drift,
        diffusion: Diffusion,
        growth: GrowthInfo,
        ellipticity: Ellipticity,
        holder: Holder,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(PathdriftError::domain("dim must be positive"));
        }
        if ellipticity.lower > ellipticity.upper
            || (ellipticity.lower <= 0.0 && !matches!(diffusion, Diffusion::Zero))
        {
            return Err(PathdriftError::domain(
                "ellipticity requires 0 < lower <= upper",
            ));
        }
        match &diffusion {
            Diffusion::Constant { matrix } => {
                let m = SquareMat::from_rows(dim, matrix.clone())?;
                if m.max_asymmetry() > 1e-12 {
                    // non-symmetric σ is fine; the ellipticity check applies to σσᵀ
                }
                let a = m.mul_transpose();
                let (lo, hi) = a.sym_eigen_range()?;
                if lo < ellipticity.lower - 1e-9 || hi > ellipticity.upper + 1e-9 {
                    return Err(PathdriftError::domain(format!(
                        "declared ellipticity [{}, {}] excludes σσᵀ spectrum [{lo}, {hi}]",
                        ellipticity.lower, ellipticity.upper
                    )));
                }
            }
            Diffusion::ScalarPower { .. } | Diffusion::ScalarAffine { .. } => {
                if dim != 1 {
                    return Err(PathdriftError::domain(
                        "scalar diffusion builtins require dim = 1",
                    ));
                }
            }
            Diffusion::Zero => {}
        }
        if let Drift::Heston32 { .. } = &drift {
            if dim != 1 {
                return Err(PathdriftError::domain("Heston-3/2 drift requires dim = 1"));
            }
        }
        Ok(PathDependentModel {
            dim,
            drift,
            diffusion,
            growth,
            ellipticity,
            holder,
        })
    }

    /// Convenience constructor for d = 1 with unit constant diffusion.
    pub fn scalar(drift: Drift, growth: GrowthInfo) -> Self {
        PathDependentModel::new(
            1,
            drift,
            Diffusion::Constant { matrix: vec![1.0] },
            growth,
            Ellipticity {
                lower: 1.0,
                upper: 1.0,
            },
            Holder {
                alpha: 1.0,
                norm: 0.0,
            },
        )
        .expect("scalar model construction")
    }

    /// b(t, path): evaluates the drift on the path prefix up to time t.
    pub fn eval_drift(&self, t: f64, path: &DiscretePath) -> Result<Vec<f64>> {
        if t > path.horizon() + 1e-12 {
            return Err(PathdriftError::domain(format!(
                "drift requested at t={t} beyond path horizon {}",
                path.horizon()
            )));
        }
        let node = path.floor_node(t);
        for k in 0..=node {
            if path.state(k).iter().any(|v| !v.is_finite()) {
                return Err(PathdriftError::numeric(format!(
                    "non-finite path value at node {k}"
                )));
            }
        }
        let mut walker = DriftWalker::new(self, None);
        let mut out = vec![0.0; self.dim];
        walker.drift_at(path.view(), node, &mut out)?;
        Ok(out)
    }

    /// a(t, x) = σσᵀ at a point.
    pub fn a_matrix(&self, x: &[f64]) -> SquareMat {
        let s = self.diffusion.matrix_at(self.dim, x);
        s.mul_transpose()
    }
}

/// Evaluates A_t(w) from the discrete nodes of a path: max and integral
/// over nodes ≤ t (left rule), delayed lookups at the largest node ≤ τ_i(t).
pub fn functional_state(
    spec: &FunctionalSpec,
    path: &DiscretePath,
    t: f64,
) -> Result<FunctionalState> {
    functional_state_with(spec, path, t, None, None)
}

/// As `functional_state` with optional uniform-grid flooring (η_n applied
/// to every time lookup) and delay truncation (entries with index > m read
/// as the zero vector). This is the discretized functional the
/// path-dependent scheme uses.
pub fn functional_state_with(
    spec: &FunctionalSpec,
    path: &DiscretePath,
    t: f64,
    floor: Option<(usize, f64)>,
    truncate_m: Option<usize>,
) -> Result<FunctionalState> {
    if path.is_empty() {
        return Err(PathdriftError::domain("empty path"));
    }
    if t > path.horizon() + 1e-12 {
        return Err(PathdriftError::domain("t beyond path horizon"));
    }
    let path = path.view();
    let dim = path.dim;
    let floor_time = |s: f64| -> f64 {
        match floor {
            Some((n, horizon)) => crate::rng::eta_floor(s, horizon, n),
            None => s,
        }
    };
    let eff_t = floor_time(t);

    // running max of ζ over nodes ≤ t, times floored when requested
    let last = path.floor_node(t);
    let mut running_max = f64::NEG_INFINITY;
    for k in 0..=last {
        let s = floor_time(path.time(k));
        let x = path.state_at(s);
        running_max = running_max.max(spec.zeta.eval(s, x));
    }

    // left-rule integral of c up to the (possibly floored) t
    let ell = spec.integrand_c.len();
    let mut integral = vec![0.0; ell];
    if ell > 0 {
        match floor {
            None => {
                for k in 0..last {
                    let dt = path.time(k + 1).min(t) - path.time(k);
                    if dt <= 0.0 {
                        break;
                    }
                    let s = path.time(k);
                    let x = path.state(k);
                    for (acc, c) in integral.iter_mut().zip(spec.integrand_c.iter()) {
                        *acc += c.eval(s, x) * dt;
                    }
                }
            }
            Some((n, horizon)) => {
                // Σ over coarse cells [kT/n, (k+1)T/n) ⊂ [0, η_n(t))
                let h = horizon / n as f64;
                let cells = (eff_t / h).round() as usize;
                for k in 0..cells {
                    let s = k as f64 * h;
                    let x = path.state_at(s);
                    for (acc, c) in integral.iter_mut().zip(spec.integrand_c.iter()) {
                        *acc += c.eval(s, x) * h;
                    }
                }
            }
        }
    }

    // delayed values
    let m = truncate_m.unwrap_or(usize::MAX);
    let mut delayed = Vec::with_capacity(spec.delays.len());
    for (i, term) in spec.delays.iter().enumerate() {
        if i >= m {
            delayed.push(vec![0.0; dim]);
            continue;
        }
        let lag_time = if t > term.tau { t - term.tau } else { 0.0 };
        let s = floor_time(lag_time);
        delayed.push(path.state_at(s).to_vec());
    }

    Ok(FunctionalState {
        t: eff_t,
        w_t: path.state_at(floor_time(t)).to_vec(),
        running_max,
        delayed,
        integral,
    })
}

/// Incremental drift evaluator: walks a path node by node, maintaining the
/// running-max / integral / delay-pointer state so that evaluating the
/// drift at every node of an n-node path costs O(n) total instead of
/// O(n²). Calls must visit nodes in nondecreasing order.
pub struct DriftWalker<'m> {
    model: &'m PathDependentModel,
    truncate_m: Option<usize>,
    max_nodes_seen: usize,
    integral_steps_seen: usize,
    running_max: f64,
    integral: Vec<f64>,
    delay_ptrs: Vec<usize>,
    chi_delayed: Vec<Vec<f64>>,
}

impl<'m> DriftWalker<'m> {
    pub fn new(model: &'m PathDependentModel, truncate_m: Option<usize>) -> Self {
        let (n_delays, ell) = match &model.drift {
            Drift::Functional { spec, .. } => (spec.delays.len(), spec.integrand_c.len()),
            _ => (0, 0),
        };
        DriftWalker {
            model,
            truncate_m,
            max_nodes_seen: 0,
            integral_steps_seen: 0,
            running_max: f64::NEG_INFINITY,
            integral: vec![0.0; ell],
            delay_ptrs: vec![0; n_delays],
            chi_delayed: vec![vec![0.0; model.dim]; n_delays],
        }
    }

    /// Drift at node k given the path prefix 0..=k. Writes into `out`.
    pub fn drift_at(&mut self, path: PathView<'_>, k: usize, out: &mut [f64]) -> Result<()> {
        let xk = path.state(k);
        if xk.iter().any(|v| !v.is_finite()) {
            return Err(PathdriftError::numeric(format!(
                "non-finite state at node {k}"
            )));
        }
        match &self.model.drift {
            Drift::Zero => out.fill(0.0),
            Drift::Constant { value } => out.copy_from_slice(value),
            Drift::Linear { gain } => {
                for (o, x) in out.iter_mut().zip(xk.iter()) {
                    *o = gain * x;
                }
            }
            Drift::Tanh { scale } => {
                for (o, x) in out.iter_mut().zip(xk.iter()) {
                    *o = scale * x.tanh();
                }
            }
            Drift::BangBang { center, strength } => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = strength[i] * sgn(center[i] - xk[i]);
                }
            }
            Drift::Heston32 { lambda, mu } => {
                out[0] = lambda * xk[0] * (mu - xk[0].abs());
            }
            Drift::Functional { spec, nu } => {
                let t = path.time(k);
                // running max over nodes 0..=k
                while self.max_nodes_seen <= k {
                    let j = self.max_nodes_seen;
                    self.running_max = self
                        .running_max
                        .max(spec.zeta.eval(path.time(j), path.state(j)));
                    self.max_nodes_seen += 1;
                }
                // left-rule integral over steps 0..k
                if !self.integral.is_empty() {
                    while self.integral_steps_seen < k {
                        let j = self.integral_steps_seen;
                        let s = path.time(j);
                        let x = path.state(j);
                        let dt = path.time(j + 1) - s;
                        for (acc, c) in self.integral.iter_mut().zip(spec.integrand_c.iter()) {
                            *acc += c.eval(s, x) * dt;
                        }
                        self.integral_steps_seen += 1;
                    }
                }
                let m = self.truncate_m.unwrap_or(usize::MAX);
                for (i, term) in spec.delays.iter().enumerate() {
                    if i >= m {
                        self.chi_delayed[i].fill(0.0);
                        continue;
                    }
                    let lag_time = if t > term.tau { t - term.tau } else { 0.0 };
                    // delay pointers only move forward
                    let mut p = self.delay_ptrs[i];
                    while p < k && path.time(p + 1) <= lag_time {
                        p += 1;
                    }
                    self.delay_ptrs[i] = p;
                    self.chi_delayed[i].copy_from_slice(path.state(p));
                }
                let chi = FunctionalStateRef {
                    t,
                    w_t: xk,
                    running_max: self.running_max,
                    delayed: &self.chi_delayed,
                    integral: &self.integral,
                };
                nu.eval(spec, chi, out);
            }
        }
        Ok(())
    }
}

fn sgn(x: f64) -> f64 {
    // sgn(0) = -1, matching the convention sgn = -1 on (-∞, 0]
    if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Outcome of spot-checking declared growth constants on sample paths.
#[derive(Clone, Debug)]
pub struct GrowthReport {
    /// max over samples of |b(t,w)| / (1 + w*_t)
    pub max_linear_ratio: f64,
    /// per tabulated δ: max over samples of |b(t,w)| − δ·w*_t
    pub sublinear_excess: Vec<(f64, f64)>,
    pub linear_violated: bool,
    pub sublinear_violations: Vec<f64>,
}

impl GrowthReport {
    pub fn passed(&self) -> bool {
        !self.linear_violated && self.sublinear_violations.is_empty()
    }
}

/// Spot-checks |b| ≤ K(1 + w*) and per-δ sub-linear declarations on the
/// given sample paths. Report-only: violations are flagged, not fatal.
pub fn validate_growth(
    model: &PathDependentModel,
    sample_paths: &[DiscretePath],
) -> Result<GrowthReport> {
    if sample_paths.is_empty() {
        return Err(PathdriftError::domain("empty sample set"));
    }
    let mut max_ratio: f64 = 0.0;
    let mut excess: Vec<(f64, f64)> = model
        .growth
        .sublinear
        .iter()
        .map(|e| (e.delta, f64::NEG_INFINITY))
        .collect();
    let mut buf = vec![0.0; model.dim];
    for path in sample_paths {
        let mut walker = DriftWalker::new(model, None);
        let mut sup = 0.0f64;
        for k in 0..path.len() {
            sup = sup.max(norm2(path.state(k)));
            walker.drift_at(path.view(), k, &mut buf)?;
            let bn = norm2(&buf);
            max_ratio = max_ratio.max(bn / (1.0 + sup));
            for e in excess.iter_mut() {
                e.1 = e.1.max(bn - e.0 * sup);
            }
        }
    }
    let linear_violated = max_ratio > model.growth.linear_k + 1e-9;
    let sublinear_violations: Vec<f64> = model
        .growth
        .sublinear
        .iter()
        .zip(excess.iter())
        .filter(|(decl, obs)| obs.1 > decl.k_delta + 1e-9)
        .map(|(decl, _)| decl.delta)
        .collect();
    Ok(GrowthReport {
        max_linear_ratio: max_ratio,
        sublinear_excess: excess,
        linear_violated,
        sublinear_violations,
    })
}
