//! Deterministic, stream-splittable random numbers and Brownian paths.
//!
//! Reproducibility contract:
//! - identical `SeedSpec` ⇒ bit-identical draws, on every platform;
//! - distinct `stream_index` values give statistically independent streams
//!   (ChaCha8 counter streams);
//! - Gaussian draws use the Marsaglia polar transform, fixed once, so a
//!   reimplementation in another language can match the distributions by
//!   consuming the same uniform stream.
//!
//! Workers never share a generator: every logical work item (sample, path,
//! chain) owns the stream derived from its own index, so results do not
//! depend on how items are scheduled across threads.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PathdriftError, Result};
use crate::linalg::SquareMat;

/// Master seed plus stream index; the unit of reproducibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        SeedSpec {
            master_seed,
            stream_index,
        }
    }

    /// The same master seed on a different stream.
    pub fn stream(self, stream_index: u64) -> Self {
        SeedSpec {
            master_seed: self.master_seed,
            stream_index,
        }
    }

    /// Stream offset, for carving contiguous stream ranges out of a base.
    pub fn offset(self, delta: u64) -> Self {
        SeedSpec {
            master_seed: self.master_seed,
            stream_index: self.stream_index.wrapping_add(delta),
        }
    }
}

/// ChaCha8-backed generator with a cached spare normal draw.
#[derive(Clone, Debug)]
pub struct PathRng {
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl PathRng {
    pub fn new(seed: SeedSpec) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.master_seed);
        rng.set_stream(seed.stream_index);
        PathRng {
            rng,
            spare_normal: None,
        }
    }

    /// Uniform on the open interval (0, 1): 53 random bits, offset by half
    /// an ulp of the lattice so 0 and 1 are excluded.
    pub fn uniform(&mut self) -> f64 {
        let bits = self.rng.next_u64() >> 11;
        (bits as f64 + 0.5) * (1.0 / 9007199254740992.0) // 2^-53
    }

    /// Standard normal via the Marsaglia polar method.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare_normal = Some(v * f);
                return u * f;
            }
        }
    }

    /// Exponential with rate `lambda`, by inversion.
    pub fn exponential(&mut self, lambda: f64) -> f64 {
        -self.uniform().ln() / lambda
    }
}

/// A realized path: strictly increasing time grid from 0, one state per
/// node, optionally the driving Brownian increments per step. States are
/// stored flat (`node * dim + coord`).
#[derive(Clone, Debug)]
pub struct DiscretePath {
    dim: usize,
    grid: Vec<f64>,
    states: Vec<f64>,
    increments: Option<Vec<f64>>,
}

impl DiscretePath {
    pub fn new(
        dim: usize,
        grid: Vec<f64>,
        states: Vec<f64>,
        increments: Option<Vec<f64>>,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(PathdriftError::domain("empty time grid"));
        }
        if grid[0] != 0.0 {
            return Err(PathdriftError::domain("time grid must start at 0"));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(PathdriftError::domain(
                "time grid must be strictly increasing",
            ));
        }
        if states.len() != grid.len() * dim {
            return Err(PathdriftError::domain(format!(
                "states length {} does not match {} nodes of dim {}",
                states.len(),
                grid.len(),
                dim
            )));
        }
        if let Some(inc) = &increments {
            if inc.len() != (grid.len() - 1) * dim {
                return Err(PathdriftError::domain(
                    "increments length does not match step count",
                ));
            }
        }
        Ok(DiscretePath {
            dim,
            grid,
            states,
            increments,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn time(&self, k: usize) -> f64 {
        self.grid[k]
    }

    pub fn horizon(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    pub fn state(&self, k: usize) -> &[f64] {
        &self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub fn terminal(&self) -> &[f64] {
        self.state(self.len() - 1)
    }

    /// Brownian increment over step k → k+1, if stored.
    pub fn increment(&self, k: usize) -> Option<&[f64]> {
        self.increments
            .as_ref()
            .map(|inc| &inc[k * self.dim..(k + 1) * self.dim])
    }

    pub fn has_increments(&self) -> bool {
        self.increments.is_some()
    }

    /// Index of the largest grid node with time ≤ t.
    pub fn floor_node(&self, t: f64) -> usize {
        self.view().floor_node(t)
    }

    /// State at the largest node ≤ t (left-constant interpolation).
    pub fn state_at(&self, t: f64) -> &[f64] {
        self.state(self.floor_node(t))
    }

    pub fn view(&self) -> PathView<'_> {
        PathView {
            dim: self.dim,
            grid: &self.grid,
            states: &self.states,
        }
    }
}

/// Borrowed view of (grid, states), so schemes can evaluate drifts against
/// a path that is still being built without copying it.
#[derive(Clone, Copy, Debug)]
pub struct PathView<'a> {
    pub dim: usize,
    pub grid: &'a [f64],
    pub states: &'a [f64],
}

impl<'a> PathView<'a> {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.grid[k]
    }

    pub fn horizon(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    pub fn state(&self, k: usize) -> &'a [f64] {
        &self.states[k * self.dim..(k + 1) * self.dim]
    }

    pub fn floor_node(&self, t: f64) -> usize {
        match self
            .grid
            .binary_search_by(|probe| probe.partial_cmp(&t).unwrap())
        {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) => k - 1,
        }
    }

    pub fn state_at(&self, t: f64) -> &'a [f64] {
        self.state(self.floor_node(t))
    }
}

/// The uniform grid (0, T/n, ..., T).
pub fn uniform_grid(horizon: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(PathdriftError::domain("grid needs at least one step"));
    }
    if horizon <= 0.0 {
        return Err(PathdriftError::domain("horizon must be positive"));
    }
    let mut g: Vec<f64> = (0..=n).map(|k| horizon * k as f64 / n as f64).collect();
    g[n] = horizon;
    Ok(g)
}

/// η_n(t): the largest node kT/n with kT/n ≤ t.
pub fn eta_floor(t: f64, horizon: f64, n: usize) -> f64 {
    let k = ((t * n as f64 / horizon).floor() as usize).min(n);
    horizon * k as f64 / n as f64
}

/// Brownian path on the given grid: W_0 = 0, increments N(0, Δt·I_d),
/// states the cumulative sums. Increments are stored.
pub fn brownian_path(dim: usize, grid: &[f64], seed: SeedSpec) -> Result<DiscretePath> {
    let n_nodes = grid.len();
    if n_nodes == 0 {
        return Err(PathdriftError::domain("empty time grid"));
    }
    let mut rng = PathRng::new(seed);
    let mut states = vec![0.0; n_nodes * dim];
    let mut increments = vec![0.0; (n_nodes - 1) * dim];
    for k in 0..n_nodes - 1 {
        let dt = grid[k + 1] - grid[k];
        if dt <= 0.0 {
            return Err(PathdriftError::domain(
                "time grid must be strictly increasing",
            ));
        }
        let sd = dt.sqrt();
        for i in 0..dim {
            let dw = sd * rng.normal();
            increments[k * dim + i] = dw;
            states[(k + 1) * dim + i] = states[k * dim + i] + dw;
        }
    }
    DiscretePath::new(dim, grid.to_vec(), states, Some(increments))
}

/// Builds σ W for a constant diffusion matrix (the driftless process with
/// constant coefficients, which is exact in law at the grid nodes).
pub fn scaled_brownian_path(
    x0: &[f64],
    sigma: &SquareMat,
    grid: &[f64],
    seed: SeedSpec,
) -> Result<DiscretePath> {
    let dim = x0.len();
    let w = brownian_path(dim, grid, seed)?;
    let n_nodes = grid.len();
    let mut states = vec![0.0; n_nodes * dim];
    let mut increments = vec![0.0; (n_nodes - 1) * dim];
    states[..dim].copy_from_slice(x0);
    for k in 0..n_nodes - 1 {
        let dw = w.increment(k).unwrap();
        let sdw = sigma.mul_vec(dw);
        for i in 0..dim {
            increments[k * dim + i] = dw[i];
            states[(k + 1) * dim + i] = states[k * dim + i] + sdw[i];
        }
    }
    DiscretePath::new(dim, grid.to_vec(), states, Some(increments))
}
