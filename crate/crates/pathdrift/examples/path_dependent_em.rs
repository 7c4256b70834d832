//! Path-dependent drift functionals and their discretized Euler scheme.
//!
//! Builds a drift from the composite state A_t = (t, w_t, running max,
//! delayed values, running integral), validates its declared growth
//! constants on sample paths, simulates the scheme with delay
//! truncation, and measures the drift-discretization gap
//! sup_s E[|ν(A_s) − ν(A_s^(n,m))|²]^{1/2} across grid levels — including
//! the tail-mass floor that appears when the delay list is truncated
//! below the active delays.
//!
//! ```bash
//! cargo run --release --example path_dependent_em
//! ```

use pathdrift::convergence::drift_discretization_error;
use pathdrift::linalg::SquareMat;
use pathdrift::model::{
    validate_growth, DelayTerm, Drift, FunctionalSpec, GrowthInfo, NuKind, PathDependentModel,
    ScalarField,
};
use pathdrift::rng::{brownian_path, uniform_grid, SeedSpec};
use pathdrift::schemes::em_path_dependent;

fn main() {
    let spec = FunctionalSpec {
        zeta: ScalarField::Norm,
        delays: vec![
            DelayTerm {
                tau: 0.2,
                theta: 0.5,
            },
            DelayTerm {
                tau: 0.4,
                theta: 0.25,
            },
        ],
        tail_theta: 0.0,
        integrand_c: vec![ScalarField::Norm],
    };
    let nu = NuKind::Linear {
        state_gain: 0.4,
        max_gain: 0.3,
        delay_gain: 0.5,
        integral_gain: 0.2,
    };
    let model = PathDependentModel::scalar(
        Drift::Functional {
            spec: spec.clone(),
            nu: nu.clone(),
        },
        GrowthInfo {
            linear_k: 2.0,
            bound: None,
            sublinear: vec![],
        },
    );

    println!("== growth spot-check on 64 Brownian sample paths ==");
    let grid = uniform_grid(1.0, 128).unwrap();
    let paths: Vec<_> = (0..64)
        .map(|i| brownian_path(1, &grid, SeedSpec::new(3, i)).unwrap())
        .collect();
    let rep = validate_growth(&model, &paths).unwrap();
    println!(
        "max |b|/(1+w*) = {:.4} vs declared K = {} → {}",
        rep.max_linear_ratio,
        model.growth.linear_k,
        if rep.passed() { "pass" } else { "VIOLATION" }
    );

    println!("\n== scheme with delay truncation m ==");
    for m in [0usize, 1, 2] {
        let path = em_path_dependent(&model, &[0.5], 1.0, 256, m, SeedSpec::new(4, 0)).unwrap();
        println!(
            "m = {m}: terminal = {:+.5}, tail mass Σ_(i>m) θ_i = {:.3}",
            path.terminal()[0],
            spec.tail_mass(m)
        );
    }

    println!("\n== drift gap sup_s E[|ν(A_s) − ν(A_s^(n,m))|²]^(1/2) ==");
    let rows = drift_discretization_error(
        &spec,
        &nu,
        &SquareMat::identity(1),
        &[0.0],
        1.0,
        &[16, 64, 256],
        2,
        2.0,
        300,
        SeedSpec::new(5, 0),
    )
    .unwrap();
    for r in &rows {
        println!("n = {:>4}: gap = {:.5} ± {:.5}", r.n, r.sup_lp, r.stderr);
    }

    println!("\n== truncation floor: m = 1 leaves the second delay active ==");
    let rows = drift_discretization_error(
        &spec,
        &nu,
        &SquareMat::identity(1),
        &[0.0],
        1.0,
        &[64, 1024],
        1,
        2.0,
        300,
        SeedSpec::new(6, 0),
    )
    .unwrap();
    for r in &rows {
        println!(
            "n = {:>5}: gap = {:.5} (floor ≈ θ₂·scale, does not vanish)",
            r.n, r.sup_lp
        );
    }
}
