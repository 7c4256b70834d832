//! Unbiased density estimation by parametrix-series randomization:
//! counting-process jump times, a frozen Euler chain launched from the
//! target point, θ̂ Hermite weights, and the analytic leading term. No
//! time-discretization bias at all.
//!
//! Shows the zero-variance null model, the Ornstein–Uhlenbeck
//! cross-validation, and how the beta-kind inter-arrival law tames the
//! variance relative to the exponential kind.
//!
//! ```bash
//! cargo run --release --example unbiased_density
//! ```

use pathdrift::closedforms::ou_density;
use pathdrift::model::{Drift, GrowthInfo, PathDependentModel};
use pathdrift::parametrix::{gaussian_density_1d, unbiased_density, CountingSpec};
use pathdrift::rng::SeedSpec;

fn main() {
    let seed = SeedSpec::new(2024, 0);

    println!("== null model b ≡ 0: every sample is the Gaussian itself ==");
    let null = PathDependentModel::scalar(
        Drift::Zero,
        GrowthInfo {
            linear_k: 0.0,
            bound: Some(0.0),
            sublinear: vec![],
        },
    );
    let spec = CountingSpec::Exponential { lambda: 1.0 };
    let (est, diag) = unbiased_density(&null, &[0.2], &[-0.4], 0.7, &spec, 20_000, seed).unwrap();
    println!(
        "estimate = {:.6} (exact {:.6}), stderr = {:.1e}, mean jumps = {:.2}",
        est.value,
        gaussian_density_1d(0.7, 0.2, -0.4),
        est.stderr,
        diag.mean_jumps
    );

    println!("\n== Ornstein–Uhlenbeck at (x, y, t) = (1, 0, 0.5) ==");
    let ou = PathDependentModel::scalar(
        Drift::Linear { gain: -1.0 },
        GrowthInfo {
            linear_k: 1.0,
            bound: None,
            sublinear: vec![],
        },
    );
    let oracle = ou_density(1.0, 0.0, 0.5, 1.0, 1.0).unwrap();
    println!("closed form = {oracle:.6}");
    for (label, spec) in [
        ("exponential λ=1", CountingSpec::Exponential { lambda: 1.0 }),
        (
            "beta β=0.5     ",
            CountingSpec::Beta {
                beta: 0.5,
                horizon: 0.5,
            },
        ),
    ] {
        let (est, diag) =
            unbiased_density(&ou, &[1.0], &[0.0], 0.5, &spec, 400_000, seed.offset(1)).unwrap();
        println!(
            "{label}: {:.6} ± {:.6}  kurtosis {:>9.1}  tail frac {:.4}  jumps {:.2}",
            est.value, est.stderr, diag.kurtosis, diag.tail_fraction, diag.mean_jumps
        );
    }
    println!("(the beta-kind ζ concentrates inter-arrivals near 0 where the");
    println!(" series kernel has its singularity, cutting the tail mass)");
}
