//! Sharp two-sided density bounds from bang-bang comparison processes:
//! any Brownian motion with drift bounded by β satisfies
//! q^{y,−β}_t(x,y) ≤ p_t(x,y) ≤ q^{y,β}_t(x,y), where q^{y,±β} are the
//! center densities of the diffusions repelled from / attracted to y.
//!
//! Estimates the density of a tanh-drift model by weighted Monte Carlo
//! and tests every point against the bracket.
//!
//! ```bash
//! cargo run --release --example bangbang_bracket
//! ```

use pathdrift::closedforms::sharp_bound_verdict;
use pathdrift::girsanov::density_girsanov_kernel_multi;
use pathdrift::model::{Drift, GrowthInfo, PathDependentModel};
use pathdrift::rng::SeedSpec;

fn main() {
    let b_sup = 0.5;
    let model = PathDependentModel::scalar(
        Drift::Tanh { scale: b_sup },
        GrowthInfo {
            linear_k: b_sup,
            bound: Some(b_sup),
            sublinear: vec![],
        },
    );
    let (x, t) = (0.0, 1.0);
    let ys: Vec<Vec<f64>> = [-0.9, -0.5, 0.35, 0.7, 1.1]
        .iter()
        .map(|&y| vec![y])
        .collect();
    let ests = density_girsanov_kernel_multi(
        &model,
        &[x],
        &ys,
        t,
        0.05,
        256,
        300_000,
        SeedSpec::new(5, 0),
    )
    .unwrap();
    println!("tanh drift, ‖b‖∞ = {b_sup}, x = {x}, t = {t}:");
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>14}",
        "y", "lower", "estimate", "upper", "verdict"
    );
    for (y, est) in ys.iter().zip(ests.iter()) {
        let (verdict, lo, hi) = sharp_bound_verdict(est, &[x], y, t, b_sup).unwrap();
        println!(
            "{:>6.2} {lo:>10.5} {:>10.5} {hi:>10.5} {verdict:>14}",
            y[0], est.value
        );
    }
}
