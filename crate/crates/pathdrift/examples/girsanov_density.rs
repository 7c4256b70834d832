//! Girsanov-weighted kernel density estimation.
//!
//! Simulates the driftless process, reweights by the Maruyama–Girsanov
//! martingale Z, conditions on the endpoint by kernel smoothing, and
//! compares against the Ornstein–Uhlenbeck closed form. Also runs the
//! martingale sanity check E[Z] = 1 and the analytic moment bound.
//!
//! ```bash
//! cargo run --release --example girsanov_density
//! ```

use pathdrift::closedforms::ou_density;
use pathdrift::girsanov::{density_girsanov_kernel, martingale_check, t_threshold, z_moment_bound};
use pathdrift::model::{Drift, GrowthInfo, PathDependentModel};
use pathdrift::rng::SeedSpec;

fn main() {
    let kappa = 1.0;
    let model = PathDependentModel::scalar(
        Drift::Linear { gain: -kappa },
        GrowthInfo {
            linear_k: kappa,
            bound: None,
            sublinear: vec![],
        },
    );
    let seed = SeedSpec::new(42, 0);

    println!("== martingale check: E[Z_1(1)] over 50k driftless paths ==");
    let chk = martingale_check(&model, &[0.0], 1.0, 512, 50_000, seed).unwrap();
    println!(
        "mean = {:.5} ± {:.5}  ({})",
        chk.mean,
        chk.stderr,
        if chk.pass { "within 3 SE of 1" } else { "OFF" }
    );

    println!("\n== density at (x, y, t) = (1, 0, 0.5) vs closed form ==");
    let (x, y, t) = (1.0, 0.0, 0.5);
    let est = density_girsanov_kernel(&model, &[x], &[y], t, 0.03, 256, 200_000, seed).unwrap();
    let oracle = ou_density(x, y, t, kappa, 1.0).unwrap();
    println!(
        "kernel estimate = {:.6} ± {:.6} (h = {:?})",
        est.value, est.stderr, est.bandwidth
    );
    println!("closed form     = {oracle:.6}");
    println!(
        "difference      = {:+.6} ({:.2} SE)",
        est.value - oracle,
        (est.value - oracle) / est.stderr
    );

    println!("\n== analytic moment bound sup_s E[Z_s(1)^r] ==");
    for r in [0.25, 1.0, 1.5] {
        let t_r = t_threshold(r, kappa, 1.0, 1.0, t);
        let bound = z_moment_bound(r, t.min(t_r), &[x], kappa, 1.0, 1.0, 1.0, t, None).unwrap();
        println!("r = {r}: t_r = {t_r:.4}, bound on (0, t_r] = {bound:.4}");
    }
}
