//! Built-in exact-value suite behind `pathdrift selftest`.
//!
//! Every check here has a hand-computable answer (zero functionals,
//! constant drifts, degenerate dynamics, closed forms at special points)
//! and must hold exactly or to machine precision. The suite is the
//! fastest way to confirm a build is sane.

use crate::closedforms::{bangbang_peak_density, ou_density, sharp_bound_verdict, Verdict};
use crate::girsanov::{
    density_first_order, girsanov_weight, novikov_partition, t_threshold, z_moment_bound,
    DensityEstimate, MethodTag,
};
use crate::linalg::SquareMat;
use crate::model::{Drift, FunctionalSpec, GrowthInfo, NuKind, PathDependentModel, ScalarField};
use crate::parametrix::{
    beta_convolution, gaussian_density, gaussian_density_1d, hermite_first, hermite_second,
    parametrix_term_bound, sample_counting, theta_weight, unbiased_density_sample, CountingSpec,
    GaussianKernelParams,
};
use crate::rng::{brownian_path, eta_floor, uniform_grid, DiscretePath, PathRng, SeedSpec};
use crate::schemes::{em_path_dependent, euler_maruyama, tame_diffusion, tame_drift};
use crate::stats::Aggregate;

fn growth_k(k: f64) -> GrowthInfo {
    GrowthInfo {
        linear_k: k,
        bound: None,
        sublinear: vec![],
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

type Check = (&'static str, fn() -> bool);

fn checks() -> Vec<Check> {
    vec![
        ("drift: zero functional is the zero vector", || {
            let p = DiscretePath::new(1, vec![0.0, 1.0], vec![0.3, -0.2], None).unwrap();
            let m = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
            m.eval_drift(1.0, &p).unwrap() == vec![0.0]
        }),
        ("drift: constant 0.7 on any path", || {
            let p = DiscretePath::new(1, vec![0.0, 1.0], vec![0.3, -0.2], None).unwrap();
            let m = PathDependentModel::scalar(Drift::Constant { value: vec![0.7] }, growth_k(0.7));
            m.eval_drift(0.5, &p).unwrap() == vec![0.7]
        }),
        ("drift: running max of |x| over (0, 1, 0.5)", || {
            let p = DiscretePath::new(1, vec![0.0, 0.5, 1.0], vec![0.0, 1.0, 0.5], None).unwrap();
            let m = PathDependentModel::scalar(
                Drift::Functional {
                    spec: FunctionalSpec {
                        zeta: ScalarField::Norm,
                        delays: vec![],
                        tail_theta: 0.0,
                        integrand_c: vec![],
                    },
                    nu: NuKind::RunningMax,
                },
                growth_k(1.0),
            );
            m.eval_drift(1.0, &p).unwrap() == vec![1.0]
        }),
        ("grid: eta floor values", || {
            eta_floor(0.3, 1.0, 4) == 0.25
                && eta_floor(1.0, 1.0, 4) == 1.0
                && uniform_grid(2.0, 2).unwrap() == vec![0.0, 1.0, 2.0]
        }),
        ("paths: single-node grid is the origin", || {
            let p = brownian_path(1, &[0.0], SeedSpec::new(1, 0)).unwrap();
            p.len() == 1 && p.state(0) == [0.0]
        }),
        ("scheme: zero drift reproduces Brownian motion", || {
            let grid = uniform_grid(1.0, 16).unwrap();
            let seed = SeedSpec::new(2, 0);
            let m = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
            let x = euler_maruyama(&m, &[0.25], &grid, seed).unwrap();
            let w = brownian_path(1, &grid, seed).unwrap();
            (0..x.len()).all(|k| close(x.state(k)[0], 0.25 + w.state(k)[0], 1e-14))
        }),
        ("scheme: unit drift with zero noise lands at x0 + 1", || {
            let m = PathDependentModel::new(
                1,
                Drift::Constant { value: vec![1.0] },
                crate::model::Diffusion::Zero,
                growth_k(1.0),
                crate::model::Ellipticity {
                    lower: 1.0,
                    upper: 1.0,
                },
                crate::model::Holder {
                    alpha: 1.0,
                    norm: 0.0,
                },
            )
            .unwrap();
            let grid = uniform_grid(1.0, 13).unwrap();
            let x = euler_maruyama(&m, &[0.5], &grid, SeedSpec::new(0, 0)).unwrap();
            close(x.terminal()[0], 1.5, 1e-13)
        }),
        ("scheme: identity functional collapses to plain EM", || {
            let f = PathDependentModel::scalar(
                Drift::Functional {
                    spec: FunctionalSpec::state_only(),
                    nu: NuKind::StateIdentity,
                },
                growth_k(1.0),
            );
            let plain = PathDependentModel::scalar(Drift::Linear { gain: 1.0 }, growth_k(1.0));
            let seed = SeedSpec::new(3, 1);
            let a = em_path_dependent(&f, &[0.1], 1.0, 32, 0, seed).unwrap();
            let grid = uniform_grid(1.0, 32).unwrap();
            let b = euler_maruyama(&plain, &[0.1], &grid, seed).unwrap();
            (0..a.len()).all(|k| close(a.state(k)[0], b.state(k)[0], 1e-13))
        }),
        ("taming: identity at the origin", || {
            tame_drift(3.0, 0.0, 1.0, 0.25) == 3.0 && tame_diffusion(2.0, 0.0, 1.0, 0.25) == 2.0
        }),
        (
            "girsanov: unit weight for zero drift and zero exposure",
            || {
                let grid = uniform_grid(1.0, 8).unwrap();
                let m = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
                let y = crate::girsanov::driftless_path(&m, &[0.0], &grid, SeedSpec::new(4, 0))
                    .unwrap();
                let ou = PathDependentModel::scalar(Drift::Linear { gain: -1.0 }, growth_k(1.0));
                girsanov_weight(&m, &y, 1.0).unwrap() == 1.0
                    && girsanov_weight(&ou, &y, 0.0).unwrap() == 1.0
            },
        ),
        (
            "girsanov: tiny growth constant gives one Novikov interval",
            || novikov_partition(1.0, 1.0, 1e-9, 1.0, 1.0).unwrap() == vec![0.0, 1.0],
        ),
        ("girsanov: threshold is T when 2r²−r ≤ 0", || {
            t_threshold(0.5, 1.0, 1.0, 1.0, 7.0) == 7.0
        }),
        (
            "girsanov: moment bound collapses to 1 below r = 1/2",
            || z_moment_bound(0.25, 0.3, &[0.4], 1.0, 1.0, 1.0, 1.0, 1.0, None).unwrap() == 1.0,
        ),
        (
            "first-order: exact Gaussian with zero SE at zero drift",
            || {
                let m = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
                let est =
                    density_first_order(&m, &[0.1], &[0.4], 0.9, 8, 8, 64, SeedSpec::new(5, 0))
                        .unwrap();
                est.stderr == 0.0 && close(est.value, gaussian_density_1d(0.9, 0.1, 0.4), 1e-14)
            },
        ),
        ("kernel: g at the diagonal is 1/√(2π)", || {
            let k = GaussianKernelParams::new(SquareMat::identity(1)).unwrap();
            close(
                gaussian_density(&k, &[0.0], &[0.0]),
                0.3989422804014327,
                1e-15,
            )
        }),
        ("hermite: H¹(0) = 0 and H²(0) = −A⁻¹", || {
            let k = GaussianKernelParams::new(SquareMat::scaled_identity(1, 2.0)).unwrap();
            hermite_first(&k, &[0.0]) == vec![0.0]
                && close(hermite_second(&k, &[0.0]).at(0, 0), -0.5, 1e-15)
        }),
        (
            "theta: vanishes at coincident points and constant-σ zero drift",
            || {
                let a = SquareMat::identity(1);
                theta_weight(&[2.0], &a, &a, 0.5, &[0.7], &[0.7]).unwrap() == 0.0
                    && theta_weight(&[0.0], &a, &a, 0.5, &[0.1], &[0.9]).unwrap() == 0.0
            },
        ),
        ("counting: no jumps when the first draw exceeds t", || {
            let spec = CountingSpec::Exponential { lambda: 1e-9 };
            let mut rng = PathRng::new(SeedSpec::new(6, 0));
            let s = sample_counting(&spec, 1.0, &mut rng).unwrap();
            s.jump_times.is_empty() && close(s.survival, 1.0 - spec.cdf(1.0), 1e-15)
        }),
        (
            "unbiased: null model samples equal the Gaussian exactly",
            || {
                let m = PathDependentModel::scalar(Drift::Zero, growth_k(0.0));
                let spec = CountingSpec::Exponential { lambda: 1.0 };
                let expected = gaussian_density_1d(0.5, 0.0, 0.3);
                (0..32).all(|i| {
                    unbiased_density_sample(&m, &[0.0], &[0.3], 0.5, &spec, SeedSpec::new(7, 2 * i))
                        .unwrap()
                        == expected
                })
            },
        ),
        ("bangbang: zero-β peak value is the heat kernel", || {
            let t = 1.3;
            close(
                bangbang_peak_density(&[0.2], &[0.2], &[0.0], t).unwrap(),
                gaussian_density_1d(t, 0.2, 0.2),
                1e-14,
            )
        }),
        (
            "bangbang: degenerate bracket passes only the exact value",
            || {
                let t = 1.0;
                let exact = bangbang_peak_density(&[0.0], &[0.4], &[0.0], t).unwrap();
                let mk = |v: f64| DensityEstimate {
                    value: v,
                    stderr: 0.0,
                    n_samples: 1,
                    method: MethodTag::GirsanovKernel,
                    bandwidth: None,
                    seed: SeedSpec::new(0, 0),
                };
                let (ok, _, _) = sharp_bound_verdict(&mk(exact), &[0.0], &[0.4], t, 0.0).unwrap();
                let (shifted, _, _) =
                    sharp_bound_verdict(&mk(exact * 11.0), &[0.0], &[0.4], t, 0.5).unwrap();
                ok == Verdict::Pass && shifted == Verdict::Fail
            },
        ),
        ("ou: κ → 0 limit recovers the heat kernel", || {
            close(
                ou_density(0.3, -0.1, 0.7, 1e-9, 1.0).unwrap(),
                gaussian_density_1d(0.7, 0.3, -0.1),
                1e-9,
            )
        }),
        ("stats: mean 1, stderr 1 on the stream (0, 2)", || {
            let a = Aggregate::from_slice(&[0.0, 2.0]);
            a.mean() == 1.0 && a.stderr() == Some(1.0)
        }),
        ("beta integral: unit value at m=1, a=b=0, t0=1", || {
            close(beta_convolution(1, 0.0, 0.0, 1.0).unwrap(), 1.0, 1e-14)
        }),
        (
            "series bound: n=1 coefficient is √d‖b‖Ĉ/√(t−s)",
            || {
                close(
                    parametrix_term_bound(1, 2.0, 1.5, 4, 0.25).unwrap(),
                    2.0 * 2.0 * 1.5 / 0.5,
                    1e-12,
                )
            },
        ),
    ]
}

/// Runs the suite, printing one line per check; true iff all passed.
pub fn run_selftest(mut sink: impl std::io::Write) -> bool {
    let mut all_ok = true;
    for (name, check) in checks() {
        let ok = check();
        all_ok &= ok;
        let _ = writeln!(sink, "[{}] {}", if ok { "ok" } else { "FAIL" }, name);
    }
    all_ok
}
