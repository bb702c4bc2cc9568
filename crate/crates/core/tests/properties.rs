//! Property tests over random inputs.

use discrete_ep::baselines::{splitting_step, SplittingScheme};
use discrete_ep::cli_io::config::{config_to_string, parse_config};
use discrete_ep::cli_io::{trajectory_from_csv, trajectory_to_csv, Method, SimulationConfig};
use discrete_ep::integrators::{dep_step_chart, dep_step_mv, dlp_step, run_trajectory, NewtonConfig};
use discrete_ep::lagrangians::{DiscreteLagrangian, LagrangianKind};
use discrete_ep::lie_core::{chi_op, exp, iex_op, log, AlgebraElement, GroupElement, Momentum};
use discrete_ep::sampling::{random_group, rng};
use discrete_ep::{InertiaSpec, Side};
use proptest::prelude::*;

fn coords(d: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..scale, d)
}

fn lambda3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.2f64..4.0, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dlp_preserves_spectrum(n in 3usize..6, seed in any::<u64>(), c in coords(10, 3.0)) {
        let d = n * (n - 1) / 2;
        let mu = Momentum::from_coords(n, &c[..d]).unwrap();
        let f = random_group(n, &mut rng(seed));
        for side in [Side::Left, Side::Right] {
            let out = dlp_step(&mu, &f, side).unwrap();
            for (a, b) in out.spectrum().iter().zip(mu.spectrum()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            for (a, b) in out.trace_casimirs().iter().zip(mu.trace_casimirs()) {
                prop_assert!((a - b).abs() < 1e-12 * (1.0 + b.abs()));
            }
        }
    }

    #[test]
    fn exp_log_round_trip(n in 2usize..6, c in coords(10, 1.5)) {
        let d = n * (n - 1) / 2;
        let xi = AlgebraElement::from_coords(n, &c[..d]).unwrap();
        if xi.to_momentum().spectrum()[0] < 3.0 {
            let back = log(&exp(&xi)).unwrap();
            prop_assert!((&back - &xi).norm() < 1e-12);
        }
    }

    #[test]
    fn chi_inverts_iex(n in 3usize..6, c in coords(10, 1.5)) {
        let d = n * (n - 1) / 2;
        let eta = AlgebraElement::from_coords(n, &c[..d]).unwrap();
        prop_assert!(chi_op(&eta).unwrap().compose(&iex_op(&eta)).distance_to_identity() < 1e-13);
    }

    #[test]
    fn splitting_is_norm_preserving_and_leapfrog_reversible(l in lambda3(), c in coords(3, 3.0), h in 0.01f64..0.5) {
        let j = InertiaSpec::new(l).unwrap();
        let pi = Momentum::from_coords(3, &c).unwrap();
        let first = splitting_step(&pi, &j, h, &SplittingScheme::first_order()).unwrap();
        prop_assert!((first.norm() - pi.norm()).abs() < 1e-13 * (1.0 + pi.norm()));
        let s = SplittingScheme::leapfrog();
        let back = splitting_step(&splitting_step(&pi, &j, h, &s).unwrap(), &j, -h, &s).unwrap();
        prop_assert!((&back - &pi).norm() < 1e-12);
    }

    #[test]
    fn lagrangians_are_invariant(seed in any::<u64>(), l in lambda3(), c in coords(3, 0.8)) {
        let j = InertiaSpec::new(l).unwrap();
        let mut r = rng(seed);
        let g1 = random_group(3, &mut r);
        let a = random_group(3, &mut r);
        let step = exp(&AlgebraElement::from_coords(3, &c).unwrap());
        for kind in [LagrangianKind::Chart, LagrangianKind::MoserVeselov] {
            let left = DiscreteLagrangian::new(kind, 1.0, j.clone(), Side::Left).unwrap();
            let g2 = g1.compose(&step);
            prop_assert!((left.eval(&g1, &g2).unwrap() - left.eval(&a.compose(&g1), &a.compose(&g2)).unwrap()).abs() < 1e-12);
            let right = DiscreteLagrangian::new(kind, 1.0, j.clone(), Side::Right).unwrap();
            let g2 = step.compose(&g1);
            prop_assert!((right.eval(&g1, &g2).unwrap() - right.eval(&g1.compose(&a), &g2.compose(&a)).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn principal_axes_are_equilibria(l in lambda3(), axis in 0usize..3, w in 0.1f64..2.0, h in 0.005f64..0.1) {
        let j = InertiaSpec::new(l).unwrap();
        let mut v = [0.0; 3];
        v[axis] = w;
        let zeta = AlgebraElement::hat3(v);
        let cfg = NewtonConfig::default();
        let f = exp(&zeta.scale(h));
        prop_assert!(dep_step_mv(&f, &j, &cfg).unwrap().value.distance(&f) < 1e-11);
        prop_assert!((&dep_step_chart(&zeta, &j, h, &cfg).unwrap().value - &zeta).norm() < 1e-10);
    }

    #[test]
    fn dep_steps_stay_on_the_group(n in 3usize..5, seed in any::<u64>(), c in coords(6, 0.3)) {
        let d = n * (n - 1) / 2;
        let j = InertiaSpec::new((0..n).map(|i| 0.5 + i as f64).collect()).unwrap();
        let f = exp(&AlgebraElement::from_coords(n, &c[..d]).unwrap());
        let out = dep_step_mv(&f, &j, &NewtonConfig::default()).unwrap();
        prop_assert!(out.value.orthogonality_defect() < 1e-12);
        prop_assert!(GroupElement::from_matrix(out.value.matrix().clone()).is_ok());
        let _ = seed;
    }

    #[test]
    fn config_round_trip(l in lambda3(), h in 1e-4f64..1.0, steps in 0usize..1_000_000, seed in any::<u64>(), k in 1usize..500) {
        let mut cfg = SimulationConfig::new(l, h, steps, Method::DepMv).with_pi0(vec![h, -h / 3.0, 1.0 / h]);
        cfg.seed = seed;
        cfg.reortho_every = k;
        prop_assert_eq!(parse_config(&config_to_string(&cfg).unwrap()).unwrap(), cfg);
    }

    #[test]
    fn trajectory_csv_round_trip(seed in 0u64..1000, h in 0.01f64..0.2) {
        let mut cfg = SimulationConfig::new(vec![1.0, 2.0, 3.0, 4.0], h, 5, Method::DepMv);
        cfg.seed = seed;
        let t = run_trajectory(&cfg).unwrap();
        prop_assert_eq!(trajectory_from_csv(&trajectory_to_csv(&t).unwrap()).unwrap(), t);
    }
}
