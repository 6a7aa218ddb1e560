mod common;

use stringchase::functions::{builtin, parse};
use stringchase::labeling::{labels_of, InducedLabeling};
use stringchase::solver::{check_sandwich, diameter, select_witness, solve, Engine, SolveConfig};
use stringchase::search::path_follow;
use stringchase::GridSpec;

#[test]
fn dottie_matches_bisection() {
    let reference = common::dottie_by_bisection(1e-12);
    let g = parse("cos(x1)", 1).unwrap().into_map_fn("cos");
    let rep = solve(&g, &SolveConfig { tol: 1e-3, ..SolveConfig::default() }).unwrap();
    assert!(rep.converged);
    assert!((rep.z[0] - reference).abs() <= 1e-3, "{} vs {reference}", rep.z[0]);
    assert!(rep.m_final <= 1 << 13);
}

#[test]
fn rot90_reaches_center() {
    let g = builtin("rot90", None, None).unwrap();
    let rep = solve(&g, &SolveConfig { tol: 1e-2, ..SolveConfig::default() }).unwrap();
    assert!(rep.converged);
    assert!(rep.z.iter().all(|v| (v - 0.5).abs() <= 1e-2));
}

#[test]
fn reports_are_self_consistent() {
    let mut rng = common::rng(41);
    let mut maps = vec![
        builtin("dottie", None, None).unwrap(),
        builtin("squeeze", None, None).unwrap(),
        builtin("avg-c", None, Some(&[0.2, 0.7])).unwrap(),
    ];
    maps.extend((1..=3).map(|n| common::random_poly_map(&mut rng, n)));
    for g in maps {
        for engine in [Engine::PathFollow, Engine::Oracle] {
            let cfg = SolveConfig { tol: 1e-3, max_m: 64, engine, ..SolveConfig::default() };
            let rep = solve(&g, &cfg).unwrap();
            let spec = GridSpec::new(g.n(), rep.m_final).unwrap();
            // certificate relabels to {0..n} at m_final
            let lab = InducedLabeling::new(spec, g.clone());
            let s = rep.certificate.string(&spec).unwrap();
            let mut labels = labels_of(&lab, &s).unwrap();
            assert_eq!(labels, rep.certificate.labels);
            labels.sort();
            assert_eq!(labels, (0..=g.n()).collect::<Vec<_>>());
            assert!(check_sandwich(&g, &spec, &rep.certificate).unwrap(), "{}", g.name());
            // residual is a fresh evaluation at z
            let y = g.eval(&rep.z).unwrap();
            let r = y.iter().zip(&rep.z).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert_eq!(r, rep.residual);
            // diameters follow sqrt(n)/m and shrink
            for h in &rep.history {
                assert_eq!(h.diameter, (g.n() as f64).sqrt() / h.m as f64);
            }
            assert!(rep.history.windows(2).all(|w| w[1].diameter < w[0].diameter));
            assert_eq!(rep.converged, rep.residual <= cfg.tol);
        }
    }
}

#[test]
fn affine_builtins_obey_lipschitz_residual_bound() {
    let maps = [
        builtin("reflect1d", None, None).unwrap(),
        builtin("rot90", None, None).unwrap(),
        builtin("const-c", None, Some(&[0.3, 0.6, 0.9])).unwrap(),
        builtin("avg-c", None, Some(&[0.8])).unwrap(),
        builtin("avg-c", None, Some(&[0.13, 0.77])).unwrap(),
    ];
    for g in maps {
        let l = g.lipschitz().unwrap();
        for m in [1u32, 2, 3, 5, 7, 16, 33, 100] {
            let spec = GridSpec::new(g.n(), m).unwrap();
            let lab = InducedLabeling::new(spec, g.clone());
            let (s, _) = path_follow(&lab).unwrap();
            let (_, r) = select_witness(&g, &spec, &s).unwrap();
            let bound = (l + 1.0) * diameter(g.n(), m);
            assert!(r <= bound + 1e-12, "{} m={m}: {r} > {bound}", g.name());
        }
    }
}

#[test]
fn solves_are_deterministic() {
    let g = common::random_poly_map(&mut common::rng(42), 2);
    let cfg = SolveConfig { tol: 1e-4, ..SolveConfig::default() };
    assert_eq!(solve(&g, &cfg).unwrap(), solve(&g, &cfg).unwrap());
}
