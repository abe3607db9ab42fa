//! Worked examples for the suite-level inequalities, evaluated through the
//! public API with hand-computed expectations.

use schwarz_core::harness::{run_suite, Suite, SuiteConfig};
use schwarz_core::holomaps::{FiniteBlaschke, HoloMap};
use schwarz_core::mobius::{mobius_disk, DiskPoint};
use schwarz_core::quasibalanced::{nth_root_bound_margin, schwarz_margin, WeightedDomain};
use schwarz_core::spectralball::{bharali_margin, spectrum, SquareMatrix};
use schwarz_core::sympoly::{fiber_distance_h, h1, nth_root_map, GnPoint};
use schwarz_core::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn dp(z: C64) -> DiskPoint {
    DiskPoint::new(z).unwrap()
}

#[test]
fn constant_map_margins_equal_the_disk_distance() {
    let f = HoloMap::poly_coords(vec![vec![c(0.2, 0.1)], vec![c(-0.05, 0.0)], vec![c(0.01, 0.02)]]).unwrap();
    let (x, x0) = (c(0.4, -0.3), c(-0.1, 0.6));
    let (z, z0) = (
        GnPoint::new(f.eval(dp(x))).unwrap(),
        GnPoint::new(f.eval(dp(x0))).unwrap(),
    );
    let m = mobius_disk(x, x0).unwrap().get();
    assert_eq!(fiber_distance_h(&z, &z0).unwrap().get(), 0.0);
    assert_eq!(h1(&z, &z0).unwrap().get(), 0.0);
    assert!(m > 0.0);
}

#[test]
fn nth_root_map_attains_the_stated_bound_at_the_origin() {
    for n in 1..=6 {
        for &x in &[c(0.09, 0.0), c(-0.3, 0.5), c(0.0, 0.94)] {
            let z = nth_root_map(x, n).unwrap();
            let z0 = nth_root_map(c(0.0, 0.0), n).unwrap();
            let hn = fiber_distance_h(&z, &z0).unwrap().get().powi(n as i32);
            let m = mobius_disk(x, c(0.0, 0.0)).unwrap().get();
            assert!((m - hn).abs() < 1e-8, "n={n} x={x}: {m} vs {hn}");
        }
    }
}

#[test]
fn square_root_example() {
    // n = 2, x = 0.09: roots ±0.3, H = 0.3, H² = 0.09.
    let z = nth_root_map(c(0.09, 0.0), 2).unwrap();
    let h = fiber_distance_h(&z, &GnPoint::origin(2)).unwrap().get();
    assert!((h - 0.3).abs() < 1e-12);
}

#[test]
fn lifted_map_into_g2_keeps_the_schwarz_margin() {
    // f(x) = π(x, x²): roots x and x², gauge |x|; p = 2 so margin |x| - |x|².
    let f = HoloMap::lifted_blaschke(vec![
        FiniteBlaschke::new(c(1.0, 0.0), vec![c(0.0, 0.0)]).unwrap(),
        FiniteBlaschke::new(c(1.0, 0.0), vec![c(0.0, 0.0); 2]).unwrap(),
    ])
    .unwrap();
    let z = [c(0.6, 0.0)];
    let m = schwarz_margin(
        &f,
        &WeightedDomain::polydisk(1),
        &WeightedDomain::symmetrized_polydisk(2),
        &z,
    )
    .unwrap();
    assert!((m - (0.6 - 0.36)).abs() < 1e-12);
    assert!((nth_root_bound_margin(&f, dp(z[0])).unwrap() - (0.6f64.sqrt() - 0.6)).abs() < 1e-12);
}

#[test]
fn constant_matrix_map_has_full_bharali_margin() {
    let a = SquareMatrix::from_rows(&[vec![c(0.2, 0.0), c(0.7, 0.0)], vec![c(0.0, 0.0), c(-0.4, 0.1)]]).unwrap();
    let s = spectrum(&a).unwrap();
    let m = mobius_disk(c(0.3, 0.2), c(-0.5, 0.1)).unwrap();
    assert!((bharali_margin(&s, &s, m).unwrap() - m.get()).abs() < 1e-15);
}

#[test]
fn diagonal_embedding_is_extremal_for_the_spectral_inequality() {
    for &(z, w) in &[(c(0.5, 0.0), c(0.0, 0.0)), (c(0.3, -0.4), c(-0.2, 0.1))] {
        let sz = spectrum(&SquareMatrix::diag(&[z, c(0.0, 0.0)])).unwrap();
        let sw = spectrum(&SquareMatrix::diag(&[w, c(0.0, 0.0)])).unwrap();
        let m = mobius_disk(z, w).unwrap();
        assert!(bharali_margin(&sz, &sw, m).unwrap() >= -1e-12);
    }
    let z = c(0.5, 0.0);
    let sz = spectrum(&SquareMatrix::diag(&[z, c(0.0, 0.0)])).unwrap();
    let sw = spectrum(&SquareMatrix::zeros(2)).unwrap();
    let m = mobius_disk(z, c(0.0, 0.0)).unwrap();
    assert!(bharali_margin(&sz, &sw, m).unwrap().abs() < 1e-15);
}

#[test]
fn small_suite_runs_are_clean_and_accounted() {
    for suite in Suite::ALL {
        let mut cfg = SuiteConfig::defaults(suite);
        cfg.trials = 6;
        cfg.seed = 99;
        let report = run_suite(&cfg).unwrap();
        let s = &report.summary;
        assert_eq!(s.passes + s.failures + s.aborts, s.trials, "{suite}");
        assert!(s.is_clean(), "{suite}: {s:?}");
        assert!(report.records.windows(2).all(|w| w[0].trial <= w[1].trial));
        assert!(report.records.iter().all(|r| r.pass == (r.margin >= -r.tol)));
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = SuiteConfig::defaults(Suite::Main);
    cfg.trials = 0;
    assert!(run_suite(&cfg).is_err());
}
