//! Published tables reproduced from the live code paths.

use saddle_core::arith::Rational;
use saddle_core::combinatorics::{n_of_l, t_table};
use saddle_core::fermion::{exact_partition, ks_exact, ks_model_z, method1_z, method2_z, FermionParams};
use saddle_core::gamma::{gamma_l_loop, stirling_coefficients};

fn fixture(name: &str) -> Vec<Vec<String>> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    text.lines().skip(1).filter(|l| !l.is_empty()).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("bad number {s}"))
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * want.abs()
}

#[test]
fn normalized_t_table_is_exact() {
    let want = fixture("t_normalized.csv");
    let got = t_table(14);
    assert_eq!(got.len(), want.len());
    for (c, row) in got.iter().zip(&want) {
        assert_eq!((c.l.to_string(), c.k.to_string()), (row[0].clone(), row[1].clone()));
        assert_eq!(c.normalized(), row[2].parse::<Rational>().unwrap(), "L={} k={}", c.l, c.k);
    }
}

#[test]
fn stirling_series_is_exact() {
    let want: Vec<Rational> = fixture("stirling.csv").iter().map(|r| r[1].parse().unwrap()).collect();
    let got = stirling_coefficients(14);
    assert_eq!(got, want);
    for (l, c) in got.iter().enumerate() {
        assert_eq!(*c, n_of_l(l as u32), "L={l}");
    }
}

#[test]
fn gamma_loop_table() {
    let rows = fixture("gamma_loops.csv");
    assert_eq!(rows.len(), 64);
    for r in &rows {
        let (n, l) = (num(&r[0]), r[1].parse().unwrap());
        let e = gamma_l_loop(n, l).unwrap();
        assert!(close(e.ratio.unwrap(), num(&r[3]), 1e-4), "N={n} l={l}: {:?}", e.ratio);
        assert!(close(e.approx, num(&r[2]), 1e-4), "N={n} l={l}: {}", e.approx);
    }
}

#[test]
fn gamma_single_species_optimum() {
    let err = |l: usize| (gamma_l_loop(1.0, l).unwrap().ratio.unwrap() - 1.0).abs();
    let best = (1..=15).min_by(|a, b| err(*a).total_cmp(&err(*b))).unwrap();
    assert_eq!(best, 6);
    for l in 12..15 {
        assert!(err(l + 1) > err(l), "l={l}");
    }
}

#[test]
fn fermion_first_method_table() {
    let rows = fixture("fermion_method1.csv");
    assert_eq!(rows.len(), 60);
    let mut worst = [0.0f64; 4];
    for r in &rows {
        let p = FermionParams::new(2, 1.0, num(&r[0]), num(&r[1])).unwrap();
        let l: usize = r[3].parse().unwrap();
        let exact = exact_partition(&p);
        let v = method1_z(&p, l);
        assert!(close(exact, num(&r[2]), 1e-4), "{r:?}: exact {exact}");
        assert!(close(v, num(&r[4]), 1e-4), "{r:?}: {v}");
        assert!(close(v / exact, num(&r[5]), 1e-4), "{r:?}: ratio {}", v / exact);
        worst[l] = worst[l].max((v / exact - 1.0).abs());
    }
    // Bounds as tabulated, i.e. on ratios rounded to four decimals.
    assert!(worst[2] <= 0.011);
    assert!(worst[3] < 0.00335);
}

#[test]
fn fermion_second_method_detuned_table() {
    let rows = fixture("fermion_method2_detuned.csv");
    assert_eq!(rows.len(), 20);
    for r in &rows {
        let p = FermionParams::new(2, 1.0, num(&r[0]), num(&r[1])).unwrap();
        let l: usize = r[3].parse().unwrap();
        let v = method2_z(&p, l).unwrap();
        assert!(close(v, num(&r[4]), 1e-3), "{r:?}: {v}");
        assert!(close(v / exact_partition(&p), num(&r[5]), 1e-3), "{r:?}");
    }
}

#[test]
fn ks_table() {
    let rows = fixture("ks_n3.csv");
    assert_eq!(rows.len(), 20);
    for r in &rows {
        let lambda_ks = 1.5f64.sqrt() * num(&r[0]);
        let l: usize = r[2].parse().unwrap();
        let exact = ks_exact(3, 1.0, lambda_ks);
        let v = ks_model_z(3, 1.0, lambda_ks, l).unwrap();
        assert!(close(exact, num(&r[1]), 1e-4), "{r:?}: exact {exact}");
        assert!(close(v, num(&r[3]), 1e-4), "{r:?}: {v}");
        assert!(close(v / exact, num(&r[4]), 1e-4), "{r:?}");
    }
}
