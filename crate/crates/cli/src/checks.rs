//! Verification suites shared by `saddle verify` and the acceptance run.

use saddle_core::combinatorics::{verify_t_identities, IdentityKind};
use saddle_core::fermion::{self, FermionParams};
use saddle_core::gamma::{gamma_by_quadrature, gamma_exact, method2_gamma_check};
use saddle_core::report::Cell;

/// Relative agreement required between the two expansion methods.
pub const EQUIVALENCE_TOL: f64 = 1e-4;
/// Relative agreement between quadrature and the fermion closed form.
pub const FERMION_ORACLE_TOL: f64 = 1e-8;
/// Relative agreement between quadrature and `(N−1)!`.
pub const GAMMA_ORACLE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub suite: &'static str,
    pub case: String,
    pub lhs: Cell,
    pub rhs: Cell,
    pub passed: bool,
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Exact coefficient identities for `1 ≤ L ≤ l_max`.
pub fn identity_checks(l_max: u32) -> Vec<CheckOutcome> {
    verify_t_identities(l_max)
        .checks
        .into_iter()
        .map(|c| {
            let case = match (c.kind, c.k) {
                (IdentityKind::SumEquality, _) => format!("sum L={}", c.l),
                (IdentityKind::LeadingCancellation, _) => format!("cancellation L={} K=0", c.l),
                (IdentityKind::Lemma, Some(k)) => format!("lemma L={} K={k}", c.l),
                (IdentityKind::Lemma, None) => format!("lemma L={}", c.l),
            };
            let passed = c.passed();
            CheckOutcome { suite: "identities", case, lhs: c.lhs.into(), rhs: c.rhs.into(), passed }
        })
        .collect()
}

/// `ω0 ∈ {1, 100}` where the third branch is absent or negligible.
pub const EQUIVALENCE_OMEGA0: [f64; 2] = [1.0, 1e2];
pub const STANDARD_LAMBDAS: [f64; 5] = [1e-3, 1e-2, 1e-1, 1.0, 10.0];

/// Second-method values against the first on the standard grid (N = 2,
/// ω = 1, loop orders 0..=3), and the shifted-saddle Gamma series against
/// `n(L)` for `L ≤ l_max`.
pub fn method_equivalence_checks(l_max: u32) -> Result<Vec<CheckOutcome>, fermion::FermionError> {
    let mut out = Vec::new();
    for omega0 in EQUIVALENCE_OMEGA0 {
        for lambda in STANDARD_LAMBDAS {
            let p = FermionParams::new(2, 1.0, omega0, lambda)?;
            for l in 0..=3 {
                let a = fermion::method2_z(&p, l)?;
                let b = fermion::method1_z(&p, l);
                out.push(CheckOutcome {
                    suite: "method-equivalence",
                    case: format!("omega0={omega0} lambda={lambda} l={l}"),
                    lhs: a.into(),
                    rhs: b.into(),
                    passed: rel_close(a, b, EQUIVALENCE_TOL),
                });
            }
        }
    }
    let report = method2_gamma_check(l_max as usize);
    for (l, (c, e)) in report.combined.iter().zip(&report.expected).enumerate() {
        out.push(CheckOutcome {
            suite: "method-equivalence",
            case: format!("gamma L={l}"),
            lhs: c.clone().into(),
            rhs: e.clone().into(),
            passed: c == e,
        });
    }
    Ok(out)
}

/// Thirteen couplings from 1e−3 to 10, three per decade.
pub fn oracle_lambda_grid() -> Vec<f64> {
    (0..13).map(|i| 10f64.powf(-3.0 + i as f64 / 3.0)).collect()
}

/// Quadrature against the fermion closed form and against `(N−1)!`.
pub fn oracle_checks() -> anyhow::Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for omega0 in [1e-2, 1.0, 1e2] {
        for lambda in oracle_lambda_grid() {
            for n in 1..=6 {
                let p = FermionParams::new(n, 1.0, omega0, lambda)?;
                let q = fermion::partition_by_quadrature(&p, 1e-12)?;
                let e = fermion::exact_partition(&p);
                out.push(CheckOutcome {
                    suite: "oracle",
                    case: format!("fermion N={n} omega0={omega0} lambda={lambda:.6e}"),
                    lhs: q.into(),
                    rhs: e.into(),
                    passed: rel_close(q, e, FERMION_ORACLE_TOL),
                });
            }
        }
    }
    for n in 1..=10 {
        let nf = n as f64;
        let q = gamma_by_quadrature(nf, 1e-13)?;
        let e = gamma_exact(nf).expect("integer N");
        out.push(CheckOutcome {
            suite: "oracle",
            case: format!("gamma N={n}"),
            lhs: q.into(),
            rhs: e.into(),
            passed: rel_close(q, e, GAMMA_ORACLE_TOL),
        });
    }
    Ok(out)
}
