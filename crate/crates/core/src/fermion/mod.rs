//! The two-level four-fermi model with `N` degenerate species.
//!
//! After the auxiliary-field rewrite the partition function is
//!
//! ```text
//! Z = √(N/2π) ∫ dt (ω0 + λt) (ω + λt)^N e^{−N t²/2}
//! ```
//!
//! so `f(t) = t²/2 − ln(ω + λt)` and `g(t) = ω0 + λt`. In terms of
//! `Ω = ω + λt` the quadratic saddles solve `Ω² − ωΩ − λ² = 0`.

mod ks;
mod method1;
mod method2;

use thiserror::Error;

use crate::arith::{binomial, Rational, Scalar};
use crate::engine::EngineError;
use crate::quadrature::{integrate, Integrand, QuadratureError};

pub use ks::{ks_exact, ks_model_z, ks_table};
pub use method1::{fermion_jet, method1_z, method1_z_via_engine, quadratic_saddles, QuadraticSaddle};
pub use method2::{
    third_branch_curves, method2_branch_values, method2_z, solve_branches, third_branch_z, BranchExpansion, BranchFactors,
    BranchIndex, ThirdBranchPoint, SaddleBranch,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FermionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("sign of an exact zero is undefined")]
    ZeroSign,
    #[error("saddle branch {0:?} has B = 0 and no 1/N expansion")]
    NonExpandable(BranchIndex),
    #[error("loop order {0} is not available for this method (0..=3)")]
    UnsupportedOrder(usize),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Model parameters; `delta_omega = omega0 − omega` may have any sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionParams {
    pub n: u32,
    pub omega: f64,
    pub omega0: f64,
    pub lambda: f64,
}

impl FermionParams {
    pub fn new(n: u32, omega: f64, omega0: f64, lambda: f64) -> Result<Self, FermionError> {
        if n == 0 {
            return Err(FermionError::InvalidParams("N must be a positive integer".into()));
        }
        for (name, v) in [("omega", omega), ("omega0", omega0), ("lambda", lambda)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(FermionError::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(FermionParams { n, omega, omega0, lambda })
    }

    pub fn delta_omega(&self) -> f64 {
        self.omega0 - self.omega
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }
}

/// Strict sign: ±1, error at zero.
pub fn sign(x: f64) -> Result<f64, FermionError> {
    if x > 0.0 {
        Ok(1.0)
    } else if x < 0.0 {
        Ok(-1.0)
    } else {
        Err(FermionError::ZeroSign)
    }
}

/// Closed form
/// `Σ_r N!/(r!(N−2r)!) (ω0 ω^{N−2r} + λ²(N−2r)/N ω^{N−2r−1}) (λ²/2N)^r`
/// in any number semantics.
pub fn exact_partition_generic<S: Scalar>(n: u32, omega: &S, omega0: &S, lambda_sq: &S) -> S {
    let mut total = S::zero();
    // a_r = N!/(r!(N−2r)!) (λ²/2N)^r by its ratio recurrence, so no large
    // factorials reach floating point.
    let mut a = S::one();
    for r in 0..=n / 2 {
        let j = n - 2 * r;
        let mut bracket = omega0.clone() * omega.powu(j);
        if j > 0 {
            let w = S::from_rational(&Rational::new(j as i64, n as i64).expect("n > 0"));
            bracket = bracket + lambda_sq.clone() * w * omega.powu(j - 1);
        }
        total = total + a.clone() * bracket;
        if j >= 2 {
            let step = Rational::new(j as i64 * (j as i64 - 1), 2 * (r as i64 + 1) * n as i64).expect("n > 0");
            a = a * S::from_rational(&step) * lambda_sq.clone();
        }
    }
    total
}

pub fn exact_partition(p: &FermionParams) -> f64 {
    exact_partition_generic(p.n, &p.omega, &p.omega0, &(p.lambda * p.lambda))
}

/// Exact value for rational `ω`, `ω0`, `λ²`.
pub fn exact_partition_rational(n: u32, omega: &Rational, omega0: &Rational, lambda_sq: &Rational) -> Rational {
    exact_partition_generic(n, omega, omega0, lambda_sq)
}

/// Gaussian-moment form of the same integral: `E[(ω0+λt)(ω+λt)^N]` for
/// `t ~ N(0, 1/N)`, expanded binomially. Used as an independent check.
pub fn exact_partition_by_moments(n: u32, omega: &Rational, omega0: &Rational, lambda: &Rational) -> Rational {
    // Coefficients of the polynomial (ω0 + λt)(ω + λt)^N in t.
    let mut poly = vec![Rational::zero(); n as usize + 2];
    for j in 0..=n {
        let c = Rational::from_integer(binomial(n, j)) * omega.powu(n - j) * lambda.powu(j);
        poly[j as usize] = &poly[j as usize] + &(omega0 * &c);
        poly[j as usize + 1] = &poly[j as usize + 1] + &(lambda * &c);
    }
    let nn = Rational::from_integer(n as i64);
    poly.iter()
        .enumerate()
        .filter(|(p, _)| p % 2 == 0)
        .map(|(p, c)| {
            let r = (p / 2) as i32;
            let moment = Rational::from_integer(crate::arith::double_factorial(p as i64 - 1).expect("p ≥ 0"));
            c * &(moment * nn.pow(-r).expect("n > 0"))
        })
        .sum()
}

/// `√(N/2π) ∫ (ω0+λt)(ω+λt)^N e^{−Nt²/2} dt` by quadrature.
pub fn partition_by_quadrature(p: &FermionParams, rel_tol: f64) -> Result<f64, FermionError> {
    let ig = Integrand::Fermion { n: p.nf(), omega: p.omega, omega0: p.omega0, lambda: p.lambda };
    let q = integrate(&ig, rel_tol)?;
    Ok((p.nf() / (2.0 * std::f64::consts::PI)).sqrt() * q.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaddleMethod {
    I,
    II,
}

/// One approximation and its ratio to the exact value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxCell {
    pub value: f64,
    pub ratio: f64,
}

/// One coupling of a fermion or KS table: the exact value and the tree..l
/// approximations.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionRow {
    pub lambda: f64,
    pub exact: f64,
    pub cells: Vec<ApproxCell>,
}

/// Rows for each `λ` in `lambda_grid`, loop orders `0..=loops`.
pub fn fermion_table(
    method: SaddleMethod,
    n: u32,
    omega: f64,
    omega0: f64,
    lambda_grid: &[f64],
    loops: usize,
) -> Result<Vec<FermionRow>, FermionError> {
    lambda_grid
        .iter()
        .map(|&lambda| {
            let p = FermionParams::new(n, omega, omega0, lambda)?;
            let exact = exact_partition(&p);
            let cells = (0..=loops)
                .map(|l| {
                    let value = match method {
                        SaddleMethod::I => method1_z(&p, l),
                        SaddleMethod::II => method2_z(&p, l)?,
                    };
                    Ok(ApproxCell { value, ratio: value / exact })
                })
                .collect::<Result<Vec<_>, FermionError>>()?;
            Ok(FermionRow { lambda, exact, cells })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn exact_examples() {
        let p = FermionParams::new(2, 1.0, 1.0, 1.0).unwrap();
        assert!((exact_partition(&p) - 2.5).abs() < 1e-14);
        let p = FermionParams::new(2, 1.0, 100.0, 10.0).unwrap();
        assert!((exact_partition(&p) / 5200.0 - 1.0).abs() < 1e-14);
        let p = FermionParams::new(2, 1.0, 1.0, 1e-9).unwrap();
        assert!((exact_partition(&p) - 1.0).abs() < 1e-12);
        assert_eq!(exact_partition_rational(2, &q(1, 1), &q(1, 1), &q(1, 1)), q(5, 2));
    }

    #[test]
    fn closed_form_matches_moment_oracle() {
        let grid = [q(1, 1), q(1, 100), q(100, 1), q(3, 7)];
        for n in 1..=7 {
            for omega0 in &grid {
                for lambda in [q(1, 1000), q(1, 10), q(1, 1), q(10, 1), q(5, 3)] {
                    let omega = q(1, 1);
                    let lhs = exact_partition_rational(n, &omega, omega0, &(&lambda * &lambda));
                    let rhs = exact_partition_by_moments(n, &omega, omega0, &lambda);
                    assert_eq!(lhs, rhs, "n={n} omega0={omega0} lambda={lambda}");
                }
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(FermionParams::new(0, 1.0, 1.0, 1.0).is_err());
        assert!(FermionParams::new(2, 1.0, -1.0, 1.0).is_err());
        assert!(FermionParams::new(2, 1.0, 1.0, 0.0).is_err());
        assert!(FermionParams::new(2, f64::NAN, 1.0, 1.0).is_err());
        assert_eq!(FermionParams::new(2, 1.0, 0.25, 1.0).unwrap().delta_omega(), -0.75);
    }

    #[test]
    fn strict_sign() {
        assert_eq!(sign(2.0), Ok(1.0));
        assert_eq!(sign(-0.1), Ok(-1.0));
        assert_eq!(sign(0.0), Err(FermionError::ZeroSign));
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let p = FermionParams::new(3, 1.0, 0.01, 2.0).unwrap();
        let z = partition_by_quadrature(&p, 1e-12).unwrap();
        assert!((z / exact_partition(&p) - 1.0).abs() < 1e-9);
    }
}
