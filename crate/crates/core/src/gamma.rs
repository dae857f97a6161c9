//! The Gamma function as a saddle-point integral,
//! `Γ(N) = N^N ∫₀^∞ dt t^{−1} e^{−N(t − ln t)}`, expanded at `t0 = 1`.

use std::sync::OnceLock;

use thiserror::Error;

use crate::arith::{factorial, Rational};
use crate::combinatorics::n_of_l;
use crate::engine::{method1_coefficients, method2_coefficients, DerivativeJet, EngineError};
use crate::quadrature::{integrate, Integrand, QuadratureError};
use crate::series::PowerSeries;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GammaError {
    #[error("N must be positive, got {0}")]
    NonPositiveN(f64),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Largest order whose coefficients are kept precomputed.
pub const CACHED_ORDER: usize = 14;

fn alternating_factorial(n: u32) -> Rational {
    let v = Rational::from_integer(factorial(n));
    if n % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Jet of `f = t − ln t`, `g = 1/t` at `t = 1`:
/// `f^(n) = (−1)^n (n−1)!` for `n ≥ 2`, `g^(m) = (−1)^m m!`.
pub fn gamma_jet(l_max: usize) -> DerivativeJet<Rational> {
    let top = DerivativeJet::<Rational>::required_f_order(l_max) as u32;
    let f = (2..=top).map(|n| -alternating_factorial(n - 1)).collect();
    let g = (0..=2 * l_max as u32).map(alternating_factorial).collect();
    DerivativeJet::new(Rational::one(), f, g)
}

/// Coefficients of `Γ(N) ≈ N^N e^{−N} √(2π/N) Σ_L c_L/N^L`, `L = 0..=l_max`.
pub fn stirling_coefficients(l_max: usize) -> Vec<Rational> {
    method1_coefficients(&gamma_jet(l_max), l_max).expect("gamma jet is complete and stable").coeffs().to_vec()
}

fn coefficients_f64(count: usize) -> Vec<f64> {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    let cached = CACHE.get_or_init(|| stirling_coefficients(CACHED_ORDER).iter().map(Rational::to_f64).collect());
    if count <= cached.len() {
        cached[..count].to_vec()
    } else {
        stirling_coefficients(count - 1).iter().map(Rational::to_f64).collect()
    }
}

/// One approximation of Γ(N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaEval {
    pub n: f64,
    /// 0 is tree level, otherwise the loop order.
    pub l: usize,
    pub approx: f64,
    /// `(N−1)!` when `N` is a positive integer.
    pub exact: Option<f64>,
    pub ratio: Option<f64>,
}

/// `(N−1)!` for positive integers `N`.
pub fn gamma_exact(n: f64) -> Option<f64> {
    if n >= 1.0 && n.fract() == 0.0 && n <= 171.0 {
        Some(Rational::from_integer(factorial(n as u32 - 1)).to_f64())
    } else {
        None
    }
}

/// Tree (`l = 0`) or `l`-loop approximation of Γ(N).
pub fn gamma_l_loop(n: f64, l: usize) -> Result<GammaEval, GammaError> {
    if !(n > 0.0) {
        return Err(GammaError::NonPositiveN(n));
    }
    let base = (n * (n.ln() - 1.0)).exp();
    let approx = if l == 0 {
        base
    } else {
        let sum: f64 = coefficients_f64(l).iter().enumerate().map(|(i, c)| c / n.powi(i as i32)).sum();
        base * (2.0 * std::f64::consts::PI / n).sqrt() * sum
    };
    let exact = gamma_exact(n);
    Ok(GammaEval { n, l, approx, exact, ratio: exact.map(|e| approx / e) })
}

/// Rows ordered by loop order (tree first), then by `n_list` order.
pub fn gamma_table(n_list: &[f64], loops: usize) -> Result<Vec<GammaEval>, GammaError> {
    let mut rows = Vec::with_capacity((loops + 1) * n_list.len());
    for l in 0..=loops {
        for &n in n_list {
            rows.push(gamma_l_loop(n, l)?);
        }
    }
    Ok(rows)
}

/// Ratio of the `(L+1)`-loop value to Γ(N).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub order: usize,
    pub n: f64,
    pub ratio: f64,
}

/// Points for `L = 0..=l_max` and each integer `N` in `n_list`.
pub fn ratio_curves(n_list: &[f64], l_max: usize) -> Result<Vec<RatioPoint>, GammaError> {
    let mut out = Vec::new();
    for order in 0..=l_max {
        for &n in n_list {
            let e = gamma_l_loop(n, order + 1)?;
            let ratio = e.ratio.ok_or(GammaError::NonPositiveN(n))?;
            out.push(RatioPoint { order, n, ratio });
        }
    }
    Ok(out)
}

/// Exact comparison of the shifted-saddle expansion with `n(L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Method2GammaReport {
    /// Series of the prefactor in `ε = 1/N`, after `e^{−N}√(2π/N)`.
    pub prefactor: Vec<Rational>,
    /// `Σ_L c̃_L ε^L (1−ε)^{−L}`.
    pub loop_factor: Vec<Rational>,
    /// Product of the two.
    pub combined: Vec<Rational>,
    /// `n(L)` from the coefficient tables.
    pub expected: Vec<Rational>,
}

impl Method2GammaReport {
    pub fn passed(&self) -> bool {
        self.combined == self.expected
    }
}

/// With `f̃ = t − (1 − 1/N) ln t` the saddle moves to `t_c = 1 − ε`. The
/// prefactor becomes `e^{−N}√(2π/N) exp(Σ_j ε^j (1−j)/(2j(j+1)))` and the
/// loop coefficients pick up `t_c^{−L}`; their product must reproduce `n(L)`.
pub fn method2_gamma_check(l_max: usize) -> Method2GammaReport {
    let len = l_max + 1;
    let log_prefactor: Vec<Rational> = (0..len as i64)
        .map(|j| if j == 0 { Rational::zero() } else { Rational::new(1 - j, 2 * j * (j + 1)).expect("j > 0") })
        .collect();
    let prefactor = PowerSeries::new(log_prefactor, len).exp().expect("no constant term");

    // f̃^(n)(t_c) = (−1)^n (n−1)! t_c^{1−n}; the t_c powers are restored below.
    let top = DerivativeJet::<Rational>::required_f_order(l_max) as u32;
    let jet = DerivativeJet::without_prefactor(Rational::one(), (2..=top).map(|n| -alternating_factorial(n - 1)).collect());
    let reduced = method2_coefficients(&jet, l_max).expect("jet is complete and stable");

    let mut loop_factor = PowerSeries::constant(Rational::zero(), len);
    for (l, c) in reduced.coeffs().iter().enumerate() {
        let mut shifted = vec![Rational::zero(); l];
        shifted.extend(PowerSeries::one_minus_eps_pow_neg(l as u32, len).coeffs().iter().cloned());
        loop_factor = loop_factor.add(&PowerSeries::new(shifted, len).scale(c));
    }
    let combined = prefactor.mul(&loop_factor);
    Method2GammaReport {
        prefactor: prefactor.coeffs().to_vec(),
        loop_factor: loop_factor.coeffs().to_vec(),
        combined: combined.coeffs().to_vec(),
        expected: (0..len as u32).map(n_of_l).collect(),
    }
}

/// `Γ(N) = N^N ∫₀^∞ t^{−1} e^{−N(t − ln t)} dt` by quadrature.
pub fn gamma_by_quadrature(n: f64, rel_tol: f64) -> Result<f64, GammaError> {
    if !(n > 0.0) {
        return Err(GammaError::NonPositiveN(n));
    }
    let q = integrate(&Integrand::Gamma { n, prefactor: true }, rel_tol)?;
    Ok((n * n.ln()).exp() * q.value)
}

/// Both sides of `∫ e^{−N(t−ln t)} dt = ∫ t^{−1} e^{−N(t−ln t)} dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GElimination {
    pub n: f64,
    pub without_prefactor: f64,
    pub with_prefactor: f64,
    pub rel_diff: f64,
}

pub fn g_elimination_check(n_grid: &[f64], rel_tol: f64) -> Result<Vec<GElimination>, GammaError> {
    n_grid
        .iter()
        .map(|&n| {
            if !(n > 0.0) {
                return Err(GammaError::NonPositiveN(n));
            }
            let without = integrate(&Integrand::Gamma { n, prefactor: false }, rel_tol)?.value;
            let with = integrate(&Integrand::Gamma { n, prefactor: true }, rel_tol)?.value;
            Ok(GElimination { n, without_prefactor: without, with_prefactor: with, rel_diff: (without / with - 1.0).abs() })
        })
        .collect()
}
