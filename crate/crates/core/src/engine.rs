//! Model-independent loop expansion of
//! `∫ dt g(t) exp(−N f(t))` around a stable saddle `t0` of `f`.
//!
//! With `x = √(N f2) (t − t0)` the integral becomes
//! `exp(−N f0) √(2π/(N f2)) Σ_L c_L / N^L`, where
//!
//! ```text
//! c_L = Σ_{k=0}^{2L} (−1)^k (2(L+k)−1)!! / f2^(L+k)
//!       Σ_{multisets, ΣQ=k, ΣQA ≤ 2L−k} ∏ (f^(A+3)/(A+3)!)^Q / Q!  ·  g^(m)/m!
//! ```
//!
//! and `m = 2L − k − ΣQA`. Method II drops `g` (it lives inside `f̃`), which
//! keeps only the `m = 0` terms.

use thiserror::Error;

use crate::arith::{double_factorial, factorial, Rational, Scalar};
use crate::combinatorics::{enumerate_multisets, SumMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("saddle is not stable: f''(t0) = {0} must be positive")]
    Unstable(f64),
    #[error("derivative jet too short: {function}^({order}) is required")]
    MissingDerivative { function: char, order: usize },
    #[error("requested {requested}-loop but the series only holds {available} coefficients")]
    OrderExceeded { requested: usize, available: usize },
    #[error("odd Gaussian moment x^{0} requested")]
    OddMoment(u32),
    #[error("method II expects a jet without a prefactor g")]
    UnexpectedPrefactor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Prefactor `g` expanded around the saddle of `f`.
    I,
    /// `g ≡ 1`; the saddle is that of `f̃`.
    II,
}

/// Values of `f` and `g` and their derivatives at the saddle.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeJet<S> {
    f0: S,
    f_derivs: Vec<S>,
    g_derivs: Option<Vec<S>>,
}

impl<S: Scalar> DerivativeJet<S> {
    /// `f_derivs = [f^(2), f^(3), …]`, `g_derivs = [g, g', g'', …]`.
    pub fn new(f0: S, f_derivs: Vec<S>, g_derivs: Vec<S>) -> Self {
        DerivativeJet { f0, f_derivs, g_derivs: Some(g_derivs) }
    }

    /// A jet with `g ≡ 1`.
    pub fn without_prefactor(f0: S, f_derivs: Vec<S>) -> Self {
        DerivativeJet { f0, f_derivs, g_derivs: None }
    }

    pub fn f0(&self) -> &S {
        &self.f0
    }

    /// `f^(n)` for `n ≥ 2`.
    pub fn f_deriv(&self, n: usize) -> Option<&S> {
        n.checked_sub(2).and_then(|i| self.f_derivs.get(i))
    }

    /// `g^(m)`; a jet without prefactor reports the derivatives of 1.
    pub fn g_deriv(&self, m: usize) -> Option<S> {
        match &self.g_derivs {
            Some(g) => g.get(m).cloned(),
            None => Some(if m == 0 { S::one() } else { S::zero() }),
        }
    }

    pub fn has_prefactor(&self) -> bool {
        self.g_derivs.is_some()
    }

    /// Highest `f` order the expansion through `l_max` touches.
    pub fn required_f_order(l_max: usize) -> usize {
        if l_max == 0 {
            2
        } else {
            2 * l_max + 2
        }
    }

    fn check(&self, l_max: usize) -> Result<S, EngineError> {
        let f2 = self.f_deriv(2).ok_or(EngineError::MissingDerivative { function: 'f', order: 2 })?;
        if !f2.is_positive() {
            return Err(EngineError::Unstable(f2.to_f64()));
        }
        let need_f = Self::required_f_order(l_max);
        if self.f_deriv(need_f).is_none() {
            let order = self.f_derivs.len() + 2;
            return Err(EngineError::MissingDerivative { function: 'f', order });
        }
        if let Some(g) = &self.g_derivs {
            if g.len() < 2 * l_max + 1 {
                return Err(EngineError::MissingDerivative { function: 'g', order: g.len() });
            }
        }
        Ok(f2.clone())
    }
}

/// `exp(−N f0) √(2π/(N f2)) Σ c_L/N^L` with the N-dependence kept symbolic.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopSeries<S> {
    mode: Method,
    f0: S,
    f2: S,
    coeffs: Vec<S>,
}

impl<S: Scalar> LoopSeries<S> {
    pub fn mode(&self) -> Method {
        self.mode
    }

    pub fn f0(&self) -> &S {
        &self.f0
    }

    pub fn f2(&self) -> &S {
        &self.f2
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn l_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `Σ_{L<l} c_L / N^L`.
    pub fn partial_sum(&self, n: f64, l: usize) -> Result<f64, EngineError> {
        if l > self.coeffs.len() {
            return Err(EngineError::OrderExceeded { requested: l, available: self.coeffs.len() });
        }
        Ok(self.coeffs[..l].iter().enumerate().map(|(i, c)| c.to_f64() / n.powi(i as i32)).sum())
    }
}

/// `∫ x^p e^{−x²/2} dx / √(2π) = (p−1)!!` for even `p`.
pub fn gaussian_moment(p: u32) -> Result<Rational, EngineError> {
    if p % 2 == 1 {
        return Err(EngineError::OddMoment(p));
    }
    Ok(Rational::from_integer(double_factorial(p as i64 - 1).expect("p ≥ 0")))
}

fn inverse_factorial(n: u32) -> Rational {
    Rational::new(1, factorial(n)).expect("positive")
}

fn expand<S: Scalar>(jet: &DerivativeJet<S>, l_max: usize, mode: Method) -> Result<LoopSeries<S>, EngineError> {
    let f2 = jet.check(l_max)?;
    let top = 2 * l_max as u32;
    let g_taylor: Vec<S> = (0..=top)
        .map(|m| jet.g_deriv(m as usize).expect("checked") * S::from_rational(&inverse_factorial(m)))
        .collect();
    // powers[a][q] = (f^(a+3)/(a+3)!)^q / q!
    let powers: Vec<Vec<S>> = (0..top)
        .map(|a| {
            let v = jet.f_deriv(a as usize + 3).expect("checked").clone() * S::from_rational(&inverse_factorial(a + 3));
            let mut row = vec![S::one()];
            for q in 1..=top {
                let next = row[q as usize - 1].clone() * v.clone() * S::from_rational(&Rational::new(1, q).expect("q > 0"));
                row.push(next);
            }
            row
        })
        .collect();
    // vertex_sum[k][w]: Σ over multisets of k labels with weight w of ∏ powers[A][Q].
    // Each class is enumerated once and shared by every L.
    let vertex_sum: Vec<Vec<S>> = (0..=top)
        .map(|k| {
            (0..=top - k)
                .map(|w| {
                    enumerate_multisets(k, w, SumMode::Exact).iter().fold(S::zero(), |acc, ms| {
                        acc + ms.parts().iter().fold(S::one(), |t, &(a, q)| t * powers[a as usize][q as usize].clone())
                    })
                })
                .collect()
        })
        .collect();

    let mut coeffs = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max as u32 {
        let mut c_l = S::zero();
        for k in 0..=2 * l {
            let budget = 2 * l - k;
            let lowest = match mode {
                Method::I => 0,
                Method::II => budget,
            };
            let mut inner = S::zero();
            for w in lowest..=budget {
                inner = inner + g_taylor[(budget - w) as usize].clone() * vertex_sum[k as usize][w as usize].clone();
            }
            // Power of x: (budget − w) from g plus w + 3k from the vertices.
            let mu = gaussian_moment(budget + 3 * k)?;
            let signed = if k % 2 == 0 { mu } else { -mu };
            let scaled = (S::from_rational(&signed) * inner)
                .checked_div(&f2.powu(l + k))
                .expect("f2 is positive");
            c_l = c_l + scaled;
        }
        coeffs.push(c_l);
    }
    Ok(LoopSeries { mode, f0: jet.f0.clone(), f2, coeffs })
}

/// Method I coefficients `c_0..c_{l_max}`. A jet without prefactor is
/// treated as `g ≡ 1`.
pub fn method1_coefficients<S: Scalar>(jet: &DerivativeJet<S>, l_max: usize) -> Result<LoopSeries<S>, EngineError> {
    expand(jet, l_max, Method::I)
}

/// Method II coefficients of a jet of `f̃` (no prefactor).
pub fn method2_coefficients<S: Scalar>(jet: &DerivativeJet<S>, l_max: usize) -> Result<LoopSeries<S>, EngineError> {
    if jet.has_prefactor() {
        return Err(EngineError::UnexpectedPrefactor);
    }
    expand(jet, l_max, Method::II)
}

/// Tree (`l = 0`) or `l`-loop value of the integral at size `n`.
pub fn evaluate_l_loop<S: Scalar>(series: &LoopSeries<S>, n: f64, l: usize) -> Result<f64, EngineError> {
    let weight = (-n * series.f0.to_f64()).exp();
    if l == 0 {
        return Ok(weight * series.coeffs[0].to_f64());
    }
    let gauss = (2.0 * std::f64::consts::PI / (n * series.f2.to_f64())).sqrt();
    Ok(weight * gauss * series.partial_sum(n, l)?)
}
