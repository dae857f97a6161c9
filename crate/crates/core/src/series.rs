//! Truncated power series in one variable with exact rational coefficients.

use crate::arith::Rational;

/// `Σ_{i<len} a_i ε^i`, all arithmetic truncated at the series length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<Rational>, len: usize) -> Self {
        coeffs.resize(len, Rational::zero());
        PowerSeries { coeffs }
    }

    pub fn constant(c: Rational, len: usize) -> Self {
        Self::new(vec![c], len)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        PowerSeries { coeffs }
    }

    pub fn scale(&self, c: &Rational) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.len().min(other.len());
        let mut out = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn pow(&self, exp: u32) -> PowerSeries {
        (0..exp).fold(Self::constant(Rational::one(), self.len()), |acc, _| acc.mul(self))
    }

    /// `exp(a)` for a series with zero constant term, via
    /// `b_n = (1/n) Σ_{k=1}^{n} k a_k b_{n−k}`.
    pub fn exp(&self) -> Option<PowerSeries> {
        if !self.coeffs.first().is_none_or(Rational::is_zero) {
            return None;
        }
        let n = self.len();
        let mut b = vec![Rational::zero(); n];
        if n > 0 {
            b[0] = Rational::one();
        }
        for i in 1..n {
            let acc: Rational = (1..=i)
                .map(|k| Rational::from_integer(k as i64) * &self.coeffs[k] * &b[i - k])
                .sum();
            b[i] = acc.checked_div(&Rational::from_integer(i as i64)).expect("i > 0");
        }
        Some(PowerSeries { coeffs: b })
    }

    /// `(1 − ε)^{−p}` truncated to `len` terms: coefficients C(p+i−1, i).
    pub fn one_minus_eps_pow_neg(p: u32, len: usize) -> PowerSeries {
        let mut coeffs = Vec::with_capacity(len);
        let mut c = Rational::one();
        for i in 0..len {
            coeffs.push(c.clone());
            c = c * Rational::new((p + i as u32) as i64, (i + 1) as i64).expect("positive");
        }
        PowerSeries { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn exp_of_linear_term() {
        let e = PowerSeries::new(vec![q(0, 1), q(1, 1)], 5).exp().unwrap();
        assert_eq!(e.coeffs(), &[q(1, 1), q(1, 1), q(1, 2), q(1, 6), q(1, 24)]);
        assert!(PowerSeries::constant(q(1, 1), 3).exp().is_none());
    }

    #[test]
    fn geometric_inverse() {
        let one_minus = PowerSeries::new(vec![q(1, 1), q(-1, 1)], 6);
        let inv3 = PowerSeries::one_minus_eps_pow_neg(3, 6);
        assert_eq!(one_minus.pow(3).mul(&inv3), PowerSeries::constant(q(1, 1), 6));
        assert_eq!(PowerSeries::one_minus_eps_pow_neg(0, 3), PowerSeries::constant(q(1, 1), 3));
    }

    #[test]
    fn exp_log_roundtrip() {
        // exp(−Σ ε^j/j) = 1 − ε.
        let log: Vec<Rational> = (0..8).map(|j| if j == 0 { q(0, 1) } else { q(-1, j) }).collect();
        let e = PowerSeries::new(log, 8).exp().unwrap();
        assert_eq!(e, PowerSeries::new(vec![q(1, 1), q(-1, 1)], 8));
    }
}
