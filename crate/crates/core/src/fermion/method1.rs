//! Expansion about the two roots of `Ω² − ωΩ − λ² = 0`.

use crate::combinatorics::{t_coefficient, SumMode};
use crate::engine::{method1_coefficients, DerivativeJet, EngineError};

use super::FermionParams;

/// One root `Ω0` with `t0 = (Ω0 − ω)/λ = λ/Ω0` and `s = Ω0² + λ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticSaddle {
    pub omega0: f64,
    pub t0: f64,
    pub s: f64,
}

impl QuadraticSaddle {
    fn new(omega0: f64, lambda: f64) -> Self {
        QuadraticSaddle { omega0, t0: lambda / omega0, s: omega0 * omega0 + lambda * lambda }
    }

    /// `e^{−N t0²/2} Ω0^N`, the value of `e^{−N f}` at the saddle.
    fn weight(&self, n: u32) -> f64 {
        let nf = n as f64;
        (-nf * self.t0 * self.t0 / 2.0).exp() * self.omega0.powi(n as i32)
    }
}

/// `[Ω+, Ω−]`. The negative root is formed as `−λ²/Ω+` to avoid cancellation.
pub fn quadratic_saddles(p: &FermionParams) -> [QuadraticSaddle; 2] {
    let plus = (p.omega + (p.omega * p.omega + 4.0 * p.lambda * p.lambda).sqrt()) / 2.0;
    let minus = -p.lambda * p.lambda / plus;
    [QuadraticSaddle::new(plus, p.lambda), QuadraticSaddle::new(minus, p.lambda)]
}

/// `T(L,k|2L−k)` and `T(L,k|2L−k−1)` as floats, `k = 0..=2L`, for each `L < l`.
fn t_pairs(l: usize) -> Vec<Vec<(f64, f64)>> {
    (0..l as u32)
        .map(|big_l| {
            (0..=2 * big_l)
                .map(|k| {
                    let s = 2 * big_l as i64 - k as i64;
                    (
                        t_coefficient(big_l, k, s, SumMode::Exact).to_f64(),
                        t_coefficient(big_l, k, s - 1, SumMode::Exact).to_f64(),
                    )
                })
                .collect()
        })
        .collect()
}

/// Tree (`l = 0`) or `l`-loop value summed over both roots, built from the
/// tabulated `T` coefficients.
pub fn method1_z(p: &FermionParams, l: usize) -> f64 {
    let nf = p.n as f64;
    let dw = p.delta_omega();
    let pairs = t_pairs(l);
    quadratic_saddles(p)
        .iter()
        .map(|sd| {
            let w = sd.weight(p.n);
            let d = sd.omega0 + dw;
            if l == 0 {
                return w * d;
            }
            let u = p.lambda * p.lambda / sd.s;
            let mut series = 0.0;
            for (big_l, row) in pairs.iter().enumerate() {
                let inner: f64 = row
                    .iter()
                    .enumerate()
                    .map(|(k, (t_even, t_odd))| u.powi((big_l + k) as i32) * (d * t_even - sd.omega0 * t_odd))
                    .sum();
                series += inner / nf.powi(big_l as i32);
            }
            w * sd.omega0.abs() / sd.s.sqrt() * series
        })
        .sum()
}

/// Derivatives of `f = t²/2 − ln(ω+λt)` and `g = ω0 + λt` at a root, deep
/// enough for `L = 0..=l_max`.
pub fn fermion_jet(p: &FermionParams, sd: &QuadraticSaddle, l_max: usize) -> DerivativeJet<f64> {
    let top = DerivativeJet::<f64>::required_f_order(l_max);
    let x = -p.lambda / sd.omega0;
    let mut f = Vec::with_capacity(top - 1);
    f.push(1.0 + x * x);
    let mut fact = 1.0;
    for m in 3..=top {
        fact *= (m - 1) as f64;
        f.push(fact * x.powi(m as i32));
    }
    let mut g = vec![0.0; 2 * l_max + 1];
    g[0] = sd.omega0 + p.delta_omega();
    if g.len() > 1 {
        g[1] = p.lambda;
    }
    let f0 = sd.t0 * sd.t0 / 2.0 - sd.omega0.abs().ln();
    DerivativeJet::new(f0, f, g)
}

/// The same quantity as [`method1_z`] computed through the generic engine.
pub fn method1_z_via_engine(p: &FermionParams, l: usize) -> Result<f64, EngineError> {
    let nf = p.n as f64;
    let mut total = 0.0;
    for sd in quadratic_saddles(p) {
        let w = sd.weight(p.n);
        if l == 0 {
            total += w * (sd.omega0 + p.delta_omega());
            continue;
        }
        let jet = fermion_jet(p, &sd, l - 1);
        let series = method1_coefficients(&jet, l - 1)?;
        total += w / series.f2().sqrt() * series.partial_sum(nf, l)?;
    }
    Ok(total)
}
