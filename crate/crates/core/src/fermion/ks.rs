//! The single-fermion variant with no linear prefactor:
//! `Z = √(N/2π) ∫ dt (ω + λt)^N e^{−N t²/2}`.

use crate::engine::{method1_coefficients, DerivativeJet};

use super::method1::quadratic_saddles;
use super::{ApproxCell, FermionError, FermionParams, FermionRow};

fn params(n: u32, omega: f64, lambda: f64) -> Result<FermionParams, FermionError> {
    // ω0 plays no role here; any positive value passes validation.
    FermionParams::new(n, omega, 1.0, lambda)
}

/// Tree (`l = 0`) or `l`-loop value from the engine with `g ≡ 1`.
pub fn ks_model_z(n: u32, omega: f64, lambda: f64, l: usize) -> Result<f64, FermionError> {
    let p = params(n, omega, lambda)?;
    let nf = n as f64;
    let mut total = 0.0;
    for sd in quadratic_saddles(&p) {
        let w = (-nf * sd.t0 * sd.t0 / 2.0).exp() * sd.omega0.powi(n as i32);
        if l == 0 {
            total += w;
            continue;
        }
        let x = -lambda / sd.omega0;
        let top = DerivativeJet::<f64>::required_f_order(l - 1);
        let mut f = vec![1.0 + x * x];
        let mut fact = 1.0;
        for m in 3..=top {
            fact *= (m - 1) as f64;
            f.push(fact * x.powi(m as i32));
        }
        let jet = DerivativeJet::without_prefactor(sd.t0 * sd.t0 / 2.0 - sd.omega0.abs().ln(), f);
        let series = method1_coefficients(&jet, l - 1)?;
        total += w / series.f2().sqrt() * series.partial_sum(nf, l)?;
    }
    Ok(total)
}

/// `Σ_r C(N,2r) ω^{N−2r} λ^{2r} (2r−1)!!/N^r`.
pub fn ks_exact(n: u32, omega: f64, lambda: f64) -> f64 {
    let nf = n as f64;
    let mut total = 0.0;
    let mut a = 1.0;
    for r in 0..=n / 2 {
        let j = n - 2 * r;
        total += a * omega.powi(j as i32);
        a *= (j as f64) * (j as f64 - 1.0) / (2.0 * (r as f64 + 1.0) * nf) * lambda * lambda;
    }
    total
}

/// Rows for each coupling in `lambda_grid` (already in the model's own
/// normalisation), loop orders `0..=loops`.
pub fn ks_table(n: u32, omega: f64, lambda_grid: &[f64], loops: usize) -> Result<Vec<FermionRow>, FermionError> {
    lambda_grid
        .iter()
        .map(|&lambda| {
            let exact = ks_exact(n, omega, lambda);
            let cells = (0..=loops)
                .map(|l| {
                    let value = ks_model_z(n, omega, lambda, l)?;
                    Ok(ApproxCell { value, ratio: value / exact })
                })
                .collect::<Result<Vec<_>, FermionError>>()?;
            Ok(FermionRow { lambda, exact, cells })
        })
        .collect()
}
