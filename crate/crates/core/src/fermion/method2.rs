//! Expansion about the `N`-dependent saddle of the full exponent.
//!
//! Folding `ln g` into the exponent gives the cubic gap equation
//! `(Ω − ω)Ω(Ω + δω) − λ²(Ω + δω) − λ²Ω/N = 0`, whose roots are expanded as
//! `Ω_c = Ω0 + Ω1/N + Ω2/N² + …`. The leading roots are the two quadratic
//! saddles plus `Ω0 = −δω`; the third one only contributes from two loops on.

use super::method1::quadratic_saddles;
use super::{sign, FermionError, FermionParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchIndex {
    Plus,
    Minus,
    Third,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchExpansion {
    pub omega1: f64,
    pub omega2: f64,
}

/// `A = 3Ω0 − ω + δω`, `B = 3Ω0² − 2(ω − δω)Ω0 − ωδω − λ²`; the expansion
/// exists when `B ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleBranch {
    pub index: BranchIndex,
    pub omega0: f64,
    pub a: f64,
    pub b: f64,
    pub expansion: Option<BranchExpansion>,
}

impl SaddleBranch {
    fn build(index: BranchIndex, omega0: f64, a: f64, b: f64, lambda: f64) -> Self {
        let l2 = lambda * lambda;
        let expansion = (b != 0.0 && b.is_finite()).then(|| {
            let omega1 = l2 * omega0 / b;
            let omega2 = (l2 * omega1 - omega1 * omega1 * a) / b;
            BranchExpansion { omega1, omega2 }
        });
        SaddleBranch { index, omega0, a, b, expansion }
    }

    pub fn expansion(&self) -> Result<BranchExpansion, FermionError> {
        self.expansion.ok_or(FermionError::NonExpandable(self.index))
    }
}

/// The three branches in the order `Ω+`, `Ω−`, `−δω`.
pub fn solve_branches(p: &FermionParams) -> [SaddleBranch; 3] {
    let dw = p.delta_omega();
    let [plus, minus] = quadratic_saddles(p);
    let quad = |index, o: f64| {
        // On a quadratic root B factors as (2Ω0 − ω)(Ω0 + δω).
        let b = (2.0 * o - p.omega) * (o + dw);
        SaddleBranch::build(index, o, 3.0 * o - p.omega + dw, b, p.lambda)
    };
    let third = {
        let o = -dw;
        let b = dw * p.omega0 - p.lambda * p.lambda;
        SaddleBranch::build(BranchIndex::Third, o, 3.0 * o - p.omega + dw, b, p.lambda)
    };
    [quad(BranchIndex::Plus, plus.omega0), quad(BranchIndex::Minus, minus.omega0), third]
}

/// Expansion factors of a quadratic branch.
///
/// `f1[r]`, `f2[r]` are the first and second order corrections of the
/// exponential, power and square-root factors; `p1`, `p2` collect them with
/// the linear prefactor and `l1`, `l2` are the loop-sum corrections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchFactors {
    pub z1: f64,
    pub f1: [f64; 3],
    pub f2: [f64; 3],
    pub p1: f64,
    pub p2: f64,
    pub l1: f64,
    pub l2: f64,
}

impl BranchFactors {
    fn new(p: &FermionParams, branch: &SaddleBranch, e: BranchExpansion) -> Result<Self, FermionError> {
        let nf = p.n as f64;
        let (o0, o1, o2) = (branch.omega0, e.omega1, e.omega2);
        let l2 = p.lambda * p.lambda;
        let d = o0 + p.delta_omega();
        let s = o0 * o0 + l2;
        let u = l2 / s;
        let r1 = o1 / o0;
        let t0 = p.lambda / o0;

        let z1 = sign(o0)? * (-nf * t0 * t0 / 2.0).exp() * o0.powi(p.n as i32 + 1) * d / s.sqrt();

        let f1_1 = -(o1 * o1 + 2.0 * (o0 - p.omega) * o2) / (2.0 * l2);
        let f2_1 = f1_1 * f1_1 / 2.0 - o1 * o2 / l2;
        let f1_2 = o2 / o0 - r1 * r1 / 2.0;
        let f2_2 = f1_2 * f1_2 / 2.0 - o1 * o2 / (o0 * o0) + r1.powi(3) / 3.0;
        let f1_3 = u * (r1 - o0 * o0 / (2.0 * d * d));
        let f2_3 = 1.5 * f1_3 * f1_3 + u * (o2 / o0 + o0 * o0 * o1 / d.powi(3) - 1.5 * r1 * r1);
        let f1 = [f1_1, f1_2, f1_3];
        let f2 = [f2_1, f2_2, f2_3];

        let sum1: f64 = f1.iter().sum();
        let pairs = f1_1 * f1_2 + f1_1 * f1_3 + f1_2 * f1_3;
        let p1 = sum1 + o1 / d;
        let p2 = f2.iter().sum::<f64>() + o2 / d + pairs + o1 / d * sum1;

        let l1 = -0.75 * u * u + 5.0 / 6.0 * u.powi(3);
        let f0_4 = d * d * s;
        let tail = l2 * o0 * o0 / (d * d * s);
        let f1_4 = 2.0 * o1 / d + 2.0 * o0 * o1 / s + tail;
        let r0 = |m: i32| d.powi(m - 2) / s;
        let r1m = |m: i32| (o0 / d).powi(m) + (m - 2) as f64 * o1 / d - 2.0 * o0 * o1 / s - tail;
        let l2_loop = -2.5 * u.powi(3) + 329.0 / 32.0 * u.powi(4) - 105.0 / 8.0 * u.powi(5) + 385.0 / 72.0 * u.powi(6)
            - l1 * f1_4
            - 0.75 * l2 * l2 * r0(4) * r1m(4) / f0_4
            + 5.0 / 3.0 * l2.powi(3) * r0(3) * r0(3) * r1m(3) / f0_4;

        Ok(BranchFactors { z1, f1, f2, p1, p2, l1, l2: l2_loop })
    }

    /// Factors for `branch`, with `Ω2` dropped when `keep_omega2` is false.
    pub fn for_branch(p: &FermionParams, branch: &SaddleBranch, keep_omega2: bool) -> Result<Self, FermionError> {
        let mut e = branch.expansion()?;
        if !keep_omega2 {
            e.omega2 = 0.0;
        }
        Self::new(p, branch, e)
    }
}

fn quadratic_branch_z(p: &FermionParams, branch: &SaddleBranch, l: usize) -> Result<f64, FermionError> {
    let nf = p.n as f64;
    let o0 = branch.omega0;
    let t0 = p.lambda / o0;
    let w = (-nf * t0 * t0 / 2.0).exp() * o0.powi(p.n as i32);
    let d = o0 + p.delta_omega();
    match l {
        0 => Ok(w * d),
        1 => Ok(w * o0.abs() * d / (o0 * o0 + p.lambda * p.lambda).sqrt()),
        2 => {
            let f = BranchFactors::for_branch(p, branch, false)?;
            Ok(f.z1 * (1.0 + (f.p1 + f.l1) / nf))
        }
        3 => {
            let f = BranchFactors::for_branch(p, branch, true)?;
            Ok(f.z1 * (1.0 + (f.p1 + f.l1) / nf + (f.p2 + f.l2 + f.p1 * f.l1) / (nf * nf)))
        }
        _ => Err(FermionError::UnsupportedOrder(l)),
    }
}

/// Contribution of the `Ω0 = −δω` branch; zero below two loops and when
/// `δω = 0`.
pub fn third_branch_z(p: &FermionParams, l: usize) -> Result<f64, FermionError> {
    if l > 3 {
        return Err(FermionError::UnsupportedOrder(l));
    }
    let dw = p.delta_omega();
    if l < 2 || dw == 0.0 {
        return Ok(0.0);
    }
    let branch = solve_branches(p)[2];
    let e = branch.expansion()?;
    let nf = p.n as f64;
    let l2 = p.lambda * p.lambda;
    let (o0, o1, o2) = (branch.omega0, e.omega1, e.omega2);

    let gauss = (-nf * p.omega0 * p.omega0 / (2.0 * l2)).exp();
    if gauss == 0.0 {
        return Ok(0.0);
    }
    let pref = sign(o1)? * gauss * o0.powi(p.n as i32) * o1 * o1 / (std::f64::consts::E * nf.sqrt() * p.lambda);
    let c2 = 13.0 / 12.0;
    let c3 = 313.0 / 288.0;
    if l == 2 {
        return Ok(pref * c2 / nf);
    }
    let r1 = o1 / o0;
    let f1_1 = -(o1 * o1 - 2.0 * p.omega0 * o2) / (2.0 * l2);
    let f1_2 = o2 / o0 - r1 * r1 / 2.0;
    let f1_3 = o2 / o1 - o1 * o1 / (2.0 * l2) - r1 * r1 / 2.0;
    let p2 = f1_1 + f1_2 + f1_3 + o2 / o1;
    let q = r1 * r1 + o1 * o1 / l2;
    Ok(pref * (c3 / nf + (-c2 * q + c3 * p2) / (nf * nf)))
}

/// Per-branch values of the tree (`l = 0`) or `l`-loop approximation.
pub fn method2_branch_values(p: &FermionParams, l: usize) -> Result<Vec<(BranchIndex, f64)>, FermionError> {
    if l > 3 {
        return Err(FermionError::UnsupportedOrder(l));
    }
    let branches = solve_branches(p);
    let mut out = Vec::with_capacity(3);
    for b in &branches[..2] {
        out.push((b.index, quadratic_branch_z(p, b, l)?));
    }
    out.push((BranchIndex::Third, third_branch_z(p, l)?));
    Ok(out)
}

pub fn method2_z(p: &FermionParams, l: usize) -> Result<f64, FermionError> {
    Ok(method2_branch_values(p, l)?.iter().map(|(_, v)| v).sum())
}

/// Three-loop contribution of the third branch at one coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThirdBranchPoint {
    pub omega0: f64,
    pub lambda: f64,
    pub z3: f64,
}

pub fn third_branch_curves(
    n: u32,
    omega: f64,
    omega0_list: &[f64],
    lambda_grid: &[f64],
) -> Result<Vec<ThirdBranchPoint>, FermionError> {
    let mut out = Vec::with_capacity(omega0_list.len() * lambda_grid.len());
    for &omega0 in omega0_list {
        for &lambda in lambda_grid {
            let p = FermionParams::new(n, omega, omega0, lambda)?;
            out.push(ThirdBranchPoint { omega0, lambda, z3: third_branch_z(&p, 3)? });
        }
    }
    Ok(out)
}
