//! Constrained multisets and the exact coefficients T(L,k|s).
//!
//! A multiset `{(A_α, Q_α)}` stands for `k = Σ Q_α` vertex labels `n_j`
//! where the value `A_α` occurs `Q_α` times. Its weight is `Σ Q_α A_α`.
//!
//! ```text
//! T(L,k|s)  = (−1)^k (2(L+k)−1)!!  Σ_{ΣQ=k, ΣQA=s}  ∏ 1/(Q_α! (A_α+3)^Q_α)
//! T(L,k|≤s) = same with ΣQA ≤ s
//! ```

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{double_factorial, factorial, Rational};

/// How the weight of a multiset is compared with the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SumMode {
    /// `Σ Q_α A_α = s`
    Exact,
    /// `Σ Q_α A_α ≤ s`
    AtMost,
}

/// A multiset of non-negative labels stored as `(value, multiplicity)` pairs
/// with strictly increasing values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstrainedMultiset {
    parts: Vec<(u32, u32)>,
    size: u32,
    weight: u32,
}

impl ConstrainedMultiset {
    pub fn empty() -> Self {
        ConstrainedMultiset { parts: Vec::new(), size: 0, weight: 0 }
    }

    /// Validates strictly increasing values and positive multiplicities.
    pub fn from_parts(parts: Vec<(u32, u32)>) -> Option<Self> {
        if parts.iter().any(|&(_, q)| q == 0) || parts.windows(2).any(|w| w[0].0 >= w[1].0) {
            return None;
        }
        let size = parts.iter().map(|&(_, q)| q).sum();
        let weight = parts.iter().map(|&(a, q)| a * q).sum();
        Some(ConstrainedMultiset { parts, size, weight })
    }

    /// Builds the multiset from any ordering of its labels.
    pub fn from_labels(labels: &[u32]) -> Self {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        let mut parts: Vec<(u32, u32)> = Vec::new();
        for a in sorted {
            match parts.last_mut() {
                Some((v, q)) if *v == a => *q += 1,
                _ => parts.push((a, 1)),
            }
        }
        Self::from_parts(parts).expect("sorted labels form a valid multiset")
    }

    pub fn parts(&self) -> &[(u32, u32)] {
        &self.parts
    }

    /// `Σ Q_α`, the number of labels `k`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// `Σ Q_α A_α`.
    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Labels in non-decreasing order.
    pub fn labels(&self) -> Vec<u32> {
        self.parts.iter().flat_map(|&(a, q)| std::iter::repeat(a).take(q as usize)).collect()
    }

    /// `∏ 1/(Q_α! (A_α+3)^Q_α)`.
    pub fn t_weight(&self) -> Rational {
        let den = self.parts.iter().fold(BigInt::one(), |acc, &(a, q)| {
            acc * factorial(q) * num_traits::pow(BigInt::from(a + 3), q as usize)
        });
        Rational::new(1, den).expect("positive denominator")
    }

    /// `∏ 1/Q_α!`, the tuple-count factor `1/k!` times the multinomial.
    pub fn symmetry_factor(&self) -> Rational {
        let den = self.parts.iter().fold(BigInt::one(), |acc, &(_, q)| acc * factorial(q));
        Rational::new(1, den).expect("positive denominator")
    }
}

/// All multisets of `k` labels whose weight matches `s` under `mode`, in
/// lexicographic order of their sorted label sequences.
pub fn enumerate_multisets(k: u32, s: u32, mode: SumMode) -> Vec<ConstrainedMultiset> {
    let mut out = Vec::new();
    let mut labels = Vec::with_capacity(k as usize);
    descend(k, s, 0, mode, &mut labels, &mut out);
    out
}

fn descend(
    remaining: u32,
    budget: u32,
    min_label: u32,
    mode: SumMode,
    labels: &mut Vec<u32>,
    out: &mut Vec<ConstrainedMultiset>,
) {
    if remaining == 0 {
        if mode == SumMode::AtMost || budget == 0 {
            out.push(ConstrainedMultiset::from_labels(labels));
        }
        return;
    }
    // Every remaining label is at least `a`.
    let mut a = min_label;
    while a * remaining <= budget {
        labels.push(a);
        descend(remaining - 1, budget - a, a, mode, labels, out);
        labels.pop();
        a += 1;
    }
}

/// One memoized coefficient with its key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TCoefficient {
    pub l: u32,
    pub k: u32,
    pub target: i64,
    pub mode: SumMode,
    pub value: Rational,
}

impl TCoefficient {
    /// `value / (2(L+k)−1)!!`, the normalization of the printed tables.
    pub fn normalized(&self) -> Rational {
        let df = double_factorial(2 * (self.l as i64 + self.k as i64) - 1).expect("non-negative");
        self.value.checked_div(&Rational::from_integer(df)).expect("nonzero double factorial")
    }
}

type Key = (u32, u32, i64, SumMode);

fn cache() -> &'static RwLock<HashMap<Key, Rational>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Rational>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// T(L,k|s) or T(L,k|≤s). A negative target gives 0.
pub fn t_coefficient(l: u32, k: u32, s: i64, mode: SumMode) -> Rational {
    let key = (l, k, s, mode);
    if let Some(v) = cache().read().expect("cache lock").get(&key) {
        return v.clone();
    }
    let value = compute_t(l, k, s, mode);
    cache().write().expect("cache lock").insert(key, value.clone());
    value
}

fn compute_t(l: u32, k: u32, s: i64, mode: SumMode) -> Rational {
    if s < 0 {
        return Rational::zero();
    }
    let sum: Rational = enumerate_multisets(k, s as u32, mode).iter().map(|m| m.t_weight()).sum();
    if sum.is_zero() {
        return sum;
    }
    let df = double_factorial(2 * (l as i64 + k as i64) - 1).expect("non-negative");
    let signed = if k % 2 == 0 { Rational::from_integer(df) } else { -Rational::from_integer(df) };
    signed * sum
}

/// The full coefficient record for T(L,k|s).
pub fn t_entry(l: u32, k: u32, s: i64, mode: SumMode) -> TCoefficient {
    TCoefficient { l, k, target: s, mode, value: t_coefficient(l, k, s, mode) }
}

/// n(L) = Σ_{k=0}^{2L} T(L,k|2L−k).
pub fn n_of_l(l: u32) -> Rational {
    (0..=2 * l).map(|k| t_coefficient(l, k, 2 * l as i64 - k as i64, SumMode::Exact)).sum()
}

/// Rows T(L,k|2L−k) for L ≤ `l_max`, ordered by L then k.
pub fn t_table(l_max: u32) -> Vec<TCoefficient> {
    (0..=l_max)
        .flat_map(|l| (0..=2 * l).map(move |k| (l, k)))
        .map(|(l, k)| t_entry(l, k, 2 * l as i64 - k as i64, SumMode::Exact))
        .collect()
}

/// Which identity a check covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityKind {
    /// Σ_k T(L,k|≤2L−k) = Σ_k T(L,k|2L−k).
    SumEquality,
    /// T(L,K+1|2L−K−2) = −T(L,K|≤2L−K−2), 1 ≤ K ≤ 2L−2.
    Lemma,
    /// The K = 0 case: T(L,1|2L−2) = −T(L,0|≤2L−2).
    LeadingCancellation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub kind: IdentityKind,
    pub l: u32,
    pub k: Option<u32>,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.lhs == self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Exact check of the inequality/equality sum identity and the cancellation
/// lemma for 1 ≤ L ≤ `l_max`.
pub fn verify_t_identities(l_max: u32) -> IdentityReport {
    let mut checks = Vec::new();
    for l in 1..=l_max {
        let two_l = 2 * l as i64;
        let at_most: Rational =
            (0..=2 * l).map(|k| t_coefficient(l, k, two_l - k as i64, SumMode::AtMost)).sum();
        checks.push(IdentityCheck {
            kind: IdentityKind::SumEquality,
            l,
            k: None,
            lhs: at_most,
            rhs: n_of_l(l),
        });
        for big_k in 0..=2 * l - 2 {
            let s = two_l - big_k as i64 - 2;
            checks.push(IdentityCheck {
                kind: if big_k == 0 { IdentityKind::LeadingCancellation } else { IdentityKind::Lemma },
                l,
                k: Some(big_k),
                lhs: t_coefficient(l, big_k + 1, s, SumMode::Exact),
                rhs: -t_coefficient(l, big_k, s, SumMode::AtMost),
            });
        }
    }
    IdentityReport { checks }
}
