//! Numerical oracle for the one-dimensional integrals behind both models.
//!
//! Two independent schemes are available:
//!
//! - adaptive Gauss–Kronrod (7/15 points) after a rational substitution that
//!   maps the infinite domain onto a bounded interval;
//! - double-exponential (sinh–sinh on ℝ, exp–sinh on (0, ∞)) trapezoidal
//!   sums with step halving.
//!
//! Model integrands are evaluated as `exp(E(t) − C)·g(t)`, where `E` is the
//! exponent and `C` its largest saddle value, and the result is rescaled by
//! `exp(C)` at the end.

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("relative tolerance {0} outside [1e-13, 1e-4]")]
    InvalidTolerance(f64),
    #[error("no convergence: best estimate {estimate} with error {err_est} (relative {achieved:e})")]
    NotConverged { estimate: f64, err_est: f64, achieved: f64 },
    #[error("integrand is not finite at t = {0}")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// (−∞, ∞)
    RealLine,
    /// (0, ∞)
    HalfLine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    GaussKronrod,
    DoubleExponential,
}

/// A one-dimensional integrand on an infinite domain.
pub enum Integrand {
    /// `∫₀^∞ t^{−1}·e^{−N(t − ln t)} dt`, or without the `1/t` when
    /// `prefactor` is false.
    Gamma { n: f64, prefactor: bool },
    /// `∫ (ω0 + λt)(ω + λt)^N e^{−N t²/2} dt`.
    Fermion { n: f64, omega: f64, omega0: f64, lambda: f64 },
    /// Any integrand; `scale` sets the width of the substitution.
    Custom { domain: Domain, scale: f64, f: Box<dyn Fn(f64) -> f64 + Send + Sync> },
}

impl std::fmt::Debug for Integrand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Integrand::Gamma { n, prefactor } => write!(f, "Gamma {{ n: {n}, prefactor: {prefactor} }}"),
            Integrand::Fermion { n, omega, omega0, lambda } => {
                write!(f, "Fermion {{ n: {n}, omega: {omega}, omega0: {omega0}, lambda: {lambda} }}")
            }
            Integrand::Custom { domain, scale, .. } => write!(f, "Custom {{ domain: {domain:?}, scale: {scale} }}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub err_est: f64,
    pub evaluations: usize,
}

struct Prepared<'a> {
    domain: Domain,
    scale: f64,
    log_shift: f64,
    f: Box<dyn Fn(f64) -> f64 + 'a>,
}

impl Integrand {
    fn prepare(&self) -> Prepared<'_> {
        match *self {
            Integrand::Gamma { n, prefactor } => Prepared {
                domain: Domain::HalfLine,
                scale: 1.0,
                log_shift: -n,
                f: Box::new(move |t: f64| {
                    if t <= 0.0 {
                        return 0.0;
                    }
                    let w = (-n * (t - 1.0 - t.ln())).exp();
                    if prefactor {
                        w / t
                    } else {
                        w
                    }
                }),
            },
            Integrand::Fermion { n, omega, omega0, lambda } => {
                let root = (omega * omega + 4.0 * lambda * lambda).sqrt();
                let plus = 0.5 * (omega + root);
                let minus = -lambda * lambda / plus;
                let exponent = move |t: f64| n * (omega + lambda * t).abs().ln() - 0.5 * n * t * t;
                let shift = exponent(lambda / plus).max(exponent(lambda / minus));
                let odd = (n.round() as i64) % 2 != 0;
                Prepared {
                    domain: Domain::RealLine,
                    scale: 1.0,
                    log_shift: shift,
                    f: Box::new(move |t: f64| {
                        let base = omega + lambda * t;
                        let sign = if odd && base < 0.0 { -1.0 } else { 1.0 };
                        sign * (exponent(t) - shift).exp() * (omega0 + lambda * t)
                    }),
                }
            }
            Integrand::Custom { domain, scale, ref f } => {
                Prepared { domain, scale, log_shift: 0.0, f: Box::new(move |t| f(t)) }
            }
        }
    }
}

/// Integrates with the default Gauss–Kronrod scheme.
pub fn integrate(ig: &Integrand, rel_tol: f64) -> Result<Quadrature, QuadratureError> {
    integrate_with(ig, rel_tol, Scheme::GaussKronrod)
}

pub fn integrate_with(ig: &Integrand, rel_tol: f64, scheme: Scheme) -> Result<Quadrature, QuadratureError> {
    if !(1e-13..=1e-4).contains(&rel_tol) {
        return Err(QuadratureError::InvalidTolerance(rel_tol));
    }
    let p = ig.prepare();
    let raw = match scheme {
        Scheme::GaussKronrod => gauss_kronrod(&p, rel_tol),
        Scheme::DoubleExponential => double_exponential(&p, rel_tol),
    };
    let factor = p.log_shift.exp();
    match raw {
        Ok(q) => Ok(Quadrature { value: q.value * factor, err_est: q.err_est * factor, ..q }),
        Err(QuadratureError::NotConverged { estimate, err_est, achieved }) => Err(QuadratureError::NotConverged {
            estimate: estimate * factor,
            err_est: err_est * factor,
            achieved,
        }),
        Err(e) => Err(e),
    }
}

// Nodes and weights of the 15-point Kronrod rule and its embedded 7-point
// Gauss rule on [−1, 1]; odd Kronrod indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// (Kronrod estimate, |Kronrod − Gauss|) on [a, b].
fn gk15(h: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = h(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let d = r * XGK[i];
        let pair = h(c - d) + h(c + d);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kron * r, ((kron - gauss) * r).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err).is_eq()
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

const MAX_SEGMENTS: usize = 4000;

fn note_non_finite(bad: &mut Option<f64>, at: f64, v: f64) {
    if !v.is_finite() && bad.is_none() {
        *bad = Some(at);
    }
}

fn gauss_kronrod(p: &Prepared<'_>, rel_tol: f64) -> Result<Quadrature, QuadratureError> {
    let s = p.scale;
    let f = &p.f;
    let mut bad = None;
    let h: Box<dyn Fn(f64) -> f64> = match p.domain {
        // t = s·x/(1 − x²), x ∈ (−1, 1)
        Domain::RealLine => Box::new(move |x: f64| {
            let d = 1.0 - x * x;
            let t = s * x / d;
            if !t.is_finite() || d <= 0.0 {
                return 0.0;
            }
            f(t) * s * (1.0 + x * x) / (d * d)
        }),
        // t = s·x/(1 − x), x ∈ (0, 1)
        Domain::HalfLine => Box::new(move |x: f64| {
            let d = 1.0 - x;
            let t = s * x / d;
            if !t.is_finite() || d <= 0.0 {
                return 0.0;
            }
            f(t) * s / (d * d)
        }),
    };
    let (lo, hi) = match p.domain {
        Domain::RealLine => (-1.0, 1.0),
        Domain::HalfLine => (0.0, 1.0),
    };

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut total = 0.0;
    let mut total_err = 0.0;
    // Start from a few pieces so narrow peaks are not missed by the first rule.
    let pieces = 8;
    for i in 0..pieces {
        let a = lo + (hi - lo) * i as f64 / pieces as f64;
        let b = lo + (hi - lo) * (i + 1) as f64 / pieces as f64;
        let (value, err) = gk15(&*h, a, b);
        evaluations += 15;
        note_non_finite(&mut bad, a, value);
        total += value;
        total_err += err;
        heap.push(Segment { a, b, value, err });
    }
    while total_err > rel_tol * total.abs() {
        if let Some(t) = bad {
            return Err(QuadratureError::NonFinite(t));
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(QuadratureError::NotConverged {
                estimate: total,
                err_est: total_err,
                achieved: total_err / total.abs(),
            });
        }
        let seg = heap.pop().expect("non-empty");
        let mid = 0.5 * (seg.a + seg.b);
        let (v1, e1) = gk15(&*h, seg.a, mid);
        let (v2, e2) = gk15(&*h, mid, seg.b);
        evaluations += 30;
        note_non_finite(&mut bad, mid, v1 + v2);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.err;
        heap.push(Segment { a: seg.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, err: e2 });
    }
    if let Some(t) = bad {
        return Err(QuadratureError::NonFinite(t));
    }
    // Re-sum to shed the drift of the running totals.
    let value = heap.iter().map(|s| s.value).sum();
    let err_est = heap.iter().map(|s| s.err).sum();
    Ok(Quadrature { value, err_est, evaluations })
}

const DE_HALF_WIDTH: f64 = 4.5;
const DE_MAX_LEVEL: u32 = 12;

fn double_exponential(p: &Prepared<'_>, rel_tol: f64) -> Result<Quadrature, QuadratureError> {
    let s = p.scale;
    let f = &p.f;
    let h = |u: f64| -> f64 {
        let v = match p.domain {
            Domain::RealLine => {
                let w = FRAC_PI_2 * u.sinh();
                let t = s * w.sinh();
                if !t.is_finite() {
                    return 0.0;
                }
                f(t) * s * FRAC_PI_2 * u.cosh() * w.cosh()
            }
            Domain::HalfLine => {
                let t = s * (FRAC_PI_2 * u.sinh()).exp();
                if !t.is_finite() || t == 0.0 {
                    return 0.0;
                }
                f(t) * t * FRAC_PI_2 * u.cosh()
            }
        };
        if v.is_finite() {
            v
        } else {
            f64::NAN
        }
    };

    let mut step = 0.5;
    let n0 = (DE_HALF_WIDTH / step) as i64;
    let mut sum: f64 = (-n0..=n0).map(|i| h(i as f64 * step)).sum();
    let mut evaluations = (2 * n0 + 1) as usize;
    let mut prev = sum * step;
    for level in 1..=DE_MAX_LEVEL {
        step *= 0.5;
        let n = (DE_HALF_WIDTH / step) as i64;
        // Only the odd multiples of the new step are new points.
        let fresh: f64 = (-n..=n).filter(|i| i % 2 != 0).map(|i| h(i as f64 * step)).sum();
        evaluations += n as usize + 1;
        sum += fresh;
        let current = sum * step;
        if current.is_nan() {
            return Err(QuadratureError::NonFinite(f64::NAN));
        }
        let err = (current - prev).abs();
        if level >= 3 && err <= rel_tol * current.abs() {
            return Ok(Quadrature { value: current, err_est: err, evaluations });
        }
        if level == DE_MAX_LEVEL {
            return Err(QuadratureError::NotConverged {
                estimate: current,
                err_est: err,
                achieved: err / current.abs(),
            });
        }
        prev = current;
    }
    unreachable!("loop returns at the last level")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn custom(domain: Domain, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Integrand {
        Integrand::Custom { domain, scale: 1.0, f: Box::new(f) }
    }

    #[test]
    fn kronrod_rule_is_exact_for_polynomials() {
        let exact = |deg: i32| if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
        for deg in 0..=22 {
            let (k, _) = gk15(&|x: f64| x.powi(deg), -1.0, 1.0);
            assert!((k - exact(deg)).abs() < 1e-14, "degree {deg}");
        }
        // The embedded Gauss rule is exact through degree 13.
        for deg in 0..=13 {
            let (_, e) = gk15(&|x: f64| x.powi(deg), -1.0, 1.0);
            assert!(e < 1e-14, "degree {deg}");
        }
        let (_, e) = gk15(&|x: f64| x.powi(14), -1.0, 1.0);
        assert!(e > 1e-6);
    }

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = WGK[7] + 2.0 * WGK[..7].iter().sum::<f64>();
        let g: f64 = WG[3] + 2.0 * WG[..3].iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15 && (g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_on_the_line() {
        let ig = custom(Domain::RealLine, |t| (-0.5 * t * t).exp());
        let expect = (2.0 * std::f64::consts::PI).sqrt();
        for scheme in [Scheme::GaussKronrod, Scheme::DoubleExponential] {
            let q = integrate_with(&ig, 1e-12, scheme).unwrap();
            assert!((q.value / expect - 1.0).abs() < 1e-12, "{scheme:?}");
        }
    }

    #[test]
    fn gamma_form_integer_n() {
        // Γ(5)/5⁵ = 24/3125.
        let q = integrate(&Integrand::Gamma { n: 5.0, prefactor: true }, 1e-12).unwrap();
        assert!((q.value / (24.0 / 3125.0) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn fermion_form_normalization() {
        let ig = Integrand::Fermion { n: 2.0, omega: 1.0, omega0: 1.0, lambda: 1.0 };
        let expect = 2.5 * (2.0 * std::f64::consts::PI / 2.0).sqrt();
        let q = integrate(&ig, 1e-12).unwrap();
        assert!((q.value / expect - 1.0).abs() < 1e-8);
    }

    #[test]
    fn schemes_agree_on_non_integer_gamma() {
        let ig = Integrand::Gamma { n: 7.5, prefactor: true };
        let gk = integrate_with(&ig, 1e-12, Scheme::GaussKronrod).unwrap();
        let de = integrate_with(&ig, 1e-13, Scheme::DoubleExponential).unwrap();
        assert!((gk.value / de.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tolerance_range_enforced() {
        let ig = Integrand::Gamma { n: 1.0, prefactor: true };
        assert_eq!(integrate(&ig, 1e-3), Err(QuadratureError::InvalidTolerance(1e-3)));
        assert_eq!(integrate(&ig, 1e-14), Err(QuadratureError::InvalidTolerance(1e-14)));
    }

    #[test]
    fn non_convergence_carries_estimate() {
        // The true value is e^{-2.5e7}, so no relative tolerance is reachable.
        let ig = custom(Domain::RealLine, |t: f64| (1e4 * t).cos() * (-t * t).exp());
        for scheme in [Scheme::GaussKronrod, Scheme::DoubleExponential] {
            match integrate_with(&ig, 1e-10, scheme) {
                Err(QuadratureError::NotConverged { estimate, err_est, achieved }) => {
                    assert!(estimate.is_finite() && err_est > 0.0 && achieved > 1e-10);
                }
                other => panic!("expected non-convergence, got {other:?}"),
            }
        }
    }

    #[test]
    fn non_finite_integrand_reported() {
        let ig = custom(Domain::RealLine, |t: f64| if t > 0.1 && t < 0.3 { f64::INFINITY } else { 0.0 });
        assert!(matches!(integrate(&ig, 1e-8), Err(QuadratureError::NonFinite(_))));
    }

    #[test]
    fn halving_tolerance_stays_within_error_estimate() {
        let igs = [
            Integrand::Gamma { n: 3.0, prefactor: true },
            Integrand::Fermion { n: 3.0, omega: 1.0, omega0: 0.01, lambda: 10.0 },
        ];
        for ig in &igs {
            for scheme in [Scheme::GaussKronrod, Scheme::DoubleExponential] {
                let mut tol = 1e-5;
                let mut prev = integrate_with(ig, tol, scheme).unwrap();
                while tol > 2e-13 {
                    tol *= 0.5;
                    let next = integrate_with(ig, tol, scheme).unwrap();
                    assert!((next.value - prev.value).abs() <= prev.err_est, "{ig:?} {scheme:?} {tol}");
                    prev = next;
                }
            }
        }
    }
}
