//! Adaptive Gauss-Kronrod quadrature with nested-rule error estimation.
//!
//! One engine (G7/K15) serves real and complex integrands; substitutions for
//! endpoint singularities and semi-infinite ranges are explicit wrappers so
//! callers pick the transform that matches their singularity structure.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Kronrod-15 abscissae on [-1, 1] (positive half; symmetric).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

/// Kronrod-15 weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_2,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss-7 weights for abscissae XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Scalar type an integrand may return: real or complex.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + PartialEq + std::fmt::Debug
{
    fn zero() -> Self;
    fn scale(self, s: f64) -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Result of a quadrature: value, error estimate and work count.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub err: f64,
    pub evaluations: usize,
}

impl<T: QuadValue> QuadResult<T> {
    pub fn map<U: QuadValue>(self, f: impl FnOnce(T) -> U) -> QuadResult<U> {
        QuadResult {
            value: f(self.value),
            err: self.err,
            evaluations: self.evaluations,
        }
    }
}

/// Relative/absolute tolerance pair for the adaptive loop.
#[derive(Debug, Clone, Copy)]
pub struct Tol {
    pub rel: f64,
    pub abs: f64,
}

impl Tol {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Tol { rel, abs }
    }

    /// Relative tolerance with a tiny absolute floor.
    pub const fn rel(rel: f64) -> Self {
        Tol {
            rel,
            abs: 1e-300,
        }
    }

    pub fn tighter(self, factor: f64) -> Self {
        Tol {
            rel: self.rel * factor,
            abs: self.abs * factor,
        }
    }

    fn target(&self, value_mag: f64) -> f64 {
        (self.rel * value_mag).max(self.abs)
    }
}

impl Default for Tol {
    fn default() -> Self {
        Tol::rel(1e-9)
    }
}

fn gk15<T: QuadValue>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc.scale(WGK[7]);
    let mut gauss = fc.scale(WG[3]);
    for j in 0..7 {
        let x = h * XGK[j];
        let fsum = f(c - x) + f(c + x);
        kronrod = kronrod + fsum.scale(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + fsum.scale(WG[j / 2]);
        }
    }
    let k = kronrod.scale(h);
    let g = gauss.scale(h);
    let err = (k - g).magnitude();
    (k, g, err)
}

#[derive(Debug)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
    seq: usize,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.seq == other.seq
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first; seq breaks ties deterministically
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

const MAX_SEGMENTS: usize = 50_000;

/// Adaptive quadrature of `f` on the finite interval `[a, b]`.
pub fn integrate_adaptive<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol: Tol,
) -> Result<QuadResult<T>> {
    if !(a < b) {
        if a == b {
            return Ok(QuadResult {
                value: T::zero(),
                err: 0.0,
                evaluations: 0,
            });
        }
        return Err(CoreError::Domain(format!("bad interval [{a}, {b}]")));
    }

    let mut evaluations = 15usize;
    let (k, _g, err) = gk15(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    let mut seq = 0usize;
    heap.push(Segment {
        a,
        b,
        value: k,
        err,
        seq,
    });
    let mut total = k;
    let mut total_err = err;

    while total_err > tol.target(total.magnitude()) {
        if heap.len() >= MAX_SEGMENTS {
            return Err(CoreError::Quadrature {
                err: total_err,
                target: tol.target(total.magnitude()),
            });
        }
        let worst = heap.pop().expect("non-empty heap");
        if worst.b - worst.a <= f64::EPSILON * (worst.a.abs() + worst.b.abs()).max(1e-300) {
            // cannot subdivide further; accept the local estimate
            heap.push(Segment { seq: worst.seq, err: 0.0, ..worst });
            let still: f64 = heap.iter().map(|s| s.err).sum();
            if still > tol.target(total.magnitude()) {
                return Err(CoreError::Quadrature {
                    err: total_err,
                    target: tol.target(total.magnitude()),
                });
            }
            total_err = still;
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (kl, _, el) = gk15(&mut f, worst.a, mid);
        let (kr, _, er) = gk15(&mut f, mid, worst.b);
        evaluations += 30;
        total = total - worst.value + kl + kr;
        total_err = total_err - worst.err + el + er;
        seq += 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: kl,
            err: el,
            seq,
        });
        seq += 1;
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: kr,
            err: er,
            seq,
        });
        // periodic re-accumulation to control error drift
        if seq % 256 == 0 {
            total_err = heap.iter().map(|s| s.err).sum();
        }
    }

    Ok(QuadResult {
        value: total,
        err: total_err,
        evaluations,
    })
}

/// Integral over `[a, inf)` through the rational map `x = a + t/(1-t)`.
///
/// Handles both exponential and algebraic (integrable) decay.
pub fn integrate_semiinf<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    tol: Tol,
) -> Result<QuadResult<T>> {
    integrate_adaptive(
        move |t| {
            let om1 = 1.0 - t;
            let x = a + t / om1;
            f(x).scale(1.0 / (om1 * om1))
        },
        0.0,
        1.0,
        tol,
    )
}

/// Integral over `[0, b]` of an integrand with an inverse-square-root
/// endpoint singularity at 0, via `x = b u^2`.
pub fn integrate_sqrt_origin<T: QuadValue>(
    mut f: impl FnMut(f64) -> T,
    b: f64,
    tol: Tol,
) -> Result<QuadResult<T>> {
    integrate_adaptive(
        move |u| f(b * u * u).scale(2.0 * b * u),
        0.0,
        1.0,
        tol,
    )
}

/// Complex straight-line path integral from `za` to `zb`.
pub fn integrate_line(
    mut f: impl FnMut(Complex64) -> Complex64,
    za: Complex64,
    zb: Complex64,
    tol: Tol,
) -> Result<QuadResult<Complex64>> {
    let d = zb - za;
    integrate_adaptive(move |t| f(za + d * t) * d, 0.0, 1.0, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_exact() {
        let r = integrate_adaptive(|x| x, 0.0, 1.0, Tol::rel(1e-12)).unwrap();
        assert_abs_diff_eq!(r.value, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn sine_half_period() {
        let r = integrate_adaptive(f64::sin, 0.0, std::f64::consts::PI, Tol::rel(1e-12)).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-14);
    }

    #[test]
    fn inverse_sqrt_with_substitution() {
        let r = integrate_sqrt_origin(|x| 1.0 / x.sqrt(), 1.0, Tol::rel(1e-12)).unwrap();
        assert_abs_diff_eq!(r.value, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn exponential_tail() {
        let r = integrate_semiinf(|x| (-x).exp(), 0.0, Tol::rel(1e-13)).unwrap();
        assert_abs_diff_eq!(r.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn bose_zeta_two() {
        let r = integrate_semiinf(
            |x| if x == 0.0 { 1.0 } else { x / x.exp_m1() },
            0.0,
            Tol::rel(1e-12),
        )
        .unwrap();
        assert_abs_diff_eq!(r.value, std::f64::consts::PI.powi(2) / 6.0, epsilon = 1e-10);
    }

    #[test]
    fn bose_five_halves_vs_series() {
        // independent oracle: sum_n Gamma(5/2)/n^{5/2}
        let gamma52 = 0.75 * std::f64::consts::PI.sqrt();
        let oracle: f64 = (1..200_000).map(|n| gamma52 / (n as f64).powf(2.5)).sum();
        let r = integrate_semiinf(
            |x| if x == 0.0 { 0.0 } else { x.powf(1.5) / x.exp_m1() },
            0.0,
            Tol::rel(1e-12),
        )
        .unwrap();
        assert_abs_diff_eq!(r.value, oracle, epsilon = 1e-8);
        assert_abs_diff_eq!(r.value, 1.78329, epsilon = 1e-5);
    }

    #[test]
    fn complex_componentwise() {
        let r = integrate_adaptive(
            |x| Complex64::new(x.cos(), x.sin()),
            0.0,
            std::f64::consts::FRAC_PI_2,
            Tol::rel(1e-12),
        )
        .unwrap();
        assert_abs_diff_eq!(r.value.re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.value.im, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn empty_interval_is_zero() {
        let r = integrate_adaptive(|x| x, 1.0, 1.0, Tol::default()).unwrap();
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn refinement_contract() {
        // halving tol never increases reported err, and the value moves by
        // less than the previous error estimate
        let f = |x: f64| (10.0 * x).sin() / (0.1 + x);
        let mut prev: Option<QuadResult<f64>> = None;
        let mut rel = 1e-4;
        for _ in 0..8 {
            let r = integrate_adaptive(f, 0.0, 3.0, Tol::rel(rel)).unwrap();
            if let Some(p) = prev {
                assert!(r.err <= p.err * (1.0 + 1e-12));
                assert!((r.value - p.value).abs() <= p.err * 1.01);
            }
            prev = Some(r);
            rel *= 0.5;
        }
    }

    #[test]
    fn determinism() {
        let f = |x: f64| (x * x).sin() + 1.0 / (1.0 + x);
        let a = integrate_adaptive(f, 0.0, 5.0, Tol::rel(1e-10)).unwrap();
        let b = integrate_adaptive(f, 0.0, 5.0, Tol::rel(1e-10)).unwrap();
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.err.to_bits(), b.err.to_bits());
    }
}
