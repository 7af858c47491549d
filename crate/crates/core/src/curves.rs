//! Hugoniot and Hugoniot' curves in the `(z, t, Y)` chart.
//!
//! A Hugoniot curve is the level set of the invariants
//! `k = 2Ũ + b1 X` and `l = 2V1 + Y - 2c` (up to the chart), and is a graph
//! over `z`:
//!
//! ```text
//! Y(z) = σ · Yn(z) / Q2(z),          Yn = -(l + 2c) z² + k z + l
//! t(z) = T3(z) / (2c Q2(z) (z² + 1)), T3 = b1 (l + 2c) z³ - k z² + (b1 l + 4c) z - k
//! ```
//!
//! with `Q2 = (b1 - 1) z² + 1 > 0` and `σ = -1` on Hugoniot' curves. Every
//! intersection with a surface therefore reduces to the real roots of a
//! small polynomial in `z`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChartPoint, ModelParams, Tolerances};
use crate::poly::{Polynomial, RealRoots};
use crate::scalar::{sq, Scalar};

/// Shock speed at a chart point,
/// `s = c((b1+1) t z⁴ + b1 z² t + (b1+2) z - t) / (b1 (z² + 1))`.
pub fn speed_at<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>) -> T {
    let b1 = params.b1();
    let one = T::one();
    let (z, t) = (cp.z, cp.t);
    let z2 = sq(z);
    params.c() * ((b1 + one) * t * sq(z2) + b1 * z2 * t + (b1 + T::lit(2.0)) * z - t)
        / (b1 * (z2 + one))
}

/// A Hugoniot curve (`prime == false`) or Hugoniot' curve, identified by its
/// invariants `(k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct HugoniotCurve<T> {
    pub k: T,
    pub l: T,
    pub prime: bool,
}

impl<T: Scalar> HugoniotCurve<T> {
    pub fn new(k: T, l: T, prime: bool) -> Self {
        HugoniotCurve { k, l, prime }
    }

    fn sigma(&self) -> T {
        if self.prime {
            -T::one()
        } else {
            T::one()
        }
    }
}

/// A point of a curve together with the shock speed there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CurveSample<T> {
    pub z: T,
    pub t: T,
    #[serde(rename = "Y")]
    pub y: T,
    pub s: T,
}

impl<T: Scalar> CurveSample<T> {
    pub fn point(&self) -> ChartPoint<T> {
        ChartPoint::new(self.z, self.t, self.y)
    }
}

pub fn curve_from_kl<T: Scalar>(k: T, l: T, prime: bool) -> HugoniotCurve<T> {
    HugoniotCurve::new(k, l, prime)
}

/// `(t(z), Y(z))` on the curve.
pub fn eval_curve<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    z: T,
) -> ChartPoint<T> {
    let b1 = params.b1();
    let c = params.c();
    let (k, l) = (curve.k, curve.l);
    let one = T::one();
    let two = T::lit(2.0);
    let z2 = sq(z);
    let q2 = (b1 - one) * z2 + one;
    let y = -((l + two * c) * z2 - k * z - l) / q2;
    let t = ((z2 + one) * (b1 * z * l - k) + two * c * z * (two + b1 * z2))
        / (two * c * q2 * (z2 + one));
    ChartPoint::new(z, t, curve.sigma() * y)
}

/// Invariants `(k, l)` of the plain Hugoniot curve through `cp`.
pub fn kl_from_point<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>) -> (T, T) {
    let b1 = params.b1();
    let c = params.c();
    let (z, t, y) = (cp.z, cp.t, cp.y);
    let two = T::lit(2.0);
    let w = sq(z) + T::one();
    let k = (T::lit(4.0) * c * z + two * c * t * (sq(sq(z)) - T::one()) + b1 * z * w * y) / w;
    let l = (two * c * z * w * t + y * w - two * c * sq(z)) / w;
    (k, l)
}

/// The Hugoniot (or Hugoniot') curve through `cp`.
pub fn curve_through_point<T: Scalar>(
    params: &ModelParams<T>,
    cp: &ChartPoint<T>,
    prime: bool,
) -> HugoniotCurve<T> {
    let (k, l) = if prime {
        kl_from_point(params, &cp.reflected())
    } else {
        kl_from_point(params, cp)
    };
    HugoniotCurve::new(k, l, prime)
}

/// Speed along the curve, as the composition `speed_at ∘ eval_curve`.
pub fn speed_along<T: Scalar>(params: &ModelParams<T>, curve: &HugoniotCurve<T>, z: T) -> T {
    speed_at(params, &eval_curve(params, curve, z))
}

/// `ds/dz` along the curve, from the rational form `s = N / (2 b1 Q2)`.
pub fn speed_derivative_along<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    z: T,
) -> T {
    let n = speed_numerator(params, curve);
    let q = q2(params);
    let qz = q.eval(z);
    (n.derivative().eval(z) * qz - n.eval(z) * q.derivative().eval(z))
        / (T::lit(2.0) * params.b1() * sq(qz))
}

pub fn sample<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    z: T,
) -> CurveSample<T> {
    let p = eval_curve(params, curve, z);
    CurveSample {
        z,
        t: p.t,
        y: p.y,
        s: speed_at(params, &p),
    }
}

/// `n >= 2` samples on the closed interval from `z_from` to `z_to`.
pub fn sample_curve<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    z_from: T,
    z_to: T,
    n: usize,
) -> Vec<CurveSample<T>> {
    let n = n.max(2);
    let last = T::from_usize(n - 1).expect("sample count fits");
    (0..n)
        .map(|i| {
            let f = T::from_usize(i).expect("sample index fits") / last;
            let z = if i + 1 == n { z_to } else { z_from + (z_to - z_from) * f };
            sample(params, curve, z)
        })
        .collect()
}

/// A curve passes through the secondary bifurcation iff `|l + 2c| < tol`.
/// Its `Y` numerator then drops to degree one and the curve is no longer
/// diffeomorphic to a line.
pub fn is_secondary<T: Scalar>(params: &ModelParams<T>, curve: &HugoniotCurve<T>, tol: T) -> bool {
    (curve.l + T::lit(2.0) * params.c()).abs() < tol
}

/// `Q2 = (b1 - 1) z² + 1`.
pub fn q2<T: Scalar>(params: &ModelParams<T>) -> Polynomial<T> {
    Polynomial::new(vec![T::one(), T::zero(), params.b1() - T::one()])
}

/// `Yn = -(l + 2c) z² + k z + l`, so that `Y = σ Yn / Q2`.
pub fn y_numerator<T: Scalar>(params: &ModelParams<T>, curve: &HugoniotCurve<T>) -> Polynomial<T> {
    let lc = curve.l + T::lit(2.0) * params.c();
    Polynomial::new(vec![curve.l, curve.k, -lc])
}

/// `T3 = b1 (l + 2c) z³ - k z² + (b1 l + 4c) z - k`, so that
/// `t = T3 / (2c Q2 (z² + 1))`.
pub fn t_numerator<T: Scalar>(params: &ModelParams<T>, curve: &HugoniotCurve<T>) -> Polynomial<T> {
    let b1 = params.b1();
    let c = params.c();
    let (k, l) = (curve.k, curve.l);
    Polynomial::new(vec![
        -k,
        b1 * l + T::lit(4.0) * c,
        -k,
        b1 * (l + T::lit(2.0) * c),
    ])
}

/// Speed numerator `N`, with `s = N / (2 b1 Q2)` along the curve:
/// `N = b1(b1+1)(l+2c) z³ - (b1+1) k z² + b1(2c - l) z + k`.
pub fn speed_numerator<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
) -> Polynomial<T> {
    let b1 = params.b1();
    let c = params.c();
    let (k, l) = (curve.k, curve.l);
    let two_c = T::lit(2.0) * c;
    let bp = b1 + T::one();
    Polynomial::new(vec![k, b1 * (two_c - l), -bp * k, b1 * bp * (l + two_c)])
}

/// Which sonic surface to intersect with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sonic {
    Son,
    SonPrime,
}

/// Polynomial whose sign equals the sign of `son` (or `son'`) along the
/// curve and whose roots are the intersections.
///
/// Substituting the curve into `son = -2c S5 t ∓ S4 Y - 2c Q2` and
/// multiplying by `Q2` gives a quintic divisible by `z² + 1`; the quotient is
/// a quartic whose leading coefficient is proportional to `l + 2c`.
pub fn sonic_polynomial<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    which: Sonic,
) -> Polynomial<T> {
    let b1 = params.b1();
    let c = params.c();
    let one = T::one();
    let bp = b1 + one;
    // The sign in front of S4·Yn: son carries -S4·Y, son' carries +S4·Y.
    let sign = match which {
        Sonic::Son => curve.sigma(),
        Sonic::SonPrime => -curve.sigma(),
    };
    let w = Polynomial::new(vec![one, T::zero(), one]);
    let a = Polynomial::new(vec![T::zero(), T::lit(3.0), T::zero(), bp]);
    let s4 = &w * &Polynomial::new(vec![-one, T::zero(), bp]);
    let q = q2(params);
    let full = -(&a * &t_numerator(params, curve))
        - (&s4 * &y_numerator(params, curve)).scale(sign)
        - (&q * &q).scale(T::lit(2.0) * c);
    full.div_rem(&w).0
}

fn roots_of<T: Scalar>(poly: &Polynomial<T>, tols: &Tolerances<T>, what: &str) -> Result<RealRoots<T>> {
    poly.real_roots(&tols.root_options())
        .ok_or_else(|| Error::DegenerateCurve(format!("{what} vanishes identically")))
}

/// Intersections with the characteristic surface `Y = 0`.
pub fn intersect_characteristic<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    tols: &Tolerances<T>,
) -> Result<RealRoots<T>> {
    roots_of(&y_numerator(params, curve), tols, "Y numerator")
}

/// Intersections with `Son`; these are the critical points of the speed
/// along the curve.
pub fn intersect_son<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    tols: &Tolerances<T>,
) -> Result<RealRoots<T>> {
    roots_of(&sonic_polynomial(params, curve, Sonic::Son), tols, "son along the curve")
}

/// Intersections with `Son'`.
pub fn intersect_sonprime<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    tols: &Tolerances<T>,
) -> Result<RealRoots<T>> {
    roots_of(
        &sonic_polynomial(params, curve, Sonic::SonPrime),
        tols,
        "son' along the curve",
    )
}

/// Second `Y = 0` crossing of the curve through the characteristic point
/// `(z0, t0, 0)`; infinite when the denominator vanishes.
pub fn second_characteristic_z<T: Scalar>(z0: T, t0: T) -> T {
    let w = sq(z0) + T::one();
    -(t0 * w - z0) / (t0 * z0 * w + T::one())
}

/// Cross-check forms of the expanded curve and speed formulas. They are
/// algebraically equal to the compositions above and exist only to be
/// compared with them.
pub mod expanded {
    use super::*;

    /// Coefficients `A..G` of the curve through `(z0, t0, Y0)`:
    /// `Y = (A z² + B z + C) / ((z0²+1) Q2)`,
    /// `t = (D z³ + E z² + F z + G) / (2c (z0²+1) Q2 (z²+1))`.
    pub fn through_point_coefficients<T: Scalar>(params: &ModelParams<T>, p0: &ChartPoint<T>) -> [T; 7] {
        let b1 = params.b1();
        let c = params.c();
        let (z0, t0, y0) = (p0.z, p0.t, p0.y);
        let two = T::lit(2.0);
        let four = T::lit(4.0);
        let w = sq(z0) + T::one();
        let z04 = sq(sq(z0));
        let a = -(two * c + two * c * t0 * z0 * w + y0 * w);
        let b = four * c * z0 + two * c * t0 * (z04 - T::one()) + b1 * y0 * z0 * w;
        let cc = -two * c * sq(z0) + two * c * t0 * z0 * w + y0 * w;
        let d = two * c * b1 + two * c * b1 * t0 * z0 * w + b1 * y0 * w;
        let e = two * c * t0 * (T::one() - z04) - b1 * z0 * y0 * w - four * c * z0;
        let f = four * c * w + two * c * b1 * t0 * z0 * w + b1 * y0 * w - two * c * b1 * sq(z0);
        let g = -four * c * z0 + two * c * t0 * (T::one() - z04) - b1 * z0 * y0 * w;
        [a, b, cc, d, e, f, g]
    }

    /// `(t, Y)` at `z` on the plain curve through `p0`, from the coefficients.
    pub fn through_point_eval<T: Scalar>(params: &ModelParams<T>, p0: &ChartPoint<T>, z: T) -> (T, T) {
        let [a, b, cc, d, e, f, g] = through_point_coefficients(params, p0);
        let one = T::one();
        let w0 = sq(p0.z) + one;
        let q = (params.b1() - one) * sq(z) + one;
        let y = (a * sq(z) + b * z + cc) / (w0 * q);
        let t = (((d * z + e) * z + f) * z + g)
            / (T::lit(2.0) * params.c() * w0 * q * (sq(z) + one));
        (t, y)
    }

    /// Speed at `z` on the plain curve through `p0`, from the expanded cubic.
    pub fn speed_through_point<T: Scalar>(params: &ModelParams<T>, p0: &ChartPoint<T>, z: T) -> T {
        let b1 = params.b1();
        let c = params.c();
        let (z0, t0, y0) = (p0.z, p0.t, p0.y);
        let one = T::one();
        let two = T::lit(2.0);
        let w = sq(z0) + one;
        let m = two * z0 + t0 * sq(sq(z0)) - t0;
        let sp3 = b1 * (b1 + one) * (y0 * w + two * c * (one + z0 * t0 * w));
        let sp2 = (b1 + one) * (b1 * z0 * y0 * w + two * c * m);
        let sp1 = b1 * (y0 * w + two * c * (z0 * t0 * w - two * sq(z0) - one));
        let sp0 = b1 * z0 * y0 * w + two * c * m;
        let q = (b1 - one) * sq(z) + one;
        (((sp3 * z - sp2) * z - sp1) * z + sp0) / (two * b1 * w * q)
    }

    /// Speed at `z` on the curve through the characteristic point `(z0, t0, 0)`.
    pub fn characteristic_speed<T: Scalar>(params: &ModelParams<T>, z0: T, t0: T, z: T) -> T {
        let b1 = params.b1();
        let c = params.c();
        let one = T::one();
        let two = T::lit(2.0);
        let w = sq(z0) + one;
        let m = c * (t0 * sq(sq(z0)) + two * z0 - t0);
        let s3 = b1 * c * (t0 * z0 * w + one) * (one + b1);
        let s2 = m * (one + b1);
        let s1 = b1 * c * (t0 * z0 * sq(z0) - two * sq(z0) + t0 * z0 - one);
        let q = (b1 - one) * sq(z) + one;
        (((s3 * z - s2) * z - s1) * z + m) / (b1 * w * q)
    }

    /// Speed at `z` on the plain curve through the `Son'` point over
    /// `(z0, Y0)`; requires `z0 != 0`.
    pub fn speed_through_sonprime<T: Scalar>(params: &ModelParams<T>, z0: T, y0: T, z: T) -> T {
        let b1 = params.b1();
        let c = params.c();
        let one = T::one();
        let two = T::lit(2.0);
        let bp = b1 + one;
        let z02 = sq(z0);
        let wq = sq(b1 * z02 + one) + two * z02 * (b1 * z02 - one) + sq(z02);
        let r = y0 * wq + two * c * ((b1 + T::lit(3.0)) * z02 + one);
        let s3 = two * b1 * z0 * bp * (y0 * (bp * z02 + one) + two * c);
        let s2 = bp * r;
        let s1 = two * b1 * z0 * (y0 * (bp * z02 + one) - two * c * (bp * z02 + two));
        let q = (b1 - one) * sq(z) + one;
        (((s3 * z - s2) * z - s1) * z + r) / (two * b1 * z0 * q * (bp * z02 + T::lit(3.0)))
    }
}
