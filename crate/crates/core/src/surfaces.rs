//! The characteristic, sonic and sonic' surfaces, the fold-swept surface
//! `Tf` and its reflection, the surface `Sigma`, and the distinguished
//! curves where they meet.
//!
//! With `S5 = z(z²+1)((b1+1)z²+3)`, `S4 = (z²+1)((b1+1)z²-1)` and
//! `Q2 = (b1-1)z²+1`:
//!
//! ```text
//! son  = -2c S5 t - S4 Y - 2c Q2
//! son' = -2c S5 t + S4 Y - 2c Q2
//! ```
//!
//! Both are linear in `Y` and in `t`, so each `z`-slice is a pair of lines
//! that meet on `Y = 0` (the inflection locus) and coincide where `S4 = 0`
//! (the double sonic locus).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::{is_secondary, HugoniotCurve};
use crate::model::{ChartPoint, ModelParams};
use crate::scalar::{sq, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceId {
    Characteristic,
    Son,
    SonPrime,
    Tf,
    TfPrime,
    Sigma,
}

impl SurfaceId {
    pub const ALL: [SurfaceId; 6] = [
        SurfaceId::Characteristic,
        SurfaceId::Son,
        SurfaceId::SonPrime,
        SurfaceId::Tf,
        SurfaceId::TfPrime,
        SurfaceId::Sigma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SurfaceId::Characteristic => "characteristic",
            SurfaceId::Son => "son",
            SurfaceId::SonPrime => "sonprime",
            SurfaceId::Tf => "tf",
            SurfaceId::TfPrime => "tfprime",
            SurfaceId::Sigma => "sigma",
        }
    }
}

impl fmt::Display for SurfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurfaceId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace('\'', "prime").replace(['_', '-'], "");
        SurfaceId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .or(match key.as_str() {
                "c" | "char" => Some(SurfaceId::Characteristic),
                _ => None,
            })
            .ok_or_else(|| format!("unknown surface `{s}`"))
    }
}

pub(crate) fn s5<T: Scalar>(b1: T, z: T) -> T {
    z * (sq(z) + T::one()) * ((b1 + T::one()) * sq(z) + T::lit(3.0))
}

pub(crate) fn s4<T: Scalar>(b1: T, z: T) -> T {
    (sq(z) + T::one()) * ((b1 + T::one()) * sq(z) - T::one())
}

pub(crate) fn q2<T: Scalar>(b1: T, z: T) -> T {
    (b1 - T::one()) * sq(z) + T::one()
}

pub fn son<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>) -> T {
    let (b1, c) = (params.b1(), params.c());
    let two_c = T::lit(2.0) * c;
    -two_c * s5(b1, cp.z) * cp.t - s4(b1, cp.z) * cp.y - two_c * q2(b1, cp.z)
}

pub fn sonprime<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>) -> T {
    son(params, &cp.reflected())
}

/// Coefficients `(tf1, tf2, tf3)` of `Tf = tf1 Y² + tf2 Y + tf3`.
pub fn tf_coefficients<T: Scalar>(params: &ModelParams<T>, z: T, t: T) -> [T; 3] {
    let (b1, c) = (params.b1(), params.c());
    let four = T::lit(4.0);
    let w = sq(z) + T::one();
    let tf1 = w * (sq(b1) * sq(z) + four);
    let tf2 = four * c * (z * w * (b1 * sq(z) - b1 + four) * t + T::lit(2.0) * q2(b1, z));
    let tf3 = four * sq(c) * sq(t) * w * sq(w);
    [tf1, tf2, tf3]
}

pub fn tf<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>) -> T {
    let [a, b, c] = tf_coefficients(params, cp.z, cp.t);
    (a * cp.y + b) * cp.y + c
}

/// Signed residual of `Sigma`, `Y + 2c(t z³ + t z + 1)/(z² + 1)`.
pub fn sigma<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>) -> T {
    let z = cp.z;
    cp.y + T::lit(2.0) * params.c() * (cp.t * z * (sq(z) + T::one()) + T::one()) / (sq(z) + T::one())
}

/// Value of the defining function of a surface; the surface is its zero set.
pub fn surface_value<T: Scalar>(params: &ModelParams<T>, id: SurfaceId, cp: &ChartPoint<T>) -> T {
    match id {
        SurfaceId::Characteristic => cp.y,
        SurfaceId::Son => son(params, cp),
        SurfaceId::SonPrime => sonprime(params, cp),
        SurfaceId::Tf => tf(params, cp),
        SurfaceId::TfPrime => tf(params, &cp.reflected()),
        SurfaceId::Sigma => sigma(params, cp),
    }
}

/// `(z, 0, 0)`: the tangency locus of Hugoniot curves with `Y = 0`,
/// separating the slow (`t < 0`) and fast (`t > 0`) characteristic points.
pub fn fold_curve<T: Scalar>(z: T) -> ChartPoint<T> {
    ChartPoint::new(z, T::zero(), T::zero())
}

/// `S5 t + Q2`, which is `-son/(2c) = -son'/(2c)` on `Y = 0` and the
/// numerator of the derivative of the characteristic speed. Its zero set in
/// `Y = 0` is the inflection locus.
pub fn inflection_locus_value<T: Scalar>(params: &ModelParams<T>, z: T, t: T) -> T {
    let b1 = params.b1();
    s5(b1, z) * t + q2(b1, z)
}

/// `t` of the inflection locus over `z`; infinite at `z = 0`.
pub fn inflection_locus_t<T: Scalar>(params: &ModelParams<T>, z: T) -> T {
    let b1 = params.b1();
    -q2(b1, z) / s5(b1, z)
}

/// A vertical line `{(z, t, Y) : Y ∈ ℝ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct VerticalLine<T> {
    pub z: T,
    pub t: T,
}

impl<T: Scalar> VerticalLine<T> {
    pub fn at(&self, y: T) -> ChartPoint<T> {
        ChartPoint::new(self.z, self.t, y)
    }
}

/// A line `{(z, t, Y) : t ∈ ℝ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct HorizontalLine<T> {
    pub z: T,
    #[serde(rename = "Y")]
    pub y: T,
}

impl<T: Scalar> HorizontalLine<T> {
    pub fn at(&self, t: T) -> ChartPoint<T> {
        ChartPoint::new(self.z, t, self.y)
    }
}

/// The double sonic locus: the lines at `z = ±1/√(b1+1)` where `Son` and
/// `Son'` coincide. Returned as `(plus, minus)`.
pub fn double_sonic_points<T: Scalar>(params: &ModelParams<T>) -> (VerticalLine<T>, VerticalLine<T>) {
    let b1 = params.b1();
    let r = (b1 + T::one()).sqrt();
    let t = b1 * r / (T::lit(2.0) * (b1 + T::lit(2.0)));
    (
        VerticalLine { z: r.recip(), t: -t },
        VerticalLine { z: -r.recip(), t },
    )
}

/// Denominator `(b1+1)² z⁴ + 2(b1+3) z² + 1` of the sonic' fold; positive.
pub(crate) fn sonic_fold_den<T: Scalar>(b1: T, z: T) -> T {
    let z2 = sq(z);
    sq(b1 + T::one()) * sq(z2) + T::lit(2.0) * (b1 + T::lit(3.0)) * z2 + T::one()
}

/// The sonic' fold, where Hugoniot curves are tangent to `Son'` (and `Tf`
/// touches `Son'`).
pub fn sonic_prime_fold<T: Scalar>(params: &ModelParams<T>, z: T) -> ChartPoint<T> {
    let b1 = params.b1();
    let den = sonic_fold_den(b1, z);
    let q = q2(b1, z);
    let t = -(b1 + T::lit(2.0)) * z * q / ((sq(z) + T::one()) * den);
    let y = -T::lit(2.0) * params.c() * q / den;
    ChartPoint::new(z, t, y)
}

/// The lines `(0, t, 2c) ⊂ Son` and `(0, t, -2c) ⊂ Son'`, returned as
/// `(son, son')`. The second is also `Son' ∩ Sigma`.
pub fn son_sonprime_lines_z0<T: Scalar>(params: &ModelParams<T>) -> (HorizontalLine<T>, HorizontalLine<T>) {
    let two_c = T::lit(2.0) * params.c();
    (
        HorizontalLine { z: T::zero(), y: two_c },
        HorizontalLine { z: T::zero(), y: -two_c },
    )
}

/// Whether a plain curve is one of the curved components through the
/// secondary bifurcation, which sweep out `Sigma`.
pub fn sigma_contains<T: Scalar>(params: &ModelParams<T>, curve: &HugoniotCurve<T>, tol: T) -> bool {
    !curve.prime && is_secondary(params, curve, tol)
}

/// `Y` on `Son'` over `(z, t)`: `2c (S5 t + Q2) / S4`. Undefined on the
/// double sonic lines, where `S4 = 0`.
pub fn sonprime_y<T: Scalar>(params: &ModelParams<T>, z: T, t: T) -> T {
    let b1 = params.b1();
    T::lit(2.0) * params.c() * (s5(b1, z) * t + q2(b1, z)) / s4(b1, z)
}

/// `Y` on `Son` over `(z, t)`; the reflection of [`sonprime_y`].
pub fn son_y<T: Scalar>(params: &ModelParams<T>, z: T, t: T) -> T {
    -sonprime_y(params, z, t)
}

/// `Tf` restricted to `Y = 0`, as a quadratic `[a, b, c]` in `t` (descending).
/// It is `4c²(z²+1)³ t²`, a double zero on the fold.
pub fn tf_characteristic_trace<T: Scalar>(params: &ModelParams<T>, z: T) -> [T; 3] {
    let [_, _, tf3_at_one] = tf_coefficients(params, z, T::one());
    [tf3_at_one, T::zero(), T::zero()]
}

/// `S4² · Tf` restricted to `Son'` (with `Y` eliminated), as a quadratic
/// `[a, b, c]` in `t` (descending). Tangency of `Tf` and `Son'` makes it a
/// perfect square whose double root is the sonic' fold.
pub fn tf_on_sonprime<T: Scalar>(params: &ModelParams<T>, z: T) -> [T; 3] {
    let (b1, c) = (params.b1(), params.c());
    let four = T::lit(4.0);
    let two_c = T::lit(2.0) * c;
    let w = sq(z) + T::one();
    let (p5, p4, q) = (s5(b1, z), s4(b1, z), q2(b1, z));
    let tf1 = w * (sq(b1) * sq(z) + four);
    let alpha = four * c * z * w * (b1 * sq(z) - b1 + four);
    let beta = T::lit(8.0) * c * q;
    let gamma = four * sq(c) * w * sq(w);
    // Y · S4 = 2c (S5 t + Q2)
    let a = sq(two_c) * tf1 * sq(p5) + two_c * alpha * p5 * p4 + gamma * sq(p4);
    let b = T::lit(2.0) * sq(two_c) * tf1 * p5 * q + two_c * (alpha * q + beta * p5) * p4;
    let cc = sq(two_c) * tf1 * sq(q) + two_c * beta * q * p4;
    [a, b, cc]
}

/// `b² - 4ac` relative to `b² + |4ac|`; zero for a perfect square.
pub fn relative_discriminant<T: Scalar>(q: [T; 3]) -> T {
    let [a, b, c] = q;
    let four_ac = T::lit(4.0) * a * c;
    let scale = sq(b) + four_ac.abs();
    if scale == T::zero() {
        T::zero()
    } else {
        (sq(b) - four_ac) / scale
    }
}

/// Distinguished curves lying on the surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveOnSurface {
    /// `(z, 0, 0)`, parametrized by `z`.
    FoldCurve,
    /// `Son ∩ Son' ∩ {Y = 0}`, parametrized by `z ≠ 0`.
    InflectionLocus,
    /// Vertical line at `z = 1/√(b1+1)`, parametrized by `Y`.
    DoubleSonicPlus,
    /// Vertical line at `z = -1/√(b1+1)`, parametrized by `Y`.
    DoubleSonicMinus,
    /// `Son' ∩ Tf`, parametrized by `z`.
    SonicPrimeFold,
    /// `(0, t, -2c)`, parametrized by `t`.
    SonPrimeLineZ0,
    /// `(0, t, 2c)`, parametrized by `t`.
    SonLineZ0,
}

impl CurveOnSurface {
    pub fn point<T: Scalar>(self, params: &ModelParams<T>, s: T) -> ChartPoint<T> {
        match self {
            CurveOnSurface::FoldCurve => fold_curve(s),
            CurveOnSurface::InflectionLocus => {
                ChartPoint::new(s, inflection_locus_t(params, s), T::zero())
            }
            CurveOnSurface::DoubleSonicPlus => double_sonic_points(params).0.at(s),
            CurveOnSurface::DoubleSonicMinus => double_sonic_points(params).1.at(s),
            CurveOnSurface::SonicPrimeFold => sonic_prime_fold(params, s),
            CurveOnSurface::SonPrimeLineZ0 => son_sonprime_lines_z0(params).1.at(s),
            CurveOnSurface::SonLineZ0 => son_sonprime_lines_z0(params).0.at(s),
        }
    }

    /// Surfaces the curve lies on.
    pub fn surfaces(self) -> &'static [SurfaceId] {
        use SurfaceId::*;
        match self {
            CurveOnSurface::FoldCurve => &[Characteristic, Tf, TfPrime],
            CurveOnSurface::InflectionLocus => &[Characteristic, Son, SonPrime],
            CurveOnSurface::DoubleSonicPlus | CurveOnSurface::DoubleSonicMinus => &[Son, SonPrime],
            CurveOnSurface::SonicPrimeFold => &[SonPrime, Tf],
            CurveOnSurface::SonPrimeLineZ0 => &[SonPrime, Sigma],
            CurveOnSurface::SonLineZ0 => &[Son],
        }
    }
}

/// Uniform `(z, t)` grid over which surfaces are meshed by solving for `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MeshGrid<T> {
    pub z_range: (T, T),
    pub t_range: (T, T),
    pub nz: usize,
    pub nt: usize,
    /// Half-width of the `z`-band excluded around the double sonic lines.
    pub pole_guard: T,
}

impl<T: Scalar> Default for MeshGrid<T> {
    fn default() -> Self {
        MeshGrid {
            z_range: (T::lit(-2.0), T::lit(2.0)),
            t_range: (T::lit(-3.0), T::lit(3.0)),
            nz: 41,
            nt: 61,
            pole_guard: T::lit(1e-3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct MeshRow<T> {
    pub surface: SurfaceId,
    pub z: T,
    pub t: T,
    #[serde(rename = "Y")]
    pub y: T,
}

impl<T: Scalar> MeshRow<T> {
    pub fn point(&self) -> ChartPoint<T> {
        ChartPoint::new(self.z, self.t, self.y)
    }
}

fn axis<T: Scalar>(range: (T, T), n: usize) -> impl Iterator<Item = T> {
    let n = n.max(2);
    let step = (range.1 - range.0) / T::from_usize(n - 1).expect("grid size fits");
    (0..n).map(move |i| {
        if i + 1 == n {
            range.1
        } else {
            range.0 + step * T::from_usize(i).expect("grid index fits")
        }
    })
}

/// Points of a surface over the grid, in `z`-major order. `Tf` and `Tf'`
/// contribute both branches of the quadratic where they are real.
pub fn mesh<T: Scalar>(params: &ModelParams<T>, id: SurfaceId, grid: &MeshGrid<T>) -> Vec<MeshRow<T>> {
    let zc = params.critical_z();
    let mut rows = Vec::new();
    for z in axis(grid.z_range, grid.nz) {
        let near_pole = (z.abs() - zc).abs() < grid.pole_guard;
        for t in axis(grid.t_range, grid.nt) {
            let mut push = |y: T| {
                if y.is_finite() {
                    rows.push(MeshRow { surface: id, z, t, y });
                }
            };
            match id {
                SurfaceId::Characteristic => push(T::zero()),
                SurfaceId::Son if !near_pole => push(son_y(params, z, t)),
                SurfaceId::SonPrime if !near_pole => push(sonprime_y(params, z, t)),
                SurfaceId::Son | SurfaceId::SonPrime => {}
                SurfaceId::Tf | SurfaceId::TfPrime => {
                    let [a, b, c] = tf_coefficients(params, z, t);
                    let disc = sq(b) - T::lit(4.0) * a * c;
                    if disc >= T::zero() {
                        let sign = if id == SurfaceId::Tf { T::one() } else { -T::one() };
                        let r = disc.sqrt();
                        // Stable form of the two roots.
                        let qq = -(b + b.signum() * r) / T::lit(2.0);
                        let (y1, y2) = if qq == T::zero() {
                            (T::zero(), T::zero())
                        } else {
                            (qq / a, c / qq)
                        };
                        let (lo, hi) = if y1 <= y2 { (y1, y2) } else { (y2, y1) };
                        push(sign * lo);
                        if hi != lo {
                            push(sign * hi);
                        }
                    }
                }
                SurfaceId::Sigma => {
                    let y = -T::lit(2.0) * params.c() * (t * z * (sq(z) + T::one()) + T::one())
                        / (sq(z) + T::one());
                    push(y);
                }
            }
        }
    }
    rows
}
