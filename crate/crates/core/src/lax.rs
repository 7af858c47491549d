//! Slow/fast splits, the twelve regions, and Lax-admissible shock arcs.
//!
//! A shock from a right state along its Hugoniot curve is admissible when
//!
//! * L1: the curve is traversed with decreasing speed;
//! * L2: the speed stays below the slow characteristic speed of the right
//!   state, i.e. the speed at the slow crossing `U_s` of `Y = 0`;
//! * L3: the speed lies between the slow and fast characteristic speeds of
//!   the left state, read off the Hugoniot' curve through the point.
//!
//! Admissible arcs start on the slow half `t < 0` of the characteristic
//! surface (local shocks) or on the slow half of `Son'` where L3 holds
//! (non-local shocks), and stop at `Son`, where the speed turns around.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::curves::{
    curve_through_point, eval_curve, intersect_characteristic, intersect_son, intersect_sonprime,
    is_secondary, sample_curve, speed_along, speed_at, speed_derivative_along, CurveSample,
    HugoniotCurve,
};
use crate::error::{Error, Result};
use crate::model::{ChartPoint, ModelParams, Tolerances};
use crate::scalar::{sign_with_tol, sq, Scalar};
use crate::surfaces::{q2, s4, s5, son, sonic_fold_den, sonprime};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CharacteristicSide {
    Slow,
    Fast,
    Fold,
}

/// Side of the fold curve a characteristic point `(z, t, 0)` lies on.
pub fn classify_characteristic_point<T: Scalar>(
    _params: &ModelParams<T>,
    _z: T,
    t: T,
    tol: T,
) -> CharacteristicSide {
    match sign_with_tol(t, tol) {
        -1 => CharacteristicSide::Slow,
        1 => CharacteristicSide::Fast,
        _ => CharacteristicSide::Fold,
    }
}

/// `t` of the `Son'` point over `(z0, Y0)`.
pub fn sonprime_t0<T: Scalar>(params: &ModelParams<T>, z0: T, y0: T, tol: T) -> Result<T> {
    if z0.abs() < tol {
        return Err(Error::ZAxisDegenerate);
    }
    let (b1, c) = (params.b1(), params.c());
    Ok((y0 * s4(b1, z0) - T::lit(2.0) * c * q2(b1, z0)) / (T::lit(2.0) * c * s5(b1, z0)))
}

/// Shock speed at the `Son'` point over `(z0, Y0)`:
/// `(((b1+1)z0²-1)² Y0 + 6c(b1+1)z0² + 2c) / (2 b1 z0 ((b1+1)z0²+3))`.
pub fn sonprime_point_speed<T: Scalar>(params: &ModelParams<T>, z0: T, y0: T) -> T {
    let (b1, c) = (params.b1(), params.c());
    let bp = b1 + T::one();
    let z2 = sq(z0);
    (sq(bp * z2 - T::one()) * y0 + T::lit(6.0) * c * bp * z2 + T::lit(2.0) * c)
        / (T::lit(2.0) * b1 * z0 * (bp * z2 + T::lit(3.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SonPrimeSide {
    SlowSide,
    FastSide,
    OnBoundary,
}

/// Which half of `Son'` the point over `(z0, Y0)` belongs to.
///
/// The halves are separated by the sonic' fold `Y = -B/A` and the line
/// `z = 0`; the point is slow iff `z0 (A Y0 + B) > 0`, with
/// `A = (b1+1)² z0⁴ + 2(b1+3) z0² + 1` and `B = 2c((b1-1)z0² + 1)`.
pub fn classify_sonprime_point<T: Scalar>(
    params: &ModelParams<T>,
    z0: T,
    y0: T,
    tol: T,
) -> SonPrimeSide {
    let b1 = params.b1();
    let a = sonic_fold_den(b1, z0);
    let b = T::lit(2.0) * params.c() * q2(b1, z0);
    if z0.abs() < tol || (y0 + b / a).abs() < tol {
        return SonPrimeSide::OnBoundary;
    }
    if z0 * (a * y0 + b) > T::zero() {
        SonPrimeSide::SlowSide
    } else {
        SonPrimeSide::FastSide
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Half {
    Minus,
    Plus,
}

impl Half {
    fn symbol(self) -> char {
        match self {
            Half::Minus => '-',
            Half::Plus => '+',
        }
    }
}

/// The twelve regions cut out of the chart by `Y = 0`, `Son` and `Son'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum RegionLabel {
    /// Between `Son` and `Son'` beyond the double sonic locus.
    SsPrime { z: Half, y: Half },
    /// Bounded by `Son`, `Y = 0` and `Son'`.
    Lateral { z: Half, y: Half },
    AboveBridge,
    BelowBridge,
    AboveTunnel,
    BelowTunnel,
    Boundary,
    Unclassified,
}

impl RegionLabel {
    /// The twelve region labels, in a fixed order.
    pub fn regions() -> [RegionLabel; 12] {
        use Half::*;
        use RegionLabel::*;
        [
            SsPrime { z: Minus, y: Plus },
            SsPrime { z: Plus, y: Plus },
            Lateral { z: Minus, y: Plus },
            Lateral { z: Plus, y: Plus },
            AboveBridge,
            BelowBridge,
            SsPrime { z: Minus, y: Minus },
            SsPrime { z: Plus, y: Minus },
            Lateral { z: Minus, y: Minus },
            Lateral { z: Plus, y: Minus },
            AboveTunnel,
            BelowTunnel,
        ]
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionLabel::SsPrime { z, y } => write!(f, "SS'(z{},Y{})", z.symbol(), y.symbol()),
            RegionLabel::Lateral { z, y } => write!(f, "Lateral(z{},Y{})", z.symbol(), y.symbol()),
            RegionLabel::AboveBridge => f.write_str("AboveBridge"),
            RegionLabel::BelowBridge => f.write_str("BelowBridge"),
            RegionLabel::AboveTunnel => f.write_str("AboveTunnel"),
            RegionLabel::BelowTunnel => f.write_str("BelowTunnel"),
            RegionLabel::Boundary => f.write_str("Boundary"),
            RegionLabel::Unclassified => f.write_str("Unclassified"),
        }
    }
}

impl FromStr for RegionLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        RegionLabel::regions()
            .into_iter()
            .chain([RegionLabel::Boundary, RegionLabel::Unclassified])
            .find(|r| r.to_string() == s)
            .ok_or_else(|| format!("unknown region `{s}`"))
    }
}

impl From<RegionLabel> for String {
    fn from(r: RegionLabel) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for RegionLabel {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, Self::Error> {
        s.parse()
    }
}

/// Position of `z` relative to the critical values `-zc < 0 < zc`,
/// `zc = 1/√(b1+1)`: `0` for `z < -zc`, `1` for `[-zc, 0)`, `2` for
/// `[0, zc)`, `3` for `z >= zc`.
pub fn z_interval<T: Scalar>(params: &ModelParams<T>, z: T) -> u8 {
    let zc = params.critical_z();
    if z < -zc {
        0
    } else if z < T::zero() {
        1
    } else if z < zc {
        2
    } else {
        3
    }
}

/// Key of the region lookup: signs of `Y`, `son`, `son'` and the
/// `z`-interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignKey {
    pub y: i8,
    pub son: i8,
    pub sonprime: i8,
    pub interval: u8,
}

/// One row of the region lookup table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionEntry {
    pub key: SignKey,
    pub label: RegionLabel,
}

const fn entry(y: i8, son: i8, sonprime: i8, interval: u8, label: RegionLabel) -> RegionEntry {
    RegionEntry {
        key: SignKey { y, son, sonprime, interval },
        label,
    }
}

const ZM_YP: (Half, Half) = (Half::Minus, Half::Plus);
const ZP_YP: (Half, Half) = (Half::Plus, Half::Plus);
const ZM_YM: (Half, Half) = (Half::Minus, Half::Minus);
const ZP_YM: (Half, Half) = (Half::Plus, Half::Minus);

const fn ss(h: (Half, Half)) -> RegionLabel {
    RegionLabel::SsPrime { z: h.0, y: h.1 }
}

const fn lat(h: (Half, Half)) -> RegionLabel {
    RegionLabel::Lateral { z: h.0, y: h.1 }
}

/// Sign vector to region, generated by flood-filling the default instance
/// (see `oracle::derive_region_table`) and frozen here. Sign vectors that do
/// not occur map to [`RegionLabel::Unclassified`].
pub const REGION_TABLE: [RegionEntry; 24] = [
    entry(1, -1, -1, 0, RegionLabel::BelowBridge),
    entry(1, -1, -1, 1, RegionLabel::BelowBridge),
    entry(1, -1, -1, 2, RegionLabel::BelowBridge),
    entry(1, -1, -1, 3, RegionLabel::BelowBridge),
    entry(1, -1, 1, 0, ss(ZM_YP)),
    entry(1, -1, 1, 3, ss(ZP_YP)),
    entry(1, 1, 1, 0, lat(ZM_YP)),
    entry(1, 1, 1, 1, lat(ZM_YP)),
    entry(1, 1, 1, 2, lat(ZP_YP)),
    entry(1, 1, 1, 3, lat(ZP_YP)),
    entry(1, 1, -1, 1, RegionLabel::AboveBridge),
    entry(1, 1, -1, 2, RegionLabel::AboveBridge),
    entry(-1, -1, -1, 0, RegionLabel::AboveTunnel),
    entry(-1, -1, -1, 1, RegionLabel::AboveTunnel),
    entry(-1, -1, -1, 2, RegionLabel::AboveTunnel),
    entry(-1, -1, -1, 3, RegionLabel::AboveTunnel),
    entry(-1, 1, -1, 0, ss(ZM_YM)),
    entry(-1, 1, -1, 3, ss(ZP_YM)),
    entry(-1, 1, 1, 0, lat(ZM_YM)),
    entry(-1, 1, 1, 1, lat(ZM_YM)),
    entry(-1, 1, 1, 2, lat(ZP_YM)),
    entry(-1, 1, 1, 3, lat(ZP_YM)),
    entry(-1, -1, 1, 1, RegionLabel::BelowTunnel),
    entry(-1, -1, 1, 2, RegionLabel::BelowTunnel),
];

pub fn lookup_region(key: SignKey) -> RegionLabel {
    REGION_TABLE
        .iter()
        .find(|e| e.key == key)
        .map_or(RegionLabel::Unclassified, |e| e.label)
}

/// Sign key of a point, or `None` when it lies within `tol` of a surface.
pub fn sign_key<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>, tol: T) -> Option<SignKey> {
    let y = sign_with_tol(cp.y, tol);
    let s = sign_with_tol(son(params, cp), tol);
    let sp = sign_with_tol(sonprime(params, cp), tol);
    if y == 0 || s == 0 || sp == 0 {
        return None;
    }
    Some(SignKey {
        y,
        son: s,
        sonprime: sp,
        interval: z_interval(params, cp.z),
    })
}

pub fn region_classify<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>, tol: T) -> RegionLabel {
    sign_key(params, cp, tol).map_or(RegionLabel::Boundary, lookup_region)
}

/// Crossings of `Y = 0` by the Hugoniot (or Hugoniot') curve through a
/// point: `U_s`, `U_f` on the plain curve and `U'_s`, `U'_f` on the primed one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SidePoint<T> {
    pub u_s: Option<ChartPoint<T>>,
    pub u_f: Option<ChartPoint<T>>,
    pub u_prime_s: Option<ChartPoint<T>>,
    pub u_prime_f: Option<ChartPoint<T>>,
}

/// Slow and fast crossings of `Y = 0`, when the curve crosses it
/// transversally twice.
pub fn characteristic_pair<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    tols: &Tolerances<T>,
) -> Result<(ChartPoint<T>, ChartPoint<T>)> {
    let kind = if curve.prime { "Hugoniot'" } else { "Hugoniot" };
    let roots = intersect_characteristic(params, curve, tols)?;
    let simple: Vec<T> = roots.simple().collect();
    if simple.len() != 2 {
        return Err(Error::MissingSidePoint(format!(
            "{kind} curve meets Y = 0 in {} transversal point(s)",
            simple.len()
        )));
    }
    let a = eval_curve(params, curve, simple[0]);
    let b = eval_curve(params, curve, simple[1]);
    let side = |p: &ChartPoint<T>| classify_characteristic_point(params, p.z, p.t, tols.boundary);
    match (side(&a), side(&b)) {
        (CharacteristicSide::Slow, CharacteristicSide::Fast) => Ok((a, b)),
        (CharacteristicSide::Fast, CharacteristicSide::Slow) => Ok((b, a)),
        _ => Err(Error::MissingSidePoint(format!(
            "{kind} curve crossings of Y = 0 are not one slow and one fast"
        ))),
    }
}

/// The side points of `cp`. The plain pair is required; the primed pair is
/// reported when it exists.
pub fn side_points<T: Scalar>(
    params: &ModelParams<T>,
    cp: &ChartPoint<T>,
    tols: &Tolerances<T>,
) -> Result<SidePoint<T>> {
    let plain = curve_through_point(params, cp, false);
    if is_secondary(params, &plain, tols.boundary) {
        return Err(Error::SecondaryBifurcation {
            offset: (plain.l + T::lit(2.0) * params.c()).as_f64(),
        });
    }
    let (u_s, u_f) = characteristic_pair(params, &plain, tols)?;
    let prime = curve_through_point(params, cp, true);
    let primed = characteristic_pair(params, &prime, tols).ok();
    Ok(SidePoint {
        u_s: Some(u_s),
        u_f: Some(u_f),
        u_prime_s: primed.map(|p| p.0),
        u_prime_f: primed.map(|p| p.1),
    })
}

/// L3 on `Son'`: holds exactly on `-1/√(b1+1) < z0 < 1/√(b1+1)`.
pub fn l3_closed_form<T: Scalar>(params: &ModelParams<T>, z0: T) -> bool {
    (params.b1() + T::one()) * sq(z0) < T::one()
}

/// L3 at the `Son'` point over `(z0, Y0)`, checked directly: the speed there
/// must lie strictly between the speeds at the slow and fast crossings of
/// `Y = 0` by the Hugoniot' curve through it.
pub fn l3_numeric<T: Scalar>(params: &ModelParams<T>, z0: T, y0: T, tols: &Tolerances<T>) -> Result<bool> {
    let t0 = sonprime_t0(params, z0, y0, tols.boundary)?;
    let point = ChartPoint::new(z0, t0, y0);
    let prime = curve_through_point(params, &point, true);
    if is_secondary(params, &prime, tols.boundary) {
        return Err(Error::SecondaryBifurcation {
            offset: (prime.l + T::lit(2.0) * params.c()).as_f64(),
        });
    }
    let (slow, fast) = characteristic_pair(params, &prime, tols)?;
    let s = sonprime_point_speed(params, z0, y0);
    Ok(speed_at(params, &slow) < s && s < speed_at(params, &fast))
}

/// Whether `s` lies strictly between `(a z + b)/(c z + d)` evaluated at the
/// two real roots of `f z² + g z + h`.
///
/// Eliminating the roots gives a single quadratic sign test in `s`, which is
/// symmetric in the two roots: the answer does not depend on which bound is
/// the larger.
#[allow(clippy::too_many_arguments)]
pub fn interval_condition<T: Scalar>(a: T, b: T, c: T, d: T, f: T, g: T, h: T, s: T) -> Result<bool> {
    if f == T::zero() {
        return Err(Error::DegenerateDenominator("f = 0: not a quadratic".into()));
    }
    if sq(g) - T::lit(4.0) * f * h <= T::zero() {
        return Err(Error::NoRealRoots);
    }
    // Resultant of f z² + g z + h and c z + d.
    let lead = sq(c) * h - d * c * g + sq(d) * f;
    if lead == T::zero() {
        return Err(Error::DegenerateDenominator(
            "c z + d vanishes at a root".into(),
        ));
    }
    let two = T::lit(2.0);
    let mid = a * g * d + b * c * g - two * (a * c * h + b * d * f);
    let last = sq(a) * h - a * b * g + sq(b) * f;
    Ok(((lead * s + mid) * s + last) / lead < T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArcStart {
    /// A transversal crossing of the slow characteristic half-plane.
    Cs,
    /// A point of the slow half of `Son'` where L3 holds.
    SonPrimeS,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArcEnd {
    Son,
    /// The clip window `|z| <= z_max`.
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ArcClass {
    Local,
    NonLocal,
}

/// An admissible arc of a Hugoniot curve, oriented from `z_start` to
/// `z_end` with decreasing speed (so `z_end < z_start` is allowed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ArcSegment<T> {
    pub curve: HugoniotCurve<T>,
    pub z_start: T,
    pub z_end: T,
    pub start_kind: ArcStart,
    pub end_kind: ArcEnd,
    pub classification: ArcClass,
}

impl<T: Scalar> ArcSegment<T> {
    pub fn length(&self) -> T {
        (self.z_end - self.z_start).abs()
    }

    /// `n` points from start to end, inclusive.
    pub fn samples(&self, params: &ModelParams<T>, n: usize) -> Vec<CurveSample<T>> {
        sample_curve(params, &self.curve, self.z_start, self.z_end, n)
    }

    /// `n` points strictly inside the arc.
    pub fn interior_samples(&self, params: &ModelParams<T>, n: usize) -> Vec<CurveSample<T>> {
        let mut all = sample_curve(params, &self.curve, self.z_start, self.z_end, n + 2);
        all.pop();
        all.remove(0);
        all
    }
}

/// Admissible arcs on a plain Hugoniot curve, clipped to `|z| <= z_max`.
pub fn extract_arcs<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    tols: &Tolerances<T>,
    z_max: T,
) -> Result<Vec<ArcSegment<T>>> {
    if curve.prime {
        return Err(Error::PrimeCurve);
    }
    if is_secondary(params, curve, tols.boundary) {
        return Err(Error::SecondaryBifurcation {
            offset: (curve.l + T::lit(2.0) * params.c()).as_f64(),
        });
    }
    let inside = |z: &T| z.abs() <= z_max;

    let mut starts: Vec<(T, ArcStart)> = Vec::new();
    for z in intersect_characteristic(params, curve, tols)?.simple().filter(inside) {
        let p = eval_curve(params, curve, z);
        if classify_characteristic_point(params, z, p.t, tols.boundary) == CharacteristicSide::Slow {
            starts.push((z, ArcStart::Cs));
        }
    }
    for z in intersect_sonprime(params, curve, tols)?.simple().filter(inside) {
        let p = eval_curve(params, curve, z);
        if classify_sonprime_point(params, z, p.y, tols.boundary) == SonPrimeSide::SlowSide
            && l3_closed_form(params, z)
        {
            starts.push((z, ArcStart::SonPrimeS));
        }
    }

    let son_roots = intersect_son(params, curve, tols)?.values();
    let mut arcs = Vec::new();
    for (z0, kind) in starts {
        let slope = speed_derivative_along(params, curve, z0);
        let scale = T::one() + speed_along(params, curve, z0).abs();
        if slope.abs() <= tols.root * scale {
            continue;
        }
        let forward = slope < T::zero();
        let next_son = son_roots
            .iter()
            .copied()
            .filter(|&r| {
                if forward {
                    r > z0 + tols.trim
                } else {
                    r < z0 - tols.trim
                }
            })
            .filter(inside)
            .reduce(|a, b| if forward { a.min(b) } else { a.max(b) });
        let (z_end, end_kind) = match next_son {
            Some(r) => (r, ArcEnd::Son),
            None => (if forward { z_max } else { -z_max }, ArcEnd::Infinity),
        };
        let arc = ArcSegment {
            curve: *curve,
            z_start: z0,
            z_end,
            start_kind: kind,
            end_kind,
            classification: match kind {
                ArcStart::Cs => ArcClass::Local,
                ArcStart::SonPrimeS => ArcClass::NonLocal,
            },
        };
        if arc.length() >= tols.trim {
            arcs.push(arc);
        }
    }
    Ok(arcs)
}

/// `(ds/dz, dY/dz)` at `(z0, t0, 0)` along the Hugoniot curve through it:
///
/// ```text
/// ds/dz = c (S5 t0 + Q2) / ((z0² + 1) Q2)
/// dY/dz = -2c (z0² + 1) t0 / Q2
/// ```
pub fn local_side_derivatives<T: Scalar>(params: &ModelParams<T>, z0: T, t0: T) -> (T, T) {
    let (b1, c) = (params.b1(), params.c());
    let w = sq(z0) + T::one();
    let q = q2(b1, z0);
    let ds = c * (s5(b1, z0) * t0 + q) / (w * q);
    let dy = -T::lit(2.0) * c * w * t0 / q;
    (ds, dy)
}
