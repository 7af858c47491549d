//! Model parameters, the quadratic flux and the coordinate charts.
//!
//! Three coordinate systems are in play:
//!
//! * state space `(u, v, u', v', s)`, where the Rankine-Hugoniot relation
//!   `F(W) - F(W') = s (W - W')` cuts out the wave manifold;
//! * blow-up coordinates `(Ũ, V1, z, Y)` with `X = zY`, in which the manifold
//!   is `G = (z² - 1) V1 - z Ũ + c = 0`;
//! * the working chart `(z, t, Y)`, which parametrizes `G = 0` and covers
//!   everything except the plane `z = ∞`.

use serde::{Deserialize, Serialize};

use crate::curves::speed_at;
use crate::error::{Error, Result};
use crate::scalar::{sq, Scalar};

/// Affine offsets of the flux.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Offsets<T> {
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub a4: T,
}

/// Parameters of the symmetric quadratic flux
///
/// ```text
/// f(u, v) = v²/2 + (b1 + 1) u²/2 + a1 u + a2 v
/// g(u, v) = u v + a3 u + a4 v
/// ```
///
/// with `b1 > 1` and `c = a3 - a2 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ModelParams<T> {
    b1: T,
    c: T,
    offsets: Offsets<T>,
}

impl<T: Scalar> ModelParams<T> {
    /// Parameters with the canonical offsets `a1 = a2 = a4 = 0`, `a3 = c`.
    pub fn new(b1: T, c: T) -> Result<Self> {
        Self::validate(b1, c)?;
        Ok(ModelParams {
            b1,
            c,
            offsets: Offsets {
                a1: T::zero(),
                a2: T::zero(),
                a3: c,
                a4: T::zero(),
            },
        })
    }

    /// Parameters from explicit offsets; `c` is `a3 - a2`.
    pub fn with_offsets(b1: T, offsets: Offsets<T>) -> Result<Self> {
        let c = offsets.a3 - offsets.a2;
        Self::validate(b1, c)?;
        if ![offsets.a1, offsets.a2, offsets.a3, offsets.a4]
            .iter()
            .all(|a| a.is_finite())
        {
            return Err(Error::InvalidParams("offsets must be finite".into()));
        }
        Ok(ModelParams { b1, c, offsets })
    }

    fn validate(b1: T, c: T) -> Result<()> {
        if !(b1.is_finite() && b1 > T::one()) {
            return Err(Error::InvalidParams(format!("b1 must exceed 1, got {b1}")));
        }
        if !(c.is_finite() && c > T::zero()) {
            return Err(Error::InvalidParams(format!(
                "c = a3 - a2 must be positive, got {c}"
            )));
        }
        Ok(())
    }

    pub fn b1(&self) -> T {
        self.b1
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn offsets(&self) -> Offsets<T> {
        self.offsets
    }

    /// `1/√(b1 + 1)`, the `z` of the positive double sonic line.
    pub fn critical_z(&self) -> T {
        (self.b1 + T::one()).sqrt().recip()
    }

    /// Constant added to the reduced chart speed to obtain the physical shock
    /// speed when the flux carries offsets; zero for the canonical offsets.
    pub fn speed_shift(&self) -> T {
        let o = self.offsets;
        ((self.b1 + T::one()) * o.a4 - o.a1) / self.b1
    }
}

impl Default for ModelParams<f64> {
    fn default() -> Self {
        ModelParams::new(2.0, 1.0).expect("default instance is valid")
    }
}

impl Default for ModelParams<f32> {
    fn default() -> Self {
        ModelParams::new(2.0, 1.0).expect("default instance is valid")
    }
}

/// Numerical tolerances used across the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Tolerances<T> {
    /// Manifold membership (absolute residual of `G`).
    pub membership: T,
    /// Maximum reported root residual, relative to `1 + max |coeff|`.
    pub root: T,
    /// Relative size of `|p|` at a critical point that makes it a multiple root.
    pub tangency: T,
    /// Distance below which two roots are reported as one.
    pub merge: T,
    /// Dead band around zero for sign-based classification.
    pub boundary: T,
    /// Trim around tangencies and minimum arc length, in `z`.
    pub trim: T,
    /// Half-width of the excluded band around poles when meshing, in `z`.
    pub pole_guard: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            membership: T::tol(1e-9),
            root: T::tol(1e-9),
            tangency: T::tol(1e-12),
            merge: T::tol(1e-6),
            boundary: T::tol(1e-9),
            trim: T::tol(1e-6),
            pole_guard: T::tol(1e-3),
        }
    }
}

impl<T: Scalar> Tolerances<T> {
    pub fn root_options(&self) -> crate::poly::RootOptions<T> {
        crate::poly::RootOptions {
            tangency: self.tangency,
            merge: self.merge,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.membership,
            self.root,
            self.tangency,
            self.merge,
            self.boundary,
            self.trim,
            self.pole_guard,
        ];
        if all.iter().all(|t| t.is_finite() && *t > T::zero()) {
            Ok(())
        } else {
            Err(Error::InvalidParams("tolerances must be positive".into()))
        }
    }
}

/// A pair of states and a speed, `(u, v)` on one side and `(u', v')` on the
/// other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct StatePair<T> {
    pub u: T,
    pub v: T,
    pub u_prime: T,
    pub v_prime: T,
    pub s: T,
}

/// Point in blow-up coordinates. `X = zY` is derived, see [`BlowupPoint::x`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BlowupPoint<T> {
    pub u_tilde: T,
    pub v1: T,
    pub z: T,
    #[serde(rename = "Y")]
    pub y: T,
}

impl<T: Scalar> BlowupPoint<T> {
    /// `X = u - u' = zY`.
    pub fn x(&self) -> T {
        self.z * self.y
    }
}

/// Point of the wave manifold (minus the plane at `z = ∞`) in the working
/// chart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ChartPoint<T> {
    pub z: T,
    pub t: T,
    #[serde(rename = "Y")]
    pub y: T,
}

impl<T: Scalar> ChartPoint<T> {
    pub fn new(z: T, t: T, y: T) -> Self {
        ChartPoint { z, t, y }
    }

    pub fn is_finite(&self) -> bool {
        self.z.is_finite() && self.t.is_finite() && self.y.is_finite()
    }

    /// The image under the swap of the two states, which fixes `z` and `t`.
    pub fn reflected(&self) -> Self {
        ChartPoint::new(self.z, self.t, -self.y)
    }
}

/// Flux `(f, g)` at `(u, v)`.
pub fn flux_eval<T: Scalar>(params: &ModelParams<T>, u: T, v: T) -> (T, T) {
    let half = T::lit(0.5);
    let o = params.offsets;
    let f = half * v * v + half * (params.b1 + T::one()) * u * u + o.a1 * u + o.a2 * v;
    let g = u * v + o.a3 * u + o.a4 * v;
    (f, g)
}

/// `F(W) - F(W') - s (W - W')`.
pub fn rh_residual<T: Scalar>(params: &ModelParams<T>, sp: &StatePair<T>) -> (T, T) {
    let (f1, g1) = flux_eval(params, sp.u, sp.v);
    let (f2, g2) = flux_eval(params, sp.u_prime, sp.v_prime);
    (
        f1 - f2 - sp.s * (sp.u - sp.u_prime),
        g1 - g2 - sp.s * (sp.v - sp.v_prime),
    )
}

/// Largest component of [`rh_residual`] divided by the size of the terms
/// that produced it.
pub fn rh_relative_residual<T: Scalar>(params: &ModelParams<T>, sp: &StatePair<T>) -> T {
    let (r1, r2) = rh_residual(params, sp);
    let (f1, g1) = flux_eval(params, sp.u, sp.v);
    let (f2, g2) = flux_eval(params, sp.u_prime, sp.v_prime);
    let s = sp.s.abs();
    let scale1 = T::one() + f1.abs() + f2.abs() + s * (sp.u.abs() + sp.u_prime.abs());
    let scale2 = T::one() + g1.abs() + g2.abs() + s * (sp.v.abs() + sp.v_prime.abs());
    (r1.abs() / scale1).max(r2.abs() / scale2)
}

/// `G = (z² - 1) V1 - z Ũ + c`.
pub fn manifold_residual<T: Scalar>(params: &ModelParams<T>, bp: &BlowupPoint<T>) -> T {
    (sq(bp.z) - T::one()) * bp.v1 - bp.z * bp.u_tilde + params.c
}

/// `Ũ = 2cz/(z²+1) + c t (z²-1)`, `V1 = c/(z²+1) + c t z`.
pub fn chart_to_blowup<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>) -> BlowupPoint<T> {
    let c = params.c;
    let z = cp.z;
    let w = sq(z) + T::one();
    BlowupPoint {
        u_tilde: T::lit(2.0) * c * z / w + c * cp.t * (sq(z) - T::one()),
        v1: c / w + c * cp.t * z,
        z,
        y: cp.y,
    }
}

/// Inverse of [`chart_to_blowup`] on the manifold.
///
/// `t` is recovered by projecting `(Ũ, V1)` minus the fold point onto the
/// direction `(z² - 1, z)`, which never vanishes.
pub fn chart_from_blowup<T: Scalar>(
    params: &ModelParams<T>,
    bp: &BlowupPoint<T>,
    tol: T,
) -> Result<ChartPoint<T>> {
    let residual = manifold_residual(params, bp);
    let scale = T::one() + bp.v1.abs() * (sq(bp.z) + T::one()) + (bp.z * bp.u_tilde).abs();
    if !(residual.abs() <= tol * scale) {
        return Err(Error::NotOnManifold {
            residual: residual.as_f64(),
        });
    }
    let c = params.c;
    let z = bp.z;
    let w = sq(z) + T::one();
    let du = bp.u_tilde - T::lit(2.0) * c * z / w;
    let dv = bp.v1 - c / w;
    let dir_u = sq(z) - T::one();
    let t = (dir_u * du + z * dv) / (c * (sq(dir_u) + sq(z)));
    Ok(ChartPoint::new(z, t, bp.y))
}

/// Blows a chart point down to a pair of states joined by a shock.
pub fn chart_to_states<T: Scalar>(params: &ModelParams<T>, cp: &ChartPoint<T>) -> StatePair<T> {
    let bp = chart_to_blowup(params, cp);
    let o = params.offsets;
    let half = T::lit(0.5);
    let u_mid = (bp.u_tilde - o.a1 + o.a4) / params.b1;
    let v_mid = bp.v1 - o.a3;
    let x = bp.x();
    StatePair {
        u: u_mid + half * x,
        v: v_mid + half * bp.y,
        u_prime: u_mid - half * x,
        v_prime: v_mid - half * bp.y,
        s: speed_at(params, cp) + params.speed_shift(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> ModelParams<f64> {
        ModelParams::default()
    }

    #[test]
    fn rejects_invalid_params() {
        assert!(ModelParams::new(1.0, 1.0).is_err());
        assert!(ModelParams::new(2.0, 0.0).is_err());
        assert!(ModelParams::new(f64::NAN, 1.0).is_err());
        let bad = Offsets { a1: 0.0, a2: 1.0, a3: 0.5, a4: 0.0 };
        assert!(ModelParams::with_offsets(2.0, bad).is_err());
    }

    #[test]
    fn c_from_offsets() {
        let o = Offsets { a1: 0.3, a2: -0.5, a3: 1.0, a4: 0.2 };
        let m = ModelParams::with_offsets(3.0, o).unwrap();
        assert_eq!(m.c(), 1.5);
    }

    #[test]
    fn flux_examples() {
        let zero = ModelParams::with_offsets(
            2.0,
            Offsets { a1: 0.0, a2: 0.0, a3: 1.0, a4: 0.0 },
        )
        .unwrap();
        assert_eq!(flux_eval(&zero, 0.0, 0.0), (0.0, 0.0));
        // b1 = 2, all offsets zero except a3: f(1,0) = 3/2, g(1,0) = a3.
        assert_eq!(flux_eval(&zero, 1.0, 0.0).0, 1.5);
        assert_eq!(flux_eval(&zero, 1.0, 1.0), (2.0, 2.0));
    }

    #[test]
    fn diagonal_has_zero_residual() {
        let sp = StatePair { u: 0.3, v: -1.2, u_prime: 0.3, v_prime: -1.2, s: 7.0 };
        assert_eq!(rh_residual(&p(), &sp), (0.0, 0.0));
    }

    #[test]
    fn perturbed_speed_breaks_rankine_hugoniot() {
        let cp = ChartPoint::new(0.4, -0.3, 1.1);
        let mut sp = chart_to_states(&p(), &cp);
        assert!(rh_relative_residual(&p(), &sp) < 1e-12);
        sp.s += 0.1;
        assert!(rh_relative_residual(&p(), &sp) > 1e-3);
    }

    #[test]
    fn chart_examples() {
        let m = p();
        let bp = chart_to_blowup(&m, &ChartPoint::new(0.0, 1.0, 0.0));
        assert_eq!((bp.u_tilde, bp.v1), (-1.0, 1.0));

        let z0: f64 = 0.8;
        let fold = chart_to_blowup(&m, &ChartPoint::new(z0, 0.0, 0.0));
        assert!((fold.u_tilde - 2.0 * z0 / (z0 * z0 + 1.0)).abs() < 1e-15);
        assert!((fold.v1 - 1.0 / (z0 * z0 + 1.0)).abs() < 1e-15);
        assert!(manifold_residual(&m, &fold).abs() < 1e-15);

        let origin = BlowupPoint { u_tilde: 0.0, v1: 0.0, z: 0.0, y: 0.0 };
        assert_eq!(manifold_residual(&m, &origin), 1.0);
    }

    #[test]
    fn off_manifold_point_is_rejected() {
        let bp = BlowupPoint { u_tilde: 0.0, v1: 0.0, z: 0.0, y: 0.0 };
        assert!(matches!(
            chart_from_blowup(&p(), &bp, 1e-9),
            Err(Error::NotOnManifold { .. })
        ));
    }

    #[test]
    fn blow_down_examples() {
        let m = p();
        let fold = chart_to_states(&m, &ChartPoint::new(1.0, 0.0, 0.0));
        assert_eq!(fold.u, fold.u_prime);
        assert_eq!(fold.v, fold.v_prime);

        let z_axis = chart_to_states(&m, &ChartPoint::new(0.0, 0.0, 1.0));
        assert_eq!(z_axis.u, z_axis.u_prime);
        assert!((z_axis.v - z_axis.v_prime - 1.0).abs() < 1e-15);
        assert!(rh_relative_residual(&m, &z_axis) < 1e-15);
    }

    #[test]
    fn offsets_are_inverted_by_blow_down() {
        let o = Offsets { a1: 0.7, a2: -0.4, a3: 0.9, a4: -1.3 };
        let m = ModelParams::with_offsets(2.5, o).unwrap();
        for &(z, t, y) in &[(0.3, -0.7, 1.4), (-2.0, 0.5, -0.6), (0.0, 1.0, 2.0)] {
            let sp = chart_to_states(&m, &ChartPoint::new(z, t, y));
            assert!(rh_relative_residual(&m, &sp) < 1e-13, "{sp:?}");
        }
    }

    #[test]
    fn reflection_swaps_the_states() {
        let m = p();
        let cp = ChartPoint::new(0.6, 0.2, -0.9);
        let a = chart_to_states(&m, &cp);
        let b = chart_to_states(&m, &cp.reflected());
        assert!((a.u - b.u_prime).abs() < 1e-15);
        assert!((a.v - b.v_prime).abs() < 1e-15);
        assert_eq!(a.s, b.s);
    }

    #[test]
    fn generic_over_f32() {
        let m = ModelParams::<f32>::default();
        let cp = ChartPoint::new(0.5f32, -0.25, 0.75);
        let bp = chart_to_blowup(&m, &cp);
        assert!(manifold_residual(&m, &bp).abs() < 1e-6);
        let back = chart_from_blowup(&m, &bp, 1e-5).unwrap();
        assert!((back.t - cp.t).abs() < 1e-5);
    }
}
