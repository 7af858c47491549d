//! Geometry of the wave manifold of a quadratic system of two conservation
//! laws (symmetric case IV), in the `(z, t, Y)` chart.
//!
//! * [`model`]: parameters, flux, charts and membership residuals;
//! * [`curves`]: Hugoniot and Hugoniot' curves, speeds along them and their
//!   crossings with the characteristic and sonic surfaces;
//! * [`surfaces`]: the surfaces `Y = 0`, `Son`, `Son'`, `Tf`, `Tf'`, `Sigma`,
//!   their distinguished curves and meshes;
//! * [`lax`]: slow/fast splits, the twelve regions and admissible shock arcs;
//! * [`oracle`]: brute-force checks for all of the above.
//!
//! Everything is generic over the floating point type; [`f64`] and [`f32`]
//! aliases are provided for the common types.

pub mod curves;
pub mod error;
pub mod lax;
pub mod model;
pub mod oracle;
pub mod poly;
pub mod scalar;
pub mod surfaces;

pub use curves::{CurveSample, HugoniotCurve};
pub use error::{Error, Result};
pub use lax::{ArcSegment, RegionLabel};
pub use model::{BlowupPoint, ChartPoint, ModelParams, Offsets, StatePair, Tolerances};
pub use poly::{Polynomial, RealRoots, Root};
pub use scalar::Scalar;
pub use surfaces::SurfaceId;

/// Double precision instantiations.
pub mod f64 {
    pub type ModelParams = crate::model::ModelParams<f64>;
    pub type Tolerances = crate::model::Tolerances<f64>;
    pub type ChartPoint = crate::model::ChartPoint<f64>;
    pub type BlowupPoint = crate::model::BlowupPoint<f64>;
    pub type StatePair = crate::model::StatePair<f64>;
    pub type HugoniotCurve = crate::curves::HugoniotCurve<f64>;
    pub type CurveSample = crate::curves::CurveSample<f64>;
    pub type ArcSegment = crate::lax::ArcSegment<f64>;
    pub type RealRoots = crate::poly::RealRoots<f64>;
}

/// Single precision instantiations.
pub mod f32 {
    pub type ModelParams = crate::model::ModelParams<f32>;
    pub type Tolerances = crate::model::Tolerances<f32>;
    pub type ChartPoint = crate::model::ChartPoint<f32>;
    pub type BlowupPoint = crate::model::BlowupPoint<f32>;
    pub type StatePair = crate::model::StatePair<f32>;
    pub type HugoniotCurve = crate::curves::HugoniotCurve<f32>;
    pub type CurveSample = crate::curves::CurveSample<f32>;
    pub type ArcSegment = crate::lax::ArcSegment<f32>;
    pub type RealRoots = crate::poly::RealRoots<f32>;
}
