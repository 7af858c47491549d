//! Brute-force verifiers for the closed forms.
//!
//! Nothing here reuses the algebra it checks. Intersections are found by
//! bracketing sampled surface values, derivatives by Richardson-extrapolated
//! central differences, membership by blowing points down to state space, and
//! the region count by flood-filling a voxel grid. The [`CHECKS`] registry
//! ties every closed form of the crate to at least one such check.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curves::{
    self, curve_from_kl, curve_through_point, eval_curve, intersect_characteristic, intersect_son,
    intersect_sonprime, second_characteristic_z, speed_along, speed_at, speed_derivative_along,
    HugoniotCurve,
};
use crate::error::{Error, Result};
use crate::lax::{
    self, classify_sonprime_point, extract_arcs, interval_condition, l3_closed_form, l3_numeric,
    local_side_derivatives, region_classify, side_points, sonprime_point_speed, sonprime_t0,
    ArcSegment, Half, RegionEntry, RegionLabel, SignKey, SonPrimeSide, REGION_TABLE,
};
use crate::model::{
    chart_from_blowup, chart_to_blowup, chart_to_states, manifold_residual, rh_relative_residual,
    ChartPoint, ModelParams, Offsets, StatePair, Tolerances,
};
use crate::poly::{RealRoots, Root};
use crate::scalar::{sq, Scalar};
use crate::surfaces::{
    self, double_sonic_points, fold_curve, inflection_locus_t, mesh, relative_discriminant,
    sigma_contains, son, son_sonprime_lines_z0, sonic_prime_fold, sonprime, surface_value, tf,
    tf_characteristic_trace, tf_on_sonprime, CurveOnSurface, MeshGrid, SurfaceId,
};

// ---------------------------------------------------------------------------
// Reports

/// An input that produced one of the largest residuals of a check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    pub input: Vec<f64>,
    pub value: f64,
}

/// Outcome of one brute-force check. `pass` holds exactly when
/// `max_residual <= tolerance`; a check that saw no samples reports an
/// infinite residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub check: String,
    pub samples: usize,
    /// Samples outside the precondition of the check, not counted.
    pub skipped: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub worst: Vec<Offender>,
    pub notes: Vec<String>,
}

const WORST_KEPT: usize = 5;

/// Accumulates residuals into an [`OracleReport`].
#[derive(Debug, Clone)]
pub struct Tally {
    check: String,
    tolerance: f64,
    samples: usize,
    skipped: usize,
    max: f64,
    worst: Vec<Offender>,
    notes: Vec<String>,
}

impl Tally {
    pub fn new(check: impl Into<String>, tolerance: f64) -> Self {
        Tally {
            check: check.into(),
            tolerance,
            samples: 0,
            skipped: 0,
            max: 0.0,
            worst: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records one residual; NaN counts as infinitely bad.
    pub fn record(&mut self, input: &[f64], value: f64) {
        let value = if value.is_nan() { f64::INFINITY } else { value.abs() };
        self.samples += 1;
        self.max = self.max.max(value);
        if value > 0.0 && (self.worst.len() < WORST_KEPT || value > self.worst[WORST_KEPT - 1].value) {
            self.worst.push(Offender {
                input: input.to_vec(),
                value,
            });
            self.worst
                .sort_by(|a, b| b.value.partial_cmp(&a.value).expect("residuals are not NaN"));
            self.worst.truncate(WORST_KEPT);
        }
    }

    /// Records a pass/fail outcome as residual `0` or `1`.
    pub fn record_bool(&mut self, input: &[f64], ok: bool) {
        self.record(input, if ok { 0.0 } else { 1.0 });
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn finish(self) -> OracleReport {
        let max_residual = if self.samples == 0 { f64::INFINITY } else { self.max };
        OracleReport {
            check: self.check,
            samples: self.samples,
            skipped: self.skipped,
            max_residual,
            tolerance: self.tolerance,
            pass: max_residual <= self.tolerance,
            worst: self.worst,
            notes: self.notes,
        }
    }
}

// ---------------------------------------------------------------------------
// Flood fill

/// Voxel grid for [`oracle_floodfill`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GridSpec<T> {
    pub z: (T, T),
    pub t: (T, T),
    #[serde(rename = "Y")]
    pub y: (T, T),
    /// Cells per axis `(z, t, Y)`; each axis has one more node than cells.
    pub cells: [usize; 3],
    /// Radius, in cells, of the band around surface crossings that is
    /// removed before filling.
    pub guard: usize,
}

impl<T: Scalar> Default for GridSpec<T> {
    fn default() -> Self {
        GridSpec {
            z: (T::lit(-2.0), T::lit(2.0)),
            t: (T::lit(-3.0), T::lit(3.0)),
            y: (T::lit(-6.0), T::lit(6.0)),
            cells: [120; 3],
            guard: 2,
        }
    }
}

impl<T: Scalar> GridSpec<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [("z", self.z), ("t", self.t), ("Y", self.y)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidGrid(format!("{name} bounds must be finite and increasing")));
            }
        }
        if self.cells.iter().any(|&n| n < 8) {
            return Err(Error::InvalidGrid("at least 8 cells per axis".into()));
        }
        if self.guard == 0 {
            return Err(Error::InvalidGrid("guard band must be positive".into()));
        }
        Ok(())
    }

    /// The same box at half the resolution.
    pub fn halved(&self) -> Self {
        GridSpec {
            cells: self.cells.map(|n| n / 2),
            guard: self.guard.div_ceil(2),
            ..*self
        }
    }

    pub fn nodes(&self) -> [usize; 3] {
        self.cells.map(|n| n + 1)
    }

    fn coord(range: (T, T), cells: usize, i: usize) -> T {
        if i == cells {
            return range.1;
        }
        let f = T::from_usize(i).expect("index fits") / T::from_usize(cells).expect("size fits");
        range.0 + (range.1 - range.0) * f
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> ChartPoint<T> {
        ChartPoint::new(
            Self::coord(self.z, self.cells[0], i),
            Self::coord(self.t, self.cells[1], j),
            Self::coord(self.y, self.cells[2], k),
        )
    }

    /// Nearest node to `cp`, if it lies in the box.
    pub fn nearest(&self, cp: &ChartPoint<T>) -> Option<[usize; 3]> {
        let snap = |x: T, (lo, hi): (T, T), n: usize| -> Option<usize> {
            if !(x >= lo && x <= hi) {
                return None;
            }
            let f = (x - lo) / (hi - lo) * T::from_usize(n).expect("size fits");
            f.round().to_usize().map(|i| i.min(n))
        };
        Some([
            snap(cp.z, self.z, self.cells[0])?,
            snap(cp.t, self.t, self.cells[1])?,
            snap(cp.y, self.y, self.cells[2])?,
        ])
    }
}

/// One connected component of the complement of the surfaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Component<T> {
    pub id: u32,
    pub size: usize,
    /// Signs of `Y`, `son` and `son'` on the component.
    pub signs: [i8; 3],
    /// Bit `i` is set when the component has nodes in `z`-interval `i`
    /// (see [`lax::z_interval`]).
    pub intervals: u8,
    /// Node closest to the centroid of the component.
    pub representative: ChartPoint<T>,
    pub label: RegionLabel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FloodFill<T> {
    pub grid: GridSpec<T>,
    /// Component id per node in `z`-major order; `0` marks the surface band.
    pub labels: Vec<u32>,
    pub components: Vec<Component<T>>,
}

impl<T: Scalar> FloodFill<T> {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    /// Components in the half-space `Y > 0`.
    pub fn count_upper(&self) -> usize {
        self.components.iter().filter(|c| c.signs[0] > 0).count()
    }

    /// Label of the component whose node is nearest to `cp`, if that node is
    /// off the surface band.
    pub fn label_at(&self, cp: &ChartPoint<T>) -> Option<RegionLabel> {
        let [i, j, k] = self.grid.nearest(cp)?;
        let [_, nt, ny] = self.grid.nodes();
        let id = self.labels[(i * nt + j) * ny + k];
        (id > 0).then(|| self.components[id as usize - 1].label)
    }
}

/// Name of a region from the sign of `Y` and the set of `z`-intervals it
/// spans.
pub fn name_component(y_sign: i8, intervals: u8) -> RegionLabel {
    let y = if y_sign > 0 { Half::Plus } else { Half::Minus };
    match intervals {
        0b1111 if y_sign > 0 => RegionLabel::BelowBridge,
        0b1111 => RegionLabel::AboveTunnel,
        0b0110 if y_sign > 0 => RegionLabel::AboveBridge,
        0b0110 => RegionLabel::BelowTunnel,
        0b0001 => RegionLabel::SsPrime { z: Half::Minus, y },
        0b1000 => RegionLabel::SsPrime { z: Half::Plus, y },
        0b0011 => RegionLabel::Lateral { z: Half::Minus, y },
        0b1100 => RegionLabel::Lateral { z: Half::Plus, y },
        _ => RegionLabel::Unclassified,
    }
}

fn sign_of<T: Scalar>(x: T) -> i8 {
    if x > T::zero() {
        1
    } else if x < T::zero() {
        -1
    } else {
        0
    }
}

/// Max-filter of radius `r` along one axis of a boolean grid.
fn dilate_axis(mask: &[bool], dims: [usize; 3], axis: usize, r: usize) -> Vec<bool> {
    let stride = match axis {
        0 => dims[1] * dims[2],
        1 => dims[2],
        _ => 1,
    };
    let n = dims[axis];
    let mut out = vec![false; mask.len()];
    for (idx, o) in out.iter_mut().enumerate() {
        let pos = (idx / stride) % n;
        let lo = pos.saturating_sub(r);
        let hi = (pos + r).min(n - 1);
        let base = idx - pos * stride;
        *o = (lo..=hi).any(|p| mask[base + p * stride]);
    }
    out
}

/// Connected components of the complement of `Y = 0`, `Son` and `Son'`.
///
/// A node is on a surface when one of the three functions vanishes there or
/// changes sign towards a neighbour; the surface set is then dilated by a
/// `(2 guard + 1)`-cube and the remaining nodes are joined 6-connectedly.
pub fn oracle_floodfill<T: Scalar>(params: &ModelParams<T>, grid: &GridSpec<T>) -> Result<FloodFill<T>> {
    grid.validate()?;
    let zc = params.critical_z();
    if !(grid.z.0 < -zc && grid.z.1 > zc) {
        return Err(Error::InvalidGrid(
            "z bounds must contain both double sonic lines".into(),
        ));
    }
    let dims = grid.nodes();
    let [nz, nt, ny] = dims;
    let len = nz * nt * ny;
    let index = |i: usize, j: usize, k: usize| (i * nt + j) * ny + k;

    let mut signs = vec![[0i8; 3]; len];
    for i in 0..nz {
        for j in 0..nt {
            for k in 0..ny {
                let p = grid.point(i, j, k);
                signs[index(i, j, k)] = [
                    sign_of(p.y),
                    sign_of(son(params, &p)),
                    sign_of(sonprime(params, &p)),
                ];
            }
        }
    }

    let mut surface: Vec<bool> = signs.iter().map(|s| s.contains(&0)).collect();
    let strides = [nt * ny, ny, 1];
    for idx in 0..len {
        let coords = [idx / strides[0], (idx / ny) % nt, idx % ny];
        for axis in 0..3 {
            if coords[axis] + 1 < dims[axis] {
                let next = idx + strides[axis];
                if signs[idx] != signs[next] {
                    surface[idx] = true;
                    surface[next] = true;
                }
            }
        }
    }
    for axis in 0..3 {
        surface = dilate_axis(&surface, dims, axis, grid.guard);
    }

    let mut labels = vec![0u32; len];
    let mut components = Vec::new();
    let mut queue = VecDeque::new();
    for seed in 0..len {
        if surface[seed] || labels[seed] != 0 {
            continue;
        }
        let id = components.len() as u32 + 1;
        labels[seed] = id;
        queue.push_back(seed);
        let mut members = Vec::new();
        let mut intervals = 0u8;
        while let Some(idx) = queue.pop_front() {
            members.push(idx);
            let coords = [idx / strides[0], (idx / ny) % nt, idx % ny];
            intervals |= 1 << lax::z_interval(params, grid.point(coords[0], 0, 0).z);
            for axis in 0..3 {
                let mut visit = |next: usize| {
                    if !surface[next] && labels[next] == 0 {
                        labels[next] = id;
                        queue.push_back(next);
                    }
                };
                if coords[axis] > 0 {
                    visit(idx - strides[axis]);
                }
                if coords[axis] + 1 < dims[axis] {
                    visit(idx + strides[axis]);
                }
            }
        }
        let to_point = |idx: usize| grid.point(idx / strides[0], (idx / ny) % nt, idx % ny);
        let inv = T::one() / T::from_usize(members.len()).expect("size fits");
        let (mut cz, mut ct, mut cy) = (T::zero(), T::zero(), T::zero());
        for &m in &members {
            let p = to_point(m);
            cz = cz + p.z * inv;
            ct = ct + p.t * inv;
            cy = cy + p.y * inv;
        }
        let dist = |p: &ChartPoint<T>| sq(p.z - cz) + sq(p.t - ct) + sq(p.y - cy);
        let representative = members
            .iter()
            .map(|&m| to_point(m))
            .min_by(|a, b| dist(a).partial_cmp(&dist(b)).expect("finite grid"))
            .expect("component is not empty");
        let s = signs[seed];
        components.push(Component {
            id,
            size: members.len(),
            signs: s,
            intervals,
            representative,
            label: name_component(s[0], intervals),
        });
    }
    Ok(FloodFill {
        grid: *grid,
        labels,
        components,
    })
}

/// The sign-vector lookup implied by a flood fill, sorted by key.
pub fn region_table_from<T: Scalar>(fill: &FloodFill<T>) -> Vec<RegionEntry> {
    let mut table: Vec<RegionEntry> = fill
        .components
        .iter()
        .flat_map(|c| {
            (0..4u8).filter(move |i| c.intervals & (1 << i) != 0).map(move |interval| RegionEntry {
                key: SignKey {
                    y: c.signs[0],
                    son: c.signs[1],
                    sonprime: c.signs[2],
                    interval,
                },
                label: c.label,
            })
        })
        .collect();
    table.sort_by_key(|e| e.key);
    table.dedup();
    table
}

/// Regenerates the region lookup table by flood-filling `grid`.
pub fn derive_region_table<T: Scalar>(params: &ModelParams<T>, grid: &GridSpec<T>) -> Result<Vec<RegionEntry>> {
    Ok(region_table_from(&oracle_floodfill(params, grid)?))
}

/// The frozen table, sorted like [`region_table_from`].
pub fn frozen_region_table() -> Vec<RegionEntry> {
    let mut table = REGION_TABLE.to_vec();
    table.sort_by_key(|e| e.key);
    table
}

// ---------------------------------------------------------------------------
// Intersections

/// Dense `z`-sampling window for [`oracle_intersections`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct ScanSpec<T> {
    pub z_range: (T, T),
    pub samples: usize,
}

impl<T: Scalar> Default for ScanSpec<T> {
    fn default() -> Self {
        ScanSpec {
            z_range: (T::lit(-10.0), T::lit(10.0)),
            samples: 20_001,
        }
    }
}

/// A minimum of `|f|` without a sign change counts as a tangency when it is
/// below this value.
pub const TANGENCY_CANDIDATE: f64 = 1e-10;

fn bisect<T: Scalar>(f: &impl Fn(T) -> T, mut a: T, mut b: T) -> T {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = a + (b - a) / T::lit(2.0);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == T::zero() {
            return m;
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    a + (b - a) / T::lit(2.0)
}

fn golden_min<T: Scalar>(f: &impl Fn(T) -> T, mut a: T, mut b: T) -> T {
    let r = T::lit(0.5 * (5f64.sqrt() - 1.0));
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if b - a <= T::epsilon() * (T::one() + a.abs()) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        x1
    } else {
        x2
    }
}

/// Zeros of `surface_value` along the curve, found by sign-change
/// bracketing on a dense sample and bisection. Minima of `|f|` below
/// [`TANGENCY_CANDIDATE`] without a sign change are reported with
/// multiplicity 2.
pub fn oracle_intersections<T: Scalar>(
    params: &ModelParams<T>,
    curve: &HugoniotCurve<T>,
    id: SurfaceId,
    scan: &ScanSpec<T>,
) -> RealRoots<T> {
    let f = |z: T| surface_value(params, id, &eval_curve(params, curve, z));
    let n = scan.samples.max(3);
    let (lo, hi) = scan.z_range;
    let step = (hi - lo) / T::from_usize(n - 1).expect("size fits");
    let zs: Vec<T> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + step * T::from_usize(i).expect("index fits") })
        .collect();
    let fs: Vec<T> = zs.iter().map(|&z| f(z)).collect();
    let abs = |z: T| f(z).abs();
    let mut roots = Vec::new();
    let mut push = |value: T, multiplicity: usize| {
        roots.push(Root {
            value,
            multiplicity,
            residual: f(value).abs(),
        })
    };
    for i in 0..n {
        let fi = fs[i];
        if fi == T::zero() {
            let even = i > 0 && i + 1 < n && fs[i - 1] * fs[i + 1] > T::zero();
            push(zs[i], if even { 2 } else { 1 });
            continue;
        }
        if i + 1 < n && fs[i + 1] != T::zero() && (fi > T::zero()) != (fs[i + 1] > T::zero()) {
            push(bisect(&f, zs[i], zs[i + 1]), 1);
        }
        if i > 0
            && i + 1 < n
            && fi.abs() <= fs[i - 1].abs()
            && fi.abs() <= fs[i + 1].abs()
            && fs[i - 1] * fi > T::zero()
            && fi * fs[i + 1] > T::zero()
        {
            let z = golden_min(&abs, zs[i - 1], zs[i + 1]);
            if abs(z) < T::lit(TANGENCY_CANDIDATE) {
                push(z, 2);
            }
        }
    }
    RealRoots::from_roots(roots)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootAgreement {
    Exact,
    /// Agreement up to a tangency that bracketing cannot resolve.
    FlaggedTangency,
    Mismatch,
}

/// Compares closed-form roots with oracle roots inside `window`.
///
/// Odd-multiplicity roots must be matched within `tol (1 + |z|)`.
/// Even-multiplicity roots, and oracle tangency candidates, may be seen by
/// the other side as a near miss or a close pair within `merge (1 + |z|)`;
/// those cases are flagged rather than failed.
pub fn compare_roots<T: Scalar>(
    closed: &RealRoots<T>,
    oracle: &RealRoots<T>,
    window: (T, T),
    tol: T,
    merge: T,
) -> RootAgreement {
    let margin = T::lit(1e-6) * (T::one() + window.0.abs().max(window.1.abs()));
    let inside = |z: T| z > window.0 + margin && z < window.1 - margin;
    let near = |a: T, b: T, eps: T| (a - b).abs() <= eps * (T::one() + a.abs());
    let mut flagged = false;
    for r in closed.roots().iter().filter(|r| inside(r.value)) {
        let odd = r.multiplicity % 2 == 1;
        let exact = oracle.roots().iter().find(|o| near(r.value, o.value, tol));
        match exact {
            Some(o) if odd && o.multiplicity % 2 == 1 => {}
            Some(_) => flagged = true,
            None if odd => return RootAgreement::Mismatch,
            None => flagged = true,
        }
    }
    for o in oracle.roots().iter().filter(|o| inside(o.value)) {
        let matched = closed.roots().iter().any(|r| near(o.value, r.value, tol));
        if matched {
            continue;
        }
        let near_tangency = closed
            .roots()
            .iter()
            .any(|r| r.multiplicity % 2 == 0 && near(o.value, r.value, merge));
        if o.multiplicity % 2 == 0 || near_tangency {
            flagged = true;
        } else {
            return RootAgreement::Mismatch;
        }
    }
    if flagged {
        RootAgreement::FlaggedTangency
    } else {
        RootAgreement::Exact
    }
}

// ---------------------------------------------------------------------------
// Finite differences

/// Richardson extrapolation of the central difference of `f` at `z`:
/// `(4 D(h/2) - D(h)) / 3`, accurate to `O(h⁴)`.
///
/// Panics unless `h > 0`.
pub fn richardson<T: Scalar>(f: impl Fn(T) -> T, z: T, h: T) -> T {
    assert!(h > T::zero(), "step must be positive");
    let two = T::lit(2.0);
    let d = |h: T| (f(z + h) - f(z - h)) / (two * h);
    (T::lit(4.0) * d(h / two) - d(h)) / T::lit(3.0)
}

/// `ds/dz` along the curve by Richardson-extrapolated central differences.
pub fn oracle_fd_speed<T: Scalar>(params: &ModelParams<T>, curve: &HugoniotCurve<T>, z: T, h: T) -> T {
    richardson(|x| speed_along(params, curve, x), z, h)
}

// ---------------------------------------------------------------------------
// Rankine–Hugoniot

/// Blows each point down to states and checks the jump condition.
pub fn oracle_rh_states<T: Scalar>(params: &ModelParams<T>, points: &[ChartPoint<T>], tol: f64) -> OracleReport {
    let pairs: Vec<StatePair<T>> = points.iter().map(|p| chart_to_states(params, p)).collect();
    let mut tally = Tally::new("rh_states", tol);
    for (p, sp) in points.iter().zip(&pairs) {
        tally.record(&[p.z.as_f64(), p.t.as_f64(), p.y.as_f64()], rh_relative_residual(params, sp).as_f64());
    }
    tally.finish()
}

/// Checks the jump condition on state pairs directly.
pub fn oracle_rh_pairs<T: Scalar>(params: &ModelParams<T>, pairs: &[StatePair<T>], tol: f64) -> OracleReport {
    let mut tally = Tally::new("rh_pairs", tol);
    for sp in pairs {
        let input = [sp.u, sp.v, sp.u_prime, sp.v_prime, sp.s].map(|x| x.as_f64());
        tally.record(&input, rh_relative_residual(params, sp).as_f64());
    }
    tally.finish()
}

// ---------------------------------------------------------------------------
// Registry

/// Parameters shared by the registered checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub params: ModelParams<f64>,
    pub tolerances: Tolerances<f64>,
    pub seed: u64,
    /// Base sweep size; the cheapest checks use ten times as many samples.
    pub samples: usize,
    /// Clip window for arcs and root scans.
    pub z_max: f64,
    pub grid: GridSpec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            params: ModelParams::default(),
            tolerances: Tolerances::default(),
            seed: 20_240_601,
            samples: 1000,
            z_max: 10.0,
            grid: GridSpec::default(),
        }
    }
}

impl SweepConfig {
    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn with_params(&self, b1: f64, c: f64) -> SweepConfig {
        SweepConfig {
            params: ModelParams::new(b1, c).expect("valid sweep instance"),
            ..*self
        }
    }
}

/// A registered brute-force check and the closed forms it validates.
pub struct Check {
    pub name: &'static str,
    pub covers: &'static [&'static str],
    pub run: fn(&SweepConfig) -> Vec<OracleReport>,
}

impl std::fmt::Debug for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Check")
            .field("name", &self.name)
            .field("covers", &self.covers)
            .finish()
    }
}

/// Every closed-form operation that must be covered by some check.
pub const CLOSED_FORMS: &[&str] = &[
    "model::chart_to_blowup",
    "model::chart_from_blowup",
    "model::chart_to_states",
    "curves::speed_at",
    "curves::eval_curve",
    "curves::kl_from_point",
    "curves::curve_through_point",
    "curves::speed_along",
    "curves::speed_derivative_along",
    "curves::intersect_characteristic",
    "curves::intersect_son",
    "curves::intersect_sonprime",
    "curves::second_characteristic_z",
    "curves::expanded::through_point_eval",
    "curves::expanded::speed_through_point",
    "curves::expanded::characteristic_speed",
    "curves::expanded::speed_through_sonprime",
    "surfaces::son",
    "surfaces::sonprime",
    "surfaces::tf",
    "surfaces::sigma",
    "surfaces::sigma_contains",
    "surfaces::fold_curve",
    "surfaces::inflection_locus_t",
    "surfaces::double_sonic_points",
    "surfaces::sonic_prime_fold",
    "surfaces::son_sonprime_lines_z0",
    "surfaces::son_y",
    "surfaces::sonprime_y",
    "surfaces::tf_characteristic_trace",
    "surfaces::tf_on_sonprime",
    "surfaces::mesh",
    "lax::classify_characteristic_point",
    "lax::sonprime_t0",
    "lax::sonprime_point_speed",
    "lax::classify_sonprime_point",
    "lax::region_classify",
    "lax::side_points",
    "lax::l3_closed_form",
    "lax::l3_numeric",
    "lax::interval_condition",
    "lax::extract_arcs",
    "lax::local_side_derivatives",
];

pub const CHECKS: &[Check] = &[
    Check {
        name: "manifold_closure",
        covers: &["curves::eval_curve", "model::chart_to_blowup"],
        run: check_manifold_closure,
    },
    Check {
        name: "chart_round_trip",
        covers: &["model::chart_to_blowup", "model::chart_from_blowup"],
        run: check_chart_round_trip,
    },
    Check {
        name: "rh_blowdown",
        covers: &["model::chart_to_states", "curves::speed_at"],
        run: check_rh_blowdown,
    },
    Check {
        name: "through_point",
        covers: &["curves::kl_from_point", "curves::curve_through_point"],
        run: check_through_point,
    },
    Check {
        name: "expanded_forms",
        covers: &[
            "curves::speed_along",
            "curves::expanded::through_point_eval",
            "curves::expanded::speed_through_point",
            "curves::expanded::characteristic_speed",
            "curves::expanded::speed_through_sonprime",
        ],
        run: check_expanded_forms,
    },
    Check {
        name: "speed_gap",
        covers: &[
            "curves::second_characteristic_z",
            "curves::intersect_characteristic",
            "lax::classify_characteristic_point",
        ],
        run: check_speed_gap,
    },
    Check {
        name: "intersections",
        covers: &[
            "curves::intersect_characteristic",
            "curves::intersect_son",
            "curves::intersect_sonprime",
            "surfaces::son",
            "surfaces::sonprime",
        ],
        run: check_intersections,
    },
    Check {
        name: "son_critical",
        covers: &["curves::intersect_son", "curves::speed_derivative_along"],
        run: check_son_critical,
    },
    Check {
        name: "sonprime_counts",
        covers: &["curves::intersect_sonprime"],
        run: check_sonprime_counts,
    },
    Check {
        name: "sigma_containment",
        covers: &["surfaces::sigma", "surfaces::sigma_contains"],
        run: check_sigma_containment,
    },
    Check {
        name: "tf_tangency",
        covers: &[
            "surfaces::tf",
            "surfaces::tf_characteristic_trace",
            "surfaces::tf_on_sonprime",
            "surfaces::sonic_prime_fold",
        ],
        run: check_tf_tangency,
    },
    Check {
        name: "distinguished_curves",
        covers: &[
            "surfaces::fold_curve",
            "surfaces::inflection_locus_t",
            "surfaces::double_sonic_points",
            "surfaces::son_sonprime_lines_z0",
            "surfaces::son_y",
            "surfaces::sonprime_y",
        ],
        run: check_distinguished_curves,
    },
    Check {
        name: "sonic_intersection",
        covers: &["surfaces::son", "surfaces::sonprime", "surfaces::inflection_locus_t"],
        run: check_sonic_intersection,
    },
    Check {
        name: "sonprime_speed",
        covers: &[
            "lax::sonprime_t0",
            "lax::sonprime_point_speed",
            "lax::classify_sonprime_point",
        ],
        run: check_sonprime_speed,
    },
    Check {
        name: "l3_equivalence",
        covers: &["lax::l3_closed_form", "lax::l3_numeric"],
        run: check_l3_equivalence,
    },
    Check {
        name: "interval_condition",
        covers: &["lax::interval_condition"],
        run: check_interval_condition,
    },
    Check {
        name: "local_derivatives",
        covers: &["lax::local_side_derivatives"],
        run: check_local_derivatives,
    },
    Check {
        name: "arc_validity",
        covers: &["lax::extract_arcs", "lax::side_points"],
        run: check_arc_validity,
    },
    Check {
        name: "mesh",
        covers: &["surfaces::mesh"],
        run: check_mesh,
    },
    Check {
        name: "floodfill",
        covers: &["lax::region_classify"],
        run: check_floodfill,
    },
];

/// Closed forms no registered check covers.
pub fn uncovered() -> Vec<&'static str> {
    CLOSED_FORMS
        .iter()
        .copied()
        .filter(|f| !CHECKS.iter().any(|c| c.covers.contains(f)))
        .collect()
}

pub fn find_check(name: &str) -> Option<&'static Check> {
    CHECKS.iter().find(|c| c.name == name)
}

/// Runs the named checks, or all of them; an uncovered closed form is
/// reported as a failing `coverage` entry.
pub fn run_checks(cfg: &SweepConfig, names: Option<&[&str]>) -> Result<Vec<OracleReport>> {
    let selected: Vec<&Check> = match names {
        None => CHECKS.iter().collect(),
        Some(names) => names
            .iter()
            .map(|n| find_check(n).ok_or_else(|| Error::InvalidGrid(format!("unknown check {n}"))))
            .collect::<Result<_>>()?,
    };
    let mut reports = Vec::new();
    if names.is_none() {
        let missing = uncovered();
        let mut tally = Tally::new("coverage", 0.0);
        tally.record_bool(&[], missing.is_empty());
        for m in missing {
            tally.note(format!("no check covers {m}"));
        }
        reports.push(tally.finish());
    }
    for check in selected {
        reports.extend((check.run)(cfg));
    }
    Ok(reports)
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..=hi)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

fn manifold_relative(params: &ModelParams<f64>, cp: &ChartPoint<f64>) -> f64 {
    let bp = chart_to_blowup(params, cp);
    let scale = ((sq(bp.z) - 1.0) * bp.v1).abs() + (bp.z * bp.u_tilde).abs() + params.c();
    manifold_residual(params, &bp).abs() / scale
}

fn check_manifold_closure(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let mut rng = cfg.rng(1);
    let mut tally = Tally::new("manifold_closure", 1e-12);
    for _ in 0..10 * cfg.samples {
        let (k, l, z) = (uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0));
        let prime = rng.gen_bool(0.5);
        let p = eval_curve(m, &curve_from_kl(k, l, prime), z);
        tally.record(&[k, l, z, prime as u8 as f64], manifold_relative(m, &p));
    }
    vec![tally.finish()]
}

fn check_chart_round_trip(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let mut rng = cfg.rng(2);
    let mut tally = Tally::new("chart_round_trip", 1e-12);
    for _ in 0..10 * cfg.samples {
        let p = ChartPoint::new(uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0));
        let bp = chart_to_blowup(m, &p);
        let err = match chart_from_blowup(m, &bp, cfg.tolerances.membership) {
            Ok(q) => rel(p.z, q.z).max(rel(p.t, q.t)).max(rel(p.y, q.y)),
            Err(_) => f64::INFINITY,
        };
        tally.record(&[p.z, p.t, p.y], err.max(manifold_relative(m, &p)));
    }
    vec![tally.finish()]
}

fn check_rh_blowdown(cfg: &SweepConfig) -> Vec<OracleReport> {
    let mut rng = cfg.rng(3);
    let (b1, c) = (cfg.params.b1(), cfg.params.c());
    let a2 = uniform(&mut rng, -2.0, 2.0);
    let shifted = ModelParams::with_offsets(
        b1,
        Offsets {
            a1: uniform(&mut rng, -2.0, 2.0),
            a2,
            a3: a2 + c,
            a4: uniform(&mut rng, -2.0, 2.0),
        },
    )
    .expect("offsets preserve c");
    let mut reports = Vec::new();
    for (name, m) in [("rh_blowdown", cfg.params), ("rh_blowdown_offsets", shifted)] {
        let mut points = Vec::new();
        while points.len() < 10 * cfg.samples {
            let p = ChartPoint::new(uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0));
            if (p.z * p.y).abs() > 1e-6 {
                points.push(p);
            }
        }
        let mut report = oracle_rh_states(&m, &points, 1e-9);
        report.check = name.into();
        reports.push(report);
    }

    let mut diagonal = Tally::new("rh_diagonal", 0.0);
    for _ in 0..cfg.samples {
        let p = ChartPoint::new(uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0), 0.0);
        let sp = chart_to_states(&cfg.params, &p);
        diagonal.record(&[p.z, p.t], rh_relative_residual(&cfg.params, &sp));
    }
    reports.push(diagonal.finish());

    // Negative control: perturbing the speed must be detected.
    let corrupted: Vec<StatePair<f64>> = (0..cfg.samples)
        .filter_map(|_| {
            let p = ChartPoint::new(uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, -5.0, 5.0), uniform(&mut rng, 0.5, 5.0));
            (p.z.abs() > 0.1).then(|| {
                let mut sp = chart_to_states(&cfg.params, &p);
                sp.s += 1e-3 * (1.0 + sp.s.abs());
                sp
            })
        })
        .collect();
    let control = oracle_rh_pairs(&cfg.params, &corrupted, 1e-9);
    let mut tally = Tally::new("rh_negative_control", 0.0);
    tally.record_bool(&[control.max_residual], !control.pass);
    reports.push(tally.finish());
    reports
}

fn check_through_point(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let mut rng = cfg.rng(4);
    let mut tally = Tally::new("through_point", 1e-12);
    for _ in 0..cfg.samples {
        let p = ChartPoint::new(uniform(&mut rng, -3.0, 3.0), uniform(&mut rng, -3.0, 3.0), uniform(&mut rng, -3.0, 3.0));
        for prime in [false, true] {
            let q = eval_curve(m, &curve_through_point(m, &p, prime), p.z);
            tally.record(&[p.z, p.t, p.y, prime as u8 as f64], rel(p.t, q.t).max(rel(p.y, q.y)));
        }
    }
    vec![tally.finish()]
}

fn check_expanded_forms(cfg: &SweepConfig) -> Vec<OracleReport> {
    use curves::expanded::*;
    let m = &cfg.params;
    let mut rng = cfg.rng(5);
    let mut tally = Tally::new("expanded_forms", 1e-9);
    for _ in 0..cfg.samples {
        let p = ChartPoint::new(uniform(&mut rng, -3.0, 3.0), uniform(&mut rng, -3.0, 3.0), uniform(&mut rng, -3.0, 3.0));
        let z = uniform(&mut rng, -5.0, 5.0);
        let input = [p.z, p.t, p.y, z];

        let curve = curve_through_point(m, &p, false);
        let exact = eval_curve(m, &curve, z);
        let (t, y) = through_point_eval(m, &p, z);
        tally.record(&input, rel(t, exact.t).max(rel(y, exact.y)));

        let direct = speed_at(m, &exact);
        tally.record(&input, rel(speed_along(m, &curve, z), direct));
        tally.record(&input, rel(speed_through_point(m, &p, z), direct));

        let on_c = ChartPoint::new(p.z, p.t, 0.0);
        let along = speed_along(m, &curve_through_point(m, &on_c, false), z);
        tally.record(&input, rel(characteristic_speed(m, p.z, p.t, z), along));

        if p.z.abs() > 1e-3 {
            let t0 = sonprime_t0(m, p.z, p.y, 1e-12).expect("z0 away from 0");
            let sp = ChartPoint::new(p.z, t0, p.y);
            let along = speed_along(m, &curve_through_point(m, &sp, false), z);
            tally.record(&input, rel(speed_through_sonprime(m, p.z, p.y, z), along));
        }
    }
    vec![tally.finish()]
}

fn check_speed_gap(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let c = m.c();
    let tols = &cfg.tolerances;
    let mut rng = cfg.rng(6);
    let mut gap = Tally::new("speed_gap", 1e-9);
    let mut order = Tally::new("fast_crossing_is_faster", 0.0);
    let mut tangency = Tally::new("tangency_iff_fold", 0.0);
    for i in 0..cfg.samples {
        let z0 = uniform(&mut rng, -3.0, 3.0);
        // Every tenth curve passes through the fold itself.
        let t0 = if i % 10 == 0 { 0.0 } else { uniform(&mut rng, -3.0, 3.0) };
        let p = ChartPoint::new(z0, t0, 0.0);
        let curve = curve_through_point(m, &p, false);
        let Ok(roots) = intersect_characteristic(m, &curve, tols) else {
            gap.skip();
            continue;
        };
        let double = roots.roots().iter().any(|r| r.multiplicity >= 2 && (r.value - z0).abs() < 1e-6);
        tangency.record_bool(&[z0, t0], double == (t0.abs() < 1e-9));
        if t0 == 0.0 {
            continue;
        }
        let z1 = second_characteristic_z(z0, t0);
        if !z1.is_finite() || z1.abs() > 1e6 || (z1 - z0).abs() < 1e-6 {
            gap.skip();
            continue;
        }
        let s0 = speed_along(m, &curve, z0);
        let s1 = speed_along(m, &curve, z1);
        let expected = c * (sq(z0) + 1.0) * t0;
        gap.record(&[z0, t0, z1], rel(s0 - s1, expected));

        let roots_ok = roots.len() == 2 && roots.roots().iter().any(|r| (r.value - z1).abs() < 1e-6 * (1.0 + z1.abs()));
        let p1 = eval_curve(m, &curve, z1);
        let (fast, slow) = if t0 > 0.0 { (s0, s1) } else { (s1, s0) };
        let sides = lax::classify_characteristic_point(m, z1, p1.t, tols.boundary)
            != lax::classify_characteristic_point(m, z0, t0, tols.boundary);
        order.record_bool(&[z0, t0, z1], roots_ok && sides && fast > slow);
    }
    tangency.note("tangencies are sampled at t0 = 0 exactly; double roots closer than the merge distance are unresolvable in double precision");
    vec![gap.finish(), order.finish(), tangency.finish()]
}

fn random_curve(rng: &mut ChaCha8Rng, c: f64) -> HugoniotCurve<f64> {
    loop {
        let (k, l) = (uniform(rng, -5.0, 5.0), uniform(rng, -5.0, 5.0));
        if (l + 2.0 * c).abs() > 1e-3 {
            return curve_from_kl(k, l, false);
        }
    }
}

fn check_intersections(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let tols = &cfg.tolerances;
    let mut rng = cfg.rng(7);
    let scan = ScanSpec {
        z_range: (-cfg.z_max, cfg.z_max),
        samples: 20_001,
    };
    let mut reports = Vec::new();
    type Closed = fn(&ModelParams<f64>, &HugoniotCurve<f64>, &Tolerances<f64>) -> Result<RealRoots<f64>>;
    let surfaces: [(SurfaceId, Closed); 3] = [
        (SurfaceId::Characteristic, intersect_characteristic),
        (SurfaceId::Son, intersect_son),
        (SurfaceId::SonPrime, intersect_sonprime),
    ];
    let curves: Vec<HugoniotCurve<f64>> = (0..cfg.samples).map(|_| random_curve(&mut rng, m.c())).collect();
    for (id, closed) in surfaces {
        let mut tally = Tally::new(format!("intersections_{}", id.name()), 0.0);
        let mut flagged = 0usize;
        for curve in &curves {
            let Ok(roots) = closed(m, curve, tols) else {
                tally.skip();
                continue;
            };
            let found = oracle_intersections(m, curve, id, &scan);
            let agreement = compare_roots(&roots, &found, scan.z_range, 1e-8, tols.merge);
            flagged += (agreement == RootAgreement::FlaggedTangency) as usize;
            tally.record_bool(&[curve.k, curve.l], agreement != RootAgreement::Mismatch);
        }
        tally.note(format!("{flagged} flagged tangencies"));
        reports.push(tally.finish());
    }
    reports
}

fn check_son_critical(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let mut rng = cfg.rng(8);
    let mut tally = Tally::new("son_critical", 1e-6);
    for _ in 0..cfg.samples {
        let curve = random_curve(&mut rng, m.c());
        let Ok(roots) = intersect_son(m, &curve, &cfg.tolerances) else {
            tally.skip();
            continue;
        };
        for z in roots.simple() {
            let h = 1e-3 * (1.0 + z.abs());
            let fd = oracle_fd_speed(m, &curve, z, h);
            let scale = 1.0 + speed_along(m, &curve, z).abs();
            tally.record(&[curve.k, curve.l, z], fd / scale);
            tally.record(&[curve.k, curve.l, z], speed_derivative_along(m, &curve, z) / scale);
        }
    }
    vec![tally.finish()]
}

fn check_sonprime_counts(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let mut rng = cfg.rng(9);
    let mut tally = Tally::new("sonprime_counts", 0.0);
    let mut histogram = [0usize; 5];
    for _ in 0..cfg.samples {
        let curve = random_curve(&mut rng, m.c());
        let Ok(roots) = intersect_sonprime(m, &curve, &cfg.tolerances) else {
            tally.skip();
            continue;
        };
        let n = roots.count_with_multiplicity();
        if let Some(h) = histogram.get_mut(n) {
            *h += 1;
        }
        tally.record_bool(&[curve.k, curve.l, n as f64], matches!(n, 0 | 2 | 4));
    }
    tally.note(format!("counts 0/1/2/3/4: {histogram:?}"));
    vec![tally.finish()]
}

fn check_sigma_containment(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let c = m.c();
    let mut rng = cfg.rng(10);
    let mut tally = Tally::new("sigma_containment", 1e-10);
    let mut predicate = Tally::new("sigma_contains", 0.0);
    for _ in 0..100 {
        let k = uniform(&mut rng, -5.0, 5.0);
        let curve = curve_from_kl(k, -2.0 * c, false);
        predicate.record_bool(&[k], sigma_contains(m, &curve, cfg.tolerances.boundary));
        let other = random_curve(&mut rng, c);
        predicate.record_bool(&[other.k, other.l], !sigma_contains(m, &other, cfg.tolerances.boundary));
        for i in 0..=1000 {
            let z = -cfg.z_max + 2.0 * cfg.z_max * i as f64 / 1000.0;
            let p = eval_curve(m, &curve, z);
            let w = sq(z) + 1.0;
            let scale = 1.0 + p.y.abs() + (2.0 * c * (p.t * z * w + 1.0) / w).abs();
            tally.record(&[k, z], surfaces::sigma(m, &p) / scale);
        }
    }
    vec![tally.finish(), predicate.finish()]
}

fn check_tf_tangency(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let zc = m.critical_z();
    let mut along = Tally::new("tf_sonprime_tangency", 1e-9);
    let mut on_both = Tally::new("sonic_prime_fold_on_tf", 1e-10);
    let mut trace = Tally::new("tf_characteristic_tangency", 1e-12);
    let n = 200;
    for i in 0..n {
        let z = -3.0 + 6.0 * (i as f64 + 0.5) / n as f64;
        if z.abs() < 1e-2 || (z.abs() - zc).abs() < 1e-2 {
            along.skip();
            continue;
        }
        along.record(&[z], relative_discriminant(tf_on_sonprime(m, z)));
        let p = sonic_prime_fold(m, z);
        let [a, b, cc] = surfaces::tf_coefficients(m, p.z, p.t);
        let scale = 1.0 + (a * sq(p.y)).abs() + (b * p.y).abs() + cc.abs();
        on_both.record(&[z], (tf(m, &p) / scale).max(sonprime(m, &p) / scale));

        // Tf(z, t, 0) by brute force: zero at t = 0, quadratic growth.
        let q = tf_characteristic_trace(m, z);
        let h = 1e-3;
        let at = |t: f64| tf(m, &ChartPoint::new(z, t, 0.0));
        let curvature = (at(h) + at(-h) - 2.0 * at(0.0)) / (2.0 * sq(h));
        let symmetric = (at(h) - at(-h)).abs() / (1.0 + at(h).abs());
        trace.record(&[z], at(0.0).abs().max(relative_discriminant(q).abs()).max(symmetric).max(rel(curvature, q[0])));
    }
    vec![along.finish(), on_both.finish(), trace.finish()]
}

fn check_distinguished_curves(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let zc = m.critical_z();
    let mut tally = Tally::new("distinguished_curves", 1e-10);
    let (plus, minus) = double_sonic_points(m);
    let (son_line, sonprime_line) = son_sonprime_lines_z0(m);
    let rel_value = |id: SurfaceId, p: &ChartPoint<f64>| {
        let scale = 1.0 + p.z.abs().powi(5) * (1.0 + p.t.abs()) + (1.0 + sq(p.z)).powi(2) * (1.0 + p.y.abs());
        surface_value(m, id, p) / scale
    };
    for i in 0..=200 {
        let s = -3.0 + 6.0 * i as f64 / 200.0;
        let mut probe = |kind: CurveOnSurface, p: ChartPoint<f64>| {
            for &id in kind.surfaces() {
                tally.record(&[s, id as u8 as f64], rel_value(id, &p));
            }
        };
        probe(CurveOnSurface::FoldCurve, fold_curve(s));
        probe(CurveOnSurface::DoubleSonicPlus, plus.at(s));
        probe(CurveOnSurface::DoubleSonicMinus, minus.at(s));
        probe(CurveOnSurface::SonLineZ0, son_line.at(s));
        probe(CurveOnSurface::SonPrimeLineZ0, sonprime_line.at(s));
        if s.abs() > 1e-2 {
            probe(CurveOnSurface::InflectionLocus, ChartPoint::new(s, inflection_locus_t(m, s), 0.0));
        }
        if s.abs() > 1e-2 && (s.abs() - zc).abs() > 1e-2 {
            let t = 0.5 * s;
            probe(CurveOnSurface::FoldCurve, fold_curve(s));
            let on_son = ChartPoint::new(s, t, surfaces::son_y(m, s, t));
            tally.record(&[s, 1.0], rel_value(SurfaceId::Son, &on_son));
            let on_sonprime = ChartPoint::new(s, t, surfaces::sonprime_y(m, s, t));
            tally.record(&[s, 2.0], rel_value(SurfaceId::SonPrime, &on_sonprime));
        }
    }
    for kind in [CurveOnSurface::FoldCurve, CurveOnSurface::InflectionLocus, CurveOnSurface::SonicPrimeFold] {
        for i in 0..20 {
            let s = 0.15 + 0.1 * i as f64;
            let p = kind.point(m, s);
            for &id in kind.surfaces() {
                tally.record(&[s, id as u8 as f64], rel_value(id, &p));
            }
        }
    }

    // On the inflection locus ds/dz vanishes along the characteristic curves.
    let mut inflection = Tally::new("inflection_locus_critical", 1e-6);
    for i in 0..100 {
        let z = -3.0 + 6.0 * (i as f64 + 0.5) / 100.0;
        if z.abs() < 1e-2 {
            continue;
        }
        let t = inflection_locus_t(m, z);
        let curve = curve_through_point(m, &ChartPoint::new(z, t, 0.0), false);
        let fd = oracle_fd_speed(m, &curve, z, 1e-3 * (1.0 + z.abs()));
        inflection.record(&[z, t], fd / (1.0 + speed_along(m, &curve, z).abs()));
    }
    vec![tally.finish(), inflection.finish()]
}

/// Joint zeros of `Son` and `Son'` lie on the inflection locus (at `Y = 0`)
/// or on a double sonic line. Seeds are voxels crossed by both surfaces; each
/// is driven to a joint zero by minimum-norm Gauss-Newton with a
/// finite-difference Jacobian, then measured against the two loci.
fn check_sonic_intersection(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let zc = m.critical_z();
    let g = GridSpec::<f64> { cells: [60; 3], ..cfg.grid };
    let [nz, nt, ny] = g.cells;
    let mut tally = Tally::new("sonic_intersection", 1e-8);
    let f = |x: [f64; 3]| {
        let p = ChartPoint::new(x[0], x[1], x[2]);
        [son(m, &p), sonprime(m, &p)]
    };
    let crosses = |i: usize, j: usize, k: usize| {
        let (mut pos, mut neg) = ([false; 2], [false; 2]);
        for corner in 0..8 {
            let p = g.point(i + (corner & 1), j + ((corner >> 1) & 1), k + ((corner >> 2) & 1));
            for (s, v) in [son(m, &p), sonprime(m, &p)].into_iter().enumerate() {
                pos[s] |= v >= 0.0;
                neg[s] |= v <= 0.0;
            }
        }
        pos[0] && neg[0] && pos[1] && neg[1]
    };
    for i in 0..nz {
        for j in 0..nt {
            for k in 0..ny {
                if !crosses(i, j, k) {
                    continue;
                }
                let (a, b) = (g.point(i, j, k), g.point(i + 1, j + 1, k + 1));
                let seed = [(a.z + b.z) / 2.0, (a.t + b.t) / 2.0, (a.y + b.y) / 2.0];
                match joint_zero(&f, seed) {
                    Some(x) => {
                        let on_double_sonic = (x[0].abs() - zc).abs();
                        let on_il = if x[0].abs() < 1e-9 {
                            f64::INFINITY
                        } else {
                            let t = inflection_locus_t(m, x[0]);
                            x[2].abs().max((x[1] - t).abs() / (1.0 + t.abs()))
                        };
                        tally.record(&x, on_double_sonic.min(on_il));
                    }
                    None => tally.skip(),
                }
            }
        }
    }
    vec![tally.finish()]
}

/// Minimum-norm Gauss-Newton for two equations in three unknowns.
fn joint_zero(f: &dyn Fn([f64; 3]) -> [f64; 2], mut x: [f64; 3]) -> Option<[f64; 3]> {
    for _ in 0..60 {
        let r = f(x);
        let scale = 1.0 + x.iter().map(|v| v.abs()).fold(0.0, f64::max).powi(8);
        if r[0].abs().max(r[1].abs()) <= 1e-13 * scale {
            return Some(x);
        }
        let mut jac = [[0.0; 3]; 2];
        for c in 0..3 {
            let h = 1e-6 * (1.0 + x[c].abs());
            let (mut xp, mut xm) = (x, x);
            xp[c] += h;
            xm[c] -= h;
            let (fp, fm) = (f(xp), f(xm));
            for row in 0..2 {
                jac[row][c] = (fp[row] - fm[row]) / (2.0 * h);
            }
        }
        let dot = |u: &[f64; 3], v: &[f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        let (g00, g01, g11) = (dot(&jac[0], &jac[0]), dot(&jac[0], &jac[1]), dot(&jac[1], &jac[1]));
        let det = g00 * g11 - g01 * g01;
        if det.abs() <= 1e-300 || !det.is_finite() {
            return None;
        }
        let w0 = (g11 * r[0] - g01 * r[1]) / det;
        let w1 = (g00 * r[1] - g01 * r[0]) / det;
        for c in 0..3 {
            x[c] -= jac[0][c] * w0 + jac[1][c] * w1;
        }
        if x.iter().any(|v| !v.is_finite()) {
            return None;
        }
    }
    None
}

fn random_sonprime_point(rng: &mut ChaCha8Rng, m: &ModelParams<f64>) -> (f64, f64, f64) {
    loop {
        let z0 = uniform(rng, -2.0, 2.0);
        let y0 = uniform(rng, -5.0, 5.0);
        if z0.abs() > 1e-3 {
            let t0 = sonprime_t0(m, z0, y0, 1e-12).expect("z0 away from 0");
            return (z0, t0, y0);
        }
    }
}

fn check_sonprime_speed(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let tols = &cfg.tolerances;
    let mut rng = cfg.rng(11);
    let mut speed = Tally::new("sonprime_speed", 1e-9);
    let mut side = Tally::new("sonprime_side", 0.0);
    let mut on_surface = Tally::new("sonprime_t0", 1e-10);
    for _ in 0..cfg.samples {
        let (z0, t0, y0) = random_sonprime_point(&mut rng, m);
        let p = ChartPoint::new(z0, t0, y0);
        let scale = 1.0 + (sq(z0) + 1.0).powi(2) * (1.0 + y0.abs()) + z0.abs().powi(5) * (1.0 + t0.abs());
        on_surface.record(&[z0, y0], sonprime(m, &p) / scale);
        let s = sonprime_point_speed(m, z0, y0);
        speed.record(&[z0, y0], rel(s, speed_at(m, &p)));

        let curve = curve_through_point(m, &p, false);
        let Ok(crossings) = intersect_characteristic(m, &curve, tols) else {
            side.skip();
            continue;
        };
        let Some((zc, gap)) = crossings
            .values()
            .into_iter()
            .map(|z| (z, rel(speed_along(m, &curve, z), s)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite speeds"))
        else {
            speed.record(&[z0, y0], f64::INFINITY);
            continue;
        };
        speed.record(&[z0, y0, zc], gap);
        let tag = classify_sonprime_point(m, z0, y0, tols.boundary);
        if tag == SonPrimeSide::OnBoundary {
            side.skip();
            continue;
        }
        let slow_crossing = eval_curve(m, &curve, zc).t < 0.0;
        side.record_bool(&[z0, y0, zc], slow_crossing == (tag == SonPrimeSide::SlowSide));
    }
    vec![speed.finish(), side.finish(), on_surface.finish()]
}

fn check_l3_equivalence(cfg: &SweepConfig) -> Vec<OracleReport> {
    let mut reports = Vec::new();
    let b1 = cfg.params.b1();
    let c = cfg.params.c();
    let mut instances = vec![(b1, c)];
    for other in [3.0, 1.5] {
        if other != b1 {
            instances.push((other, c));
        }
    }
    for (i, (b1, c)) in instances.into_iter().enumerate() {
        let local = cfg.with_params(b1, c);
        let m = &local.params;
        let mut rng = cfg.rng(12 + i as u64);
        let mut tally = Tally::new(format!("l3_equivalence_b1={b1}"), 0.0);
        let (mut secondary, mut elliptic) = (0usize, 0usize);
        while tally.samples < cfg.samples {
            let z0 = uniform(&mut rng, -2.0, 2.0);
            let y0 = uniform(&mut rng, -5.0, 5.0);
            if ((b1 + 1.0) * sq(z0) - 1.0).abs() <= 1e-3 || z0.abs() <= 1e-3 {
                continue;
            }
            match l3_numeric(m, z0, y0, &cfg.tolerances) {
                Ok(numeric) => tally.record_bool(&[z0, y0], numeric == l3_closed_form(m, z0)),
                // An elliptic left state has no characteristic speeds to
                // bracket the shock, so L3 must fail there.
                Err(Error::MissingSidePoint(_)) => {
                    elliptic += 1;
                    tally.record_bool(&[z0, y0], !l3_closed_form(m, z0));
                }
                Err(Error::SecondaryBifurcation { .. }) => {
                    secondary += 1;
                    tally.skip();
                }
                Err(_) => tally.skip(),
            }
            if tally.skipped > 10 * cfg.samples {
                break;
            }
        }
        tally.note(format!("{elliptic} points whose Hugoniot' curve misses Y = 0"));
        if secondary > 0 {
            tally.note(format!("{secondary} points on the secondary bifurcation Y0 = c skipped"));
        }
        reports.push(tally.finish());
    }
    reports
}

fn check_interval_condition(cfg: &SweepConfig) -> Vec<OracleReport> {
    let mut rng = cfg.rng(15);
    let mut tally = Tally::new("interval_condition", 0.0);
    for _ in 0..10 * cfg.samples {
        let v: [f64; 8] = std::array::from_fn(|_| uniform(&mut rng, -5.0, 5.0));
        let [a, b, c, d, f, g, h, s] = v;
        let Ok(inside) = interval_condition(a, b, c, d, f, g, h, s) else {
            tally.skip();
            continue;
        };
        let disc = (sq(g) - 4.0 * f * h).sqrt();
        let bounds: Vec<f64> = [(-g - disc) / (2.0 * f), (-g + disc) / (2.0 * f)]
            .iter()
            .map(|&z| (a * z + b) / (c * z + d))
            .collect();
        let (lo, hi) = (bounds[0].min(bounds[1]), bounds[0].max(bounds[1]));
        let band = 1e-9 * (1.0 + lo.abs().max(hi.abs()));
        if !lo.is_finite() || !hi.is_finite() || (s - lo).abs() < band || (s - hi).abs() < band {
            tally.skip();
            continue;
        }
        tally.record_bool(&v, inside == (lo < s && s < hi));
    }
    vec![tally.finish()]
}

fn check_local_derivatives(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let mut rng = cfg.rng(16);
    let mut tally = Tally::new("local_derivatives", 1e-6);
    for _ in 0..cfg.samples {
        let z0 = uniform(&mut rng, -3.0, 3.0);
        let t0 = uniform(&mut rng, -3.0, 3.0);
        let curve = curve_through_point(m, &ChartPoint::new(z0, t0, 0.0), false);
        let (ds, dy) = local_side_derivatives(m, z0, t0);
        let h = 1e-3 * (1.0 + z0.abs());
        let fd_s = oracle_fd_speed(m, &curve, z0, h);
        let fd_y = richardson(|z| eval_curve(m, &curve, z).y, z0, h);
        let err = |exact: f64, fd: f64| (exact - fd).abs() / exact.abs().max(1.0);
        tally.record(&[z0, t0], err(ds, fd_s).max(err(dy, fd_y)));
    }
    vec![tally.finish()]
}

/// Whether an arc satisfies L1, L2, avoids `Son` in its interior and stays
/// off `Tf'`. Returns a description of the first violation.
pub fn arc_violation(
    params: &ModelParams<f64>,
    arc: &ArcSegment<f64>,
    tols: &Tolerances<f64>,
    samples: usize,
) -> Option<String> {
    let m = params;
    let interior = arc.interior_samples(m, samples);
    let start = curves::sample(m, &arc.curve, arc.z_start);
    let mut previous = start.s;
    for p in &interior {
        if !(p.s < previous) {
            return Some(format!("speed does not decrease at z = {}", p.z));
        }
        previous = p.s;
    }
    for p in &interior {
        if let Ok(side) = side_points(m, &p.point(), tols) {
            let u_s = side.u_s.expect("plain side points are present");
            if !(p.s < speed_at(m, &u_s)) {
                return Some(format!("L2 fails at z = {}", p.z));
            }
        }
    }
    let (lo, hi) = (arc.z_start.min(arc.z_end), arc.z_start.max(arc.z_end));
    if let Ok(roots) = intersect_son(m, &arc.curve, tols) {
        if let Some(z) = roots.values().into_iter().find(|&z| z > lo + tols.trim && z < hi - tols.trim) {
            return Some(format!("Son point inside the arc at z = {z}"));
        }
    }
    let tf_prime = |p: &ChartPoint<f64>| tf(m, &p.reflected());
    let first = tf_prime(&interior[0].point()).signum();
    for p in interior.iter().chain(std::iter::once(&curves::sample(m, &arc.curve, arc.z_end))) {
        let v = tf_prime(&p.point());
        if v.signum() != first && v != 0.0 {
            return Some(format!("arc crosses Tf' near z = {}", p.z));
        }
    }
    None
}

/// Curves for the arc sweep: a third through random slow characteristic
/// points, a third through random `Son'` points and a third with random
/// invariants.
pub fn arc_sweep_curves(params: &ModelParams<f64>, rng: &mut ChaCha8Rng, n: usize) -> Vec<HugoniotCurve<f64>> {
    (0..n)
        .map(|i| match i % 3 {
            0 => {
                let p = ChartPoint::new(uniform(rng, -3.0, 3.0), uniform(rng, -3.0, -1e-3), 0.0);
                curve_through_point(params, &p, false)
            }
            1 => {
                let (z0, t0, y0) = random_sonprime_point(rng, params);
                curve_through_point(params, &ChartPoint::new(z0, t0, y0), false)
            }
            _ => random_curve(rng, params.c()),
        })
        .collect()
}

fn check_arc_validity(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let tols = &cfg.tolerances;
    let mut rng = cfg.rng(17);
    let mut tally = Tally::new("arc_validity", 0.0);
    let (mut local, mut nonlocal) = (0usize, 0usize);
    for curve in arc_sweep_curves(m, &mut rng, cfg.samples) {
        let Ok(arcs) = extract_arcs(m, &curve, tols, cfg.z_max) else {
            tally.skip();
            continue;
        };
        for arc in &arcs {
            match arc.classification {
                lax::ArcClass::Local => local += 1,
                lax::ArcClass::NonLocal => nonlocal += 1,
            }
            let violation = arc_violation(m, arc, tols, 100);
            if let Some(v) = &violation {
                if tally.notes.len() < WORST_KEPT {
                    tally.note(format!("k = {}, l = {}: {v}", curve.k, curve.l));
                }
            }
            tally.record_bool(&[curve.k, curve.l, arc.z_start, arc.z_end], violation.is_none());
        }
    }
    tally.note(format!("{local} local and {nonlocal} non-local arcs"));
    vec![tally.finish()]
}

fn check_mesh(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let grid = MeshGrid::default();
    let mut tally = Tally::new("mesh", 1e-9);
    for id in SurfaceId::ALL {
        for row in mesh(m, id, &grid) {
            let p = row.point();
            let scale = match id {
                SurfaceId::Tf | SurfaceId::TfPrime => {
                    let [a, b, c] = surfaces::tf_coefficients(m, p.z, p.t);
                    1.0 + (a * sq(p.y)).abs() + (b * p.y).abs() + c.abs()
                }
                _ => 1.0 + (1.0 + sq(p.z)).powi(3) * (1.0 + p.t.abs() + p.y.abs()),
            };
            tally.record(&[id as u8 as f64, p.z, p.t, p.y], surface_value(m, id, &p) / scale);
        }
    }
    vec![tally.finish()]
}

fn check_floodfill(cfg: &SweepConfig) -> Vec<OracleReport> {
    let m = &cfg.params;
    let mut count = Tally::new("floodfill_components", 0.0);
    let mut table = Tally::new("region_table", 0.0);
    let mut classify = Tally::new("region_classify", 0.0);
    let fill = match oracle_floodfill(m, &cfg.grid) {
        Ok(f) => f,
        Err(e) => {
            count.note(e.to_string());
            return vec![count.finish()];
        }
    };
    count.record_bool(&[fill.count() as f64, fill.count_upper() as f64], fill.count() == 12 && fill.count_upper() == 6);
    count.note(format!("{} components, {} with Y > 0", fill.count(), fill.count_upper()));

    table.record_bool(&[], region_table_from(&fill) == frozen_region_table());
    for comp in &fill.components {
        let p = comp.representative;
        classify.record_bool(&[p.z, p.t, p.y], region_classify(m, &p, cfg.tolerances.boundary) == comp.label);
    }
    let mut rng = cfg.rng(18);
    let g = &cfg.grid;
    for _ in 0..10 * cfg.samples {
        let p = ChartPoint::new(uniform(&mut rng, g.z.0, g.z.1), uniform(&mut rng, g.t.0, g.t.1), uniform(&mut rng, g.y.0, g.y.1));
        if let Some(label) = fill.label_at(&p) {
            classify.record_bool(&[p.z, p.t, p.y], region_classify(m, &p, cfg.tolerances.boundary) == label);
        } else {
            classify.skip();
        }
    }
    vec![count.finish(), table.finish(), classify.finish()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_closed_form_is_covered() {
        assert!(uncovered().is_empty(), "{:?}", uncovered());
        for check in CHECKS {
            for f in check.covers {
                assert!(CLOSED_FORMS.contains(f), "{} covers unknown {f}", check.name);
            }
        }
    }

    #[test]
    fn tally_semantics() {
        let mut t = Tally::new("x", 1e-3);
        assert!(!t.clone().finish().pass);
        t.record(&[1.0], 1e-4);
        t.record(&[2.0], -5e-4);
        t.record(&[3.0], 0.0);
        let r = t.finish();
        assert!(r.pass);
        assert_eq!(r.samples, 3);
        assert_eq!(r.worst.len(), 2);
        assert_eq!(r.max_residual, 5e-4);
        assert_eq!(r.worst[0].input, vec![2.0]);
        let mut t = Tally::new("y", 1.0);
        t.record(&[], f64::NAN);
        assert!(!t.finish().pass);
    }

    #[test]
    fn grid_validation() {
        let mut g = GridSpec::<f64>::default();
        assert!(g.validate().is_ok());
        g.cells[1] = 7;
        assert!(g.validate().is_err());
        let g = GridSpec::<f64> { guard: 0, ..Default::default() };
        assert!(g.validate().is_err());
        let g = GridSpec::<f64> { z: (0.1, 2.0), ..Default::default() };
        assert!(oracle_floodfill(&ModelParams::default(), &g).is_err());
    }

    #[test]
    fn naming_rule() {
        assert_eq!(name_component(1, 0b1111), RegionLabel::BelowBridge);
        assert_eq!(name_component(-1, 0b0110), RegionLabel::BelowTunnel);
        assert_eq!(
            name_component(-1, 0b1000),
            RegionLabel::SsPrime { z: Half::Plus, y: Half::Minus }
        );
        assert_eq!(name_component(1, 0b0100), RegionLabel::Unclassified);
    }

    #[test]
    fn coarse_floodfill_matches_frozen_table() {
        let m = ModelParams::<f64>::default();
        let grid = GridSpec { cells: [60; 3], guard: 1, ..Default::default() };
        let fill = oracle_floodfill(&m, &grid).unwrap();
        assert_eq!(fill.count(), 12);
        assert_eq!(fill.count_upper(), 6);
        assert_eq!(region_table_from(&fill), frozen_region_table());
    }

    #[test]
    fn tangent_curve_is_flagged() {
        let m = ModelParams::<f64>::default();
        let curve = curve_through_point(&m, &ChartPoint::new(0.7, 0.0, 0.0), false);
        let tols = Tolerances::default();
        let closed = intersect_characteristic(&m, &curve, &tols).unwrap();
        assert_eq!(closed.count_with_multiplicity(), 2);
        let scan = ScanSpec::default();
        let found = oracle_intersections(&m, &curve, SurfaceId::Characteristic, &scan);
        assert_eq!(
            compare_roots(&closed, &found, scan.z_range, 1e-8, tols.merge),
            RootAgreement::FlaggedTangency
        );
    }

    #[test]
    fn transversal_roots_agree_exactly() {
        let m = ModelParams::<f64>::default();
        let curve = curve_from_kl(1.3, 0.4, false);
        let tols = Tolerances::default();
        let closed = intersect_characteristic(&m, &curve, &tols).unwrap();
        let scan = ScanSpec::default();
        let found = oracle_intersections(&m, &curve, SurfaceId::Characteristic, &scan);
        assert_eq!(found.len(), 2);
        assert_eq!(
            compare_roots(&closed, &found, scan.z_range, 1e-8, tols.merge),
            RootAgreement::Exact
        );
    }

    #[test]
    fn richardson_is_fourth_order() {
        let f = |x: f64| x.sin();
        let e1 = (richardson(f, 0.3, 0.1) - 0.3f64.cos()).abs();
        let e2 = (richardson(f, 0.3, 0.05) - 0.3f64.cos()).abs();
        assert!(e1 / e2 > 12.0, "{e1} {e2}");
    }

    #[test]
    fn fd_speed_at_origin() {
        let m = ModelParams::<f64>::default();
        let curve = curve_through_point(&m, &ChartPoint::new(0.0, 0.0, 0.0), false);
        assert!((oracle_fd_speed(&m, &curve, 0.0, 1e-3) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rh_negative_control_fails() {
        let m = ModelParams::<f64>::default();
        let p = ChartPoint::new(0.5, 0.2, 1.5);
        let mut sp = chart_to_states(&m, &p);
        assert!(oracle_rh_pairs(&m, &[sp], 1e-9).pass);
        sp.s += 0.01;
        assert!(!oracle_rh_pairs(&m, &[sp], 1e-9).pass);
    }

    #[test]
    fn report_serializes() {
        let mut t = Tally::new("json", 1.0);
        t.record(&[0.5], 0.25);
        let s = serde_json::to_string(&t.finish()).unwrap();
        assert!(s.contains("\"check\":\"json\""));
    }
}
