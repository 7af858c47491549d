//! Dense univariate polynomials and real-root isolation.
//!
//! The polynomials met in this crate have degree at most eight, so roots are
//! isolated by recursion on the derivative: the real roots of `p'` split the
//! line into intervals on which `p` is monotone, each holding at most one
//! simple root, which bisection then pins down to the last bit. A critical
//! point where `p` itself (nearly) vanishes is a multiple root whose
//! multiplicity is one more than its multiplicity in `p'`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Polynomial with coefficients stored in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// Builds a polynomial from ascending coefficients; exact trailing zeros
    /// are dropped.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// Builds a polynomial from coefficients listed highest degree first.
    pub fn from_descending(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().rev().copied().collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![T::zero(), T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.coeffs.last().copied().unwrap_or_else(T::zero)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).copied().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * x + c)
    }

    /// `sum |a_i| |x|^i`, the natural scale for the rounding error of `eval`.
    pub fn eval_magnitude(&self, x: T) -> T {
        let ax = x.abs();
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * ax + c.abs())
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |m, &c| m.max(c.abs()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * T::lit(i as f64))
                .collect(),
        )
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    ///
    /// Panics if `divisor` is the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let q = rem[i + dd] / lead;
            quot[i] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j] - q * dc;
            }
            rem[i + dd] = T::zero();
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Real roots with multiplicities, sorted ascending.
    ///
    /// Returns `None` for the zero polynomial, whose zero set is the whole
    /// line.
    pub fn real_roots(&self, opts: &RootOptions<T>) -> Option<RealRoots<T>> {
        if self.is_zero() {
            return None;
        }
        let scale = self.max_abs_coeff();
        let normalized = self.scale(T::one() / scale);
        let mut found = isolate(&normalized, opts);
        found.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite roots"));
        let merged = merge_close(found, opts.merge);
        let roots = merged
            .into_iter()
            .map(|(value, multiplicity)| Root {
                value,
                multiplicity,
                residual: self.eval(value).abs() / (T::one() + scale),
            })
            .collect();
        Some(RealRoots { roots })
    }
}

/// Tolerances for [`Polynomial::real_roots`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// A critical point `c` counts as a multiple root when
    /// `|p(c)| <= tangency * sum |a_i| |c|^i`.
    pub tangency: T,
    /// Roots closer than `merge * (1 + |x|)` are reported as one root with
    /// the summed multiplicity.
    pub merge: T,
}

impl<T: Scalar> Default for RootOptions<T> {
    fn default() -> Self {
        RootOptions {
            tangency: T::tol(1e-12),
            merge: T::tol(1e-6),
        }
    }
}

/// One real root of a polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Root<T> {
    pub value: T,
    pub multiplicity: usize,
    /// `|p(value)| / (1 + max |a_i|)`.
    pub residual: T,
}

/// Real roots sorted ascending, with multiplicities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct RealRoots<T> {
    roots: Vec<Root<T>>,
}

impl<T: Scalar> RealRoots<T> {
    pub fn empty() -> Self {
        RealRoots { roots: Vec::new() }
    }

    /// Wraps externally found roots, sorting them.
    pub fn from_roots(mut roots: Vec<Root<T>>) -> Self {
        roots.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap_or(std::cmp::Ordering::Equal));
        RealRoots { roots }
    }

    pub fn roots(&self) -> &[Root<T>] {
        &self.roots
    }

    pub fn values(&self) -> Vec<T> {
        self.roots.iter().map(|r| r.value).collect()
    }

    /// Number of distinct real roots.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn count_with_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn simple(&self) -> impl Iterator<Item = T> + '_ {
        self.roots
            .iter()
            .filter(|r| r.multiplicity == 1)
            .map(|r| r.value)
    }

    pub fn max_residual(&self) -> T {
        self.roots
            .iter()
            .fold(T::zero(), |m, r| m.max(r.residual))
    }

    /// Keeps only roots inside `[lo, hi]`.
    pub fn within(&self, lo: T, hi: T) -> Self {
        RealRoots {
            roots: self
                .roots
                .iter()
                .filter(|r| r.value >= lo && r.value <= hi)
                .copied()
                .collect(),
        }
    }
}

fn cauchy_bound<T: Scalar>(p: &Polynomial<T>) -> T {
    let lead = p.leading().abs();
    let n = p.coeffs.len() - 1;
    let m = p.coeffs[..n]
        .iter()
        .fold(T::zero(), |m, &c| m.max(c.abs() / lead));
    T::one() + m
}

fn isolate<T: Scalar>(p: &Polynomial<T>, opts: &RootOptions<T>) -> Vec<(T, usize)> {
    match p.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![(-p.coeffs[0] / p.coeffs[1], 1)],
        Some(_) => {
            let mut crit = isolate(&p.derivative(), opts);
            crit.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite roots"));
            let bound = cauchy_bound(p);

            let mut roots = Vec::new();
            let mut breaks: Vec<(T, bool)> = vec![(-bound, false)];
            for &(c, m) in &crit {
                let is_root = p.eval(c).abs() <= opts.tangency * p.eval_magnitude(c);
                if is_root {
                    roots.push((c, m + 1));
                }
                breaks.push((c, is_root));
            }
            breaks.push((bound, false));

            for w in breaks.windows(2) {
                let ((lo, lo_root), (hi, hi_root)) = (w[0], w[1]);
                if lo_root || hi_root || !(lo < hi) {
                    continue;
                }
                let (flo, fhi) = (p.eval(lo), p.eval(hi));
                if flo.is_zero() || fhi.is_zero() {
                    continue;
                }
                if (flo < T::zero()) != (fhi < T::zero()) {
                    roots.push((bisect(p, lo, hi, flo), 1));
                }
            }
            roots
        }
    }
}

/// Bisection on a bracket with a sign change, run to floating point
/// resolution.
fn bisect<T: Scalar>(p: &Polynomial<T>, mut lo: T, mut hi: T, flo: T) -> T {
    let neg_lo = flo < T::zero();
    let half = T::lit(0.5);
    for _ in 0..2000 {
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = p.eval(mid);
        if fm.is_zero() {
            return mid;
        }
        if (fm < T::zero()) == neg_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo + (hi - lo) * half
}

fn merge_close<T: Scalar>(sorted: Vec<(T, usize)>, merge: T) -> Vec<(T, usize)> {
    let mut out: Vec<(T, usize)> = Vec::with_capacity(sorted.len());
    for (x, m) in sorted {
        if let Some(last) = out.last_mut() {
            if (x - last.0).abs() <= merge * (T::one() + x.abs()) {
                let total = last.1 + m;
                let w_last = T::lit(last.1 as f64);
                let w_new = T::lit(m as f64);
                last.0 = (last.0 * w_last + x * w_new) / (w_last + w_new);
                last.1 = total;
                continue;
            }
        }
        out.push((x, m));
    }
    out
}

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        self.scale(-T::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Self) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        -&self
    }
}
