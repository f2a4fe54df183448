//! Sample grids on the closed unit polydisc with a certified covering
//! radius, plus the shared sweep kernel every certified bound runs on.
//!
//! A grid is the n-fold product of one common axis: the origin together
//! with `radial` evenly spaced circles carrying `angular` evenly spaced
//! angles each. For a point at radius rho and angle theta, rounding to the
//! nearest circle and nearest angle gives
//!
//!   |z - g|^2 = (rho - r)^2 + 4 rho r sin^2((theta - phi)/2)
//!            <= (h_r/2)^2 + 4 sin^2(h_theta/4)
//!
//! with radial spacing h_r = 1/radial and angular spacing
//! h_theta = 2 pi / angular. The square root of the right-hand side is the
//! covering radius `delta`: every point of the polydisc has a grid point
//! within `delta` in every coordinate, which is exactly what the Lipschitz
//! arguments in `certified` consume.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{powers, DenseSeries, Series};

/// Slack allowed on coordinate moduli, so boundary samples computed in
/// floating point still count as members of the closed polydisc.
pub const POINT_MODULUS_TOLERANCE: f64 = 1e-12;

/// A point of the closed unit polydisc.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolydiscPoint {
    coords: Vec<Complex64>,
}

impl PolydiscPoint {
    /// Wrap coordinates, rejecting any with modulus beyond the closed disc.
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        for (index, z) in coords.iter().enumerate() {
            let modulus = z.norm();
            if modulus > 1.0 + POINT_MODULUS_TOLERANCE {
                return Err(Error::PointOutsidePolydisc { index, modulus });
            }
        }
        Ok(PolydiscPoint { coords })
    }

    /// The origin of the polydisc in `nvars` variables.
    pub fn origin(nvars: usize) -> Self {
        PolydiscPoint { coords: vec![Complex64::new(0.0, 0.0); nvars] }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    /// Distance in the max metric over coordinates.
    pub fn max_distance(&self, other: &PolydiscPoint) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for PolydiscPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
        }
        write!(f, ")")
    }
}

/// Draw a point uniformly from the open unit polydisc.
pub fn sample_polydisc<R: Rng + ?Sized>(rng: &mut R, nvars: usize) -> PolydiscPoint {
    let coords = (0..nvars)
        .map(|_| {
            let r = rng.random::<f64>().sqrt();
            let theta = rng.random::<f64>() * std::f64::consts::TAU;
            Complex64::from_polar(r, theta)
        })
        .collect();
    PolydiscPoint { coords }
}

/// A finite covering grid of the closed polydisc.
#[derive(Debug, Clone)]
pub struct PolydiscGrid {
    nvars: usize,
    axis: Vec<Complex64>,
    covering_radius: f64,
    /// `(radial, angular)` for grids built by [`PolydiscGrid::new`];
    /// absent for custom axes, which cannot be refined automatically.
    steps: Option<(usize, usize)>,
}

/// Pull a sample meant for the closed unit disc back inside it. cos/sin
/// rounding can leave boundary points a few ulps outside, which would
/// break the contract that grid extrema are attained inside the domain
/// (a grid "maximum" of |z1 z2| slightly above 1 is not a lower bound
/// for the sup over the polydisc). The shift is at most a few ulps and
/// is absorbed into the covering radius by the constructors.
fn clamp_into_disc(mut z: Complex64) -> Complex64 {
    for _ in 0..8 {
        if z.norm_sqr() <= 1.0 {
            return z;
        }
        let n = z.norm();
        // Near the boundary the norm itself can round to exactly 1, in
        // which case dividing is a no-op; step down by an ulp instead.
        z = if n > 1.0 { z / n } else { z * (1.0 - f64::EPSILON) };
    }
    z
}

impl PolydiscGrid {
    /// Standard grid: the origin plus `radial` circles of radius j/radial,
    /// each carrying `angular` equally spaced angles.
    pub fn new(nvars: usize, radial: usize, angular: usize) -> Result<Self> {
        assert!(nvars >= 1, "grids need at least one variable");
        if radial < 1 || angular < 2 {
            return Err(Error::DegenerateGrid { radial, angular });
        }
        let mut axis = Vec::with_capacity(1 + radial * angular);
        axis.push(Complex64::new(0.0, 0.0));
        for j in 1..=radial {
            let r = j as f64 / radial as f64;
            for m in 0..angular {
                let theta = std::f64::consts::TAU * m as f64 / angular as f64;
                axis.push(clamp_into_disc(Complex64::from_polar(r, theta)));
            }
        }
        let h_r = 1.0 / radial as f64;
        let h_theta = std::f64::consts::TAU / angular as f64;
        let s = (h_theta / 4.0).sin();
        // The 1e-15 pad covers the inward clamping of boundary samples.
        let covering_radius = ((h_r / 2.0).powi(2) + 4.0 * s * s).sqrt() + 1e-15;
        Self::check_size(&axis, nvars)?;
        Ok(PolydiscGrid { nvars, axis, covering_radius, steps: Some((radial, angular)) })
    }

    /// Grid over a caller-supplied axis. The caller asserts that every
    /// point of the closed disc lies within `covering_radius` of some axis
    /// sample; all certified bounds built on this grid inherit that claim.
    pub fn custom(nvars: usize, axis: Vec<Complex64>, covering_radius: f64) -> Result<Self> {
        assert!(nvars >= 1, "grids need at least one variable");
        if axis.is_empty() {
            return Err(Error::InvalidAxis { reason: "empty axis".into() });
        }
        if !(covering_radius.is_finite() && covering_radius > 0.0) {
            return Err(Error::InvalidAxis {
                reason: format!("covering radius must be positive and finite, got {covering_radius}"),
            });
        }
        for (i, z) in axis.iter().enumerate() {
            let m = z.norm();
            if m > 1.0 + POINT_MODULUS_TOLERANCE {
                return Err(Error::InvalidAxis {
                    reason: format!("axis sample {i} has modulus {m} > 1"),
                });
            }
        }
        let axis: Vec<Complex64> = axis.into_iter().map(clamp_into_disc).collect();
        Self::check_size(&axis, nvars)?;
        // Samples just past the boundary were pulled in by up to the
        // admission tolerance; widen the caller's covering claim to match.
        let covering_radius = covering_radius + POINT_MODULUS_TOLERANCE;
        Ok(PolydiscGrid { nvars, axis, covering_radius, steps: None })
    }

    fn check_size(axis: &[Complex64], nvars: usize) -> Result<()> {
        axis.len()
            .checked_pow(nvars as u32)
            .ok_or_else(|| Error::InvalidAxis {
                reason: format!("{} axis samples over {} variables overflow", axis.len(), nvars),
            })
            .map(|_| ())
    }

    /// The same construction with both step counts multiplied by `factor`.
    /// The covering radius shrinks by roughly that factor.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        assert!(factor >= 1, "refinement factor must be at least 1");
        match self.steps {
            Some((radial, angular)) => Self::new(self.nvars, radial * factor, angular * factor),
            None => Err(Error::InvalidAxis {
                reason: "custom grids cannot be refined automatically".into(),
            }),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Certified covering radius in the max metric over coordinates.
    pub fn covering_radius(&self) -> f64 {
        self.covering_radius
    }

    /// `(radial, angular)` steps for standard grids, `None` for custom axes.
    pub fn steps(&self) -> Option<(usize, usize)> {
        self.steps
    }

    pub fn axis(&self) -> &[Complex64] {
        &self.axis
    }

    /// Total number of product points.
    pub fn len(&self) -> usize {
        self.axis.len().pow(self.nvars as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Decode a flat index (lexicographic, variable 0 slowest) to a point.
    pub fn point(&self, flat: usize) -> PolydiscPoint {
        assert!(flat < self.len(), "grid index {flat} out of range");
        let m = self.axis.len();
        let mut digits = vec![0usize; self.nvars];
        let mut rest = flat;
        for d in digits.iter_mut().rev() {
            *d = rest % m;
            rest /= m;
        }
        PolydiscPoint { coords: digits.into_iter().map(|d| self.axis[d]).collect() }
    }

    /// Iterate all product points in flat-index order.
    pub fn points(&self) -> impl Iterator<Item = PolydiscPoint> + '_ {
        (0..self.len()).map(move |flat| self.point(flat))
    }

    /// Distance (max metric) from `p` to the nearest grid point. The
    /// product structure lets each coordinate pick its nearest axis sample
    /// independently.
    pub fn nearest_distance(&self, p: &PolydiscPoint) -> f64 {
        p.coords
            .iter()
            .map(|z| {
                self.axis
                    .iter()
                    .map(|a| (z - a).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for PolydiscGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.steps {
            Some((r, a)) => write!(
                f,
                "grid(radial {r}, angular {a}, delta {:.6}, {} vars)",
                self.covering_radius, self.nvars
            ),
            None => write!(
                f,
                "grid(custom {} samples, delta {:.6}, {} vars)",
                self.axis.len(),
                self.covering_radius,
                self.nvars
            ),
        }
    }
}

/// Direction of a sweep reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SweepKind {
    Max,
    Min,
}

#[derive(Clone, Copy)]
struct Acc {
    val: f64,
    idx: usize,
    nan: Option<usize>,
}

impl Acc {
    fn identity(kind: SweepKind) -> Self {
        let val = match kind {
            SweepKind::Max => f64::NEG_INFINITY,
            SweepKind::Min => f64::INFINITY,
        };
        Acc { val, idx: usize::MAX, nan: None }
    }

    fn admit(&mut self, score: f64, idx: usize, kind: SweepKind) {
        if !score.is_finite() {
            if self.nan.is_none() {
                self.nan = Some(idx);
            }
            return;
        }
        let better = match kind {
            SweepKind::Max => score > self.val,
            SweepKind::Min => score < self.val,
        };
        if better || (score == self.val && idx < self.idx) {
            self.val = score;
            self.idx = idx;
        }
    }

    fn combine(self, other: Acc, kind: SweepKind) -> Acc {
        let nan = match (self.nan, other.nan) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut out = if other.idx == usize::MAX {
            self
        } else if self.idx == usize::MAX {
            other
        } else {
            let better = match kind {
                SweepKind::Max => other.val > self.val,
                SweepKind::Min => other.val < self.val,
            };
            if better || (other.val == self.val && other.idx < self.idx) {
                other
            } else {
                self
            }
        };
        out.nan = nan;
        out
    }
}

/// Evaluate every series at every product point and reduce `score` over the
/// grid. Returns the extreme value and the first flat index attaining it.
///
/// The reduction is associative with an explicit lowest-index tie-break, so
/// the result does not depend on how rayon partitions the outer loop. Any
/// non-finite score aborts the sweep with the offending index.
///
/// Points are never materialized: the outer loop fixes variable 0 at an
/// axis sample and collapses each coefficient table once, so the inner
/// loops touch only small per-variable polynomials against a precomputed
/// power table. Single-point `Series::eval` performs the identical
/// collapse, which keeps sweep extremes bit-identical to pointwise
/// evaluation at the same grid point.
pub(crate) fn sweep<F>(
    grid: &PolydiscGrid,
    series: &[&Series],
    kind: SweepKind,
    score: F,
) -> Result<(f64, usize)>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    use rayon::prelude::*;

    assert!(!series.is_empty(), "sweep needs at least one series");
    for s in series {
        if s.nvars() != grid.nvars {
            return Err(Error::NvarsMismatch { left: s.nvars(), right: grid.nvars });
        }
    }
    let dense: Vec<DenseSeries> = series
        .iter()
        .map(|s| DenseSeries::from_series(s))
        .collect::<Result<_>>()?;

    let nvars = grid.nvars;
    let m = grid.axis.len();
    let maxdeg = dense.iter().flat_map(|d| d.degs.iter().copied()).max().unwrap_or(0);
    let pstride = maxdeg + 1;
    let mut table = vec![Complex64::new(0.0, 0.0); m * pstride];
    let mut pw = Vec::with_capacity(pstride);
    for (i, &z) in grid.axis.iter().enumerate() {
        powers(z, maxdeg, &mut pw);
        table[i * pstride..(i + 1) * pstride].copy_from_slice(&pw);
    }

    let acc = (0..m)
        .into_par_iter()
        .with_min_len(if nvars == 1 { 512 } else { 1 })
        .map(|i0| {
            let mut local = Acc::identity(kind);
            let pw0 = &table[i0 * pstride..(i0 + 1) * pstride];
            if nvars == 1 {
                let mut vals = Vec::with_capacity(dense.len());
                for d in &dense {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, c) in d.coeffs.iter().enumerate() {
                        acc += c * pw0[k];
                    }
                    vals.push(acc);
                }
                local.admit(score(&vals), i0, kind);
            } else {
                let coeffs: Vec<Vec<Complex64>> = dense
                    .iter()
                    .map(|d| {
                        let stride = d.stride(1);
                        let mut out = vec![Complex64::new(0.0, 0.0); stride];
                        DenseSeries::collapse_leading(d.degs[0], stride, &d.coeffs, pw0, &mut out);
                        out
                    })
                    .collect();
                let base = i0 * m.pow((nvars - 1) as u32);
                let mut vals = Vec::with_capacity(dense.len());
                scan_tail(&dense, 1, nvars, m, &table, pstride, &coeffs, base, kind, &score, &mut local, &mut vals);
            }
            local
        })
        .reduce(|| Acc::identity(kind), |a, b| a.combine(b, kind));

    if let Some(idx) = acc.nan {
        return Err(Error::NonFiniteScore { index: idx });
    }
    Ok((acc.val, acc.idx))
}

#[allow(clippy::too_many_arguments)]
fn scan_tail<F>(
    dense: &[DenseSeries],
    level: usize,
    nvars: usize,
    m: usize,
    table: &[Complex64],
    pstride: usize,
    coeffs: &[Vec<Complex64>],
    base: usize,
    kind: SweepKind,
    score: &F,
    best: &mut Acc,
    vals: &mut Vec<Complex64>,
) where
    F: Fn(&[Complex64]) -> f64,
{
    if level == nvars - 1 {
        for i in 0..m {
            let pw = &table[i * pstride..(i + 1) * pstride];
            vals.clear();
            for (s, d) in dense.iter().enumerate() {
                let cs = &coeffs[s];
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..=d.degs[level] {
                    acc += cs[k] * pw[k];
                }
                vals.push(acc);
            }
            best.admit(score(vals), base + i, kind);
        }
    } else {
        let sub = m.pow((nvars - level - 1) as u32);
        for i in 0..m {
            let pw = &table[i * pstride..(i + 1) * pstride];
            let child: Vec<Vec<Complex64>> = dense
                .iter()
                .enumerate()
                .map(|(s, d)| {
                    let stride = d.degs[level + 1..].iter().map(|&dd| dd + 1).product();
                    let mut out = vec![Complex64::new(0.0, 0.0); stride];
                    DenseSeries::collapse_leading(d.degs[level], stride, &coeffs[s], pw, &mut out);
                    out
                })
                .collect();
            scan_tail(dense, level + 1, nvars, m, table, pstride, &child, base + i * sub, kind, score, best, vals);
        }
    }
}
