//! Certified enclosures of sup norms and minimum moduli over the polydisc,
//! and the invertibility test built on them.
//!
//! The contract: a grid extreme is exact on the samples, and the global
//! Lipschitz constant of the series stretches it to the whole polydisc.
//! If `delta` is the covering radius, every off-grid point sits within
//! `delta` of a sample in each coordinate, so the function value there can
//! drift by at most `L * delta`. Grid maxima are therefore true lower
//! bounds for suprema and grid minima true upper bounds for infima; the
//! Lipschitz spread closes the gap from the other side.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::grid::{sweep, PolydiscGrid, SweepKind};
use crate::series::Series;

/// Below this modulus a grid sample counts as an exact zero witness.
pub const ZERO_WITNESS_THRESHOLD: f64 = 1e-14;

/// Outcome of a yes/no question answered by certified numerics: either
/// side can be proved, or the grid was too coarse to decide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certificate {
    Proved,
    Disproved,
    Inconclusive,
}

impl Certificate {
    pub fn is_proved(self) -> bool {
        self == Certificate::Proved
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Proved => write!(f, "proved"),
            Certificate::Disproved => write!(f, "disproved"),
            Certificate::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Which extreme a [`CertifiedBound`] encloses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// sup of |f| over the closed polydisc.
    Supremum,
    /// inf of |f| over the closed polydisc.
    InfimumModulus,
}

/// A two-sided enclosure `[lo, hi]` of an extreme of |f|, together with
/// the grid data that justifies it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CertifiedBound {
    pub lo: f64,
    pub hi: f64,
    pub kind: BoundKind,
    /// Covering radius of the grid the enclosure was computed on.
    pub grid_delta: f64,
    /// Lipschitz constant used to spread grid samples over the polydisc.
    pub lipschitz: f64,
}

impl CertifiedBound {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

impl fmt::Display for CertifiedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.lo, self.hi)
    }
}

/// Certified enclosure of `sup |f|` over the closed polydisc.
///
/// `lo` is the grid maximum (attained, hence a genuine lower bound),
/// capped by the l1 norm of the coefficients: the cap discards the few
/// ulps of evaluation rounding that can push a boundary sample past an
/// attained sup. The upper side takes the smaller of the Lipschitz
/// stretch `lo + L * delta` and the same l1 norm, which dominates |f|
/// everywhere on the polydisc; for series whose sup is attained on the
/// grid and equals the l1 norm — constants, monomials, and the plants
/// built from them — the enclosure collapses to a point instead of
/// carrying grid slack.
pub fn sup_norm_certified(f: &Series, grid: &PolydiscGrid) -> Result<CertifiedBound> {
    let (m2, _) = sweep(grid, &[f], SweepKind::Max, |v| v[0].norm_sqr())?;
    let l1 = f.l1_norm();
    let lo = m2.sqrt().min(l1);
    let lipschitz = f.lipschitz_constant();
    let delta = grid.covering_radius();
    let hi = (lo + lipschitz * delta).min(l1).max(lo);
    Ok(CertifiedBound { lo, hi, kind: BoundKind::Supremum, grid_delta: delta, lipschitz })
}

/// Certified enclosure of `inf |f|` over the closed polydisc.
///
/// `hi` is the grid minimum (attained, hence a genuine upper bound); the
/// Lipschitz spread pushes the lower side down, clamped at zero since a
/// modulus cannot be negative.
pub fn min_modulus_certified(f: &Series, grid: &PolydiscGrid) -> Result<CertifiedBound> {
    let (m2, _) = sweep(grid, &[f], SweepKind::Min, |v| v[0].norm_sqr())?;
    let hi = m2.sqrt();
    let lipschitz = f.lipschitz_constant();
    let delta = grid.covering_radius();
    let lo = (hi - lipschitz * delta).max(0.0);
    Ok(CertifiedBound { lo, hi, kind: BoundKind::InfimumModulus, grid_delta: delta, lipschitz })
}

/// Decide invertibility in the coefficient algebra.
///
/// The maximal ideal space of the algebra is the closed polydisc, with
/// evaluation as the Gelfand transform, so f is invertible exactly when
/// its evaluation never vanishes there. A certified positive lower bound
/// on the minimum modulus proves that; a grid sample at (numerical) zero
/// disproves it; anything else is inconclusive at this resolution.
pub fn is_invertible(f: &Series, grid: &PolydiscGrid) -> Result<Certificate> {
    Ok(invertibility_from_bound(&min_modulus_certified(f, grid)?))
}

/// The invertibility verdict carried by a minimum-modulus enclosure.
pub(crate) fn invertibility_from_bound(bound: &CertifiedBound) -> Certificate {
    debug_assert_eq!(bound.kind, BoundKind::InfimumModulus);
    if bound.hi <= ZERO_WITNESS_THRESHOLD {
        Certificate::Disproved
    } else if bound.lo > 0.0 {
        Certificate::Proved
    } else {
        Certificate::Inconclusive
    }
}
