//! The chordal metric between plants, as a certified enclosure.
//!
//! Pointwise, two fractions n1/d1 and n2/d2 are compared through the
//! chordal distance of their values on the sphere, written directly in
//! terms of the factors:
//!
//!   ratio(phi) = |n1 d2 - n2 d1| / (sqrt(|n1|^2 + |d1|^2) sqrt(|n2|^2 + |d2|^2))
//!
//! evaluated at phi. This is exactly chordal(p1(phi), p2(phi)) and does
//! not depend on which coprime factorization represents each plant:
//! changing factorization multiplies numerator and denominator by the
//! same positive factor. The plant metric is the supremum of ratio over
//! the closed polydisc; a grid sweep gives an attained lower bound, and a
//! quotient-rule Lipschitz constant built on the plants' coprime gaps
//! stretches it to a certified upper bound.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{sweep, PolydiscGrid, PolydiscPoint, SweepKind};
use crate::plant::CoprimePlant;

/// Pointwise degeneracy threshold: both factors of a plant below this
/// modulus means the fraction has no value there.
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

/// A certified enclosure of the plant metric.
#[derive(Debug, Clone, Serialize)]
pub struct KappaEstimate {
    /// Grid maximum of the pointwise ratio: attained, hence a true lower
    /// bound of the supremum.
    pub lower: f64,
    /// lower + L * delta, clamped to the metric's diameter 1.
    pub upper: f64,
    /// Covering radius of the grid used.
    pub grid_delta: f64,
    /// Lipschitz constant of the pointwise ratio over the polydisc.
    pub lipschitz: f64,
    /// A grid point attaining `lower`.
    pub argmax: PolydiscPoint,
}

/// The squared pointwise ratio from the four factor values
/// (n1, d1, n2, d2). Shared verbatim between the grid sweep and
/// single-point evaluation so both paths round identically; the square
/// root is deferred because it commutes with max.
#[inline]
fn ratio_sqr(v: &[Complex64]) -> f64 {
    let cross = v[0] * v[3] - v[2] * v[1];
    let d1 = v[0].norm_sqr() + v[1].norm_sqr();
    let d2 = v[2].norm_sqr() + v[3].norm_sqr();
    cross.norm_sqr() / (d1 * d2)
}

/// The chordal distance between the values of two plants at one point of
/// the closed polydisc.
pub fn kappa_pointwise(
    p1: &CoprimePlant,
    p2: &CoprimePlant,
    point: &PolydiscPoint,
) -> Result<f64> {
    let vals = [
        p1.num().eval(point.coords())?,
        p1.den().eval(point.coords())?,
        p2.num().eval(point.coords())?,
        p2.den().eval(point.coords())?,
    ];
    for pair in [[vals[0], vals[1]], [vals[2], vals[3]]] {
        if pair[0].norm() < DEGENERACY_THRESHOLD && pair[1].norm() < DEGENERACY_THRESHOLD {
            return Err(Error::CoprimenessViolation { threshold: DEGENERACY_THRESHOLD });
        }
    }
    Ok(ratio_sqr(&vals).sqrt().min(1.0))
}

/// Certified enclosure of the plant metric kappa(p1, p2).
///
/// The Lipschitz constant comes from the quotient rule: with
/// N = n1 d2 - n2 d1, D_i = sqrt(|n_i|^2 + |d_i|^2) >= beta_i (the
/// coprime gaps), moving the evaluation point by rho changes N by at most
/// L(N) rho and each D_i by at most (L(n_i) + L(d_i)) rho, so
///
///   L = L(N)/(b1 b2) + ||N|| (L(n1)+L(d1))/(b1^2 b2)
///              + ||N|| (L(n2)+L(d2))/(b1 b2^2).
///
/// When the two plants share a factorization, N cancels exactly and the
/// enclosure collapses to [0, 0] with no grid slack at all.
pub fn kappa(p1: &CoprimePlant, p2: &CoprimePlant, grid: &PolydiscGrid) -> Result<KappaEstimate> {
    if p1.nvars() != p2.nvars() {
        return Err(Error::NvarsMismatch { left: p1.nvars(), right: p2.nvars() });
    }
    if p1.nvars() != grid.nvars() {
        return Err(Error::NvarsMismatch { left: p1.nvars(), right: grid.nvars() });
    }

    let cross = p1.num().mul(p2.den())?.sub(&p2.num().mul(p1.den())?)?;
    let b1 = p1.coprime_gap();
    let b2 = p2.coprime_gap();
    let cross_sup = cross.l1_norm();
    let l1 = p1.num().lipschitz_constant() + p1.den().lipschitz_constant();
    let l2 = p2.num().lipschitz_constant() + p2.den().lipschitz_constant();
    let lipschitz = cross.lipschitz_constant() / (b1 * b2)
        + cross_sup * (l1 / (b1 * b1 * b2) + l2 / (b1 * b2 * b2));

    let series = [p1.num(), p1.den(), p2.num(), p2.den()];
    let (m2, idx) = sweep(grid, &series, SweepKind::Max, ratio_sqr)?;
    let lower = m2.sqrt().min(1.0);
    let delta = grid.covering_radius();
    let upper = (lower + lipschitz * delta).min(1.0);

    Ok(KappaEstimate { lower, upper, grid_delta: delta, lipschitz, argmax: grid.point(idx) })
}

/// The largest pointwise distance over an explicit list of sample points.
///
/// This is a plain sampled maximum with no covering certificate: use it
/// for shared-point comparisons, not for certified statements about the
/// supremum. Over exactly the points of a grid it reproduces
/// `kappa(...).lower` bit for bit.
pub fn kappa_on_points(
    p1: &CoprimePlant,
    p2: &CoprimePlant,
    points: &[PolydiscPoint],
) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyPointList);
    }
    let mut best = f64::NEG_INFINITY;
    for p in points {
        let v = kappa_pointwise(p1, p2, p)?;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plant::CoprimePlant;
    use crate::series::Series;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn grid() -> PolydiscGrid {
        PolydiscGrid::new(2, 5, 16).unwrap()
    }

    fn nominal(g: &PolydiscGrid) -> CoprimePlant {
        let n = Series::monomial(2, &[1, 1], c(1.0, 0.0)).unwrap();
        let d = n.mul(&n).unwrap().sub(&Series::one(2)).unwrap();
        let x = n.clone();
        let y = Series::real_constant(2, -1.0);
        CoprimePlant::new(n, d, Some((x, y)), g).unwrap()
    }

    fn shifted(alpha: f64, g: &PolydiscGrid) -> CoprimePlant {
        let m = Series::monomial(2, &[1, 1], c(1.0, 0.0)).unwrap();
        let n = m.sub(&Series::real_constant(2, alpha)).unwrap();
        let d = m.mul(&m).unwrap().sub(&Series::one(2)).unwrap();
        let s = 1.0 / (1.0 - alpha * alpha);
        let x = m.add(&Series::real_constant(2, alpha)).unwrap().scale(c(s, 0.0));
        let y = Series::real_constant(2, -s);
        CoprimePlant::new(n, d, Some((x, y)), g).unwrap()
    }

    #[test]
    fn identical_plants_have_exactly_zero_distance() {
        let g = grid();
        let p = nominal(&g);
        let k = kappa(&p, &p, &g).unwrap();
        assert_eq!(k.lower, 0.0);
        assert_eq!(k.upper, 0.0);
        assert_eq!(k.lipschitz, 0.0);
    }

    #[test]
    fn distance_is_symmetric_bitwise() {
        let g = grid();
        let p0 = nominal(&g);
        let pa = shifted(0.1, &g);
        let k12 = kappa(&p0, &pa, &g).unwrap();
        let k21 = kappa(&pa, &p0, &g).unwrap();
        assert_eq!(k12.lower, k21.lower);
        assert_eq!(k12.upper, k21.upper);
    }

    #[test]
    fn pointwise_value_at_origin_matches_closed_form() {
        // At the origin the fractions take values 0 and alpha (after the
        // sign of d cancels), so the distance is alpha / sqrt(1 + alpha^2).
        let g = grid();
        let p0 = nominal(&g);
        let pa = shifted(0.1, &g);
        let v = kappa_pointwise(&p0, &pa, &PolydiscPoint::origin(2)).unwrap();
        let expected = 0.1 / 1.01f64.sqrt();
        assert!((v - expected).abs() <= 1e-14, "got {v}, expected {expected}");
    }

    #[test]
    fn pointwise_agrees_with_scalar_chordal_metric() {
        use crate::sphere::{chordal, ExtendedComplex};
        let g = grid();
        let p0 = nominal(&g);
        let pa = shifted(0.2, &g);
        for pt in [
            PolydiscPoint::new(vec![c(0.3, 0.1), c(-0.2, 0.4)]).unwrap(),
            PolydiscPoint::new(vec![c(0.6, 0.0), c(0.5, -0.5)]).unwrap(),
        ] {
            let v = kappa_pointwise(&p0, &pa, &pt).unwrap();
            let val = |p: &CoprimePlant| -> ExtendedComplex {
                let n = p.num().eval(pt.coords()).unwrap();
                let d = p.den().eval(pt.coords()).unwrap();
                ExtendedComplex::new(n / d)
            };
            let s = chordal(val(&p0), val(&pa));
            assert!((v - s).abs() <= 1e-12, "factor form {v} vs value form {s}");
        }
    }

    #[test]
    fn lower_bound_is_attained_at_argmax() {
        let g = grid();
        let p0 = nominal(&g);
        let pa = shifted(0.15, &g);
        let k = kappa(&p0, &pa, &g).unwrap();
        let at_argmax = kappa_pointwise(&p0, &pa, &k.argmax).unwrap();
        assert_eq!(k.lower, at_argmax);
        assert!(k.lower <= k.upper);
        assert!(k.upper <= 1.0);
    }

    #[test]
    fn sampled_maximum_over_grid_equals_sweep_lower_bitwise() {
        let g = PolydiscGrid::new(2, 3, 8).unwrap();
        let p0 = nominal(&g);
        let pa = shifted(0.1, &g);
        let k = kappa(&p0, &pa, &g).unwrap();
        let pts: Vec<PolydiscPoint> = g.points().collect();
        let sampled = kappa_on_points(&p0, &pa, &pts).unwrap();
        assert_eq!(sampled, k.lower);
    }

    #[test]
    fn factorization_invariance_under_unit_scaling() {
        // Same plant, factors scaled by the constant 2: the metric to a
        // third plant is unchanged up to rounding.
        let g = grid();
        let p0 = nominal(&g);
        let pa = shifted(0.1, &g);
        let scaled = {
            let n = p0.num().scale(c(2.0, 0.0));
            let d = p0.den().scale(c(2.0, 0.0));
            let x = p0.num().scale(c(0.5, 0.0));
            let y = Series::real_constant(2, -0.5);
            CoprimePlant::new(n, d, Some((x, y)), &g).unwrap()
        };
        let k1 = kappa(&p0, &pa, &g).unwrap();
        let k2 = kappa(&scaled, &pa, &g).unwrap();
        assert!((k1.lower - k2.lower).abs() <= 1e-12);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let g2 = grid();
        let p0 = nominal(&g2);
        let g1 = PolydiscGrid::new(1, 4, 8).unwrap();
        let q = CoprimePlant::new(
            Series::variable(1, 0),
            Series::one(1),
            Some((Series::zero(1), Series::one(1))),
            &g1,
        )
        .unwrap();
        assert!(matches!(kappa(&p0, &q, &g2), Err(Error::NvarsMismatch { .. })));
        assert!(matches!(kappa(&p0, &p0, &g1), Err(Error::NvarsMismatch { .. })));
    }

    #[test]
    fn empty_point_list_is_an_error() {
        let g = grid();
        let p0 = nominal(&g);
        assert!(matches!(kappa_on_points(&p0, &p0, &[]), Err(Error::EmptyPointList)));
    }

    #[test]
    fn metric_never_exceeds_diameter() {
        // Far-apart plants: p = z1 z2 / 1 vs p = 1 / z1 z2 (reciprocal
        // pair); their pointwise distances approach but never exceed 1.
        let g = grid();
        let m = Series::monomial(2, &[1, 1], c(1.0, 0.0)).unwrap();
        let p1 = CoprimePlant::new(
            m.clone(),
            Series::one(2),
            Some((Series::zero(2), Series::one(2))),
            &g,
        )
        .unwrap();
        let p2 = CoprimePlant::new(
            Series::one(2),
            m,
            Some((Series::one(2), Series::zero(2))),
            &g,
        )
        .unwrap();
        let k = kappa(&p1, &p2, &g).unwrap();
        assert!(k.lower <= 1.0);
        assert_eq!(k.upper, 1.0);
        assert!(k.lower > 0.99, "reciprocal pair should approach the diameter");
    }
}
