//! Plants as certified-coprime fractions n/d over the coefficient algebra,
//! and the closed loop a controller forms with them.
//!
//! A plant is only admitted together with evidence that its factors have
//! no common zero on the closed polydisc: either Bezout witnesses
//! n x + d y = 1 (up to a small residual), or a certified positive lower
//! bound on sqrt(|n|^2 + |d|^2) over the polydisc. The evidence yields the
//! `coprime_gap`, a certified pointwise lower bound on that joint modulus;
//! the chordal-metric enclosures divide by it, so plants that cannot
//! furnish a positive gap are rejected up front.


use crate::certified::{
    invertibility_from_bound, min_modulus_certified, sup_norm_certified, Certificate,
    CertifiedBound, ZERO_WITNESS_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::grid::{sweep, PolydiscGrid, SweepKind};
use crate::neumann::{neumann_inverse, terms_for_target};
use crate::series::Series;

/// Default ceiling on the l1 residual of supplied Bezout witnesses.
pub const DEFAULT_BEZOUT_TOLERANCE: f64 = 1e-9;

/// Residual the closed-loop inverter aims for.
const LOOP_TARGET_RESIDUAL: f64 = 1e-9;
/// Largest Neumann truncation the closed-loop inverter will build.
const LOOP_MAX_TERMS: usize = 512;
/// Residual above which closed-loop entries are withheld as untrustworthy.
const LOOP_ACCEPT_RESIDUAL: f64 = 1e-6;

/// How a plant's coprimeness was established.
#[derive(Debug, Clone)]
pub enum CoprimenessEvidence {
    /// Bezout witnesses with their l1 identity residual.
    Witnesses { x: Series, y: Series, residual: f64 },
    /// No-common-zero certificate: a positive certified lower bound on
    /// sqrt(|n|^2 + |d|^2) over the polydisc.
    SpectrumGap { bound: CertifiedBound },
}

/// A coprime fraction n/d with certified evidence.
#[derive(Debug, Clone)]
pub struct CoprimePlant {
    num: Series,
    den: Series,
    evidence: CoprimenessEvidence,
    coprime_gap: f64,
}

impl CoprimePlant {
    /// Admit a plant with the default witness tolerance.
    pub fn new(
        num: Series,
        den: Series,
        witnesses: Option<(Series, Series)>,
        grid: &PolydiscGrid,
    ) -> Result<Self> {
        Self::with_tolerance(num, den, witnesses, grid, DEFAULT_BEZOUT_TOLERANCE)
    }

    /// Admit a plant, checking witnesses against `bezout_tol`.
    ///
    /// With witnesses, the identity residual r = ||n x + d y - 1||_1 must
    /// stay below the tolerance; then at every point of the polydisc
    ///
    ///   1 - r <= |n x + d y| <= sqrt(|n|^2 + |d|^2) sqrt(|x|^2 + |y|^2),
    ///
    /// so certified sup bounds on x and y turn into the coprime gap.
    /// Without witnesses, a grid sweep of |n|^2 + |d|^2 plus the joint
    /// Lipschitz constant L(n) + L(d) must prove the gap positive; a grid
    /// sample where both factors vanish refutes coprimeness instead, and
    /// anything in between is rejected as inconclusive.
    pub fn with_tolerance(
        num: Series,
        den: Series,
        witnesses: Option<(Series, Series)>,
        grid: &PolydiscGrid,
        bezout_tol: f64,
    ) -> Result<Self> {
        if !(bezout_tol > 0.0 && bezout_tol < 1.0) {
            return Err(Error::InvalidTolerance { value: bezout_tol });
        }
        if num.nvars() != den.nvars() {
            return Err(Error::NvarsMismatch { left: num.nvars(), right: den.nvars() });
        }
        if num.nvars() != grid.nvars() {
            return Err(Error::NvarsMismatch { left: num.nvars(), right: grid.nvars() });
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }

        let (evidence, coprime_gap) = match witnesses {
            Some((x, y)) => {
                let identity = num.mul(&x)?.add(&den.mul(&y)?)?;
                let residual = identity.sub(&Series::one(num.nvars()))?.l1_norm();
                if residual > bezout_tol {
                    return Err(Error::BezoutResidual { residual, tolerance: bezout_tol });
                }
                let hx = sup_norm_certified(&x, grid)?.hi;
                let hy = sup_norm_certified(&y, grid)?.hi;
                let gap = (1.0 - residual) / (hx * hx + hy * hy).sqrt();
                (CoprimenessEvidence::Witnesses { x, y, residual }, gap)
            }
            None => {
                let (m2, idx) = sweep(grid, &[&num, &den], SweepKind::Min, |v| {
                    v[0].norm_sqr() + v[1].norm_sqr()
                })?;
                let joint = m2.sqrt();
                if joint <= ZERO_WITNESS_THRESHOLD {
                    return Err(Error::CommonZero { value: joint, index: idx });
                }
                let lipschitz = num.lipschitz_constant() + den.lipschitz_constant();
                let delta = grid.covering_radius();
                let lo = (joint - lipschitz * delta).max(0.0);
                if lo <= 0.0 {
                    return Err(Error::CoprimenessInconclusive { lower_bound: lo, delta });
                }
                let bound = CertifiedBound {
                    lo,
                    hi: joint,
                    kind: crate::certified::BoundKind::InfimumModulus,
                    grid_delta: delta,
                    lipschitz,
                };
                (CoprimenessEvidence::SpectrumGap { bound }, lo)
            }
        };

        Ok(CoprimePlant { num, den, evidence, coprime_gap })
    }

    pub fn num(&self) -> &Series {
        &self.num
    }

    pub fn den(&self) -> &Series {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn evidence(&self) -> &CoprimenessEvidence {
        &self.evidence
    }

    /// Certified lower bound on sqrt(|n|^2 + |d|^2) over the polydisc.
    pub fn coprime_gap(&self) -> f64 {
        self.coprime_gap
    }

    /// The loop denominator d - n c whose invertibility decides stability.
    pub fn loop_denominator(&self, controller: &Series) -> Result<Series> {
        self.den.sub(&self.num.mul(controller)?)
    }

    /// Certified stabilization check: the feedback loop of this plant with
    /// `controller` is stable exactly when d - n c is invertible in the
    /// algebra, i.e. when its evaluation avoids zero on the polydisc.
    pub fn is_stabilized_by(
        &self,
        controller: &Series,
        grid: &PolydiscGrid,
    ) -> Result<Certificate> {
        let q = self.loop_denominator(controller)?;
        Ok(invertibility_from_bound(&min_modulus_certified(&q, grid)?))
    }

    /// Close the loop with `controller` and, if stability is proved,
    /// materialize the four closed-loop transfer entries.
    pub fn closed_loop(&self, controller: &Series, grid: &PolydiscGrid) -> Result<ClosedLoop> {
        if controller.nvars() != self.nvars() {
            return Err(Error::NvarsMismatch { left: controller.nvars(), right: self.nvars() });
        }
        let q = self.loop_denominator(controller)?;
        let bound = min_modulus_certified(&q, grid)?;
        let stable = invertibility_from_bound(&bound);

        let mut elements = None;
        if stable == Certificate::Proved {
            if let Some(inv) = loop_inverse(&q) {
                if inv.residual_bound <= LOOP_ACCEPT_RESIDUAL {
                    let w = &inv.series;
                    let sensitivity = self.den.mul(w)?;
                    let plant_sensitivity = self.num.mul(w)?;
                    let control_sensitivity = controller.mul(&sensitivity)?;
                    let complementary = sensitivity.sub(&Series::one(self.nvars()))?;
                    let inv_err = inv.inverse_error_bound();
                    let scale = self
                        .num
                        .l1_norm()
                        .max(self.den.l1_norm() * controller.l1_norm().max(1.0));
                    let element_error = inv_err * scale + 1e-12 * (1.0 + scale);
                    elements = Some(ClosedLoopElements {
                        sensitivity,
                        plant_sensitivity,
                        control_sensitivity,
                        complementary,
                        element_error,
                        inverse_residual: inv.residual_bound,
                    });
                }
            }
        }

        Ok(ClosedLoop { loop_denominator: q, bound, stable, elements })
    }
}

/// Truncated inverse of the loop denominator, sized so the geometric tail
/// meets [`LOOP_TARGET_RESIDUAL`]; `None` when the Neumann preconditions
/// fail (invertibility proofs do not imply an l1 contraction).
pub(crate) fn loop_inverse(q: &Series) -> Option<crate::neumann::NeumannInverse> {
    let c0 = q.constant_term();
    if c0.norm() == 0.0 {
        return None;
    }
    let contraction = Series::one(q.nvars())
        .sub(&q.scale(c0.inv()))
        .ok()?
        .l1_norm();
    if contraction >= 1.0 {
        return None;
    }
    let terms = terms_for_target(contraction, LOOP_TARGET_RESIDUAL, LOOP_MAX_TERMS);
    neumann_inverse(q, terms).ok()
}

/// The result of closing a feedback loop.
#[derive(Debug, Clone)]
pub struct ClosedLoop {
    /// d - n c.
    pub loop_denominator: Series,
    /// Certified enclosure of min |d - n c| over the polydisc.
    pub bound: CertifiedBound,
    /// Whether invertibility of the loop denominator was settled.
    pub stable: Certificate,
    /// The four transfer entries, present only when stability is proved
    /// and the truncated inverse met its residual target.
    pub elements: Option<ClosedLoopElements>,
}

/// Truncations of the four stable transfer entries of the loop, written
/// with w = (d - n c)^{-1}:
///
///   1/(1 - p c)  = d w      (sensitivity)
///   p/(1 - p c)  = n w      (plant input to loop output)
///   c/(1 - p c)  = c d w    (loop error to controller output)
///   p c/(1 - p c) = d w - 1 (complementary sensitivity)
#[derive(Debug, Clone)]
pub struct ClosedLoopElements {
    pub sensitivity: Series,
    pub plant_sensitivity: Series,
    pub control_sensitivity: Series,
    pub complementary: Series,
    /// l1 bound on the distance of each entry from its exact counterpart.
    pub element_error: f64,
    /// Residual bound of the truncated inverse the entries came from.
    pub inverse_residual: f64,
}

impl ClosedLoopElements {
    /// The entries arranged as the 2x2 closed-loop matrix
    /// [[1/(1-pc), p/(1-pc)], [c/(1-pc), pc/(1-pc)]].
    pub fn as_matrix(&self) -> [[&Series; 2]; 2] {
        [
            [&self.sensitivity, &self.plant_sensitivity],
            [&self.control_sensitivity, &self.complementary],
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z1z2() -> Series {
        Series::monomial(2, &[1, 1], c(1.0, 0.0)).unwrap()
    }

    /// n = z1 z2, d = (z1 z2)^2 - 1, with exact witnesses (z1 z2, -1).
    fn nominal_parts() -> (Series, Series, Series, Series) {
        let n = z1z2();
        let d = n.mul(&n).unwrap().sub(&Series::one(2)).unwrap();
        let x = z1z2();
        let y = Series::real_constant(2, -1.0);
        (n, d, x, y)
    }

    fn grid() -> PolydiscGrid {
        PolydiscGrid::new(2, 7, 44).unwrap()
    }

    #[test]
    fn witnessed_plant_has_exact_identity() {
        let (n, d, x, y) = nominal_parts();
        let p = CoprimePlant::new(n, d, Some((x, y)), &grid()).unwrap();
        match p.evidence() {
            CoprimenessEvidence::Witnesses { residual, .. } => assert_eq!(*residual, 0.0),
            other => panic!("expected witness evidence, got {other:?}"),
        }
        // sup|x| = sup|y| = 1, so the gap is 1/sqrt(2).
        assert!((p.coprime_gap() - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-12);
    }

    #[test]
    fn gap_route_proves_the_same_plant() {
        let (n, d, _, _) = nominal_parts();
        let p = CoprimePlant::new(n, d, None, &grid()).unwrap();
        // min sqrt(|w|^2 + |w^2-1|^2) over the disc is sqrt(3)/2 = 0.866...;
        // the certified bound sits below it by the Lipschitz spread.
        assert!(p.coprime_gap() > 0.2, "gap = {}", p.coprime_gap());
        assert!(p.coprime_gap() < 0.87);
    }

    #[test]
    fn bad_witnesses_are_rejected() {
        let (n, d, _, _) = nominal_parts();
        let err = CoprimePlant::new(
            n,
            d,
            Some((Series::one(2), Series::one(2))),
            &grid(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::BezoutResidual { .. }));
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let err = CoprimePlant::new(z1z2(), Series::zero(2), None, &grid()).unwrap_err();
        assert!(matches!(err, Error::ZeroDenominator));
    }

    #[test]
    fn shared_zero_is_refuted() {
        // n = d = 1 - z1 z2 vanish together at (1, 1), a grid point.
        let f = Series::one(2).sub(&z1z2()).unwrap();
        let err = CoprimePlant::new(f.clone(), f, None, &grid()).unwrap_err();
        assert!(matches!(err, Error::CommonZero { .. }));
    }

    #[test]
    fn coarse_grid_is_inconclusive_for_near_degenerate_factors() {
        // n = 0.05 (1 - z1 z2) and d = 1 - z1 z2 + 0.05: no common zero,
        // but the joint modulus dips to ~0.05 near (1, 1) while the
        // Lipschitz spread at this coarse grid is far larger.
        let f = Series::one(2).sub(&z1z2()).unwrap();
        let n = f.scale(c(0.05, 0.0));
        let d = f.add(&Series::real_constant(2, 0.05)).unwrap();
        let coarse = PolydiscGrid::new(2, 2, 6).unwrap();
        let err = CoprimePlant::new(n, d, None, &coarse).unwrap_err();
        assert!(matches!(err, Error::CoprimenessInconclusive { .. }));
    }

    #[test]
    fn tolerance_must_be_sane() {
        let (n, d, x, y) = nominal_parts();
        let err =
            CoprimePlant::with_tolerance(n, d, Some((x, y)), &grid(), 2.0).unwrap_err();
        assert!(matches!(err, Error::InvalidTolerance { value } if value == 2.0));
    }

    #[test]
    fn closed_loop_of_stabilizing_controller() {
        let (n, d, x, y) = nominal_parts();
        let p = CoprimePlant::new(n, d, Some((x, y)), &grid()).unwrap();
        let ctl = z1z2();
        // d - n c = (z1 z2)^2 - 1 - (z1 z2)^2 = -1: invertible on the nose.
        let lp = p.closed_loop(&ctl, &grid()).unwrap();
        assert_eq!(lp.stable, Certificate::Proved);
        assert_eq!(lp.bound.hi, 1.0);
        assert_eq!(lp.loop_denominator.num_terms(), 1);

        let els = lp.elements.expect("stable loop must materialize entries");
        // Exact entries: d w = 1 - (z1 z2)^2, n w = -z1 z2,
        // c d w = z1 z2 - (z1 z2)^3, d w - 1 = -(z1 z2)^2.
        assert!(els.sensitivity.approx_eq(
            &Series::one(2)
                .sub(&z1z2().mul(&z1z2()).unwrap())
                .unwrap(),
            1e-12
        ));
        assert!(els.plant_sensitivity.approx_eq(&z1z2().neg(), 1e-12));
        assert!(els.complementary.approx_eq(&z1z2().mul(&z1z2()).unwrap().neg(), 1e-12));
        assert!(els.element_error < 1e-9);
        let m = els.as_matrix();
        assert!(std::ptr::eq(m[0][0], &els.sensitivity));
    }

    #[test]
    fn closed_loop_entries_match_pointwise_formulas() {
        let (n, d, x, y) = nominal_parts();
        let g = grid();
        let p = CoprimePlant::new(n.clone(), d.clone(), Some((x, y)), &g).unwrap();
        let ctl = Series::monomial(2, &[1, 1], c(0.4, 0.0)).unwrap();
        let lp = p.closed_loop(&ctl, &g).unwrap();
        assert_eq!(lp.stable, Certificate::Proved);
        let els = lp.elements.unwrap();

        let pts = [
            [c(0.3, 0.2), c(-0.5, 0.1)],
            [c(0.0, 0.0), c(0.9, 0.0)],
            [c(-0.7, -0.6), c(0.2, -0.9)],
        ];
        for pt in pts {
            let nv = n.eval(&pt).unwrap();
            let dv = d.eval(&pt).unwrap();
            let cv = ctl.eval(&pt).unwrap();
            let qv = dv - nv * cv;
            let tol = els.element_error + 1e-9;
            assert!((els.sensitivity.eval(&pt).unwrap() - dv / qv).norm() <= tol);
            assert!((els.plant_sensitivity.eval(&pt).unwrap() - nv / qv).norm() <= tol);
            assert!((els.control_sensitivity.eval(&pt).unwrap() - cv * dv / qv).norm() <= tol);
            assert!(
                (els.complementary.eval(&pt).unwrap() - (dv / qv - 1.0)).norm() <= tol
            );
        }
    }

    #[test]
    fn destabilizing_controller_is_refuted() {
        let (n, d, x, y) = nominal_parts();
        let g = grid();
        let p = CoprimePlant::new(n, d, Some((x, y)), &g).unwrap();
        // c = 2 z1 z2 gives d - n c = -1 - (z1 z2)^2, vanishing at
        // z1 z2 = i, which the grid's quarter-turn angles contain.
        let ctl = Series::monomial(2, &[1, 1], c(2.0, 0.0)).unwrap();
        assert_eq!(p.is_stabilized_by(&ctl, &g).unwrap(), Certificate::Disproved);
        let lp = p.closed_loop(&ctl, &g).unwrap();
        assert_eq!(lp.stable, Certificate::Disproved);
        assert!(lp.elements.is_none());
    }

    #[test]
    fn stabilization_verdicts_match_closed_loop() {
        let (n, d, x, y) = nominal_parts();
        let g = grid();
        let p = CoprimePlant::new(n, d, Some((x, y)), &g).unwrap();
        for coef in [0.0, 0.5, 1.0, 1.5] {
            let ctl = Series::monomial(2, &[1, 1], c(coef, 0.0)).unwrap();
            let direct = p.is_stabilized_by(&ctl, &g).unwrap();
            let looped = p.closed_loop(&ctl, &g).unwrap().stable;
            assert_eq!(direct, looped);
        }
    }
}
