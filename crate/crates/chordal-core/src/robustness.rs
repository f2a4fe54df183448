//! Robustness margins around a certifiably stabilized nominal plant.
//!
//! The guarantee implemented here: if a stable controller c stabilizes the
//! nominal plant p0, then with k an upper bound on sup|c| and g an upper
//! bound on sup of the stable closed-loop plant p0/(1 - c p0), every plant
//! within chordal distance
//!
//!   margin = (1/3) min( 1, 1/g, 1/(k (1 + k g)) )
//!
//! of p0 is stabilized by the same controller. Certification of a
//! concrete perturbed plant compares a certified upper bound on its
//! distance to p0 against this margin; an independent grid check of the
//! perturbed loop denominator cross-validates every verdict.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::certified::{
    invertibility_from_bound, min_modulus_certified, sup_norm_certified, BoundKind, Certificate,
    CertifiedBound,
};
use crate::error::{Error, Result};
use crate::grid::{sweep, PolydiscGrid, SweepKind};
use crate::kappa::{kappa, KappaEstimate};
use crate::plant::{loop_inverse, CoprimePlant};
use crate::series::Series;

/// Residual above which the truncated closed-loop inverse is not trusted
/// for the g bound and the certified ratio sweep takes over.
const G_ACCEPT_RESIDUAL: f64 = 1e-6;

/// The certified ingredients of the robustness margin.
#[derive(Debug, Clone, Serialize)]
pub struct MarginReport {
    /// Enclosure of sup|c|.
    pub k: CertifiedBound,
    /// Enclosure of sup|p0 / (1 - c p0)|.
    pub g: CertifiedBound,
    /// (1/3) min(1, 1/g, 1/(k(1+kg))) evaluated at the conservative ends.
    pub margin: f64,
    /// Stability certificate of the nominal loop (always proved when a
    /// report is returned; failure is an error instead).
    pub stabilizes_nominal: Certificate,
    pub grid_delta: f64,
}

/// Robustness margin of the loop (p0, c).
///
/// Errors unless the nominal loop denominator d0 - n0 c is certifiably
/// invertible: without that the closed loop has no stable meaning and no
/// margin exists. k and g are taken at the upper ends of their
/// enclosures, so the margin can only be smaller than the exact one.
pub fn margin(p0: &CoprimePlant, c: &Series, grid: &PolydiscGrid) -> Result<MarginReport> {
    if c.nvars() != p0.nvars() {
        return Err(Error::NvarsMismatch { left: c.nvars(), right: p0.nvars() });
    }
    if p0.nvars() != grid.nvars() {
        return Err(Error::NvarsMismatch { left: p0.nvars(), right: grid.nvars() });
    }
    let q = p0.loop_denominator(c)?;
    let qb = min_modulus_certified(&q, grid)?;
    let stable = invertibility_from_bound(&qb);
    if stable != Certificate::Proved {
        return Err(Error::NominalNotStabilized { status: stable });
    }
    let k = sup_norm_certified(c, grid)?;
    let g = stable_plant_sup(p0, &q, &qb, grid)?;
    Ok(MarginReport {
        margin: margin_from(k.hi, g.hi),
        k,
        g,
        stabilizes_nominal: stable,
        grid_delta: grid.covering_radius(),
    })
}

/// (1/3) min(1, 1/g, 1/(k(1+kg))); zero denominators drop their terms,
/// matching the limits k -> 0 or g -> 0 of the formula.
fn margin_from(k: f64, g: f64) -> f64 {
    let mut t = 1.0f64;
    if g > 0.0 {
        t = t.min(1.0 / g);
    }
    if k > 0.0 {
        t = t.min(1.0 / (k * (1.0 + k * g)));
    }
    t / 3.0
}

/// Certified enclosure of sup |n0 / (d0 - n0 c)|, the norm of the stable
/// closed-loop plant.
///
/// Preferred route: materialize a truncated inverse w of the loop
/// denominator, take the certified sup of n0 * w, and widen by
/// ||n0||_1 * ||w - q^{-1}||_1. When the truncation cannot reach its
/// residual target, fall back to a direct grid sweep of |n0|/|q| with a
/// quotient-rule Lipschitz constant over the certified minimum of |q|.
fn stable_plant_sup(
    p0: &CoprimePlant,
    q: &Series,
    qb: &CertifiedBound,
    grid: &PolydiscGrid,
) -> Result<CertifiedBound> {
    if let Some(inv) = loop_inverse(q) {
        if inv.residual_bound <= G_ACCEPT_RESIDUAL {
            let g0 = p0.num().mul(&inv.series)?;
            let b = sup_norm_certified(&g0, grid)?;
            let slack = p0.num().l1_norm() * inv.inverse_error_bound();
            return Ok(CertifiedBound {
                lo: (b.lo - slack).max(0.0),
                hi: b.hi + slack,
                kind: BoundKind::Supremum,
                grid_delta: b.grid_delta,
                lipschitz: b.lipschitz,
            });
        }
    }

    let (s2, _) = sweep(grid, &[p0.num(), q], SweepKind::Max, |v| {
        v[0].norm_sqr() / v[1].norm_sqr()
    })?;
    let lo = s2.sqrt();
    let n_sup = sup_norm_certified(p0.num(), grid)?;
    let q_floor = qb.lo;
    let lipschitz = p0.num().lipschitz_constant() / q_floor
        + n_sup.hi * q.lipschitz_constant() / (q_floor * q_floor);
    let hi = (lo + lipschitz * grid.covering_radius())
        .min(n_sup.hi / q_floor)
        .max(lo);
    Ok(CertifiedBound {
        lo,
        hi,
        kind: BoundKind::Supremum,
        grid_delta: grid.covering_radius(),
        lipschitz,
    })
}

/// Outcome of comparing a certified distance against the margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// The certified distance upper bound lies strictly below the margin:
    /// the controller provably stabilizes the perturbed plant.
    CertifiedStable,
    /// No certificate at this resolution. Says nothing about instability.
    NotCertified,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedStable => write!(f, "certified-stable"),
            Verdict::NotCertified => write!(f, "not-certified"),
        }
    }
}

/// A full certification record for one perturbed plant.
#[derive(Debug, Clone, Serialize)]
pub struct RobustnessCertificate {
    pub kappa: KappaEstimate,
    pub margin: MarginReport,
    pub verdict: Verdict,
    /// Direct grid check of the perturbed loop denominator, computed
    /// regardless of the verdict as a cross-validation.
    pub independent_check: Certificate,
    /// Grid refinement factor the verdict was reached at (1 = base grid).
    pub refinement: usize,
}

/// Certify that `c` stabilizes `p` because `p` sits within the margin
/// around `p0`, all at a fixed grid.
pub fn certify(
    p: &CoprimePlant,
    p0: &CoprimePlant,
    c: &Series,
    grid: &PolydiscGrid,
) -> Result<RobustnessCertificate> {
    certify_at(p, p0, c, grid, 1)
}

fn certify_at(
    p: &CoprimePlant,
    p0: &CoprimePlant,
    c: &Series,
    grid: &PolydiscGrid,
    refinement: usize,
) -> Result<RobustnessCertificate> {
    let m = margin(p0, c, grid)?;
    let k = kappa(p, p0, grid)?;
    let verdict = if k.upper < m.margin { Verdict::CertifiedStable } else { Verdict::NotCertified };
    let independent_check = p.is_stabilized_by(c, grid)?;
    Ok(RobustnessCertificate { kappa: k, margin: m, verdict, independent_check, refinement })
}

/// [`certify`], retrying on refined grids until the verdict is positive,
/// provably unreachable, or the refinement budget is spent.
///
/// Refinement multiplies both grid step counts by the factor, shrinking
/// the covering radius and with it the Lipschitz slack in the distance
/// upper bound. Once the attained lower bound itself reaches the margin,
/// no resolution can certify and the search stops early.
pub fn certify_with_refinement(
    p: &CoprimePlant,
    p0: &CoprimePlant,
    c: &Series,
    grid: &PolydiscGrid,
    max_factor: usize,
) -> Result<RobustnessCertificate> {
    assert!(max_factor >= 1, "refinement budget must be at least 1");
    let mut last = None;
    for factor in 1..=max_factor {
        let fine;
        let g = if factor == 1 {
            grid
        } else {
            fine = grid.refined(factor)?;
            &fine
        };
        let cert = certify_at(p, p0, c, g, factor)?;
        let hopeless = cert.kappa.lower >= cert.margin.margin;
        if cert.verdict == Verdict::CertifiedStable || hopeless {
            return Ok(cert);
        }
        last = Some(cert);
    }
    Ok(last.expect("at least one certification attempt was made"))
}

/// The worked two-variable example family.
pub mod bidisc {
    use super::*;

    fn z1z2() -> Series {
        Series::monomial(2, &[1, 1], Complex64::new(1.0, 0.0)).expect("exponent length matches")
    }

    /// Numerator of the nominal plant: z1 z2.
    pub fn nominal_numerator() -> Series {
        z1z2()
    }

    /// Denominator of the nominal plant: (z1 z2)^2 - 1.
    pub fn nominal_denominator() -> Series {
        let m = z1z2();
        m.mul(&m)
            .and_then(|s| s.sub(&Series::one(2)))
            .expect("dimensions agree by construction")
    }

    /// The stabilizing controller c = z1 z2.
    pub fn controller() -> Series {
        z1z2()
    }

    /// The nominal plant z1 z2 / ((z1 z2)^2 - 1), with the exact Bezout
    /// witnesses (z1 z2, -1): n (z1 z2) + d (-1) = 1 with zero residual.
    pub fn nominal_plant(grid: &PolydiscGrid) -> Result<CoprimePlant> {
        CoprimePlant::new(
            nominal_numerator(),
            nominal_denominator(),
            Some((z1z2(), Series::real_constant(2, -1.0))),
            grid,
        )
    }

    /// The shifted plant (z1 z2 - alpha) / ((z1 z2) ^ 2 - 1) for
    /// |alpha| < 1, with witnesses ((z1 z2 + alpha)/(1 - alpha^2),
    /// -1/(1 - alpha^2)); the identity telescopes to (1-alpha^2)/(1-alpha^2).
    pub fn shifted_plant(alpha: f64, grid: &PolydiscGrid) -> Result<CoprimePlant> {
        if !(alpha.is_finite() && alpha.abs() < 1.0) {
            return Err(Error::AlphaOutOfRange { alpha });
        }
        let m = z1z2();
        let n = m.sub(&Series::real_constant(2, alpha))?;
        let s = 1.0 / (1.0 - alpha * alpha);
        let x = m.add(&Series::real_constant(2, alpha))?.scale(Complex64::new(s, 0.0));
        let y = Series::real_constant(2, -s);
        CoprimePlant::new(n, nominal_denominator(), Some((x, y)), grid)
    }

    /// Closed-form bound on the distance of the shifted plant from the
    /// nominal one: kappa(p_alpha, p0) <= (2/sqrt(3)) |alpha|.
    pub fn distance_bound(alpha: f64) -> f64 {
        2.0 / 3.0f64.sqrt() * alpha.abs()
    }

    /// Largest shift the closed-form bound certifies against the margin
    /// 1/6 of this family: 1/(4 sqrt(3)), about 0.1443.
    pub fn guaranteed_threshold() -> f64 {
        1.0 / (4.0 * 3.0f64.sqrt())
    }
}

/// One row of the example-family sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub kappa_lower: f64,
    pub kappa_upper: f64,
    /// The closed-form bound (2/sqrt(3)) |alpha| for comparison.
    pub distance_bound: f64,
    pub margin: f64,
    pub verdict: Verdict,
    pub independent_check: Certificate,
    pub refinement: usize,
}

/// The example-family sweep over a list of shifts.
#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub rows: Vec<SweepRow>,
    pub guaranteed_threshold: f64,
    pub grid_delta: f64,
}

/// Sweep the example family: for each shift, certify against the nominal
/// margin with up to `max_refinement`-fold grid refinement, and check the
/// perturbed loop directly at the base grid.
///
/// Margins are cached per refinement level; they depend on the grid and
/// the nominal pair only, not on the shift.
pub fn example_sweep(
    alphas: &[f64],
    grid: &PolydiscGrid,
    max_refinement: usize,
) -> Result<ExampleReport> {
    assert!(max_refinement >= 1, "refinement budget must be at least 1");
    let p0 = bidisc::nominal_plant(grid)?;
    let c = bidisc::controller();

    let mut grids: Vec<PolydiscGrid> = vec![grid.clone()];
    let mut margins: Vec<MarginReport> = vec![margin(&p0, &c, grid)?];

    let mut rows = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let pa = bidisc::shifted_plant(alpha, grid)?;
        let mut chosen: Option<(KappaEstimate, usize)> = None;
        for factor in 1..=max_refinement {
            while grids.len() < factor {
                let next = grid.refined(grids.len() + 1)?;
                margins.push(margin(&p0, &c, &next)?);
                grids.push(next);
            }
            let k = kappa(&pa, &p0, &grids[factor - 1])?;
            let done = k.upper < margins[factor - 1].margin
                || k.lower >= margins[factor - 1].margin
                || factor == max_refinement;
            if done {
                chosen = Some((k, factor));
                break;
            }
        }
        let (k, factor) = chosen.expect("the refinement loop always selects an estimate");
        let m = &margins[factor - 1];
        let verdict =
            if k.upper < m.margin { Verdict::CertifiedStable } else { Verdict::NotCertified };
        let independent_check = pa.is_stabilized_by(&c, grid)?;
        rows.push(SweepRow {
            alpha,
            kappa_lower: k.lower,
            kappa_upper: k.upper,
            distance_bound: bidisc::distance_bound(alpha),
            margin: m.margin,
            verdict,
            independent_check,
            refinement: factor,
        });
    }

    Ok(ExampleReport {
        rows,
        guaranteed_threshold: bidisc::guaranteed_threshold(),
        grid_delta: grid.covering_radius(),
    })
}

/// Bucket counts from the randomized soundness harness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoundnessReport {
    pub trials: usize,
    pub seed: u64,
    /// Margin of the nominal pair at the sweep grid.
    pub margin: f64,
    pub certified_stable: usize,
    /// Certified by the margin yet refuted by the direct check: a
    /// soundness violation. Must stay zero.
    pub certified_not_stable: usize,
    /// Certified by the margin while the direct check was inconclusive at
    /// this grid (the guarantee still holds; the cross-check was coarse).
    pub certified_undecided: usize,
    pub uncertified_stable: usize,
    pub uncertified_not_stable: usize,
    pub uncertified_undecided: usize,
    /// Draws whose perturbed factors could not be admitted as a certified
    /// coprime plant at the harness tolerances.
    pub construction_failures: usize,
}

impl SoundnessReport {
    pub fn classified(&self) -> usize {
        self.certified_stable
            + self.certified_not_stable
            + self.certified_undecided
            + self.uncertified_stable
            + self.uncertified_not_stable
            + self.uncertified_undecided
            + self.construction_failures
    }
}

/// Randomized soundness harness for the margin guarantee.
///
/// Draws perturbations e, f of the example family's nominal factors,
/// admits p = (n0 + e)/(d0 + f) with witnesses repaired through a Neumann
/// inverse of the perturbed Bezout identity, and compares the certified
/// verdict (distance upper bound vs margin) against an independent grid
/// check of the perturbed loop denominator. A draw that is certified
/// within the margin but refuted by the direct check would witness a
/// soundness bug; the harness counts exactly that.
///
/// Identical (trials, seed, grid) inputs reproduce identical reports.
pub fn empirical_soundness(
    trials: usize,
    seed: u64,
    grid: &PolydiscGrid,
) -> Result<SoundnessReport> {
    // Witness sup norms only need a valid covering grid, not a fine one;
    // the certified quantities that decide verdicts all use `grid`.
    let construction_grid = PolydiscGrid::new(2, 8, 32)?;
    let p0 = bidisc::nominal_plant(&construction_grid)?;
    let c = bidisc::controller();
    let m = margin(&p0, &c, grid)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SoundnessReport {
        trials,
        seed,
        margin: m.margin,
        certified_stable: 0,
        certified_not_stable: 0,
        certified_undecided: 0,
        uncertified_stable: 0,
        uncertified_not_stable: 0,
        uncertified_undecided: 0,
        construction_failures: 0,
    };

    for _ in 0..trials {
        let e = random_perturbation(&mut rng)?;
        let f = random_perturbation(&mut rng)?;
        let p = match perturbed_plant(&e, &f, &construction_grid) {
            Ok(p) => p,
            Err(_) => {
                report.construction_failures += 1;
                continue;
            }
        };
        let k = kappa(&p, &p0, grid)?;
        let certified = k.upper < m.margin;
        let direct = p.is_stabilized_by(&c, grid)?;
        match (certified, direct) {
            (true, Certificate::Proved) => report.certified_stable += 1,
            (true, Certificate::Disproved) => report.certified_not_stable += 1,
            (true, Certificate::Inconclusive) => report.certified_undecided += 1,
            (false, Certificate::Proved) => report.uncertified_stable += 1,
            (false, Certificate::Disproved) => report.uncertified_not_stable += 1,
            (false, Certificate::Inconclusive) => report.uncertified_undecided += 1,
        }
    }
    Ok(report)
}

/// A sparse random polynomial of degree at most 3 per variable, rescaled
/// to an l1 norm drawn uniformly from [0, 0.05]. Perturbations this size
/// leave the loop denominator far from zero, so the interesting split is
/// between draws the distance certificate covers at this resolution and
/// draws it must decline.
fn random_perturbation(rng: &mut ChaCha8Rng) -> Result<Series> {
    let mut terms = Vec::new();
    for k1 in 0..4u32 {
        for k2 in 0..4u32 {
            // Consume randomness in a fixed pattern so inclusion decisions
            // never shift the stream for later draws.
            let include = rng.random::<f64>() < 0.3;
            let re = rng.random::<f64>() * 2.0 - 1.0;
            let im = rng.random::<f64>() * 2.0 - 1.0;
            if include {
                terms.push((vec![k1, k2], Complex64::new(re, im)));
            }
        }
    }
    let target = rng.random::<f64>() * 0.05;
    let s = Series::from_terms(2, terms)?;
    let l1 = s.l1_norm();
    if l1 == 0.0 {
        return Ok(s);
    }
    Ok(s.scale(Complex64::new(target / l1, 0.0)))
}

/// Admit (n0 + e)/(d0 + f) with witnesses x0 v, y0 v where v inverts the
/// perturbed identity u = (n0+e) x0 + (d0+f) y0 = 1 + (e x0 + f y0).
fn perturbed_plant(
    e: &Series,
    f: &Series,
    construction_grid: &PolydiscGrid,
) -> Result<CoprimePlant> {
    let n = bidisc::nominal_numerator().add(e)?;
    let d = bidisc::nominal_denominator().add(f)?;
    let x0 = bidisc::nominal_numerator();
    let y0 = Series::real_constant(2, -1.0);
    let u = n.mul(&x0)?.add(&d.mul(&y0)?)?;
    let defect = u.sub(&Series::one(2))?.l1_norm();
    if defect >= 0.9 {
        return Err(Error::NotNeumannInvertible {
            reason: format!("Bezout defect {defect:.3} too large to repair"),
        });
    }
    let inv = crate::neumann::neumann_inverse(
        &u,
        crate::neumann::terms_for_target(defect, 1e-11, 48),
    )?;
    let x = x0.mul(&inv.series)?;
    let y = y0.mul(&inv.series)?;
    CoprimePlant::new(n, d, Some((x, y)), construction_grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PolydiscGrid {
        PolydiscGrid::new(2, 7, 44).unwrap()
    }

    #[test]
    fn margin_of_the_example_family_is_one_sixth() {
        let g = grid();
        let p0 = bidisc::nominal_plant(&g).unwrap();
        let c = bidisc::controller();
        let m = margin(&p0, &c, &g).unwrap();
        // k and g are exactly 1 (monomial sup attained on the grid, l1 cap
        // closing the enclosure), so the margin is 1/6 up to the tiny
        // inverse-residual allowance, and never above it.
        assert_eq!(m.k.lo, 1.0);
        assert_eq!(m.k.hi, 1.0);
        assert!(m.g.width() <= 1e-9);
        assert!(m.g.contains(1.0));
        assert!(m.margin <= 1.0 / 6.0 + 1e-15);
        assert!(m.margin >= 1.0 / 6.0 - 1e-9);
        assert_eq!(m.stabilizes_nominal, Certificate::Proved);
    }

    #[test]
    fn margin_requires_a_stabilized_nominal_loop() {
        let g = grid();
        let p0 = bidisc::nominal_plant(&g).unwrap();
        // c = 2 z1 z2 pushes the loop denominator to -1 - (z1 z2)^2,
        // which vanishes on the grid.
        let c = bidisc::controller().scale(Complex64::new(2.0, 0.0));
        let err = margin(&p0, &c, &g).unwrap_err();
        assert!(matches!(
            err,
            Error::NominalNotStabilized { status: Certificate::Disproved }
        ));
    }

    #[test]
    fn margin_formula_cases() {
        // k = 1, g = 2: min(1, 0.5, 1/3) = 1/3, margin 1/9.
        assert!((margin_from(1.0, 2.0) - 1.0 / 9.0).abs() <= 1e-15);
        // k = g = 1: min(1, 1, 1/2) = 1/2, margin 1/6.
        assert_eq!(margin_from(1.0, 1.0), 1.0 / 6.0);
        // k = 0 (zero controller): min(1, 1/g).
        assert!((margin_from(0.0, 4.0) - 1.0 / 12.0).abs() <= 1e-15);
        // g = 0 (zero plant): min(1, 1/k).
        assert!((margin_from(2.0, 0.0) - 1.0 / 6.0).abs() <= 1e-15);
    }

    #[test]
    fn one_variable_analog_certifies_small_shift() {
        // Same structure one variable down: p0 = z/(z^2-1), c = z. The
        // axis is cheap to refine, so certification lands at the base
        // grid here and after one refinement on the coarser base below.
        let g = PolydiscGrid::new(1, 200, 1200).unwrap();
        let z = Series::variable(1, 0);
        let d = z.mul(&z).unwrap().sub(&Series::one(1)).unwrap();
        let p0 = CoprimePlant::new(
            z.clone(),
            d.clone(),
            Some((z.clone(), Series::real_constant(1, -1.0))),
            &g,
        )
        .unwrap();
        let alpha = 0.05;
        let s = 1.0 / (1.0 - alpha * alpha);
        let pa = CoprimePlant::new(
            z.sub(&Series::real_constant(1, alpha)).unwrap(),
            d,
            Some((
                z.add(&Series::real_constant(1, alpha)).unwrap().scale(Complex64::new(s, 0.0)),
                Series::real_constant(1, -s),
            )),
            &g,
        )
        .unwrap();
        let cert = certify(&pa, &p0, &z, &g).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedStable);
        assert_eq!(cert.independent_check, Certificate::Proved);
        assert_eq!(cert.refinement, 1);
        assert!(cert.kappa.upper < cert.margin.margin);

        let coarse = PolydiscGrid::new(1, 12, 72).unwrap();
        let refined = certify_with_refinement(&pa, &p0, &z, &coarse, 4).unwrap();
        assert_eq!(refined.verdict, Verdict::CertifiedStable);
        assert!(refined.refinement > 1, "coarse base should need refinement");
    }

    #[test]
    fn certify_reports_hopeless_shifts_without_refining() {
        let g = grid();
        let p0 = bidisc::nominal_plant(&g).unwrap();
        let pa = bidisc::shifted_plant(0.5, &g).unwrap();
        let cert = certify_with_refinement(&pa, &p0, &bidisc::controller(), &g, 4).unwrap();
        assert_eq!(cert.verdict, Verdict::NotCertified);
        assert_eq!(cert.refinement, 1, "lower bound already beats the margin");
        assert!(cert.kappa.lower >= cert.margin.margin);
        // Outside the certified radius, yet the direct check still proves
        // stability: the margin is sufficient, not necessary.
        assert_eq!(cert.independent_check, Certificate::Proved);
    }

    #[test]
    fn example_sweep_certifies_small_and_rejects_large() {
        let g = grid();
        let report = example_sweep(&[0.02, 0.25], &g, 2).unwrap();
        assert_eq!(report.rows.len(), 2);

        let small = &report.rows[0];
        assert_eq!(small.verdict, Verdict::CertifiedStable);
        assert_eq!(small.refinement, 2);
        assert_eq!(small.independent_check, Certificate::Proved);

        let large = &report.rows[1];
        assert_eq!(large.verdict, Verdict::NotCertified);
        assert_eq!(large.refinement, 1);
        assert_eq!(large.independent_check, Certificate::Proved);

        for row in &report.rows {
            assert!(row.kappa_lower <= row.distance_bound + 1e-9);
            assert!(row.kappa_lower <= row.kappa_upper);
        }
        assert!((report.guaranteed_threshold - 0.14433756729740643).abs() <= 1e-15);
    }

    #[test]
    fn shifted_plant_rejects_out_of_range_alpha() {
        let g = grid();
        for alpha in [1.0, -1.5, f64::NAN] {
            assert!(matches!(
                bidisc::shifted_plant(alpha, &g),
                Err(Error::AlphaOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn distance_bound_and_threshold_values() {
        assert!((bidisc::distance_bound(0.1) - 0.11547005383792516).abs() <= 1e-15);
        assert!((bidisc::guaranteed_threshold() - 0.14433756729740643).abs() <= 1e-15);
        // The threshold is where the closed-form bound meets the margin.
        let t = bidisc::guaranteed_threshold();
        assert!((bidisc::distance_bound(t) - 1.0 / 6.0).abs() <= 1e-15);
    }

    #[test]
    fn soundness_harness_smoke() {
        let g = grid();
        let r = empirical_soundness(6, 3, &g).unwrap();
        assert_eq!(r.trials, 6);
        assert_eq!(r.classified(), 6);
        assert_eq!(r.certified_not_stable, 0);
        assert!((r.margin - 1.0 / 6.0).abs() <= 1e-9);
    }

    #[test]
    fn soundness_harness_is_deterministic() {
        let g = grid();
        let a = empirical_soundness(4, 11, &g).unwrap();
        let b = empirical_soundness(4, 11, &g).unwrap();
        assert_eq!(a, b);
    }
}
