//! Truncated Neumann-series inversion in the coefficient algebra.
//!
//! For f with f(0) != 0, write f = f(0) (1 - g) with g = 1 - f / f(0).
//! When r = ||g||_1 < 1 the inverse is (1/f(0)) sum g^k, and truncating
//! after `max_terms` powers leaves a geometric tail r^(max_terms + 1).
//! The returned residual bound is computed from the truncation that was
//! actually produced — ||f * inv - 1||_1 plus a rounding allowance — so it
//! stays honest about floating-point and coefficient-pruning effects
//! instead of quoting the exact-arithmetic tail alone.


use crate::error::{Error, Result};
use crate::series::Series;

/// A truncated inverse together with the certificates that justify it.
#[derive(Debug, Clone)]
pub struct NeumannInverse {
    /// The truncated inverse series.
    pub series: Series,
    /// Upper bound on ||f * series - 1||_1.
    pub residual_bound: f64,
    /// The contraction factor r = ||1 - f/f(0)||_1 < 1.
    pub contraction: f64,
    /// Number of Neumann powers summed (the k in g^0 + ... + g^k).
    pub terms_used: usize,
}

impl NeumannInverse {
    /// Upper bound on ||f^{-1} - series||_1, derived from the residual:
    /// f^{-1} - series = f^{-1} (1 - f * series), and ||f^{-1}||_1 is at
    /// most ||series||_1 / (1 - residual) once the residual is below one.
    pub fn inverse_error_bound(&self) -> f64 {
        if self.residual_bound >= 1.0 {
            return f64::INFINITY;
        }
        self.series.l1_norm() * self.residual_bound / (1.0 - self.residual_bound)
    }
}

/// Invert `f` by a truncated Neumann series with `max_terms` powers.
///
/// Fails unless f(0) is nonzero and ||1 - f/f(0)||_1 < 1; under those
/// conditions f is invertible in the algebra and the truncation converges
/// geometrically at rate `contraction`.
pub fn neumann_inverse(f: &Series, max_terms: usize) -> Result<NeumannInverse> {
    let c0 = f.constant_term();
    if c0.norm() == 0.0 {
        return Err(Error::NotNeumannInvertible {
            reason: "constant term is zero".into(),
        });
    }
    let scaled = f.scale(c0.inv());
    let g = Series::one(f.nvars()).sub(&scaled)?;
    let contraction = g.l1_norm();
    if contraction >= 1.0 {
        return Err(Error::NotNeumannInvertible {
            reason: format!("l1 contraction factor {contraction:.6} is not below 1"),
        });
    }

    let mut partial = Series::one(f.nvars());
    let mut power = Series::one(f.nvars());
    for _ in 0..max_terms {
        if power.is_zero() {
            break;
        }
        power = power.mul(&g)?;
        partial = partial.add(&power)?;
    }
    let series = partial.scale(c0.inv());

    // Residual of the series we actually return, plus an allowance for the
    // rounding and small-coefficient pruning inside the products above.
    let residual = f
        .mul(&series)?
        .sub(&Series::one(f.nvars()))?
        .l1_norm();
    let allowance = 1e-12 * (1.0 + f.l1_norm() * series.l1_norm());
    let residual_bound = residual + allowance;

    Ok(NeumannInverse { series, residual_bound, contraction, terms_used: max_terms })
}

/// Smallest number of powers that pushes the exact-arithmetic tail
/// r^(k+1) below `target`, capped at `cap`.
pub fn terms_for_target(contraction: f64, target: f64, cap: usize) -> usize {
    if contraction <= 0.0 {
        return 0;
    }
    if target <= 0.0 || contraction >= 1.0 {
        return cap;
    }
    let k = (target.ln() / contraction.ln()).ceil() as i64;
    (k.max(1) as usize).min(cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_inverts_exactly() {
        let f = Series::real_constant(1, 2.0);
        let inv = neumann_inverse(&f, 10).unwrap();
        assert_eq!(inv.contraction, 0.0);
        assert_eq!(inv.series.coefficient(&[0]), c(0.5, 0.0));
        assert!(inv.residual_bound <= 1e-11);
    }

    #[test]
    fn affine_example_matches_geometric_series() {
        // (1 - 0.5 z1 z2)^{-1} truncated at 20 powers: residual is the
        // geometric tail 0.5^21, comfortably below 1e-6.
        let f = Series::one(2)
            .sub(&Series::monomial(2, &[1, 1], c(0.5, 0.0)).unwrap())
            .unwrap();
        let inv = neumann_inverse(&f, 20).unwrap();
        assert_eq!(inv.contraction, 0.5);
        assert!(inv.residual_bound <= 1e-6);
        assert!((inv.residual_bound - 0.5f64.powi(21)).abs() <= 1e-9);
        // Coefficient of (z1 z2)^k is 0.5^k.
        assert_eq!(inv.series.coefficient(&[3, 3]), c(0.125, 0.0));
        assert_eq!(inv.series.coefficient(&[2, 1]), c(0.0, 0.0));
    }

    #[test]
    fn residual_shrinks_geometrically_with_terms() {
        let f = Series::one(1)
            .sub(&Series::monomial(1, &[1], c(0.6, 0.0)).unwrap())
            .unwrap();
        let r5 = neumann_inverse(&f, 5).unwrap().residual_bound;
        let r10 = neumann_inverse(&f, 10).unwrap().residual_bound;
        let r20 = neumann_inverse(&f, 20).unwrap().residual_bound;
        assert!(r10 < r5 * 0.1);
        assert!(r20 < r10 * 0.1);
    }

    #[test]
    fn product_with_inverse_is_close_to_one() {
        let f = Series::from_terms(
            2,
            vec![
                (vec![0, 0], c(2.0, 0.5)),
                (vec![1, 0], c(0.3, -0.2)),
                (vec![0, 2], c(-0.4, 0.1)),
            ],
        )
        .unwrap();
        let inv = neumann_inverse(&f, 60).unwrap();
        let residual = f
            .mul(&inv.series)
            .unwrap()
            .sub(&Series::one(2))
            .unwrap()
            .l1_norm();
        assert!(residual <= inv.residual_bound);
        assert!(inv.residual_bound < 1e-8, "bound was {}", inv.residual_bound);
    }

    #[test]
    fn zero_constant_term_is_rejected() {
        let f = Series::monomial(2, &[1, 1], c(1.0, 0.0)).unwrap();
        let err = neumann_inverse(&f, 10).unwrap_err();
        assert!(matches!(err, Error::NotNeumannInvertible { .. }));
    }

    #[test]
    fn weak_contraction_is_rejected() {
        // 1 - z has contraction exactly 1: the Neumann tail never decays.
        let f = Series::one(1)
            .sub(&Series::variable(1, 0))
            .unwrap();
        let err = neumann_inverse(&f, 10).unwrap_err();
        assert!(matches!(err, Error::NotNeumannInvertible { .. }));
    }

    #[test]
    fn inverse_error_bound_controls_true_gap() {
        // For 1 - 0.5 z the exact inverse has coefficients 0.5^k; compare
        // the truncated series against a much deeper truncation.
        let f = Series::one(1)
            .sub(&Series::monomial(1, &[1], c(0.5, 0.0)).unwrap())
            .unwrap();
        let coarse = neumann_inverse(&f, 12).unwrap();
        let deep = neumann_inverse(&f, 80).unwrap();
        let gap = coarse.series.sub(&deep.series).unwrap().l1_norm();
        assert!(gap <= coarse.inverse_error_bound() + 1e-12);
    }

    #[test]
    fn terms_for_target_hits_geometric_budget() {
        assert_eq!(terms_for_target(0.0, 1e-9, 512), 0);
        let k = terms_for_target(0.5, 1e-9, 512);
        assert!(0.5f64.powi(k as i32 + 1) <= 1e-9);
        assert!(0.5f64.powi(k as i32) > 1e-9 * 0.5);
        assert_eq!(terms_for_target(0.999999, 1e-9, 512), 512);
    }
}
