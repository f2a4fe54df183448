//! Absolutely convergent power series on the polydisc, truncated to
//! polynomials with complex coefficients.
//!
//! A series is stored sparsely as a map from exponent vectors to nonzero
//! coefficients. The l1 norm of the coefficient sequence is the algebra
//! norm; it dominates the sup norm on the closed polydisc and makes the
//! multiplication submultiplicative, which is what every certified bound
//! in this crate leans on.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients with modulus below this are dropped when a series is put in
/// canonical form. Keeping exact zeros out of the map makes `is_zero`,
/// term counts, and equality checks meaningful.
pub const COEFF_EPSILON: f64 = 1e-15;

/// Hard cap on the dense evaluation table, so a handful of huge exponents
/// cannot silently allocate gigabytes. 2^22 complex entries is 64 MiB.
const DENSE_COEFF_LIMIT: usize = 1 << 22;

/// A polynomial in `nvars` complex variables, sparse over exponent vectors.
#[derive(Clone, PartialEq)]
pub struct Series {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Complex64>,
}

impl Series {
    /// The zero series in `nvars` variables.
    ///
    /// Panics if `nvars` is zero; every series in this crate lives over at
    /// least one variable.
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "series need at least one variable");
        Series { nvars, terms: BTreeMap::new() }
    }

    /// The constant series `c`.
    pub fn constant(nvars: usize, c: Complex64) -> Self {
        let mut s = Series::zero(nvars);
        s.insert_term(vec![0; nvars], c);
        s
    }

    /// The multiplicative unit.
    pub fn one(nvars: usize) -> Self {
        Series::constant(nvars, Complex64::new(1.0, 0.0))
    }

    /// The real constant series `c`.
    pub fn real_constant(nvars: usize, c: f64) -> Self {
        Series::constant(nvars, Complex64::new(c, 0.0))
    }

    /// The coordinate series `z_index`.
    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range for {nvars} variables");
        let mut exp = vec![0; nvars];
        exp[index] = 1;
        let mut s = Series::zero(nvars);
        s.insert_term(exp, Complex64::new(1.0, 0.0));
        s
    }

    /// A single term `c * z^exp`.
    pub fn monomial(nvars: usize, exp: &[u32], c: Complex64) -> Result<Self> {
        if exp.len() != nvars {
            return Err(Error::PointDimensionMismatch { point: exp.len(), expected: nvars });
        }
        let mut s = Series::zero(nvars);
        s.insert_term(exp.to_vec(), c);
        Ok(s)
    }

    /// Build a series from (exponent, coefficient) pairs. Repeated exponents
    /// are summed, and the result is put in canonical form.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Complex64)>,
    {
        let mut s = Series::zero(nvars);
        for (exp, c) in terms {
            if exp.len() != nvars {
                return Err(Error::PointDimensionMismatch { point: exp.len(), expected: nvars });
            }
            *s.terms.entry(exp).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        s.canonicalize();
        Ok(s)
    }

    fn insert_term(&mut self, exp: Vec<u32>, c: Complex64) {
        if c.norm() >= COEFF_EPSILON {
            self.terms.insert(exp, c);
        }
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| c.norm() >= COEFF_EPSILON);
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], Complex64)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), *c))
    }

    /// The coefficient at `exp` (zero if the term is absent).
    pub fn coefficient(&self, exp: &[u32]) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// The constant term, i.e. the value at the origin.
    pub fn constant_term(&self) -> Complex64 {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Largest exponent per variable (all zeros for the zero series).
    pub fn max_degrees(&self) -> Vec<u32> {
        let mut degs = vec![0u32; self.nvars];
        for exp in self.terms.keys() {
            for (d, &e) in degs.iter_mut().zip(exp) {
                *d = (*d).max(e);
            }
        }
        degs
    }

    /// Total degree of the series (largest |exp|_1; zero for the zero series).
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    fn check_same_nvars(&self, rhs: &Series) -> Result<()> {
        if self.nvars != rhs.nvars {
            return Err(Error::NvarsMismatch { left: self.nvars, right: rhs.nvars });
        }
        Ok(())
    }

    /// Coefficient-wise sum.
    pub fn add(&self, rhs: &Series) -> Result<Series> {
        self.check_same_nvars(rhs)?;
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            *out.terms.entry(exp.clone()).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        out.canonicalize();
        Ok(out)
    }

    /// Coefficient-wise difference.
    pub fn sub(&self, rhs: &Series) -> Result<Series> {
        self.check_same_nvars(rhs)?;
        let mut out = self.clone();
        for (exp, c) in &rhs.terms {
            *out.terms.entry(exp.clone()).or_insert(Complex64::new(0.0, 0.0)) -= c;
        }
        out.canonicalize();
        Ok(out)
    }

    /// Cauchy product: coefficients convolve, exponents add.
    pub fn mul(&self, rhs: &Series) -> Result<Series> {
        self.check_same_nvars(rhs)?;
        let mut terms: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exp: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(exp).or_insert(Complex64::new(0.0, 0.0)) += ca * cb;
            }
        }
        let mut out = Series { nvars: self.nvars, terms };
        out.canonicalize();
        Ok(out)
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: Complex64) -> Series {
        let mut out = Series {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        };
        out.canonicalize();
        out
    }

    /// Negation.
    pub fn neg(&self) -> Series {
        Series {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), -a)).collect(),
        }
    }

    /// The algebra norm: sum of coefficient moduli. Dominates the sup of
    /// |f| over the closed polydisc.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// A global Lipschitz constant for evaluation over the closed polydisc,
    /// with respect to the max metric on coordinates:
    ///
    ///   |f(z) - f(w)| <= L(f) * max_i |z_i - w_i|,   L(f) = sum |a_k| |k|_1.
    ///
    /// Each monomial z^k changes by at most |k|_1 * max_i |z_i - w_i| when
    /// all coordinates stay in the closed unit disc (telescope one
    /// coordinate at a time), and the triangle inequality does the rest.
    pub fn lipschitz_constant(&self) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| c.norm() * e.iter().map(|&k| k as f64).sum::<f64>())
            .sum()
    }

    /// Evaluate at a point of the closed polydisc.
    ///
    /// This is the Gelfand transform at the multiplicative functional the
    /// point represents: evaluation is linear, multiplicative, and bounded
    /// by the l1 norm.
    ///
    /// Evaluation collapses one variable at a time against ascending power
    /// tables. Grid sweeps use the very same collapse, so a sweep maximum
    /// and a loop over single-point evaluations agree bit for bit.
    pub fn eval(&self, coords: &[Complex64]) -> Result<Complex64> {
        if coords.len() != self.nvars {
            return Err(Error::PointDimensionMismatch { point: coords.len(), expected: self.nvars });
        }
        for (i, z) in coords.iter().enumerate() {
            let m = z.norm();
            if m > 1.0 + crate::grid::POINT_MODULUS_TOLERANCE {
                return Err(Error::PointOutsidePolydisc { index: i, modulus: m });
            }
        }
        let dense = DenseSeries::from_series(self)?;
        Ok(dense.eval(coords))
    }

    /// True when every coefficient of `self - rhs` has modulus at most `tol`.
    pub fn approx_eq(&self, rhs: &Series, tol: f64) -> bool {
        if self.nvars != rhs.nvars {
            return false;
        }
        let keys: std::collections::BTreeSet<&Vec<u32>> =
            self.terms.keys().chain(rhs.terms.keys()).collect();
        keys.into_iter().all(|k| {
            (self.coefficient(k) - rhs.coefficient(k)).norm() <= tol
        })
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{}]{{{}}}", self.nvars, self)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "({})", c.re)?;
            } else {
                write!(f, "({}{:+}i)", c.re, c.im)?;
            }
            for (v, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{}", v + 1)?,
                    _ => write!(f, "*z{}^{}", v + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

/// Ascending powers `z^0 .. z^deg`, built by repeated multiplication.
///
/// Every evaluation path in the crate gets its powers from here, so the
/// rounding of `z^k` is identical no matter which code path asks for it.
pub(crate) fn powers(z: Complex64, deg: usize, out: &mut Vec<Complex64>) {
    out.clear();
    out.push(Complex64::new(1.0, 0.0));
    for _ in 0..deg {
        let last = *out.last().expect("powers vector is never empty");
        out.push(last * z);
    }
}

/// Dense row-major coefficient table for fast repeated evaluation.
///
/// Variable 0 is the slowest axis. Collapsing variable 0 at a value `z`
/// turns the table for (z1, ..., zn) into a table for (z2, ..., zn); doing
/// that once per outer grid sample and reusing the result across the whole
/// inner subgrid is what makes full product-grid sweeps affordable.
pub(crate) struct DenseSeries {
    pub degs: Vec<usize>,
    pub coeffs: Vec<Complex64>,
}

impl DenseSeries {
    pub fn from_series(s: &Series) -> Result<Self> {
        let degs: Vec<usize> = s.max_degrees().iter().map(|&d| d as usize).collect();
        let mut size = 1usize;
        for &d in &degs {
            size = size
                .checked_mul(d + 1)
                .filter(|&n| n <= DENSE_COEFF_LIMIT)
                .ok_or(Error::DegreeTooLarge { size: usize::MAX, limit: DENSE_COEFF_LIMIT })?;
        }
        if size > DENSE_COEFF_LIMIT {
            return Err(Error::DegreeTooLarge { size, limit: DENSE_COEFF_LIMIT });
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); size];
        for (exp, c) in s.terms() {
            let mut idx = 0usize;
            for (v, &e) in exp.iter().enumerate() {
                idx = idx * (degs[v] + 1) + e as usize;
            }
            coeffs[idx] = c;
        }
        Ok(DenseSeries { degs, coeffs })
    }

    /// Number of coefficients in the table for variables `from..`.
    pub fn stride(&self, from: usize) -> usize {
        self.degs[from..].iter().map(|&d| d + 1).product()
    }

    /// Collapse the leading variable against a power table: with
    /// `pw[k] = z^k`, writes the coefficients of `f(z, z_rest)` as a
    /// polynomial in `z_rest` into `out` (length `stride(1)`).
    pub fn collapse_leading(
        deg0: usize,
        stride: usize,
        coeffs: &[Complex64],
        pw: &[Complex64],
        out: &mut [Complex64],
    ) {
        debug_assert_eq!(coeffs.len(), (deg0 + 1) * stride);
        debug_assert_eq!(out.len(), stride);
        for slot in out.iter_mut() {
            *slot = Complex64::new(0.0, 0.0);
        }
        for k in 0..=deg0 {
            let p = pw[k];
            let row = &coeffs[k * stride..(k + 1) * stride];
            for (slot, &c) in out.iter_mut().zip(row) {
                *slot += c * p;
            }
        }
    }

    /// Single-point evaluation via successive collapses; the canonical
    /// evaluation order for the whole crate.
    pub fn eval(&self, coords: &[Complex64]) -> Complex64 {
        let mut buf = self.coeffs.clone();
        let mut pw = Vec::new();
        for (v, &z) in coords.iter().enumerate() {
            let stride = self.stride(v + 1);
            powers(z, self.degs[v], &mut pw);
            let mut next = vec![Complex64::new(0.0, 0.0); stride];
            Self::collapse_leading(self.degs[v], stride, &buf, &pw, &mut next);
            buf = next;
        }
        buf[0]
    }
}
