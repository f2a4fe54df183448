//! The chordal metric on the extended complex plane.
//!
//! Points of the extended plane sit on a sphere of diameter 1 resting on
//! the origin (center (0, 0, 1/2), with infinity at the north pole), via
//! stereographic projection. The chordal distance between two extended
//! points is the straight-line distance between their projections:
//!
//!   chordal(z1, z2) = |z1 - z2| / (sqrt(1 + |z1|^2) sqrt(1 + |z2|^2))
//!
//! with the natural limits when either argument is infinite. It is
//! invariant under simultaneous inversion z -> 1/z, which swaps the north
//! and south poles, and it never exceeds the sphere's diameter 1.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The cap parameter that balances the two inversion-symmetric terms of
/// [`chordal_lower_bound`]: at a = 1/sqrt(2) both Euclidean coefficients
/// become 1/3, matching the spherical-cap term.
pub const DEFAULT_CAP_PARAMETER: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtendedComplex {
    /// Classify a raw complex value; non-finite components mean infinity.
    pub fn new(z: Complex64) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtendedComplex::Finite(z)
        } else {
            ExtendedComplex::Infinity
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            ExtendedComplex::Finite(z) => Some(*z),
            ExtendedComplex::Infinity => None,
        }
    }

    /// The inversion z -> 1/z on the sphere: 0 and infinity swap.
    pub fn reciprocal(&self) -> Self {
        match self {
            ExtendedComplex::Infinity => ExtendedComplex::Finite(Complex64::new(0.0, 0.0)),
            ExtendedComplex::Finite(z) if z.re == 0.0 && z.im == 0.0 => ExtendedComplex::Infinity,
            ExtendedComplex::Finite(z) => ExtendedComplex::new(safe_inv(*z)),
        }
    }
}

impl From<Complex64> for ExtendedComplex {
    fn from(z: Complex64) -> Self {
        ExtendedComplex::new(z)
    }
}

impl From<f64> for ExtendedComplex {
    fn from(x: f64) -> Self {
        ExtendedComplex::new(Complex64::new(x, 0.0))
    }
}

impl fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{z}"),
            ExtendedComplex::Infinity => write!(f, "inf"),
        }
    }
}

/// 1/z computed as (conj z / |z|) / |z|. Unlike `Complex64::inv`, which
/// forms |z|^2 and overflows to zero past |z| of about 1e154, every
/// intermediate here stays near the answer's own scale.
fn safe_inv(z: Complex64) -> Complex64 {
    let n = z.norm();
    (z.conj() / n) / n
}

/// A point on the sphere of diameter 1 centered at (0, 0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    pub x: f64,
    pub y: f64,
    /// Height above the plane; 0 at the south pole, 1 at the north pole.
    pub h: f64,
}

impl SpherePoint {
    pub fn distance(&self, other: &SpherePoint) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dh = self.h - other.h;
        (dx * dx + dy * dy + dh * dh).sqrt()
    }
}

/// Stereographic projection onto the diameter-1 sphere:
///
///   u + iv  ->  (u, v, |z|^2) / (1 + |z|^2),   infinity -> (0, 0, 1).
///
/// For |z| > 1 the same point is computed from w = 1/z, which keeps every
/// intermediate bounded: with s = |w|^2 the image is
/// (w.re, -w.im, 1) / (1 + s).
pub fn stereographic(z: ExtendedComplex) -> SpherePoint {
    match z {
        ExtendedComplex::Infinity => SpherePoint { x: 0.0, y: 0.0, h: 1.0 },
        ExtendedComplex::Finite(z) => {
            let m2 = z.norm_sqr();
            if m2 <= 1.0 {
                let t = 1.0 / (1.0 + m2);
                SpherePoint { x: z.re * t, y: z.im * t, h: m2 * t }
            } else {
                let w = safe_inv(z);
                let t = 1.0 / (1.0 + w.norm_sqr());
                SpherePoint { x: w.re * t, y: -w.im * t, h: t }
            }
        }
    }
}

/// The chordal distance between two extended complex numbers.
pub fn chordal(z1: ExtendedComplex, z2: ExtendedComplex) -> f64 {
    use ExtendedComplex::{Finite, Infinity};
    match (z1, z2) {
        (Infinity, Infinity) => 0.0,
        (Finite(z), Infinity) | (Infinity, Finite(z)) => {
            let m = z.norm();
            if m > 1.0 {
                // 1/sqrt(1 + m^2) = (1/m) / sqrt(1 + 1/m^2), overflow-safe.
                (1.0 / m) / 1.0f64.hypot(1.0 / m)
            } else {
                1.0 / 1.0f64.hypot(m)
            }
        }
        (Finite(a), Finite(b)) => {
            // Order the arguments canonically first: the chained divisions
            // below round differently under a swap, and symmetry should be
            // exact, not merely within an ulp.
            let (a, b) = if (a.re, a.im) <= (b.re, b.im) { (a, b) } else { (b, a) };
            if a.norm() > 1.0 && b.norm() > 1.0 {
                // Inversion invariance moves both points inside the disc,
                // so huge moduli never meet in a difference or a product.
                chordal_finite(safe_inv(a), safe_inv(b))
            } else {
                chordal_finite(a, b)
            }
        }
    }
}

fn chordal_finite(a: Complex64, b: Complex64) -> f64 {
    let num = (a - b).norm();
    (num / 1.0f64.hypot(a.norm())) / 1.0f64.hypot(b.norm())
}

/// A three-term lower bound for the chordal metric in terms of plain
/// Euclidean distances. For any cap parameter 0 < a < 1,
///
///   chordal(z1, z2) >= min( C |z1 - z2|, C |1/z1 - 1/z2|, H )
///
/// with C = a^2 / (1 + a^2) and H = (1 - a^2) / (1 + a^2).
///
/// The three cases: if both points lie in the disc of radius 1/a the
/// denominators are at most (1 + a^-2), giving the first term; if both lie
/// outside the disc of radius a, inversion invariance gives the second;
/// otherwise the points are separated by the annulus between the spheres'
/// caps at heights a^2/(1+a^2) and 1/(1+a^2), whose gap is H.
///
/// At the default a = 1/sqrt(2) all three coefficients meet at 1/3. The
/// reciprocal term is dropped when either argument is exactly zero (its
/// inversion leaves the finite plane); the remaining terms still bound the
/// metric from below.
pub fn chordal_lower_bound(z1: Complex64, z2: Complex64, a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::CapParameterOutOfRange { a });
    }
    let a2 = a * a;
    let coeff = a2 / (1.0 + a2);
    let cap_gap = (1.0 - a2) / (1.0 + a2);
    let zero = Complex64::new(0.0, 0.0);
    let direct = coeff * (z1 - z2).norm();
    let reciprocal = if z1 == zero || z2 == zero {
        f64::INFINITY
    } else {
        coeff * (safe_inv(z1) - safe_inv(z2)).norm()
    };
    Ok(direct.min(reciprocal).min(cap_gap))
}
