//! Certified numerics for a chordal metric on plants over the polydisc.
//!
//! The objects here are absolutely convergent power series in several
//! complex variables — elements of the Wiener algebra of the closed unit
//! polydisc — and fractions n/d of such series used as transfer functions
//! of multidimensional systems. The crate provides:
//!
//! - [`Series`]: sparse series arithmetic, l1 norms, coefficient-based
//!   Lipschitz constants, and evaluation on the closed polydisc.
//! - [`sphere`]: the chordal metric on the extended complex plane (the
//!   Riemann sphere of diameter one), its stereographic model, and a
//!   piecewise-linear lower bound for it.
//! - [`PolydiscGrid`] and [`certified`]: boundary-plus-radii sample grids
//!   with known covering radius, and two-sided enclosures of sups and
//!   infimum moduli obtained by combining exact grid extrema with global
//!   Lipschitz constants.
//! - [`CoprimePlant`] and [`kappa`]: plants admitted with certified
//!   coprimeness evidence, and a certified version of the projective
//!   chordal distance between two plants, computed as a supremum over the
//!   distinguished boundary.
//! - [`robustness`]: the stabilization margin
//!   `(1/3) min(1, 1/g, 1/(k(1+kg)))` of a certifiably stabilized
//!   nominal loop, certification that perturbed plants inside the margin
//!   stay stabilized, a worked two-variable example family, and a
//!   randomized soundness harness that cross-checks every margin verdict
//!   against a direct stability test.
//! - [`io`]: JSON file formats for series and plants.
//!
//! Everything user-facing returns enclosures or certificates rather than
//! bare floats: a `Proved` only appears when the grid resolution and the
//! Lipschitz bookkeeping genuinely rule out the alternative.

pub mod certified;
pub mod error;
pub mod grid;
pub mod io;
pub mod kappa;
pub mod neumann;
pub mod plant;
pub mod robustness;
pub mod series;
pub mod sphere;

pub use certified::{
    is_invertible, min_modulus_certified, sup_norm_certified, BoundKind, Certificate,
    CertifiedBound,
};
pub use error::{Error, Result};
pub use grid::{sample_polydisc, PolydiscGrid, PolydiscPoint};
pub use kappa::{kappa, kappa_on_points, kappa_pointwise, KappaEstimate};
pub use neumann::{neumann_inverse, terms_for_target, NeumannInverse};
pub use plant::{ClosedLoop, ClosedLoopElements, CoprimePlant, CoprimenessEvidence};
pub use robustness::{
    certify, certify_with_refinement, empirical_soundness, example_sweep, margin, ExampleReport,
    MarginReport, RobustnessCertificate, SoundnessReport, SweepRow, Verdict,
};
pub use series::Series;
pub use sphere::{chordal, chordal_lower_bound, stereographic, ExtendedComplex, SpherePoint};
