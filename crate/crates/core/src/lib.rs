//! Transmission eigenvalues of a ball with a radial refractive index.
//!
//! The scattering problem on a ball separates over vector spherical harmonics
//! into a family of one-dimensional eigenvalue problems indexed by the degree
//! `l`, one family per polarization:
//!
//! * the **TE mode** leads to a fourth-order problem whose transmission
//!   eigenvalues are fixed points of a generalized-eigenvalue branch,
//!   found here by a scan-and-refine search ([`te`]);
//! * the **TM mode** couples four radial fields and is solved directly as a
//!   linear matrix pencil in `k²` ([`tm`]).
//!
//! Both discretizations use Legendre-type bases on `(-1, 1)` ([`basis`]),
//! Gauss–Legendre quadrature ([`polyquad`]) and dense eigensolvers
//! ([`gevp`]). For constant refractive index the TE results can be checked
//! against the exact spherical-Bessel characteristic determinant
//! ([`oracle`]), and the harmonic identities behind the dimension reduction
//! can be verified numerically ([`vsh`]).

pub mod basis;
pub mod gevp;
pub mod oracle;
pub mod polyquad;
pub mod reference;
pub mod refractive;
pub mod te;
pub mod tm;
pub mod vsh;

pub use refractive::{Contrast, RefractiveIndex};

/// Polarization family of the reduced one-dimensional problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Te,
    Tm,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Te => write!(f, "te"),
            Mode::Tm => write!(f, "tm"),
        }
    }
}

/// A single real transmission eigenvalue `k`, together with where it came from.
///
/// In three dimensions every eigenvalue of the reduced problem at harmonic
/// degree `l` is shared by the `2l + 1` orders `|m| <= l`, so it appears with
/// multiplicity `2l + 1` in the full spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionEigenvalue {
    /// Wavenumber, `k > 0`.
    pub k: f64,
    /// `k²`; the spectral parameter of the pencil formulations.
    pub tau: f64,
    /// 1-based branch index (TE: which eigenvalue branch crossed; TM: rank
    /// among the kept pencil eigenvalues).
    pub branch: usize,
    /// Harmonic degree of the reduced problem.
    pub l: usize,
    pub mode: Mode,
    /// Multiplicity in the 3-D spectrum, always `2l + 1`.
    pub multiplicity_3d: usize,
}

/// Errors shared by all modules of this crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Polynomial division by `(1 + t)` attempted on a polynomial that does
    /// not vanish at `t = -1`.
    #[error("polynomial does not vanish at t = -1: remainder {remainder:e} exceeds {tolerance:e}")]
    NonVanishing { remainder: f64, tolerance: f64 },

    /// Basis truncation degree below the minimum that leaves any function.
    #[error("truncation degree N = {n} too small for the {basis} basis (need N >= {min})")]
    TooSmall {
        basis: &'static str,
        n: usize,
        min: usize,
    },

    /// The B side of a symmetric-definite pencil failed its Cholesky
    /// factorization; the pencil is not definite.
    #[error("matrix is not positive definite (Cholesky broke down at leading minor {order})")]
    NotDefinite { order: usize },

    /// Dense eigenvalue iteration exceeded its iteration cap.
    #[error("eigenvalue iteration failed to converge: {0}")]
    NoConvergence(String),

    /// The refractive index is not bounded away from 1 with a single sign of
    /// contrast on the whole radius.
    #[error("refractive index violates the contrast assumption: {0}")]
    ContrastViolation(String),

    /// Spherical harmonic degree/order outside the hard-coded range.
    #[error("harmonic (l, m) = ({l}, {m}) out of range (need 0 <= l <= 3, |m| <= l)")]
    OutOfRange { l: i64, m: i64 },

    /// Mismatched matrix dimensions.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
