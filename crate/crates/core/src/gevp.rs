//! Dense generalized eigensolvers for the two pencil shapes the solvers
//! produce: symmetric-definite pairs (TE) and general real pencils (TM).
//!
//! Both routines delegate to the platform LAPACK (`dsygv` / `dggev`), which
//! is the reference algorithm in each case: Cholesky reduction of B followed
//! by a symmetric QR solve, and the QZ iteration. The contract here is the
//! residual bound on every returned pair and the flagging of indeterminate
//! (`|β| ≈ 0`) eigenvalues of singular pencils; callers never see LAPACK
//! details.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::{Error, Result};

/// A symmetric matrix pair `(A, B)` with `B` expected positive definite.
#[derive(Debug, Clone)]
pub struct SymPencil {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
}

impl SymPencil {
    /// Validates shapes and symmetry (`‖M - Mᵀ‖_max ≤ 1e-10 ‖M‖_max`).
    /// Definiteness of `B` is only discovered when solving.
    pub fn new(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        if !a.is_square() || a.shape() != b.shape() {
            return Err(Error::DimensionMismatch(format!(
                "A is {:?}, B is {:?}",
                a.shape(),
                b.shape()
            )));
        }
        for (name, m) in [("A", &a), ("B", &b)] {
            let scale = m.amax();
            let skew = (m - m.transpose()).amax();
            if skew > 1e-10 * scale {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is not symmetric: skew {skew:e} vs scale {scale:e}"
                )));
            }
        }
        Ok(SymPencil { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }
}

/// Classification of one pencil eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenFlag {
    Finite,
    /// `|β|` at the scale of rounding: the eigenvalue is infinite or
    /// arbitrary (singular pencil direction).
    Indeterminate,
}

/// Eigenvalues of a pencil plus per-eigenvalue flags and, when requested,
/// right eigenvectors.
#[derive(Debug, Clone)]
pub struct PencilResult {
    pub eigenvalues: Vec<Complex64>,
    pub flags: Vec<EigenFlag>,
    pub vectors: Option<Vec<DVector<Complex64>>>,
}

impl PencilResult {
    /// Indices of the finite eigenvalues.
    pub fn finite_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, f)| **f == EigenFlag::Finite)
            .map(|(i, _)| i)
    }

    /// The eigenvalues of a symmetric-definite solve, which are real and
    /// ascending by construction.
    pub fn real_ascending(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

/// Solves `A x = λ B x` for symmetric `A` and symmetric positive definite
/// `B` via Cholesky reduction to a standard symmetric problem.
///
/// Eigenvalues are real, returned ascending, with eigenvectors; every pair
/// satisfies `‖A v - λ B v‖ ≤ 1e-9 (‖A‖ + |λ| ‖B‖) ‖v‖`.
pub fn solve_sym_definite(pencil: &SymPencil) -> Result<PencilResult> {
    let n = pencil.dim();
    let (values, vectors) = lapack::dsygv(pencil.a.clone(), pencil.b.clone())?;
    let mut out_vectors = Vec::with_capacity(n);
    for j in 0..n {
        out_vectors.push(DVector::from_fn(n, |i, _| {
            Complex64::new(vectors[(i, j)], 0.0)
        }));
    }
    Ok(PencilResult {
        eigenvalues: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        flags: vec![EigenFlag::Finite; n],
        vectors: Some(out_vectors),
    })
}

/// Solves the general real pencil `A x = μ B x` by the QZ iteration.
///
/// Eigenvalues come back as `(α, β)` ratios; those with
/// `|β| ≤ 1e-12 ‖B‖_max` are flagged [`EigenFlag::Indeterminate`] (infinite
/// or arbitrary) and carry a meaningless `eigenvalues` entry of zero.
pub fn solve_general_pencil(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<PencilResult> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "A is {:?}, B is {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let n = a.nrows();
    let beta_floor = 1e-12 * b.amax();
    let (alpha_re, alpha_im, beta, vr) = lapack::dggev(a.clone(), b.clone())?;

    let mut eigenvalues = Vec::with_capacity(n);
    let mut flags = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut j = 0;
    while j < n {
        // dggev reports a complex conjugate pair in two consecutive entries
        // (the second already carries the negative imaginary part); the two
        // eigenvector columns hold the real and imaginary parts of the
        // first member.
        let pair = alpha_im[j] > 0.0 && j + 1 < n;
        for member in 0..if pair { 2 } else { 1 } {
            let idx = j + member;
            if beta[idx].abs() <= beta_floor {
                eigenvalues.push(Complex64::new(0.0, 0.0));
                flags.push(EigenFlag::Indeterminate);
            } else {
                eigenvalues.push(Complex64::new(alpha_re[idx], alpha_im[idx]) / beta[idx]);
                flags.push(EigenFlag::Finite);
            }
            let v = if pair {
                let sign = if member == 0 { 1.0 } else { -1.0 };
                DVector::from_fn(n, |i, _| {
                    Complex64::new(vr[(i, j)], sign * vr[(i, j + 1)])
                })
            } else {
                DVector::from_fn(n, |i, _| Complex64::new(vr[(i, idx)], 0.0))
            };
            vectors.push(v);
        }
        j += if pair { 2 } else { 1 };
    }
    Ok(PencilResult {
        eigenvalues,
        flags,
        vectors: Some(vectors),
    })
}

/// Relative residual `‖(A - μB) x‖ / ((‖A‖ + |μ| ‖B‖) ‖x‖)` in the
/// Frobenius/Euclidean norms.
pub fn relative_residual(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    mu: Complex64,
    x: &DVector<Complex64>,
) -> f64 {
    let n = a.nrows();
    let mut r = DVector::from_element(n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            acc += (Complex64::new(a[(i, k)], 0.0) - mu * b[(i, k)]) * x[k];
        }
        r[i] = acc;
    }
    let scale = (a.norm() + mu.norm() * b.norm()) * x.norm();
    if scale == 0.0 {
        return r.norm();
    }
    r.norm() / scale
}

/// Thin safe wrappers over the two LAPACK drivers used by this module.
mod lapack {
    use nalgebra::DMatrix;
    use std::os::raw::c_char;

    use crate::{Error, Result};

    #[link(name = "lapack")]
    unsafe extern "C" {
        fn dsygv_(
            itype: *const i32,
            jobz: *const c_char,
            uplo: *const c_char,
            n: *const i32,
            a: *mut f64,
            lda: *const i32,
            b: *mut f64,
            ldb: *const i32,
            w: *mut f64,
            work: *mut f64,
            lwork: *const i32,
            info: *mut i32,
        );
        fn dggev_(
            jobvl: *const c_char,
            jobvr: *const c_char,
            n: *const i32,
            a: *mut f64,
            lda: *const i32,
            b: *mut f64,
            ldb: *const i32,
            alphar: *mut f64,
            alphai: *mut f64,
            beta: *mut f64,
            vl: *mut f64,
            ldvl: *const i32,
            vr: *mut f64,
            ldvr: *const i32,
            work: *mut f64,
            lwork: *const i32,
            info: *mut i32,
        );
    }

    /// `A x = λ B x`, A symmetric, B SPD. Returns ascending eigenvalues and
    /// the eigenvector matrix (columns). Consumes the inputs as workspace.
    pub fn dsygv(mut a: DMatrix<f64>, mut b: DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let n = a.nrows();
        let ni = n as i32;
        let mut w = vec![0.0; n];
        let lwork = (3 * n).max(1).max(34 * n) as i32;
        let mut work = vec![0.0; lwork as usize];
        let mut info = 0i32;
        let itype = 1i32;
        unsafe {
            dsygv_(
                &itype,
                &(b'V' as c_char),
                &(b'L' as c_char),
                &ni,
                a.as_mut_slice().as_mut_ptr(),
                &ni,
                b.as_mut_slice().as_mut_ptr(),
                &ni,
                w.as_mut_ptr(),
                work.as_mut_ptr(),
                &lwork,
                &mut info,
            );
        }
        match info {
            0 => Ok((w, a)),
            i if i > ni => Err(Error::NotDefinite {
                order: (i - ni) as usize,
            }),
            i if i > 0 => Err(Error::NoConvergence(format!(
                "dsygv: {i} off-diagonal elements did not converge"
            ))),
            i => Err(Error::NoConvergence(format!("dsygv: illegal argument {i}"))),
        }
    }

    /// General `A x = μ B x` via QZ. Returns `(ℜα, ℑα, β)` and the packed
    /// right eigenvector matrix in LAPACK's real-pair convention.
    #[allow(clippy::type_complexity)]
    pub fn dggev(
        mut a: DMatrix<f64>,
        mut b: DMatrix<f64>,
    ) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>, DMatrix<f64>)> {
        let n = a.nrows();
        let ni = n as i32;
        let mut alphar = vec![0.0; n];
        let mut alphai = vec![0.0; n];
        let mut beta = vec![0.0; n];
        let mut vr = DMatrix::<f64>::zeros(n, n);
        let lwork = (8 * n).max(1).max(34 * n) as i32;
        let mut work = vec![0.0; lwork as usize];
        let mut info = 0i32;
        unsafe {
            dggev_(
                &(b'N' as c_char),
                &(b'V' as c_char),
                &ni,
                a.as_mut_slice().as_mut_ptr(),
                &ni,
                b.as_mut_slice().as_mut_ptr(),
                &ni,
                alphar.as_mut_ptr(),
                alphai.as_mut_ptr(),
                beta.as_mut_ptr(),
                std::ptr::null_mut(),
                &1,
                vr.as_mut_slice().as_mut_ptr(),
                &ni,
                work.as_mut_ptr(),
                &lwork,
                &mut info,
            );
        }
        match info {
            0 => Ok((alphar, alphai, beta, vr)),
            i if i > 0 => Err(Error::NoConvergence(format!(
                "dggev: QZ iteration failed with info = {i}"
            ))),
            i => Err(Error::NoConvergence(format!("dggev: illegal argument {i}"))),
        }
    }
}
