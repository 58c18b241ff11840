//! TM-mode solver: assemble the coupled four-field pencil and extract the
//! real transmission eigenvalues from it.
//!
//! The weak form pairs the tuple slots symmetrically: slots 1/3 carry the
//! `D⁺_{l+2}` operator and the `1/l` mass coefficient, slots 2/4 carry
//! `D⁻_{l-1}` and `1/(l+1)`; slots 1/2 are weighted by `ñ`, slots 3/4 enter
//! with sign -1. The `(1+t)²` weight exactly cancels the operator
//! denominators, so the stiffness integrand is the polynomial product
//! `(c⁺(h₁) - c⁻(h₂))(c⁺(h₁') - c⁻(h₂'))` and its slot-3/4 counterpart with
//! opposite sign.
//!
//! The eigenvalue `k²` enters linearly, so one QZ solve per `(l, N)`
//! suffices — no scanning. The pencil is indefinite and carries exact zero
//! modes (slot pairs annihilated by the operator brackets, e.g. the tuples
//! `(c_m (1+t)^m, (1+t)^m, c_m (1+t)^m, (1+t)^m)` with
//! `c_m = (m-l+1)/(m+l+2)`), plus indeterminate directions, so the raw QZ
//! output is filtered before anything is reported.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::basis::{build_tm_basis, TmBasis, TmTables};
use crate::gevp::{relative_residual, solve_general_pencil, PencilResult};
use crate::polyquad::QuadratureRule;
use crate::refractive::RefractiveIndex;
use crate::{Error, Mode, Result, TransmissionEigenvalue};

/// Imaginary parts above `|Im μ| = IM_TOLERANCE (1 + |Re μ|)` mark a
/// spurious complex pair.
pub const IM_TOLERANCE: f64 = 1e-8;
/// Eigenvalues with `Re μ` below this are perturbed members of the pencil's
/// exact zero eigenspace, not transmission eigenvalues. The zero modes split
/// under rounding like `√(ε ‖𝒜‖)`, which reaches ~1e-5 by N = 60, so the
/// floor sits well above that and still four orders below the smallest
/// genuine eigenvalue of the validated configurations.
pub const RE_FLOOR: f64 = 1e-4;
/// Duplicate-merge distance in `k`.
const ROOT_MERGE: f64 = 1e-8;

/// One reduced TM eigenproblem with its basis tables.
#[derive(Debug, Clone)]
pub struct TmProblem {
    radius: f64,
    l: usize,
    index: RefractiveIndex,
    n: usize,
    basis: TmBasis,
    tables: TmTables,
    node_index: Vec<f64>,
}

/// The assembled stiffness/mass pair of order `4N + 3`; both symmetric,
/// both indefinite in general.
#[derive(Debug, Clone)]
pub struct TmPencil {
    pub stiffness: DMatrix<f64>,
    pub mass: DMatrix<f64>,
}

/// One kept eigenpair, with the diagnostics the filter looked at.
#[derive(Debug, Clone)]
pub struct TmEigenpair {
    pub value: TransmissionEigenvalue,
    pub vector: DVector<Complex64>,
    pub residual: f64,
}

impl TmProblem {
    /// Builds the problem with the module's quadrature size `q = 2N + 16`.
    pub fn new(radius: f64, l: usize, index: RefractiveIndex, n: usize) -> Result<Self> {
        if l < 1 {
            return Err(Error::DimensionMismatch(format!(
                "harmonic degree l must be >= 1, got {l}"
            )));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::DimensionMismatch(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let basis = build_tm_basis(n)?;
        let rule = QuadratureRule::gauss_legendre(2 * n + 16);
        let tables = basis.tabulate(l, &rule);
        let node_index = rule
            .nodes()
            .iter()
            .map(|&t| index.eval_mapped(t, radius))
            .collect();
        Ok(TmProblem {
            radius,
            l,
            index,
            n,
            basis,
            tables,
            node_index,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn degree(&self) -> usize {
        self.l
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn index(&self) -> &RefractiveIndex {
        &self.index
    }

    /// Order of the pencil, `4N + 3`.
    pub fn dim(&self) -> usize {
        4 * self.n + 3
    }

    /// Assembles the stiffness and mass matrices.
    pub fn assemble(&self) -> TmPencil {
        let weights = self.tables.rule.weights();
        let nodes = self.tables.rule.nodes();
        let nq = nodes.len();
        let ns = self.basis.scalars().len();
        let lf = self.l as f64;

        // Scalar Gram matrices; the member matrices are stitched from these.
        let gram = |left: &[Vec<f64>], right: &[Vec<f64>], w: &[f64]| -> DMatrix<f64> {
            let mut g = DMatrix::zeros(ns, ns);
            for i in 0..ns {
                for j in 0..ns {
                    let mut s = 0.0;
                    for k in 0..nq {
                        s += w[k] * left[i][k] * right[j][k];
                    }
                    g[(i, j)] = s;
                }
            }
            g
        };
        let mut w_plain = vec![0.0; nq];
        let mut w_mass_n = vec![0.0; nq];
        let mut w_mass_1 = vec![0.0; nq];
        for k in 0..nq {
            let omega2 = (1.0 + nodes[k]) * (1.0 + nodes[k]);
            w_plain[k] = weights[k];
            w_mass_n[k] = weights[k] * omega2 * self.node_index[k];
            w_mass_1[k] = weights[k] * omega2;
        }
        let g_pp = gram(&self.tables.c_plus, &self.tables.c_plus, &w_plain);
        let g_pm = gram(&self.tables.c_plus, &self.tables.c_minus, &w_plain);
        let g_mm = gram(&self.tables.c_minus, &self.tables.c_minus, &w_plain);
        let m_n = gram(&self.tables.values, &self.tables.values, &w_mass_n);
        let m_1 = gram(&self.tables.values, &self.tables.values, &w_mass_1);

        let dim = self.dim();
        let members = self.basis.members();
        let mass_factor = (2.0 * lf + 1.0) * self.radius * self.radius / 4.0;
        let mut stiffness = DMatrix::zeros(dim, dim);
        let mut mass = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let ma = &members[a];
                let mb = &members[b];
                // bracket pairing of slots (0,1) minus slots (2,3)
                let mut s = 0.0;
                for (pos, sign) in [(0usize, 1.0f64), (2, -1.0)] {
                    if let (Some(i), Some(j)) = (ma[pos], mb[pos]) {
                        s += sign * g_pp[(i, j)];
                    }
                    if let (Some(i), Some(j)) = (ma[pos], mb[pos + 1]) {
                        s -= sign * g_pm[(i, j)];
                    }
                    if let (Some(i), Some(j)) = (ma[pos + 1], mb[pos]) {
                        s -= sign * g_pm[(j, i)];
                    }
                    if let (Some(i), Some(j)) = (ma[pos + 1], mb[pos + 1]) {
                        s += sign * g_mm[(i, j)];
                    }
                }
                stiffness[(a, b)] = s;

                let mut t = 0.0;
                if let (Some(i), Some(j)) = (ma[0], mb[0]) {
                    t += m_n[(i, j)] / lf;
                }
                if let (Some(i), Some(j)) = (ma[1], mb[1]) {
                    t += m_n[(i, j)] / (lf + 1.0);
                }
                if let (Some(i), Some(j)) = (ma[2], mb[2]) {
                    t -= m_1[(i, j)] / lf;
                }
                if let (Some(i), Some(j)) = (ma[3], mb[3]) {
                    t -= m_1[(i, j)] / (lf + 1.0);
                }
                mass[(a, b)] = mass_factor * t;
            }
        }
        TmPencil { stiffness, mass }
    }

    /// Raw QZ output of the pencil, unfiltered. Debug surface: complex and
    /// indeterminate eigenvalues included, in LAPACK order.
    pub fn raw_eigenvalues(&self) -> Result<PencilResult> {
        let pencil = self.assemble();
        solve_general_pencil(&pencil.stiffness, &pencil.mass)
    }

    /// Solves the pencil and returns the kept eigenpairs (ascending in `k`,
    /// deduplicated, at most `count`, `k <= k_max`) with their vectors and
    /// residuals.
    pub fn solve_pairs(&self, k_max: f64, count: usize) -> Result<Vec<TmEigenpair>> {
        assert!(count >= 1, "count must be at least 1");
        let pencil = self.assemble();
        let solved = solve_general_pencil(&pencil.stiffness, &pencil.mass)?;
        let vectors = solved.vectors.as_ref().expect("eigenvectors requested");

        let mut kept: Vec<(f64, usize)> = Vec::new();
        for idx in solved.finite_indices() {
            let mu = solved.eigenvalues[idx];
            if mu.im.abs() > IM_TOLERANCE * (1.0 + mu.re.abs()) {
                continue;
            }
            if mu.re < RE_FLOOR {
                continue;
            }
            let k = mu.re.sqrt();
            if k <= k_max {
                kept.push((k, idx));
            }
        }
        kept.sort_by(|a, b| a.0.total_cmp(&b.0));
        kept.dedup_by(|a, b| (a.0 - b.0).abs() < ROOT_MERGE);
        kept.truncate(count);

        Ok(kept
            .into_iter()
            .enumerate()
            .map(|(rank, (k, idx))| {
                let vector = vectors[idx].clone();
                // Rayleigh-quotient polish: for a symmetric pencil the
                // quotient is stationary at eigenvectors, so the QZ
                // vector's O(ε) error enters the eigenvalue only at O(ε²).
                let k = match rayleigh_quotient(&pencil, &vector) {
                    Some(mu) if mu > RE_FLOOR && (mu.sqrt() - k).abs() < ROOT_MERGE => mu.sqrt(),
                    _ => k,
                };
                let residual = relative_residual(
                    &pencil.stiffness,
                    &pencil.mass,
                    Complex64::new(k * k, 0.0),
                    &vector,
                );
                TmEigenpair {
                    value: TransmissionEigenvalue {
                        k,
                        tau: k * k,
                        branch: rank + 1,
                        l: self.l,
                        mode: Mode::Tm,
                        multiplicity_3d: 2 * self.l + 1,
                    },
                    vector,
                    residual,
                }
            })
            .collect())
    }

    /// As [`solve_pairs`](Self::solve_pairs) but dropping the diagnostics.
    pub fn solve(&self, k_max: f64, count: usize) -> Result<Vec<TransmissionEigenvalue>> {
        Ok(self
            .solve_pairs(k_max, count)?
            .into_iter()
            .map(|p| p.value)
            .collect())
    }
}

/// `Re(xᴴ𝒜x) / Re(xᴴℬx)`, or `None` when the ℬ-energy of the vector is too
/// small to divide by.
fn rayleigh_quotient(pencil: &TmPencil, x: &DVector<Complex64>) -> Option<f64> {
    let quad = |m: &DMatrix<f64>| -> f64 {
        let n = m.nrows();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..n {
                row += m[(i, j)] * x[j];
            }
            acc += x[i].conj() * row;
        }
        acc.re
    };
    let num = quad(&pencil.stiffness);
    let den = quad(&pencil.mass);
    let scale = pencil.mass.amax() * x.norm_squared();
    if den.abs() <= 1e-10 * scale {
        return None;
    }
    Some(num / den)
}
