//! TE-mode solver: assemble the τ-parameterized forms, expose the eigenvalue
//! branches `λ_N^m(τ)`, and find transmission eigenvalues as fixed points
//! `λ(τ) = τ`.
//!
//! For `ñ > 1` the form is
//! `A_τ(u, v) = (1/(ñ-1) (L_l + c τ) u, (L_l + c τ) v)_{ω²} + (c τ)² (u, v)_{ω²}`
//! with `c = R²/4`; for `ñ < 1` the coercive variant carries `ñ` into the
//! operator bracket and the mass term. In either case the right-hand form is
//! `B(u, v) = R²/4 ((u', v')_{ω²} + l(l+1)(u, v))`. With the pole condition
//! built into the basis, `(1+t)(L_l + cτ ñ̂) φ = q + cτ ñ̂ (1+t) φ` is a
//! polynomial at every node, so no singular quotient is ever evaluated.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::basis::{build_te_basis, TeTables};
use crate::gevp::{solve_sym_definite, SymPencil};
use crate::polyquad::QuadratureRule;
use crate::refractive::{Contrast, RefractiveIndex};
use crate::{Error, Mode, Result, TransmissionEigenvalue};

/// Default number of eigenvalue branches tracked by the root scan.
pub const DEFAULT_BRANCHES: usize = 8;
/// Default wavenumber step of the scan grid.
pub const DEFAULT_SCAN_STEP: f64 = 0.01;
/// A root is accepted once `|λ(k²) - k²| ≤ ROOT_TOLERANCE · (1 + k²)`;
/// refinement then continues to the width of the floating-point grid.
pub const ROOT_TOLERANCE: f64 = 1e-12;
/// Roots closer than this are considered the same eigenvalue.
const ROOT_MERGE: f64 = 1e-8;

/// One reduced TE eigenproblem: ball radius, harmonic degree, index and
/// truncation, with the basis tables built once at construction.
#[derive(Debug, Clone)]
pub struct TeProblem {
    radius: f64,
    l: usize,
    index: RefractiveIndex,
    n: usize,
    tables: TeTables,
    /// ñ at the quadrature nodes.
    node_index: Vec<f64>,
}

/// The first branch values `λ_N^1(τ) .. λ_N^M(τ)` at one `τ`.
#[derive(Debug, Clone)]
pub struct TeBranchSample {
    pub tau: f64,
    /// Ascending, strictly positive.
    pub lambdas: Vec<f64>,
}

impl TeProblem {
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
        let basis = build_te_basis(n)?;
        let rule = QuadratureRule::gauss_legendre(2 * n + 16);
        let tables = basis.tabulate(l, &rule)?;
        let node_index = rule
            .nodes()
            .iter()
            .map(|&t| index.eval_mapped(t, radius))
            .collect();
        Ok(TeProblem {
            radius,
            l,
            index,
            n,
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

    /// Dimension of the discrete space, `N - 2`.
    pub fn dim(&self) -> usize {
        self.n - 2
    }

    /// Assembles the pencil `(A_τ, B)` (or `(Ã_τ, B)` for `ñ < 1`) at the
    /// given `τ > 0`. Both matrices are symmetric by construction and `B`
    /// is positive definite.
    pub fn assemble(&self, tau: f64) -> SymPencil {
        assert!(tau > 0.0, "the forms are defined for tau > 0");
        let dim = self.dim();
        let nodes = self.tables.rule.nodes();
        let weights = self.tables.rule.weights();
        let nq = nodes.len();
        let c = self.radius * self.radius / 4.0 * tau;
        let above = self.index.contrast() == Contrast::AboveOne;
        let ll1 = (self.l * (self.l + 1)) as f64;

        // Operator bracket per function: u_i = q_i + c ñ̂ (1+t) φ_i, where
        // ñ̂ = 1 above contrast and ñ below.
        let mut bracket = vec![vec![0.0; nq]; dim];
        for (i, row) in bracket.iter_mut().enumerate() {
            for (j, slot) in row.iter_mut().enumerate() {
                let nhat = if above { 1.0 } else { self.node_index[j] };
                *slot = self.tables.q[i][j]
                    + c * nhat * (1.0 + nodes[j]) * self.tables.values[i][j];
            }
        }
        // Node weights of the four Gram sums.
        let mut w_inv = vec![0.0; nq]; // w / |ñ - 1|
        let mut w_mass = vec![0.0; nq]; // w ñ̂ (1+t)²
        let mut w_stiff = vec![0.0; nq]; // w (1+t)²
        for j in 0..nq {
            let omega2 = (1.0 + nodes[j]) * (1.0 + nodes[j]);
            let denom = if above {
                self.node_index[j] - 1.0
            } else {
                1.0 - self.node_index[j]
            };
            let nhat = if above { 1.0 } else { self.node_index[j] };
            w_inv[j] = weights[j] / denom;
            w_mass[j] = weights[j] * nhat * omega2;
            w_stiff[j] = weights[j] * omega2;
        }

        let mut a = DMatrix::zeros(dim, dim);
        let mut b = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for k in 0..=i {
                let mut s_op = 0.0;
                let mut s_mass = 0.0;
                let mut s_d = 0.0;
                let mut s_v = 0.0;
                for j in 0..nq {
                    s_op += w_inv[j] * bracket[i][j] * bracket[k][j];
                    s_mass += w_mass[j] * self.tables.values[i][j] * self.tables.values[k][j];
                    s_d += w_stiff[j] * self.tables.d1[i][j] * self.tables.d1[k][j];
                    s_v += weights[j] * self.tables.values[i][j] * self.tables.values[k][j];
                }
                let av = s_op + c * c * s_mass;
                let bv = self.radius * self.radius / 4.0 * (s_d + ll1 * s_v);
                a[(i, k)] = av;
                a[(k, i)] = av;
                b[(i, k)] = bv;
                b[(k, i)] = bv;
            }
        }
        SymPencil::new(a, b).expect("assembled pencil is symmetric by construction")
    }

    /// First `branches` eigenvalue branches at `τ`, ascending.
    ///
    /// Solved through the reciprocal pencil `B x = θ A x` (both sides are
    /// positive definite): the dense solver's absolute error grows with the
    /// spectral radius, which for the direct pencil is the largest branch
    /// and would swamp the low branches at large N. The reciprocal pencil
    /// puts the interesting branches at the top of the spectrum instead, so
    /// they come back with full relative accuracy as `λ_m = 1/θ_{n+1-m}`.
    pub fn lambda_branches(&self, tau: f64, branches: usize) -> Result<TeBranchSample> {
        let dim = self.dim();
        let m = branches.min(dim);
        let pencil = self.assemble(tau);
        let swapped = SymPencil::new(pencil.b().clone(), pencil.a().clone())?;
        let thetas = solve_sym_definite(&swapped)?.real_ascending();
        let mut lambdas = Vec::with_capacity(m);
        for i in 0..m {
            let theta = thetas[dim - 1 - i];
            if !theta.is_finite() || theta <= 0.0 {
                return Err(Error::NoConvergence(format!(
                    "branch eigenvalue not positive at tau = {tau} (theta = {theta}); \
                     the form lost coercivity"
                )));
            }
            lambdas.push(1.0 / theta);
        }
        Ok(TeBranchSample { tau, lambdas })
    }

    /// Scans `k` over `(0, k_max]` in steps of [`DEFAULT_SCAN_STEP`],
    /// brackets sign changes of `g_m(k) = λ_N^m(k²) - k²` on the first
    /// `branches` branches, refines each bracket, and returns the `count`
    /// smallest eigenvalues found.
    ///
    /// Returns an empty vector when no branch crosses in range.
    pub fn find_eigenvalues(
        &self,
        k_max: f64,
        branches: usize,
        count: usize,
    ) -> Result<Vec<TransmissionEigenvalue>> {
        assert!(k_max > 0.0, "k_max must be positive");
        assert!(count >= 1, "count must be at least 1");
        let m = branches.min(self.dim());
        let steps = (k_max / DEFAULT_SCAN_STEP).floor() as usize;
        if steps < 2 {
            return Ok(Vec::new());
        }
        // Scan-point evaluations are independent; evaluate them in parallel.
        let grid: Vec<(f64, Vec<f64>)> = (1..=steps)
            .into_par_iter()
            .map(|s| {
                let k = s as f64 * DEFAULT_SCAN_STEP;
                let g = self
                    .lambda_branches(k * k, m)
                    .map(|sample| sample.lambdas.iter().map(|l| l - k * k).collect())?;
                Ok((k, g))
            })
            .collect::<Result<_>>()?;

        let mut found: Vec<(f64, usize)> = Vec::new();
        for window in grid.windows(2) {
            let (k_lo, ref g_lo) = window[0];
            let (k_hi, ref g_hi) = window[1];
            for branch in 0..m {
                if g_lo[branch].signum() != g_hi[branch].signum() {
                    let root = self.refine_root(branch, k_lo, k_hi, g_lo[branch], g_hi[branch])?;
                    found.push((root, branch + 1));
                }
            }
        }
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        found.dedup_by(|a, b| (a.0 - b.0).abs() < ROOT_MERGE);
        found.truncate(count);
        Ok(found
            .into_iter()
            .map(|(k, branch)| TransmissionEigenvalue {
                k,
                tau: k * k,
                branch,
                l: self.l,
                mode: Mode::Te,
                multiplicity_3d: 2 * self.l + 1,
            })
            .collect())
    }

    /// Safeguarded secant/bisection hybrid on `g(k) = λ_m(k²) - k²`.
    ///
    /// Alternates a secant candidate with a plain midpoint so the bracket
    /// provably halves every other step; iterates past the acceptance
    /// tolerance down to the floating-point width of the bracket, which
    /// pins the root to the limit the branch noise allows.
    fn refine_root(
        &self,
        branch: usize,
        mut lo: f64,
        mut hi: f64,
        mut g_lo: f64,
        mut g_hi: f64,
    ) -> Result<f64> {
        let eval = |k: f64| -> Result<f64> {
            Ok(self.lambda_branches(k * k, branch + 1)?.lambdas[branch] - k * k)
        };
        for iter in 0..200 {
            let width = hi - lo;
            if width <= 2.0 * f64::EPSILON * hi {
                break;
            }
            let secant = lo - g_lo * width / (g_hi - g_lo);
            let inside = secant > lo + 1e-3 * width && secant < hi - 1e-3 * width;
            let mid = if iter % 2 == 0 && inside {
                secant
            } else {
                0.5 * (lo + hi)
            };
            let g_mid = eval(mid)?;
            if g_mid == 0.0 {
                return Ok(mid);
            }
            if g_mid.signum() == g_lo.signum() {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
                g_hi = g_mid;
            }
        }
        let root = 0.5 * (lo + hi);
        let g_root = eval(root)?;
        if g_root.abs() > ROOT_TOLERANCE * (1.0 + root * root) {
            return Err(Error::NoConvergence(format!(
                "root refinement stalled at k = {root} with |g| = {:e}",
                g_root.abs()
            )));
        }
        Ok(root)
    }
}
