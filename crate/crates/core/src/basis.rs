//! Galerkin bases for the two reduced problems, and their node tables.
//!
//! The TE space needs `u(±1) = 0` and `u'(1) = 0`; its members are the
//! normalized three-term Legendre combinations
//! `φᵢ = dᵢ (Lᵢ - 2(2i+5)/(2i+7) L_{i+2} + (2i+3)/(2i+7) L_{i+4})`
//! plus the one cubic `¼ (t+1)(t-1)²` that carries a nonzero slope at the
//! left endpoint. The TM space is a 4-tuple space with only the coupling
//! constraint `h₁(1) - h₂(1) = h₃(1) - h₄(1)` at the boundary, spanned by
//! slotwise copies of `φᵢ = Lᵢ - L_{i+2}`, `(1-t)/2`, `1` and three coupled
//! constant members.
//!
//! [`TeTables`]/[`TmTables`] hold every node quantity the assemblers read.
//! The singular factors of the differential operators are removed
//! analytically before evaluation: the TE combination
//! `qᵢ = (1+t) φᵢ'' + 2 φᵢ' - l(l+1) φᵢ/(1+t)` uses the polynomial quotient
//! `φᵢ/(1+t)` obtained by coefficient deflation (never by dividing node
//! values), and the TM combinations `cᵢ± = (1+t) φᵢ' ± {(l+2), -(l-1)} φᵢ`
//! absorb the `(1+t)²` integration weight into the operator brackets.

use crate::polyquad::{legendre_table, LegendreSeries, Polynomial, QuadratureRule};
use crate::{Error, Result};

/// Scalar basis of the TE space at truncation degree `N`: `N - 2` functions,
/// `φ_0 .. φ_{N-4}` followed by `φ_{N-3}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TeBasis {
    n: usize,
    functions: Vec<LegendreSeries>,
    normalizers: Vec<f64>,
}

/// Builds the TE basis; needs `N >= 5` to contain any function.
pub fn build_te_basis(n: usize) -> Result<TeBasis> {
    if n < 5 {
        return Err(Error::TooSmall {
            basis: "TE",
            n,
            min: 5,
        });
    }
    let mut functions = Vec::with_capacity(n - 2);
    let mut normalizers = Vec::with_capacity(n - 3);
    for i in 0..=(n - 4) {
        let fi = i as f64;
        let d = 1.0 / (2.0 * (2.0 * fi + 3.0).powi(2) * (2.0 * fi + 5.0)).sqrt();
        normalizers.push(d);
        let mut coeffs = vec![0.0; i + 5];
        coeffs[i] = d;
        coeffs[i + 2] = -d * 2.0 * (2.0 * fi + 5.0) / (2.0 * fi + 7.0);
        coeffs[i + 4] = d * (2.0 * fi + 3.0) / (2.0 * fi + 7.0);
        functions.push(LegendreSeries::new(coeffs));
    }
    // the boundary-slope member ¼ (t+1)(t-1)²
    let cubic = Polynomial::new(vec![0.25, 0.25])
        .mul(&Polynomial::new(vec![1.0, -2.0, 1.0]).scale(1.0));
    functions.push(LegendreSeries::from_polynomial(&cubic));
    Ok(TeBasis {
        n,
        functions,
        normalizers,
    })
}

impl TeBasis {
    pub fn truncation(&self) -> usize {
        self.n
    }

    /// Number of basis functions, `N - 2`.
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[LegendreSeries] {
        &self.functions
    }

    /// The normalizers `dᵢ = 1/√(2 (2i+3)² (2i+5))`, one per regular member.
    pub fn normalizers(&self) -> &[f64] {
        &self.normalizers
    }

    /// Tabulates values, derivatives and the operator combination `qᵢ` at
    /// the nodes of `rule`, for harmonic degree `l >= 1`.
    pub fn tabulate(&self, l: usize, rule: &QuadratureRule) -> Result<TeTables> {
        assert!(l >= 1, "harmonic degree must be at least 1");
        let nodes = rule.nodes();
        let table = legendre_table(self.n, nodes);
        let ll1 = (l * (l + 1)) as f64;
        let nf = self.functions.len();
        let nq = nodes.len();
        let mut values = vec![vec![0.0; nq]; nf];
        let mut d1 = vec![vec![0.0; nq]; nf];
        let mut d2 = vec![vec![0.0; nq]; nf];
        let mut deflated = vec![vec![0.0; nq]; nf];
        let mut q = vec![vec![0.0; nq]; nf];
        for (i, f) in self.functions.iter().enumerate() {
            let quotient = f.deflate_one_plus_t()?;
            for (j, &t) in nodes.iter().enumerate() {
                let mut v = 0.0;
                let mut dv = 0.0;
                let mut ddv = 0.0;
                for (deg, &c) in f.coeffs().iter().enumerate() {
                    if c != 0.0 {
                        v += c * table.value[deg][j];
                        dv += c * table.d1[deg][j];
                        ddv += c * table.d2[deg][j];
                    }
                }
                values[i][j] = v;
                d1[i][j] = dv;
                d2[i][j] = ddv;
                deflated[i][j] = quotient.eval(t);
                q[i][j] = (1.0 + t) * ddv + 2.0 * dv - ll1 * deflated[i][j];
            }
        }
        Ok(TeTables {
            l,
            rule: rule.clone(),
            values,
            d1,
            d2,
            deflated,
            q,
        })
    }
}

/// Node tables for the TE assembly: one row per basis function.
#[derive(Debug, Clone, PartialEq)]
pub struct TeTables {
    pub l: usize,
    pub rule: QuadratureRule,
    pub values: Vec<Vec<f64>>,
    pub d1: Vec<Vec<f64>>,
    pub d2: Vec<Vec<f64>>,
    /// `φᵢ / (1 + t)`, polynomial by the pole condition.
    pub deflated: Vec<Vec<f64>>,
    /// `qᵢ = (1+t) φᵢ'' + 2 φᵢ' - l(l+1) φᵢ/(1+t)`, i.e. `(1+t) L_l φᵢ`.
    pub q: Vec<Vec<f64>>,
}

/// One 4-tuple member of the TM basis: which scalar function occupies each
/// slot (`None` = zero function).
pub type TmMember = [Option<usize>; 4];

/// TM basis at truncation degree `N`: scalar functions `φ_0 .. φ_N` and
/// `4N + 3` vector members.
#[derive(Debug, Clone, PartialEq)]
pub struct TmBasis {
    n: usize,
    scalars: Vec<LegendreSeries>,
    members: Vec<TmMember>,
}

/// Builds the TM basis; needs `N >= 2`.
pub fn build_tm_basis(n: usize) -> Result<TmBasis> {
    if n < 2 {
        return Err(Error::TooSmall {
            basis: "TM",
            n,
            min: 2,
        });
    }
    let mut scalars = Vec::with_capacity(n + 1);
    for i in 0..=(n - 2) {
        let mut coeffs = vec![0.0; i + 3];
        coeffs[i] = 1.0;
        coeffs[i + 2] = -1.0;
        scalars.push(LegendreSeries::new(coeffs));
    }
    scalars.push(LegendreSeries::new(vec![0.5, -0.5])); // (1 - t)/2
    scalars.push(LegendreSeries::new(vec![1.0])); // 1

    let mut members: Vec<TmMember> = Vec::with_capacity(4 * n + 3);
    for slot in 0..4 {
        for j in 0..n {
            let mut m: TmMember = [None; 4];
            m[slot] = Some(j);
            members.push(m);
        }
    }
    members.push([Some(n), None, Some(n), None]);
    members.push([Some(n), Some(n), None, None]);
    members.push([None, None, Some(n), Some(n)]);
    Ok(TmBasis {
        n,
        scalars,
        members,
    })
}

impl TmBasis {
    pub fn truncation(&self) -> usize {
        self.n
    }

    /// Number of vector members, `4N + 3`.
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn scalars(&self) -> &[LegendreSeries] {
        &self.scalars
    }

    pub fn members(&self) -> &[TmMember] {
        &self.members
    }

    /// `h₁(1) - h₂(1) - h₃(1) + h₄(1)` for one member; zero for every
    /// member by construction.
    pub fn coupling_defect(&self, member: &TmMember) -> f64 {
        let at_one = |slot: Option<usize>| slot.map_or(0.0, |i| self.scalars[i].eval(1.0));
        at_one(member[0]) - at_one(member[1]) - at_one(member[2]) + at_one(member[3])
    }

    /// Tabulates scalar values, derivatives and the weighted operator
    /// combinations `c±` at the nodes of `rule`, for degree `l >= 1`.
    pub fn tabulate(&self, l: usize, rule: &QuadratureRule) -> TmTables {
        assert!(l >= 1, "harmonic degree must be at least 1");
        let nodes = rule.nodes();
        let table = legendre_table(self.n, nodes);
        let lf = l as f64;
        let ns = self.scalars.len();
        let nq = nodes.len();
        let mut values = vec![vec![0.0; nq]; ns];
        let mut d1 = vec![vec![0.0; nq]; ns];
        let mut c_plus = vec![vec![0.0; nq]; ns];
        let mut c_minus = vec![vec![0.0; nq]; ns];
        for (i, f) in self.scalars.iter().enumerate() {
            for (j, &t) in nodes.iter().enumerate() {
                let mut v = 0.0;
                let mut dv = 0.0;
                for (deg, &c) in f.coeffs().iter().enumerate() {
                    if c != 0.0 {
                        v += c * table.value[deg][j];
                        dv += c * table.d1[deg][j];
                    }
                }
                values[i][j] = v;
                d1[i][j] = dv;
                c_plus[i][j] = (1.0 + t) * dv + (lf + 2.0) * v;
                c_minus[i][j] = (1.0 + t) * dv - (lf - 1.0) * v;
            }
        }
        TmTables {
            l,
            rule: rule.clone(),
            values,
            d1,
            c_plus,
            c_minus,
        }
    }
}

/// Node tables for the TM assembly: one row per scalar basis function.
#[derive(Debug, Clone, PartialEq)]
pub struct TmTables {
    pub l: usize,
    pub rule: QuadratureRule,
    pub values: Vec<Vec<f64>>,
    pub d1: Vec<Vec<f64>>,
    /// `(1+t) φᵢ' + (l+2) φᵢ`, i.e. `(1+t) D⁺_{l+2} φᵢ`.
    pub c_plus: Vec<Vec<f64>>,
    /// `(1+t) φᵢ' - (l-1) φᵢ`, i.e. `(1+t) D⁻_{l-1} φᵢ`.
    pub c_minus: Vec<Vec<f64>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::Stream;

    #[test]
    fn te_minimum_size() {
        assert!(matches!(
            build_te_basis(4),
            Err(Error::TooSmall { min: 5, .. })
        ));
        // N = 5 is the smallest space: φ_0, φ_1 and the boundary cubic,
        // matching dim {u ∈ P_5 : u(±1) = 0, u'(1) = 0} = 3.
        let basis = build_te_basis(5).unwrap();
        assert_eq!(basis.len(), 3);
        // last member is ¼ (t+1)(t-1)²
        let last = &basis.functions()[2];
        for j in 0..=20 {
            let t = -1.0 + 0.1 * j as f64;
            let expect = 0.25 * (t + 1.0) * (t - 1.0) * (t - 1.0);
            assert!((last.eval(t) - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn te_normalizer_d0() {
        let basis = build_te_basis(8).unwrap();
        assert!((basis.normalizers()[0] - 1.0 / 90.0f64.sqrt()).abs() < 1e-17);
    }

    #[test]
    fn te_dimension_count() {
        for n in [5usize, 8, 13, 30] {
            assert_eq!(build_te_basis(n).unwrap().len(), n - 2);
        }
    }

    #[test]
    fn te_boundary_conditions() {
        let basis = build_te_basis(18).unwrap();
        for f in basis.functions() {
            assert!(f.eval(1.0).abs() < 1e-12);
            assert!(f.eval(-1.0).abs() < 1e-12);
            assert!(f.derivative().eval(1.0).abs() < 1e-12);
        }
        // 100 random combinations stay in the space
        let mut stream = Stream::new(2024);
        for _ in 0..100 {
            let mut at_p1 = 0.0;
            let mut at_m1 = 0.0;
            let mut d_at_p1 = 0.0;
            for f in basis.functions() {
                let c = stream.next_f64();
                at_p1 += c * f.eval(1.0);
                at_m1 += c * f.eval(-1.0);
                d_at_p1 += c * f.derivative().eval(1.0);
            }
            assert!(at_p1.abs() < 1e-12);
            assert!(at_m1.abs() < 1e-12);
            assert!(d_at_p1.abs() < 1e-12);
        }
    }

    #[test]
    fn tm_minimum_size_and_count() {
        assert!(matches!(
            build_tm_basis(1),
            Err(Error::TooSmall { min: 2, .. })
        ));
        for n in [2usize, 5, 30] {
            let basis = build_tm_basis(n).unwrap();
            assert_eq!(basis.len(), 4 * n + 3);
            assert_eq!(basis.scalars().len(), n + 1);
        }
    }

    #[test]
    fn tm_scalar_endpoints() {
        let basis = build_tm_basis(9).unwrap();
        let n = basis.truncation();
        for i in 0..=(n - 2) {
            assert!(basis.scalars()[i].eval(1.0).abs() < 1e-14);
            assert!(basis.scalars()[i].eval(-1.0).abs() < 1e-14);
        }
        assert!(basis.scalars()[n - 1].eval(1.0).abs() < 1e-15);
        assert!((basis.scalars()[n - 1].eval(-1.0) - 1.0).abs() < 1e-15);
        assert!((basis.scalars()[n].eval(0.3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tm_coupling_constraint() {
        let basis = build_tm_basis(7).unwrap();
        for member in basis.members() {
            assert!(basis.coupling_defect(member).abs() < 1e-13);
        }
        // the explicitly coupled member ψ_{4N}
        let m = &basis.members()[4 * 7];
        let at_one = |slot: Option<usize>| slot.map_or(0.0, |i| basis.scalars()[i].eval(1.0));
        assert!((at_one(m[0]) - at_one(m[1]) - 1.0).abs() < 1e-14);
        assert!((at_one(m[2]) - at_one(m[3]) - 1.0).abs() < 1e-14);
        // random span combinations
        let mut stream = Stream::new(99);
        for _ in 0..50 {
            let mut defect = 0.0;
            for member in basis.members() {
                defect += stream.next_f64() * basis.coupling_defect(member);
            }
            assert!(defect.abs() < 1e-13);
        }
    }

    #[test]
    fn te_q_matches_direct_division() {
        // q_i must equal (1+t) L_l φ_i, checked against direct pointwise
        // evaluation (division allowed away from the endpoint).
        let basis = build_te_basis(9).unwrap();
        let rule = QuadratureRule::gauss_legendre(24);
        for l in [1usize, 2, 5] {
            let tables = basis.tabulate(l, &rule).unwrap();
            let ll1 = (l * (l + 1)) as f64;
            for (i, f) in basis.functions().iter().enumerate() {
                let p = f.to_polynomial();
                let dp = p.derivative();
                let ddp = dp.derivative();
                let row_scale = tables.q[i]
                    .iter()
                    .fold(0.0f64, |m, &v| m.max(v.abs()))
                    .max(1e-300);
                for (j, &t) in rule.nodes().iter().enumerate() {
                    let direct =
                        (1.0 + t) * ddp.eval(t) + 2.0 * dp.eval(t) - ll1 * p.eval(t) / (1.0 + t);
                    assert!(
                        (tables.q[i][j] - direct).abs() <= 1e-11 * row_scale,
                        "l={l} i={i} t={t}: {} vs {direct}",
                        tables.q[i][j]
                    );
                }
            }
        }
    }

    #[test]
    fn te_q_of_cubic_member_closed_form() {
        // For l=1 and φ = ¼(t+1)(t-1)²:
        // q = (1+t)(3t-1)/2 + 2(3t²-2t-1)/4 - 2(1-t)²/4
        let basis = build_te_basis(10).unwrap();
        let rule = QuadratureRule::gauss_legendre(36);
        let tables = basis.tabulate(1, &rule).unwrap();
        let last = basis.len() - 1;
        for (j, &t) in rule.nodes().iter().enumerate() {
            let expect = (1.0 + t) * (3.0 * t - 1.0) / 2.0
                + 2.0 * (3.0 * t * t - 2.0 * t - 1.0) / 4.0
                - 2.0 * (1.0 - t) * (1.0 - t) / 4.0;
            assert!((tables.q[last][j] - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn tm_c_plus_polynomial_oracle() {
        // l=1: c_0⁺(t) = (1+t) φ_0'(t) + 3 φ_0(t) with φ_0 = L_0 - L_2
        let basis = build_tm_basis(6).unwrap();
        let rule = QuadratureRule::gauss_legendre(21);
        let tables = basis.tabulate(1, &rule);
        let phi0 = Polynomial::legendre(0).sub(&Polynomial::legendre(2));
        let dphi0 = phi0.derivative();
        for (j, &t) in rule.nodes().iter().enumerate() {
            let expect = (1.0 + t) * dphi0.eval(t) + 3.0 * phi0.eval(t);
            assert!((tables.c_plus[0][j] - expect).abs() < 1e-13);
        }
        // at t = 0 this is φ_0'(0) + 3 φ_0(0) = 0 + 4.5
        assert!((dphi0.eval(0.0) + 3.0 * phi0.eval(0.0) - 4.5).abs() < 1e-15);
    }

    #[test]
    fn tables_are_deterministic() {
        let rule = QuadratureRule::gauss_legendre(36);
        let te1 = build_te_basis(10).unwrap().tabulate(2, &rule).unwrap();
        let te2 = build_te_basis(10).unwrap().tabulate(2, &rule).unwrap();
        assert_eq!(te1, te2);
        let tm1 = build_tm_basis(10).unwrap().tabulate(2, &rule);
        let tm2 = build_tm_basis(10).unwrap().tabulate(2, &rule);
        assert_eq!(tm1, tm2);
    }
}
