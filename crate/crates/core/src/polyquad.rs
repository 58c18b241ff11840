//! Legendre polynomials, Gauss–Legendre quadrature, and polynomial
//! manipulation.
//!
//! Two polynomial representations coexist here on purpose:
//!
//! * [`Polynomial`] stores monomial coefficients. Arithmetic on it (products,
//!   synthetic division) is exact, which makes it the right tool for
//!   small-degree work and for independent test oracles. Monomial
//!   coefficients of Legendre combinations grow like `2^degree`, so this
//!   representation loses accuracy rapidly beyond degree ~25 and is not used
//!   on the assembly path.
//! * [`LegendreSeries`] stores Legendre coefficients and only supports the
//!   operations needed by the basis pipeline (evaluation, differentiation,
//!   multiplication by `1 + t`, division by `1 + t`). All of them are stable
//!   three-term recurrences, so the pipeline keeps full accuracy up to the
//!   largest truncation degrees used by the solvers (around 100).

use crate::{Error, Result};

/// Value and first derivative of the Legendre polynomial `L_i` at `t`.
///
/// Uses the three-term recurrence for the values and its differentiated
/// form for the derivatives, so it is well defined on the closed interval
/// including the endpoints.
pub fn legendre_eval(degree: usize, t: f64) -> (f64, f64) {
    if degree == 0 {
        return (1.0, 0.0);
    }
    let (mut vp, mut dp) = (1.0, 0.0); // L_{i-1}, L'_{i-1}
    let (mut v, mut d) = (t, 1.0); // L_i, L'_i
    for i in 1..degree {
        let a = (2 * i + 1) as f64;
        let b = i as f64;
        let c = (i + 1) as f64;
        let vn = (a * t * v - b * vp) / c;
        let dn = (a * (t * d + v) - b * dp) / c;
        vp = v;
        dp = d;
        v = vn;
        d = dn;
    }
    (v, d)
}

/// Gauss–Legendre quadrature rule on `(-1, 1)`.
///
/// Nodes are strictly increasing and symmetric about 0; weights are positive
/// and sum to 2. A rule with `q` nodes integrates polynomials of degree up to
/// `2q - 1` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the `q`-point rule by Newton iteration on the Legendre
    /// recurrence, starting from the Chebyshev-angle guesses.
    ///
    /// # Panics
    /// Panics if `q == 0`.
    pub fn gauss_legendre(q: usize) -> Self {
        assert!(q >= 1, "a quadrature rule needs at least one node");
        let mut nodes = vec![0.0; q];
        let mut weights = vec![0.0; q];
        // Positive half; the negative half is the mirror image, which keeps
        // the rule exactly symmetric.
        for k in 0..q.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (q as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_pair_interior(q, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-3) {
                    break;
                }
            }
            let (_, d) = legendre_pair_interior(q, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            let hi = q - 1 - k;
            nodes[hi] = x;
            weights[hi] = w;
            nodes[k] = -x;
            weights[k] = w;
            if 2 * k + 1 == q {
                nodes[k] = 0.0;
            }
        }
        QuadratureRule { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Approximates the integral of `f` over `(-1, 1)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// `(L_q(x), L_q'(x))` for `x` strictly inside the interval; uses the
/// derivative identity `(x² - 1) L' = q (x L - L_{q-1})`, which is cheaper
/// than carrying the differentiated recurrence while Newton iterates.
fn legendre_pair_interior(q: usize, x: f64) -> (f64, f64) {
    let (mut vp, mut v) = (1.0, x);
    for i in 1..q {
        let vn = ((2 * i + 1) as f64 * x * v - i as f64 * vp) / (i + 1) as f64;
        vp = v;
        v = vn;
    }
    let d = q as f64 * (x * v - vp) / (x * x - 1.0);
    (v, d)
}

/// Dense polynomial in monomial form, coefficients in ascending powers.
///
/// Trailing zero coefficients are trimmed, so `degree` is the index of the
/// last nonzero coefficient. All arithmetic is exact up to rounding of the
/// individual coefficient operations.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Polynomial { coeffs };
        p.trim();
        p
    }

    /// Monomial coefficients of the Legendre polynomial `L_i`.
    ///
    /// Exact only while the coefficients stay within the f64 integer range;
    /// intended for small degrees (tests and derived oracles).
    pub fn legendre(i: usize) -> Self {
        let mut prev = Polynomial::new(vec![1.0]);
        if i == 0 {
            return prev;
        }
        let mut cur = Polynomial::new(vec![0.0, 1.0]);
        for k in 1..i {
            let a = (2 * k + 1) as f64 / (k + 1) as f64;
            let b = k as f64 / (k + 1) as f64;
            let next = cur.shift_up_scaled(a).sub(&prev.scale(b));
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::new(vec![]);
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, &c)| (j + 1) as f64 * c)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Polynomial::new(vec![]);
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            out[i] += c;
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| s * c).collect())
    }

    /// `∫_{-1}^{1} p(t) dt`, exactly from the coefficients.
    pub fn integral(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| if j % 2 == 0 { 2.0 * c / (j as f64 + 1.0) } else { 0.0 })
            .sum()
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, &c| m.max(c.abs()))
    }

    /// Synthetic division by `(1 + t)` for polynomials vanishing at `t = -1`.
    ///
    /// Returns `q` with `(1 + t) q(t) = p(t)` and `deg q = deg p - 1`. Fails
    /// with [`Error::NonVanishing`] if the remainder `p(-1)` exceeds
    /// `1e-12 · max|coeff|`.
    pub fn deflate_at_minus_one(&self) -> Result<Polynomial> {
        let tolerance = 1e-12 * self.max_norm();
        if self.coeffs.len() <= 1 {
            let remainder = self.eval(-1.0);
            return if remainder.abs() <= tolerance {
                Ok(Polynomial::new(vec![]))
            } else {
                Err(Error::NonVanishing {
                    remainder,
                    tolerance,
                })
            };
        }
        let d = self.coeffs.len() - 1;
        let mut quotient = vec![0.0; d];
        quotient[d - 1] = self.coeffs[d];
        for j in (1..d).rev() {
            quotient[j - 1] = self.coeffs[j] - quotient[j];
        }
        let remainder = self.coeffs[0] - quotient[0];
        if remainder.abs() > tolerance {
            return Err(Error::NonVanishing {
                remainder,
                tolerance,
            });
        }
        Ok(Polynomial::new(quotient))
    }

    /// `a * t * p(t)`, used by the Legendre recurrence.
    fn shift_up_scaled(&self, a: f64) -> Polynomial {
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            out[i + 1] = a * c;
        }
        Polynomial::new(out)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }
}

/// Polynomial stored by its Legendre coefficients, `p = Σ aᵢ Lᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries {
    coeffs: Vec<f64>,
}

impl LegendreSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut s = LegendreSeries { coeffs };
        while s.coeffs.last() == Some(&0.0) {
            s.coeffs.pop();
        }
        s
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Clenshaw evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.coeffs.len();
        if n == 0 {
            return 0.0;
        }
        let (mut b1, mut b2) = (0.0, 0.0);
        for k in (1..n).rev() {
            let kf = k as f64;
            let b0 =
                self.coeffs[k] + (2.0 * kf + 1.0) / (kf + 1.0) * t * b1 - (kf + 1.0) / (kf + 2.0) * b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + t * b1 - 0.5 * b2
    }

    pub fn eval_deriv(&self, t: f64) -> f64 {
        self.derivative().eval(t)
    }

    /// Legendre coefficients of `p'`, via `cᵢ = (2i+1) Σ_{j>i, j-i odd} aⱼ`.
    pub fn derivative(&self) -> LegendreSeries {
        let n = self.coeffs.len();
        if n <= 1 {
            return LegendreSeries::new(vec![]);
        }
        let mut out = vec![0.0; n - 1];
        // Two running tails, split by parity of the source index.
        let mut tail = [0.0f64; 2];
        for i in (0..n - 1).rev() {
            tail[(i + 1) % 2] += self.coeffs[i + 1];
            out[i] = (2.0 * i as f64 + 1.0) * tail[(i + 1) % 2];
        }
        LegendreSeries::new(out)
    }

    /// Legendre coefficients of `(1 + t) p(t)`.
    pub fn mul_one_plus_t(&self) -> LegendreSeries {
        let n = self.coeffs.len();
        if n == 0 {
            return LegendreSeries::new(vec![]);
        }
        let mut out = vec![0.0; n + 1];
        for (j, &a) in self.coeffs.iter().enumerate() {
            let jf = j as f64;
            out[j] += a;
            out[j + 1] += a * (jf + 1.0) / (2.0 * jf + 1.0);
            if j > 0 {
                out[j - 1] += a * jf / (2.0 * jf + 1.0);
            }
        }
        LegendreSeries::new(out)
    }

    /// Division by `(1 + t)` for series vanishing at `t = -1`.
    ///
    /// Solves `(1 + t) q = p` for the coefficients of `q` by the downward
    /// recurrence obtained from `t Lⱼ = ((j+1) L_{j+1} + j L_{j-1})/(2j+1)`;
    /// the left-over constant equation is the remainder `p(-1)`.
    pub fn deflate_one_plus_t(&self) -> Result<LegendreSeries> {
        let tolerance = 1e-12 * self.coeffs.iter().fold(0.0f64, |m, &c| m.max(c.abs()));
        let d = match self.coeffs.len() {
            0 => return Ok(LegendreSeries::new(vec![])),
            1 => {
                let remainder = self.coeffs[0];
                return if remainder.abs() <= tolerance {
                    Ok(LegendreSeries::new(vec![]))
                } else {
                    Err(Error::NonVanishing {
                        remainder,
                        tolerance,
                    })
                };
            }
            len => len - 1,
        };
        let mut b = vec![0.0; d];
        b[d - 1] = self.coeffs[d] * (2.0 * d as f64 - 1.0) / d as f64;
        for i in (1..d).rev() {
            let above = if i < d - 1 {
                b[i + 1] * (i as f64 + 1.0) / (2.0 * i as f64 + 3.0)
            } else {
                0.0
            };
            b[i - 1] = (self.coeffs[i] - b[i] - above) * (2.0 * i as f64 - 1.0) / i as f64;
        }
        let upper = if d > 1 { b[1] / 3.0 } else { 0.0 };
        let remainder = self.coeffs[0] - b[0] - upper;
        if remainder.abs() > tolerance {
            return Err(Error::NonVanishing {
                remainder,
                tolerance,
            });
        }
        Ok(LegendreSeries::new(b))
    }

    /// Monomial form; small degrees only (test convenience).
    pub fn to_polynomial(&self) -> Polynomial {
        let mut out = Polynomial::new(vec![]);
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a != 0.0 {
                out = out.add(&Polynomial::legendre(i).scale(a));
            }
        }
        out
    }

    /// Legendre coefficients of a monomial-form polynomial, by Horner over
    /// the multiply-by-t recurrence. Exact up to rounding for small degrees.
    pub fn from_polynomial(p: &Polynomial) -> LegendreSeries {
        let mut s = LegendreSeries::new(vec![]);
        for &c in p.coeffs().iter().rev() {
            s = s.mul_t();
            if s.coeffs.is_empty() {
                s.coeffs.push(c);
            } else {
                s.coeffs[0] += c;
            }
        }
        s
    }

    /// Legendre coefficients of `t · p(t)`.
    fn mul_t(&self) -> LegendreSeries {
        let n = self.coeffs.len();
        if n == 0 {
            return LegendreSeries::new(vec![]);
        }
        let mut out = vec![0.0; n + 1];
        for (j, &a) in self.coeffs.iter().enumerate() {
            let jf = j as f64;
            out[j + 1] += a * (jf + 1.0) / (2.0 * jf + 1.0);
            if j > 0 {
                out[j - 1] += a * jf / (2.0 * jf + 1.0);
            }
        }
        LegendreSeries::new(out)
    }
}

/// Values and first two derivatives of `L_0 .. L_maxdeg` at a set of points,
/// filled by the upward recurrences. Row `i` holds degree `i`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct LegendreTable {
    pub value: Vec<Vec<f64>>,
    pub d1: Vec<Vec<f64>>,
    pub d2: Vec<Vec<f64>>,
}

pub(crate) fn legendre_table(maxdeg: usize, points: &[f64]) -> LegendreTable {
    let np = points.len();
    let mut value = vec![vec![0.0; np]; maxdeg + 1];
    let mut d1 = vec![vec![0.0; np]; maxdeg + 1];
    let mut d2 = vec![vec![0.0; np]; maxdeg + 1];
    for (j, &t) in points.iter().enumerate() {
        value[0][j] = 1.0;
        if maxdeg >= 1 {
            value[1][j] = t;
            d1[1][j] = 1.0;
        }
        for i in 1..maxdeg {
            let a = (2 * i + 1) as f64;
            let b = i as f64;
            let c = (i + 1) as f64;
            value[i + 1][j] = (a * t * value[i][j] - b * value[i - 1][j]) / c;
            d1[i + 1][j] = (a * (t * d1[i][j] + value[i][j]) - b * d1[i - 1][j]) / c;
            d2[i + 1][j] = (a * (t * d2[i][j] + 2.0 * d1[i][j]) - b * d2[i - 1][j]) / c;
        }
    }
    LegendreTable { value, d1, d2 }
}
