//! Numerical validation of the vector spherical harmonic identities that
//! justify reducing the Maxwell problem to one-dimensional TE/TM families.
//!
//! Everything here is hard-coded for low degree (`l <= 3`): closed-form
//! orthonormal harmonics with the Condon–Shortley phase, the three vector
//! families
//!
//! ```text
//! T = ∇_S Y × e_r,   V = (l+1) Y e_r - ∇_S Y,   W = l Y e_r + ∇_S Y,
//! ```
//!
//! surface-integral checks of their orthogonality relations (exact tensor
//! quadrature), and finite-difference checks of the curl identities
//! `curl(f V) = (d⁺_{l+2} f) T`, `curl(f W) = -(d⁻_{l-1} f) T`,
//! `(2l+1) curl(f T) = (l+1)(d⁺_{l+1} f) W - l (d⁻_l f) V` for monomial
//! radial profiles. This module validates the reduction; it plays no part
//! in the solvers.

use num_complex::Complex64;

use crate::{Error, Result};

/// A point on the unit sphere, poles excluded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    /// Colatitude in `(0, π)`.
    pub theta: f64,
    /// Longitude in `[0, 2π)`.
    pub phi: f64,
}

/// `Y_l^m` and its tangential gradient at one point, in the moving frame:
/// `∇_S Y = grad_theta e_θ + grad_phi e_φ`.
#[derive(Debug, Clone, Copy)]
pub struct YlmEval {
    pub value: Complex64,
    pub grad_theta: Complex64,
    pub grad_phi: Complex64,
}

/// The three vector harmonics at one point, components in `(e_r, e_θ, e_φ)`.
#[derive(Debug, Clone, Copy)]
pub struct VshValue {
    pub t: [Complex64; 3],
    pub v: [Complex64; 3],
    pub w: [Complex64; 3],
}

/// Associated Legendre `P_l^m(cos θ)` (Condon–Shortley) and its θ-derivative,
/// closed forms for `l <= 3`, `0 <= m <= l`.
fn assoc_legendre(l: usize, m: usize, theta: f64) -> (f64, f64) {
    let x = theta.cos();
    let s = theta.sin();
    match (l, m) {
        (0, 0) => (1.0, 0.0),
        (1, 0) => (x, -s),
        (1, 1) => (-s, -x),
        (2, 0) => (0.5 * (3.0 * x * x - 1.0), -3.0 * x * s),
        (2, 1) => (-3.0 * s * x, -3.0 * (x * x - s * s)),
        (2, 2) => (3.0 * s * s, 6.0 * s * x),
        (3, 0) => (
            0.5 * (5.0 * x * x * x - 3.0 * x),
            -1.5 * s * (5.0 * x * x - 1.0),
        ),
        (3, 1) => (
            -1.5 * (5.0 * x * x - 1.0) * s,
            -1.5 * (-10.0 * x * s * s + (5.0 * x * x - 1.0) * x),
        ),
        (3, 2) => (15.0 * s * s * x, 15.0 * s * (2.0 * x * x - s * s)),
        (3, 3) => (-15.0 * s * s * s, -45.0 * s * s * x),
        _ => unreachable!("range checked by the caller"),
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Orthonormal spherical harmonic and tangential gradient, `l <= 3`.
pub fn ylm(l: i64, m: i64, point: SphericalPoint) -> Result<YlmEval> {
    if !(0..=3).contains(&l) || m.abs() > l {
        return Err(Error::OutOfRange { l, m });
    }
    let lu = l as usize;
    let mu = m.unsigned_abs() as usize;
    let norm = ((2.0 * l as f64 + 1.0) / (4.0 * std::f64::consts::PI) * factorial(lu - mu)
        / factorial(lu + mu))
    .sqrt();
    let (p, dp) = assoc_legendre(lu, mu, point.theta);
    let phase = Complex64::from_polar(1.0, mu as f64 * point.phi);
    let mut value = norm * p * phase;
    let mut grad_theta = norm * dp * phase;
    // (1/sinθ) ∂_φ Y
    let mut grad_phi = Complex64::new(0.0, mu as f64) * norm * p * phase / point.theta.sin();
    if m < 0 {
        // Y_l^{-m} = (-1)^m conj(Y_l^m)
        let sign = if mu.is_multiple_of(2) { 1.0 } else { -1.0 };
        value = sign * value.conj();
        grad_theta = sign * grad_theta.conj();
        grad_phi = sign * grad_phi.conj();
    }
    Ok(YlmEval {
        value,
        grad_theta,
        grad_phi,
    })
}

/// The vector harmonics `T`, `V`, `W` at one point.
pub fn vsh(l: i64, m: i64, point: SphericalPoint) -> Result<VshValue> {
    let y = ylm(l, m, point)?;
    let zero = Complex64::new(0.0, 0.0);
    let lf = Complex64::new(l as f64, 0.0);
    Ok(VshValue {
        // ∇_S Y × e_r = (1/sinθ) ∂_φ Y e_θ - ∂_θ Y e_φ
        t: [zero, y.grad_phi, -y.grad_theta],
        v: [(lf + 1.0) * y.value, -y.grad_theta, -y.grad_phi],
        w: [lf * y.value, y.grad_theta, y.grad_phi],
    })
}

/// Surface tensor-product quadrature: Gauss–Legendre in `cos θ`, uniform
/// trapezoid in `φ` (exact for trigonometric polynomials).
fn surface_quadrature(mut f: impl FnMut(SphericalPoint) -> Complex64) -> Complex64 {
    let rule = crate::polyquad::QuadratureRule::gauss_legendre(32);
    let nphi = 64usize;
    let dphi = 2.0 * std::f64::consts::PI / nphi as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let theta = x.acos();
        for k in 0..nphi {
            let phi = k as f64 * dphi;
            total += w * dphi * f(SphericalPoint { theta, phi });
        }
    }
    total
}

/// All nine surface integrals between the `(l, m)` and `(l2, m2)` families.
#[derive(Debug, Clone, Copy)]
pub struct Lemma31Report {
    /// `integrals[a][b] = ∫ X_a(l,m) · conj(X_b(l2,m2)) dS` with the family
    /// order `(T, V, W)`.
    pub integrals: [[Complex64; 3]; 3],
    /// Largest deviation from the expected values
    /// `diag(l(l+1), (l+1)(2l+1), l(2l+1)) δ_{ll'} δ_{mm'}`.
    pub max_error: f64,
}

/// Verifies the orthogonality relations between two index pairs.
pub fn check_lemma31(l: i64, m: i64, l2: i64, m2: i64) -> Result<Lemma31Report> {
    let mut integrals = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (a, row) in integrals.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            *slot = surface_quadrature(|p| {
                let left = vsh(l, m, p).expect("range checked below");
                let right = vsh(l2, m2, p).expect("range checked below");
                let pick = |v: &VshValue, i: usize| match i {
                    0 => v.t,
                    1 => v.v,
                    _ => v.w,
                };
                let x = pick(&left, a);
                let y = pick(&right, b);
                x[0] * y[0].conj() + x[1] * y[1].conj() + x[2] * y[2].conj()
            });
        }
    }
    // validate the ranges once (surface_quadrature already evaluated; a bad
    // range would have panicked there otherwise)
    ylm(l, m, SphericalPoint { theta: 1.0, phi: 0.0 })?;
    ylm(l2, m2, SphericalPoint { theta: 1.0, phi: 0.0 })?;

    let same = l == l2 && m == m2;
    let lf = l as f64;
    let expected = [
        lf * (lf + 1.0),
        (lf + 1.0) * (2.0 * lf + 1.0),
        lf * (2.0 * lf + 1.0),
    ];
    let mut max_error = 0.0f64;
    for (a, row) in integrals.iter().enumerate() {
        for (b, value) in row.iter().enumerate() {
            let want = if same && a == b { expected[a] } else { 0.0 };
            max_error = max_error.max((value - want).norm());
        }
    }
    Ok(Lemma31Report {
        integrals,
        max_error,
    })
}

/// Which vector family a curl identity acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    T,
    V,
    W,
}

const FD_STEP: f64 = 1e-5;

fn frame(theta: f64, phi: f64) -> [[f64; 3]; 3] {
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    [
        [st * cp, st * sp, ct],    // e_r
        [ct * cp, ct * sp, -st],   // e_θ
        [-sp, cp, 0.0],            // e_φ
    ]
}

/// `f(r) X_l^m(θ, φ)` with `f = r^s`, as a Cartesian vector field.
fn field_cartesian(family: Family, l: i64, m: i64, s: u32, x: [f64; 3]) -> [Complex64; 3] {
    let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    let theta = (x[2] / r).acos();
    let phi = x[1].atan2(x[0]);
    let value = vsh(l, m, SphericalPoint { theta, phi }).expect("range checked by caller");
    let comps = match family {
        Family::T => value.t,
        Family::V => value.v,
        Family::W => value.w,
    };
    let f = r.powi(s as i32);
    let e = frame(theta, phi);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for axis in 0..3 {
        out[axis] = f * (comps[0] * e[0][axis] + comps[1] * e[1][axis] + comps[2] * e[2][axis]);
    }
    out
}

/// Central-difference curl of the field in Cartesian coordinates.
fn curl_fd(family: Family, l: i64, m: i64, s: u32, x: [f64; 3]) -> [Complex64; 3] {
    let mut deriv = [[Complex64::new(0.0, 0.0); 3]; 3]; // deriv[i][c] = ∂_i F_c
    for i in 0..3 {
        let mut xp = x;
        let mut xm = x;
        xp[i] += FD_STEP;
        xm[i] -= FD_STEP;
        let fp = field_cartesian(family, l, m, s, xp);
        let fm = field_cartesian(family, l, m, s, xm);
        for c in 0..3 {
            deriv[i][c] = (fp[c] - fm[c]) / (2.0 * FD_STEP);
        }
    }
    [
        deriv[1][2] - deriv[2][1],
        deriv[2][0] - deriv[0][2],
        deriv[0][1] - deriv[1][0],
    ]
}

/// Verifies the three curl identities for `f(r) = r^s`, returning the
/// largest relative error over a deterministic grid of sample points with
/// `r ∈ [0.5, 1.5]`. Finite differences limit the achievable accuracy to
/// about 1e-6.
pub fn check_lemma32(l: i64, m: i64, radial_exponent: u32) -> Result<f64> {
    if !(1..=2).contains(&l) || m.abs() > l {
        return Err(Error::OutOfRange { l, m });
    }
    let s = radial_exponent;
    assert!((1..=4).contains(&s), "radial exponent must be 1..=4");
    let lf = l as f64;
    let sf = s as f64;

    let mut max_rel = 0.0f64;
    for &r in &[0.6, 1.0, 1.45] {
        for &theta in &[0.5, 1.2, 2.3] {
            for &phi in &[0.4, 2.0, 4.4] {
                let point = SphericalPoint { theta, phi };
                let x = [
                    r * theta.sin() * phi.cos(),
                    r * theta.sin() * phi.sin(),
                    r * theta.cos(),
                ];
                let harmonics = vsh(l, m, point)?;
                let e = frame(theta, phi);
                let to_cart = |comps: [Complex64; 3]| {
                    let mut out = [Complex64::new(0.0, 0.0); 3];
                    for axis in 0..3 {
                        out[axis] = comps[0] * e[0][axis]
                            + comps[1] * e[1][axis]
                            + comps[2] * e[2][axis];
                    }
                    out
                };
                let rs1 = r.powi(s as i32 - 1);

                // curl(f V) = (s + l + 2) r^{s-1} T
                let got = curl_fd(Family::V, l, m, s, x);
                let want = to_cart(harmonics.t.map(|c| c * (sf + lf + 2.0) * rs1));
                max_rel = max_rel.max(rel_err(&got, &want));

                // curl(f W) = -(s - l + 1) r^{s-1} T
                let got = curl_fd(Family::W, l, m, s, x);
                let want = to_cart(harmonics.t.map(|c| -c * (sf - (lf - 1.0)) * rs1));
                max_rel = max_rel.max(rel_err(&got, &want));

                // (2l+1) curl(f T) = (l+1)(s+l+1) r^{s-1} W - l (s-l) r^{s-1} V
                let got = curl_fd(Family::T, l, m, s, x);
                let scale = 1.0 / (2.0 * lf + 1.0);
                let mut want = [Complex64::new(0.0, 0.0); 3];
                let wc = to_cart(harmonics.w);
                let vc = to_cart(harmonics.v);
                for axis in 0..3 {
                    want[axis] = scale
                        * rs1
                        * ((lf + 1.0) * (sf + lf + 1.0) * wc[axis] - lf * (sf - lf) * vc[axis]);
                }
                max_rel = max_rel.max(rel_err(&got, &want));
            }
        }
    }
    Ok(max_rel)
}

fn rel_err(got: &[Complex64; 3], want: &[Complex64; 3]) -> f64 {
    let scale = want
        .iter()
        .map(|c| c.norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    got.iter()
        .zip(want)
        .map(|(g, w)| (g - w).norm())
        .fold(0.0f64, f64::max)
        / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::Stream;

    #[test]
    fn y00_is_constant() {
        let expect = 0.5 / std::f64::consts::PI.sqrt();
        for (theta, phi) in [(0.3, 0.1), (1.5, 2.2), (2.9, 5.8)] {
            let y = ylm(0, 0, SphericalPoint { theta, phi }).unwrap();
            assert!((y.value.re - expect).abs() < 1e-15);
            assert!(y.value.im.abs() < 1e-15);
        }
    }

    #[test]
    fn out_of_range_rejected() {
        let p = SphericalPoint {
            theta: 1.0,
            phi: 0.0,
        };
        assert!(matches!(ylm(4, 0, p), Err(Error::OutOfRange { .. })));
        assert!(matches!(ylm(2, 3, p), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn harmonics_are_normalized() {
        for l in 0..=3i64 {
            for m in -l..=l {
                let norm = surface_quadrature(|p| {
                    let y = ylm(l, m, p).unwrap().value;
                    y * y.conj()
                });
                assert!(
                    (norm.re - 1.0).abs() < 1e-12 && norm.im.abs() < 1e-12,
                    "({l},{m}): {norm}"
                );
            }
        }
    }

    #[test]
    fn laplace_beltrami_eigenfunction() {
        // finite-difference Δ_S Y_2^1 = -6 Y_2^1 at 50 random points
        let mut stream = Stream::new(7);
        let h = 1e-4;
        for _ in 0..50 {
            let theta = 0.4 + (stream.next_f64() * 0.5 + 0.5) * 2.3;
            let phi = (stream.next_f64() * 0.5 + 0.5) * 6.28;
            let y = |th: f64, ph: f64| {
                ylm(2, 1, SphericalPoint { theta: th, phi: ph })
                    .unwrap()
                    .value
            };
            let st = theta.sin();
            let d_theta = (y(theta + h, phi) - y(theta - h, phi)) / (2.0 * h);
            let dd_theta =
                (y(theta + h, phi) - 2.0 * y(theta, phi) + y(theta - h, phi)) / (h * h);
            let dd_phi = (y(theta, phi + h) - 2.0 * y(theta, phi) + y(theta, phi - h)) / (h * h);
            let laplacian = dd_theta + (theta.cos() / st) * d_theta + dd_phi / (st * st);
            let expect = -6.0 * y(theta, phi);
            assert!(
                (laplacian - expect).norm() < 1e-6 * expect.norm().max(1.0),
                "Δ_S Y_2^1 mismatch at ({theta}, {phi})"
            );
        }
    }

    #[test]
    fn lemma31_diagonal_values_l1() {
        let report = check_lemma31(1, 0, 1, 0).unwrap();
        assert!((report.integrals[0][0].re - 2.0).abs() < 1e-12);
        assert!((report.integrals[1][1].re - 6.0).abs() < 1e-12);
        assert!((report.integrals[2][2].re - 3.0).abs() < 1e-12);
        assert!(report.max_error < 1e-12);
    }

    #[test]
    fn lemma31_cross_degree_orthogonality() {
        let report = check_lemma31(1, 0, 2, 0).unwrap();
        assert!(report.max_error < 1e-12);
        let report = check_lemma31(2, 1, 2, 1).unwrap();
        assert!((report.integrals[1][1].re - 15.0).abs() < 1e-12);
        assert!(report.max_error < 1e-12);
    }

    #[test]
    fn lemma32_curl_identities() {
        // includes the spec'd spot checks: curl(r V_1^0) = 4 T_1^0 and
        // curl(r² W_1^0) = -2r T_1^0 are the s=1/s=2 members here
        for s in 1..=4u32 {
            for (l, m) in [(1i64, 0i64), (1, 1), (2, 0), (2, 2)] {
                let err = check_lemma32(l, m, s).unwrap();
                assert!(err <= 1e-5, "l={l} m={m} s={s}: {err}");
            }
        }
    }
}
