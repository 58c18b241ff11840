//! Analytic cross-check for the constant-index TE mode.
//!
//! The radial TE equations with constant `n` are solved by spherical Bessel
//! functions regular at the origin, `j_l(√n k r)` inside and `j_l(k r)` for
//! the reference field; matching value and radial derivative at `r = R`
//! gives the characteristic determinant
//!
//! ```text
//! F(k) = √n j_l'(√n k R) j_l(k R) - j_l'(k R) j_l(√n k R)
//! ```
//!
//! (a common factor `k` from the derivative row is dropped, which removes
//! the spurious root at `k = 0`). Transmission eigenvalues for constant `n`
//! are exactly the positive roots of `F`.

/// Spherical Bessel value and derivative at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub j: f64,
    pub jp: f64,
}

/// Highest order supported by [`spherical_bessel`].
pub const MAX_ORDER: usize = 10;

/// Below this argument the ascending series is used for every order: the
/// closed forms subtract nearly equal `1/xᵏ` terms and lose all accuracy as
/// `x → 0`.
const SERIES_CUTOFF: f64 = 0.5;

/// `j_l(x)` and `j_l'(x)` for `0 <= l <= 10`, `x > 0`.
///
/// Closed forms for `l <= 2`, downward (Miller) recurrence above, and the
/// ascending series for small arguments; the derivative comes from
/// `j_l' = j_{l-1} - (l+1) j_l / x`.
pub fn spherical_bessel(l: usize, x: f64) -> BesselEval {
    assert!(l <= MAX_ORDER, "order {l} above supported range");
    assert!(x > 0.0, "argument must be positive");
    if x < SERIES_CUTOFF {
        let j = series_j(l, x);
        let jp = if l == 0 {
            -series_j(1, x)
        } else {
            series_j(l - 1, x) - (l as f64 + 1.0) * j / x
        };
        return BesselEval { j, jp };
    }
    let (s, c) = (x.sin(), x.cos());
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    let j = match l {
        0 => j0,
        1 => j1,
        2 => (3.0 / (x * x) - 1.0) * j0 - 3.0 * c / (x * x),
        _ => miller_downward(l, x, j0, j1),
    };
    let jp = if l == 0 {
        -j1
    } else {
        let jm = match l {
            1 => j0,
            2 => j1,
            _ => miller_downward(l - 1, x, j0, j1),
        };
        jm - (l as f64 + 1.0) * j / x
    };
    BesselEval { j, jp }
}

/// Ascending series `j_l = x^l/(2l+1)!! Σ (-x²/2)^m / (m! (2l+3)...(2l+2m+1))`.
fn series_j(l: usize, x: f64) -> f64 {
    let mut prefactor = 1.0;
    for i in 0..l {
        prefactor *= x / (2 * i + 3) as f64;
    }
    // x^l / (2l+1)!! = prefactor · ... with the 1/(2·0+1) handled by starting
    // the double factorial at 3; multiply the remaining x^0 term by 1.
    let mut term = 1.0;
    let mut sum = 1.0;
    let half_x2 = 0.5 * x * x;
    for m in 1..=30 {
        term *= -half_x2 / (m as f64 * (2 * l + 2 * m + 1) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}

/// Downward recurrence seeded high above `l`, normalized against whichever
/// of `j_0`, `j_1` is larger in magnitude (either can vanish).
fn miller_downward(l: usize, x: f64, j0: f64, j1: f64) -> f64 {
    let start = l + 16 + x.ceil() as usize;
    let mut above = 0.0f64;
    let mut here = 1e-300;
    let mut at_l = 0.0;
    let mut at_0 = 0.0;
    let mut at_1 = 0.0;
    for n in (0..=start).rev() {
        let below = (2.0 * n as f64 + 3.0) / x * here - above;
        if n == l {
            at_l = below;
        }
        if n == 1 {
            at_1 = below;
        }
        if n == 0 {
            at_0 = below;
        }
        above = here;
        here = below;
        // rescale to avoid overflow on long recurrences
        if here.abs() > 1e200 {
            above /= 1e200;
            here /= 1e200;
            at_l /= 1e200;
            at_1 /= 1e200;
        }
    }
    let scale = if j0.abs() > j1.abs() {
        j0 / at_0
    } else {
        j1 / at_1
    };
    at_l * scale
}

/// The TE characteristic determinant for constant index `n`.
pub fn te_characteristic(l: usize, n: f64, radius: f64, k: f64) -> f64 {
    assert!(n > 0.0 && n != 1.0, "constant index must be positive and != 1");
    assert!(k > 0.0);
    let sn = n.sqrt();
    let inner = spherical_bessel(l, sn * k * radius);
    let outer = spherical_bessel(l, k * radius);
    sn * inner.jp * outer.j - outer.jp * inner.j
}

/// All roots of the characteristic determinant in `(0, k_max]`, found by a
/// 0.001-step scan plus bisection to width 1e-13.
pub fn oracle_roots(l: usize, n: f64, radius: f64, k_max: f64) -> Vec<f64> {
    const STEP: f64 = 0.001;
    let mut roots = Vec::new();
    let steps = (k_max / STEP).floor() as usize;
    let mut k_prev = STEP;
    let mut f_prev = te_characteristic(l, n, radius, k_prev);
    for s in 2..=steps {
        let k = s as f64 * STEP;
        let f = te_characteristic(l, n, radius, k);
        if f_prev.signum() != f.signum() {
            let (mut lo, mut hi) = (k_prev, k);
            let mut f_lo = f_prev;
            while hi - lo > 1e-13 {
                let mid = 0.5 * (lo + hi);
                let f_mid = te_characteristic(l, n, radius, mid);
                if f_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if f_mid.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        k_prev = k;
        f_prev = f;
    }
    roots
}
