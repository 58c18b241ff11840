//! Radial refractive index `n(r)` and its contrast classification.
//!
//! The method requires the mapped coefficient `ñ(t) = n((t+1)R/2)` to stay
//! on one side of 1, bounded away from it, over the whole radius: the
//! assembled forms divide by `ñ - 1` (or `1 - ñ`) and the coercivity theory
//! holds only under that assumption. Mixed-sign contrast is rejected at
//! construction rather than approximated.

use crate::{Error, Result};

/// Which side of 1 the index stays on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Contrast {
    AboveOne,
    BelowOne,
}

/// Polynomial radial refractive index, coefficients in ascending powers of
/// `r`; a constant index is a single coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct RefractiveIndex {
    coeffs: Vec<f64>,
    contrast: Contrast,
}

/// Grid resolution used to classify the contrast on `[0, R]`.
const CLASSIFY_SAMPLES: usize = 1000;
/// How far from 1 the sampled index must stay.
const CONTRAST_MARGIN: f64 = 1e-8;

impl RefractiveIndex {
    /// Validates the contrast assumption on a 1000-point grid of `[0, radius]`
    /// and classifies the index.
    pub fn new(coeffs: Vec<f64>, radius: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::ContrastViolation(
                "no coefficients given for n(r)".into(),
            ));
        }
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::ContrastViolation(format!(
                "radius must be positive, got {radius}"
            )));
        }
        let eval = |r: f64| coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c);
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for i in 0..CLASSIFY_SAMPLES {
            let r = radius * i as f64 / (CLASSIFY_SAMPLES - 1) as f64;
            let v = eval(r);
            if !v.is_finite() {
                return Err(Error::ContrastViolation(format!(
                    "n({r}) is not finite"
                )));
            }
            min = min.min(v);
            max = max.max(v);
        }
        let contrast = if min >= 1.0 + CONTRAST_MARGIN {
            Contrast::AboveOne
        } else if max <= 1.0 - CONTRAST_MARGIN && min >= CONTRAST_MARGIN {
            Contrast::BelowOne
        } else {
            return Err(Error::ContrastViolation(format!(
                "n(r) ranges over [{min}, {max}] on [0, {radius}]; \
                 it must stay on one side of 1, bounded away from it \
                 (and above 0)"
            )));
        };
        Ok(RefractiveIndex { coeffs, contrast })
    }

    /// Constant index.
    pub fn constant(n: f64) -> Result<Self> {
        RefractiveIndex::new(vec![n], 1.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn contrast(&self) -> Contrast {
        self.contrast
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// `n(r)` by Horner evaluation.
    pub fn eval(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + c)
    }

    /// The mapped coefficient `ñ(t) = n((t+1) R / 2)`.
    pub fn eval_mapped(&self, t: f64, radius: f64) -> f64 {
        self.eval((t + 1.0) * radius / 2.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_constants() {
        assert_eq!(
            RefractiveIndex::constant(16.0).unwrap().contrast(),
            Contrast::AboveOne
        );
        assert_eq!(
            RefractiveIndex::constant(0.25).unwrap().contrast(),
            Contrast::BelowOne
        );
    }

    #[test]
    fn classifies_polynomial() {
        // 8 + 4r² on [0, 1] stays in [8, 12]
        let idx = RefractiveIndex::new(vec![8.0, 0.0, 4.0], 1.0).unwrap();
        assert_eq!(idx.contrast(), Contrast::AboveOne);
        assert!((idx.eval(0.5) - 9.0).abs() < 1e-15);
        assert!((idx.eval_mapped(0.0, 1.0) - 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_mixed_contrast() {
        // 0.5 + r crosses 1 inside [0, 1]
        let err = RefractiveIndex::new(vec![0.5, 1.0], 1.0).unwrap_err();
        assert!(matches!(err, Error::ContrastViolation(_)));
        // exactly 1 is also rejected
        assert!(RefractiveIndex::constant(1.0).is_err());
        // nonpositive index is rejected even though it is below 1
        assert!(RefractiveIndex::constant(-2.0).is_err());
    }
}
