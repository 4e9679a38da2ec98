//! Real spherical harmonics, orthonormal against the area element of S²
//! (total mass 4π).
//!
//! Evaluation uses the fully normalized associated-Legendre recurrence, so
//! no factorials are formed explicitly and degrees up to the supported cap
//! are far from overflow or precision loss.

use super::{SphereError, UnitVec3};
use nalgebra::DVector;

/// Highest supported degree of the recurrence.
pub const LMAX_SUPPORTED: usize = 32;

/// The real spherical-harmonic basis `Y_{l,m}` for `l ≤ lmax`, `|m| ≤ l`,
/// laid out at index `l² + l + m`.
#[derive(Clone, Debug)]
pub struct HarmonicBasis {
    lmax: usize,
}

impl HarmonicBasis {
    pub fn new(lmax: usize) -> Result<Self, SphereError> {
        if lmax > LMAX_SUPPORTED {
            return Err(SphereError::LmaxUnsupported {
                lmax,
                max: LMAX_SUPPORTED,
            });
        }
        Ok(Self { lmax })
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    /// Basis size `(lmax + 1)²`.
    pub fn len(&self) -> usize {
        (self.lmax + 1) * (self.lmax + 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Flat index of `Y_{l,m}`.
    pub fn index(l: usize, m: isize) -> usize {
        debug_assert!(m.unsigned_abs() <= l);
        l * l + (l as isize + m) as usize
    }

    /// Degree `l` of a flat index.
    pub fn degree_of(index: usize) -> usize {
        index.isqrt()
    }

    /// Order `m` of a flat index.
    pub fn order_of(index: usize) -> isize {
        let l = Self::degree_of(index);
        index as isize - (l * l + l) as isize
    }

    /// Number of even-degree basis functions up to `lmax`.
    pub fn even_count(&self) -> usize {
        (0..=self.lmax).step_by(2).map(|l| 2 * l + 1).sum()
    }

    /// Number of odd-degree basis functions up to `lmax`.
    pub fn odd_count(&self) -> usize {
        self.len() - self.even_count()
    }

    /// Values of every basis function at `x`.
    pub fn evaluate(&self, x: &UnitVec3) -> DVector<f64> {
        let [vx, vy, vz] = x.components();
        let cos_t = vz.clamp(-1.0, 1.0);
        let sin_t = (vx * vx + vy * vy).sqrt();
        let phi = vy.atan2(vx);

        let lmax = self.lmax;
        let mut out = DVector::zeros(self.len());

        // cos(mφ), sin(mφ) by angle addition.
        let (sp, cp) = phi.sin_cos();
        let mut cos_m = vec![0.0; lmax + 1];
        let mut sin_m = vec![0.0; lmax + 1];
        cos_m[0] = 1.0;
        for m in 1..=lmax {
            cos_m[m] = cos_m[m - 1] * cp - sin_m[m - 1] * sp;
            sin_m[m] = sin_m[m - 1] * cp + cos_m[m - 1] * sp;
        }

        let sqrt2 = std::f64::consts::SQRT_2;
        let mut p_mm = (1.0 / (4.0 * std::f64::consts::PI)).sqrt(); // P̃₀⁰
        for m in 0..=lmax {
            if m > 0 {
                let mf = m as f64;
                p_mm *= sin_t * ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt();
            }
            let mut store = |l: usize, val: f64| {
                if m == 0 {
                    out[Self::index(l, 0)] = val;
                } else {
                    out[Self::index(l, m as isize)] = sqrt2 * val * cos_m[m];
                    out[Self::index(l, -(m as isize))] = sqrt2 * val * sin_m[m];
                }
            };
            store(m, p_mm);
            if m == lmax {
                break;
            }
            let mut p_prev = p_mm;
            let mut p_cur = ((2 * m + 3) as f64).sqrt() * cos_t * p_mm;
            store(m + 1, p_cur);
            for l in (m + 2)..=lmax {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf)
                    / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                    .sqrt();
                let p_next = a * (cos_t * p_cur - b * p_prev);
                store(l, p_next);
                p_prev = p_cur;
                p_cur = p_next;
            }
        }
        out
    }
}
