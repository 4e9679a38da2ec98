//! The great-circle transform on S².
//!
//! A circle is stored by its pole; integrals use the equispaced trapezoid
//! rule along arc length, which is spectrally accurate for smooth
//! integrands and exact (to roundoff) for band-limited ones once the point
//! count exceeds the trigonometric degree. The transform multiplies a
//! degree-l harmonic by `2π·P_l(0)`, so odd degrees are annihilated and the
//! even part inverts by eigenvalue division.

mod harmonics;

use crate::linalg::{Provenance, TransformOperator};
use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

pub use crate::linalg::{kernel_analysis, KernelAnalysis};
pub use harmonics::{HarmonicBasis, LMAX_SUPPORTED};

#[derive(Debug, Error)]
pub enum SphereError {
    #[error("cannot normalize a (near-)zero vector")]
    ZeroVector,
    #[error("degree {lmax} exceeds the supported recurrence cap {max}")]
    LmaxUnsupported { lmax: usize, max: usize },
    #[error("coefficient vector has length {got}, basis has size {expected}")]
    CoefficientLength { expected: usize, got: usize },
    #[error(
        "no preimage: odd-degree energy ratio {ratio:.3e} exceeds 1e-8 of the norm, \
         and odd degrees are in the kernel"
    )]
    OddEnergy { ratio: f64 },
}

/// A point of S² in ambient coordinates, unit norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitVec3([f64; 3]);

impl UnitVec3 {
    /// Normalizes `v`; rejects vectors with norm below `1e-12`.
    pub fn new(v: [f64; 3]) -> Result<Self, SphereError> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n < 1e-12 {
            return Err(SphereError::ZeroVector);
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &UnitVec3) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    /// Exact componentwise negation (the norm is untouched).
    pub fn neg(&self) -> UnitVec3 {
        UnitVec3([-self.0[0], -self.0[1], -self.0[2]])
    }

    pub fn cross(&self, other: &UnitVec3) -> [f64; 3] {
        let a = &self.0;
        let b = &other.0;
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    /// Uniform point on S² (normalized Gaussian).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = [
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
                StandardNormal.sample(rng),
            ];
            if let Ok(u) = Self::new(v) {
                return u;
            }
        }
    }
}

/// An unoriented great circle `{x : ⟨x, pole⟩ = 0}`.
///
/// The pole sign is canonicalized on construction (largest-magnitude
/// component made positive), so `pole` and `−pole` yield bit-identical
/// circles and every operation is automatically even in the pole.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreatCircle {
    pole: UnitVec3,
}

impl GreatCircle {
    pub fn new(pole: UnitVec3) -> Self {
        let c = pole.components();
        let mut k = 0;
        for i in 1..3 {
            if c[i].abs() > c[k].abs() {
                k = i;
            }
        }
        let pole = if c[k] < 0.0 {
            UnitVec3([-c[0], -c[1], -c[2]])
        } else {
            pole
        };
        Self { pole }
    }

    pub fn from_vector(v: [f64; 3]) -> Result<Self, SphereError> {
        Ok(Self::new(UnitVec3::new(v)?))
    }

    pub fn pole(&self) -> &UnitVec3 {
        &self.pole
    }

    /// Orthonormal frame `(u, v)` of the circle's plane; the circle is
    /// `θ ↦ cos θ·u + sin θ·v`.
    pub fn frame(&self) -> (UnitVec3, UnitVec3) {
        let c = self.pole.components();
        let mut k = 0;
        for i in 1..3 {
            if c[i].abs() < c[k].abs() {
                k = i;
            }
        }
        let mut axis = [0.0; 3];
        axis[k] = 1.0;
        let u = UnitVec3::new(self.pole.cross(&UnitVec3(axis))).expect("axis not parallel");
        let v = UnitVec3::new(self.pole.cross(&u)).expect("orthogonal frame");
        (u, v)
    }

    /// Arc-length point of the circle at angle `theta`.
    pub fn point(&self, theta: f64) -> UnitVec3 {
        let (u, v) = self.frame();
        let (s, c) = theta.sin_cos();
        let uu = u.components();
        let vv = v.components();
        UnitVec3([
            c * uu[0] + s * vv[0],
            c * uu[1] + s * vv[1],
            c * uu[2] + s * vv[2],
        ])
    }

    /// Circle with a uniformly distributed pole.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(UnitVec3::random(rng))
    }
}

/// `count` circles with independent uniform poles.
pub fn sample_circles<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<GreatCircle> {
    (0..count).map(|_| GreatCircle::sample(rng)).collect()
}

/// Trapezoidal integral of `f` along the circle's arc length with `k`
/// equispaced points (`k ≥ 4`).
pub fn circle_integral<F: Fn(&UnitVec3) -> f64>(f: F, circle: &GreatCircle, k: usize) -> f64 {
    assert!(k >= 4, "need at least 4 quadrature points");
    let (u, v) = circle.frame();
    let uu = u.components();
    let vv = v.components();
    let step = 2.0 * std::f64::consts::PI / k as f64;
    let mut sum = 0.0;
    for i in 0..k {
        let (s, c) = (step * i as f64).sin_cos();
        let x = UnitVec3([
            c * uu[0] + s * vv[0],
            c * uu[1] + s * vv[1],
            c * uu[2] + s * vv[2],
        ]);
        sum += f(&x);
    }
    sum * step
}

/// The factor `2π·P_l(0)` by which the transform scales a degree-l
/// harmonic: zero for odd `l`, alternating double-factorial ratio for even.
pub fn funk_hecke_eigenvalue(l: usize) -> f64 {
    if !l.is_multiple_of(2) {
        return 0.0;
    }
    let mut p = 1.0;
    let mut k = 2;
    while k <= l {
        p *= -((k - 1) as f64) / k as f64;
        k += 2;
    }
    2.0 * std::f64::consts::PI * p
}

/// A band-limited function on S², stored as coefficients against
/// [`HarmonicBasis`].
#[derive(Clone, Debug)]
pub struct SphereFunction {
    lmax: usize,
    coefficients: DVector<f64>,
}

impl SphereFunction {
    pub fn new(lmax: usize, coefficients: DVector<f64>) -> Result<Self, SphereError> {
        let basis = HarmonicBasis::new(lmax)?;
        if coefficients.len() != basis.len() {
            return Err(SphereError::CoefficientLength {
                expected: basis.len(),
                got: coefficients.len(),
            });
        }
        Ok(Self { lmax, coefficients })
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    pub fn evaluate(&self, x: &UnitVec3) -> f64 {
        let basis = HarmonicBasis::new(self.lmax).expect("validated at construction");
        basis.evaluate(x).dot(&self.coefficients)
    }

    /// Standard-normal coefficients on every degree.
    pub fn random<R: Rng + ?Sized>(lmax: usize, rng: &mut R) -> Result<Self, SphereError> {
        let basis = HarmonicBasis::new(lmax)?;
        let coefficients = DVector::from_fn(basis.len(), |_, _| StandardNormal.sample(rng));
        Self::new(lmax, coefficients)
    }

    /// Standard-normal coefficients on even degrees, zero on odd.
    pub fn random_even<R: Rng + ?Sized>(lmax: usize, rng: &mut R) -> Result<Self, SphereError> {
        let mut f = Self::random(lmax, rng)?;
        for i in 0..f.coefficients.len() {
            if !HarmonicBasis::degree_of(i).is_multiple_of(2) {
                f.coefficients[i] = 0.0;
            }
        }
        Ok(f)
    }

    /// Fraction of the coefficient norm carried by odd degrees.
    pub fn odd_energy_ratio(&self) -> f64 {
        let total = self.coefficients.norm();
        if total == 0.0 {
            return 0.0;
        }
        let odd: f64 = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(i, _)| !HarmonicBasis::degree_of(*i).is_multiple_of(2))
            .map(|(_, c)| c * c)
            .sum();
        odd.sqrt() / total
    }
}

/// The transform of `f`, read as a function of the circle's pole: each
/// degree-l block is scaled by [`funk_hecke_eigenvalue`].
pub fn transform_as_function(f: &SphereFunction) -> SphereFunction {
    let coefficients = DVector::from_fn(f.coefficients.len(), |i, _| {
        f.coefficients[i] * funk_hecke_eigenvalue(HarmonicBasis::degree_of(i))
    });
    SphereFunction {
        lmax: f.lmax,
        coefficients,
    }
}

/// Recovers the unique even function whose transform is `fhat` by dividing
/// each even-degree block by its eigenvalue. Rejects inputs carrying more
/// than `1e-8` of their norm on odd degrees: those have no preimage.
pub fn invert_even(fhat: &SphereFunction) -> Result<SphereFunction, SphereError> {
    let ratio = fhat.odd_energy_ratio();
    if ratio > 1e-8 {
        return Err(SphereError::OddEnergy { ratio });
    }
    let coefficients = DVector::from_fn(fhat.coefficients.len(), |i, _| {
        let l = HarmonicBasis::degree_of(i);
        if l.is_multiple_of(2) {
            fhat.coefficients[i] / funk_hecke_eigenvalue(l)
        } else {
            0.0
        }
    });
    Ok(SphereFunction {
        lmax: fhat.lmax,
        coefficients,
    })
}

/// Assembles the dense transform matrix: entry `(i, j)` is the integral of
/// basis function `j` over circle `i` with `k` quadrature points.
pub fn assemble_operator(
    basis: &HarmonicBasis,
    circles: &[GreatCircle],
    k: usize,
    seed: Option<u64>,
) -> TransformOperator {
    assert!(k >= 2 * basis.lmax() + 8, "quadrature too coarse for lmax");
    let n = basis.len();
    let step = 2.0 * std::f64::consts::PI / k as f64;
    let mut matrix = nalgebra::DMatrix::zeros(circles.len(), n);
    for (i, circle) in circles.iter().enumerate() {
        let mut row = DVector::<f64>::zeros(n);
        let (u, v) = circle.frame();
        let uu = u.components();
        let vv = v.components();
        for q in 0..k {
            let (s, c) = (step * q as f64).sin_cos();
            let x = UnitVec3([
                c * uu[0] + s * vv[0],
                c * uu[1] + s * vv[1],
                c * uu[2] + s * vv[2],
            ]);
            row.axpy(step, &basis.evaluate(&x), 1.0);
        }
        matrix.set_row(i, &row.transpose());
    }
    TransformOperator::new(
        matrix,
        Provenance {
            space: "S^2".to_string(),
            basis: format!("harmonics lmax={}", basis.lmax()),
            seed,
            quad_points: k,
        },
    )
}
