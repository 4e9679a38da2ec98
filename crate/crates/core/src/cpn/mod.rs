//! Complex projective space in homogeneous coordinates.
//!
//! Points are unit representatives up to phase, and the Fubini–Study
//! distance is scaled as `d(p,q) = 2·arccos|⟨p,q⟩|`, so that closed
//! geodesics have length 2π, the diameter and injectivity radius equal π,
//! and projective lines are round 2-spheres of curvature one. Under this
//! scaling the cut locus of `p` is exactly the Hermitian-orthogonal
//! hyperplane of `p`.

mod constructions;
mod sampling;

use crate::sphere::UnitVec3;
use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

pub use constructions::{avoiding_line, perpendicular_line_at, perpendicular_line_at_random, remark31_residual};
pub use sampling::{random_unitary, sample_geodesics};

pub type CVector = DVector<Complex64>;

#[derive(Debug, Error)]
pub enum CpnError {
    #[error("cannot normalize a (near-)zero representative")]
    ZeroVector,
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("the two points coincide as projective points")]
    CoincidentPoints,
    #[error("the two points are antipodal (distance π): the connecting geodesic is not unique")]
    AntipodalPoints,
    #[error("point is not on the line (membership residual {residual:.3e})")]
    PointNotOnLine { residual: f64 },
    #[error("no perpendicular line exists: the construction needs complex dimension >= 2")]
    AmbientTooSmall,
    #[error("operation is defined on CP^1 only (got CP^{0})")]
    RequiresRiemannSphere(usize),
    #[error("ball radius must lie in (0, π), got {0}")]
    InvalidRadius(f64),
    #[error("direction is not horizontal: |<base, dir>| = {0:.3e}")]
    NotHorizontal(f64),
}

/// Hermitian inner product `⟨a, b⟩ = Σ conj(a_i)·b_i`.
pub(crate) fn hdot(a: &CVector, b: &CVector) -> Complex64 {
    a.dotc(b)
}

fn complex_gaussian<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CVector {
    CVector::from_fn(dim, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    })
}

/// A point of CPⁿ, stored as a unit representative in ℂ^{n+1}; every
/// operation is invariant under multiplication by a unit phase.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    rep: CVector,
}

impl ProjPoint {
    pub fn new(rep: CVector) -> Result<Self, CpnError> {
        let n = rep.norm();
        if n < 1e-12 {
            return Err(CpnError::ZeroVector);
        }
        Ok(Self {
            rep: rep.map(|z| z / n),
        })
    }

    /// Parses interleaved `[re₀, im₀, re₁, im₁, …]` components.
    pub fn from_interleaved(components: &[f64]) -> Result<Self, CpnError> {
        if !components.len().is_multiple_of(2) || components.is_empty() {
            return Err(CpnError::ZeroVector);
        }
        let rep = CVector::from_fn(components.len() / 2, |i, _| {
            Complex64::new(components[2 * i], components[2 * i + 1])
        });
        Self::new(rep)
    }

    /// The `k`-th standard basis point.
    pub fn standard(ambient_dim: usize, k: usize) -> Self {
        let mut rep = CVector::zeros(ambient_dim);
        rep[k] = Complex64::ONE;
        Self { rep }
    }

    /// Uniform (unitary-invariant) random point: a normalized complex
    /// Gaussian representative.
    pub fn random<R: Rng + ?Sized>(cp_dim: usize, rng: &mut R) -> Self {
        loop {
            if let Ok(p) = Self::new(complex_gaussian(cp_dim + 1, rng)) {
                return p;
            }
        }
    }

    pub fn rep(&self) -> &CVector {
        &self.rep
    }

    /// Complex dimension of the ambient projective space.
    pub fn cp_dim(&self) -> usize {
        self.rep.len() - 1
    }

    pub fn overlap(&self, other: &ProjPoint) -> Complex64 {
        hdot(&self.rep, &other.rep)
    }

    /// Projective equality: `|⟨p, q⟩| = 1` within `tol`.
    pub fn approx_eq(&self, other: &ProjPoint, tol: f64) -> bool {
        self.rep.len() == other.rep.len() && (self.overlap(other).norm() - 1.0).abs() <= tol
    }

    /// Representative with the first significantly nonzero component made
    /// real and positive; used for serialization.
    pub fn canonical_rep(&self) -> CVector {
        let lead = self
            .rep
            .iter()
            .find(|z| z.norm() > 1e-9)
            .copied()
            .unwrap_or(Complex64::ONE);
        let phase = lead / lead.norm();
        self.rep.map(|z| z / phase)
    }

    /// Canonical representative as interleaved real/imaginary parts.
    pub fn interleaved(&self) -> Vec<f64> {
        let rep = self.canonical_rep();
        let mut out = Vec::with_capacity(2 * rep.len());
        for z in rep.iter() {
            out.push(z.re);
            out.push(z.im);
        }
        out
    }
}

/// `d(p, q) = 2·arccos(clamp(|⟨p,q⟩|, 0, 1)) ∈ [0, π]`.
pub fn fs_distance(p: &ProjPoint, q: &ProjPoint) -> f64 {
    2.0 * p.overlap(q).norm().clamp(0.0, 1.0).acos()
}

/// A projective line: the 2-dimensional Hermitian-orthonormal frame
/// spanning it.
#[derive(Clone, Debug)]
pub struct ProjLine {
    frame: [CVector; 2],
}

impl ProjLine {
    /// Orthonormalizes `(v1, v2)`; rejects dependent inputs.
    pub fn new(v1: CVector, v2: CVector) -> Result<Self, CpnError> {
        if v1.len() != v2.len() {
            return Err(CpnError::DimensionMismatch(v1.len(), v2.len()));
        }
        let n1 = v1.norm();
        if n1 < 1e-12 {
            return Err(CpnError::ZeroVector);
        }
        let f1 = v1.map(|z| z / n1);
        let mut f2 = v2.clone();
        let c = hdot(&f1, &f2);
        f2 -= f1.map(|z| z * c);
        let n2 = f2.norm();
        if n2 < 1e-9 {
            return Err(CpnError::CoincidentPoints);
        }
        Ok(Self {
            frame: [f1, f2.map(|z| z / n2)],
        })
    }

    /// The unique line through two distinct points.
    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Self, CpnError> {
        Self::new(p.rep.clone(), q.rep.clone())
    }

    pub fn frame(&self) -> (&CVector, &CVector) {
        (&self.frame[0], &self.frame[1])
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame[0].len()
    }

    /// Frame coordinates of `p`'s projection onto the line's span.
    pub fn projection_coeffs(&self, p: &ProjPoint) -> (Complex64, Complex64) {
        (hdot(&self.frame[0], &p.rep), hdot(&self.frame[1], &p.rep))
    }

    /// Distance from the representative to the line's span: the norm of
    /// the component orthogonal to the frame.
    pub fn membership_residual(&self, p: &ProjPoint) -> f64 {
        let (a, b) = self.projection_coeffs(p);
        let residual =
            p.rep() - self.frame[0].map(|z| z * a) - self.frame[1].map(|z| z * b);
        residual.norm()
    }

    pub fn contains(&self, p: &ProjPoint, tol: f64) -> bool {
        self.ambient_dim() == p.rep.len() && self.membership_residual(p) <= tol
    }

    /// The point of the line with frame coordinates `(a, b)`.
    pub fn point(&self, a: Complex64, b: Complex64) -> Result<ProjPoint, CpnError> {
        let rep = self.frame[0].map(|z| z * a) + self.frame[1].map(|z| z * b);
        ProjPoint::new(rep)
    }

    /// Uniform random point of the line.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> ProjPoint {
        loop {
            let a = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
            let b = Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
            if let Ok(p) = self.point(a, b) {
                return p;
            }
        }
    }

    /// The unique point of the line at distance π from `x`, i.e. the
    /// in-line Hermitian-orthogonal complement of `x`.
    pub fn antipode_of(&self, x: &ProjPoint) -> Result<ProjPoint, CpnError> {
        let residual = self.membership_residual(x);
        if residual > 1e-9 {
            return Err(CpnError::PointNotOnLine { residual });
        }
        let (a, b) = self.projection_coeffs(x);
        // y = −conj(b)·f₁ + conj(a)·f₂ satisfies ⟨x, y⟩ = 0 and |y| = 1.
        let rep = self.frame[0].map(|z| z * -b.conj()) + self.frame[1].map(|z| z * a.conj());
        ProjPoint::new(rep)
    }

    /// Closed-form minimum of `fs_distance(p, ·)` over the line:
    /// `2·arccos‖Π_L p‖`.
    pub fn min_distance_from(&self, p: &ProjPoint) -> f64 {
        let (a, b) = self.projection_coeffs(p);
        let proj = (a.norm_sqr() + b.norm_sqr()).sqrt().clamp(0.0, 1.0);
        2.0 * proj.acos()
    }
}

/// A unit-speed closed geodesic of length 2π, lifted as
/// `γ̃(t) = cos(t/2)·base + sin(t/2)·direction` with a horizontal unit
/// direction (`⟨base, direction⟩ = 0`).
#[derive(Clone, Debug)]
pub struct CPGeodesic {
    base: ProjPoint,
    direction: CVector,
}

impl CPGeodesic {
    pub fn new(base: ProjPoint, direction: CVector) -> Result<Self, CpnError> {
        if direction.len() != base.rep.len() {
            return Err(CpnError::DimensionMismatch(base.rep.len(), direction.len()));
        }
        let n = direction.norm();
        if n < 1e-12 {
            return Err(CpnError::ZeroVector);
        }
        let direction = direction.map(|z| z / n);
        let h = hdot(&base.rep, &direction).norm();
        if h > 1e-9 {
            return Err(CpnError::NotHorizontal(h));
        }
        Ok(Self { base, direction })
    }

    /// The unique shortest geodesic from `p` to `q`, parametrized so that
    /// `γ(0) = p` and `γ(d(p,q)) = q`. Coincident and antipodal inputs are
    /// rejected with distinct errors.
    pub fn through(p: &ProjPoint, q: &ProjPoint) -> Result<Self, CpnError> {
        if p.rep.len() != q.rep.len() {
            return Err(CpnError::DimensionMismatch(p.rep.len(), q.rep.len()));
        }
        let overlap = p.overlap(q);
        let r = overlap.norm();
        if r > 1.0 - 1e-12 {
            return Err(CpnError::CoincidentPoints);
        }
        if r < 1e-12 {
            return Err(CpnError::AntipodalPoints);
        }
        // Re-phase q so ⟨p, q'⟩ = r > 0; then w = (q' − r·p)/√(1−r²).
        let phase = overlap / r;
        let qrep = q.rep.map(|z| z / phase);
        let denom = (1.0 - r * r).sqrt();
        let direction = (qrep - p.rep.map(|z| z * r)).map(|z| z / denom);
        Self::new(p.clone(), direction)
    }

    pub fn base(&self) -> &ProjPoint {
        &self.base
    }

    pub fn direction(&self) -> &CVector {
        &self.direction
    }

    /// Horizontal lift at arc length `t ∈ [0, 2π)`.
    pub fn lift(&self, t: f64) -> CVector {
        let (s, c) = (t / 2.0).sin_cos();
        self.base.rep.map(|z| z * c) + self.direction.map(|z| z * s)
    }

    pub fn point(&self, t: f64) -> ProjPoint {
        ProjPoint {
            rep: self.lift(t),
        }
    }

    /// The projective line containing the geodesic.
    pub fn line(&self) -> ProjLine {
        ProjLine {
            frame: [self.base.rep.clone(), self.direction.clone()],
        }
    }

    /// The `(base, direction)` lifts with the base's leading component made
    /// real and positive; both are divided by the same phase, so the pair
    /// describes the identical curve. This is the serialization convention.
    pub fn canonical_lifts(&self) -> (CVector, CVector) {
        let lead = self
            .base
            .rep
            .iter()
            .find(|z| z.norm() > 1e-9)
            .copied()
            .unwrap_or(Complex64::ONE);
        let phase = lead / lead.norm();
        (
            self.base.rep.map(|z| z / phase),
            self.direction.map(|z| z / phase),
        )
    }

    /// Exact minimum of `fs_distance(p, γ(·))` over the closed geodesic:
    /// the largest eigenvalue of the 2×2 Gram form of
    /// `t ↦ |cos(t/2)·⟨p,base⟩ + sin(t/2)·⟨p,dir⟩|²`.
    pub fn min_distance_from(&self, p: &ProjPoint) -> f64 {
        let a = hdot(&p.rep, &self.base.rep);
        let b = hdot(&p.rep, &self.direction);
        let (na, nb) = (a.norm_sqr(), b.norm_sqr());
        let cross = (a.conj() * b).re;
        let half_trace = 0.5 * (na + nb);
        let disc = (0.25 * (na - nb) * (na - nb) + cross * cross).sqrt();
        let lambda_max = (half_trace + disc).clamp(0.0, 1.0);
        2.0 * lambda_max.sqrt().acos()
    }

    /// Minimum distance over `samples` equispaced parameter values.
    pub fn sampled_min_distance(&self, p: &ProjPoint, samples: usize) -> f64 {
        let step = 2.0 * std::f64::consts::PI / samples as f64;
        (0..samples)
            .map(|i| fs_distance(p, &self.point(step * i as f64)))
            .fold(f64::INFINITY, f64::min)
    }
}

/// A closed metric ball of radius `r ∈ (0, π)`.
#[derive(Clone, Debug)]
pub struct Ball {
    center: ProjPoint,
    radius: f64,
}

impl Ball {
    pub fn new(center: ProjPoint, radius: f64) -> Result<Self, CpnError> {
        if !(radius > 0.0 && radius < std::f64::consts::PI) {
            return Err(CpnError::InvalidRadius(radius));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &ProjPoint {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Trapezoidal integral of `f` over the closed geodesic with `k`
/// equispaced arc-length points (`k ≥ 4`).
pub fn geodesic_integral<F: Fn(&ProjPoint) -> f64>(f: F, geo: &CPGeodesic, k: usize) -> f64 {
    assert!(k >= 4, "need at least 4 quadrature points");
    let step = 2.0 * std::f64::consts::PI / k as f64;
    let mut sum = 0.0;
    for i in 0..k {
        sum += f(&geo.point(step * i as f64));
    }
    sum * step
}

/// The isometry CP¹ → S²:
/// `[z₀ : z₁] ↦ (2·Re(z̄₀z₁), 2·Im(z̄₀z₁), |z₀|² − |z₁|²)`.
pub fn bloch_map(p: &ProjPoint) -> Result<UnitVec3, CpnError> {
    if p.cp_dim() != 1 {
        return Err(CpnError::RequiresRiemannSphere(p.cp_dim()));
    }
    let z0 = p.rep[0];
    let z1 = p.rep[1];
    let w = z0.conj() * z1;
    UnitVec3::new([2.0 * w.re, 2.0 * w.im, z0.norm_sqr() - z1.norm_sqr()])
        .map_err(|_| CpnError::ZeroVector)
}
