//! Geometric constructions on projective lines: perpendicular lines at a
//! point, the three-line antipode chain, and lines through a point that
//! avoid a metric ball around another.

use super::{hdot, CPGeodesic, CpnError, CVector, ProjLine, ProjPoint};
use num_complex::Complex64;
use rand::Rng;

/// Unit vector Hermitian-orthogonal to everything in `constraints`, chosen
/// as the lowest-index coordinate direction with a significant residual.
fn orthogonal_direction(
    ambient: usize,
    constraints: &[&CVector],
) -> Result<CVector, CpnError> {
    for k in 0..ambient {
        let mut v = CVector::zeros(ambient);
        v[k] = Complex64::ONE;
        for c in constraints {
            let overlap = hdot(c, &v);
            v -= c.map(|z| z * overlap);
        }
        let n = v.norm();
        if n > 1e-6 {
            return Ok(v.map(|z| z / n));
        }
    }
    Err(CpnError::AmbientTooSmall)
}

/// Same, but drawn from a complex Gaussian instead of coordinate directions.
fn random_orthogonal_direction<R: Rng + ?Sized>(
    ambient: usize,
    constraints: &[&CVector],
    rng: &mut R,
) -> Result<CVector, CpnError> {
    for _ in 0..64 {
        let mut v = super::complex_gaussian(ambient, rng);
        for c in constraints {
            let overlap = hdot(c, &v);
            v -= c.map(|z| z * overlap);
        }
        let n = v.norm();
        if n > 1e-6 {
            return Ok(v.map(|z| z / n));
        }
    }
    Err(CpnError::AmbientTooSmall)
}

/// A projective line meeting `line` perpendicularly in `q`: the span of `q`
/// and a deterministically chosen direction Hermitian-orthogonal to the
/// whole frame of `line`. Needs complex dimension ≥ 2.
pub fn perpendicular_line_at(line: &ProjLine, q: &ProjPoint) -> Result<ProjLine, CpnError> {
    let residual = line.membership_residual(q);
    if residual > 1e-9 {
        return Err(CpnError::PointNotOnLine { residual });
    }
    let (f1, f2) = line.frame();
    let v = orthogonal_direction(line.ambient_dim(), &[f1, f2])?;
    ProjLine::new(q.rep().clone(), v)
}

/// Randomized variant of [`perpendicular_line_at`]: the in-ambient
/// direction is drawn from the unitary-invariant measure on the orthogonal
/// complement of the line.
pub fn perpendicular_line_at_random<R: Rng + ?Sized>(
    line: &ProjLine,
    q: &ProjPoint,
    rng: &mut R,
) -> Result<ProjLine, CpnError> {
    let residual = line.membership_residual(q);
    if residual > 1e-9 {
        return Err(CpnError::PointNotOnLine { residual });
    }
    let (f1, f2) = line.frame();
    let v = random_orthogonal_direction(line.ambient_dim(), &[f1, f2], rng)?;
    ProjLine::new(q.rep().clone(), v)
}

/// Runs the three-line antipode chain from `p` along `line` and returns
/// `|⟨r, p⟩|`, which vanishes exactly when the final point `r` is antipodal
/// to `p` on the line joining them:
///
/// 1. `q` = antipode of `p` on `line`,
/// 2. `Q` = a random line meeting `line` perpendicularly in `q`,
/// 3. `r` = antipode of `q` on `Q`.
pub fn remark31_residual<R: Rng + ?Sized>(
    p: &ProjPoint,
    line: &ProjLine,
    rng: &mut R,
) -> Result<f64, CpnError> {
    let q = line.antipode_of(p)?;
    let perp = perpendicular_line_at_random(line, &q, rng)?;
    let r = perp.antipode_of(&q)?;
    Ok(r.overlap(p).norm())
}

/// A projective line through `q` that stays outside the open ball of radius
/// `s = d(p, q)` around `p`.
///
/// For antipodal inputs any line through `q` inside the orthogonal
/// hyperplane of `p` works. Otherwise the geodesic from `q` through `p` is
/// extended to the first cut point `p̂` of `q` at arc length π, and the
/// line is taken inside the cut locus of `p̂`: the span of `q` and a
/// direction orthogonal to both `q` and `p̂`.
pub fn avoiding_line(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine, CpnError> {
    if p.rep().len() != q.rep().len() {
        return Err(CpnError::DimensionMismatch(p.rep().len(), q.rep().len()));
    }
    if p.cp_dim() < 2 {
        return Err(CpnError::AmbientTooSmall);
    }
    let overlap = p.overlap(q).norm();
    if overlap > 1.0 - 1e-12 {
        return Err(CpnError::CoincidentPoints);
    }
    if overlap < 1e-12 {
        // s = π: the cut locus of p is the orthogonal hyperplane; pick any
        // line through q inside it.
        let v = orthogonal_direction(p.rep().len(), &[p.rep(), q.rep()])?;
        return ProjLine::new(q.rep().clone(), v);
    }
    let sigma = CPGeodesic::through(q, p)?;
    let p_hat = sigma.lift(std::f64::consts::PI);
    let v = orthogonal_direction(p.rep().len(), &[q.rep(), &p_hat])?;
    ProjLine::new(q.rep().clone(), v)
}
