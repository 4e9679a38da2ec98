//! Unitary-invariant sampling of closed geodesics.

use super::{complex_gaussian, hdot, CPGeodesic, ProjPoint};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Draws `count` closed geodesics of CPⁿ (`cp_dim = n`): base points are
/// normalized complex Gaussians and directions are uniform on the unit
/// sphere of the horizontal complement, so the induced measure is invariant
/// under the unitary group.
pub fn sample_geodesics<R: Rng + ?Sized>(
    cp_dim: usize,
    count: usize,
    rng: &mut R,
) -> Vec<CPGeodesic> {
    assert!(cp_dim >= 1, "CP^0 is a point and has no geodesics");
    let ambient = cp_dim + 1;
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let base = ProjPoint::random(cp_dim, rng);
        let mut dir = complex_gaussian(ambient, rng);
        let overlap = hdot(base.rep(), &dir);
        dir -= base.rep().map(|z| z * overlap);
        let n = dir.norm();
        if n < 1e-9 {
            continue;
        }
        let geo = CPGeodesic::new(base, dir.map(|z| z / n)).expect("horizontal by construction");
        out.push(geo);
    }
    out
}

/// A random unitary matrix: QR of a complex Gaussian with the R diagonal
/// re-phased, which makes the distribution unitarily invariant.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let gauss = DMatrix::<Complex64>::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng),
            rand_distr::Distribution::sample(&rand_distr::StandardNormal, rng),
        )
    });
    let qr = gauss.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::ONE };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cpn::fs_distance;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_geodesics_satisfy_the_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for geo in sample_geodesics(3, 1000, &mut rng) {
            assert!((geo.base().rep().norm() - 1.0).abs() < 1e-12);
            assert!((geo.direction().norm() - 1.0).abs() < 1e-12);
            assert!(hdot(geo.base().rep(), geo.direction()).norm() < 1e-12);
            assert!(geo.point(2.0 * std::f64::consts::PI).approx_eq(geo.base(), 1e-12));
            for t in [0.7, 2.1, 3.0] {
                assert!((fs_distance(geo.base(), &geo.point(t)) - t).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn fixed_seed_reproduces_identical_parameters() {
        let mut a = ChaCha8Rng::seed_from_u64(41);
        let mut b = ChaCha8Rng::seed_from_u64(41);
        let ga = sample_geodesics(2, 20, &mut a);
        let gb = sample_geodesics(2, 20, &mut b);
        for (x, y) in ga.iter().zip(&gb) {
            assert_eq!(x.base().rep(), y.base().rep());
            assert_eq!(x.direction(), y.direction());
        }
    }

    #[test]
    fn sampling_measure_is_unitarily_invariant() {
        // Monte-Carlo oracle: the mean distance from γ(0) to a fixed point
        // must match the same statistic with the point rotated by a random
        // unitary, within 3 combined standard errors.
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let fixed = ProjPoint::random(2, &mut rng);
        let u = random_unitary(3, &mut rng);
        let rotated = ProjPoint::new(&u * fixed.rep()).unwrap();

        let stats = |target: &ProjPoint, rng: &mut ChaCha8Rng| {
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for geo in sample_geodesics(2, n, rng) {
                let d = fs_distance(geo.base(), target);
                sum += d;
                sumsq += d * d;
            }
            let mean = sum / n as f64;
            let var = (sumsq / n as f64 - mean * mean).max(0.0);
            (mean, (var / n as f64).sqrt())
        };
        let (m1, se1) = stats(&fixed, &mut rng);
        let (m2, se2) = stats(&rotated, &mut rng);
        let se = (se1 * se1 + se2 * se2).sqrt();
        assert!(
            (m1 - m2).abs() <= 3.0 * se,
            "means {m1} vs {m2}, combined se {se}"
        );
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let u = random_unitary(4, &mut rng);
        let gram = u.adjoint() * &u;
        for i in 0..4 {
            for j in 0..4 {
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((gram[(i, j)] - Complex64::new(target, 0.0)).norm() < 1e-12);
            }
        }
    }
}
