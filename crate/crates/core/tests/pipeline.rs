//! Cross-model checks: the S² and CPⁿ pipelines share the operator and
//! factorization code path, the CP¹ model is isometric to the sphere
//! model, and least-squares inversion recovers what the transform keeps.

use funk_core::cpn::{bloch_map, geodesic_integral, sample_geodesics};
use funk_core::lab::{assemble_cp_operator, CPBasis};
use funk_core::linalg::{kernel_analysis, max_angle_to_coordinate_span, pseudo_solve};
use funk_core::sphere::{
    assemble_operator, circle_integral, sample_circles, GreatCircle, HarmonicBasis,
    SphereFunction, UnitVec3,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identical pipeline settings, opposite verdicts: the sphere operator has
/// the odd-degree kernel while the CP² operator has none, so a kernel can
/// not be an artifact of the shared assembly/factorization path.
#[test]
fn sphere_and_projective_plane_disagree_about_the_kernel() {
    let tol_ratio = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(100);

    let basis = HarmonicBasis::new(3).unwrap();
    let circles = sample_circles(100, &mut rng);
    let sphere_op = assemble_operator(&basis, &circles, 64, None);
    let sphere_kernel = kernel_analysis(&sphere_op, tol_ratio).unwrap();
    // Oracle: the odd-degree harmonics at lmax = 3 number (2·1+1) + (2·3+1).
    assert_eq!(basis.odd_count(), 10);
    assert_eq!(sphere_kernel.kernel_dim(), 10);
    assert_eq!(sphere_kernel.rank, 6);

    let cp_basis = CPBasis::build(2, 1).unwrap();
    let geodesics = sample_geodesics(2, 50, &mut rng);
    let cp_op = assemble_cp_operator(&cp_basis, &geodesics, 64, None).unwrap();
    let cp_kernel = kernel_analysis(&cp_op, tol_ratio).unwrap();
    assert_eq!(cp_kernel.kernel_dim(), 0);
    assert_eq!(cp_kernel.rank, 9);
    assert!(cp_kernel.decisive());
}

/// The sphere kernel is not just 10-dimensional: it coincides with the
/// odd-degree coordinate span to high accuracy.
#[test]
fn sphere_kernel_aligns_with_the_odd_degree_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let basis = HarmonicBasis::new(4).unwrap();
    let circles = sample_circles(125, &mut rng);
    let op = assemble_operator(&basis, &circles, 64, None);
    let ka = kernel_analysis(&op, 1e-8).unwrap();
    assert_eq!(ka.kernel_dim(), basis.odd_count());
    let odd_mask: Vec<bool> = (0..basis.len())
        .map(|i| !HarmonicBasis::degree_of(i).is_multiple_of(2))
        .collect();
    let angle = max_angle_to_coordinate_span(&ka.kernel, &odd_mask);
    assert!(angle < 1e-8, "principal angle {angle}");
}

/// Geodesic integrals on CP¹ equal great-circle integrals of the
/// Bloch-mapped function: the two quadratures traverse the same circle.
#[test]
fn cp1_geodesics_integrate_like_great_circles() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for _ in 0..100 {
        let f = SphereFunction::random(8, &mut rng).unwrap();
        let geo = sample_geodesics(1, 1, &mut rng).pop().unwrap();
        let lhs = geodesic_integral(|p| f.evaluate(&bloch_map(p).unwrap()), &geo, 256);

        let b0 = bloch_map(&geo.point(0.0)).unwrap();
        let b1 = bloch_map(&geo.point(std::f64::consts::FRAC_PI_2)).unwrap();
        let pole = UnitVec3::new(b0.cross(&b1)).unwrap();
        let rhs = circle_integral(|x| f.evaluate(x), &GreatCircle::new(pole), 256);
        assert!(
            (lhs - rhs).abs() <= 1e-10,
            "bridge mismatch: {lhs} vs {rhs}"
        );
    }
}

/// The pseudoinverse of the sphere operator inverts exactly the even part:
/// odd coefficients are in the kernel and come back as zero.
#[test]
fn sphere_least_squares_recovers_the_even_part() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let basis = HarmonicBasis::new(4).unwrap();
    let circles = sample_circles(120, &mut rng);
    let op = assemble_operator(&basis, &circles, 64, None);
    let f = SphereFunction::random(4, &mut rng).unwrap();
    let data = op.apply(f.coefficients());
    let recovered = pseudo_solve(op.matrix(), &data).unwrap();
    for i in 0..basis.len() {
        let expected = if HarmonicBasis::degree_of(i).is_multiple_of(2) {
            f.coefficients()[i]
        } else {
            0.0
        };
        assert!(
            (recovered[i] - expected).abs() < 1e-8,
            "coefficient {i}: {} vs {expected}",
            recovered[i]
        );
    }
}
