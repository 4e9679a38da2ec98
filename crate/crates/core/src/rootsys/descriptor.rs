//! Concrete irreducible symmetric spaces as restricted-root data.
//!
//! A descriptor ties a root system to the multiplicity of each positive
//! root; that is enough to evaluate dimension bookkeeping, the maximal
//! totally geodesic sphere dimension `m(δ)+1`, and midpoint-locus
//! dimensions, without any coordinate model of the space itself.

use super::families::norm;
use super::{build_root_system, Family, RootSysError, RootSystem};
use serde::Serialize;

/// A root system together with a multiplicity for each positive root.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetricSpaceDescriptor {
    name: String,
    root_system: RootSystem,
    /// Multiplicities aligned with `root_system.positive_root_indices()`.
    multiplicities: Vec<u32>,
    dimension: usize,
}

impl SymmetricSpaceDescriptor {
    /// Builds a descriptor and checks the dimension bookkeeping
    /// `dimension = rank + Σ m(α)` and constancy of `m` on each root-length
    /// class.
    pub fn new(
        name: impl Into<String>,
        root_system: RootSystem,
        multiplicities: Vec<u32>,
        dimension: usize,
    ) -> Result<Self, RootSysError> {
        let name = name.into();
        let positive = root_system.positive_root_indices();
        if multiplicities.len() != positive.len() {
            return Err(RootSysError::InvalidDescriptor {
                name,
                reason: format!(
                    "need one multiplicity per positive root ({} != {})",
                    multiplicities.len(),
                    positive.len()
                ),
            });
        }
        if multiplicities.contains(&0) {
            return Err(RootSysError::InvalidDescriptor {
                name,
                reason: "multiplicities must be positive".to_string(),
            });
        }
        let total: usize = multiplicities.iter().map(|&m| m as usize).sum();
        if dimension != root_system.rank() + total {
            return Err(RootSysError::InvalidDescriptor {
                name,
                reason: format!(
                    "dimension {} != rank {} + sum of multiplicities {}",
                    dimension,
                    root_system.rank(),
                    total
                ),
            });
        }
        // Same-length roots lie in one Weyl orbit for these systems and must
        // share their multiplicity.
        for (i, &a) in positive.iter().enumerate() {
            for (j, &b) in positive.iter().enumerate() {
                let na = norm(root_system.root(a).unwrap());
                let nb = norm(root_system.root(b).unwrap());
                if (na - nb).abs() < 1e-9 && multiplicities[i] != multiplicities[j] {
                    return Err(RootSysError::InvalidDescriptor {
                        name,
                        reason: "multiplicity not constant on a root-length class".to_string(),
                    });
                }
            }
        }
        Ok(Self {
            name,
            root_system,
            multiplicities,
            dimension,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Multiplicity of the positive root with the given root index.
    pub fn multiplicity(&self, root_index: usize) -> Option<u32> {
        self.root_system
            .positive_root_indices()
            .iter()
            .position(|&i| i == root_index)
            .map(|p| self.multiplicities[p])
    }

    /// A descriptor is a round sphere exactly when its restricted root
    /// system is A₁ (a single positive root).
    pub fn is_sphere(&self) -> bool {
        self.root_system.positive_root_indices().len() == 1
    }

    /// `m(δ) + 1`: the dimension of a maximal totally geodesic sphere of
    /// curvature one containing a shortest closed geodesic.
    pub fn helgason_sphere_dimension(&self) -> usize {
        let delta = self.root_system.highest_root_index();
        self.multiplicity(delta).expect("highest root is positive") as usize + 1
    }

    /// Dimension of the orbit of the antipode `Exp(Y)`: the sum of the
    /// multiplicities over the parity-odd root set of `Y`.
    ///
    /// `Y` must be an order-two point of the period lattice: `2Y` in the
    /// lattice but `Y` itself not.
    pub fn midpoint_locus_dimension(&self, y: &[f64]) -> Result<usize, RootSysError> {
        let tol = 1e-9;
        if self.root_system.in_lattice(y, tol) {
            return Err(RootSysError::FullLatticePoint);
        }
        let doubled: Vec<f64> = y.iter().map(|v| 2.0 * v).collect();
        if !self.root_system.in_lattice(&doubled, tol) {
            return Err(RootSysError::NotHalfLatticePoint);
        }
        let odd = self.root_system.odd_root_set(y, tol)?;
        Ok(odd
            .iter()
            .map(|&i| self.multiplicity(i).unwrap() as usize)
            .sum())
    }

    /// Midpoint-locus dimension at the canonical antipode `X_δ/2` of a
    /// shortest closed geodesic.
    pub fn midpoint_locus_dimension_at_half_x_delta(&self) -> Result<usize, RootSysError> {
        let x = self
            .root_system
            .dual_vector(self.root_system.highest_root_index())?;
        let half: Vec<f64> = x.coordinates.iter().map(|v| v / 2.0).collect();
        self.midpoint_locus_dimension(&half)
    }
}

fn multiplicities_by_norm(
    rs: &RootSystem,
    assign: impl Fn(f64) -> u32,
) -> Vec<u32> {
    rs.positive_root_indices()
        .iter()
        .map(|&i| assign(norm(rs.root(i).unwrap())))
        .collect()
}

/// The round sphere Sⁿ, `n ≥ 2`: A₁ with `m(δ) = n − 1`.
pub fn sphere(n: usize) -> Result<SymmetricSpaceDescriptor, RootSysError> {
    let rs = build_root_system(Family::A, 1)?;
    SymmetricSpaceDescriptor::new(format!("S^{n}"), rs, vec![(n - 1) as u32], n)
}

/// Complex projective space CPⁿ: BC₁ with `m(α) = 2n−2`, `m(2α) = 1`.
///
/// For `n = 1` the short multiplicity vanishes and the descriptor collapses
/// to A₁ with `m(δ) = 1`, i.e. the round 2-sphere.
pub fn complex_projective(n: usize) -> Result<SymmetricSpaceDescriptor, RootSysError> {
    let name = format!("CP^{n}");
    if n == 1 {
        let rs = build_root_system(Family::A, 1)?;
        return SymmetricSpaceDescriptor::new(name, rs, vec![1], 2);
    }
    let rs = build_root_system(Family::BC, 1)?;
    let mults = multiplicities_by_norm(&rs, |len| if len < 0.75 { 2 * n as u32 - 2 } else { 1 });
    SymmetricSpaceDescriptor::new(name, rs, mults, 2 * n)
}

/// Quaternionic projective space HPⁿ: BC₁ with `m(α) = 4n−4`, `m(2α) = 3`;
/// HP¹ collapses to the round 4-sphere.
pub fn quaternionic_projective(n: usize) -> Result<SymmetricSpaceDescriptor, RootSysError> {
    let name = format!("HP^{n}");
    if n == 1 {
        let rs = build_root_system(Family::A, 1)?;
        return SymmetricSpaceDescriptor::new(name, rs, vec![3], 4);
    }
    let rs = build_root_system(Family::BC, 1)?;
    let mults = multiplicities_by_norm(&rs, |len| if len < 0.75 { 4 * n as u32 - 4 } else { 3 });
    SymmetricSpaceDescriptor::new(name, rs, mults, 4 * n)
}

/// The octonion plane: BC₁ with `m(α) = 8`, `m(2α) = 7`, dimension 16.
pub fn octonion_plane() -> Result<SymmetricSpaceDescriptor, RootSysError> {
    let rs = build_root_system(Family::BC, 1)?;
    let mults = multiplicities_by_norm(&rs, |len| if len < 0.75 { 8 } else { 7 });
    SymmetricSpaceDescriptor::new("OP^2", rs, mults, 16)
}

/// The complex quadric Qⁿ, `n ≥ 3`: B₂ with long-root multiplicity 1 and
/// short-root multiplicity `n − 2`, real dimension `2n`.
pub fn complex_quadric(n: usize) -> Result<SymmetricSpaceDescriptor, RootSysError> {
    if n < 3 {
        return Err(RootSysError::InvalidDescriptor {
            name: format!("Q^{n}"),
            reason: "the quadric model needs n >= 3".to_string(),
        });
    }
    let rs = build_root_system(Family::B, 2)?;
    let mults = multiplicities_by_norm(&rs, |len| if len < 0.9 { n as u32 - 2 } else { 1 });
    SymmetricSpaceDescriptor::new(format!("Q^{n}"), rs, mults, 2 * n)
}

/// The bundled table of concrete symmetric spaces.
pub fn descriptor_table() -> Vec<SymmetricSpaceDescriptor> {
    let mut out = Vec::new();
    for n in 2..=7 {
        out.push(sphere(n).expect("sphere descriptor"));
    }
    for n in 1..=4 {
        out.push(complex_projective(n).expect("CP descriptor"));
    }
    for n in 1..=3 {
        out.push(quaternionic_projective(n).expect("HP descriptor"));
    }
    out.push(octonion_plane().expect("OP2 descriptor"));
    for n in 3..=5 {
        out.push(complex_quadric(n).expect("quadric descriptor"));
    }
    out
}

/// Looks a descriptor up by name; accepts `CP^2`, `CP2`, `cp2`, etc.
pub fn descriptor_by_name(name: &str) -> Option<SymmetricSpaceDescriptor> {
    let canon = |s: &str| s.replace('^', "").to_ascii_uppercase();
    let wanted = canon(name);
    descriptor_table()
        .into_iter()
        .find(|d| canon(d.name()) == wanted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bookkeeping_holds_for_the_whole_table() {
        let table = descriptor_table();
        assert!(!table.is_empty());
        for d in &table {
            let total: usize = d
                .root_system()
                .positive_root_indices()
                .iter()
                .map(|&i| d.multiplicity(i).unwrap() as usize)
                .sum();
            assert_eq!(
                d.dimension(),
                d.root_system().rank() + total,
                "{}",
                d.name()
            );
        }
    }

    #[test]
    fn quadric_entry_matches_the_bookkeeping_example() {
        // 2·1 + 2·(n−2) + 2 = 2n.
        let q = complex_quadric(5).unwrap();
        assert_eq!(q.root_system().rank(), 2);
        assert_eq!(q.dimension(), 10);
        let delta = q.root_system().highest_root_index();
        assert_eq!(q.multiplicity(delta), Some(1));
    }

    #[test]
    fn cp_and_sphere_dimensions() {
        assert_eq!(complex_projective(3).unwrap().dimension(), 6);
        assert_eq!(sphere(4).unwrap().dimension(), 4);
        assert_eq!(octonion_plane().unwrap().dimension(), 16);
        assert_eq!(quaternionic_projective(2).unwrap().dimension(), 8);
    }

    #[test]
    fn helgason_sphere_dimensions() {
        assert_eq!(complex_projective(2).unwrap().helgason_sphere_dimension(), 2);
        assert_eq!(complex_projective(5).unwrap().helgason_sphere_dimension(), 2);
        assert_eq!(quaternionic_projective(3).unwrap().helgason_sphere_dimension(), 4);
        assert_eq!(sphere(6).unwrap().helgason_sphere_dimension(), 6);
        assert_eq!(octonion_plane().unwrap().helgason_sphere_dimension(), 8);
        assert_eq!(complex_quadric(4).unwrap().helgason_sphere_dimension(), 2);
    }

    #[test]
    fn cp1_collapses_to_a_sphere() {
        let cp1 = complex_projective(1).unwrap();
        assert!(cp1.is_sphere());
        assert_eq!(cp1.root_system().family(), Family::A);
        assert_eq!(cp1.dimension(), 2);
        let hp1 = quaternionic_projective(1).unwrap();
        assert!(hp1.is_sphere());
        assert_eq!(hp1.dimension(), 4);
    }

    #[test]
    fn midpoint_locus_dimensions_at_half_x_delta() {
        // Sⁿ: the midpoint locus of a point is the single antipodal point.
        for n in 2..=5 {
            assert_eq!(
                sphere(n).unwrap().midpoint_locus_dimension_at_half_x_delta().unwrap(),
                0
            );
        }
        // CPⁿ: R(X_δ/2) = {α} by parity, so the dimension is m(α) = 2n−2,
        // the dimension of the cut locus CP^{n−1}.
        for n in 2..=4 {
            assert_eq!(
                complex_projective(n)
                    .unwrap()
                    .midpoint_locus_dimension_at_half_x_delta()
                    .unwrap(),
                2 * n - 2
            );
        }
        for n in 2..=3 {
            assert_eq!(
                quaternionic_projective(n)
                    .unwrap()
                    .midpoint_locus_dimension_at_half_x_delta()
                    .unwrap(),
                4 * n - 4
            );
        }
        // OP²: R(X_δ/2) = {α} with m(α) = 8, the dimension of S⁸.
        assert_eq!(
            octonion_plane()
                .unwrap()
                .midpoint_locus_dimension_at_half_x_delta()
                .unwrap(),
            8
        );
    }

    #[test]
    fn non_sphere_midpoint_loci_have_dimension_at_least_two() {
        for d in descriptor_table() {
            if !d.is_sphere() {
                let dim = d.midpoint_locus_dimension_at_half_x_delta().unwrap();
                assert!(dim >= 2, "{}: midpoint dimension {dim}", d.name());
            }
        }
    }

    #[test]
    fn full_lattice_points_are_rejected() {
        let d = complex_projective(2).unwrap();
        let rs = d.root_system();
        let x = rs.dual_vector(rs.highest_root_index()).unwrap();
        assert!(matches!(
            d.midpoint_locus_dimension(&x.coordinates),
            Err(RootSysError::FullLatticePoint)
        ));
        // A generic point is not in the half lattice at all.
        assert!(matches!(
            d.midpoint_locus_dimension(&[0.123]),
            Err(RootSysError::NotHalfLatticePoint)
        ));
    }

    #[test]
    fn quadric_midpoint_at_short_dual_vector_is_a_single_point() {
        let q = complex_quadric(4).unwrap();
        let rs = q.root_system();
        let beta = rs
            .positive_root_indices()
            .iter()
            .copied()
            .find(|&i| super::norm(rs.root(i).unwrap()) < 0.9)
            .unwrap();
        let x_beta = rs.dual_vector(beta).unwrap();
        let half: Vec<f64> = x_beta.coordinates.iter().map(|v| v / 2.0).collect();
        assert_eq!(q.midpoint_locus_dimension(&half).unwrap(), 0);
    }

    #[test]
    fn descriptor_lookup_by_name() {
        assert!(descriptor_by_name("CP2").is_some());
        assert!(descriptor_by_name("cp^3").is_some());
        assert!(descriptor_by_name("OP2").is_some());
        assert!(descriptor_by_name("X9").is_none());
    }
}
