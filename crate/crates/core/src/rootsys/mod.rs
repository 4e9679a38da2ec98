//! Irreducible (restricted) root systems and their dual-root lattice data.
//!
//! Everything is realized concretely: a [`RootSystem`] holds its full root
//! set in `rank`-dimensional Euclidean coordinates, normalized so the
//! highest root has unit length. Under that normalization the dual vector
//! `X_α = 2π·α/⟨α,α⟩` of a root is the period lattice generator of the
//! closed geodesic attached to `α`, and `‖X_δ‖ = 2π` for a highest root δ.

mod descriptor;
mod families;

use families::{dot, norm};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

pub use descriptor::{
    complex_projective, complex_quadric, descriptor_by_name, descriptor_table, octonion_plane,
    quaternionic_projective, sphere as sphere_descriptor, SymmetricSpaceDescriptor,
};

/// Classification tag of an irreducible (possibly non-reduced) root system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    /// Non-reduced: contains both `α` and `2α`.
    BC,
    E6,
    E7,
    E8,
    F4,
    G2,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::BC => "BC",
            Family::E6 => "E6",
            Family::E7 => "E7",
            Family::E8 => "E8",
            Family::F4 => "F4",
            Family::G2 => "G2",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "BC" => Ok(Family::BC),
            "E6" => Ok(Family::E6),
            "E7" => Ok(Family::E7),
            "E8" => Ok(Family::E8),
            "F4" => Ok(Family::F4),
            "G2" => Ok(Family::G2),
            other => Err(format!("unknown root-system family `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum RootSysError {
    #[error("invalid root system {family} of rank {rank}: {reason}")]
    InvalidFamilyRank {
        family: Family,
        rank: usize,
        reason: String,
    },
    #[error("root index {index} out of range (system has {count} roots)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error(
        "parity classification of root {root_index} is numerically unstable: \
         2<a,Y>/pi = {value} sits between tol and 2*tol from the nearest integer"
    )]
    NumericallyUnstable { root_index: usize, value: f64 },
    #[error("Y is not an order-two lattice point: 2Y does not lie in the period lattice")]
    NotHalfLatticePoint,
    #[error("Y lies in the full period lattice; it is a base point, not an antipode")]
    FullLatticePoint,
    #[error("descriptor `{name}` is inconsistent: {reason}")]
    InvalidDescriptor { name: String, reason: String },
}

/// A finite root system in `rank`-dimensional Euclidean coordinates,
/// normalized so the highest root δ has `‖δ‖ = 1`.
#[derive(Clone, Debug, Serialize)]
pub struct RootSystem {
    family: Family,
    rank: usize,
    roots: Vec<Vec<f64>>,
    positive: Vec<usize>,
    highest: usize,
}

/// A generator `X_α = 2π·α/⟨α,α⟩` of the period lattice; its Euclidean norm
/// is the length of the closed geodesic attached to `α`.
#[derive(Clone, Debug, Serialize)]
pub struct LatticeVector {
    pub coordinates: Vec<f64>,
    pub source_root: usize,
    pub length: f64,
}

/// Outcome of pairing every positive root against `X_δ`.
#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub family: Family,
    pub rank: usize,
    /// `⟨β, X_δ⟩` for each positive root, aligned with `positive_root_indices`.
    pub pairings: Vec<f64>,
    pub positive_root_indices: Vec<usize>,
    /// Indices (into the root list) of positive roots whose pairing is not
    /// in `{0, ±π}` (or `2π` at δ itself) within tolerance.
    pub offending: Vec<usize>,
    /// Number of positive roots with pairing `±π`.
    pub pi_count: usize,
    /// `Some(pi_count >= 2)` when rank ≥ 2, `None` for rank-one systems.
    pub at_least_two_pi: Option<bool>,
}

impl PairingReport {
    pub fn all_in_allowed_set(&self) -> bool {
        self.offending.is_empty()
    }
}

/// Builds the root system of the given family and rank in a standard
/// realization, normalized so the highest root has unit norm.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem, RootSysError> {
    let mut roots = families::raw_roots(family, rank)?;

    // Generic positivity functional: powers of 1/π are linearly independent
    // over the algebraic numbers, so it vanishes on no root vector.
    let functional: Vec<f64> = (0..rank)
        .map(|k| std::f64::consts::PI.powi(-(k as i32)))
        .collect();
    let mut highest = 0usize;
    let mut best = f64::NEG_INFINITY;
    let mut positive = Vec::with_capacity(roots.len() / 2);
    for (i, r) in roots.iter().enumerate() {
        let phi = dot(r, &functional);
        assert!(
            phi.abs() > 1e-9,
            "positivity functional degenerate on root {i} of {family}{rank}"
        );
        if phi > 0.0 {
            positive.push(i);
        }
        if phi > best {
            best = phi;
            highest = i;
        }
    }

    let scale = 1.0 / norm(&roots[highest]);
    for r in &mut roots {
        for x in r.iter_mut() {
            *x *= scale;
        }
    }

    let rs = RootSystem {
        family,
        rank,
        roots,
        positive,
        highest,
    };
    rs.validate();
    Ok(rs)
}

impl RootSystem {
    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn roots(&self) -> &[Vec<f64>] {
        &self.roots
    }

    pub fn root(&self, index: usize) -> Result<&[f64], RootSysError> {
        self.roots
            .get(index)
            .map(|r| r.as_slice())
            .ok_or(RootSysError::IndexOutOfRange {
                index,
                count: self.roots.len(),
            })
    }

    /// Indices of the chosen positive half `R⁺`.
    pub fn positive_root_indices(&self) -> &[usize] {
        &self.positive
    }

    /// Index of the highest root δ.
    pub fn highest_root_index(&self) -> usize {
        self.highest
    }

    pub fn highest_root(&self) -> &[f64] {
        &self.roots[self.highest]
    }

    /// Index of the root equal to `v` within tolerance, if any.
    pub fn find_root(&self, v: &[f64], tol: f64) -> Option<usize> {
        self.roots.iter().position(|r| {
            r.iter()
                .zip(v)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
                <= tol
        })
    }

    /// The period-lattice generator `X_α = 2π·α/⟨α,α⟩`.
    pub fn dual_vector(&self, root_index: usize) -> Result<LatticeVector, RootSysError> {
        let alpha = self.root(root_index)?;
        let nsq = dot(alpha, alpha);
        let coordinates: Vec<f64> = alpha
            .iter()
            .map(|x| 2.0 * std::f64::consts::PI * x / nsq)
            .collect();
        let length = norm(&coordinates);
        Ok(LatticeVector {
            coordinates,
            source_root: root_index,
            length,
        })
    }

    /// Positive roots `α` with `2⟨α,Y⟩ ∈ (2ℤ+1)π`, decided by the distance of
    /// `2⟨α,Y⟩/π` to the nearest integer: within `tol` of an odd integer is
    /// in, within `tol` of an even integer is out, and anything in the
    /// ambiguous band `(tol, 2·tol)` is reported as numerically unstable.
    pub fn odd_root_set(&self, y: &[f64], tol: f64) -> Result<Vec<usize>, RootSysError> {
        assert!(tol > 0.0, "tolerance must be positive");
        let mut out = Vec::new();
        for &i in &self.positive {
            let t = 2.0 * dot(&self.roots[i], y) / std::f64::consts::PI;
            let nearest = t.round();
            let d = (t - nearest).abs();
            if d <= tol {
                if (nearest as i64).rem_euclid(2) == 1 {
                    out.push(i);
                }
            } else if d < 2.0 * tol {
                return Err(RootSysError::NumericallyUnstable {
                    root_index: i,
                    value: t,
                });
            }
        }
        Ok(out)
    }

    /// Pairs every positive root β against `X_δ` and classifies the values:
    /// `⟨δ, X_δ⟩ = 2π` and every other pairing must be `0` or `±π`.
    pub fn check_longest_root_pairing(&self, tol: f64) -> Result<PairingReport, RootSysError> {
        let x_delta = self.dual_vector(self.highest)?;
        let mut pairings = Vec::with_capacity(self.positive.len());
        let mut offending = Vec::new();
        let mut pi_count = 0usize;
        for &i in &self.positive {
            let v = dot(&self.roots[i], &x_delta.coordinates);
            pairings.push(v);
            let ok = if i == self.highest {
                (v - 2.0 * std::f64::consts::PI).abs() <= tol
            } else {
                let near = |target: f64| (v - target).abs() <= tol;
                if near(std::f64::consts::PI) || near(-std::f64::consts::PI) {
                    pi_count += 1;
                    true
                } else {
                    near(0.0)
                }
            };
            if !ok {
                offending.push(i);
            }
        }
        let at_least_two_pi = (self.rank >= 2).then_some(pi_count >= 2);
        Ok(PairingReport {
            family: self.family,
            rank: self.rank,
            pairings,
            positive_root_indices: self.positive.clone(),
            offending,
            pi_count,
            at_least_two_pi,
        })
    }

    /// Simple roots of `R⁺`: indivisible positive roots that are not the sum
    /// of two positive roots.
    pub fn simple_root_indices(&self) -> Vec<usize> {
        let is_sum = |target: &[f64]| {
            for &b in &self.positive {
                for &c in &self.positive {
                    let sum: Vec<f64> = self.roots[b]
                        .iter()
                        .zip(&self.roots[c])
                        .map(|(x, y)| x + y)
                        .collect();
                    if vec_close(&sum, target, 1e-9) {
                        return true;
                    }
                }
            }
            false
        };
        self.positive
            .iter()
            .copied()
            .filter(|&i| !is_sum(&self.roots[i]))
            .collect()
    }

    /// A ℤ-basis of the period lattice generated by all `X_α`, as columns.
    ///
    /// For a simple root α the generator is `X_α`, except when `2α` is also
    /// a root, in which case `X_{2α} = X_α/2` is the finer generator.
    pub fn lattice_basis(&self) -> nalgebra::DMatrix<f64> {
        let simple = self.simple_root_indices();
        assert_eq!(simple.len(), self.rank, "simple system has wrong size");
        let mut basis = nalgebra::DMatrix::zeros(self.rank, self.rank);
        for (col, &i) in simple.iter().enumerate() {
            let double: Vec<f64> = self.roots[i].iter().map(|x| 2.0 * x).collect();
            let gen_index = self.find_root(&double, 1e-9).unwrap_or(i);
            let x = self.dual_vector(gen_index).expect("valid index");
            for (row, &v) in x.coordinates.iter().enumerate() {
                basis[(row, col)] = v;
            }
        }
        basis
    }

    /// Whether `y` lies in the period lattice, within `tol` on the integer
    /// coordinates.
    pub fn in_lattice(&self, y: &[f64], tol: f64) -> bool {
        let basis = self.lattice_basis();
        let rhs = nalgebra::DVector::from_column_slice(y);
        let lu = basis.lu();
        match lu.solve(&rhs) {
            Some(c) => c.iter().all(|&x| (x - x.round()).abs() <= tol),
            None => false,
        }
    }

    fn validate(&self) {
        // Closed under negation, and R⁺ ∪ (−R⁺) partitions R.
        let mut neg_seen = vec![false; self.roots.len()];
        for (i, r) in self.roots.iter().enumerate() {
            let neg: Vec<f64> = r.iter().map(|x| -x).collect();
            let j = self
                .find_root(&neg, 1e-9)
                .unwrap_or_else(|| panic!("root {i} of {} has no negative", self.family));
            neg_seen[j] = true;
        }
        assert!(neg_seen.iter().all(|&b| b), "negation is not a bijection");
        assert_eq!(2 * self.positive.len(), self.roots.len());

        // ‖δ‖ = 1 is maximal, and δ + α is never a root for positive α.
        let delta = &self.roots[self.highest];
        assert!((norm(delta) - 1.0).abs() < 1e-12);
        for r in &self.roots {
            assert!(norm(r) <= 1.0 + 1e-12);
        }
        for &i in &self.positive {
            let sum: Vec<f64> = delta.iter().zip(&self.roots[i]).map(|(a, b)| a + b).collect();
            assert!(
                self.find_root(&sum, 1e-9).is_none(),
                "highest root is not highest: delta + root {i} is a root"
            );
        }
    }
}

fn vec_close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
            <= tol
}
