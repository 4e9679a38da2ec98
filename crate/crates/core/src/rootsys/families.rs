//! Standard Euclidean realizations of the irreducible root systems.
//!
//! Every family is enumerated explicitly in its classical ambient
//! coordinates; systems whose standard realization lives in a higher
//! ambient space (A, G₂ via the sum-zero plane, E₆ and E₇ inside E₈) are
//! projected onto an orthonormal basis of their span so that the returned
//! vectors always have exactly `rank` coordinates.

use super::{Family, RootSysError};

/// Root count of each irreducible system, from the classification.
pub(crate) fn expected_count(family: Family, rank: usize) -> usize {
    match family {
        Family::A => rank * (rank + 1),
        Family::B | Family::C => 2 * rank * rank,
        Family::D => 2 * rank * (rank - 1),
        Family::BC => 2 * rank * (rank + 1),
        Family::G2 => 12,
        Family::F4 => 48,
        Family::E6 => 72,
        Family::E7 => 126,
        Family::E8 => 240,
    }
}

/// Builds the unnormalized root vectors of `(family, rank)` in
/// `rank`-dimensional coordinates.
pub(crate) fn raw_roots(family: Family, rank: usize) -> Result<Vec<Vec<f64>>, RootSysError> {
    let invalid = |reason: &str| {
        Err(RootSysError::InvalidFamilyRank {
            family,
            rank,
            reason: reason.to_string(),
        })
    };
    let roots = match family {
        Family::A => {
            if rank < 1 {
                return invalid("type A requires rank >= 1");
            }
            project_to_span(a_type_ambient(rank), rank)
        }
        Family::B => {
            if rank < 2 {
                return invalid("type B requires rank >= 2 (B1 coincides with A1)");
            }
            let mut r = signed_units(rank, 1.0);
            r.extend(signed_pairs(rank));
            r
        }
        Family::C => {
            if rank < 2 {
                return invalid("type C requires rank >= 2 (C1 coincides with A1)");
            }
            let mut r = signed_pairs(rank);
            r.extend(signed_units(rank, 2.0));
            r
        }
        Family::D => {
            if rank < 3 {
                return invalid("type D requires rank >= 3 (D2 is not irreducible)");
            }
            signed_pairs(rank)
        }
        Family::BC => {
            if rank < 1 {
                return invalid("type BC requires rank >= 1");
            }
            let mut r = signed_units(rank, 1.0);
            r.extend(signed_units(rank, 2.0));
            r.extend(signed_pairs(rank));
            r
        }
        Family::G2 => {
            if rank != 2 {
                return invalid("G2 requires rank 2");
            }
            project_to_span(g2_ambient(), 2)
        }
        Family::F4 => {
            if rank != 4 {
                return invalid("F4 requires rank 4");
            }
            f4_roots()
        }
        Family::E6 => {
            if rank != 6 {
                return invalid("E6 requires rank 6");
            }
            let constraint1 = unit_sum(8, 6, 7);
            let constraint2 = unit_sum(8, 5, 6);
            let kept: Vec<_> = e8_roots()
                .into_iter()
                .filter(|r| dot(r, &constraint1).abs() < 1e-12 && dot(r, &constraint2).abs() < 1e-12)
                .collect();
            project_to_span(kept, 6)
        }
        Family::E7 => {
            if rank != 7 {
                return invalid("E7 requires rank 7");
            }
            let constraint = unit_sum(8, 6, 7);
            let kept: Vec<_> = e8_roots()
                .into_iter()
                .filter(|r| dot(r, &constraint).abs() < 1e-12)
                .collect();
            project_to_span(kept, 7)
        }
        Family::E8 => {
            if rank != 8 {
                return invalid("E8 requires rank 8");
            }
            e8_roots()
        }
    };
    debug_assert_eq!(roots.len(), expected_count(family, rank));
    Ok(roots)
}

/// `±scale·e_i` for every coordinate.
fn signed_units(rank: usize, scale: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * rank);
    for i in 0..rank {
        for sign in [1.0, -1.0] {
            let mut v = vec![0.0; rank];
            v[i] = sign * scale;
            out.push(v);
        }
    }
    out
}

/// `±e_i ± e_j` for every coordinate pair `i < j`.
fn signed_pairs(rank: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * rank * (rank - 1));
    for i in 0..rank {
        for j in (i + 1)..rank {
            for si in [1.0, -1.0] {
                for sj in [1.0, -1.0] {
                    let mut v = vec![0.0; rank];
                    v[i] = si;
                    v[j] = sj;
                    out.push(v);
                }
            }
        }
    }
    out
}

/// A_n in the sum-zero hyperplane of ℝ^{n+1}: `e_i − e_j`, `i ≠ j`.
fn a_type_ambient(rank: usize) -> Vec<Vec<f64>> {
    let dim = rank + 1;
    let mut out = Vec::with_capacity(rank * (rank + 1));
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                let mut v = vec![0.0; dim];
                v[i] = 1.0;
                v[j] = -1.0;
                out.push(v);
            }
        }
    }
    out
}

/// G₂ in the sum-zero plane of ℝ³: `±(e_i − e_j)` short, `±(2e_i − e_j − e_k)` long.
fn g2_ambient() -> Vec<Vec<f64>> {
    let mut out = a_type_ambient(2);
    for i in 0..3 {
        let mut v = vec![-1.0; 3];
        v[i] = 2.0;
        out.push(v.clone());
        out.push(v.iter().map(|x| -x).collect());
    }
    out
}

/// F₄: `±e_i`, `±e_i ± e_j`, and all half-integer sign vectors.
fn f4_roots() -> Vec<Vec<f64>> {
    let mut out = signed_units(4, 1.0);
    out.extend(signed_pairs(4));
    for mask in 0..16u32 {
        let v: Vec<f64> = (0..4)
            .map(|i| if mask >> i & 1 == 1 { -0.5 } else { 0.5 })
            .collect();
        out.push(v);
    }
    out
}

/// E₈: `±e_i ± e_j` plus all half-integer sign vectors with an even number
/// of minus signs.
fn e8_roots() -> Vec<Vec<f64>> {
    let mut out = signed_pairs(8);
    for mask in 0..256u32 {
        if mask.count_ones().is_multiple_of(2) {
            let v: Vec<f64> = (0..8)
                .map(|i| if mask >> i & 1 == 1 { -0.5 } else { 0.5 })
                .collect();
            out.push(v);
        }
    }
    out
}

/// `e_i + e_j` as an ambient constraint vector.
fn unit_sum(dim: usize, i: usize, j: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[i] = 1.0;
    v[j] = 1.0;
    v
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Re-expresses ambient vectors spanning a `rank`-dimensional subspace in an
/// orthonormal basis of that span (modified Gram–Schmidt over the vectors in
/// construction order, so the result is deterministic).
fn project_to_span(ambient: Vec<Vec<f64>>, rank: usize) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(rank);
    for v in &ambient {
        if basis.len() == rank {
            break;
        }
        let mut w = v.clone();
        for b in &basis {
            let c = dot(&w, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi -= c * bi;
            }
        }
        let n = norm(&w);
        if n > 1e-9 {
            for wi in &mut w {
                *wi /= n;
            }
            basis.push(w);
        }
    }
    assert_eq!(basis.len(), rank, "root span has unexpected dimension");
    ambient
        .iter()
        .map(|v| basis.iter().map(|b| dot(v, b)).collect())
        .collect()
}
