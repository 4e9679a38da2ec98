//! Dense transform operators and their rank-revealing analysis.
//!
//! Both the S² and CPⁿ pipelines assemble a [`TransformOperator`] and push
//! it through the same [`kernel_analysis`] code path, so a kernel found on
//! one model and not the other cannot be an artifact of the factorization.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

/// Factor below which a trailing singular value must fall, relative to the
/// last retained one, for a rank verdict to count as decisive.
pub const DECISIVE_GAP: f64 = 1e3;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("data length {got} does not match the operator's {expected} rows")]
    DataLength { expected: usize, got: usize },
    #[error("regularization weight must be nonnegative, got {0}")]
    NegativeRegularization(f64),
    #[error("factorization failed: {0}")]
    Factorization(String),
}

/// Where an operator matrix came from; carried along so experiment reports
/// can echo their inputs.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub space: String,
    pub basis: String,
    pub seed: Option<u64>,
    pub quad_points: usize,
}

/// A dense matrix whose `(i, j)` entry is the integral of basis function `j`
/// over sampled closed geodesic `i`.
#[derive(Clone, Debug)]
pub struct TransformOperator {
    matrix: DMatrix<f64>,
    provenance: Provenance,
}

impl TransformOperator {
    pub fn new(matrix: DMatrix<f64>, provenance: Provenance) -> Self {
        Self { matrix, provenance }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    /// Applies the operator to a coefficient vector.
    pub fn apply(&self, coeffs: &DVector<f64>) -> DVector<f64> {
        &self.matrix * coeffs
    }

    /// Writes the matrix as CSV rows with 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                if j > 0 {
                    write!(w, ",")?;
                }
                write!(w, "{:.16e}", self.matrix[(i, j)])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

/// Singular spectrum of an operator with the induced rank/kernel split.
#[derive(Clone, Debug, Serialize)]
pub struct KernelAnalysis {
    /// Nonnegative, non-increasing.
    pub singular_values: Vec<f64>,
    /// Count of singular values above `tol_ratio · σ₁`.
    pub rank: usize,
    pub tol_ratio: f64,
    /// Ratio of the last retained to the first discarded singular value;
    /// `None` when the matrix has full column rank (no cut).
    pub gap: Option<f64>,
    /// Set when a cut exists but the spectrum does not separate by at least
    /// [`DECISIVE_GAP`] there.
    pub ill_separated: bool,
    /// Orthonormal kernel basis, one column per kernel direction.
    #[serde(skip)]
    pub kernel: DMatrix<f64>,
}

impl KernelAnalysis {
    pub fn kernel_dim(&self) -> usize {
        self.kernel.ncols()
    }

    /// Whether the rank verdict is decisive: a ≥ [`DECISIVE_GAP`] separation
    /// at the cut, or — for full-rank spectra — that much headroom between
    /// the smallest singular value and the threshold.
    pub fn decisive(&self) -> bool {
        match self.gap {
            Some(g) => g >= DECISIVE_GAP,
            None => {
                let smax = self.singular_values.first().copied().unwrap_or(0.0);
                let smin = self.singular_values.last().copied().unwrap_or(0.0);
                smax > 0.0 && smin >= DECISIVE_GAP * self.tol_ratio * smax
            }
        }
    }

    /// σ_min/σ_max, zero for an empty spectrum.
    pub fn sigma_ratio(&self) -> f64 {
        match (self.singular_values.first(), self.singular_values.last()) {
            (Some(&smax), Some(&smin)) if smax > 0.0 => smin / smax,
            _ => 0.0,
        }
    }
}

fn check_finite(m: &DMatrix<f64>) -> Result<(), LinalgError> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if !m[(i, j)].is_finite() {
                return Err(LinalgError::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Full SVD with singular values (and the matching right singular vectors)
/// sorted in descending order.
fn sorted_svd(m: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>), LinalgError> {
    check_finite(m)?;
    let svd = m.clone().svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| LinalgError::Factorization("SVD did not return V^T".to_string()))?;
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let mut v_sorted = DMatrix::zeros(v_t.nrows(), v_t.ncols());
    for (row, &i) in order.iter().enumerate() {
        v_sorted.set_row(row, &v_t.row(i));
    }
    Ok((sigma, v_sorted))
}

/// Singular values of a dense matrix, descending.
pub fn rank_revealing_spectrum(m: &DMatrix<f64>) -> Result<Vec<f64>, LinalgError> {
    Ok(sorted_svd(m)?.0)
}

/// Splits the spectrum of an operator at `tol_ratio · σ₁` and returns the
/// spectrum, the numerical rank, and an orthonormal basis of the
/// below-threshold right singular subspace.
pub fn kernel_analysis(
    op: &TransformOperator,
    tol_ratio: f64,
) -> Result<KernelAnalysis, LinalgError> {
    analyze_matrix(op.matrix(), tol_ratio)
}

pub(crate) fn analyze_matrix(
    m: &DMatrix<f64>,
    tol_ratio: f64,
) -> Result<KernelAnalysis, LinalgError> {
    let (sigma, v_sorted) = sorted_svd(m)?;
    let smax = sigma.first().copied().unwrap_or(0.0);
    let threshold = tol_ratio * smax;
    let rank = sigma.iter().filter(|&&s| s > threshold).count();
    let n = m.ncols();

    // nalgebra's thin SVD only returns min(nrows, ncols) right vectors; rows
    // beyond the row count are genuinely unresolved and cannot happen here
    // because every assembly oversamples (nrows >= ncols).
    let resolved = v_sorted.nrows();
    let kernel_dim = n.min(resolved).saturating_sub(rank) + n.saturating_sub(resolved);
    let mut kernel = DMatrix::zeros(n, kernel_dim);
    let mut col = 0;
    for row in rank..resolved {
        kernel.set_column(col, &v_sorted.row(row).transpose());
        col += 1;
    }
    if n > resolved {
        // Complete the kernel with an orthonormal basis of the cokernel of
        // the resolved right vectors.
        let mut basis: Vec<DVector<f64>> = (0..resolved)
            .map(|r| v_sorted.row(r).transpose())
            .collect();
        for k in 0..n {
            if col == kernel_dim {
                break;
            }
            let mut v = DVector::zeros(n);
            v[k] = 1.0;
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
            let nv = v.norm();
            if nv > 1e-8 {
                v /= nv;
                kernel.set_column(col, &v);
                basis.push(v);
                col += 1;
            }
        }
    }

    let gap = if rank < n && rank > 0 && rank <= sigma.len() {
        let kept = sigma[rank - 1];
        let dropped = sigma.get(rank).copied().unwrap_or(0.0);
        Some(kept / dropped.max(smax * 1e-300))
    } else {
        None
    };
    let ill_separated = matches!(gap, Some(g) if g < DECISIVE_GAP);

    Ok(KernelAnalysis {
        singular_values: sigma,
        rank,
        tol_ratio,
        gap,
        ill_separated,
        kernel,
    })
}

/// Minimum-norm least-squares solution via the SVD pseudoinverse with the
/// standard threshold `σ₁ · max(nrows, ncols) · ε`.
pub fn pseudo_solve(m: &DMatrix<f64>, rhs: &DVector<f64>) -> Result<DVector<f64>, LinalgError> {
    check_finite(m)?;
    if rhs.len() != m.nrows() {
        return Err(LinalgError::DataLength {
            expected: m.nrows(),
            got: rhs.len(),
        });
    }
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = smax * m.nrows().max(m.ncols()) as f64 * f64::EPSILON;
    svd.solve(rhs, eps)
        .map_err(|e| LinalgError::Factorization(e.to_string()))
}

/// Ridge-regularized least squares: minimizes `‖m·x − rhs‖² + reg·‖x‖²`.
pub fn ridge_solve(
    m: &DMatrix<f64>,
    rhs: &DVector<f64>,
    reg: f64,
) -> Result<DVector<f64>, LinalgError> {
    check_finite(m)?;
    if rhs.len() != m.nrows() {
        return Err(LinalgError::DataLength {
            expected: m.nrows(),
            got: rhs.len(),
        });
    }
    if reg < 0.0 {
        return Err(LinalgError::NegativeRegularization(reg));
    }
    if reg == 0.0 {
        return pseudo_solve(m, rhs);
    }
    let n = m.ncols();
    let normal = m.transpose() * m + DMatrix::identity(n, n) * reg;
    let atb = m.transpose() * rhs;
    normal
        .cholesky()
        .map(|ch| ch.solve(&atb))
        .ok_or_else(|| LinalgError::Factorization("ridge normal equations not SPD".to_string()))
}

/// Largest principal angle (radians) between the column span of `basis`
/// (orthonormal columns) and the coordinate subspace selected by `in_span`.
///
/// Computed from the mass outside the target coordinates, which keeps small
/// angles well conditioned: the largest singular value of the off-target
/// row block of `basis` equals the sine of the largest principal angle.
pub fn max_angle_to_coordinate_span(basis: &DMatrix<f64>, in_span: &[bool]) -> f64 {
    assert_eq!(basis.nrows(), in_span.len());
    if basis.ncols() == 0 {
        return 0.0;
    }
    let off_rows: Vec<usize> = (0..basis.nrows()).filter(|&i| !in_span[i]).collect();
    let mut off = DMatrix::zeros(off_rows.len(), basis.ncols());
    for (r, &i) in off_rows.iter().enumerate() {
        off.set_row(r, &basis.row(i));
    }
    let smax = off
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max);
    smax.clamp(0.0, 1.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(rows, cols, |_, _| StandardNormal.sample(&mut rng))
    }

    #[test]
    fn identity_spectrum_is_all_ones() {
        let m = DMatrix::<f64>::identity(5, 5);
        let s = rank_revealing_spectrum(&m).unwrap();
        assert_eq!(s.len(), 5);
        for v in s {
            assert_relative_eq!(v, 1.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn rank_one_outer_product_has_one_singular_value() {
        let u = DVector::from_vec(vec![1.0, 2.0, -2.0]);
        let v = DVector::from_vec(vec![3.0, 0.0, 4.0, 0.0]);
        let m = &u * v.transpose();
        let s = rank_revealing_spectrum(&m).unwrap();
        assert_relative_eq!(s[0], u.norm() * v.norm(), max_relative = 1e-12);
        for &x in &s[1..] {
            assert!(x < 1e-12 * s[0]);
        }
    }

    #[test]
    fn spectrum_matches_gram_eigenvalues() {
        // Independent route: eigenvalues of AᵀA.
        let m = gaussian_matrix(50, 36, 7);
        let s = rank_revealing_spectrum(&m).unwrap();
        assert!(s[35] > 0.0);
        let gram = m.transpose() * &m;
        let mut eig: Vec<f64> = nalgebra::SymmetricEigen::new(gram)
            .eigenvalues
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .collect();
        eig.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in s.iter().zip(eig) {
            assert_relative_eq!(*a, b, max_relative = 1e-9);
        }
    }

    #[test]
    fn reconstruction_residual_is_backward_stable() {
        let m = gaussian_matrix(40, 25, 3);
        let svd = m.clone().svd(true, true);
        let rebuilt = svd.recompose().unwrap();
        let smax = rank_revealing_spectrum(&m).unwrap()[0];
        assert!((&m - rebuilt).norm() <= 1e-10 * smax);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let mut m = DMatrix::<f64>::zeros(2, 2);
        m[(1, 0)] = f64::NAN;
        assert!(matches!(
            rank_revealing_spectrum(&m),
            Err(LinalgError::NonFinite { row: 1, col: 0 })
        ));
    }

    #[test]
    fn kernel_analysis_finds_a_planted_kernel() {
        // 60 rows that all annihilate the last two coordinates.
        let mut m = gaussian_matrix(60, 8, 11);
        for i in 0..60 {
            m[(i, 6)] = 0.0;
            m[(i, 7)] = 0.0;
        }
        let op = TransformOperator::new(
            m,
            Provenance {
                space: "test".to_string(),
                basis: "coords".to_string(),
                seed: Some(11),
                quad_points: 0,
            },
        );
        let ka = kernel_analysis(&op, 1e-8).unwrap();
        assert_eq!(ka.rank, 6);
        assert_eq!(ka.kernel_dim(), 2);
        assert!(!ka.ill_separated);
        assert!(ka.decisive());
        // Kernel columns live on coordinates 6 and 7.
        let mask: Vec<bool> = (0..8).map(|i| i >= 6).collect();
        assert!(max_angle_to_coordinate_span(&ka.kernel, &mask) < 1e-10);
    }

    #[test]
    fn full_rank_analysis_has_no_cut() {
        let m = gaussian_matrix(30, 10, 5);
        let op = TransformOperator::new(
            m,
            Provenance {
                space: "test".to_string(),
                basis: "coords".to_string(),
                seed: Some(5),
                quad_points: 0,
            },
        );
        let ka = kernel_analysis(&op, 1e-8).unwrap();
        assert_eq!(ka.rank, 10);
        assert_eq!(ka.kernel_dim(), 0);
        assert!(ka.gap.is_none());
        assert!(ka.decisive());
    }

    #[test]
    fn pseudoinverse_round_trips_full_rank_systems() {
        let m = gaussian_matrix(40, 12, 17);
        let x0 = gaussian_matrix(12, 1, 18).column(0).into_owned();
        let b = &m * &x0;
        let x = pseudo_solve(&m, &b).unwrap();
        assert!((x - x0).norm() < 1e-8);
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let m = gaussian_matrix(20, 6, 2);
        let x = pseudo_solve(&m, &DVector::zeros(20)).unwrap();
        assert!(x.norm() < 1e-14);
    }

    #[test]
    fn ridge_shrinks_towards_zero() {
        let m = gaussian_matrix(30, 6, 9);
        let b = gaussian_matrix(30, 1, 10).column(0).into_owned();
        let x0 = pseudo_solve(&m, &b).unwrap();
        let x1 = ridge_solve(&m, &b, 1e3).unwrap();
        assert!(x1.norm() < x0.norm());
        assert!(ridge_solve(&m, &b, -1.0).is_err());
    }

    #[test]
    fn data_length_mismatch_is_an_error() {
        let m = gaussian_matrix(10, 3, 1);
        assert!(matches!(
            pseudo_solve(&m, &DVector::zeros(9)),
            Err(LinalgError::DataLength { expected: 10, got: 9 })
        ));
    }
}
