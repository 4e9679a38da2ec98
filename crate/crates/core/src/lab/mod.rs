//! Discretized transform experiments on CPⁿ: operator assembly over
//! sampled geodesics, numerical rank (injectivity evidence), least-squares
//! inversion, and the ball-avoidance support experiment.

mod basis;

use crate::cpn::{fs_distance, sample_geodesics, Ball, CPGeodesic, CpnError, ProjPoint};
use crate::linalg::{self, LinalgError, Provenance, TransformOperator};
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use basis::{multi_indices, sphere_moment, CPBasis, BASIS_SIZE_CAP};
pub use crate::linalg::{kernel_analysis, rank_revealing_spectrum};

/// Geodesic parameter samples used to decide whether a geodesic avoids a
/// ball.
const AVOIDANCE_SAMPLES: usize = 512;

/// Points kept outside the enlarged ball when evaluating kernel functions.
const OUTSIDE_GRID_POINTS: usize = 2000;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("basis size {size} exceeds the desk-scale cap {cap}")]
    BasisTooLarge { size: usize, cap: usize },
    #[error("generator Gram matrix is numerically singular (condition {condition:.3e})")]
    GramIllConditioned { condition: f64 },
    #[error("CP^1 is a round sphere and is excluded from the injectivity claim; use n >= 2")]
    SphereModelExcluded,
    #[error("rank experiments need n_geo >= 2·basis_dim ({needed}), got {got}")]
    NotEnoughGeodesics { needed: usize, got: usize },
    #[error(
        "only {found} geodesics avoid the ball after 10x oversampling, \
         need at least {needed}: the ball is too large for desk scale"
    )]
    TooFewAvoidingGeodesics { found: usize, needed: usize },
    #[error("margin {margin} leaves no room outside the enlarged ball")]
    BadMargin { margin: f64 },
    #[error("ball center lives in CP^{got}, experiment is on CP^{expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quadrature count {got} below the floor {needed} for degree {degree}")]
    QuadratureTooCoarse { needed: usize, got: usize, degree: u32 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Cpn(#[from] CpnError),
}

/// Default per-geodesic quadrature count for a degree-D basis; satisfies
/// the `8D + 8` floor with headroom.
pub fn default_quad_points(degree: u32) -> usize {
    (8 * degree as usize + 8).max(64)
}

/// Assembles the dense operator: entry `(i, j)` is the integral of basis
/// function `j` over geodesic `i` with `k` quadrature points.
pub fn assemble_cp_operator(
    basis: &CPBasis,
    geodesics: &[CPGeodesic],
    k: usize,
    seed: Option<u64>,
) -> Result<TransformOperator, LabError> {
    let floor = 8 * basis.degree() as usize + 8;
    if k < floor {
        return Err(LabError::QuadratureTooCoarse {
            needed: floor,
            got: k,
            degree: basis.degree(),
        });
    }
    let step = 2.0 * std::f64::consts::PI / k as f64;
    let mut matrix = nalgebra::DMatrix::zeros(geodesics.len(), basis.size());
    for (i, geo) in geodesics.iter().enumerate() {
        let mut row = DVector::<f64>::zeros(basis.size());
        for q in 0..k {
            row.axpy(step, &basis.evaluate_rep(&geo.lift(step * q as f64)), 1.0);
        }
        matrix.set_row(i, &row.transpose());
    }
    Ok(TransformOperator::new(
        matrix,
        Provenance {
            space: format!("CP^{}", basis.n()),
            basis: format!("bidegree D={}", basis.degree()),
            seed,
            quad_points: k,
        },
    ))
}

/// Result of a full-rank experiment on CPⁿ.
#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub n: usize,
    pub degree: u32,
    pub basis_dim: usize,
    pub n_geo: usize,
    pub seed: u64,
    pub quad_points: usize,
    pub tol_ratio: f64,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub sigma_ratio: f64,
    pub full_rank: bool,
    /// Whether the rank verdict clears the spectral-gap requirement.
    pub decisive: bool,
    /// Present on rank deficiency: the right singular vector of the
    /// smallest singular value, for inspection.
    pub near_kernel: Option<Vec<f64>>,
}

/// Assembles the operator for `n_geo` random geodesics on CPⁿ and reports
/// its numerical rank. Full column rank across seeds is the discrete
/// injectivity evidence; CP¹ is excluded (it is a round sphere, where the
/// transform has a kernel).
pub fn injectivity_experiment(
    n: usize,
    degree: u32,
    n_geo: usize,
    seed: u64,
    tol_ratio: f64,
    quad_points: Option<usize>,
) -> Result<InjectivityReport, LabError> {
    if n < 2 {
        return Err(LabError::SphereModelExcluded);
    }
    let basis = CPBasis::build(n, degree)?;
    if n_geo < 2 * basis.size() {
        return Err(LabError::NotEnoughGeodesics {
            needed: 2 * basis.size(),
            got: n_geo,
        });
    }
    let k = quad_points.unwrap_or_else(|| default_quad_points(degree));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let geodesics = sample_geodesics(n, n_geo, &mut rng);
    let op = assemble_cp_operator(&basis, &geodesics, k, Some(seed))?;
    let ka = linalg::kernel_analysis(&op, tol_ratio)?;
    let full_rank = ka.rank == basis.size();
    let near_kernel = if full_rank {
        None
    } else {
        Some(ka.kernel.column(0).iter().copied().collect())
    };
    Ok(InjectivityReport {
        n,
        degree,
        basis_dim: basis.size(),
        n_geo,
        seed,
        quad_points: k,
        tol_ratio,
        sigma_ratio: ka.sigma_ratio(),
        rank: ka.rank,
        full_rank,
        decisive: ka.decisive(),
        singular_values: ka.singular_values,
        near_kernel,
    })
}

/// Minimizes `‖op·x − data‖² + reg·‖x‖²`; with `reg = 0` this is the
/// rank-revealing pseudoinverse at the standard threshold.
pub fn least_squares_invert(
    op: &TransformOperator,
    data: &[f64],
    reg: f64,
) -> Result<DVector<f64>, LabError> {
    let rhs = DVector::from_column_slice(data);
    Ok(linalg::ridge_solve(op.matrix(), &rhs, reg)?)
}

/// Configuration of the ball-avoidance support experiment.
#[derive(Clone, Debug)]
pub struct SupportConfig {
    pub n: usize,
    pub degree: u32,
    pub ball: Ball,
    /// Target number of avoiding geodesics to keep.
    pub n_geo: usize,
    pub seed: u64,
    /// Kernel functions are evaluated at distance ≥ radius + margin.
    pub margin: f64,
    pub tol_ratio: f64,
}

/// Outcome of the support experiment: the kernel of the operator built
/// from ball-avoiding geodesics, and where its functions carry their mass.
#[derive(Clone, Debug, Serialize)]
pub struct SupportReport {
    pub n: usize,
    pub degree: u32,
    pub basis_dim: usize,
    pub seed: u64,
    pub quad_points: usize,
    pub tol_ratio: f64,
    pub ball_center: Vec<f64>,
    pub ball_radius: f64,
    pub margin: f64,
    pub n_geo_requested: usize,
    pub n_candidates_drawn: usize,
    pub n_avoiding_geodesics: usize,
    pub singular_values: Vec<f64>,
    pub kernel_dim: usize,
    /// Per kernel function: max |f| over the sample grid outside the
    /// enlarged ball.
    pub outside_sup: Vec<f64>,
    /// Per kernel function: max |f| over the whole sample grid.
    pub global_sup: Vec<f64>,
    /// True exactly when the kernel is empty.
    pub vacuous: bool,
}

/// Keeps sampled geodesics whose minimum distance to the ball center
/// exceeds the radius, assembles the operator from them, and evaluates
/// each kernel function inside and outside the enlarged ball.
pub fn support_experiment(cfg: &SupportConfig) -> Result<SupportReport, LabError> {
    if cfg.n < 2 {
        return Err(LabError::SphereModelExcluded);
    }
    if cfg.ball.center().cp_dim() != cfg.n {
        return Err(LabError::DimensionMismatch {
            expected: cfg.n,
            got: cfg.ball.center().cp_dim(),
        });
    }
    let enlarged = cfg.ball.radius() + cfg.margin;
    if cfg.margin < 0.0 || enlarged >= std::f64::consts::PI {
        return Err(LabError::BadMargin { margin: cfg.margin });
    }
    let basis = CPBasis::build(cfg.n, cfg.degree)?;
    let k = default_quad_points(cfg.degree);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut kept = Vec::with_capacity(cfg.n_geo);
    let mut drawn = 0usize;
    while kept.len() < cfg.n_geo && drawn < 10 * cfg.n_geo {
        let geo = sample_geodesics(cfg.n, 1, &mut rng).pop().expect("one geodesic");
        drawn += 1;
        if geo.sampled_min_distance(cfg.ball.center(), AVOIDANCE_SAMPLES) > cfg.ball.radius() {
            kept.push(geo);
        }
    }
    if 2 * kept.len() < basis.size() {
        return Err(LabError::TooFewAvoidingGeodesics {
            found: kept.len(),
            needed: basis.size().div_ceil(2),
        });
    }

    let op = assemble_cp_operator(&basis, &kept, k, Some(cfg.seed))?;
    let ka = linalg::kernel_analysis(&op, cfg.tol_ratio)?;
    let kernel_dim = ka.kernel_dim();

    let mut outside_sup = vec![0.0f64; kernel_dim];
    let mut global_sup = vec![0.0f64; kernel_dim];
    if kernel_dim > 0 {
        let mut outside_found = 0usize;
        let mut attempts = 0usize;
        while outside_found < OUTSIDE_GRID_POINTS {
            attempts += 1;
            if attempts > 100 * OUTSIDE_GRID_POINTS {
                return Err(LabError::BadMargin { margin: cfg.margin });
            }
            let p = ProjPoint::random(cfg.n, &mut rng);
            let values = basis.evaluate(&p);
            let outside = fs_distance(&p, cfg.ball.center()) >= enlarged;
            if outside {
                outside_found += 1;
            }
            for (j, col) in ka.kernel.column_iter().enumerate() {
                let v = values.dot(&col.into_owned()).abs();
                global_sup[j] = global_sup[j].max(v);
                if outside {
                    outside_sup[j] = outside_sup[j].max(v);
                }
            }
        }
    }

    Ok(SupportReport {
        n: cfg.n,
        degree: cfg.degree,
        basis_dim: basis.size(),
        seed: cfg.seed,
        quad_points: k,
        tol_ratio: cfg.tol_ratio,
        ball_center: cfg.ball.center().interleaved(),
        ball_radius: cfg.ball.radius(),
        margin: cfg.margin,
        n_geo_requested: cfg.n_geo,
        n_candidates_drawn: drawn,
        n_avoiding_geodesics: kept.len(),
        singular_values: ka.singular_values.clone(),
        kernel_dim,
        outside_sup,
        global_sup,
        vacuous: kernel_dim == 0,
    })
}
