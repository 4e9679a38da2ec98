//! `funk sphere …`: operator assembly over random circles, spectrum/kernel
//! analysis, eigenvalue cross-checks, and even-part inversion round trips.

use crate::report::{Report, Verdict};
use clap::Subcommand;
use funk_core::linalg::max_angle_to_coordinate_span;
use funk_core::sphere::{
    assemble_operator, funk_hecke_eigenvalue, invert_even, kernel_analysis, sample_circles,
    transform_as_function, HarmonicBasis, SphereFunction,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::error::Error;

#[derive(Debug, Subcommand)]
pub enum SphereCmd {
    /// Numerical rank and kernel of the assembled operator
    Kernel {
        #[arg(long)]
        lmax: usize,
        /// Number of random circles (rows)
        #[arg(long)]
        circles: usize,
        /// Quadrature points per circle
        #[arg(long, default_value_t = 256)]
        quad: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol_ratio: f64,
    },
    /// Round-trip random even functions through transform and inversion
    Invert {
        #[arg(long)]
        lmax: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Compare the matrix route against the eigenvalue route per degree
    Eigen {
        #[arg(long)]
        lmax: usize,
        #[arg(long, default_value_t = 400)]
        circles: usize,
        #[arg(long, default_value_t = 512)]
        quad: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct KernelResults {
    lmax: usize,
    n_circles: usize,
    #[serde(rename = "K")]
    quad: usize,
    singular_values: Vec<f64>,
    rank: usize,
    kernel_dim: usize,
    odd_count: usize,
    even_count: usize,
    max_principal_angle_to_odd_span: f64,
    ill_separated: bool,
}

fn kernel(
    lmax: usize,
    circles: usize,
    quad: usize,
    seed: u64,
    tol_ratio: f64,
) -> Result<(Report, Option<String>), Box<dyn Error>> {
    let basis = HarmonicBasis::new(lmax)?;
    if quad < 2 * lmax + 8 {
        return Err(format!("--quad must be at least 2*lmax+8 = {}", 2 * lmax + 8).into());
    }
    if circles < basis.len() {
        return Err(format!(
            "need at least as many circles as basis functions ({})",
            basis.len()
        )
        .into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let op = assemble_operator(&basis, &sample_circles(circles, &mut rng), quad, Some(seed));
    let ka = kernel_analysis(&op, tol_ratio)?;
    let odd_mask: Vec<bool> = (0..basis.len())
        .map(|i| !HarmonicBasis::degree_of(i).is_multiple_of(2))
        .collect();
    let angle = max_angle_to_coordinate_span(&ka.kernel, &odd_mask);

    let verdicts = vec![
        Verdict::new(
            "rank-is-even-count",
            ka.rank == basis.even_count(),
            format!("rank {} vs even-degree count {}", ka.rank, basis.even_count()),
        ),
        Verdict::new(
            "kernel-is-odd-count",
            ka.kernel_dim() == basis.odd_count(),
            format!(
                "kernel dim {} vs odd-degree count {}",
                ka.kernel_dim(),
                basis.odd_count()
            ),
        ),
        Verdict::new(
            "kernel-aligns-with-odd-span",
            angle <= 1e-6,
            format!("max principal angle {angle:.3e}"),
        ),
        Verdict::new(
            "spectrum-well-separated",
            !ka.ill_separated,
            "a >= 1e3 gap separates the retained and discarded singular values",
        ),
    ];
    let mut csv = Vec::new();
    op.write_csv(&mut csv)?;
    let results = KernelResults {
        lmax,
        n_circles: circles,
        quad,
        rank: ka.rank,
        kernel_dim: ka.kernel_dim(),
        odd_count: basis.odd_count(),
        even_count: basis.even_count(),
        max_principal_angle_to_odd_span: angle,
        ill_separated: ka.ill_separated,
        singular_values: ka.singular_values,
    };
    let report = Report::new(
        "sphere kernel",
        Some(seed),
        serde_json::json!({
            "lmax": lmax, "circles": circles, "quad": quad, "tol_ratio": tol_ratio
        }),
        results,
        verdicts,
    )?;
    Ok((report, Some(String::from_utf8(csv)?)))
}

fn invert(lmax: usize, seed: u64, trials: usize) -> Result<Report, Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel = 0.0f64;
    for _ in 0..trials {
        let f = SphereFunction::random_even(lmax, &mut rng)?;
        let back = invert_even(&transform_as_function(&f))?;
        let rel = (back.coefficients() - f.coefficients()).norm() / f.coefficients().norm();
        max_rel = max_rel.max(rel);
    }
    let verdicts = vec![Verdict::new(
        "even-round-trip",
        max_rel <= 1e-8,
        format!("max relative error {max_rel:.3e} over {trials} trials"),
    )];
    Ok(Report::new(
        "sphere invert",
        Some(seed),
        serde_json::json!({ "lmax": lmax, "trials": trials }),
        serde_json::json!({ "lmax": lmax, "trials": trials, "max_rel_error": max_rel }),
        verdicts,
    )?)
}

#[derive(Serialize)]
struct EigenResults {
    lmax: usize,
    n_circles: usize,
    #[serde(rename = "K")]
    quad: usize,
    /// `2π·P_l(0)` for each degree.
    eigenvalues: Vec<f64>,
    max_even_rel_error: f64,
    max_odd_abs_image: f64,
}

fn eigen(lmax: usize, circles: usize, quad: usize, seed: u64) -> Result<Report, Box<dyn Error>> {
    let basis = HarmonicBasis::new(lmax)?;
    if quad < 2 * lmax + 8 {
        return Err(format!("--quad must be at least 2*lmax+8 = {}", 2 * lmax + 8).into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let circle_set = sample_circles(circles, &mut rng);
    let op = assemble_operator(&basis, &circle_set, quad, Some(seed));
    // Basis values at the poles give the predicted image of each harmonic.
    let mut pole_values = nalgebra::DMatrix::zeros(circles, basis.len());
    for (i, c) in circle_set.iter().enumerate() {
        pole_values.set_row(i, &basis.evaluate(c.pole()).transpose());
    }
    let mut max_even_rel = 0.0f64;
    let mut max_odd_abs = 0.0f64;
    for j in 0..basis.len() {
        let l = HarmonicBasis::degree_of(j);
        let image = op.matrix().column(j);
        if !l.is_multiple_of(2) {
            max_odd_abs = max_odd_abs.max(image.amax());
        } else {
            let predicted = pole_values.column(j) * funk_hecke_eigenvalue(l);
            let rel = (image - &predicted).norm() / predicted.norm();
            max_even_rel = max_even_rel.max(rel);
        }
    }
    let verdicts = vec![
        Verdict::new(
            "even-degrees-match-eigenvalues",
            max_even_rel <= 1e-8,
            format!("max relative error {max_even_rel:.3e}"),
        ),
        Verdict::new(
            "odd-degrees-are-annihilated",
            max_odd_abs <= 1e-10,
            format!("max |image| {max_odd_abs:.3e}"),
        ),
    ];
    let results = EigenResults {
        lmax,
        n_circles: circles,
        quad,
        eigenvalues: (0..=lmax).map(funk_hecke_eigenvalue).collect(),
        max_even_rel_error: max_even_rel,
        max_odd_abs_image: max_odd_abs,
    };
    Ok(Report::new(
        "sphere eigen",
        Some(seed),
        serde_json::json!({ "lmax": lmax, "circles": circles, "quad": quad }),
        results,
        verdicts,
    )?)
}

pub fn run(cmd: &SphereCmd) -> Result<(Report, Option<String>), Box<dyn Error>> {
    match cmd {
        SphereCmd::Kernel {
            lmax,
            circles,
            quad,
            seed,
            tol_ratio,
        } => kernel(*lmax, *circles, *quad, *seed, *tol_ratio),
        SphereCmd::Invert { lmax, seed, trials } => {
            Ok((invert(*lmax, *seed, *trials)?, None))
        }
        SphereCmd::Eigen {
            lmax,
            circles,
            quad,
            seed,
        } => Ok((eigen(*lmax, *circles, *quad, *seed)?, None)),
    }
}
