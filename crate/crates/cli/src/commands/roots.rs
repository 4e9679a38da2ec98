//! `funk roots …`: root-system pairing checks, the bundled descriptor
//! table, and midpoint-locus dimensions.

use crate::report::{Report, Verdict};
use clap::Subcommand;
use funk_core::rootsys::{self, build_root_system, Family, SymmetricSpaceDescriptor};
use serde::Serialize;
use std::error::Error;

#[derive(Debug, Subcommand)]
pub enum RootsCmd {
    /// Pair every positive root against X_δ and report the dual-vector data
    Check {
        /// Root-system family: A, B, C, D, BC, E6, E7, E8, F4, G2
        #[arg(long)]
        family: String,
        #[arg(long)]
        rank: usize,
        /// Tolerance for the pairing classification
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the bundled symmetric-space table with derived dimensions
    Table,
    /// Midpoint-locus dimension of a bundled space at the canonical antipode
    Midpoint {
        /// Space name, e.g. S4, CP3, HP2, OP2, Q5
        #[arg(long)]
        space: String,
    },
}

#[derive(Serialize)]
struct CheckParams {
    family: String,
    rank: usize,
    tol: f64,
}

#[derive(Serialize)]
struct CheckResults {
    root_system: serde_json::Value,
    /// `⟨β, X_δ⟩` per positive root, in positive-root order.
    pairings: Vec<f64>,
    /// The same values sorted ascending.
    pairing_multiset: Vec<f64>,
    /// `‖X_β‖` per positive root.
    dual_lengths: Vec<f64>,
    pi_count: usize,
    odd_root_set_at_half_x_delta: Vec<usize>,
    odd_cardinality: usize,
}

fn check(family: &str, rank: usize, tol: f64) -> Result<Report, Box<dyn Error>> {
    let fam: Family = family.parse()?;
    let rs = build_root_system(fam, rank)?;
    let pairing = rs.check_longest_root_pairing(tol)?;
    let dual_lengths: Vec<f64> = rs
        .positive_root_indices()
        .iter()
        .map(|&i| rs.dual_vector(i).expect("valid index").length)
        .collect();
    let x_delta = rs.dual_vector(rs.highest_root_index())?;
    let half: Vec<f64> = x_delta.coordinates.iter().map(|v| v / 2.0).collect();
    let odd = rs.odd_root_set(&half, tol)?;

    let mut multiset = pairing.pairings.clone();
    multiset.sort_by(f64::total_cmp);

    let mut verdicts = vec![Verdict::new(
        "pairings-in-allowed-set",
        pairing.all_in_allowed_set(),
        format!(
            "every <beta, X_delta> lies in {{0, +/-pi}} with 2*pi at delta; offenders: {:?}",
            pairing.offending
        ),
    )];
    if let Some(two) = pairing.at_least_two_pi {
        verdicts.push(Verdict::new(
            "at-least-two-pi-pairings",
            two,
            format!("{} positive roots pair to +/-pi", pairing.pi_count),
        ));
        verdicts.push(Verdict::new(
            "odd-set-at-least-two",
            odd.len() >= 2,
            format!("|R(X_delta/2)| = {}", odd.len()),
        ));
    }

    let results = CheckResults {
        root_system: serde_json::to_value(&rs)?,
        pairings: pairing.pairings.clone(),
        pairing_multiset: multiset,
        dual_lengths,
        pi_count: pairing.pi_count,
        odd_cardinality: odd.len(),
        odd_root_set_at_half_x_delta: odd,
    };
    Ok(Report::new(
        "roots check",
        None,
        CheckParams {
            family: family.to_string(),
            rank,
            tol,
        },
        results,
        verdicts,
    )?)
}

#[derive(Serialize)]
struct TableRow {
    name: String,
    family: String,
    rank: usize,
    dimension: usize,
    is_sphere: bool,
    multiplicities: Vec<u32>,
    helgason_sphere_dimension: usize,
    midpoint_locus_dimension: usize,
}

fn descriptor_row(d: &SymmetricSpaceDescriptor) -> Result<TableRow, Box<dyn Error>> {
    let rs = d.root_system();
    Ok(TableRow {
        name: d.name().to_string(),
        family: rs.family().to_string(),
        rank: rs.rank(),
        dimension: d.dimension(),
        is_sphere: d.is_sphere(),
        multiplicities: rs
            .positive_root_indices()
            .iter()
            .map(|&i| d.multiplicity(i).expect("positive root"))
            .collect(),
        helgason_sphere_dimension: d.helgason_sphere_dimension(),
        midpoint_locus_dimension: d.midpoint_locus_dimension_at_half_x_delta()?,
    })
}

fn table() -> Result<Report, Box<dyn Error>> {
    let rows: Vec<TableRow> = rootsys::descriptor_table()
        .iter()
        .map(descriptor_row)
        .collect::<Result<_, _>>()?;
    let bookkeeping = rows.iter().all(|r| {
        r.dimension == r.rank + r.multiplicities.iter().map(|&m| m as usize).sum::<usize>()
    });
    let midpoints_ok = rows
        .iter()
        .all(|r| r.is_sphere || r.midpoint_locus_dimension >= 2);
    let spheres_ok = rows
        .iter()
        .all(|r| !r.is_sphere || r.midpoint_locus_dimension == 0);
    let verdicts = vec![
        Verdict::new(
            "dimension-bookkeeping",
            bookkeeping,
            "dimension = rank + sum of multiplicities on every row",
        ),
        Verdict::new(
            "non-sphere-midpoint-at-least-two",
            midpoints_ok,
            "every non-sphere midpoint locus has dimension >= 2",
        ),
        Verdict::new(
            "sphere-midpoint-is-a-point",
            spheres_ok,
            "every sphere midpoint locus has dimension 0",
        ),
    ];
    Ok(Report::new(
        "roots table",
        None,
        serde_json::json!({}),
        serde_json::json!({ "spaces": serde_json::to_value(rows)? }),
        verdicts,
    )?)
}

fn midpoint(space: &str) -> Result<Report, Box<dyn Error>> {
    let d = rootsys::descriptor_by_name(space)
        .ok_or_else(|| format!("unknown space `{space}`; see `funk roots table`"))?;
    let row = descriptor_row(&d)?;
    let verdict = if row.is_sphere {
        Verdict::new(
            "sphere-midpoint-is-a-point",
            row.midpoint_locus_dimension == 0,
            "the midpoint locus of a sphere point is its antipode",
        )
    } else {
        Verdict::new(
            "midpoint-at-least-two",
            row.midpoint_locus_dimension >= 2,
            format!("dimension {}", row.midpoint_locus_dimension),
        )
    };
    Ok(Report::new(
        "roots midpoint",
        None,
        serde_json::json!({ "space": space }),
        row,
        vec![verdict],
    )?)
}

pub fn run(cmd: &RootsCmd) -> Result<(Report, Option<String>), Box<dyn Error>> {
    let report = match cmd {
        RootsCmd::Check { family, rank, tol } => check(family, *rank, *tol)?,
        RootsCmd::Table => table()?,
        RootsCmd::Midpoint { space } => midpoint(space)?,
    };
    Ok((report, None))
}
