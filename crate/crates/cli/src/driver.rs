//! Parallel grid verification.
//!
//! Spectra are computed on a rayon pool; ranking and verdicts are formed
//! afterwards from the collected rows, so the result does not depend on
//! the number of workers.

use std::collections::BTreeMap;

use anyhow::{Context, Result};
use kspectra_core::ktree::enumerate_labeled;
use kspectra_core::verify::{report_from_ranking, sort_ranking, step_campaign, RankRow};
use kspectra_core::{canonical_label, Budget, Family, NamedFamily};
use rayon::prelude::*;

use crate::report::PointOutcome;

/// Labels of the named families defined at `(n, k)`.
pub fn family_labels(n: usize, k: usize) -> Result<BTreeMap<kspectra_core::CanonicalLabel, Family>> {
    let mut out = BTreeMap::new();
    // Later families never shadow earlier ones: at small orders the k-star
    // and G_1 coincide with others and keep their names.
    for family in Family::ALL {
        if let Ok(f) = NamedFamily::new(family, n, k) {
            out.entry(canonical_label(&f.build())?).or_insert(family);
        }
    }
    Ok(out)
}

pub fn verify_point(n: usize, k: usize, gap_tol: f64, steps: bool) -> Result<PointOutcome> {
    let classes: Vec<_> = enumerate_labeled(n, k, Budget::default())?.into_iter().collect();
    let mut rows = classes
        .into_par_iter()
        .map(|(label, graph)| RankRow::compute(label, graph, k))
        .collect::<kspectra_core::Result<Vec<_>>>()?;
    sort_ranking(&mut rows);
    let report = report_from_ranking(n, k, rows, gap_tol)?;
    let steps = if steps {
        Some(step_campaign(n, k, gap_tol)?)
    } else {
        None
    };
    Ok(PointOutcome {
        report,
        steps,
        families: family_labels(n, k)?,
    })
}

/// Verifies every grid point on a pool of `jobs` workers (0 picks the
/// machine default). Outcomes come back in grid order.
pub fn verify_grid(points: &[(usize, usize)], gap_tol: f64, steps: bool, jobs: usize) -> Result<Vec<PointOutcome>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("cannot start worker pool")?;
    pool.install(|| {
        points
            .par_iter()
            .map(|&(n, k)| verify_point(n, k, gap_tol, steps).with_context(|| format!("verifying n = {n}, k = {k}")))
            .collect()
    })
}
