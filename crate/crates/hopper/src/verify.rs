//! File-level entry points of the exact analysis.

use std::path::Path;

use hopper_core::analysis::pca::{pca_scale_profile, ScaleProfile};
use hopper_core::analysis::prismatoid::detect_prismatoid;
use hopper_core::analysis::report::{verify_polytope, VerificationReport, VerifyOptions};
use hopper_core::polytope::Polytope;
use hopper_core::repository::{parse_snapshot, RepositoryEntry};

use crate::error::Result;

pub fn read_polytope(path: &Path) -> Result<Polytope> {
    Ok(std::fs::read_to_string(path)?.parse()?)
}

/// Exact verification report of the polytope stored at `path`.
pub fn verify_file(path: &Path, opts: &VerifyOptions) -> Result<VerificationReport> {
    Ok(verify_polytope(&read_polytope(path)?, opts)?)
}

/// Deck-orthogonal principal-component profile of the prismatoid at `path`.
pub fn analyze_pca_file(path: &Path) -> Result<ScaleProfile> {
    let q = detect_prismatoid(&read_polytope(path)?)?;
    Ok(pca_scale_profile(&q)?)
}

/// The `k` entries of highest fitness in a repository snapshot.
pub fn best_of_snapshot(path: &Path, k: usize) -> Result<Vec<RepositoryEntry>> {
    let mut entries = parse_snapshot(&std::fs::read_to_string(path)?)?;
    entries.sort_by(|a, b| b.fitness.value.total_cmp(&a.fitness.value).then(a.id.cmp(&b.id)));
    entries.truncate(k);
    Ok(entries)
}
