//! Brute-force subgraph census used as the independent test oracle.
//!
//! Iterates every node subset of each requested size, keeps the connected
//! induced subgraphs containing the ego, and classifies each one through
//! the public canonicalization with no memoization or traversal shortcuts.

use std::collections::BTreeMap;

use super::graph::ColoredGraph;
use super::{canonical_id, validate_sizes, MotifError, MotifId, ORACLE_NODE_LIMIT};

/// All k-subsets of `0..n`, in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // Advance to the next combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Exact ground-truth census: counts of connected induced subgraphs of each
/// requested size whose node set contains `ego_index`, by canonical id.
/// Guarded to small graphs; the subset scan is exponential.
pub fn oracle_census(
    g: &ColoredGraph,
    ego_index: usize,
    sizes: &[u8],
) -> Result<BTreeMap<MotifId, u64>, MotifError> {
    let n = g.node_count();
    if n > ORACLE_NODE_LIMIT {
        return Err(MotifError::TooLargeForOracle(n));
    }
    assert!(ego_index < n.max(1), "ego index out of range");
    let sizes = validate_sizes(sizes)?;
    let mut counts: BTreeMap<MotifId, u64> = BTreeMap::new();
    for &size in &sizes {
        for subset in combinations(n, size as usize) {
            if !subset.contains(&ego_index) {
                continue;
            }
            let induced = g.induced(&subset);
            if !induced.is_connected() {
                continue;
            }
            let id = canonical_id(&induced)?;
            *counts.entry(id).or_insert(0) += 1;
        }
    }
    Ok(counts)
}
