//! Egocentric motif enumeration: k-neighbourhood extraction, connected
//! colored subgraph enumeration at sizes 3-5, canonical motif identity,
//! subset filtering, and an independent brute-force census used as the
//! testing oracle.

mod canon;
mod ego;
mod esu;
mod graph;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub use canon::{canonical_id, motif_universe, MotifId};
pub use ego::{extract_ego_network, EgoNetwork};
pub use esu::{enumerate_motifs, EnumerationMode, MotifCounter};
pub use graph::ColoredGraph;
pub use oracle::oracle_census;

/// Largest graph accepted by the brute-force oracle.
pub const ORACLE_NODE_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum MotifError {
    #[error("unknown ego id `{0}`")]
    UnknownEgo(String),
    #[error("motif size {0} outside 3..=5")]
    SizeOutOfRange(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has {0} nodes, oracle limit is {ORACLE_NODE_LIMIT}")]
    TooLargeForOracle(usize),
    #[error("motif filter must be non-empty")]
    EmptyFilter,
    #[error("invalid motif id: {0}")]
    BadMotifId(String),
    #[error("invalid size set: {0}")]
    BadSizes(String),
}

/// Per-ego motif counts: one entry per motif observed in subgraphs that
/// contain the ego.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MotifProfile {
    pub ego: String,
    pub counts: BTreeMap<MotifId, u64>,
}

impl MotifProfile {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// Optional restriction to a set of motif identifiers. Absent means all
/// motifs are reported.
#[derive(Debug, Clone, Default)]
pub struct MotifFilter {
    allowed: Option<BTreeSet<MotifId>>,
}

impl MotifFilter {
    /// Pass-through filter: every motif is reported.
    pub fn all() -> Self {
        Self { allowed: None }
    }

    /// Restrict to `ids`; an empty set is rejected.
    pub fn subset<I: IntoIterator<Item = MotifId>>(ids: I) -> Result<Self, MotifError> {
        let set: BTreeSet<MotifId> = ids.into_iter().collect();
        if set.is_empty() {
            return Err(MotifError::EmptyFilter);
        }
        Ok(Self { allowed: Some(set) })
    }

    /// Parse a newline-delimited list of motif ids (`#` starts a comment).
    pub fn parse(text: &str) -> Result<Self, MotifError> {
        let mut ids = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            ids.push(line.parse::<MotifId>()?);
        }
        Self::subset(ids)
    }

    /// Union of several filters; any pass-through member makes the union
    /// pass-through.
    pub fn union<'a, I: IntoIterator<Item = &'a MotifFilter>>(filters: I) -> Self {
        let mut set = BTreeSet::new();
        for f in filters {
            match &f.allowed {
                None => return Self::all(),
                Some(ids) => set.extend(ids.iter().copied()),
            }
        }
        Self { allowed: Some(set) }
    }

    pub fn is_restricted(&self) -> bool {
        self.allowed.is_some()
    }

    pub fn allows(&self, id: MotifId) -> bool {
        match &self.allowed {
            None => true,
            Some(set) => set.contains(&id),
        }
    }

    pub fn ids(&self) -> Option<&BTreeSet<MotifId>> {
        self.allowed.as_ref()
    }
}

/// Validate an enumeration size set: non-empty, each in 3..=5. Returns the
/// sizes sorted and deduplicated.
pub fn validate_sizes(sizes: &[u8]) -> Result<Vec<u8>, MotifError> {
    if sizes.is_empty() {
        return Err(MotifError::BadSizes("no sizes given".into()));
    }
    let mut out: Vec<u8> = sizes.to_vec();
    out.sort_unstable();
    out.dedup();
    for &s in &out {
        if !(3..=5).contains(&s) {
            return Err(MotifError::BadSizes(format!("size {s} outside 3..=5")));
        }
    }
    Ok(out)
}
