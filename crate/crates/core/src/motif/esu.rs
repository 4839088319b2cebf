//! Connected-subgraph enumeration over egocentric networks.
//!
//! The walk is the classic exclusive-neighbourhood extension scheme:
//! starting from the ego, each connected node subset containing the ego is
//! reached exactly once, so recording at every requested size needs a
//! single pass to the largest size. Each subset is classified through a
//! memo keyed by its packed color/adjacency signature.

use rustc_hash::{FxHashMap, FxHashSet};

use super::canon::canonical_from_bits;
use super::ego::EgoNetwork;
use super::graph::ColoredGraph;
use super::oracle::combinations;
use super::{canonical_id, validate_sizes, MotifError, MotifFilter, MotifId, MotifProfile};

/// How a restricted filter is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationMode {
    /// Enumerate every subset and drop non-allowed identifiers at output.
    #[default]
    DiscardAtOutput,
    /// Additionally skip subtrees whose current subset cannot occur as a
    /// connected induced subgraph of any allowed motif. Count-equivalent to
    /// [`EnumerationMode::DiscardAtOutput`] on the allowed set.
    EarlyPrune,
}

#[derive(Clone, Copy)]
struct MemoEntry {
    record: Option<MotifId>,
    extend: bool,
}

/// Reusable enumeration state: size set, filter, classification memo and,
/// in prune mode, the table of signatures embeddable in allowed motifs.
pub struct MotifCounter {
    sizes_mask: u8,
    max_size: usize,
    filter: MotifFilter,
    mode: EnumerationMode,
    memo: FxHashMap<u32, MemoEntry>,
    embeddable: Option<[FxHashSet<MotifId>; 5]>,
}

impl MotifCounter {
    pub fn new(
        sizes: &[u8],
        filter: MotifFilter,
        mode: EnumerationMode,
    ) -> Result<Self, MotifError> {
        let sizes = validate_sizes(sizes)?;
        let mut sizes_mask = 0u8;
        for &s in &sizes {
            sizes_mask |= 1 << s;
        }
        let max_size = *sizes.last().unwrap() as usize;
        let embeddable = match (mode, filter.ids()) {
            (EnumerationMode::EarlyPrune, Some(ids)) => Some(embeddable_table(ids.iter().copied())),
            _ => None,
        };
        Ok(Self {
            sizes_mask,
            max_size,
            filter,
            mode,
            memo: FxHashMap::default(),
            embeddable,
        })
    }

    pub fn mode(&self) -> EnumerationMode {
        self.mode
    }

    /// Count, for every requested size, the connected induced subgraphs of
    /// the ego network whose node set contains the ego, classified by
    /// canonical motif id and restricted by the filter.
    pub fn count(&mut self, ego_net: &EgoNetwork) -> MotifProfile {
        let g = &ego_net.graph;
        let mut counts: FxHashMap<MotifId, u64> = FxHashMap::default();
        if g.node_count() > 0 {
            let words = g.words();
            let mut ext = vec![vec![0u64; words]; self.max_size + 1];
            let mut closed = vec![vec![0u64; words]; self.max_size + 1];
            let mut sub: Vec<u16> = Vec::with_capacity(self.max_size);

            let ego = ego_net.ego_index;
            sub.push(ego as u16);
            let row = g.row(ego);
            ext[1].copy_from_slice(row);
            closed[1].copy_from_slice(row);
            closed[1][ego / 64] |= 1 << (ego % 64);
            self.walk(g, 1, &mut sub, &mut ext, &mut closed, &mut counts);
        }
        MotifProfile {
            ego: ego_net.ego_id.clone(),
            counts: counts.into_iter().collect(),
        }
    }

    fn walk(
        &mut self,
        g: &ColoredGraph,
        depth: usize,
        sub: &mut Vec<u16>,
        ext: &mut [Vec<u64>],
        closed: &mut [Vec<u64>],
        counts: &mut FxHashMap<MotifId, u64>,
    ) {
        let mut extendable = depth < self.max_size;
        if depth >= 3 {
            let want_record = self.sizes_mask >> depth & 1 == 1;
            let want_prune =
                extendable && self.mode == EnumerationMode::EarlyPrune && self.embeddable.is_some();
            if want_record || want_prune {
                let entry = self.classify(g, sub);
                if want_record {
                    if let Some(id) = entry.record {
                        *counts.entry(id).or_insert(0) += 1;
                    }
                }
                if want_prune {
                    extendable = entry.extend;
                }
            }
        }
        if !extendable {
            return;
        }
        while let Some(w) = first_set_bit(&ext[depth]) {
            {
                let (cur_ext, next_ext) = split_pair(ext, depth);
                let (cur_closed, next_closed) = split_pair(closed, depth);
                cur_ext[w / 64] &= !(1 << (w % 64));
                let row = g.row(w);
                for i in 0..row.len() {
                    next_ext[i] = cur_ext[i] | (row[i] & !cur_closed[i]);
                    next_closed[i] = cur_closed[i] | row[i];
                }
            }
            sub.push(w as u16);
            self.walk(g, depth + 1, sub, ext, closed, counts);
            sub.pop();
        }
    }

    fn classify(&mut self, g: &ColoredGraph, sub: &[u16]) -> MemoEntry {
        let n = sub.len();
        let (colors, adj) = g.subset_signature(sub);
        let key = (n as u32) << 24 | (colors as u32) << 16 | adj as u32;
        if let Some(entry) = self.memo.get(&key) {
            return *entry;
        }
        let id = canonical_from_bits(n, colors, adj);
        let record = if self.filter.allows(id) { Some(id) } else { None };
        let extend = match &self.embeddable {
            Some(table) if n < self.max_size => table[n - 1].contains(&id),
            _ => true,
        };
        let entry = MemoEntry { record, extend };
        self.memo.insert(key, entry);
        entry
    }
}

/// `table[s-1]` holds the canonical ids of connected s-node induced
/// subgraphs of allowed motifs larger than s: exactly the subsets worth
/// extending when only allowed motifs are wanted.
fn embeddable_table<I: Iterator<Item = MotifId>>(ids: I) -> [FxHashSet<MotifId>; 5] {
    let mut table: [FxHashSet<MotifId>; 5] = Default::default();
    for id in ids {
        let k = id.size();
        let g = id.to_graph();
        for s in 3..k {
            for subset in combinations(k, s) {
                let induced = g.induced(&subset);
                if induced.is_connected() {
                    table[s - 1].insert(canonical_id(&induced).expect("connected, sized 3..=4"));
                }
            }
        }
    }
    table
}

fn first_set_bit(words: &[u64]) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        if w != 0 {
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
    }
    None
}

fn split_pair(buffers: &mut [Vec<u64>], depth: usize) -> (&mut [u64], &mut [u64]) {
    let (head, tail) = buffers.split_at_mut(depth + 1);
    (&mut head[depth], &mut tail[0])
}

/// Enumerate motifs with the output-filter semantics: every subset is
/// classified, non-allowed identifiers are discarded at output.
pub fn enumerate_motifs(
    ego_net: &EgoNetwork,
    sizes: &[u8],
    filter: &MotifFilter,
) -> Result<MotifProfile, MotifError> {
    let mut counter = MotifCounter::new(sizes, filter.clone(), EnumerationMode::DiscardAtOutput)?;
    Ok(counter.count(ego_net))
}
