//! Canonical identifiers for small colored graphs.
//!
//! A motif id is the lexicographic minimum, over all relabelings that keep
//! node colors sorted (users before videos), of the packed color vector and
//! upper-triangular adjacency bits. At five nodes or fewer the exhaustive
//! scan over color-preserving permutations is exact and fast, so nothing
//! heavier is needed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::netgen::NodeColor;

use super::graph::ColoredGraph;
use super::MotifError;

/// Canonical identifier of a connected colored graph on 3-5 nodes.
///
/// `colors` holds one bit per node (1 = video), node 0 in the most
/// significant position; canonical color vectors are sorted, users first.
/// `adj` holds the upper triangle in pair order (0,1),(0,2),...,(n-2,n-1),
/// first pair in the most significant position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MotifId {
    size: u8,
    colors: u8,
    adj: u16,
}

impl MotifId {
    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn color_bits(&self) -> u8 {
        self.colors
    }

    pub fn adj_bits(&self) -> u16 {
        self.adj
    }

    pub fn video_count(&self) -> usize {
        self.colors.count_ones() as usize
    }

    pub fn user_count(&self) -> usize {
        self.size() - self.video_count()
    }

    /// Number of edges between two user nodes.
    pub fn user_user_edges(&self) -> usize {
        self.edges_matching(|a, b| a == NodeColor::User && b == NodeColor::User)
    }

    /// Number of edges between a user and a video node.
    pub fn user_video_edges(&self) -> usize {
        self.edges_matching(|a, b| a != b)
    }

    fn edges_matching(&self, pred: impl Fn(NodeColor, NodeColor) -> bool) -> usize {
        let g = self.to_graph();
        g.edges()
            .into_iter()
            .filter(|&(a, b)| pred(g.color(a), g.color(b)))
            .count()
    }

    /// Materialize the canonical graph this id denotes.
    pub fn to_graph(&self) -> ColoredGraph {
        let n = self.size();
        let colors: Vec<NodeColor> = (0..n)
            .map(|i| {
                if self.colors >> (n - 1 - i) & 1 == 1 {
                    NodeColor::Video
                } else {
                    NodeColor::User
                }
            })
            .collect();
        let mut g = ColoredGraph::new(colors);
        let pairs = n * (n - 1) / 2;
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.adj >> (pairs - 1 - p) & 1 == 1 {
                    g.add_edge(i, j);
                }
                p += 1;
            }
        }
        g
    }
}

impl fmt::Display for MotifId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.size();
        let pairs = n * (n - 1) / 2;
        write!(
            f,
            "s{}:c{:0cw$b}:a{:0aw$b}",
            n,
            self.colors,
            self.adj,
            cw = n,
            aw = pairs
        )
    }
}

impl FromStr for MotifId {
    type Err = MotifError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MotifError::BadMotifId(s.to_string());
        let mut parts = s.split(':');
        let size_part = parts.next().ok_or_else(bad)?;
        let color_part = parts.next().ok_or_else(bad)?;
        let adj_part = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let size: u8 = size_part.strip_prefix('s').ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if !(3..=5).contains(&size) {
            return Err(bad());
        }
        let n = size as usize;
        let pairs = n * (n - 1) / 2;
        let color_bits = color_part.strip_prefix('c').ok_or_else(bad)?;
        let adj_bits = adj_part.strip_prefix('a').ok_or_else(bad)?;
        if color_bits.len() != n || adj_bits.len() != pairs {
            return Err(bad());
        }
        let colors = u8::from_str_radix(color_bits, 2).map_err(|_| bad())?;
        let adj = u16::from_str_radix(adj_bits, 2).map_err(|_| bad())?;
        let candidate = MotifId { size, colors, adj };
        // Only canonical ids are valid: re-canonicalize and compare.
        let canonical = canonical_from_bits(n, colors, adj);
        if canonical != candidate {
            return Err(MotifError::BadMotifId(format!(
                "{s} is not canonical (expected {canonical})"
            )));
        }
        if !candidate.to_graph().is_connected() {
            return Err(MotifError::BadMotifId(format!("{s} is disconnected")));
        }
        Ok(candidate)
    }
}

fn permutations_table() -> &'static [Vec<Vec<u8>>; 6] {
    static TABLE: OnceLock<[Vec<Vec<u8>>; 6]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: [Vec<Vec<u8>>; 6] = Default::default();
        for (k, slot) in table.iter_mut().enumerate() {
            let mut items: Vec<u8> = (0..k as u8).collect();
            let mut out = Vec::new();
            heap_permutations(&mut items, k, &mut out);
            out.sort();
            *slot = out;
        }
        table
    })
}

fn heap_permutations(items: &mut [u8], k: usize, out: &mut Vec<Vec<u8>>) {
    if k <= 1 {
        out.push(items.to_vec());
        return;
    }
    for i in 0..k {
        heap_permutations(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

const fn pair_index(i: usize, j: usize, n: usize) -> usize {
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Canonicalize a packed signature (bit conventions as in [`MotifId`]).
/// Connectivity is not checked here; callers that need the check go
/// through [`canonical_id`].
pub(crate) fn canonical_from_bits(n: usize, colors: u8, adj: u16) -> MotifId {
    debug_assert!((1..=5).contains(&n));
    let mut users: Vec<u8> = Vec::with_capacity(n);
    let mut videos: Vec<u8> = Vec::with_capacity(n);
    for i in 0..n {
        if colors >> (n - 1 - i) & 1 == 1 {
            videos.push(i as u8);
        } else {
            users.push(i as u8);
        }
    }
    let n_videos = videos.len();
    let pairs = n * (n - 1) / 2;

    let mut best = u16::MAX;
    let mut mapping = [0u8; 5];
    for perm_u in &permutations_table()[users.len()] {
        for perm_v in &permutations_table()[n_videos] {
            // mapping[c] = original node placed at canonical position c.
            for (c, &ui) in perm_u.iter().enumerate() {
                mapping[c] = users[ui as usize];
            }
            for (c, &vi) in perm_v.iter().enumerate() {
                mapping[users.len() + c] = videos[vi as usize];
            }
            let mut candidate = 0u16;
            let mut p = 0;
            for a in 0..n {
                for b in a + 1..n {
                    let (oa, ob) = (mapping[a] as usize, mapping[b] as usize);
                    let (lo, hi) = if oa < ob { (oa, ob) } else { (ob, oa) };
                    let orig = pairs - 1 - pair_index(lo, hi, n);
                    if adj >> orig & 1 == 1 {
                        candidate |= 1 << (pairs - 1 - p);
                    }
                    p += 1;
                }
            }
            if candidate < best {
                best = candidate;
            }
        }
    }

    MotifId {
        size: n as u8,
        colors: ((1u16 << n_videos) - 1) as u8,
        adj: best,
    }
}

/// Canonical identifier of a connected colored graph on 3-5 nodes. Two
/// graphs get the same id exactly when a color-preserving isomorphism maps
/// one onto the other.
pub fn canonical_id(g: &ColoredGraph) -> Result<MotifId, MotifError> {
    let n = g.node_count();
    if !(3..=5).contains(&n) {
        return Err(MotifError::SizeOutOfRange(n));
    }
    if !g.is_connected() {
        return Err(MotifError::Disconnected);
    }
    let nodes: Vec<u16> = (0..n as u16).collect();
    let (colors, adj) = g.subset_signature(&nodes);
    Ok(canonical_from_bits(n, colors, adj))
}

pub(crate) fn bits_connected(n: usize, adj: u16) -> bool {
    if n <= 1 {
        return true;
    }
    let pairs = n * (n - 1) / 2;
    let mut nbr = [0u8; 5];
    let mut p = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj >> (pairs - 1 - p) & 1 == 1 {
                nbr[i] |= 1 << j;
                nbr[j] |= 1 << i;
            }
            p += 1;
        }
    }
    let mut seen: u8 = 1;
    loop {
        let mut grown = seen;
        for (i, &mask) in nbr.iter().enumerate().take(n) {
            if seen >> i & 1 == 1 {
                grown |= mask;
            }
        }
        if grown == seen {
            break;
        }
        seen = grown;
    }
    seen == (1 << n) - 1
}

/// Exhaustively generate the canonical ids of all connected colored graphs
/// of the given sizes. With `num_colors == 1` every node is a user; with 2,
/// user/video mixes are generated and `forbid_video_video` drops graphs
/// with any video-video edge (the comment-network constraint).
pub fn motif_universe(sizes: &[u8], num_colors: u8, forbid_video_video: bool) -> BTreeSet<MotifId> {
    assert!(num_colors == 1 || num_colors == 2, "two colors exist");
    let mut out = BTreeSet::new();
    for &size in sizes {
        assert!((3..=5).contains(&size), "sizes must lie in 3..=5");
        let n = size as usize;
        let pairs = n * (n - 1) / 2;
        let max_videos = if num_colors == 1 { 0 } else { n };
        for n_videos in 0..=max_videos {
            // Sorted color pattern: users first. Every colored graph is
            // isomorphic to one with sorted colors.
            let colors = ((1u16 << n_videos) - 1) as u8;
            for adj in 0..(1u32 << pairs) as u16 {
                if forbid_video_video && has_vv_edge(n, n_videos, adj) {
                    continue;
                }
                if !bits_connected(n, adj) {
                    continue;
                }
                out.insert(canonical_from_bits(n, colors, adj));
            }
        }
    }
    out
}

fn has_vv_edge(n: usize, n_videos: usize, adj: u16) -> bool {
    let pairs = n * (n - 1) / 2;
    let first_video = n - n_videos;
    for i in first_video..n {
        for j in i + 1..n {
            if adj >> (pairs - 1 - pair_index(i, j, n)) & 1 == 1 {
                return true;
            }
        }
    }
    false
}
