//! Two-colored comment network construction.
//!
//! Nodes are users and videos. A weighted undirected edge links a user to
//! every video they commented on (weight = comment count). Unweighted
//! undirected edges link pairs of users whose comments are near-duplicates
//! under Jaccard distance over character-shingle sets. Users whose whole
//! neighbourhood is a single video are pruned, and users are labeled spam
//! when any of their comments carries the spam hint.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::CleanComment;

pub const DEFAULT_SHINGLE_WINDOW: usize = 3;
pub const DEFAULT_JACCARD_THRESHOLD: f64 = 0.6;

// Rolling-hash parameters. Only set membership matters downstream, so any
// collision-sparse pair works; these are fixed so outputs are reproducible.
const SHINGLE_BASE: u64 = 257;
const SHINGLE_MODULUS: u64 = 4_294_967_291; // largest 32-bit prime

/// Node category. Exactly two exist and they participate in motif identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeColor {
    User,
    Video,
}

impl fmt::Display for NodeColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeColor::User => write!(f, "user"),
            NodeColor::Video => write!(f, "video"),
        }
    }
}

/// Set of window-length substring hashes of a normalized text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShingleSet {
    hashes: Vec<u64>, // sorted, deduplicated
}

impl ShingleSet {
    pub fn len(&self) -> usize {
        self.hashes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hashes.is_empty()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.hashes
    }
}

/// Hash every contiguous `window`-character substring of `norm_text` with a
/// Rabin-Karp rolling hash. Texts shorter than the window produce an empty
/// set; duplicate shingles collapse.
pub fn shingle(norm_text: &str, window: usize) -> ShingleSet {
    assert!(window >= 1, "shingle window must be at least 1");
    let chars: Vec<u64> = norm_text.chars().map(|c| c as u64).collect();
    if chars.len() < window {
        return ShingleSet { hashes: Vec::new() };
    }
    // base^(window-1) mod M, for removing the outgoing character.
    let mut high = 1u64;
    for _ in 1..window {
        high = high * SHINGLE_BASE % SHINGLE_MODULUS;
    }
    let mut hash = 0u64;
    for &c in &chars[..window] {
        hash = (hash * SHINGLE_BASE + c) % SHINGLE_MODULUS;
    }
    let mut hashes = Vec::with_capacity(chars.len() - window + 1);
    hashes.push(hash);
    for i in window..chars.len() {
        let outgoing = chars[i - window] * high % SHINGLE_MODULUS;
        hash = (hash + SHINGLE_MODULUS - outgoing) % SHINGLE_MODULUS;
        hash = (hash * SHINGLE_BASE + chars[i]) % SHINGLE_MODULUS;
        hashes.push(hash);
    }
    hashes.sort_unstable();
    hashes.dedup();
    ShingleSet { hashes }
}

/// Jaccard distance `1 - |a ∩ b| / |a ∪ b|`. Two empty sets are defined to
/// be at distance 1: empty texts carry no similarity evidence.
pub fn jaccard_distance(a: &ShingleSet, b: &ShingleSet) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let mut inter = 0usize;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.hashes.len() && j < b.hashes.len() {
        match a.hashes[i].cmp(&b.hashes[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                inter += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let union = a.hashes.len() + b.hashes.len() - inter;
    1.0 - inter as f64 / union as f64
}

/// Network construction settings.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct NetgenConfig {
    pub shingle_window: usize,
    pub jaccard_threshold: f64,
}

impl Default for NetgenConfig {
    fn default() -> Self {
        Self {
            shingle_window: DEFAULT_SHINGLE_WINDOW,
            jaccard_threshold: DEFAULT_JACCARD_THRESHOLD,
        }
    }
}

#[derive(Debug, Error)]
pub enum NetgenError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("network file line {line}: {msg}")]
    BadNetworkFile { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl NetgenConfig {
    pub fn validate(&self) -> Result<(), NetgenError> {
        if self.shingle_window < 1 {
            return Err(NetgenError::InvalidConfig(
                "shingle_window must be >= 1".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.jaccard_threshold) {
            return Err(NetgenError::InvalidConfig(
                "jaccard_threshold must lie in [0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Summary counts in the shape reported per window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct NetworkStats {
    pub videos: usize,
    pub users: usize,
    pub spam_users: usize,
    pub edges: usize,
}

/// The two-colored comment network. Node indices are dense: users first
/// (sorted by id), then videos (sorted by id). Immutable once built.
#[derive(Debug, Clone)]
pub struct CommentNetwork {
    ids: Vec<String>,
    n_users: usize,
    adj: Vec<BTreeSet<u32>>,
    uv_weights: BTreeMap<(u32, u32), u32>,
    uu_edges: BTreeSet<(u32, u32)>,
    spam: BTreeMap<u32, bool>,
}

impl CommentNetwork {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn user_count(&self) -> usize {
        self.n_users
    }

    pub fn video_count(&self) -> usize {
        self.ids.len() - self.n_users
    }

    pub fn color(&self, node: u32) -> NodeColor {
        if (node as usize) < self.n_users {
            NodeColor::User
        } else {
            NodeColor::Video
        }
    }

    pub fn node_id(&self, node: u32) -> &str {
        &self.ids[node as usize]
    }

    /// Index of a user node by external id.
    pub fn user_index(&self, id: &str) -> Option<u32> {
        let users = &self.ids[..self.n_users];
        users.binary_search_by(|probe| probe.as_str().cmp(id)).ok().map(|i| i as u32)
    }

    /// All user node indices, ascending.
    pub fn users(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.n_users as u32
    }

    pub fn neighbors(&self, node: u32) -> impl Iterator<Item = u32> + '_ {
        self.adj[node as usize].iter().copied()
    }

    pub fn degree(&self, node: u32) -> usize {
        self.adj[node as usize].len()
    }

    pub fn uv_weight(&self, user: u32, video: u32) -> Option<u32> {
        self.uv_weights.get(&(user, video)).copied()
    }

    pub fn uv_edges(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        self.uv_weights.iter().map(|(&(u, v), &w)| (u, v, w))
    }

    pub fn uu_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.uu_edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.uv_weights.len() + self.uu_edges.len()
    }

    /// Spam label for a user node; users never labeled default to regular.
    pub fn is_spam(&self, user: u32) -> bool {
        self.spam.get(&user).copied().unwrap_or(false)
    }

    pub fn has_labels(&self) -> bool {
        !self.spam.is_empty()
    }

    pub fn stats(&self) -> NetworkStats {
        NetworkStats {
            videos: self.video_count(),
            users: self.user_count(),
            spam_users: self.spam.values().filter(|&&s| s).count(),
            edges: self.edge_count(),
        }
    }

    /// Check the structural invariants: edges are (User,Video) or
    /// (User,User), never (Video,Video); weights are at least 1; every user
    /// touches at least one video.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (&(u, v), &w) in &self.uv_weights {
            if self.color(u) != NodeColor::User || self.color(v) != NodeColor::Video {
                return Err(format!("uv edge ({u},{v}) has wrong colors"));
            }
            if w < 1 {
                return Err(format!("uv edge ({u},{v}) has weight {w}"));
            }
        }
        for &(a, b) in &self.uu_edges {
            if self.color(a) != NodeColor::User || self.color(b) != NodeColor::User {
                return Err(format!("uu edge ({a},{b}) has wrong colors"));
            }
            if a == b {
                return Err(format!("self loop on {a}"));
            }
        }
        for u in self.users() {
            if !self.adj[u as usize].iter().any(|&n| self.color(n) == NodeColor::Video) {
                return Err(format!("user {u} has no incident video"));
            }
        }
        Ok(())
    }
}

/// Build the network for one window of cleaned comments.
///
/// User-video weights count comments per pair. User-user edges connect
/// distinct users owning any pair of comments at Jaccard distance below the
/// threshold. The result is independent of comment order.
pub fn build_network(comments: &[CleanComment], cfg: &NetgenConfig) -> CommentNetwork {
    let mut user_ids: BTreeSet<&str> = BTreeSet::new();
    let mut video_ids: BTreeSet<&str> = BTreeSet::new();
    for c in comments {
        user_ids.insert(&c.user_id);
        video_ids.insert(&c.video_id);
    }
    let users: Vec<&str> = user_ids.into_iter().collect();
    let videos: Vec<&str> = video_ids.into_iter().collect();
    let n_users = users.len();
    let user_index: BTreeMap<&str, u32> =
        users.iter().enumerate().map(|(i, &id)| (id, i as u32)).collect();
    let video_index: BTreeMap<&str, u32> = videos
        .iter()
        .enumerate()
        .map(|(i, &id)| (id, (n_users + i) as u32))
        .collect();

    let mut uv_weights: BTreeMap<(u32, u32), u32> = BTreeMap::new();
    for c in comments {
        let u = user_index[c.user_id.as_str()];
        let v = video_index[c.video_id.as_str()];
        *uv_weights.entry((u, v)).or_insert(0) += 1;
    }

    // Bucket comments by identical normalized text: identical texts are at
    // distance zero, and each distinct text needs shingling only once.
    let mut buckets: BTreeMap<&str, BTreeSet<u32>> = BTreeMap::new();
    for c in comments {
        buckets
            .entry(&c.norm_text)
            .or_default()
            .insert(user_index[c.user_id.as_str()]);
    }
    let texts: Vec<&str> = buckets.keys().copied().collect();
    let bucket_users: Vec<&BTreeSet<u32>> = buckets.values().collect();
    let shingles: Vec<ShingleSet> = texts
        .par_iter()
        .map(|t| shingle(t, cfg.shingle_window))
        .collect();

    let mut uu_edges: BTreeSet<(u32, u32)> = BTreeSet::new();
    let connect = |edges: &mut BTreeSet<(u32, u32)>, a: u32, b: u32| {
        if a != b {
            edges.insert((a.min(b), a.max(b)));
        }
    };
    if 0.0 < cfg.jaccard_threshold {
        for members in &bucket_users {
            for (i, &a) in members.iter().enumerate() {
                for &b in members.iter().skip(i + 1) {
                    connect(&mut uu_edges, a, b);
                }
            }
        }
    }
    let close_pairs: Vec<(usize, usize)> = (0..texts.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let shingles = &shingles;
            let threshold = cfg.jaccard_threshold;
            (i + 1..texts.len())
                .filter(move |&j| jaccard_distance(&shingles[i], &shingles[j]) < threshold)
                .map(move |j| (i, j))
        })
        .collect();
    for (i, j) in close_pairs {
        for &a in bucket_users[i] {
            for &b in bucket_users[j] {
                connect(&mut uu_edges, a, b);
            }
        }
    }

    let mut ids: Vec<String> = Vec::with_capacity(n_users + videos.len());
    ids.extend(users.iter().map(|s| s.to_string()));
    ids.extend(videos.iter().map(|s| s.to_string()));
    let mut adj = vec![BTreeSet::new(); ids.len()];
    for &(u, v) in uv_weights.keys() {
        adj[u as usize].insert(v);
        adj[v as usize].insert(u);
    }
    for &(a, b) in &uu_edges {
        adj[a as usize].insert(b);
        adj[b as usize].insert(a);
    }

    CommentNetwork {
        ids,
        n_users,
        adj,
        uv_weights,
        uu_edges,
        spam: BTreeMap::new(),
    }
}

/// Remove users whose entire neighbour set is exactly one video node, then
/// drop videos left with no neighbours. Runs a single pass; such users have
/// no user neighbours, so no new removals can be triggered.
pub fn prune_single_video_users(net: &CommentNetwork) -> CommentNetwork {
    let mut keep: Vec<bool> = vec![true; net.node_count()];
    for u in net.users() {
        let nbrs = &net.adj[u as usize];
        if nbrs.len() == 1 {
            let only = *nbrs.iter().next().unwrap();
            if net.color(only) == NodeColor::Video {
                keep[u as usize] = false;
            }
        }
    }
    for v in net.n_users as u32..net.node_count() as u32 {
        let alive = net.adj[v as usize].iter().any(|&n| keep[n as usize]);
        if !alive {
            keep[v as usize] = false;
        }
    }

    let mut remap: Vec<Option<u32>> = vec![None; net.node_count()];
    let mut ids = Vec::new();
    let mut next = 0u32;
    for (i, &k) in keep.iter().enumerate() {
        if k {
            remap[i] = Some(next);
            ids.push(net.ids[i].clone());
            next += 1;
        }
    }
    let n_users = (0..net.n_users).filter(|&i| keep[i]).count();

    let mut uv_weights = BTreeMap::new();
    for (&(u, v), &w) in &net.uv_weights {
        if let (Some(nu), Some(nv)) = (remap[u as usize], remap[v as usize]) {
            uv_weights.insert((nu, nv), w);
        }
    }
    let mut uu_edges = BTreeSet::new();
    for &(a, b) in &net.uu_edges {
        if let (Some(na), Some(nb)) = (remap[a as usize], remap[b as usize]) {
            uu_edges.insert((na.min(nb), na.max(nb)));
        }
    }
    let mut spam = BTreeMap::new();
    for (&u, &s) in &net.spam {
        if let Some(nu) = remap[u as usize] {
            spam.insert(nu, s);
        }
    }

    let mut adj = vec![BTreeSet::new(); ids.len()];
    for &(u, v) in uv_weights.keys() {
        adj[u as usize].insert(v);
        adj[v as usize].insert(u);
    }
    for &(a, b) in &uu_edges {
        adj[a as usize].insert(b);
        adj[b as usize].insert(a);
    }

    CommentNetwork {
        ids,
        n_users,
        adj,
        uv_weights,
        uu_edges,
        spam,
    }
}

/// Label every user present in the network: spam iff at least one of their
/// comments carries the spam hint. Users pruned from the network get no
/// label entry.
pub fn label_spam_users(net: &CommentNetwork, comments: &[CleanComment]) -> CommentNetwork {
    let mut out = net.clone();
    let mut spam = BTreeMap::new();
    for u in out.users() {
        spam.insert(u, false);
    }
    for c in comments {
        if let Some(u) = out.user_index(&c.user_id) {
            if c.spam_hint {
                spam.insert(u, true);
            }
        }
    }
    out.spam = spam;
    out
}

fn display_id(net: &CommentNetwork, node: u32) -> String {
    match net.color(node) {
        NodeColor::User => format!("u:{}", net.node_id(node)),
        NodeColor::Video => format!("v:{}", net.node_id(node)),
    }
}

/// Write the edge-list text format: a node table (`id color spam_label`)
/// followed by edges (`src dst kind weight`). User-user edges carry
/// weight 1. Node ids are prefixed `u:`/`v:` so the two namespaces cannot
/// collide.
pub fn write_edge_list<W: Write>(net: &CommentNetwork, mut w: W) -> io::Result<()> {
    writeln!(w, "# nodes {}", net.node_count())?;
    writeln!(w, "# id color spam_label")?;
    for node in 0..net.node_count() as u32 {
        let label = match net.color(node) {
            NodeColor::Video => "-".to_string(),
            NodeColor::User => {
                if net.is_spam(node) {
                    "spam".to_string()
                } else {
                    "regular".to_string()
                }
            }
        };
        writeln!(w, "{} {} {}", display_id(net, node), net.color(node), label)?;
    }
    writeln!(w, "# edges {}", net.edge_count())?;
    writeln!(w, "# src dst kind weight")?;
    for (u, v, weight) in net.uv_edges() {
        writeln!(w, "{} {} uv {}", display_id(net, u), display_id(net, v), weight)?;
    }
    for (a, b) in net.uu_edges() {
        writeln!(w, "{} {} uu 1", display_id(net, a), display_id(net, b))?;
    }
    Ok(())
}

/// Parsed form of the edge-list text format.
#[derive(Debug, Default)]
pub struct ParsedNetworkFile {
    pub nodes: Vec<(String, NodeColor, Option<bool>)>,
    pub edges: Vec<(String, String, String, u32)>,
}

/// Read back a file produced by [`write_edge_list`].
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<ParsedNetworkFile, NetgenError> {
    let mut out = ParsedNetworkFile::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields.as_slice() {
            [id, color, label] if *color == "user" || *color == "video" => {
                let color = if *color == "user" {
                    NodeColor::User
                } else {
                    NodeColor::Video
                };
                let label = match *label {
                    "-" => None,
                    "spam" => Some(true),
                    "regular" => Some(false),
                    other => {
                        return Err(NetgenError::BadNetworkFile {
                            line: line_no,
                            msg: format!("unknown spam label `{other}`"),
                        })
                    }
                };
                out.nodes.push((id.to_string(), color, label));
            }
            [src, dst, kind, weight] => {
                let weight = weight.parse().map_err(|_| NetgenError::BadNetworkFile {
                    line: line_no,
                    msg: format!("bad weight `{weight}`"),
                })?;
                out.edges
                    .push((src.to_string(), dst.to_string(), kind.to_string(), weight));
            }
            _ => {
                return Err(NetgenError::BadNetworkFile {
                    line: line_no,
                    msg: "unrecognized line".into(),
                })
            }
        }
    }
    Ok(out)
}

/// Write the network as GraphML for external viewers.
pub fn write_graphml<W: Write>(net: &CommentNetwork, mut w: W) -> io::Result<()> {
    writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(w, r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#)?;
    writeln!(w, r#"  <key id="color" for="node" attr.name="color" attr.type="string"/>"#)?;
    writeln!(w, r#"  <key id="spam" for="node" attr.name="spam" attr.type="boolean"/>"#)?;
    writeln!(w, r#"  <key id="kind" for="edge" attr.name="kind" attr.type="string"/>"#)?;
    writeln!(w, r#"  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>"#)?;
    writeln!(w, r#"  <graph id="G" edgedefault="undirected">"#)?;
    for node in 0..net.node_count() as u32 {
        writeln!(w, r#"    <node id="{}">"#, display_id(net, node))?;
        writeln!(w, r#"      <data key="color">{}</data>"#, net.color(node))?;
        if net.color(node) == NodeColor::User {
            writeln!(w, r#"      <data key="spam">{}</data>"#, net.is_spam(node))?;
        }
        writeln!(w, r#"    </node>"#)?;
    }
    let mut edge_id = 0usize;
    for (u, v, weight) in net.uv_edges() {
        writeln!(
            w,
            r#"    <edge id="e{edge_id}" source="{}" target="{}"><data key="kind">uv</data><data key="weight">{weight}</data></edge>"#,
            display_id(net, u),
            display_id(net, v),
        )?;
        edge_id += 1;
    }
    for (a, b) in net.uu_edges() {
        writeln!(
            w,
            r#"    <edge id="e{edge_id}" source="{}" target="{}"><data key="kind">uu</data><data key="weight">1</data></edge>"#,
            display_id(net, a),
            display_id(net, b),
        )?;
        edge_id += 1;
    }
    writeln!(w, "  </graph>")?;
    writeln!(w, "</graphml>")?;
    Ok(())
}
