//! Small dense colored graphs backed by bitset adjacency rows.

use crate::netgen::NodeColor;

/// Undirected colored graph without self loops. Sized for egocentric
/// networks: adjacency is a dense bit matrix, so operations stay cheap for
/// a few hundred nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    colors: Vec<NodeColor>,
    words: usize,
    rows: Vec<u64>,
}

impl ColoredGraph {
    pub fn new(colors: Vec<NodeColor>) -> Self {
        let n = colors.len();
        let words = n.div_ceil(64).max(1);
        Self {
            colors,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn node_count(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, node: usize) -> NodeColor {
        self.colors[node]
    }

    pub fn colors(&self) -> &[NodeColor] {
        &self.colors
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    pub(crate) fn row(&self, node: usize) -> &[u64] {
        &self.rows[node * self.words..(node + 1) * self.words]
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        assert!(a != b, "self loops are not allowed");
        assert!(a < self.node_count() && b < self.node_count());
        self.rows[a * self.words + b / 64] |= 1 << (b % 64);
        self.rows[b * self.words + a / 64] |= 1 << (a % 64);
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a * self.words + b / 64] >> (b % 64) & 1 == 1
    }

    pub fn degree(&self, node: usize) -> usize {
        self.row(node).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(node).iter().enumerate().flat_map(|(wi, &word)| {
            BitIter { word, base: wi * 64 }
        })
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.node_count() {
            for b in self.neighbors(a) {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        (0..self.node_count()).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let n = self.node_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(node) = stack.pop() {
            for nb in self.neighbors(node) {
                if !seen[nb] {
                    seen[nb] = true;
                    count += 1;
                    stack.push(nb);
                }
            }
        }
        count == n
    }

    /// Induced subgraph on `nodes` (local indices follow `nodes` order).
    pub fn induced(&self, nodes: &[usize]) -> ColoredGraph {
        let colors = nodes.iter().map(|&i| self.colors[i]).collect();
        let mut g = ColoredGraph::new(colors);
        for (li, &a) in nodes.iter().enumerate() {
            for (lj, &b) in nodes.iter().enumerate().skip(li + 1) {
                if self.has_edge(a, b) {
                    g.add_edge(li, lj);
                }
            }
        }
        g
    }

    /// Packed color/adjacency signature of an induced subset of up to five
    /// nodes, in subset order. Bit conventions match [`super::MotifId`]:
    /// node 0 occupies the most significant color bit and pair (0,1) the
    /// most significant adjacency bit.
    pub(crate) fn subset_signature(&self, nodes: &[u16]) -> (u8, u16) {
        let n = nodes.len();
        debug_assert!(n <= 5);
        let mut colors = 0u8;
        for (i, &node) in nodes.iter().enumerate() {
            if self.colors[node as usize] == NodeColor::Video {
                colors |= 1 << (n - 1 - i);
            }
        }
        let pairs = n * (n - 1) / 2;
        let mut adj = 0u16;
        let mut p = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.has_edge(nodes[i] as usize, nodes[j] as usize) {
                    adj |= 1 << (pairs - 1 - p);
                }
                p += 1;
            }
        }
        (colors, adj)
    }
}

struct BitIter {
    word: u64,
    base: usize,
}

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.word == 0 {
            return None;
        }
        let bit = self.word.trailing_zeros() as usize;
        self.word &= self.word - 1;
        Some(self.base + bit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgen::NodeColor::{User, Video};

    #[test]
    fn adjacency_and_degrees() {
        let mut g = ColoredGraph::new(vec![User, User, Video]);
        g.add_edge(0, 2);
        g.add_edge(1, 2);
        assert!(g.has_edge(2, 0));
        assert!(!g.has_edge(0, 1));
        assert_eq!(g.degree(2), 2);
        assert_eq!(g.neighbors(2).collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(g.edges(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn connectivity() {
        let mut g = ColoredGraph::new(vec![User, User, User]);
        assert!(!g.is_connected());
        g.add_edge(0, 1);
        assert!(!g.is_connected());
        g.add_edge(1, 2);
        assert!(g.is_connected());
        assert!(ColoredGraph::new(vec![User]).is_connected());
        assert!(ColoredGraph::new(vec![]).is_connected());
    }

    #[test]
    fn works_past_word_boundary() {
        let mut g = ColoredGraph::new(vec![User; 130]);
        g.add_edge(0, 129);
        g.add_edge(64, 65);
        assert!(g.has_edge(129, 0));
        assert!(g.has_edge(65, 64));
        assert_eq!(g.neighbors(0).collect::<Vec<_>>(), vec![129]);
    }

    #[test]
    fn signature_bit_order() {
        // Path user-video-user stored as [User, Video, User] with edges
        // (0,1) and (1,2): colors 010, adjacency pairs (01,02,12) -> 101.
        let mut g = ColoredGraph::new(vec![User, Video, User]);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        let (colors, adj) = g.subset_signature(&[0, 1, 2]);
        assert_eq!(colors, 0b010);
        assert_eq!(adj, 0b101);
    }
}
