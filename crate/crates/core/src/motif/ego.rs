//! Egocentric network extraction.

use std::collections::VecDeque;

use rustc_hash::FxHashMap;

use crate::netgen::{CommentNetwork, NodeColor};

use super::graph::ColoredGraph;
use super::MotifError;

/// Induced k-neighbourhood of a user node. The ego always sits at local
/// index 0; `members` maps local indices back to network node indices.
#[derive(Debug, Clone)]
pub struct EgoNetwork {
    pub ego_id: String,
    pub ego_index: usize,
    pub graph: ColoredGraph,
    pub members: Vec<u32>,
}

/// Extract the induced subgraph on all nodes within `k` hops of `ego`,
/// following user-video and user-user edges alike. `k = 0` yields the
/// single-node graph containing only the ego.
pub fn extract_ego_network(
    net: &CommentNetwork,
    ego: &str,
    k: usize,
) -> Result<EgoNetwork, MotifError> {
    let start = net
        .user_index(ego)
        .ok_or_else(|| MotifError::UnknownEgo(ego.to_string()))?;
    debug_assert_eq!(net.color(start), NodeColor::User);

    let mut members: Vec<u32> = vec![start];
    let mut local: FxHashMap<u32, usize> = FxHashMap::default();
    local.insert(start, 0);
    let mut queue: VecDeque<(u32, usize)> = VecDeque::new();
    queue.push_back((start, 0));
    while let Some((node, dist)) = queue.pop_front() {
        if dist == k {
            continue;
        }
        for nb in net.neighbors(node) {
            if let std::collections::hash_map::Entry::Vacant(slot) = local.entry(nb) {
                slot.insert(members.len());
                members.push(nb);
                queue.push_back((nb, dist + 1));
            }
        }
    }

    let colors = members.iter().map(|&m| net.color(m)).collect();
    let mut graph = ColoredGraph::new(colors);
    for (li, &m) in members.iter().enumerate() {
        for nb in net.neighbors(m) {
            if let Some(&lj) = local.get(&nb) {
                if li < lj {
                    graph.add_edge(li, lj);
                }
            }
        }
    }

    Ok(EgoNetwork {
        ego_id: ego.to_string(),
        ego_index: 0,
        graph,
        members,
    })
}
