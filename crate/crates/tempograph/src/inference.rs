//! Relation inference between document events and the question time.
//!
//! Each stored edge is traversable in both directions; a reverse hop
//! contributes the inverse relation. The relation of an event to the
//! question time is the left fold of the composition table over the hops of
//! a breadth-first shortest path, UNDETERMINED as soon as any prefix is.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::algebra::{compose, TemporalRelation};
use crate::graph::{NodeId, NodeKind, TemporalGraph};

/// One step of a path: the traversal direction is already folded into
/// `relation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hop {
    pub from: NodeId,
    pub to: NodeId,
    pub relation: TemporalRelation,
}

/// Undirected adjacency plus per-ordered-pair hop labels.
///
/// When a node pair carries contradictory stored labels (directly or via an
/// inverse edge), its hop relation is UNDETERMINED, which poisons any fold
/// crossing it.
struct Traversal {
    adjacency: HashMap<NodeId, Vec<NodeId>>,
    hop_labels: HashMap<(NodeId, NodeId), TemporalRelation>,
}

impl Traversal {
    fn build(g: &TemporalGraph) -> Self {
        let mut adjacency: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
        let mut labels: HashMap<(NodeId, NodeId), Vec<TemporalRelation>> = HashMap::new();
        for e in g.edges() {
            labels.entry((e.src, e.dst)).or_default().push(e.relation);
            labels
                .entry((e.dst, e.src))
                .or_default()
                .push(e.relation.inverse());
        }
        let mut hop_labels = HashMap::new();
        for ((from, to), mut rels) in labels {
            rels.sort();
            rels.dedup();
            let relation = if rels.len() == 1 {
                rels[0]
            } else {
                TemporalRelation::Undetermined
            };
            hop_labels.insert((from, to), relation);
            adjacency.entry(from).or_default().push(to);
        }
        for nbrs in adjacency.values_mut() {
            nbrs.sort();
            nbrs.dedup();
        }
        Traversal {
            adjacency,
            hop_labels,
        }
    }

    fn neighbors(&self, id: NodeId) -> &[NodeId] {
        self.adjacency.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Hop distance from every reachable node to `target`.
    fn distances_to(&self, target: NodeId) -> HashMap<NodeId, usize> {
        let mut dist = HashMap::from([(target, 0usize)]);
        let mut queue = VecDeque::from([target]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[&cur];
            for &nbr in self.neighbors(cur) {
                dist.entry(nbr).or_insert_with(|| {
                    queue.push_back(nbr);
                    d + 1
                });
            }
        }
        dist
    }

    /// Walks from `from` toward the target, always taking the smallest-id
    /// neighbor that moves one step closer. This yields the shortest path
    /// whose visited-id sequence is lexicographically minimal.
    fn walk(&self, from: NodeId, dist: &HashMap<NodeId, usize>) -> Option<Vec<Hop>> {
        let mut remaining = *dist.get(&from)?;
        let mut hops = Vec::with_capacity(remaining);
        let mut cur = from;
        while remaining > 0 {
            let next = self
                .neighbors(cur)
                .iter()
                .copied()
                .find(|n| dist.get(n) == Some(&(remaining - 1)))
                .expect("BFS distance admits a descending neighbor");
            hops.push(Hop {
                from: cur,
                to: next,
                relation: self.hop_labels[&(cur, next)],
            });
            cur = next;
            remaining -= 1;
        }
        Some(hops)
    }
}

/// Breadth-first shortest path between two nodes, or `None` when they are
/// disconnected. Equal-length paths tie-break toward the lexicographically
/// smallest sequence of visited node ids.
pub fn shortest_path(g: &TemporalGraph, from: NodeId, to: NodeId) -> Option<Vec<Hop>> {
    if !g.contains(from) || !g.contains(to) {
        return None;
    }
    let traversal = Traversal::build(g);
    let dist = traversal.distances_to(to);
    traversal.walk(from, &dist)
}

/// Left fold of the composition table over a path's hop relations.
///
/// The empty path composes to SIMULTANEOUS (a node is simultaneous with
/// itself); any UNDETERMINED prefix short-circuits.
pub fn fold_path(hops: &[Hop]) -> TemporalRelation {
    let mut acc = TemporalRelation::Simultaneous;
    for hop in hops {
        acc = compose(acc, hop.relation);
        if acc == TemporalRelation::Undetermined {
            return acc;
        }
    }
    acc
}

/// Infers the relation of one document event to the question time.
pub fn infer_relation(g: &TemporalGraph, event: NodeId) -> TemporalRelation {
    match shortest_path(g, event, g.question_time_id()) {
        Some(hops) => fold_path(&hops),
        None => TemporalRelation::Undetermined,
    }
}

/// Infers relations for every document event, reusing a single reverse BFS
/// frontier from the question-time node. Results are identical to calling
/// [`infer_relation`] per node.
pub fn infer_all(g: &TemporalGraph) -> BTreeMap<NodeId, TemporalRelation> {
    let traversal = Traversal::build(g);
    let dist = traversal.distances_to(g.question_time_id());
    g.nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::DocEvent)
        .map(|n| {
            let relation = traversal
                .walk(n.id, &dist)
                .map(|hops| fold_path(&hops))
                .unwrap_or(TemporalRelation::Undetermined);
            (n.id, relation)
        })
        .collect()
}
