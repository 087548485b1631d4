//! Shared fixtures for integration tests: a deterministic synthetic corpus
//! generator and oracles that re-derive expected results through routes
//! independent of the library implementation.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use tempograph::algebra::{compose, TemporalRelation, RELATION_VOCABULARY};
use tempograph::graph::{
    AnnotatedDocument, EventAnnotation, NodeId, TemporalGraph, TimexAnnotation, TlinkAnnotation,
};
use tempograph::Span;

// ---------------------------------------------------------------------------
// Synthetic corpus
// ---------------------------------------------------------------------------

pub struct CorpusExample {
    pub id: String,
    pub question: String,
    pub context: String,
    pub answers: Vec<String>,
    pub annotation: AnnotatedDocument,
}

const NAMES: &[&str] = &[
    "Harding", "Coolidge", "Wilson", "Monroe", "Tyler", "Polk", "Hayes", "Garfield",
];
const ORGS: &[&str] = &[
    "the council", "the union", "the assembly", "the guild", "the committee",
];
const VERBS: &[&str] = &["joined", "led", "left", "founded", "chaired", "advised"];
const MONTHS: &[&str] = &[
    "January", "February", "March", "April", "May", "June", "July", "August", "September",
    "October", "November", "December",
];
const MONTHS_ABBREV: &[&str] = &[
    "Jan", "Feb", "Mar", "Apr", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
];

fn question_timex(rng: &mut StdRng) -> String {
    let y = rng.random_range(1850..=1995);
    match rng.random_range(0..7) {
        0 => format!("in {y}"),
        1 => format!("from {y} to {}", y + rng.random_range(1..=5)),
        2 => format!("between {y} - {}", y + rng.random_range(1..=4)),
        3 => format!("before {} {y}", MONTHS_ABBREV[rng.random_range(0..MONTHS_ABBREV.len())]),
        4 => format!("after {y}"),
        5 => format!(
            "{} {}, {y}",
            MONTHS[rng.random_range(0..MONTHS.len())],
            rng.random_range(1..=28)
        ),
        _ => format!("as of {} {y}", MONTHS[rng.random_range(0..MONTHS.len())]),
    }
}

fn context_timex(rng: &mut StdRng) -> (String, Option<String>) {
    let y = rng.random_range(1850..=1995);
    // ~4% of timexes are unnormalizable noise, as real extractor output is.
    if rng.random_range(0..25) == 0 {
        return ("that winter".to_string(), None);
    }
    let surface = match rng.random_range(0..5) {
        0 => format!("{y}"),
        1 => format!("in {y}"),
        2 => format!("{} {y}", MONTHS_ABBREV[rng.random_range(0..MONTHS_ABBREV.len())]),
        3 => format!(
            "{} {}, {y}",
            MONTHS[rng.random_range(0..MONTHS.len())],
            rng.random_range(1..=28)
        ),
        _ => format!("from {y} to {}", y + rng.random_range(1..=3)),
    };
    // A third of normalizable timexes also carry an explicit value.
    let value = if rng.random_range(0..3) == 0 {
        Some(format!("[{y}-01-01, {y}-12-31]"))
    } else {
        None
    };
    (surface, value)
}

/// Generates `count` fully annotated examples. Text is ASCII with no angle
/// brackets, spans are exact byte offsets, and identical seeds reproduce
/// identical corpora.
pub fn generate_corpus(seed: u64, count: usize) -> Vec<CorpusExample> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let name = NAMES[rng.random_range(0..NAMES.len())];
            let org = ORGS[rng.random_range(0..ORGS.len())];
            // ~5% of questions carry no time expression at all.
            let question = if rng.random_range(0..20) == 0 {
                format!("Who led {org}?")
            } else {
                format!("What was {name}'s position {}?", question_timex(&mut rng))
            };

            let mut text = String::new();
            let mut events = Vec::new();
            let mut timexes = Vec::new();
            let mut tlinks = Vec::new();
            let sentences = rng.random_range(3..=7);
            for s in 0..sentences {
                if s > 0 {
                    text.push(' ');
                }
                let subject = NAMES[rng.random_range(0..NAMES.len())];
                text.push_str(subject);
                text.push(' ');
                let verb = VERBS[rng.random_range(0..VERBS.len())];
                let verb_span = Span::new(text.len(), text.len() + verb.len());
                text.push_str(verb);
                events.push(EventAnnotation {
                    span: verb_span,
                    surface: verb.to_string(),
                });
                let event_idx = events.len() - 1;
                text.push(' ');
                text.push_str(ORGS[rng.random_range(0..ORGS.len())]);
                if rng.random_range(0..4) > 0 {
                    text.push(' ');
                    let (surface, value) = context_timex(&mut rng);
                    let span = Span::new(text.len(), text.len() + surface.len());
                    text.push_str(&surface);
                    timexes.push(TimexAnnotation {
                        span,
                        surface,
                        value,
                    });
                    tlinks.push((event_idx, timexes.len() - 1, "INCLUDED_BY"));
                }
                text.push('.');
                // Occasionally order consecutive events explicitly.
                if event_idx > 0 && rng.random_range(0..3) == 0 {
                    tlinks.push((event_idx, event_idx - 1, "AFTER"));
                }
            }
            let event_count = events.len();
            let annotation = AnnotatedDocument {
                text: text.clone(),
                events,
                timexes,
                tlinks: tlinks
                    .into_iter()
                    .map(|(src, timex_or_event, rel)| TlinkAnnotation {
                        source: src,
                        // Timex annotation indices follow all events.
                        target: if rel == "AFTER" {
                            timex_or_event
                        } else {
                            event_count + timex_or_event
                        },
                        relation: rel.to_string(),
                    })
                    .collect(),
            };
            let answers = if rng.random_range(0..10) < 7 {
                vec![name.to_string()]
            } else {
                Vec::new()
            };
            CorpusExample {
                id: format!("ex{i:04}"),
                question,
                context: text,
                answers,
                annotation,
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Graph oracles
// ---------------------------------------------------------------------------

/// Assembles a graph from explicit edges over node 0 (question time) and
/// `n - 1` event nodes, through the public serde surface.
pub fn graph_from_edges(n: usize, edges: &[(usize, usize, TemporalRelation)]) -> TemporalGraph {
    let mut nodes = vec![serde_json::json!({
        "id": 0, "kind": "QuestionTime", "start": 0, "end": 1,
        "surface": "q", "interval": {"start": "1980-01-01", "end": "1980-12-31"}
    })];
    for i in 1..n {
        nodes.push(serde_json::json!({
            "id": i, "kind": "DocEvent", "start": 0, "end": 1, "surface": "e"
        }));
    }
    let edges: Vec<serde_json::Value> = edges
        .iter()
        .map(|(s, d, r)| {
            serde_json::json!({
                "src": s, "dst": d, "relation": r.name(), "provenance": "annotation"
            })
        })
        .collect();
    serde_json::from_value(serde_json::json!({
        "nodes": nodes, "edges": edges, "question_time": 0
    }))
    .expect("valid test graph")
}

pub fn random_graph(seed: u64, max_nodes: usize, max_edges: usize) -> TemporalGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_nodes);
    let e = rng.random_range(0..=max_edges);
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for _ in 0..e {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let rel = RELATION_VOCABULARY[rng.random_range(0..6)];
        if seen.insert((a, b, rel)) {
            edges.push((a, b, rel));
        }
    }
    graph_from_edges(n, &edges)
}

fn undirected_neighbors(g: &TemporalGraph, id: NodeId) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = g
        .edges()
        .iter()
        .filter_map(|e| {
            if e.src == id {
                Some(e.dst)
            } else if e.dst == id {
                Some(e.src)
            } else {
                None
            }
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Exhaustive simple-path enumeration over the undirected edge view.
pub fn all_simple_paths(g: &TemporalGraph, from: NodeId, to: NodeId) -> Vec<Vec<NodeId>> {
    fn recurse(
        g: &TemporalGraph,
        cur: NodeId,
        to: NodeId,
        visited: &mut Vec<NodeId>,
        out: &mut Vec<Vec<NodeId>>,
    ) {
        if cur == to {
            out.push(visited.clone());
            return;
        }
        for nbr in undirected_neighbors(g, cur) {
            if visited.contains(&nbr) {
                continue;
            }
            visited.push(nbr);
            recurse(g, nbr, to, visited, out);
            visited.pop();
        }
    }
    let mut out = Vec::new();
    if g.contains(from) && g.contains(to) {
        recurse(g, from, to, &mut vec![from], &mut out);
    }
    out
}

/// Folds a node sequence by scanning the edge list directly for each hop:
/// the hop label is the unique stored-or-inverse relation, UNDETERMINED on
/// contradiction.
pub fn oracle_fold(g: &TemporalGraph, path: &[NodeId]) -> TemporalRelation {
    let mut acc = TemporalRelation::Simultaneous;
    for w in path.windows(2) {
        let (u, v) = (w[0], w[1]);
        let mut labels: Vec<TemporalRelation> = g
            .edges()
            .iter()
            .filter_map(|e| {
                if (e.src, e.dst) == (u, v) {
                    Some(e.relation)
                } else if (e.src, e.dst) == (v, u) {
                    Some(e.relation.inverse())
                } else {
                    None
                }
            })
            .collect();
        labels.sort();
        labels.dedup();
        let hop = if labels.len() == 1 {
            labels[0]
        } else {
            TemporalRelation::Undetermined
        };
        acc = compose(acc, hop);
        if acc == TemporalRelation::Undetermined {
            return acc;
        }
    }
    acc
}
