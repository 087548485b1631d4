//! Temporal graph model and construction.
//!
//! A graph holds one question-time node, one document-time node per timex
//! annotation, and one document-event node per event annotation. Edges come
//! from annotation TLINKs, from deterministic interval comparison between
//! each document time and the question time, or from path inference.
//!
//! Annotation ingestion uses the versioned JSON schema `tg-annot/1`:
//!
//! ```json
//! {
//!   "version": "tg-annot/1",
//!   "text": "Congress created the Continental Army on June 14, 1775.",
//!   "events":  [{"start": 9, "end": 16, "surface": "created"}],
//!   "timexes": [{"start": 41, "end": 54, "surface": "June 14, 1775",
//!                "value": "1775-06-14"}],
//!   "tlinks":  [{"source": 0, "target": 1, "relation": "INCLUDED_BY"}]
//! }
//! ```
//!
//! All offsets are byte offsets into the UTF-8 text, end exclusive. TLINK
//! `source`/`target` index the concatenation of `events` followed by
//! `timexes`; relation labels are the upper-case names BEFORE, AFTER,
//! INCLUDES, INCLUDED_BY, SIMULTANEOUS, OVERLAP.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{relate, TemporalRelation};
use crate::chronon::{self, QuestionTimeSpan, Span, TimeInterval};
use crate::inference;

/// Annotation schema version accepted by the loader.
pub const ANNOTATION_FORMAT: &str = "tg-annot/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("tlink {index}: endpoint {endpoint} out of range ({count} annotations)")]
    TlinkIndexOutOfRange {
        index: usize,
        endpoint: usize,
        count: usize,
    },
    #[error("tlink {index}: unknown relation label {label:?}")]
    UnknownRelationLabel { index: usize, label: String },
    #[error("annotation span {start}..{end} is invalid for a text of {len} bytes")]
    InvalidSpan { start: usize, end: usize, len: usize },
    #[error("annotation surface {surface:?} does not match text at {start}..{end}")]
    SurfaceMismatch {
        surface: String,
        start: usize,
        end: usize,
    },
    #[error("annotation file declares version {found:?}, expected {ANNOTATION_FORMAT:?}")]
    UnsupportedVersion { found: String },
    #[error("annotation JSON: {0}")]
    Json(String),
}

// ---------------------------------------------------------------------------
// Annotations
// ---------------------------------------------------------------------------

/// An event mention supplied by an external extractor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventAnnotation {
    #[serde(flatten)]
    pub span: Span,
    pub surface: String,
}

/// A time expression supplied by an external extractor, with an optional
/// pre-normalized value string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimexAnnotation {
    #[serde(flatten)]
    pub span: Span,
    pub surface: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

/// A temporal-relation link between two annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TlinkAnnotation {
    pub source: usize,
    pub target: usize,
    pub relation: String,
}

/// A document plus externally supplied event/timex spans and TLINKs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotatedDocument {
    pub text: String,
    #[serde(default)]
    pub events: Vec<EventAnnotation>,
    #[serde(default)]
    pub timexes: Vec<TimexAnnotation>,
    #[serde(default)]
    pub tlinks: Vec<TlinkAnnotation>,
}

#[derive(Serialize, Deserialize)]
struct AnnotationFile {
    version: String,
    #[serde(flatten)]
    doc: AnnotatedDocument,
}

impl AnnotatedDocument {
    /// Total number of annotations; TLINK endpoints index this range, with
    /// events first and timexes after.
    pub fn annotation_count(&self) -> usize {
        self.events.len() + self.timexes.len()
    }

    pub fn from_json_str(s: &str) -> Result<Self, GraphError> {
        let file: AnnotationFile =
            serde_json::from_str(s).map_err(|e| GraphError::Json(e.to_string()))?;
        if file.version != ANNOTATION_FORMAT {
            return Err(GraphError::UnsupportedVersion { found: file.version });
        }
        Ok(file.doc)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&AnnotationFile {
            version: ANNOTATION_FORMAT.to_string(),
            doc: self.clone(),
        })
        .expect("annotation serialization")
    }
}

// ---------------------------------------------------------------------------
// Graph model
// ---------------------------------------------------------------------------

/// Stable node identifier, unique within its graph and preserved by
/// subgraph selection.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl std::fmt::Display for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    QuestionTime,
    DocTime,
    DocEvent,
}

/// A graph node. Spans index the question text for the question-time node
/// and the document text otherwise. Events carry no interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    #[serde(flatten)]
    pub span: Span,
    pub surface: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<TimeInterval>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeProvenance {
    /// Copied from an annotation TLINK.
    Annotation,
    /// Computed by comparing normalized intervals.
    TimeLink,
    /// Derived by path inference.
    Inferred,
}

/// A directed labeled edge. Only the forward direction is stored; traversal
/// exposes the reverse direction with the inverse relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub relation: TemporalRelation,
    pub provenance: EdgeProvenance,
}

/// An immutable temporal graph over one question and one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    question_time: NodeId,
}

impl TemporalGraph {
    fn assemble(nodes: Vec<Node>, edges: Vec<Edge>, question_time: NodeId) -> Self {
        debug_assert!(nodes.windows(2).all(|w| w[0].id < w[1].id));
        debug_assert_eq!(
            nodes
                .iter()
                .filter(|n| n.kind == NodeKind::QuestionTime)
                .count(),
            1
        );
        TemporalGraph {
            nodes,
            edges,
            question_time,
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn question_time_id(&self) -> NodeId {
        self.question_time
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes
            .binary_search_by_key(&id, |n| n.id)
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.node(id).is_some()
    }

    /// Pretty JSON dump of nodes, edges, and provenance for debugging.
    pub fn to_debug_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization")
    }
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// A constructed graph plus non-fatal ingestion counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphBuild {
    pub graph: TemporalGraph,
    /// Timexes whose value and surface both failed to normalize; their
    /// nodes exist but carry no interval and no time link.
    pub unnormalizable_timexes: usize,
    /// Events dropped because their span lies inside a timex span.
    pub dropped_events: usize,
    /// TLINKs dropped because an endpoint was a dropped event or the link
    /// was self-referential.
    pub dropped_tlinks: usize,
}

fn check_span(text: &str, span: &Span, surface: &str) -> Result<(), GraphError> {
    let slice = (span.start <= span.end)
        .then(|| text.get(span.start..span.end))
        .flatten()
        .ok_or(GraphError::InvalidSpan {
            start: span.start,
            end: span.end,
            len: text.len(),
        })?;
    if slice != surface {
        return Err(GraphError::SurfaceMismatch {
            surface: surface.to_string(),
            start: span.start,
            end: span.end,
        });
    }
    Ok(())
}

/// Builds the full temporal graph for one question/document pair.
///
/// Node ids follow document order with the question-time node as id 0.
/// Every timex with a normalizable value or surface receives a time-link
/// edge to the question-time node labeled by interval comparison.
pub fn build_graph(
    question_text: &str,
    qspan: &QuestionTimeSpan,
    doc: &AnnotatedDocument,
) -> Result<GraphBuild, GraphError> {
    check_span(question_text, &qspan.span, &qspan.surface)?;
    for ev in &doc.events {
        check_span(&doc.text, &ev.span, &ev.surface)?;
    }
    for tx in &doc.timexes {
        check_span(&doc.text, &tx.span, &tx.surface)?;
    }

    // Annotation index -> (kind, span, surface, interval), events first.
    let mut combined: Vec<(usize, NodeKind, Span, String, Option<TimeInterval>)> = Vec::new();
    let mut dropped_events = 0usize;
    let mut unnormalizable = 0usize;

    for (i, ev) in doc.events.iter().enumerate() {
        if doc.timexes.iter().any(|tx| ev.span.within(&tx.span)) {
            log::warn!(
                "dropping event {:?} at {}..{}: span nested inside a timex",
                ev.surface,
                ev.span.start,
                ev.span.end
            );
            dropped_events += 1;
            continue;
        }
        combined.push((i, NodeKind::DocEvent, ev.span, ev.surface.clone(), None));
    }
    for (j, tx) in doc.timexes.iter().enumerate() {
        let interval = tx
            .value
            .as_deref()
            .and_then(|v| chronon::normalize_timex(v, None).ok())
            .or_else(|| chronon::normalize_timex(&tx.surface, None).ok());
        if interval.is_none() {
            log::warn!("timex {:?} has no normalizable value or surface", tx.surface);
            unnormalizable += 1;
        }
        combined.push((
            doc.events.len() + j,
            NodeKind::DocTime,
            tx.span,
            tx.surface.clone(),
            interval,
        ));
    }
    combined.sort_by_key(|(_, _, span, _, _)| (span.start, span.end));

    let mut nodes = vec![Node {
        id: NodeId(0),
        kind: NodeKind::QuestionTime,
        span: qspan.span,
        surface: qspan.surface.clone(),
        interval: Some(qspan.interval),
    }];
    let mut annotation_node = vec![None; doc.annotation_count()];
    for (next_id, (ann_idx, kind, span, surface, interval)) in combined.into_iter().enumerate() {
        let id = NodeId(next_id + 1);
        annotation_node[ann_idx] = Some(id);
        nodes.push(Node {
            id,
            kind,
            span,
            surface,
            interval,
        });
    }

    let mut edges: Vec<Edge> = Vec::new();
    let mut seen: HashSet<(NodeId, NodeId, TemporalRelation)> = HashSet::new();
    let mut dropped_tlinks = 0usize;
    let count = doc.annotation_count();
    for (index, tl) in doc.tlinks.iter().enumerate() {
        for endpoint in [tl.source, tl.target] {
            if endpoint >= count {
                return Err(GraphError::TlinkIndexOutOfRange {
                    index,
                    endpoint,
                    count,
                });
            }
        }
        let relation = TemporalRelation::from_name(&tl.relation)
            .filter(|r| r.is_storable())
            .ok_or_else(|| GraphError::UnknownRelationLabel {
                index,
                label: tl.relation.clone(),
            })?;
        let (src, dst) = match (annotation_node[tl.source], annotation_node[tl.target]) {
            (Some(s), Some(d)) if s != d => (s, d),
            _ => {
                dropped_tlinks += 1;
                continue;
            }
        };
        if seen.insert((src, dst, relation)) {
            edges.push(Edge {
                src,
                dst,
                relation,
                provenance: EdgeProvenance::Annotation,
            });
        }
    }

    // Deterministic interval comparison links every normalized document
    // time to the question time.
    let question_interval = qspan.interval;
    for node in &nodes {
        if node.kind != NodeKind::DocTime {
            continue;
        }
        if let Some(interval) = node.interval {
            let relation = relate(&interval, &question_interval);
            if seen.insert((node.id, NodeId(0), relation)) {
                edges.push(Edge {
                    src: node.id,
                    dst: NodeId(0),
                    relation,
                    provenance: EdgeProvenance::TimeLink,
                });
            }
        }
    }

    Ok(GraphBuild {
        graph: TemporalGraph::assemble(nodes, edges, NodeId(0)),
        unnormalizable_timexes: unnormalizable,
        dropped_events,
        dropped_tlinks,
    })
}

// ---------------------------------------------------------------------------
// Subgraph selection
// ---------------------------------------------------------------------------

/// Fusion subgraph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphVariant {
    /// The graph as constructed.
    Full,
    /// Document-time nodes and their links to the question time.
    Dt2qt,
    /// Dt2qt plus inferred event-to-question-time edges.
    Dte2qt,
    /// Dt2qt plus pairwise relations among all document-time nodes.
    AllTime,
}

/// Selects a fusion subgraph of a full graph. Node ids are preserved.
pub fn select_subgraph(g: &TemporalGraph, variant: GraphVariant) -> TemporalGraph {
    if variant == GraphVariant::Full {
        return g.clone();
    }

    let qt = g.question_time_id();
    let mut nodes: Vec<Node> = g
        .nodes()
        .iter()
        .filter(|n| n.kind != NodeKind::DocEvent)
        .cloned()
        .collect();
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|e| e.provenance == EdgeProvenance::TimeLink && e.dst == qt)
        .copied()
        .collect();

    match variant {
        GraphVariant::Full => unreachable!(),
        GraphVariant::Dt2qt => {}
        GraphVariant::Dte2qt => {
            for (event, relation) in inference::infer_all(g) {
                if !relation.is_storable() {
                    continue;
                }
                nodes.push(g.node(event).expect("inferred node exists").clone());
                edges.push(Edge {
                    src: event,
                    dst: qt,
                    relation,
                    provenance: EdgeProvenance::Inferred,
                });
            }
            nodes.sort_by_key(|n| n.id);
        }
        GraphVariant::AllTime => {
            let times: Vec<&Node> = nodes
                .iter()
                .filter(|n| n.kind == NodeKind::DocTime && n.interval.is_some())
                .collect();
            for (i, a) in times.iter().enumerate() {
                for b in &times[i + 1..] {
                    edges.push(Edge {
                        src: a.id,
                        dst: b.id,
                        relation: relate(&a.interval.unwrap(), &b.interval.unwrap()),
                        provenance: EdgeProvenance::TimeLink,
                    });
                }
            }
        }
    }

    TemporalGraph::assemble(nodes, edges, qt)
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

/// Node/edge counts and mean degrees over stored (forward) edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub nodes: usize,
    pub edges: usize,
    pub mean_in_degree: f64,
    pub mean_out_degree: f64,
}

pub fn graph_stats(g: &TemporalGraph) -> StatsRecord {
    let nodes = g.nodes().len();
    let edges = g.edges().len();
    let mean = if nodes == 0 {
        0.0
    } else {
        edges as f64 / nodes as f64
    };
    StatsRecord {
        nodes,
        edges,
        mean_in_degree: mean,
        mean_out_degree: mean,
    }
}
