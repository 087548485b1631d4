//! Temporal graph construction and fusion for time-sensitive question
//! answering inputs.
//!
//! The pipeline normalizes time expressions to calendar intervals, relates
//! them with a six-relation interval vocabulary, builds a temporal graph
//! over question and document annotations, infers event-to-question-time
//! relations along shortest paths, and serializes the result as marker-fused
//! input text, GNN-ready exports, or few-shot prompts.

pub mod algebra;
pub mod chronon;
pub mod fusion;
pub mod graph;
pub mod inference;
pub mod pipeline;
pub mod relconv;

pub use algebra::{compose, relate, TemporalRelation, RELATION_VOCABULARY};
pub use chronon::{CalendarDate, ChrononError, Span, TimeInterval, TimePoint};
pub use graph::{
    build_graph, graph_stats, select_subgraph, AnnotatedDocument, GraphVariant, NodeId, NodeKind,
    TemporalGraph,
};
