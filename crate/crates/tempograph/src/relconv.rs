//! Reference relational graph convolution layer.
//!
//! Computes, for each node i,
//!
//! ```text
//! h_i' = sigma( sum_r sum_{j in N_r(i)} (1/c_{i,r}) W_r h_j  +  W_0 h_i )
//! ```
//!
//! where `N_r(i)` are the in-neighbors of i under relation r in a
//! [`GnnExport`] edge list, `W_r` is the per-relation weight, `W_0` the
//! self-loop weight, and `c_{i,r}` a normalizer (the neighbor count, or 1).
//! Double precision, no training loop: weights are supplied by the caller.

use std::collections::HashMap;

use ndarray::{Array1, Array2};
use thiserror::Error;

use crate::algebra::RELATION_VOCABULARY;
use crate::fusion::GnnExport;
use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RelConvError {
    #[error("expected {expected} relation weights, got {got}")]
    WrongRelationCount { expected: usize, got: usize },
    #[error("weight matrix {index} is {rows}x{cols}, expected {d_out}x{d_in}")]
    WeightShapeMismatch {
        index: usize,
        rows: usize,
        cols: usize,
        d_out: usize,
        d_in: usize,
    },
    #[error("node states are {rows}x{cols}, expected {nodes}x{d_in}")]
    StateShapeMismatch {
        rows: usize,
        cols: usize,
        nodes: usize,
        d_in: usize,
    },
    #[error("edge references node {0} absent from the export")]
    UnknownNode(NodeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Identity,
    Relu,
}

impl Activation {
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::Relu => x.max(0.0),
        }
    }
}

/// Normalizer choice for `c_{i,r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalizer {
    /// `c_{i,r} = |N_r(i)|`.
    Count,
    /// `c_{i,r} = 1`.
    One,
}

/// One convolution layer: per-relation weights, self-loop weight,
/// activation, and normalizer mode.
#[derive(Debug, Clone)]
pub struct RelConvLayer {
    pub relation_weights: Vec<Array2<f64>>,
    pub self_weight: Array2<f64>,
    pub activation: Activation,
    pub normalizer: Normalizer,
}

impl RelConvLayer {
    pub fn new(
        relation_weights: Vec<Array2<f64>>,
        self_weight: Array2<f64>,
        activation: Activation,
        normalizer: Normalizer,
    ) -> Result<Self, RelConvError> {
        if relation_weights.len() != RELATION_VOCABULARY.len() {
            return Err(RelConvError::WrongRelationCount {
                expected: RELATION_VOCABULARY.len(),
                got: relation_weights.len(),
            });
        }
        let (d_out, d_in) = (self_weight.nrows(), self_weight.ncols());
        for (index, w) in relation_weights.iter().enumerate() {
            if w.nrows() != d_out || w.ncols() != d_in {
                return Err(RelConvError::WeightShapeMismatch {
                    index,
                    rows: w.nrows(),
                    cols: w.ncols(),
                    d_out,
                    d_in,
                });
            }
        }
        Ok(RelConvLayer {
            relation_weights,
            self_weight,
            activation,
            normalizer,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.self_weight.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.self_weight.nrows()
    }
}

/// Per-node state vectors, row i aligned with the export's node order.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeStates {
    pub states: Array2<f64>,
}

impl NodeStates {
    pub fn new(states: Array2<f64>) -> Self {
        NodeStates { states }
    }
}

/// One forward pass of the layer over an exported graph.
///
/// Messages flow along stored edge direction: an edge (j, i, r) makes j an
/// in-neighbor of i under r. Nodes with no in-neighbors reduce to
/// `sigma(W_0 h_i)`.
pub fn forward(
    layer: &RelConvLayer,
    export: &GnnExport,
    h: &NodeStates,
) -> Result<NodeStates, RelConvError> {
    let n = export.nodes.len();
    let d_in = layer.input_dim();
    let d_out = layer.output_dim();
    if h.states.nrows() != n || h.states.ncols() != d_in {
        return Err(RelConvError::StateShapeMismatch {
            rows: h.states.nrows(),
            cols: h.states.ncols(),
            nodes: n,
            d_in,
        });
    }

    let row_of: HashMap<NodeId, usize> = export
        .nodes
        .iter()
        .enumerate()
        .map(|(row, node)| (node.id, row))
        .collect();
    // in_neighbors[i][r] = rows j with an edge j -r-> i.
    let mut in_neighbors: Vec<Vec<Vec<usize>>> =
        vec![vec![Vec::new(); RELATION_VOCABULARY.len()]; n];
    for e in &export.edges {
        let src = *row_of.get(&e.src).ok_or(RelConvError::UnknownNode(e.src))?;
        let dst = *row_of.get(&e.dst).ok_or(RelConvError::UnknownNode(e.dst))?;
        in_neighbors[dst][e.relation_id].push(src);
    }

    let mut out = Array2::<f64>::zeros((n, d_out));
    for i in 0..n {
        let mut acc: Array1<f64> = layer.self_weight.dot(&h.states.row(i));
        for (r, neighbors) in in_neighbors[i].iter().enumerate() {
            if neighbors.is_empty() {
                continue;
            }
            let c = match layer.normalizer {
                Normalizer::Count => neighbors.len() as f64,
                Normalizer::One => 1.0,
            };
            for &j in neighbors {
                acc = acc + layer.relation_weights[r].dot(&h.states.row(j)) / c;
            }
        }
        for (k, v) in acc.iter().enumerate() {
            out[[i, k]] = layer.activation.apply(*v);
        }
    }
    Ok(NodeStates::new(out))
}
