//! JSON form of a [`BuiltWalk`].
//!
//! ```json
//! {
//!   "version": 1,
//!   "mode": "spatial",
//!   "language": "eq",
//!   "steps": 3,
//!   "vertices": [{"id": 0, "degree": 1, "coin": {"kind": "identity", "d": 1}}, ...],
//!   "edges": [[0, 0, 8, 0], ...],
//!   "accept": [18],
//!   "reject": [19],
//!   "input_map": [[[0, 0], [1, 0]], ...],
//!   "input_vertices": [0, 1, ...]
//! }
//! ```
//!
//! Edges are `[v, a, u, b]`: port `a` of `v` joined to port `b` of `u`.
//! Input map entries are `[[a_vertex, a_port], [b_vertex, b_port]]`.
//! Complex numbers are `[re, im]`.

use serde::{Deserialize, Serialize};

use super::walk::{InputSlots, Mode, WalkParts};
use super::{BuildError, BuiltWalk, LanguageId};
use crate::engine::{CoinSpec, CoinTable, GraphBuilder, PortRef, VertexId, MAX_COIN_DIM};

pub const FORMAT_VERSION: u32 = 1;

/// Upper bound on total port-ends in a loaded walk.
pub const MAX_SLOTS: usize = 1 << 20;

/// Upper bound on the prescribed step count of a loaded walk.
pub const MAX_STEPS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDocument {
    pub id: usize,
    pub degree: usize,
    pub coin: CoinSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkDocument {
    pub version: u32,
    pub mode: Mode,
    pub language: LanguageId,
    pub steps: usize,
    pub vertices: Vec<VertexDocument>,
    pub edges: Vec<[usize; 4]>,
    pub accept: Vec<usize>,
    pub reject: Vec<usize>,
    pub input_map: Vec<[[usize; 2]; 2]>,
    #[serde(default)]
    pub input_vertices: Vec<usize>,
}

fn port(p: [usize; 2]) -> PortRef {
    PortRef::new(VertexId(p[0]), p[1])
}

fn pair(p: PortRef) -> [usize; 2] {
    [p.vertex.0, p.port]
}

fn invalid(msg: impl Into<String>) -> BuildError {
    BuildError::Document(msg.into())
}

impl WalkDocument {
    pub fn from_walk(walk: &BuiltWalk) -> Self {
        let g = walk.graph();
        Self {
            version: FORMAT_VERSION,
            mode: walk.mode(),
            language: walk.language().clone(),
            steps: walk.steps(),
            vertices: g
                .vertices()
                .map(|v| VertexDocument {
                    id: v.0,
                    degree: g.degree(v),
                    coin: walk.coins().spec(v).clone(),
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| [e.0.vertex.0, e.0.port, e.1.vertex.0, e.1.port])
                .collect(),
            accept: walk.accept_region().iter().map(|v| v.0).collect(),
            reject: walk.reject_region().iter().map(|v| v.0).collect(),
            input_map: walk.input_map().iter().map(|s| [pair(s.a), pair(s.b)]).collect(),
            input_vertices: walk.input_vertices().iter().map(|v| v.0).collect(),
        }
    }

    /// Validates the document and rebuilds the walk.
    pub fn into_walk(self) -> Result<BuiltWalk, BuildError> {
        if self.version != FORMAT_VERSION {
            return Err(invalid(format!("unsupported version {}", self.version)));
        }
        if self.steps > MAX_STEPS {
            return Err(invalid(format!("steps {} exceeds {MAX_STEPS}", self.steps)));
        }
        let mut vertices = self.vertices;
        vertices.sort_by_key(|v| v.id);
        if let Some((i, v)) = vertices.iter().enumerate().find(|(i, v)| v.id != *i) {
            return Err(invalid(format!("vertex ids must be 0..{}, found {} at {i}", vertices.len(), v.id)));
        }
        let mut total = 0usize;
        for v in &vertices {
            if v.degree > MAX_COIN_DIM {
                return Err(invalid(format!("vertex {} degree {} exceeds {MAX_COIN_DIM}", v.id, v.degree)));
            }
            total += v.degree;
            if total > MAX_SLOTS {
                return Err(invalid(format!("more than {MAX_SLOTS} port-ends")));
            }
        }

        let mut b = GraphBuilder::new();
        for v in &vertices {
            b.add_vertex(v.degree);
        }
        for [v, a, u, p] in self.edges {
            b.link(VertexId(v), a, VertexId(u), p);
        }
        let graph = b.build()?;
        let coins = CoinTable::new(&graph, vertices.into_iter().map(|v| v.coin).collect())?;
        let ids = |xs: Vec<usize>| xs.into_iter().map(VertexId).collect::<Vec<_>>();
        BuiltWalk::from_parts(WalkParts {
            graph,
            coins,
            input_map: self
                .input_map
                .into_iter()
                .map(|[a, b]| InputSlots { a: port(a), b: port(b) })
                .collect(),
            accept: ids(self.accept),
            reject: ids(self.reject),
            steps: self.steps,
            mode: self.mode,
            language: self.language,
            input_vertices: ids(self.input_vertices),
        })
    }
}

/// Parses and validates a walk document.
pub fn parse_walk(json: &str) -> Result<BuiltWalk, BuildError> {
    let doc: WalkDocument = serde_json::from_str(json).map_err(|e| invalid(e.to_string()))?;
    doc.into_walk()
}

impl BuiltWalk {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&WalkDocument::from_walk(self)).expect("walk documents always serialise")
    }
}
