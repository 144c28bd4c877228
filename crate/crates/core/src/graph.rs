//! Decorated graphs: vertices, oriented edges (loops and multi-edges allowed)
//! and the incidence slots derived from them.
//!
//! An edge may leave one endpoint undeclared. Such an edge is a half-open
//! leg: the chain on the missing side has no vertex acting on it. This is how
//! amputated diagrams (for example the star with `N` legs and a single
//! central vertex) are written down.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Identifier of a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub String);

/// Identifier of an edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        VertexId(id.into())
    }
}

impl EdgeId {
    pub fn new(id: impl Into<String>) -> Self {
        EdgeId(id.into())
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Which end of an edge an incidence refers to.
///
/// `Source` carries sign −1 and owns the chain `ε_{-1,e}, ε_{-2,e}, …`;
/// `Target` carries sign +1 and owns `ε_{1,e}, ε_{2,e}, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Source,
    Target,
}

impl Side {
    pub fn sign(self) -> i64 {
        match self {
            Side::Source => -1,
            Side::Target => 1,
        }
    }

    pub fn from_sign(sign: i64) -> Option<Side> {
        match sign {
            -1 => Some(Side::Source),
            1 => Some(Side::Target),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Side::Source => '-',
            Side::Target => '+',
        }
    }
}

/// One incidence of an edge at a vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub edge: EdgeId,
    pub side: Side,
}

impl Slot {
    pub fn sign(&self) -> i64 {
        self.side.sign()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<VertexId>,
}

impl Edge {
    pub fn new(id: &str, source: Option<&str>, target: Option<&str>) -> Self {
        Edge {
            id: EdgeId::new(id),
            source: source.map(VertexId::new),
            target: target.map(VertexId::new),
        }
    }

    pub fn is_loop(&self) -> bool {
        matches!((&self.source, &self.target), (Some(s), Some(t)) if s == t)
    }

    pub fn endpoint(&self, side: Side) -> Option<&VertexId> {
        match side {
            Side::Source => self.source.as_ref(),
            Side::Target => self.target.as_ref(),
        }
    }
}

/// The on-disk graph format. Deserialized as is and checked by [`validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0:?}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0:?}")]
    DuplicateEdge(String),
    #[error("edge {edge:?} references undeclared vertex {vertex:?}")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("edge {0:?} has neither a source nor a target")]
    NoEndpoint(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("vertex {vertex:?} is not a leaf (valence {valence})")]
    NotALeaf { vertex: String, valence: usize },
    #[error("invalid graph: {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<GraphError>),
}

/// Checks every invariant of a raw graph description and reports all
/// violations at once.
pub fn validate(spec: &GraphSpec) -> Result<(), Vec<GraphError>> {
    let mut errors = Vec::new();
    let mut vertices = BTreeSet::new();
    for v in &spec.vertices {
        if !vertices.insert(v) {
            errors.push(GraphError::DuplicateVertex(v.0.clone()));
        }
    }
    let mut edges = BTreeSet::new();
    for e in &spec.edges {
        if !edges.insert(&e.id) {
            errors.push(GraphError::DuplicateEdge(e.id.0.clone()));
        }
        if e.source.is_none() && e.target.is_none() {
            errors.push(GraphError::NoEndpoint(e.id.0.clone()));
        }
        for v in e.source.iter().chain(e.target.iter()) {
            if !vertices.contains(v) {
                errors.push(GraphError::DanglingEndpoint {
                    edge: e.id.0.clone(),
                    vertex: v.0.clone(),
                });
            }
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

/// A validated decorated graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    edge_index: BTreeMap<EdgeId, usize>,
    incidence: BTreeMap<VertexId, Vec<Slot>>,
}

impl Graph {
    pub fn new(spec: GraphSpec) -> Result<Graph, GraphError> {
        validate(&spec).map_err(GraphError::Invalid)?;
        let mut incidence: BTreeMap<VertexId, Vec<Slot>> =
            spec.vertices.iter().map(|v| (v.clone(), Vec::new())).collect();
        let mut edge_index = BTreeMap::new();
        for (i, e) in spec.edges.iter().enumerate() {
            edge_index.insert(e.id.clone(), i);
            for side in [Side::Source, Side::Target] {
                if let Some(v) = e.endpoint(side) {
                    incidence.get_mut(v).expect("validated").push(Slot {
                        edge: e.id.clone(),
                        side,
                    });
                }
            }
        }
        for slots in incidence.values_mut() {
            slots.sort();
        }
        Ok(Graph {
            vertices: spec.vertices,
            edges: spec.edges,
            edge_index,
            incidence,
        })
    }

    pub fn from_json(text: &str) -> Result<Graph, crate::JsonError> {
        let spec: GraphSpec = serde_json::from_str(text)?;
        Ok(Graph::new(spec)?)
    }

    /// The star with `legs` half-open edges `"1"..="legs"` and a single
    /// central vertex `"v"`. With `side == Side::Target` the edges point at
    /// the centre.
    pub fn star(legs: usize, side: Side) -> Graph {
        let v = "v";
        let edges = (1..=legs)
            .map(|k| {
                let id = k.to_string();
                match side {
                    Side::Target => Edge::new(&id, None, Some(v)),
                    Side::Source => Edge::new(&id, Some(v), None),
                }
            })
            .collect();
        Graph::new(GraphSpec {
            vertices: vec![VertexId::new(v)],
            edges,
        })
        .expect("star graph is valid")
    }

    pub fn spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn has_vertex(&self, v: &VertexId) -> bool {
        self.incidence.contains_key(v)
    }

    pub fn edge(&self, id: &EdgeId) -> Option<&Edge> {
        self.edge_index.get(id).map(|&i| &self.edges[i])
    }

    /// Incidence slots at `v`, ordered by edge id and then source before
    /// target. A loop contributes two slots.
    pub fn slots_at(&self, v: &VertexId) -> Result<&[Slot], GraphError> {
        self.incidence
            .get(v)
            .map(Vec::as_slice)
            .ok_or_else(|| GraphError::UnknownVertex(v.0.clone()))
    }

    /// `|S_v| + |T_v| + 2|L_v|`.
    pub fn valence(&self, v: &VertexId) -> Result<usize, GraphError> {
        self.slots_at(v).map(<[Slot]>::len)
    }

    /// Edges leaving `v` (excluding loops).
    pub fn outgoing(&self, v: &VertexId) -> Vec<&Edge> {
        self.edges
            .iter()
            .filter(|e| e.source.as_ref() == Some(v) && !e.is_loop())
            .collect()
    }

    /// Edges entering `v` (excluding loops).
    pub fn incoming(&self, v: &VertexId) -> Vec<&Edge> {
        self.edges
            .iter()
            .filter(|e| e.target.as_ref() == Some(v) && !e.is_loop())
            .collect()
    }

    pub fn loops(&self, v: &VertexId) -> Vec<&Edge> {
        self.edges
            .iter()
            .filter(|e| e.is_loop() && e.source.as_ref() == Some(v))
            .collect()
    }

    /// Whether some edge joins `v` and `w` (in either direction).
    pub fn adjacent(&self, v: &VertexId, w: &VertexId) -> bool {
        self.edges.iter().any(|e| {
            matches!((&e.source, &e.target), (Some(s), Some(t))
                if (s == v && t == w) || (s == w && t == v))
        })
    }

    /// Removes the leaf vertex `v` and leaves its edge half-open.
    pub fn amputate(&self, v: &VertexId) -> Result<Graph, GraphError> {
        let valence = self.valence(v)?;
        let slots = self.slots_at(v)?;
        if valence != 1 || self.edge(&slots[0].edge).is_some_and(Edge::is_loop) {
            return Err(GraphError::NotALeaf {
                vertex: v.0.clone(),
                valence,
            });
        }
        let mut spec = self.spec();
        spec.vertices.retain(|x| x != v);
        for e in &mut spec.edges {
            if e.source.as_ref() == Some(v) {
                e.source = None;
            }
            if e.target.as_ref() == Some(v) {
                e.target = None;
            }
        }
        Graph::new(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::hub;

    #[test]
    fn hub_is_valid_with_five_slots_at_centre() {
        let g = hub();
        let c = VertexId::new("c");
        let slots = g.slots_at(&c).unwrap();
        assert_eq!(slots.len(), 5);
        assert_eq!(g.valence(&c).unwrap(), 5);
        let loop_slots: Vec<_> = slots.iter().filter(|s| s.edge.0 == "t4").collect();
        assert_eq!(loop_slots.len(), 2);
        assert_eq!(loop_slots[0].side, Side::Source);
        assert_eq!(loop_slots[1].side, Side::Target);
        assert_eq!(g.valence(&VertexId::new("a")).unwrap(), 1);
    }

    #[test]
    fn empty_graph_is_valid() {
        assert!(validate(&GraphSpec::default()).is_ok());
        assert!(Graph::new(GraphSpec::default()).is_ok());
    }

    #[test]
    fn reports_every_violation() {
        let spec = GraphSpec {
            vertices: vec![VertexId::new("a"), VertexId::new("a")],
            edges: vec![
                Edge::new("e", Some("a"), Some("zz")),
                Edge::new("e", None, None),
            ],
        };
        let errs = validate(&spec).unwrap_err();
        assert_eq!(errs.len(), 4, "{errs:?}");
        assert!(errs.contains(&GraphError::DanglingEndpoint {
            edge: "e".into(),
            vertex: "zz".into()
        }));
    }

    #[test]
    fn path_middle_has_one_slot_of_each_sign() {
        let g = Graph::new(GraphSpec {
            vertices: ["a", "b", "c"].iter().map(|s| VertexId::new(*s)).collect(),
            edges: vec![Edge::new("x", Some("a"), Some("b")), Edge::new("y", Some("b"), Some("c"))],
        })
        .unwrap();
        let slots = g.slots_at(&VertexId::new("b")).unwrap();
        assert_eq!(slots.len(), 2);
        assert_eq!(slots[0], Slot { edge: EdgeId::new("x"), side: Side::Target });
        assert_eq!(slots[1], Slot { edge: EdgeId::new("y"), side: Side::Source });
    }

    #[test]
    fn isolated_vertex_and_unknown_vertex() {
        let g = Graph::new(GraphSpec {
            vertices: vec![VertexId::new("solo")],
            edges: vec![],
        })
        .unwrap();
        assert!(g.slots_at(&VertexId::new("solo")).unwrap().is_empty());
        assert_eq!(g.valence(&VertexId::new("solo")).unwrap(), 0);
        assert!(matches!(
            g.valence(&VertexId::new("nope")),
            Err(GraphError::UnknownVertex(_))
        ));
    }

    #[test]
    fn star_valence_counts_legs() {
        for n in 0..6 {
            let g = Graph::star(n, Side::Target);
            assert_eq!(g.valence(&VertexId::new("v")).unwrap(), n);
        }
    }

    #[test]
    fn slot_order_is_stable() {
        let g = hub();
        let c = VertexId::new("c");
        assert_eq!(g.slots_at(&c).unwrap(), g.clone().slots_at(&c).unwrap());
    }

    #[test]
    fn amputating_leaves() {
        let g = hub();
        let g2 = g.amputate(&VertexId::new("a")).unwrap();
        assert_eq!(g2.vertices().len(), 3);
        assert_eq!(g2.edge(&EdgeId::new("t1")).unwrap().target, None);
        assert_eq!(g2.valence(&VertexId::new("c")).unwrap(), 5);
        assert!(matches!(
            g.amputate(&VertexId::new("c")),
            Err(GraphError::NotALeaf { .. })
        ));
    }

    #[test]
    fn json_roundtrip_with_half_open_edges() {
        let text = r#"{"vertices":["v"],"edges":[{"id":"1","target":"v"},{"id":"2","source":null,"target":"v"}]}"#;
        let g = Graph::from_json(text).unwrap();
        assert_eq!(g.valence(&VertexId::new("v")).unwrap(), 2);
        let back = serde_json::to_string(&g.spec()).unwrap();
        assert_eq!(Graph::from_json(&back).unwrap(), g);
    }
}
