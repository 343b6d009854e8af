//! Port-labelled undirected multigraphs.
//!
//! Every vertex owns an ordered list of ports `0..degree`. An edge binds two
//! port-ends together, so the edge set is a perfect matching on port-ends.
//! Parallel edges and self-loops (two distinct ports of one vertex) are both
//! allowed. Port-ends are laid out contiguously per vertex, which gives each
//! `(vertex, port)` pair a dense slot index used by [`ArcStateVector`].
//!
//! [`ArcStateVector`]: crate::engine::ArcStateVector

use serde::{Deserialize, Serialize};

use super::WalkError;

/// Index of a vertex inside a [`PortedGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

/// One port-end: port `port` of vertex `vertex`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PortRef {
    pub vertex: VertexId,
    pub port: usize,
}

impl PortRef {
    pub fn new(vertex: VertexId, port: usize) -> Self {
        Self { vertex, port }
    }
}

/// An undirected edge between two port-ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge(pub PortRef, pub PortRef);

/// Immutable port-labelled multigraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PortedGraph {
    degrees: Vec<usize>,
    /// `offsets[v]` is the slot of port 0 of `v`; `offsets[len]` is the slot count.
    offsets: Vec<usize>,
    /// Slot of the port-end on the other side of each slot's edge.
    partner: Vec<usize>,
    edges: Vec<Edge>,
}

impl PortedGraph {
    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Total number of port-ends, i.e. the dimension of the walk's state space.
    pub fn slot_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degrees[v.0]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.0 < self.degrees.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.degrees.len()).map(VertexId)
    }

    /// Slot range holding the ports of `v`.
    pub fn port_block(&self, v: VertexId) -> std::ops::Range<usize> {
        self.offsets[v.0]..self.offsets[v.0 + 1]
    }

    pub fn slot(&self, p: PortRef) -> Option<usize> {
        if self.contains(p.vertex) && p.port < self.degrees[p.vertex.0] {
            Some(self.offsets[p.vertex.0] + p.port)
        } else {
            None
        }
    }

    /// Inverse of [`PortedGraph::slot`].
    pub fn port_of_slot(&self, slot: usize) -> PortRef {
        let v = self.offsets.partition_point(|&o| o <= slot) - 1;
        PortRef::new(VertexId(v), slot - self.offsets[v])
    }

    /// The flip-flop partner table: `partner()[s]` is the far end of slot `s`.
    pub fn partner(&self) -> &[usize] {
        &self.partner
    }

    /// The port-end joined to `p`.
    pub fn neighbour(&self, p: PortRef) -> Option<PortRef> {
        self.slot(p).map(|s| self.port_of_slot(self.partner[s]))
    }

    /// True when the shift is a fixed-point-free involution on slots.
    pub fn shift_is_involution(&self) -> bool {
        self.partner
            .iter()
            .enumerate()
            .all(|(s, &t)| t != s && t < self.partner.len() && self.partner[t] == s)
    }
}

/// Incremental constructor for [`PortedGraph`].
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    degrees: Vec<usize>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, degree: usize) -> VertexId {
        self.degrees.push(degree);
        VertexId(self.degrees.len() - 1)
    }

    pub fn connect(&mut self, a: PortRef, b: PortRef) -> &mut Self {
        self.edges.push(Edge(a, b));
        self
    }

    /// Joins port `pa` of `va` to port `pb` of `vb`.
    pub fn link(&mut self, va: VertexId, pa: usize, vb: VertexId, pb: usize) -> &mut Self {
        self.connect(PortRef::new(va, pa), PortRef::new(vb, pb))
    }

    pub fn vertex_count(&self) -> usize {
        self.degrees.len()
    }

    /// Validates the perfect-matching invariant and freezes the graph.
    pub fn build(self) -> Result<PortedGraph, WalkError> {
        let GraphBuilder { degrees, edges } = self;
        if let Some(v) = degrees.iter().position(|&d| d == 0) {
            return Err(WalkError::ZeroDegree(VertexId(v)));
        }
        let mut offsets = Vec::with_capacity(degrees.len() + 1);
        let mut total = 0usize;
        offsets.push(0);
        for &d in &degrees {
            total = total.checked_add(d).ok_or(WalkError::TooLarge)?;
            offsets.push(total);
        }
        let slot = |p: PortRef| -> Result<usize, WalkError> {
            match degrees.get(p.vertex.0) {
                Some(&d) if p.port < d => Ok(offsets[p.vertex.0] + p.port),
                _ => Err(WalkError::UnknownPort(p)),
            }
        };
        let mut partner = vec![usize::MAX; total];
        for &Edge(a, b) in &edges {
            let (sa, sb) = (slot(a)?, slot(b)?);
            if sa == sb {
                return Err(WalkError::DuplicatePort(a));
            }
            for (s, p) in [(sa, a), (sb, b)] {
                if partner[s] != usize::MAX {
                    return Err(WalkError::DuplicatePort(p));
                }
            }
            partner[sa] = sb;
            partner[sb] = sa;
        }
        if let Some(s) = partner.iter().position(|&t| t == usize::MAX) {
            let v = offsets.partition_point(|&o| o <= s) - 1;
            return Err(WalkError::UnboundPort(PortRef::new(VertexId(v), s - offsets[v])));
        }
        Ok(PortedGraph {
            degrees,
            offsets,
            partner,
            edges,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> PortedGraph {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(1);
        let u = b.add_vertex(1);
        b.link(v, 0, u, 0);
        b.build().unwrap()
    }

    #[test]
    fn slots_are_dense() {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(2);
        let u = b.add_vertex(3);
        b.link(v, 0, u, 2).link(v, 1, u, 0).link(u, 1, u, 1);
        assert!(matches!(b.build(), Err(WalkError::DuplicatePort(_))));

        let mut b = GraphBuilder::new();
        let v = b.add_vertex(2);
        let u = b.add_vertex(4);
        b.link(v, 0, u, 2).link(v, 1, u, 0).link(u, 1, u, 3);
        let g = b.build().unwrap();
        assert_eq!(g.slot_count(), 6);
        assert_eq!(g.slot(PortRef::new(u, 0)), Some(2));
        assert_eq!(g.port_of_slot(5), PortRef::new(u, 3));
        assert_eq!(g.neighbour(PortRef::new(u, 1)), Some(PortRef::new(u, 3)));
        assert!(g.shift_is_involution());
    }

    #[test]
    fn parallel_edges_allowed() {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(2);
        let u = b.add_vertex(2);
        b.link(v, 0, u, 0).link(v, 1, u, 1);
        let g = b.build().unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn rejects_broken_matchings() {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(2);
        let u = b.add_vertex(1);
        b.link(v, 0, u, 0);
        assert!(matches!(b.build(), Err(WalkError::UnboundPort(p)) if p == PortRef::new(v, 1)));

        let mut b = GraphBuilder::new();
        let v = b.add_vertex(1);
        let u = b.add_vertex(1);
        b.link(v, 0, u, 0).link(v, 0, u, 0);
        assert!(matches!(b.build(), Err(WalkError::DuplicatePort(_))));

        let mut b = GraphBuilder::new();
        b.add_vertex(0);
        assert!(matches!(b.build(), Err(WalkError::ZeroDegree(_))));

        let mut b = GraphBuilder::new();
        let v = b.add_vertex(1);
        b.link(v, 0, VertexId(7), 0);
        assert!(matches!(b.build(), Err(WalkError::UnknownPort(_))));
    }

    #[test]
    fn pair_shift() {
        let g = pair();
        assert_eq!(g.partner(), &[1, 0]);
    }
}
