//! Exact state-vector simulation of coined discrete-time quantum walks.
//!
//! One step is `U = S·C`: every vertex applies its coin to its own port block,
//! then the flip-flop shift `S` exchanges the amplitudes sitting on the two
//! port-ends of each edge. Nothing global is ever materialised; a step costs
//! `Σ deg(v)²` multiplications plus one permutation.
//!
//! Amplitude on slot `(v, p)` after a shift means "has just arrived at `v`
//! through port `p`". The next coin at `v` decides which port it leaves by.

mod coin;
mod graph;
mod state;

use num_complex::Complex64;
use thiserror::Error;

pub use coin::{
    conveyor_coin, grover_coin, hadamard_merge_coin, permutation_coin, CoinMatrix, CoinSpec,
    CoinTable, MAX_COIN_DIM,
};
pub use graph::{Edge, GraphBuilder, PortRef, PortedGraph, VertexId};
pub use state::ArcStateVector;

/// Coin residual above which a coin table is rejected.
pub const UNITARITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("invalid coin dimension {0}")]
    InvalidDimension(usize),
    #[error("coin matrix is not square: expected {expected} columns, found {found}")]
    CoinShape { expected: usize, found: usize },
    #[error("port permutation is not a bijection")]
    NotAPermutation,
    #[error("port permutation phase does not have unit modulus")]
    PhaseModulus,
    #[error("vertex {0:?} has degree 0")]
    ZeroDegree(VertexId),
    #[error("port {0:?} does not exist")]
    UnknownPort(PortRef),
    #[error("port {0:?} is bound by more than one edge")]
    DuplicatePort(PortRef),
    #[error("port {0:?} is not bound by any edge")]
    UnboundPort(PortRef),
    #[error("graph is too large")]
    TooLarge,
    #[error("coin table covers {coins} vertices but graph has {vertices}")]
    CoinCoverage { vertices: usize, coins: usize },
    #[error("vertex {vertex:?} has degree {degree} but its coin has dimension {coin}")]
    CoinDegree { vertex: VertexId, degree: usize, coin: usize },
    #[error("state has {found} amplitudes, graph has {expected} port-ends")]
    StateShape { expected: usize, found: usize },
    #[error("vertex {0:?} is not in the graph")]
    UnknownVertex(VertexId),
}

/// Outcome of [`verify_unitarity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitarityReport {
    /// `max_v ‖C_v†C_v − I‖_max`.
    pub coin_residual: f64,
    /// The shift is a fixed-point-free permutation involution on port-ends.
    pub shift_involution: bool,
}

impl UnitarityReport {
    pub fn is_unitary(&self) -> bool {
        self.shift_involution && self.coin_residual < UNITARITY_TOLERANCE
    }
}

pub fn verify_unitarity(graph: &PortedGraph, coins: &CoinTable) -> UnitarityReport {
    let coin_residual = coins
        .matrices()
        .iter()
        .map(CoinMatrix::unitarity_residual)
        .fold(0.0, f64::max);
    UnitarityReport {
        coin_residual,
        shift_involution: graph.shift_is_involution(),
    }
}

/// Reusable stepping buffer. Holding one avoids an allocation per step in
/// long sweeps.
#[derive(Debug, Clone)]
pub struct Stepper<'g> {
    graph: &'g PortedGraph,
    coins: &'g CoinTable,
    scratch: Vec<Complex64>,
}

impl<'g> Stepper<'g> {
    pub fn new(graph: &'g PortedGraph, coins: &'g CoinTable) -> Self {
        Self {
            graph,
            coins,
            scratch: vec![Complex64::new(0.0, 0.0); graph.slot_count()],
        }
    }

    /// In-place `ψ ← S·C·ψ`.
    pub fn step(&mut self, psi: &mut ArcStateVector) -> Result<(), WalkError> {
        psi.check_shape(self.graph)?;
        let amps = psi.amplitudes_mut();
        for v in self.graph.vertices() {
            let block = self.graph.port_block(v);
            self.coins
                .matrix(v)
                .apply(&amps[block.clone()], &mut self.scratch[block]);
        }
        for (&t, &a) in self.graph.partner().iter().zip(&self.scratch) {
            amps[t] = a;
        }
        Ok(())
    }

    /// In-place `ψ ← C†·S·ψ`, the inverse of [`Stepper::step`].
    pub fn step_adjoint(&mut self, psi: &mut ArcStateVector) -> Result<(), WalkError> {
        psi.check_shape(self.graph)?;
        let amps = psi.amplitudes_mut();
        for (s, &t) in self.graph.partner().iter().enumerate() {
            self.scratch[s] = amps[t];
        }
        for v in self.graph.vertices() {
            let block = self.graph.port_block(v);
            self.coins
                .matrix(v)
                .apply_adjoint(&self.scratch[block.clone()], &mut amps[block]);
        }
        Ok(())
    }

    pub fn run(&mut self, psi: &mut ArcStateVector, steps: usize) -> Result<(), WalkError> {
        psi.check_shape(self.graph)?;
        for _ in 0..steps {
            self.step(psi)?;
        }
        Ok(())
    }
}

/// One walk step `S·C·ψ`.
pub fn step(graph: &PortedGraph, coins: &CoinTable, psi: &ArcStateVector) -> Result<ArcStateVector, WalkError> {
    let mut out = psi.clone();
    Stepper::new(graph, coins).step(&mut out)?;
    Ok(out)
}

/// Applies the shift alone.
pub fn shift(graph: &PortedGraph, psi: &ArcStateVector) -> Result<ArcStateVector, WalkError> {
    psi.check_shape(graph)?;
    let mut out = psi.clone();
    let src = psi.amplitudes();
    for (s, &t) in graph.partner().iter().enumerate() {
        out.amplitudes_mut()[t] = src[s];
    }
    Ok(out)
}

/// `steps`-fold application of [`step`]; zero steps returns `ψ` unchanged.
pub fn evolve(
    graph: &PortedGraph,
    coins: &CoinTable,
    psi: &ArcStateVector,
    steps: usize,
) -> Result<ArcStateVector, WalkError> {
    let mut out = psi.clone();
    Stepper::new(graph, coins).run(&mut out, steps)?;
    Ok(out)
}

/// Total probability on every port of every vertex in `region`. Repeated
/// vertices are counted once.
pub fn region_probability(
    graph: &PortedGraph,
    psi: &ArcStateVector,
    region: &[VertexId],
) -> Result<f64, WalkError> {
    psi.check_shape(graph)?;
    let mut seen = vec![false; graph.vertex_count()];
    let mut total = 0.0;
    for &v in region {
        if !graph.contains(v) {
            return Err(WalkError::UnknownVertex(v));
        }
        if std::mem::replace(&mut seen[v.0], true) {
            continue;
        }
        total += psi.amplitudes()[graph.port_block(v)]
            .iter()
            .map(Complex64::norm_sqr)
            .sum::<f64>();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pure_shift_between_two_vertices() {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(1);
        let u = b.add_vertex(1);
        b.link(v, 0, u, 0);
        let g = b.build().unwrap();
        let coins = CoinTable::new(&g, vec![CoinSpec::Identity { d: 1 }; 2]).unwrap();
        let mut psi = ArcStateVector::zeros(&g);
        psi.set(&g, PortRef::new(v, 0), one(1.0)).unwrap();
        let out = step(&g, &coins, &psi).unwrap();
        assert_eq!(out.get(&g, PortRef::new(u, 0)).unwrap(), one(1.0));
        assert_eq!(out.get(&g, PortRef::new(v, 0)).unwrap(), one(0.0));
    }

    /// Degree-1 source into a Grover(4) hub whose other ports lead through a
    /// swap collector into a single sink: three steps move everything to the sink.
    #[test]
    fn grover_funnel_three_steps() {
        let mut b = GraphBuilder::new();
        let src = b.add_vertex(1);
        let src2 = b.add_vertex(1);
        let hub = b.add_vertex(4);
        let col0 = b.add_vertex(2);
        let col1 = b.add_vertex(2);
        let sink = b.add_vertex(2);
        b.link(src, 0, hub, 0)
            .link(src2, 0, hub, 1)
            .link(hub, 2, col0, 0)
            .link(hub, 3, col1, 0)
            .link(col0, 1, sink, 0)
            .link(col1, 1, sink, 1);
        let g = b.build().unwrap();
        let coins = CoinTable::new(
            &g,
            vec![
                CoinSpec::Identity { d: 1 },
                CoinSpec::Identity { d: 1 },
                CoinSpec::Grover { d: 4 },
                CoinSpec::swap(),
                CoinSpec::swap(),
                CoinSpec::Grover { d: 2 },
            ],
        )
        .unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut psi = ArcStateVector::zeros(&g);
        psi.set(&g, PortRef::new(src, 0), one(s)).unwrap();
        psi.set(&g, PortRef::new(src2, 0), one(s)).unwrap();
        let out = evolve(&g, &coins, &psi, 3).unwrap();
        assert!((region_probability(&g, &out, &[sink]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_zero_steps_is_identity() {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(2);
        b.link(v, 0, v, 1);
        let g = b.build().unwrap();
        let coins = CoinTable::new(&g, vec![CoinSpec::Grover { d: 2 }]).unwrap();
        let psi = ArcStateVector::from_amplitudes(vec![one(0.6), Complex64::new(0.0, 0.8)]);
        assert_eq!(evolve(&g, &coins, &psi, 0).unwrap(), psi);
    }

    #[test]
    fn shape_errors() {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(2);
        b.link(v, 0, v, 1);
        let g = b.build().unwrap();
        let coins = CoinTable::new(&g, vec![CoinSpec::Grover { d: 2 }]).unwrap();
        let bad = ArcStateVector::from_amplitudes(vec![one(1.0)]);
        assert!(matches!(step(&g, &coins, &bad), Err(WalkError::StateShape { .. })));
        assert!(matches!(
            CoinTable::new(&g, vec![CoinSpec::Grover { d: 3 }]),
            Err(WalkError::CoinDegree { .. })
        ));
        assert!(matches!(CoinTable::new(&g, vec![]), Err(WalkError::CoinCoverage { .. })));
    }

    #[test]
    fn region_probability_basics() {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(2);
        let u = b.add_vertex(2);
        b.link(v, 0, u, 0).link(v, 1, u, 1);
        let g = b.build().unwrap();
        let psi = ArcStateVector::from_amplitudes(vec![one(0.5); 4]);
        assert!((region_probability(&g, &psi, &[v, u]).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(region_probability(&g, &psi, &[]).unwrap(), 0.0);
        assert!((region_probability(&g, &psi, &[v, v]).unwrap() - 0.5).abs() < 1e-12);
        assert!(matches!(
            region_probability(&g, &psi, &[VertexId(9)]),
            Err(WalkError::UnknownVertex(_))
        ));
    }

    #[test]
    fn unitarity_gate() {
        let mut b = GraphBuilder::new();
        let v = b.add_vertex(4);
        let u = b.add_vertex(4);
        for p in 0..4 {
            b.link(v, p, u, p);
        }
        let g = b.build().unwrap();
        let good = CoinTable::new(&g, vec![CoinSpec::Grover { d: 4 }, CoinSpec::HadamardMerge]).unwrap();
        assert!(verify_unitarity(&g, &good).is_unitary());
        let skew = CoinSpec::Custom {
            matrix: vec![
                vec![one(1.0), one(1.0), one(0.0), one(0.0)],
                vec![one(0.0), one(1.0), one(0.0), one(0.0)],
                vec![one(0.0), one(0.0), one(1.0), one(0.0)],
                vec![one(0.0), one(0.0), one(0.0), one(1.0)],
            ],
        };
        let bad = good.with_coin(u, skew).unwrap();
        let report = verify_unitarity(&g, &bad);
        assert!(report.coin_residual >= UNITARITY_TOLERANCE);
        assert!(!report.is_unitary());
    }
}
