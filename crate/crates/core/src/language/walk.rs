use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BuildError, LanguageId, QuantumWord, Word};
use crate::engine::{
    region_probability, verify_unitarity, ArcStateVector, CoinTable, PortRef, PortedGraph, Stepper,
    UnitarityReport, VertexId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Spatial,
    Sequential,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Spatial => "spatial",
            Mode::Sequential => "sequential",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spatial" => Ok(Mode::Spatial),
            "sequential" => Ok(Mode::Sequential),
            _ => Err(format!("unknown mode {s:?}; expected spatial or sequential")),
        }
    }
}

/// Where position `j` of the input is written: its `a` weight goes on slot
/// `a`, its `b` weight on slot `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputSlots {
    pub a: PortRef,
    pub b: PortRef,
}

/// Unvalidated pieces of a [`BuiltWalk`].
#[derive(Debug, Clone)]
pub struct WalkParts {
    pub graph: PortedGraph,
    pub coins: CoinTable,
    pub input_map: Vec<InputSlots>,
    pub accept: Vec<VertexId>,
    pub reject: Vec<VertexId>,
    pub steps: usize,
    pub mode: Mode,
    pub language: LanguageId,
    /// Vertices that only hold input (the spatial input nodes or the rail).
    pub input_vertices: Vec<VertexId>,
}

/// Result of running a walk on one input.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub state: ArcStateVector,
    pub accept: f64,
    pub reject: f64,
}

/// A complete acceptor: graph, coins, input layout, accept/reject regions and
/// the prescribed number of steps.
#[derive(Debug, Clone)]
pub struct BuiltWalk {
    parts: WalkParts,
    slots: Vec<[usize; 2]>,
}

impl BuiltWalk {
    /// Checks region disjointness, input-map validity and unitarity.
    pub fn from_parts(parts: WalkParts) -> Result<Self, BuildError> {
        let g = &parts.graph;
        let mut tag = vec![0u8; g.vertex_count()];
        for (list, bit) in [(&parts.accept, 1u8), (&parts.reject, 2u8)] {
            for &v in list {
                let t = tag.get_mut(v.0).ok_or(crate::engine::WalkError::UnknownVertex(v))?;
                *t |= bit;
                if *t == 3 {
                    return Err(BuildError::RegionOverlap(v));
                }
            }
        }
        for &v in &parts.input_vertices {
            if !g.contains(v) {
                return Err(crate::engine::WalkError::UnknownVertex(v).into());
            }
        }
        let mut used = vec![false; g.slot_count()];
        let mut slots = Vec::with_capacity(parts.input_map.len());
        for (j, s) in parts.input_map.iter().enumerate() {
            let mut pair = [0usize; 2];
            for (k, p) in [s.a, s.b].into_iter().enumerate() {
                let slot = g
                    .slot(p)
                    .ok_or_else(|| BuildError::InputMap(format!("position {j} names missing port {p:?}")))?;
                if std::mem::replace(&mut used[slot], true) {
                    return Err(BuildError::InputMap(format!("position {j} reuses port {p:?}")));
                }
                pair[k] = slot;
            }
            slots.push(pair);
        }
        let report = verify_unitarity(g, &parts.coins);
        if !report.is_unitary() {
            return Err(BuildError::NonUnitary(if report.shift_involution {
                report.coin_residual
            } else {
                f64::INFINITY
            }));
        }
        Ok(Self { parts, slots })
    }

    pub fn parts(&self) -> &WalkParts {
        &self.parts
    }

    pub fn graph(&self) -> &PortedGraph {
        &self.parts.graph
    }

    pub fn coins(&self) -> &CoinTable {
        &self.parts.coins
    }

    pub fn input_map(&self) -> &[InputSlots] {
        &self.parts.input_map
    }

    pub fn accept_region(&self) -> &[VertexId] {
        &self.parts.accept
    }

    pub fn reject_region(&self) -> &[VertexId] {
        &self.parts.reject
    }

    pub fn steps(&self) -> usize {
        self.parts.steps
    }

    pub fn mode(&self) -> Mode {
        self.parts.mode
    }

    pub fn language(&self) -> &LanguageId {
        &self.parts.language
    }

    /// Number of input positions the walk can hold.
    pub fn input_length(&self) -> usize {
        self.parts.input_map.len()
    }

    pub fn input_vertices(&self) -> &[VertexId] {
        &self.parts.input_vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.parts.graph.vertex_count()
    }

    /// Vertices excluding the input nodes.
    pub fn processing_vertex_count(&self) -> usize {
        self.vertex_count() - self.parts.input_vertices.len()
    }

    pub fn unitarity(&self) -> UnitarityReport {
        verify_unitarity(&self.parts.graph, &self.parts.coins)
    }

    /// Writes `input` onto positions `0..input.len()` of the input map.
    pub(crate) fn place(&self, input: &QuantumWord) -> Result<ArcStateVector, BuildError> {
        if input.len() > self.input_length() {
            return Err(BuildError::Capacity {
                capacity: self.input_length(),
                found: input.len(),
            });
        }
        input.check_unit_total()?;
        let mut psi = ArcStateVector::zeros(&self.parts.graph);
        let amps = psi.amplitudes_mut();
        for (&[sa, sb], [x, y]) in self.slots.iter().zip(input.positions()) {
            amps[sa] = *x;
            amps[sb] = *y;
        }
        Ok(psi)
    }

    /// Encodes `input` in this walk's mode. Spatial walks need an input of
    /// exactly [`input_length`](Self::input_length); sequential walks accept
    /// any length up to the rail capacity.
    pub fn encode(&self, input: &QuantumWord) -> Result<ArcStateVector, BuildError> {
        match self.mode() {
            Mode::Spatial => super::encode_spatial(self, input),
            Mode::Sequential => super::encode_sequential(self, input),
        }
    }

    /// Reads the first `len` input positions back out of an initial state.
    pub fn decode(&self, psi: &ArcStateVector, len: usize) -> Result<QuantumWord, BuildError> {
        psi.check_shape(&self.parts.graph)?;
        if len > self.input_length() {
            return Err(BuildError::Capacity {
                capacity: self.input_length(),
                found: len,
            });
        }
        let amps = psi.amplitudes();
        QuantumWord::new(self.slots[..len].iter().map(|&[a, b]| [amps[a], amps[b]]).collect())
    }

    pub fn evolve(&self, psi: &ArcStateVector) -> Result<ArcStateVector, BuildError> {
        self.evolve_steps(psi, self.steps())
    }

    pub fn evolve_steps(&self, psi: &ArcStateVector, steps: usize) -> Result<ArcStateVector, BuildError> {
        let mut out = psi.clone();
        Stepper::new(&self.parts.graph, &self.parts.coins).run(&mut out, steps)?;
        Ok(out)
    }

    pub fn accept_probability(&self, psi: &ArcStateVector) -> Result<f64, BuildError> {
        Ok(region_probability(&self.parts.graph, psi, &self.parts.accept)?)
    }

    pub fn reject_probability(&self, psi: &ArcStateVector) -> Result<f64, BuildError> {
        Ok(region_probability(&self.parts.graph, psi, &self.parts.reject)?)
    }

    /// Encodes, evolves for the prescribed steps and measures both regions.
    pub fn run(&self, input: &QuantumWord) -> Result<Outcome, BuildError> {
        let state = self.evolve(&self.encode(input)?)?;
        Ok(Outcome {
            accept: self.accept_probability(&state)?,
            reject: self.reject_probability(&state)?,
            state,
        })
    }

    pub fn run_word(&self, w: &Word) -> Result<Outcome, BuildError> {
        self.run(&QuantumWord::classical(w)?)
    }

    /// Acceptance probability of a classical word. The empty word is
    /// accepted with probability 1 without running the walk.
    pub fn acceptance(&self, w: &Word) -> Result<f64, BuildError> {
        if w.is_empty() {
            return Ok(1.0);
        }
        Ok(self.run_word(w)?.accept)
    }

    /// The normalised accept-region part of the final state for `reference`,
    /// or `None` when no amplitude reaches the accept region.
    pub fn accepting_state(&self, reference: &QuantumWord) -> Result<Option<ArcStateVector>, BuildError> {
        let mut out = self.run(reference)?.state;
        self.project_accept(&mut out);
        Ok(out.normalize().then_some(out))
    }

    /// Zeroes every amplitude outside the accept region.
    pub fn project_accept(&self, psi: &mut ArcStateVector) {
        let g = &self.parts.graph;
        let mut keep = vec![false; g.slot_count()];
        for &v in &self.parts.accept {
            keep[g.port_block(v)].fill(true);
        }
        for (a, k) in psi.amplitudes_mut().iter_mut().zip(keep) {
            if !k {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }

    /// The same walk with accept and reject regions exchanged.
    pub fn complement(&self) -> Result<Self, BuildError> {
        if self.parts.reject.is_empty() {
            return Err(BuildError::NotInvertible);
        }
        let mut parts = self.parts.clone();
        std::mem::swap(&mut parts.accept, &mut parts.reject);
        Ok(Self {
            parts,
            slots: self.slots.clone(),
        })
    }
}

impl PartialEq for BuiltWalk {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.parts, &other.parts);
        a.graph == b.graph
            && a.coins == b.coins
            && a.input_map == b.input_map
            && a.accept == b.accept
            && a.reject == b.reject
            && a.steps == b.steps
            && a.mode == b.mode
            && a.language == b.language
            && a.input_vertices == b.input_vertices
    }
}
