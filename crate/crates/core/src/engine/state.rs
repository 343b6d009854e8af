use num_complex::Complex64;

use super::graph::{PortRef, PortedGraph};
use super::WalkError;

/// Walker state: one complex amplitude per `(vertex, port)` coin state,
/// in the slot order of the owning [`PortedGraph`].
#[derive(Debug, Clone, PartialEq)]
pub struct ArcStateVector {
    amps: Vec<Complex64>,
}

impl ArcStateVector {
    pub fn zeros(graph: &PortedGraph) -> Self {
        Self {
            amps: vec![Complex64::new(0.0, 0.0); graph.slot_count()],
        }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn get(&self, graph: &PortedGraph, p: PortRef) -> Result<Complex64, WalkError> {
        let s = graph.slot(p).ok_or(WalkError::UnknownPort(p))?;
        self.amps.get(s).copied().ok_or(WalkError::StateShape {
            expected: graph.slot_count(),
            found: self.amps.len(),
        })
    }

    pub fn set(&mut self, graph: &PortedGraph, p: PortRef, value: Complex64) -> Result<(), WalkError> {
        let s = graph.slot(p).ok_or(WalkError::UnknownPort(p))?;
        let len = self.amps.len();
        let slot = self.amps.get_mut(s).ok_or(WalkError::StateShape {
            expected: graph.slot_count(),
            found: len,
        })?;
        *slot = value;
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Complex64, WalkError> {
        if self.len() != other.len() {
            return Err(WalkError::StateShape {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn scale(&mut self, k: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= k);
    }

    /// Rescales to unit norm. A zero vector is left untouched and `false` returned.
    pub fn normalize(&mut self) -> bool {
        let n = self.norm();
        if n == 0.0 {
            return false;
        }
        self.scale(Complex64::new(1.0 / n, 0.0));
        true
    }

    pub fn check_shape(&self, graph: &PortedGraph) -> Result<(), WalkError> {
        if self.amps.len() == graph.slot_count() {
            Ok(())
        } else {
            Err(WalkError::StateShape {
                expected: graph.slot_count(),
                found: self.amps.len(),
            })
        }
    }
}
