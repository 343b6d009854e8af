//! Local coin operators.
//!
//! A coin acts on the port block of a single vertex. Port conventions for the
//! four-port gadgets are fixed:
//!
//! * [`CoinSpec::HadamardMerge`]: `(in-a, in-b, out-accept, out-reject)`
//! * [`CoinSpec::Conveyor`]: `(prev-a, prev-b, next-a, next-b)`

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::graph::{PortedGraph, VertexId};
use super::WalkError;

/// Largest coin dimension accepted from external input.
pub const MAX_COIN_DIM: usize = 1024;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CoinMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, WalkError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(WalkError::InvalidDimension(0));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(WalkError::CoinShape {
                expected: dim,
                found: r.len(),
            });
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    /// `out = self · input`.
    pub fn apply(&self, input: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(input.len(), self.dim);
        for (row, o) in self.data.chunks_exact(self.dim).zip(out.iter_mut()) {
            *o = row.iter().zip(input).map(|(m, x)| m * x).sum();
        }
    }

    /// `out = self† · input`.
    pub fn apply_adjoint(&self, input: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(input.len(), self.dim);
        out.fill(ZERO);
        for (row, x) in self.data.chunks_exact(self.dim).zip(input) {
            for (o, m) in out.iter_mut().zip(row) {
                *o += m.conj() * x;
            }
        }
    }

    pub fn mul_vec(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.dim];
        self.apply(input, &mut out);
        out
    }

    /// `max |(C†C − I)_ij|`.
    pub fn unitarity_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    acc -= ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }
}

/// The `d`-dimensional Grover diffusion coin: `(2−d)/d` on the diagonal and
/// `2/d` elsewhere.
pub fn grover_coin(d: usize) -> Result<CoinMatrix, WalkError> {
    if d == 0 || d > MAX_COIN_DIM {
        return Err(WalkError::InvalidDimension(d));
    }
    let df = d as f64;
    let off = Complex64::new(2.0 / df, 0.0);
    let diag = Complex64::new((2.0 - df) / df, 0.0);
    let mut m = CoinMatrix {
        dim: d,
        data: vec![off; d * d],
    };
    for i in 0..d {
        m.set(i, i, diag);
    }
    Ok(m)
}

/// Four-port merge coin applying a Hadamard between the input pair and the
/// output pair, in both directions.
pub fn hadamard_merge_coin() -> CoinMatrix {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut m = CoinMatrix::zeros(4);
    // inputs (0, 1) -> outputs (2, 3)
    m.set(2, 0, h);
    m.set(2, 1, h);
    m.set(3, 0, h);
    m.set(3, 1, -h);
    // outputs (2, 3) -> inputs (0, 1)
    m.set(0, 2, h);
    m.set(0, 3, h);
    m.set(1, 2, h);
    m.set(1, 3, -h);
    m
}

/// `σx ⊗ I₂`: swaps the `prev` pair with the `next` pair, lanes preserved.
pub fn conveyor_coin() -> CoinMatrix {
    let mut m = CoinMatrix::zeros(4);
    m.set(2, 0, ONE);
    m.set(3, 1, ONE);
    m.set(0, 2, ONE);
    m.set(1, 3, ONE);
    m
}

/// Coin sending input port `i` to output port `perm[i]` with phase `phases[i]`.
pub fn permutation_coin(perm: &[usize], phases: &[Complex64]) -> Result<CoinMatrix, WalkError> {
    let d = perm.len();
    if d == 0 || d > MAX_COIN_DIM {
        return Err(WalkError::InvalidDimension(d));
    }
    if phases.len() != d {
        return Err(WalkError::CoinShape {
            expected: d,
            found: phases.len(),
        });
    }
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || std::mem::replace(&mut seen[p], true) {
            return Err(WalkError::NotAPermutation);
        }
    }
    if phases.iter().any(|z| (z.norm() - 1.0).abs() > 1e-12) {
        return Err(WalkError::PhaseModulus);
    }
    let mut m = CoinMatrix::zeros(d);
    for (i, (&p, &z)) in perm.iter().zip(phases).enumerate() {
        m.set(p, i, z);
    }
    Ok(m)
}

/// Declarative description of a vertex coin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoinSpec {
    Grover { d: usize },
    HadamardMerge,
    Conveyor,
    PortPermutation { perm: Vec<usize>, phases: Vec<Complex64> },
    Identity { d: usize },
    Custom { matrix: Vec<Vec<Complex64>> },
}

impl CoinSpec {
    /// Two-port swap, the coin on collector and delay nodes.
    pub fn swap() -> Self {
        Self::permutation(vec![1, 0])
    }

    /// Phase-free port permutation.
    pub fn permutation(perm: Vec<usize>) -> Self {
        let phases = vec![ONE; perm.len()];
        Self::PortPermutation { perm, phases }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Grover { d } | Self::Identity { d } => *d,
            Self::HadamardMerge | Self::Conveyor => 4,
            Self::PortPermutation { perm, .. } => perm.len(),
            Self::Custom { matrix } => matrix.len(),
        }
    }

    pub fn matrix(&self) -> Result<CoinMatrix, WalkError> {
        match self {
            Self::Grover { d } => grover_coin(*d),
            Self::HadamardMerge => Ok(hadamard_merge_coin()),
            Self::Conveyor => Ok(conveyor_coin()),
            Self::PortPermutation { perm, phases } => permutation_coin(perm, phases),
            Self::Identity { d } => {
                if *d == 0 || *d > MAX_COIN_DIM {
                    Err(WalkError::InvalidDimension(*d))
                } else {
                    Ok(CoinMatrix::identity(*d))
                }
            }
            Self::Custom { matrix } => {
                if matrix.len() > MAX_COIN_DIM {
                    return Err(WalkError::InvalidDimension(matrix.len()));
                }
                CoinMatrix::from_rows(matrix)
            }
        }
    }
}

/// Per-vertex coin assignment with matrices realised up front.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinTable {
    specs: Vec<CoinSpec>,
    matrices: Vec<CoinMatrix>,
}

impl CoinTable {
    /// Checks coverage and dimensions against `graph`. Unitarity is not
    /// checked here; see [`verify_unitarity`](super::verify_unitarity).
    pub fn new(graph: &PortedGraph, specs: Vec<CoinSpec>) -> Result<Self, WalkError> {
        if specs.len() != graph.vertex_count() {
            return Err(WalkError::CoinCoverage {
                vertices: graph.vertex_count(),
                coins: specs.len(),
            });
        }
        let mut matrices = Vec::with_capacity(specs.len());
        for (v, spec) in graph.vertices().zip(&specs) {
            let degree = graph.degree(v);
            if spec.dimension() != degree {
                return Err(WalkError::CoinDegree {
                    vertex: v,
                    degree,
                    coin: spec.dimension(),
                });
            }
            matrices.push(spec.matrix()?);
        }
        Ok(Self { specs, matrices })
    }

    pub fn spec(&self, v: VertexId) -> &CoinSpec {
        &self.specs[v.0]
    }

    pub fn specs(&self) -> &[CoinSpec] {
        &self.specs
    }

    pub fn matrix(&self, v: VertexId) -> &CoinMatrix {
        &self.matrices[v.0]
    }

    pub fn matrices(&self) -> &[CoinMatrix] {
        &self.matrices
    }

    /// A copy with one vertex's coin replaced.
    pub fn with_coin(&self, v: VertexId, spec: CoinSpec) -> Result<Self, WalkError> {
        let m = spec.matrix()?;
        let old = self.matrices.get(v.0).ok_or(WalkError::UnknownVertex(v))?;
        if m.dim() != old.dim() {
            return Err(WalkError::CoinDegree {
                vertex: v,
                degree: old.dim(),
                coin: m.dim(),
            });
        }
        let mut next = self.clone();
        next.specs[v.0] = spec;
        next.matrices[v.0] = m;
        Ok(next)
    }
}
