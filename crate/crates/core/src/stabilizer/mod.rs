//! Stabilizer tableau simulation.

mod clifford;
mod pauli;
mod tableau;

pub use clifford::{Gate1, LocalClifford, LocalCliffordFrame};
pub use pauli::{Pauli1, PauliString, Sign};
pub(crate) use tableau::gf2_rank;
pub use tableau::{EmitMode, Gate, Measurement, Tableau};

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StabilizerError {
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("{0} qubits exceeds the supported maximum")]
    TooManyQubits(usize),
    #[error("two-qubit gate applied to qubit {0} twice")]
    RepeatedQubit(usize),
    #[error("expected width {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("measured operator must be a non-identity Hermitian Pauli")]
    InvalidMeasurement,
    #[error("forced outcome {forced:?} contradicts determined outcome {actual:?}")]
    ForcedOutcomeContradiction { forced: Sign, actual: Sign },
    #[error("qubits {0:?} are entangled with the rest of the state")]
    Entangled(VertexSet),
    #[error("not a permutation of the qubits")]
    InvalidPermutation,
    #[error("invalid stabilizer generators: {0}")]
    InvalidStabilizers(String),
}

pub fn graph_to_tableau(g: &Graph) -> Tableau {
    Tableau::from_graph(g)
}

pub fn tableau_to_graph(t: &Tableau) -> (Graph, LocalCliffordFrame) {
    t.to_graph()
}

/// Gates realizing local complementation at `a` on the graph state of `g`:
/// `R Z H Z R` on `a` (applied left to right), then `Z R` on each neighbour.
/// Maps the graph state of `g` to that of `g.local_complement(a)`.
pub fn local_complement_gates(g: &Graph, a: usize) -> Vec<Gate> {
    let mut gates = vec![Gate::R(a), Gate::Z(a), Gate::H(a), Gate::Z(a), Gate::R(a)];
    for v in g.neighbors(a) {
        gates.push(Gate::Z(v));
        gates.push(Gate::R(v));
    }
    gates
}

/// Emits a caterpillar from a single spin starting in `|+⟩`: the spin emits
/// `counts[0]` leaf photons, moves along the spine with one leaf-spin
/// emission, and repeats. Qubit 0 is the spin; photons follow in emission
/// order.
pub fn emit_caterpillar(counts: &[usize]) -> Result<Tableau, StabilizerError> {
    let mut t = Tableau::plus_state(1)?;
    for (i, &l) in counts.iter().enumerate() {
        for _ in 0..l {
            t.emit_photon(0, EmitMode::LeafPhoton)?;
        }
        if i + 1 < counts.len() {
            t.emit_photon(0, EmitMode::LeafSpin)?;
        }
    }
    Ok(t)
}
