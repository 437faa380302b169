//! Successful type-II fusion as a graph transformation.

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexMap, VertexSet};
use crate::orbit::OrbitClassifier;
use crate::stabilizer::{LocalCliffordFrame, Pauli1, PauliString, Sign, StabilizerError, Tableau};

/// Pair of commuting two-qubit parities measured on success.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum FusionKind {
    /// `X_A X_B ∧ Z_A Z_B`, the standard Bell measurement.
    XxZz,
    /// `X_A Z_B ∧ Z_A X_B`.
    #[default]
    XzZx,
    /// `Y_A Z_B ∧ Z_A Y_B`.
    YzZy,
    /// `X_A Y_B ∧ Y_A Z_B`.
    XyYz,
    /// `X_A Y_B ∧ Y_A X_B`.
    XyYx,
}

impl FusionKind {
    pub const ALL: [FusionKind; 5] = [
        FusionKind::XxZz,
        FusionKind::XzZx,
        FusionKind::YzZy,
        FusionKind::XyYz,
        FusionKind::XyYx,
    ];

    /// The two parities as `(σ_A, σ_B)` factors.
    pub fn parities(self) -> [(Pauli1, Pauli1); 2] {
        use Pauli1::*;
        match self {
            FusionKind::XxZz => [(X, X), (Z, Z)],
            FusionKind::XzZx => [(X, Z), (Z, X)],
            FusionKind::YzZy => [(Y, Z), (Z, Y)],
            FusionKind::XyYz => [(X, Y), (Y, Z)],
            FusionKind::XyYx => [(X, Y), (Y, X)],
        }
    }

    pub fn operators(self, a: usize, b: usize) -> [PauliString; 2] {
        self.parities()
            .map(|(pa, pb)| PauliString::from_paulis(&[(a, pa), (b, pb)], Sign::Plus))
    }
}

/// Why a fusion collapses to single-qubit measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    IsolatedVertex(usize),
    /// The two qubits form a component of their own.
    IsolatedPair,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FusionError {
    #[error("cannot fuse vertex {0} with itself")]
    SameVertex(usize),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("degenerate fusion: {0:?}")]
    Degenerate(Degeneracy),
    #[error(transparent)]
    Stabilizer(#[from] StabilizerError),
}

/// Post-fusion graph state. Applying `frame` to the state of `graph` gives
/// the measured, qubit-deleted state; `relabel` maps old labels to new ones
/// (the fused qubits are unmapped).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionResult {
    pub graph: Graph,
    pub frame: LocalCliffordFrame,
    pub relabel: VertexMap,
}

fn check_pair(g: &Graph, a: usize, b: usize) -> Result<(), FusionError> {
    let n = g.n();
    for v in [a, b] {
        if v >= n {
            return Err(FusionError::VertexOutOfRange { vertex: v, n });
        }
    }
    if a == b {
        return Err(FusionError::SameVertex(a));
    }
    Ok(())
}

/// Degeneracy status of fusing `a` and `b` (assumed valid and distinct).
pub fn degeneracy(g: &Graph, a: usize, b: usize) -> Option<Degeneracy> {
    for v in [a, b] {
        if g.degree(v) == 0 {
            return Some(Degeneracy::IsolatedVertex(v));
        }
    }
    let pair = (1u32 << a) | (1 << b);
    if g.neighbor_mask(a) | g.neighbor_mask(b) == pair {
        return Some(Degeneracy::IsolatedPair);
    }
    None
}

/// Dense relabeling dropping `a` and `b`.
pub fn removal_map(n: usize, a: usize, b: usize) -> VertexMap {
    let mut next = 0;
    VertexMap::from_images((0..n).map(|v| {
        if v == a || v == b {
            None
        } else {
            next += 1;
            Some(next - 1)
        }
    }))
}

/// Runs the stabilizer pipeline: measure both parities (a random outcome is
/// taken as `+1`), delete the fused qubits, convert back to a graph.
pub fn fuse(g: &Graph, a: usize, b: usize, kind: FusionKind) -> Result<FusionResult, FusionError> {
    check_pair(g, a, b)?;
    if let Some(d) = degeneracy(g, a, b) {
        return Err(FusionError::Degenerate(d));
    }
    let t = fused_tableau(g, a, b, kind)?;
    let (graph, frame) = t.to_graph();
    Ok(FusionResult {
        graph,
        frame,
        relabel: removal_map(g.n(), a, b),
    })
}

/// Post-fusion tableau on the remaining `n − 2` qubits.
pub fn fused_tableau(g: &Graph, a: usize, b: usize, kind: FusionKind) -> Result<Tableau, FusionError> {
    check_pair(g, a, b)?;
    let mut t = Tableau::from_graph(g);
    for p in kind.operators(a, b) {
        t.measure_pauli(&p, None)?;
    }
    Ok(t.delete_qubits(VertexSet::from_vertices([a, b]))?)
}

/// Direct graph rewrite for the default kind on a non-adjacent pair: every
/// pair `x ∈ N(a)`, `y ∈ N(b)` with `x ≠ y` has its edge toggled, then `a`
/// and `b` are removed. `None` when the preconditions fail.
pub fn fast_fuse_rewrite(g: &Graph, a: usize, b: usize) -> Option<Graph> {
    if check_pair(g, a, b).is_err() || g.has_edge(a, b) || degeneracy(g, a, b).is_some() {
        return None;
    }
    Some(rewrite_unchecked(g, a, b))
}

/// The rewrite without precondition checks. Edge `xy` flips when exactly
/// one of `(x, y)`, `(y, x)` lies in `N(a) × N(b)`.
#[inline]
pub(crate) fn rewrite_unchecked(g: &Graph, a: usize, b: usize) -> Graph {
    let (na, nb) = (g.neighbor_mask(a), g.neighbor_mask(b));
    let mut h = *g;
    for x in VertexSet(na | nb) {
        let mut flip = 0;
        if na >> x & 1 == 1 {
            flip ^= nb;
        }
        if nb >> x & 1 == 1 {
            flip ^= na;
        }
        h.xor_row_unchecked(x, flip & !(1 << x));
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    h.remove_vertex(hi).remove_vertex(lo)
}

/// Measures `X` on `a` up to local Cliffords: with a neighbour `c`, the
/// result is `LC_c LC_a LC_c (g)` minus `a`; an isolated `a` is just removed.
fn measure_x_up_to_lc(g: &Graph, a: usize) -> Graph {
    match VertexSet(g.neighbor_mask(a)).iter().next() {
        None => g.remove_vertex(a),
        Some(c) => {
            let mut h = *g;
            h.local_complement_in_place(c);
            h.local_complement_in_place(a);
            h.local_complement_in_place(c);
            h.remove_vertex(a)
        }
    }
}

/// A graph in the same LC orbit as the default-kind fusion result of a
/// valid, non-degenerate pair. Exact for non-adjacent pairs.
///
/// Success is a `CZ` on the pair followed by `X` measurements on both.
#[inline]
pub fn fusion_orbit_representative(g: &Graph, a: usize, b: usize) -> Graph {
    if !g.has_edge(a, b) {
        return rewrite_unchecked(g, a, b);
    }
    let mut h = *g;
    h.toggle_edge(a, b);
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    let h = measure_x_up_to_lc(&h, hi);
    measure_x_up_to_lc(&h, lo)
}

/// Default-kind fusion, through the rewrite when it applies. On that path the
/// frame is the identity: the exact frame differs only by Pauli byproducts.
pub fn fuse_default(g: &Graph, a: usize, b: usize) -> Result<FusionResult, FusionError> {
    match fast_fuse_rewrite(g, a, b) {
        Some(graph) => Ok(FusionResult {
            graph,
            frame: LocalCliffordFrame::identity(g.n() - 2),
            relabel: removal_map(g.n(), a, b),
        }),
        None => fuse(g, a, b, FusionKind::XzZx),
    }
}

/// Exhaustive check over all graphs on at most `n` vertices that every orbit
/// reached by any fusion kind from a graph is also reached by the default
/// kind from some member of that graph's orbit. Degenerate pairs are skipped
/// for all kinds.
pub fn fusion_kinds_equivalent_on_orbits(n: usize) -> bool {
    use crate::graph::all_graphs;
    use std::collections::HashSet;

    let mut parents = OrbitClassifier::new();
    let mut children = OrbitClassifier::new();
    let mut default_reach: Vec<Option<HashSet<u32>>> = Vec::new();
    let mut members_of: Vec<Vec<Graph>> = Vec::new();
    for k in 2..=n {
        for g in all_graphs(k) {
            let id = parents.classify(&g) as usize;
            if id == default_reach.len() {
                default_reach.push(None);
                members_of.push(crate::orbit::enumerate_orbit(&g));
            }
            if default_reach[id].is_none() {
                let mut reach = HashSet::new();
                for m in &members_of[id] {
                    for a in 0..k {
                        for b in a + 1..k {
                            if let Ok(r) = fuse_default(m, a, b) {
                                reach.insert(children.classify(&r.graph));
                            }
                        }
                    }
                }
                default_reach[id] = Some(reach);
            }
            let reach = default_reach[id].as_ref().expect("filled above");
            for a in 0..k {
                for b in 0..k {
                    if a == b {
                        continue;
                    }
                    for kind in FusionKind::ALL {
                        match fuse(&g, a, b, kind) {
                            Ok(r) => {
                                if !reach.contains(&children.classify(&r.graph)) {
                                    return false;
                                }
                            }
                            Err(FusionError::Degenerate(_)) => {}
                            Err(e) => panic!("unexpected fusion error: {e}"),
                        }
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_commute_and_are_two_qubit() {
        for kind in FusionKind::ALL {
            let [p, q] = kind.operators(0, 1);
            assert!(p.commutes_with(&q));
            for op in [p, q, p.mul(&q)] {
                assert_eq!(op.weight(), 2, "{kind:?}");
            }
        }
    }

    #[test]
    fn two_edges_become_one() {
        // A=0 – x=1, B=2 – y=3
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        let r = fuse(&g, 0, 2, FusionKind::XzZx).unwrap();
        assert_eq!(r.graph, Graph::path(2));
        assert_eq!(r.relabel.get(1), Some(0));
        assert_eq!(r.relabel.get(3), Some(1));
        assert_eq!(fast_fuse_rewrite(&g, 0, 2), Some(Graph::path(2)));
    }

    #[test]
    fn errors() {
        let g = Graph::path(3);
        assert_eq!(fuse(&g, 1, 1, FusionKind::XzZx), Err(FusionError::SameVertex(1)));
        assert!(matches!(fuse(&g, 0, 3, FusionKind::XzZx), Err(FusionError::VertexOutOfRange { .. })));
        let e = Graph::from_edges(3, &[(0, 1)]).unwrap();
        assert_eq!(
            fuse(&e, 0, 2, FusionKind::XzZx),
            Err(FusionError::Degenerate(Degeneracy::IsolatedVertex(2)))
        );
        assert_eq!(fuse(&e, 0, 1, FusionKind::XzZx), Err(FusionError::Degenerate(Degeneracy::IsolatedPair)));
        assert_eq!(fast_fuse_rewrite(&g, 0, 1), None);
    }
}
