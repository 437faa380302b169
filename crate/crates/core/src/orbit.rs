//! Local-complementation orbits up to isomorphism.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::graph::{all_connected_graphs, Graph, GraphRegistry, VertexMap};

/// Dense orbit identifier within a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitId(pub u32);

/// Incoming fusion of an orbit: fusing `pair` on member `parent_member` of
/// `parent_orbit` yields a graph isomorphic to member `child_member` of the
/// child orbit. The relabeling and Clifford frame are recomputed on demand
/// by replaying the fusion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FusionLink {
    pub parent_orbit: OrbitId,
    pub parent_member: u32,
    pub pair: (u8, u8),
    pub child_member: u32,
}

/// A set of pairwise non-isomorphic graphs closed under local complementation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub id: OrbitId,
    pub members: Vec<Graph>,
    pub depth: u32,
    pub parent: Option<FusionLink>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("graphs are not related by local complementation")]
    NotEquivalent,
}

/// LC closure of `g` up to isomorphism, in breadth-first discovery order
/// starting with `g` itself.
pub fn enumerate_orbit(g: &Graph) -> Vec<Graph> {
    let mut reg = GraphRegistry::new();
    reg.insert(*g, ());
    let mut i = 0;
    while i < reg.len() {
        let h = reg.entries()[i].0;
        for a in 0..h.n() {
            // LC at an isolated or degree-1 vertex is the identity.
            if h.degree(a) >= 2 {
                reg.insert(h.local_complement(a), ());
            }
        }
        i += 1;
    }
    reg.into_entries().into_iter().map(|(g, _)| g).collect()
}

pub fn lc_equivalent(g1: &Graph, g2: &Graph) -> bool {
    if g1.n() != g2.n() {
        return false;
    }
    lc_path(g1, g2).is_ok()
}

/// Local complementations turning `from` into a graph that `map` relabels to
/// exactly `to`: `to == steps.fold(from, lc).relabeled(map)`.
pub fn lc_path(from: &Graph, to: &Graph) -> Result<(Vec<usize>, VertexMap), OrbitError> {
    if from.n() != to.n() || from.edge_count() == 0 && to.edge_count() != 0 {
        return Err(OrbitError::NotEquivalent);
    }
    // Each class keeps the labeled graph actually reached from `from` and the
    // step that reached it.
    let mut reg: GraphRegistry<(u32, u8)> = GraphRegistry::new();
    reg.insert(*from, (u32::MAX, 0));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let h = reg.entries()[i].0;
        if let Some(map) = crate::graph::isomorphic(&h, to) {
            let mut steps = Vec::new();
            let mut k = i;
            while reg.entries()[k].1 .0 != u32::MAX {
                let (prev, a) = reg.entries()[k].1;
                steps.push(a as usize);
                k = prev as usize;
            }
            steps.reverse();
            return Ok((steps, map));
        }
        for a in 0..h.n() {
            if h.degree(a) >= 2 {
                let (idx, inserted) = reg.insert(h.local_complement(a), (i as u32, a as u8));
                if inserted {
                    queue.push_back(idx);
                }
            }
        }
    }
    Err(OrbitError::NotEquivalent)
}

/// Partitions graphs into LC orbits, reusing earlier classifications.
pub struct OrbitClassifier {
    reg: GraphRegistry<u32>,
    orbit_sizes: Vec<usize>,
}

impl OrbitClassifier {
    pub fn new() -> Self {
        OrbitClassifier {
            reg: GraphRegistry::new(),
            orbit_sizes: Vec::new(),
        }
    }

    /// Orbit index of `g`, enumerating its orbit on first sight.
    pub fn classify(&mut self, g: &Graph) -> u32 {
        if let Some((_, &id, _)) = self.reg.find(g) {
            return id;
        }
        let id = self.orbit_sizes.len() as u32;
        let members = enumerate_orbit(g);
        self.orbit_sizes.push(members.len());
        for m in members {
            self.reg.insert(m, id);
        }
        id
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_sizes.len()
    }

    pub fn orbit_size(&self, id: u32) -> usize {
        self.orbit_sizes[id as usize]
    }
}

impl Default for OrbitClassifier {
    fn default() -> Self {
        Self::new()
    }
}

/// Number of LC orbits among connected graphs on `n` vertices.
pub fn classify_all_connected(n: usize) -> usize {
    let mut c = OrbitClassifier::new();
    for g in all_connected_graphs(n) {
        c.classify(&g);
    }
    c.orbit_count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_isomorphic, Graph};

    #[test]
    fn small_orbits() {
        assert_eq!(enumerate_orbit(&Graph::path(1)).len(), 1);
        let k3 = enumerate_orbit(&Graph::complete(3));
        assert_eq!(k3.len(), 2);
        assert!(k3.iter().any(|g| is_isomorphic(g, &Graph::path(3))));
        assert!(lc_equivalent(&Graph::complete(3), &Graph::path(3)));
        assert!(!lc_equivalent(&Graph::cycle(5), &Graph::path(5)));
        let p4 = enumerate_orbit(&Graph::path(4));
        assert_eq!(p4.iter().filter(|g| g.edge_count() == 3 && g.is_connected()).count(), 1);
    }

    #[test]
    fn paths_replay() {
        let (steps, map) = lc_path(&Graph::complete(3), &Graph::path(3)).unwrap();
        assert_eq!(steps.len(), 1);
        let h = Graph::complete(3).local_complement(steps[0]).relabeled(&map);
        assert_eq!(h, Graph::path(3));
        let (steps, map) = lc_path(&Graph::cycle(5), &Graph::cycle(5)).unwrap();
        assert!(steps.is_empty());
        assert_eq!(Graph::cycle(5).relabeled(&map), Graph::cycle(5));
        let target = Graph::cycle(5).local_complement(2);
        let (steps, map) = lc_path(&Graph::cycle(5), &target).unwrap();
        assert_eq!(steps.len(), 1);
        let h = steps.iter().fold(Graph::cycle(5), |g, &a| g.local_complement(a));
        assert_eq!(h.relabeled(&map), target);
        assert_eq!(lc_path(&Graph::cycle(5), &Graph::path(5)), Err(OrbitError::NotEquivalent));
    }

    #[test]
    fn connected_orbit_counts_to_seven() {
        let expected = [1, 1, 2, 4, 11, 26];
        for (n, &e) in (2..=7).zip(&expected) {
            assert_eq!(classify_all_connected(n), e, "n={n}");
        }
    }
}
