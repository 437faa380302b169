//! Minimum-fusion orbit table: every LC orbit reachable from single-emitter
//! caterpillar states, each with its fusion depth and one incoming link.

mod build;
mod persist;
mod store;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{isomorphic, Graph, GraphHash, VertexMap};
use crate::orbit::{FusionLink, Orbit, OrbitId};

pub use build::{BuildError, BuildOptions, ResourceLimit};
pub use persist::{CheckMode, TableError, FORMAT_VERSION};

use store::{pack_into, unpack, words_for, GraphIndex, Loc};

/// Largest supported number of initial qubits.
pub const MAX_INITIAL_QUBITS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct OrbitRecord {
    pub n: u8,
    pub depth: u32,
    /// Word offset of the first member.
    pub offset: u64,
    pub len: u32,
    pub parent: Option<FusionLink>,
}

/// Summary of one stored orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInfo {
    pub id: OrbitId,
    pub vertices: usize,
    pub depth: u32,
    pub size: usize,
    pub connected: bool,
    pub parent: Option<FusionLink>,
}

/// Build bookkeeping that is not part of the table's mathematical content.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableMeta {
    pub format_version: u32,
    pub created_unix_secs: u64,
    pub build_millis: u64,
    /// False when the build stopped at a resource limit.
    pub complete: bool,
}

/// Counters over a stored table.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildStats {
    pub max_initial_qubits: usize,
    pub graphs_total: u64,
    pub orbits_total: u64,
    pub orbits_by_depth: Vec<u64>,
    pub connected_orbits_by_depth: Vec<u64>,
    pub graphs_by_depth: Vec<u64>,
    /// `[n][depth]` counts of connected orbits on `n` vertices.
    pub connected_orbits_by_size: Vec<Vec<u64>>,
    /// Links whose fused pair is adjacent in the parent member.
    pub adjacent_pair_links: u64,
}

/// Result of resolving a graph: `target.relabeled(map)` equals the member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lookup {
    pub orbit: OrbitId,
    pub member: u32,
    pub map: VertexMap,
}

pub struct Tablebase {
    max_initial_qubits: usize,
    orbits: Vec<OrbitRecord>,
    words: Vec<u64>,
    index: GraphIndex,
    meta: TableMeta,
}

impl fmt::Debug for Tablebase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tablebase")
            .field("max_initial_qubits", &self.max_initial_qubits)
            .field("orbits", &self.orbits.len())
            .field("graphs", &self.graph_count())
            .field("complete", &self.meta.complete)
            .finish()
    }
}

impl Tablebase {
    pub(crate) fn empty(max_initial_qubits: usize) -> Self {
        Tablebase {
            max_initial_qubits,
            orbits: Vec::new(),
            words: Vec::new(),
            index: GraphIndex::default(),
            meta: TableMeta {
                format_version: FORMAT_VERSION,
                created_unix_secs: 0,
                build_millis: 0,
                complete: false,
            },
        }
    }

    /// Builds the table seeded with caterpillar sets of up to `max_initial_qubits`.
    pub fn build(max_initial_qubits: usize, options: &BuildOptions) -> Result<Tablebase, BuildError> {
        build::build(max_initial_qubits, options)
    }

    pub fn max_initial_qubits(&self) -> usize {
        self.max_initial_qubits
    }

    pub fn meta(&self) -> &TableMeta {
        &self.meta
    }

    pub fn orbit_count(&self) -> usize {
        self.orbits.len()
    }

    pub fn graph_count(&self) -> u64 {
        self.orbits.iter().map(|o| o.len as u64).sum()
    }

    pub fn max_depth(&self) -> Option<u32> {
        self.orbits.last().map(|o| o.depth)
    }

    fn record(&self, id: OrbitId) -> &OrbitRecord {
        &self.orbits[id.0 as usize]
    }

    pub fn orbit_ids(&self) -> impl Iterator<Item = OrbitId> {
        (0..self.orbits.len() as u32).map(OrbitId)
    }

    pub fn depth(&self, id: OrbitId) -> u32 {
        self.record(id).depth
    }

    pub fn parent(&self, id: OrbitId) -> Option<FusionLink> {
        self.record(id).parent
    }

    pub fn orbit_size(&self, id: OrbitId) -> usize {
        self.record(id).len as usize
    }

    pub fn member(&self, id: OrbitId, member: u32) -> Graph {
        let r = self.record(id);
        assert!(member < r.len, "member {member} out of range for orbit {}", id.0);
        let w = words_for(r.n as usize);
        let start = r.offset as usize + member as usize * w;
        unpack(r.n as usize, &self.words[start..start + w])
    }

    pub fn members(&self, id: OrbitId) -> impl Iterator<Item = Graph> + '_ {
        (0..self.record(id).len).map(move |m| self.member(id, m))
    }

    pub fn info(&self, id: OrbitId) -> OrbitInfo {
        let r = self.record(id);
        OrbitInfo {
            id,
            vertices: r.n as usize,
            depth: r.depth,
            size: r.len as usize,
            connected: self.member(id, 0).is_connected(),
            parent: r.parent,
        }
    }

    pub fn orbit(&self, id: OrbitId) -> Orbit {
        let r = self.record(id);
        Orbit {
            id,
            members: self.members(id).collect(),
            depth: r.depth,
            parent: r.parent,
        }
    }

    /// Finds the stored member isomorphic to `target`.
    pub fn lookup(&self, target: &Graph) -> Option<Lookup> {
        self.lookup_hashed(target, GraphHash::of(target))
    }

    pub(crate) fn lookup_hashed(&self, target: &Graph, h: GraphHash) -> Option<Lookup> {
        self.index.find_map(h, |loc| {
            let r = &self.orbits[loc.orbit() as usize];
            if r.n as usize != target.n() {
                return None;
            }
            let m = self.member(OrbitId(loc.orbit()), loc.member());
            isomorphic(target, &m).map(|map| Lookup {
                orbit: OrbitId(loc.orbit()),
                member: loc.member(),
                map,
            })
        })
    }

    /// Like [`Tablebase::lookup`] without building the witness map.
    pub(crate) fn find_orbit_hashed(&self, target: &Graph, h: GraphHash) -> Option<OrbitId> {
        self.index.find_map(h, |loc| {
            let r = &self.orbits[loc.orbit() as usize];
            if r.n as usize != target.n() {
                return None;
            }
            let m = self.member(OrbitId(loc.orbit()), loc.member());
            crate::graph::is_isomorphic(target, &m).then_some(OrbitId(loc.orbit()))
        })
    }

    pub fn contains(&self, target: &Graph) -> bool {
        self.find_orbit_hashed(target, GraphHash::of(target)).is_some()
    }

    /// Depth of the orbit containing `target`, if present.
    pub fn depth_of(&self, target: &Graph) -> Option<u32> {
        self.find_orbit_hashed(target, GraphHash::of(target))
            .map(|id| self.depth(id))
    }

    /// Appends an orbit whose members are pairwise non-isomorphic and absent
    /// from the table.
    pub(crate) fn push_orbit(&mut self, members: &[Graph], depth: u32, parent: Option<FusionLink>) -> OrbitId {
        let id = self.orbits.len() as u32;
        let n = members[0].n();
        let offset = self.words.len() as u64;
        self.words.reserve(members.len() * words_for(n));
        for (i, m) in members.iter().enumerate() {
            debug_assert_eq!(m.n(), n);
            pack_into(m, &mut self.words);
            self.index.insert(GraphHash::of(m), Loc::new(id, i as u32));
        }
        self.orbits.push(OrbitRecord {
            n: n as u8,
            depth,
            offset,
            len: members.len() as u32,
            parent,
        });
        OrbitId(id)
    }

    pub(crate) fn approx_bytes(&self) -> usize {
        self.words.capacity() * 8
            + self.orbits.capacity() * std::mem::size_of::<OrbitRecord>()
            + self.index.approx_bytes()
    }

    pub fn stats(&self) -> BuildStats {
        let depth_slots = self.max_depth().map_or(0, |d| d as usize + 1);
        let mut s = BuildStats {
            max_initial_qubits: self.max_initial_qubits,
            graphs_total: self.graph_count(),
            orbits_total: self.orbits.len() as u64,
            orbits_by_depth: vec![0; depth_slots],
            connected_orbits_by_depth: vec![0; depth_slots],
            graphs_by_depth: vec![0; depth_slots],
            connected_orbits_by_size: vec![vec![0; depth_slots]; self.max_initial_qubits + 1],
            adjacent_pair_links: 0,
        };
        for id in self.orbit_ids() {
            let r = *self.record(id);
            let d = r.depth as usize;
            s.orbits_by_depth[d] += 1;
            s.graphs_by_depth[d] += r.len as u64;
            // LC preserves connectivity, so one member decides for the orbit.
            if self.member(id, 0).is_connected() {
                s.connected_orbits_by_depth[d] += 1;
                s.connected_orbits_by_size[r.n as usize][d] += 1;
            }
            if let Some(link) = r.parent {
                let p = self.member(link.parent_orbit, link.parent_member);
                if p.has_edge(link.pair.0 as usize, link.pair.1 as usize) {
                    s.adjacent_pair_links += 1;
                }
            }
        }
        s
    }

    /// Connected orbits on `n` vertices with depth at most `max_depth`.
    pub fn connected_orbits_within(&self, n: usize, max_depth: u32) -> Vec<OrbitId> {
        self.orbit_ids()
            .filter(|&id| {
                let r = self.record(id);
                r.n as usize == n && r.depth <= max_depth && self.member(id, 0).is_connected()
            })
            .collect()
    }
}

impl BuildStats {
    /// Orbit and graph totals agree with the per-depth counters.
    pub fn is_consistent(&self) -> bool {
        self.orbits_by_depth.iter().sum::<u64>() == self.orbits_total
            && self.graphs_by_depth.iter().sum::<u64>() == self.graphs_total
            && self
                .connected_orbits_by_depth
                .iter()
                .zip(&self.orbits_by_depth)
                .all(|(c, a)| c <= a)
            && (0..self.connected_orbits_by_depth.len()).all(|d| {
                self.connected_orbits_by_size.iter().map(|row| row[d]).sum::<u64>()
                    == self.connected_orbits_by_depth[d]
            })
    }
}
