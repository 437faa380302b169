use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use super::{Tablebase, MAX_INITIAL_QUBITS};
use crate::fusion::{degeneracy, fuse, fusion_orbit_representative, FusionKind};
use crate::graph::{enumerate_caterpillars, enumerate_detached_caterpillars, Graph, GraphHash};
use crate::orbit::{enumerate_orbit, FusionLink, OrbitId};

/// Knobs for [`Tablebase::build`].
#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Stop once the table holds more graphs than this.
    pub max_graphs: Option<u64>,
    /// Stop once the estimated footprint exceeds this many bytes.
    pub memory_limit_bytes: Option<u64>,
    /// Do not expand orbits deeper than this.
    pub max_depth: Option<u32>,
    /// Work items (orbit members) scanned per parallel batch.
    pub chunk_size: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            threads: None,
            max_graphs: None,
            memory_limit_bytes: None,
            max_depth: None,
            chunk_size: 2048,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResourceLimit {
    Graphs(u64),
    MemoryBytes(u64),
}

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("max initial qubits must be in 1..={MAX_INITIAL_QUBITS}, got {0}")]
    InvalidMaxQubits(usize),
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
    /// The partial table holds every orbit committed before the limit hit.
    #[error("resource limit {limit:?} reached at depth {depth}")]
    ResourceLimit {
        limit: ResourceLimit,
        depth: u32,
        partial: Box<Tablebase>,
    },
}

struct Candidate {
    orbit: u32,
    member: u32,
    pair: (u8, u8),
    graph: Graph,
    hash: GraphHash,
}

pub(super) fn build(max: usize, options: &BuildOptions) -> Result<Tablebase, BuildError> {
    if max == 0 || max > MAX_INITIAL_QUBITS {
        return Err(BuildError::InvalidMaxQubits(max));
    }
    match options.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| BuildError::ThreadPool(e.to_string()))?
            .install(|| build_in_pool(max, options)),
        None => build_in_pool(max, options),
    }
}

fn check_limits(tb: &Tablebase, options: &BuildOptions) -> Option<ResourceLimit> {
    if let Some(g) = options.max_graphs {
        if tb.graph_count() > g {
            return Some(ResourceLimit::Graphs(g));
        }
    }
    if let Some(m) = options.memory_limit_bytes {
        if tb.approx_bytes() as u64 > m {
            return Some(ResourceLimit::MemoryBytes(m));
        }
    }
    None
}

fn stamp(tb: &mut Tablebase, started: Instant, complete: bool) {
    tb.meta.created_unix_secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    tb.meta.build_millis = started.elapsed().as_millis() as u64;
    tb.meta.complete = complete;
}

fn build_in_pool(max: usize, options: &BuildOptions) -> Result<Tablebase, BuildError> {
    let started = Instant::now();
    let mut tb = Tablebase::empty(max);
    let limit_hit = |mut tb: Tablebase, limit, depth| {
        stamp(&mut tb, started, false);
        Err(BuildError::ResourceLimit {
            limit,
            depth,
            partial: Box::new(tb),
        })
    };

    let seeds = (1..=max)
        .flat_map(enumerate_caterpillars)
        .chain(enumerate_detached_caterpillars(max));
    for seed in seeds {
        let h = GraphHash::of(&seed);
        if tb.find_orbit_hashed(&seed, h).is_none() {
            tb.push_orbit(&enumerate_orbit(&seed), 0, None);
            if let Some(limit) = check_limits(&tb, options) {
                return limit_hit(tb, limit, 0);
            }
        }
    }
    log::info!("depth 0: {} orbits, {} graphs", tb.orbit_count(), tb.graph_count());

    let mut layer = 0..tb.orbit_count() as u32;
    let mut depth = 0;
    while !layer.is_empty() && options.max_depth.is_none_or(|m| depth < m) {
        let items: Vec<(u32, u32)> = layer
            .clone()
            .flat_map(|o| (0..tb.orbits[o as usize].len).map(move |m| (o, m)))
            .collect();
        let next_start = tb.orbit_count() as u32;
        for chunk in items.chunks(options.chunk_size.max(1)) {
            let candidates: Vec<Candidate> = {
                let tb = &tb;
                chunk
                    .par_iter()
                    .flat_map_iter(|&(o, m)| scan_member(tb, o, m))
                    .collect()
            };
            for c in candidates {
                if tb.find_orbit_hashed(&c.graph, c.hash).is_some() {
                    continue;
                }
                let parent = tb.member(OrbitId(c.orbit), c.member);
                let (a, b) = (c.pair.0 as usize, c.pair.1 as usize);
                let exact = fuse(&parent, a, b, FusionKind::XzZx)
                    .expect("scanned pairs are valid and non-degenerate")
                    .graph;
                let link = FusionLink {
                    parent_orbit: OrbitId(c.orbit),
                    parent_member: c.member,
                    pair: c.pair,
                    child_member: 0,
                };
                tb.push_orbit(&enumerate_orbit(&exact), depth + 1, Some(link));
                if let Some(limit) = check_limits(&tb, options) {
                    return limit_hit(tb, limit, depth + 1);
                }
            }
        }
        layer = next_start..tb.orbit_count() as u32;
        depth += 1;
        if !layer.is_empty() {
            let graphs: u64 = layer.clone().map(|o| tb.orbits[o as usize].len as u64).sum();
            log::info!("depth {depth}: {} orbits, {graphs} graphs", layer.len());
        }
    }
    stamp(&mut tb, started, layer.is_empty());
    Ok(tb)
}

/// Fusions of one member that land outside the table, in pair order.
fn scan_member(tb: &Tablebase, orbit: u32, member: u32) -> Vec<Candidate> {
    let g = tb.member(OrbitId(orbit), member);
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if degeneracy(&g, a, b).is_some() {
                continue;
            }
            let r = fusion_orbit_representative(&g, a, b);
            let h = GraphHash::of(&r);
            if tb.find_orbit_hashed(&r, h).is_none() {
                out.push(Candidate {
                    orbit,
                    member,
                    pair: (a as u8, b as u8),
                    graph: r,
                    hash: h,
                });
            }
        }
    }
    out
}
