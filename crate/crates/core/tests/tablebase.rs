use std::collections::HashMap;
use std::io::Cursor;

use fusion_tablebase::fusion::{fuse, FusionError, FusionKind};
use fusion_tablebase::graph::{
    caterpillar_count_formula, enumerate_caterpillars, enumerate_detached_caterpillars, Graph,
};
use fusion_tablebase::orbit::{classify_all_connected, OrbitClassifier};
use fusion_tablebase::tablebase::{BuildError, BuildOptions, CheckMode, ResourceLimit, TableError, Tablebase};

/// Header bytes, including the build timestamp and its checksum.
const HEADER_LEN: usize = 49;

fn build(m: usize) -> Tablebase {
    Tablebase::build(m, &BuildOptions::default()).unwrap()
}

fn to_bytes(tb: &Tablebase) -> Vec<u8> {
    let mut buf = Vec::new();
    tb.write_to(&mut buf).unwrap();
    buf
}

#[test]
fn c5_is_the_smallest_one_fusion_orbit() {
    // A fusion consumes two qubits, so C5 needs seven to start from.
    assert_eq!(build(6).depth_of(&Graph::cycle(5)), None);
    let tb = build(7);
    assert_eq!(tb.depth_of(&Graph::cycle(5)), Some(1));
    for id in tb.orbit_ids() {
        if tb.depth(id) == 1 {
            assert_eq!(tb.info(id).vertices, 5);
        }
    }
    assert_eq!(tb.depth_of(&Graph::path(5)), Some(0));
    assert_eq!(tb.depth_of(&Graph::complete(5)), Some(0));
}

#[test]
fn depth_zero_holds_exactly_the_caterpillar_orbits() {
    let tb = build(8);
    let s = tb.stats();
    assert!(s.is_consistent());
    let expected: u64 = (1..=8).map(caterpillar_count_formula).sum();
    assert_eq!(s.connected_orbits_by_depth[0], expected);
    // Distinct caterpillars never share an orbit.
    let mut seen = std::collections::HashSet::new();
    for g in (1..=8).flat_map(enumerate_caterpillars).chain(enumerate_detached_caterpillars(8)) {
        let l = tb.lookup(&g).unwrap();
        assert_eq!(tb.depth(l.orbit), 0);
        assert!(seen.insert(l.orbit));
    }
    assert_eq!(seen.len() as u64, s.orbits_by_depth[0]);
}

#[test]
fn lookup_map_is_a_witness() {
    let tb = build(7);
    let g = Graph::cycle(5).permuted(&[3, 0, 4, 1, 2]);
    let l = tb.lookup(&g).unwrap();
    assert_eq!(g.relabeled(&l.map), tb.member(l.orbit, l.member));
    assert!(tb.lookup(&Graph::cycle(9)).is_none());
}

/// Independent depth assignment: breadth-first over orbits using the
/// tableau fusion on every ordered pair of every member.
fn oracle_depths(m: usize) -> (OrbitClassifier, HashMap<u32, u32>, Vec<Vec<Graph>>) {
    let mut cls = OrbitClassifier::new();
    let mut depth = HashMap::new();
    let mut members: Vec<Vec<Graph>> = Vec::new();
    let mut frontier = Vec::new();
    let mut add = |g: &Graph, d: u32, cls: &mut OrbitClassifier, members: &mut Vec<Vec<Graph>>, frontier: &mut Vec<u32>| {
        let id = cls.classify(g);
        if id as usize == members.len() {
            members.push(fusion_tablebase::orbit::enumerate_orbit(g));
        }
        if let std::collections::hash_map::Entry::Vacant(e) = depth.entry(id) {
            e.insert(d);
            frontier.push(id);
        }
    };
    for g in (1..=m).flat_map(enumerate_caterpillars).chain(enumerate_detached_caterpillars(m)) {
        add(&g, 0, &mut cls, &mut members, &mut frontier);
    }
    let mut d = 0;
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for id in std::mem::take(&mut frontier) {
            for g in members[id as usize].clone() {
                for a in 0..g.n() {
                    for b in 0..g.n() {
                        match fuse(&g, a, b, FusionKind::XzZx) {
                            Ok(r) => add(&r.graph, d + 1, &mut cls, &mut members, &mut next),
                            Err(FusionError::Degenerate(_) | FusionError::SameVertex(_)) => {}
                            Err(e) => panic!("{e}"),
                        }
                    }
                }
            }
        }
        frontier = next;
        d += 1;
    }
    (cls, depth, members)
}

#[test]
fn depths_match_independent_search() {
    let m = 8;
    let tb = build(m);
    let (_, depth, members) = oracle_depths(m);
    assert_eq!(depth.len(), tb.orbit_count());
    assert_eq!(members.iter().map(Vec::len).sum::<usize>() as u64, tb.graph_count());
    for (id, d) in depth {
        let rep = &members[id as usize][0];
        assert_eq!(tb.depth_of(rep), Some(d), "{rep:?}");
    }
}

#[test]
fn no_fusion_skips_a_layer() {
    let tb = build(8);
    for id in tb.orbit_ids() {
        let d = tb.depth(id);
        for g in tb.members(id) {
            for a in 0..g.n() {
                for b in a + 1..g.n() {
                    if let Ok(r) = fuse(&g, a, b, FusionKind::XzZx) {
                        let child = tb.depth_of(&r.graph).expect("closed under fusion");
                        assert!(child <= d + 1);
                    }
                }
            }
        }
    }
}

#[test]
fn depths_are_stable_as_seeds_grow() {
    let small = build(6);
    let large = build(8);
    for id in small.orbit_ids() {
        let g = small.member(id, 0);
        assert_eq!(large.depth_of(&g), Some(small.depth(id)));
    }
}

#[test]
fn five_vertex_orbits_complete_at_seven() {
    let tb = build(7);
    assert_eq!(tb.connected_orbits_within(5, 1).len(), classify_all_connected(5));
}

#[test]
fn builds_are_deterministic() {
    let a = Tablebase::build(8, &BuildOptions { threads: Some(1), chunk_size: 7, ..Default::default() }).unwrap();
    let b = Tablebase::build(8, &BuildOptions { threads: Some(2), ..Default::default() }).unwrap();
    assert_eq!(a.stats(), b.stats());
    assert_eq!(to_bytes(&a)[HEADER_LEN..], to_bytes(&b)[HEADER_LEN..]);
}

#[test]
fn resource_limit_returns_partial_table() {
    let opts = BuildOptions {
        max_graphs: Some(300),
        ..Default::default()
    };
    match Tablebase::build(8, &opts) {
        Err(BuildError::ResourceLimit { limit, partial, .. }) => {
            assert_eq!(limit, ResourceLimit::Graphs(300));
            assert!(partial.graph_count() > 300);
            assert!(!partial.meta().complete);
            partial.check_structure().unwrap();
        }
        other => panic!("expected limit, got {other:?}"),
    }
    assert!(matches!(Tablebase::build(0, &BuildOptions::default()), Err(BuildError::InvalidMaxQubits(0))));
    let capped = Tablebase::build(8, &BuildOptions { max_depth: Some(0), ..Default::default() }).unwrap();
    assert_eq!(capped.max_depth(), Some(0));
}

#[test]
fn save_load_round_trip() {
    let tb = build(8);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t8.bin");
    tb.save(&path).unwrap();
    let back = Tablebase::load(&path, CheckMode::Deep).unwrap();
    assert_eq!(back.stats(), tb.stats());
    assert_eq!(back.meta(), tb.meta());
    for id in tb.orbit_ids() {
        assert_eq!(back.parent(id), tb.parent(id));
        for g in tb.members(id) {
            assert_eq!(back.lookup(&g).map(|l| l.orbit), Some(id));
        }
    }
    assert_eq!(to_bytes(&back), to_bytes(&tb));
}

#[test]
fn corrupt_files_are_rejected() {
    let tb = build(6);
    let bytes = to_bytes(&tb);
    for cut in [3, 20, bytes.len() / 2, bytes.len() - 1] {
        let err = Tablebase::read_from(Cursor::new(&bytes[..cut]), CheckMode::Fast).unwrap_err();
        assert!(matches!(err, TableError::Checksum { .. } | TableError::BadMagic), "cut {cut}: {err}");
    }
    let mut flipped = bytes.clone();
    let k = bytes.len() - 10;
    flipped[k] ^= 0x10;
    assert!(matches!(
        Tablebase::read_from(Cursor::new(&flipped), CheckMode::Fast),
        Err(TableError::Checksum { section: "members" })
    ));
    let mut versioned = bytes.clone();
    versioned[4] = 99;
    assert!(matches!(
        Tablebase::read_from(Cursor::new(&versioned), CheckMode::Fast),
        Err(TableError::VersionMismatch { found: 99 })
    ));
    assert!(matches!(
        Tablebase::read_from(Cursor::new(b"nope-nope"), CheckMode::Fast),
        Err(TableError::BadMagic)
    ));
}

#[test]
fn deep_check_replays_every_link() {
    let tb = build(8);
    tb.check_structure().unwrap();
    tb.check_deep().unwrap();
    let linked = tb.orbit_ids().filter(|&id| tb.parent(id).is_some()).count();
    assert_eq!(linked as u64, tb.stats().orbits_by_depth[1..].iter().sum::<u64>());
}
