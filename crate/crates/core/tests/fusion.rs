use fusion_tablebase::fusion::{
    degeneracy, fast_fuse_rewrite, fuse, fused_tableau, fusion_kinds_equivalent_on_orbits, FusionKind,
};
use fusion_tablebase::graph::{all_graphs, Graph, VertexSet};
use fusion_tablebase::orbit::lc_equivalent;
use fusion_tablebase::stabilizer::Tableau;

#[test]
fn rewrite_agrees_with_tableau_pipeline() {
    let mut checked = 0;
    for n in 3..=7 {
        for g in all_graphs(n) {
            for a in 0..n {
                for b in a + 1..n {
                    let fast = fast_fuse_rewrite(&g, a, b);
                    let slow = fuse(&g, a, b, FusionKind::XzZx);
                    match fast {
                        Some(h) => {
                            let r = slow.unwrap();
                            assert_eq!(r.graph, h, "{g:?} fuse {a}&{b}");
                            // Only sign byproducts remain.
                            assert!(r.frame.is_pauli());
                            checked += 1;
                        }
                        None => assert!(g.has_edge(a, b) || degeneracy(&g, a, b).is_some()),
                    }
                }
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn frames_reconstruct_the_measured_state() {
    let mut non_pauli = 0;
    for n in 3..=6 {
        for g in all_graphs(n) {
            for a in 0..n {
                for b in 0..n {
                    if a == b || degeneracy(&g, a, b).is_some() {
                        continue;
                    }
                    for kind in FusionKind::ALL {
                        let r = fuse(&g, a, b, kind).unwrap();
                        assert_eq!(r.graph.n(), n - 2);
                        let expected = fused_tableau(&g, a, b, kind).unwrap();
                        let mut t = Tableau::from_graph(&r.graph);
                        t.apply_frame(&r.frame).unwrap();
                        assert!(t.same_state(&expected));
                        if kind == FusionKind::XzZx && g.has_edge(a, b) && !r.frame.is_pauli() {
                            non_pauli += 1;
                        }
                    }
                }
            }
        }
    }
    // Adjacent pairs generally need a genuine Clifford correction.
    assert!(non_pauli > 0);
}

#[test]
fn entropy_grows_by_at_most_one() {
    for n in 3..=6 {
        for g in all_graphs(n) {
            let before = Tableau::from_graph(&g);
            for a in 0..n {
                for b in a + 1..n {
                    let Ok(r) = fuse(&g, a, b, FusionKind::XzZx) else { continue };
                    let after = Tableau::from_graph(&r.graph);
                    let rest: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
                    for part in 0..(1u32 << (n - 2)) {
                        let old = VertexSet::from_vertices(
                            rest.iter().enumerate().filter(|(i, _)| part >> i & 1 == 1).map(|(_, &v)| v),
                        );
                        let s_after = after.entanglement_entropy(VertexSet(part));
                        for extra in [vec![], vec![a], vec![b], vec![a, b]] {
                            let side = old.union(VertexSet::from_vertices(extra));
                            assert!(s_after <= before.entanglement_entropy(side) + 1);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn path_ends_close_a_triangle() {
    let r = fuse(&Graph::path(5), 0, 4, FusionKind::XzZx).unwrap();
    assert_eq!(r.graph.n(), 3);
    assert!(lc_equivalent(&r.graph, &Graph::complete(3)));
}

#[test]
fn adjacent_fusion_frames() {
    let g = Graph::cycle(5);
    assert_eq!(fast_fuse_rewrite(&g, 0, 1), None);
    let r = fuse(&g, 0, 1, FusionKind::XzZx).unwrap();
    let mut t = Tableau::from_graph(&r.graph);
    t.apply_frame(&r.frame).unwrap();
    assert!(t.same_state(&fused_tableau(&g, 0, 1, FusionKind::XzZx).unwrap()));
}

#[test]
fn single_fusion_kind_suffices() {
    for n in 4..=6 {
        assert!(fusion_kinds_equivalent_on_orbits(n), "n={n}");
    }
}

#[test]
fn orbit_representative_matches_every_pair() {
    use fusion_tablebase::fusion::fusion_orbit_representative;
    for n in 3..=7 {
        for g in all_graphs(n) {
            for a in 0..n {
                for b in a + 1..n {
                    let Ok(r) = fuse(&g, a, b, FusionKind::XzZx) else { continue };
                    let rep = fusion_orbit_representative(&g, a, b);
                    if g.has_edge(a, b) {
                        assert!(lc_equivalent(&rep, &r.graph), "{g:?} fuse {a}&{b}");
                    } else {
                        assert_eq!(rep, r.graph);
                    }
                }
            }
        }
    }
}
