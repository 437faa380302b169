use fusion_tablebase::codes::{best_code, make_code, search_codes, GraphCode, Logical, LossCurve};
use fusion_tablebase::graph::{all_connected_graphs, Graph, VertexSet};
use fusion_tablebase::stabilizer::PauliString;
use fusion_tablebase::tablebase::{BuildOptions, Tablebase};

/// Every element of the stabilizer group, by explicit multiplication.
fn group(code: &GraphCode) -> Vec<PauliString> {
    let mut out = vec![PauliString::IDENTITY];
    for g in &code.generators {
        let more: Vec<PauliString> = out.iter().map(|s| s.mul(g)).collect();
        out.extend(more);
    }
    out
}

fn oracle_recoverable(code: &GraphCode, group: &[PauliString], l: Logical, lost: u32) -> bool {
    let logical = code.logical(l);
    group.iter().any(|s| logical.mul(s).support() & lost == 0)
}

fn codes_of(g: &Graph) -> impl Iterator<Item = GraphCode> + '_ {
    (0..g.n()).flat_map(move |d| g.neighbors(d).iter().map(move |i| make_code(g, d, i).unwrap()))
}

#[test]
fn recoverability_agrees_with_group_enumeration() {
    for n in 2..=6 {
        for g in all_connected_graphs(n) {
            for code in codes_of(&g) {
                let grp = group(&code);
                assert_eq!(grp.len(), 1 << (code.qubits() - 1));
                for l in Logical::ALL {
                    let fast = code.recoverable_patterns(l).unwrap();
                    for lost in 0..1u32 << code.qubits() {
                        let want = oracle_recoverable(&code, &grp, l, lost);
                        assert_eq!(fast[lost as usize], want, "{g:?} δ={} {l} {lost:b}", code.delta);
                        assert_eq!(code.pattern_recoverable(l, VertexSet(lost)), want);
                    }
                }
            }
        }
    }
}

#[test]
fn logicals_and_generators_commute_properly() {
    for g in all_connected_graphs(6) {
        for code in codes_of(&g) {
            assert_eq!(code.generators.len(), code.qubits() - 1);
            assert!(!code.logical_x.commutes_with(&code.logical_z));
            for l in Logical::ALL {
                assert!(code.generators.iter().all(|s| s.commutes_with(&code.logical(l))));
            }
        }
    }
}

#[test]
fn loss_is_monotone_and_capped() {
    for n in 2..=8 {
        for g in all_connected_graphs(n) {
            for delta in 0..n {
                let i = g.neighbors(delta).iter().next().unwrap();
                let code = make_code(&g, delta, i).unwrap();
                for l in Logical::ALL {
                    let ok = code.recoverable_patterns(l).unwrap();
                    for s in 0..ok.len() {
                        if ok[s] {
                            assert!((0..code.qubits()).all(|b| ok[s & !(1 << b)]));
                        }
                    }
                }
                if n <= 7 {
                    // Complementarity caps the weakest logical at one half.
                    let t = code.evaluate().unwrap().threshold();
                    assert!(t <= 0.5 + 1e-4, "{g:?} δ={delta}: {t}");
                }
            }
        }
    }
}

#[test]
fn input_choice_does_not_matter() {
    for g in all_connected_graphs(6) {
        for delta in 0..g.n() {
            let curves: Vec<_> = g
                .neighbors(delta)
                .iter()
                .map(|i| {
                    let code = make_code(&g, delta, i).unwrap();
                    Logical::ALL.map(|l| code.loss_curve(l).unwrap())
                })
                .collect();
            assert!(curves.windows(2).all(|w| w[0] == w[1]), "{g:?} δ={delta}");
        }
    }
}

#[test]
fn trivial_code_has_no_protection() {
    let code = make_code(&Graph::path(2), 1, 0).unwrap();
    let c = code.loss_curve(Logical::X).unwrap();
    for e in [0.1f64, 0.3, 0.7] {
        assert!((c.eval(e) - e).abs() < 1e-12);
        assert!((c.eval(e as f32) - e as f32).abs() < 1e-6);
    }
    assert_eq!(code.evaluate().unwrap().threshold(), 0.0);
    assert!(code.pattern_recoverable(Logical::Z, VertexSet::EMPTY));
    assert!(!code.pattern_recoverable(Logical::Z, VertexSet::singleton(0)));
}

#[test]
fn star_code() {
    let code = make_code(&Graph::star(4), 0, 2).unwrap();
    assert_eq!(code.qubits(), 4);
    assert_eq!(code.logical_x.support(), 0b1111);
    // X needs every qubit, Z needs any one of them.
    let x = code.loss_curve(Logical::X).unwrap();
    let z = code.loss_curve(Logical::Z).unwrap();
    assert_eq!(x.coefficients, vec![0, 4, 6, 4, 1]);
    assert_eq!(z.coefficients, vec![0, 0, 0, 0, 1]);
    assert_eq!(x.threshold(), 0.0);
    assert!(z.threshold() > 0.999);
}

#[test]
fn cube_code() {
    let cube = Graph::cube();
    let (code, loss) = best_code(&cube, 0).unwrap();
    assert_eq!(code.qubits(), 7);
    for l in Logical::ALL {
        for q in 0..7 {
            assert!(code.pattern_recoverable(l, VertexSet::singleton(q)));
        }
    }
    assert!((loss.threshold() - 0.5).abs() < 0.01);

    // Symmetry: automorphisms of the cube fixing δ permute the code qubits
    // and must preserve which patterns are recoverable.
    let autos: Vec<Vec<usize>> = permutations(8)
        .into_iter()
        .filter(|p| p[0] == 0 && cube.permuted(p) == cube)
        .collect();
    assert_eq!(autos.len(), 6);
    for l in Logical::ALL {
        let ok = code.recoverable_patterns(l).unwrap();
        for p in &autos {
            for s in 0..ok.len() {
                let image: usize = (0..7).filter(|q| s >> q & 1 == 1).map(|q| 1 << (p[q + 1] - 1)).sum();
                assert_eq!(ok[s], ok[image]);
            }
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn threshold_solves_the_fixed_point() {
    let c = LossCurve {
        qubits: 5,
        coefficients: vec![0, 0, 0, 10, 5, 1],
    };
    let t = c.threshold();
    assert!((c.eval(t) - t).abs() < 1e-5);
    assert!((t - 0.5).abs() < 1e-5);
    let c = LossCurve {
        qubits: 3,
        coefficients: vec![0, 0, 3, 1],
    };
    // 3ε²(1-ε) + ε³ = ε has its root at ε = 1/2.
    assert!((c.threshold() - 0.5).abs() < 1e-5);
}

#[test]
fn search_is_ranked_and_deterministic() {
    let tb = Tablebase::build(8, &BuildOptions::default()).unwrap();
    let a = search_codes(&tb, 8, 1, 50);
    let b = search_codes(&tb, 8, 1, 50);
    assert_eq!(a, b);
    assert_eq!(a.len(), 50);
    assert!(a.windows(2).all(|w| w[0].threshold >= w[1].threshold));
    assert!(a.iter().all(|c| c.depth <= 1 && c.nodes <= 8));
    let zero = search_codes(&tb, 8, 0, 1);
    assert!(zero[0].threshold <= a[0].threshold);
}

#[test]
fn best_per_depth_matches_search() {
    use fusion_tablebase::codes::best_per_depth;
    let tb = Tablebase::build(8, &BuildOptions::default()).unwrap();
    let per = best_per_depth(&tb, 8, 1);
    assert_eq!(per.len(), 2);
    for budget in 0..=1u32 {
        let top = search_codes(&tb, 8, budget, 1).remove(0);
        let best = per[..=budget as usize].iter().flatten().min_by(|a, b| {
            b.threshold.total_cmp(&a.threshold).then(a.nodes.cmp(&b.nodes)).then(a.orbit.cmp(&b.orbit))
        });
        assert_eq!(best.unwrap().threshold, top.threshold);
    }
}
