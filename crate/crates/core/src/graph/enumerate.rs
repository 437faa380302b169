use super::{is_isomorphic, Graph, GraphRegistry, VertexSet};

/// All graphs on `n` vertices up to isomorphism (vertex augmentation with
/// isomorphism dedup). Practical for `n <= 9`.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let mut level = vec![Graph::empty(0).expect("empty graph")];
    for k in 0..n {
        let mut reg = GraphRegistry::new();
        for g in &level {
            for mask in 0..(1u32 << k) {
                let mut h = *g;
                h.add_vertex(VertexSet(mask)).expect("bounded size");
                reg.insert(h, ());
            }
        }
        level = reg.into_entries().into_iter().map(|(g, _)| g).collect();
    }
    level
}

/// Connected graphs on `n` vertices up to isomorphism.
pub fn all_connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(Graph::is_connected).collect()
}

#[allow(dead_code)]
fn pairwise_distinct(gs: &[Graph]) -> bool {
    gs.iter()
        .enumerate()
        .all(|(i, a)| gs[..i].iter().all(|b| !is_isomorphic(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_counts() {
        // OEIS A000088 and A001349.
        let all = [1, 1, 2, 4, 11, 34, 156, 1044];
        let connected = [1, 1, 1, 2, 6, 21, 112, 853];
        for n in 0..=7 {
            assert_eq!(all_graphs(n).len(), all[n], "n={n}");
            assert_eq!(all_connected_graphs(n).len(), connected[n], "n={n}");
        }
        assert!(pairwise_distinct(&all_graphs(5)));
    }
}
