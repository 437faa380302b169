//! Caterpillar trees: trees whose non-leaf vertices form a path (the spine).

use super::{Graph, VertexSet};

/// Closed-form number of non-isomorphic caterpillars on `n` vertices.
pub fn caterpillar_count_formula(n: usize) -> u64 {
    match n {
        0 => 0,
        1..=3 => 1,
        _ => (1u64 << (n - 4)) + (1u64 << (n / 2 - 2)),
    }
}

/// True if `g` is a tree whose non-leaf vertices induce a path (possibly empty).
pub fn is_caterpillar(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 || !g.is_connected() || g.edge_count() != n - 1 {
        return false;
    }
    let spine = VertexSet::from_vertices((0..n).filter(|&v| g.degree(v) >= 2));
    spine.iter().all(|v| (g.neighbor_mask(v) & spine.0).count_ones() <= 2)
}

/// True if every connected component of `g` is a caterpillar.
pub fn is_caterpillar_forest(g: &Graph) -> bool {
    g.components()
        .into_iter()
        .all(|c| is_caterpillar(&g.induced_unchecked(c)))
}

/// Leaf counts along the spine of a connected caterpillar, in path order
/// starting from the lower-indexed spine end. A single vertex gives `[0]`
/// and a single edge gives `[1]`.
pub fn spine_leaf_counts(g: &Graph) -> Option<Vec<usize>> {
    if !is_caterpillar(g) {
        return None;
    }
    let n = g.n();
    if n <= 2 {
        return Some(vec![n - 1]);
    }
    let spine = VertexSet::from_vertices((0..n).filter(|&v| g.degree(v) >= 2));
    let inner = |v: usize| (g.neighbor_mask(v) & spine.0).count_ones();
    let mut cur = spine.iter().find(|&v| inner(v) <= 1)?;
    let mut prev = usize::MAX;
    let mut out = Vec::with_capacity(spine.len());
    loop {
        out.push(g.degree(cur) - inner(cur) as usize);
        let next = VertexSet(g.neighbor_mask(cur) & spine.0).iter().find(|&w| w != prev);
        match next {
            Some(w) => {
                prev = cur;
                cur = w;
            }
            None => break,
        }
    }
    Some(out)
}

/// Caterpillar with spine `0..s` where spine vertex `i` carries `leaves[i]`
/// pendant vertices.
pub fn caterpillar_from_leaves(leaves: &[usize]) -> Graph {
    let s = leaves.len();
    let n = s + leaves.iter().sum::<usize>();
    let mut g = Graph::empty(n).expect("caterpillar within size cap");
    for i in 1..s {
        g.add_edge(i - 1, i);
    }
    let mut next = s;
    for (i, &l) in leaves.iter().enumerate() {
        for _ in 0..l {
            g.add_edge(i, next);
            next += 1;
        }
    }
    g
}

/// Leaf-count sequences of length `s` summing to `total` with positive
/// endpoints, visited in lexicographic order.
fn leaf_sequences(s: usize, total: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(pos: usize, s: usize, left: usize, seq: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if pos == s {
            if left == 0 {
                f(seq);
            }
            return;
        }
        let min = if pos == 0 || pos == s - 1 { 1 } else { 0 };
        if pos == s - 1 {
            if left >= min {
                seq.push(left);
                f(seq);
                seq.pop();
            }
            return;
        }
        // Reserve one leaf for the last spine vertex.
        let reserve = 1;
        if left < min + reserve {
            return;
        }
        for l in min..=left - reserve {
            seq.push(l);
            rec(pos + 1, s, left - l, seq, f);
            seq.pop();
        }
    }
    rec(0, s, total, &mut Vec::with_capacity(s), f);
}

/// All pairwise non-isomorphic caterpillars on exactly `n` vertices.
///
/// A caterpillar with at least three vertices is determined up to
/// isomorphism by its spine leaf-count sequence up to reversal, so
/// sequences are kept only in their lexicographically smaller orientation.
pub fn enumerate_caterpillars(n: usize) -> Vec<Graph> {
    match n {
        0 => return Vec::new(),
        1 | 2 => return vec![Graph::path(n)],
        _ => {}
    }
    let mut out = vec![Graph::star(n - 1)];
    for s in 2..=n - 2 {
        leaf_sequences(s, n - s, &mut |seq| {
            if seq.iter().le(seq.iter().rev()) {
                out.push(caterpillar_from_leaves(seq));
            }
        });
    }
    out
}

/// Disjoint unions of two or more connected caterpillars with at most
/// `max_total` vertices in total.
///
/// Components are emitted as multisets in a canonical (non-decreasing)
/// order of the per-size caterpillar enumeration; output is ordered by total
/// vertex count.
pub fn enumerate_detached_caterpillars(max_total: usize) -> Vec<Graph> {
    let mut parts: Vec<Graph> = Vec::new();
    for n in 1..max_total {
        parts.extend(enumerate_caterpillars(n));
    }
    let mut by_total: Vec<Vec<Graph>> = vec![Vec::new(); max_total + 1];

    fn rec(
        parts: &[Graph],
        from: usize,
        chosen: &mut Vec<usize>,
        total: usize,
        max_total: usize,
        by_total: &mut [Vec<Graph>],
    ) {
        if chosen.len() >= 2 {
            let mut g = parts[chosen[0]];
            for &i in &chosen[1..] {
                g = g.disjoint_union(&parts[i]).expect("bounded by max_total");
            }
            by_total[total].push(g);
        }
        for i in from..parts.len() {
            let t = total + parts[i].n();
            if t > max_total {
                // parts are sorted by size
                break;
            }
            chosen.push(i);
            rec(parts, i, chosen, t, max_total, by_total);
            chosen.pop();
        }
    }

    rec(&parts, 0, &mut Vec::new(), 0, max_total, &mut by_total);
    by_total.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_isomorphic;

    /// Every labeled tree on `n` vertices via Prüfer sequences.
    fn all_labeled_trees(n: usize) -> Vec<Graph> {
        let mut out = Vec::new();
        if n <= 2 {
            return vec![Graph::path(n)];
        }
        let total = n.pow((n - 2) as u32);
        for code in 0..total {
            let mut seq = Vec::with_capacity(n - 2);
            let mut c = code;
            for _ in 0..n - 2 {
                seq.push(c % n);
                c /= n;
            }
            let mut degree = vec![1; n];
            for &s in &seq {
                degree[s] += 1;
            }
            let mut g = Graph::empty(n).unwrap();
            for &s in &seq {
                let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
                g.add_edge(leaf, s);
                degree[leaf] -= 1;
                degree[s] -= 1;
            }
            let rest: Vec<_> = (0..n).filter(|&v| degree[v] == 1).collect();
            g.add_edge(rest[0], rest[1]);
            out.push(g);
        }
        out
    }

    /// Canonical code by brute force over all permutations.
    fn brute_canonical(g: &Graph) -> u64 {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let n = g.n();
        permutations(n)
            .iter()
            .map(|p| {
                let mut code = 0u64;
                for j in 1..n {
                    for i in 0..j {
                        code = code << 1 | g.has_edge(p[i], p[j]) as u64;
                    }
                }
                code
            })
            .min()
            .unwrap()
    }

    #[test]
    fn seven_vertex_census_by_brute_force() {
        let mut codes = std::collections::BTreeSet::new();
        for t in all_labeled_trees(7) {
            if is_caterpillar(&t) {
                codes.insert(brute_canonical(&t));
            }
        }
        assert_eq!(codes.len(), 10);
        assert_eq!(codes.len() as u64, (1 << 3) + (1 << 1));
        let ours = enumerate_caterpillars(7);
        assert_eq!(ours.len(), 10);
        let ours_codes: std::collections::BTreeSet<_> = ours.iter().map(brute_canonical).collect();
        assert_eq!(ours_codes, codes);
    }

    #[test]
    fn small_counts_and_formula() {
        assert_eq!(enumerate_caterpillars(1).len(), 1);
        assert_eq!(enumerate_caterpillars(2).len(), 1);
        assert_eq!(enumerate_caterpillars(3), vec![Graph::star(2)]);
        assert!(is_isomorphic(&enumerate_caterpillars(3)[0], &Graph::path(3)));
        for n in 4..=14 {
            assert_eq!(enumerate_caterpillars(n).len() as u64, caterpillar_count_formula(n), "n={n}");
        }
        let total: usize = (1..=14).map(|n| enumerate_caterpillars(n).len()).sum();
        assert_eq!(total, 2144);
    }

    #[test]
    fn outputs_are_caterpillars_and_distinct() {
        for n in 1..=10 {
            let cats = enumerate_caterpillars(n);
            for (i, a) in cats.iter().enumerate() {
                assert!(is_caterpillar(a));
                assert_eq!(a.n(), n);
                for b in &cats[..i] {
                    assert!(!is_isomorphic(a, b));
                }
            }
        }
        assert!(!is_caterpillar(&Graph::cycle(4)));
        // Spider with three legs of length two is a tree but not a caterpillar.
        let spider = Graph::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert!(!is_caterpillar(&spider));
    }

    #[test]
    fn spine_counts_round_trip() {
        assert_eq!(spine_leaf_counts(&Graph::path(1)), Some(vec![0]));
        assert_eq!(spine_leaf_counts(&Graph::path(2)), Some(vec![1]));
        assert_eq!(spine_leaf_counts(&Graph::path(5)), Some(vec![1, 0, 1]));
        assert_eq!(spine_leaf_counts(&Graph::cycle(5)), None);
        for n in 3..=9 {
            for c in enumerate_caterpillars(n) {
                let counts = spine_leaf_counts(&c).unwrap();
                let rebuilt = if counts.len() == 1 {
                    Graph::star(counts[0])
                } else {
                    caterpillar_from_leaves(&counts)
                };
                assert!(is_isomorphic(&rebuilt, &c));
            }
        }
    }

    #[test]
    fn detached_sets() {
        let two = enumerate_detached_caterpillars(2);
        assert_eq!(two, vec![Graph::empty(2).unwrap()]);

        let four = enumerate_detached_caterpillars(4);
        let k1 = Graph::path(1);
        let p2 = Graph::path(2);
        let p3 = Graph::path(3);
        let u = |gs: &[&Graph]| {
            gs[1..].iter().fold(*gs[0], |acc, g| acc.disjoint_union(g).unwrap())
        };
        let expected = [
            u(&[&k1, &k1]),
            u(&[&k1, &k1, &k1]),
            u(&[&k1, &k1, &k1, &k1]),
            u(&[&k1, &p2]),
            u(&[&k1, &p3]),
            u(&[&p2, &p2]),
            u(&[&k1, &k1, &p2]),
        ];
        assert_eq!(four.len(), expected.len());
        for e in &expected {
            assert_eq!(four.iter().filter(|g| is_isomorphic(g, e)).count(), 1, "{e:?}");
        }
        for g in enumerate_detached_caterpillars(8) {
            assert!(g.components().len() >= 2);
            assert!(is_caterpillar_forest(&g));
        }
        let d8 = enumerate_detached_caterpillars(8);
        for (i, a) in d8.iter().enumerate() {
            for b in &d8[..i] {
                assert!(!is_isomorphic(a, b));
            }
        }
    }
}
