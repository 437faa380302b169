//! Exact isomorphism testing: color refinement as a filter and to restrict
//! candidates, then ordered backtracking with adjacency pruning.

use super::wl::{degree_colors, refine_round};
use super::{Graph, VertexMap, VertexSet, MAX_VERTICES};

/// Returns a map `m` with `g1[i][j] == g2[m(i)][m(j)]` if the graphs are
/// isomorphic.
pub fn isomorphic(g1: &Graph, g2: &Graph) -> Option<VertexMap> {
    find_isomorphism(g1, g2).map(|m| VertexMap::from_raw(m[..g1.n()].to_vec()))
}

pub fn is_isomorphic(g1: &Graph, g2: &Graph) -> bool {
    find_isomorphism(g1, g2).is_some()
}

struct Refined {
    colors: [u64; MAX_VERTICES],
}

fn sorted_colors(c: &[u64; MAX_VERTICES], n: usize) -> [u64; MAX_VERTICES] {
    let mut s = *c;
    s[..n].sort_unstable();
    s
}

fn distinct(sorted: &[u64]) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    1 + sorted.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Jointly refines both graphs to the stable partition. Returns `None` as soon
/// as the color multisets differ.
fn refine_pair(g1: &Graph, g2: &Graph) -> Option<(Refined, Refined)> {
    let n = g1.n();
    let mut c1 = degree_colors(g1);
    let mut c2 = degree_colors(g2);
    let mut s1 = sorted_colors(&c1, n);
    if s1[..n] != sorted_colors(&c2, n)[..n] {
        return None;
    }
    let mut classes = distinct(&s1[..n]);
    let mut t1 = [0u64; MAX_VERTICES];
    let mut t2 = [0u64; MAX_VERTICES];
    loop {
        if classes == n {
            break;
        }
        refine_round(g1, &c1, &mut t1);
        refine_round(g2, &c2, &mut t2);
        let ns1 = sorted_colors(&t1, n);
        if ns1[..n] != sorted_colors(&t2, n)[..n] {
            return None;
        }
        let new_classes = distinct(&ns1[..n]);
        c1 = t1;
        c2 = t2;
        s1 = ns1;
        if new_classes == classes {
            break;
        }
        classes = new_classes;
    }
    let _ = s1;
    Some((Refined { colors: c1 }, Refined { colors: c2 }))
}

pub(crate) fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<[u8; MAX_VERTICES]> {
    let n = g1.n();
    if n != g2.n() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    if n == 0 {
        return Some([0; MAX_VERTICES]);
    }
    let (r1, r2) = refine_pair(g1, g2)?;

    // Class of each g1 vertex, expressed as the mask of same-colored g2 vertices.
    let mut class_mask = [0u32; MAX_VERTICES];
    for v in 0..n {
        let c = r1.colors[v];
        let mut m = 0u32;
        for w in 0..n {
            if r2.colors[w] == c {
                m |= 1 << w;
            }
        }
        class_mask[v] = m;
    }

    // Static search order: small classes first, then most-connected to the
    // already ordered prefix.
    let mut order = [0u8; MAX_VERTICES];
    let mut placed = 0u32;
    for slot in order.iter_mut().take(n) {
        let mut best = usize::MAX;
        let mut best_key = (0u32, u32::MAX);
        for v in 0..n {
            if placed >> v & 1 == 1 {
                continue;
            }
            let key = (
                (g1.neighbor_mask(v) & placed).count_ones(),
                class_mask[v].count_ones(),
            );
            let better = best == usize::MAX
                || key.0 > best_key.0
                || (key.0 == best_key.0 && key.1 < best_key.1);
            if better {
                best = v;
                best_key = key;
            }
        }
        *slot = best as u8;
        placed |= 1 << best;
    }

    let mut map = [0u8; MAX_VERTICES];
    let mut search = Search {
        g1,
        g2,
        n,
        order: &order,
        class_mask: &class_mask,
        map: &mut map,
    };
    if search.dfs(0, 0) {
        Some(map)
    } else {
        None
    }
}

struct Search<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    n: usize,
    order: &'a [u8; MAX_VERTICES],
    class_mask: &'a [u32; MAX_VERTICES],
    map: &'a mut [u8; MAX_VERTICES],
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize, used: u32) -> bool {
        if depth == self.n {
            return true;
        }
        let v = self.order[depth] as usize;
        let nv = self.g1.neighbor_mask(v);
        let mut cand = self.class_mask[v] & !used;
        for d in 0..depth {
            if cand == 0 {
                return false;
            }
            let u = self.order[d] as usize;
            let mu = self.map[u] as usize;
            if nv >> u & 1 == 1 {
                cand &= self.g2.neighbor_mask(mu);
            } else {
                cand &= !self.g2.neighbor_mask(mu);
            }
        }
        for w in VertexSet(cand) {
            self.map[v] = w as u8;
            if self.dfs(depth + 1, used | 1 << w) {
                return true;
            }
        }
        false
    }
}
