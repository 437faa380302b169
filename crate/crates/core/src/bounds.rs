//! Entanglement height profiles and the fusion-count bounds built on them.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};
use crate::tablebase::Tablebase;

/// Largest vertex count solved exactly by the subset dynamic programs.
pub const EXACT_LIMIT: usize = 20;

/// Orderings tried by the sampled fallbacks above [`EXACT_LIMIT`].
pub const DEFAULT_SAMPLES: usize = 2000;

/// GF(2) rank of the adjacency block between `part` and its complement.
/// Equals the entanglement entropy of the graph state across that cut.
pub fn cut_rank(g: &Graph, part: VertexSet) -> usize {
    cut_rank_mask(g, part.0 & g.vertices().0)
}

#[inline]
fn cut_rank_mask(g: &Graph, part: u32) -> usize {
    let rest = g.vertices().0 & !part;
    // xor basis keyed by leading bit
    let mut basis = [0u32; 32];
    let mut rank = 0;
    for v in VertexSet(part) {
        let mut r = g.neighbor_mask(v) & rest;
        while r != 0 {
            let top = 31 - r.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = r;
                rank += 1;
                break;
            }
            r ^= basis[top];
        }
    }
    rank
}

/// Heights `h(k)` of the first `k` vertices of an ordering, `k = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightProfile {
    pub order: Vec<usize>,
    pub heights: Vec<usize>,
}

impl HeightProfile {
    pub fn of(g: &Graph, order: &[usize]) -> HeightProfile {
        let mut prefix = 0u32;
        let mut heights = Vec::with_capacity(order.len() + 1);
        heights.push(0);
        for &v in order {
            prefix |= 1 << v;
            heights.push(cut_rank_mask(g, prefix));
        }
        HeightProfile {
            order: order.to_vec(),
            heights,
        }
    }

    pub fn max(&self) -> usize {
        self.heights.iter().copied().max().unwrap_or(0)
    }

    /// Steps `k → k+1` that change the height while above `baseline`.
    pub fn climb(&self, baseline: usize) -> usize {
        self.heights
            .windows(2)
            .filter(|w| w[0] != w[1] && (w[0] > baseline || w[1] > baseline))
            .count()
    }
}

/// A bound with its witness ordering; `exact` is false when the value came
/// from sampled orderings and is only an upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingBound {
    pub value: usize,
    pub exact: bool,
    pub samples: usize,
    pub profile: HeightProfile,
}

fn cut_ranks(g: &Graph) -> Vec<u8> {
    (0..1u32 << g.n()).map(|s| cut_rank_mask(g, s) as u8).collect()
}

/// Walks a DP table back from the full set to recover an ordering.
fn unwind(g: &Graph, choose: impl Fn(u32) -> usize) -> Vec<usize> {
    let mut s = g.vertices().0;
    let mut rev = Vec::with_capacity(g.n());
    while s != 0 {
        let v = choose(s);
        rev.push(v);
        s &= !(1 << v);
    }
    rev.reverse();
    rev
}

fn sampled_orders(g: &Graph, samples: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed ^ g.n() as u64);
    let mut base: Vec<usize> = (0..g.n()).collect();
    let greedy = greedy_order(g);
    std::iter::once((0..g.n()).collect())
        .chain(std::iter::once(greedy))
        .chain(std::iter::repeat_with(move || {
            base.shuffle(&mut rng);
            base.clone()
        }))
        .take(samples.max(2))
}

/// Adds at each step the vertex giving the smallest next height.
fn greedy_order(g: &Graph) -> Vec<usize> {
    let mut prefix = 0u32;
    let mut order = Vec::with_capacity(g.n());
    for _ in 0..g.n() {
        let v = VertexSet(g.vertices().0 & !prefix)
            .iter()
            .min_by_key(|&v| cut_rank_mask(g, prefix | 1 << v))
            .expect("vertices left");
        prefix |= 1 << v;
        order.push(v);
    }
    order
}

/// Minimum over orderings of the largest height: the number of static
/// qubits needed for deterministic generation (linear rank-width).
pub fn ns_min(g: &Graph) -> OrderingBound {
    ns_min_with(g, DEFAULT_SAMPLES)
}

pub fn ns_min_with(g: &Graph, samples: usize) -> OrderingBound {
    if g.n() > EXACT_LIMIT {
        let profile = sampled_orders(g, samples)
            .map(|o| HeightProfile::of(g, &o))
            .min_by_key(HeightProfile::max)
            .expect("at least one sample");
        return OrderingBound {
            value: profile.max(),
            exact: false,
            samples: samples.max(2),
            profile,
        };
    }
    let cr = cut_ranks(g);
    // best[S]: min over orderings of S of the largest prefix height
    let mut best = vec![0u8; cr.len()];
    for s in 1..cr.len() {
        let m = VertexSet(s as u32)
            .iter()
            .map(|v| best[s & !(1 << v)])
            .min()
            .expect("non-empty");
        best[s] = m.max(cr[s]);
    }
    let order = unwind(g, |s| {
        VertexSet(s)
            .iter()
            .find(|&v| best[(s & !(1 << v)) as usize].max(cr[s as usize]) == best[s as usize])
            .expect("optimal predecessor")
    });
    let profile = HeightProfile::of(g, &order);
    debug_assert_eq!(profile.max(), best[cr.len() - 1] as usize);
    OrderingBound {
        value: profile.max(),
        exact: true,
        samples: 0,
        profile,
    }
}

/// Minimum over orderings of the height changes above `ns`, an upper bound
/// on the fusions needed with `ns` static qubits.
pub fn climb(g: &Graph, ns: usize) -> OrderingBound {
    climb_with(g, ns, DEFAULT_SAMPLES)
}

pub fn climb_with(g: &Graph, ns: usize, samples: usize) -> OrderingBound {
    if g.n() > EXACT_LIMIT {
        let profile = sampled_orders(g, samples)
            .map(|o| HeightProfile::of(g, &o))
            .min_by_key(|p| p.climb(ns))
            .expect("at least one sample");
        return OrderingBound {
            value: profile.climb(ns),
            exact: false,
            samples: samples.max(2),
            profile,
        };
    }
    let cr = cut_ranks(g);
    let cost = |from: usize, to: usize| {
        let (a, b) = (cr[from] as usize, cr[to] as usize);
        (a != b && (a > ns || b > ns)) as u16
    };
    let mut best = vec![0u16; cr.len()];
    for s in 1..cr.len() {
        best[s] = VertexSet(s as u32)
            .iter()
            .map(|v| {
                let p = s & !(1 << v);
                best[p] + cost(p, s)
            })
            .min()
            .expect("non-empty");
    }
    let order = unwind(g, |s| {
        VertexSet(s)
            .iter()
            .find(|&v| {
                let p = (s & !(1 << v)) as usize;
                best[p] + cost(p, s as usize) == best[s as usize]
            })
            .expect("optimal predecessor")
    });
    let profile = HeightProfile::of(g, &order);
    debug_assert_eq!(profile.climb(ns), best[cr.len() - 1] as usize);
    OrderingBound {
        value: profile.climb(ns),
        exact: true,
        samples: 0,
        profile,
    }
}

/// Lower bound on the fusions needed for `g`: the largest table depth among
/// its induced subgraphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphBound {
    pub bound: u32,
    /// Vertices of an induced subgraph attaining the bound.
    pub witness: Option<Vec<usize>>,
    pub subsets_checked: u64,
}

pub fn subgraph_lower_bound(tb: &Tablebase, g: &Graph) -> SubgraphBound {
    let m = tb.max_initial_qubits();
    let ceiling = tb.max_depth().unwrap_or(0);
    let mut out = SubgraphBound {
        bound: 0,
        witness: None,
        subsets_checked: 0,
    };
    let n = g.n();
    // The table only holds depth d on k vertices when k + 2d <= M, so
    // sizes that cannot beat the current bound are skipped.
    for k in (1..=n.min(m)).rev() {
        if ((m - k) / 2) as u32 <= out.bound && out.witness.is_some() {
            continue;
        }
        for s in subsets_of_size(n, k) {
            out.subsets_checked += 1;
            let sub = g.induced_subgraph(VertexSet(s)).expect("subset of the vertices");
            if let Some(d) = tb.depth_of(&sub) {
                if out.witness.is_none() || d > out.bound {
                    out.bound = d;
                    out.witness = Some(VertexSet(s).iter().collect());
                    if d == ceiling || ((m - k) / 2) as u32 <= d {
                        break;
                    }
                }
            }
        }
        if out.bound == ceiling && out.witness.is_some() {
            break;
        }
    }
    out
}

/// Masks over `0..n` with exactly `k` bits, in increasing order.
fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let first = if k == 0 { 0 } else { (1u64 << k) - 1 };
    std::iter::successors(Some(first), move |&s| {
        if s == 0 {
            return None;
        }
        // Gosper's hack
        let c = s & s.wrapping_neg();
        let r = s + c;
        Some((((r ^ s) >> 2) / c) | r)
    })
    .take_while(move |&s| s < limit)
    .map(|s| s as u32)
}
