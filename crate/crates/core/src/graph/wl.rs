use super::{Graph, VertexSet, MAX_VERTICES};

/// Refinement rounds used by the tablebase index.
pub const DEFAULT_WL_ITERATIONS: usize = 3;

/// 64-bit Weisfeiler-Lehman digest. Equal for isomorphic graphs; distinct
/// non-isomorphic graphs may collide.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphHash(pub u64);

impl GraphHash {
    /// Digest with [`DEFAULT_WL_ITERATIONS`] rounds.
    #[inline]
    pub fn of(g: &Graph) -> GraphHash {
        wl_hash(g, DEFAULT_WL_ITERATIONS)
    }
}

#[inline]
pub(crate) fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const NEIGHBOR_SALT: u64 = 0x9e37_79b9_7f4a_7c15;
const FINAL_SALT: u64 = 0x2545_f491_4f6c_dd1d;

/// One round of color refinement. Colors are order-independent functions of
/// the previous colors, so the same color value means the same thing in
/// every graph.
#[inline]
pub(crate) fn refine_round(g: &Graph, colors: &[u64; MAX_VERTICES], out: &mut [u64; MAX_VERTICES]) {
    for v in 0..g.n() {
        let mut acc = 0u64;
        for u in VertexSet(g.neighbor_mask(v)) {
            acc = acc.wrapping_add(mix(colors[u] ^ NEIGHBOR_SALT));
        }
        out[v] = mix(colors[v].rotate_left(23) ^ acc);
    }
}

#[inline]
pub(crate) fn degree_colors(g: &Graph) -> [u64; MAX_VERTICES] {
    let mut colors = [0u64; MAX_VERTICES];
    for (v, c) in colors.iter_mut().enumerate().take(g.n()) {
        *c = mix(g.degree(v) as u64 + 1);
    }
    colors
}

/// Weisfeiler-Lehman hash seeded with vertex degrees and mixed with the
/// vertex count.
pub fn wl_hash(g: &Graph, iterations: usize) -> GraphHash {
    let mut colors = degree_colors(g);
    let mut next = [0u64; MAX_VERTICES];
    for _ in 0..iterations {
        refine_round(g, &colors, &mut next);
        std::mem::swap(&mut colors, &mut next);
    }
    let mut acc = 0u64;
    for &c in &colors[..g.n()] {
        acc = acc.wrapping_add(mix(c ^ FINAL_SALT));
    }
    GraphHash(mix(acc ^ mix(g.n() as u64).rotate_left(7)))
}
