use crate::graph::{Graph, GraphHash, HashIndex, MAX_VERTICES};

/// Words needed for the packed upper triangle of an `n`-vertex graph.
#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(64)
}

/// Appends the lower-left triangle of `g` row by row: row `j` contributes
/// its `j` bits for neighbours `i < j`.
pub(crate) fn pack_into(g: &Graph, out: &mut Vec<u64>) {
    let words = words_for(g.n());
    let base = out.len();
    out.resize(base + words, 0);
    let mut pos = 0usize;
    for j in 1..g.n() {
        let bits = (g.neighbor_mask(j) & ((1u32 << j) - 1)) as u64;
        let (w, off) = (pos / 64, pos % 64);
        out[base + w] |= bits << off;
        if off + j > 64 {
            out[base + w + 1] |= bits >> (64 - off);
        }
        pos += j;
    }
}

pub(crate) fn unpack(n: usize, words: &[u64]) -> Graph {
    let mut rows = [0u32; MAX_VERTICES];
    let mut pos = 0usize;
    for j in 1..n {
        let (w, off) = (pos / 64, pos % 64);
        let mut bits = words[w] >> off;
        if off + j > 64 {
            bits |= words[w + 1] << (64 - off);
        }
        let mask = (bits & ((1u64 << j) - 1)) as u32;
        rows[j] |= mask;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            rows[i] |= 1 << j;
            m &= m - 1;
        }
        pos += j;
    }
    Graph::from_rows_unchecked(n, rows)
}

/// Location of a stored member: orbit id in the high half, member index in
/// the low half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Loc(pub u64);

impl Loc {
    #[inline]
    pub fn new(orbit: u32, member: u32) -> Self {
        Loc((orbit as u64) << 32 | member as u64)
    }

    #[inline]
    pub fn orbit(self) -> u32 {
        (self.0 >> 32) as u32
    }

    #[inline]
    pub fn member(self) -> u32 {
        self.0 as u32
    }
}

/// WL hash → locations. Most hashes are unique, so the first location lives
/// in a flat map and collisions spill into a side table.
#[derive(Default, Clone)]
pub(crate) struct GraphIndex {
    primary: HashIndex<u64, u64>,
    overflow: HashIndex<u64, Vec<u64>>,
}

impl GraphIndex {
    pub fn with_capacity(n: usize) -> Self {
        GraphIndex {
            primary: HashIndex::with_capacity_and_hasher(n, Default::default()),
            overflow: HashIndex::default(),
        }
    }

    pub fn insert(&mut self, h: GraphHash, loc: Loc) {
        use std::collections::hash_map::Entry;
        match self.primary.entry(h.0) {
            Entry::Vacant(e) => {
                e.insert(loc.0);
            }
            Entry::Occupied(_) => self.overflow.entry(h.0).or_default().push(loc.0),
        }
    }

    /// Calls `f` on each location with hash `h` until it returns `Some`.
    #[inline]
    pub fn find_map<T>(&self, h: GraphHash, mut f: impl FnMut(Loc) -> Option<T>) -> Option<T> {
        let first = *self.primary.get(&h.0)?;
        if let Some(t) = f(Loc(first)) {
            return Some(t);
        }
        self.overflow.get(&h.0)?.iter().find_map(|&l| f(Loc(l)))
    }

    pub fn approx_bytes(&self) -> usize {
        // hashbrown: key + value + one control byte per slot, 7/8 load.
        self.primary.capacity() * 17 * 8 / 7 + self.overflow.len() * 64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_graphs;

    #[test]
    fn pack_round_trip() {
        for n in 0..=7 {
            for g in all_graphs(n) {
                let mut buf = vec![7u64];
                pack_into(&g, &mut buf);
                assert_eq!(buf.len(), 1 + words_for(n));
                assert_eq!(unpack(n, &buf[1..]), g);
            }
        }
        let big = Graph::complete(24);
        let mut buf = Vec::new();
        pack_into(&big, &mut buf);
        assert_eq!(buf.len(), 5);
        assert_eq!(unpack(24, &buf), big);
        let mut c = Graph::cycle(15);
        c.add_edge(0, 14);
        c.add_edge(3, 11);
        let mut buf = Vec::new();
        pack_into(&c, &mut buf);
        assert_eq!(buf.len(), 2);
        assert_eq!(unpack(15, &buf), c);
    }

    #[test]
    fn loc_packing() {
        let l = Loc::new(123_456, 7);
        assert_eq!((l.orbit(), l.member()), (123_456, 7));
    }
}
