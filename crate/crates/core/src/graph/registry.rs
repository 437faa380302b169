use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use super::iso::find_isomorphism;
use super::{Graph, GraphHash, VertexMap};

/// Hasher for keys that are already uniformly mixed 64-bit digests.
#[derive(Default, Clone, Copy)]
pub struct PassThroughHasher(u64);

impl Hasher for PassThroughHasher {
    #[inline]
    fn finish(&self) -> u64 {
        self.0
    }

    #[inline]
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ b as u64;
        }
    }

    #[inline]
    fn write_u64(&mut self, i: u64) {
        self.0 = i;
    }
}

/// `HashMap` keyed by precomputed digests.
pub type HashIndex<K, V> = HashMap<K, V, BuildHasherDefault<PassThroughHasher>>;

/// Set of pairwise non-isomorphic graphs with attached values, bucketed by
/// WL hash and resolved by exact isomorphism.
#[derive(Clone)]
pub struct GraphRegistry<V> {
    buckets: HashIndex<u64, Vec<u32>>,
    entries: Vec<(Graph, V)>,
}

impl<V> Default for GraphRegistry<V> {
    fn default() -> Self {
        GraphRegistry {
            buckets: HashIndex::default(),
            entries: Vec::new(),
        }
    }
}

impl<V> GraphRegistry<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in insertion order.
    pub fn entries(&self) -> &[(Graph, V)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(Graph, V)> {
        self.entries
    }

    fn position_with_hash(&self, g: &Graph, h: GraphHash) -> Option<(usize, [u8; super::MAX_VERTICES])> {
        let bucket = self.buckets.get(&h.0)?;
        bucket.iter().find_map(|&i| {
            find_isomorphism(g, &self.entries[i as usize].0).map(|m| (i as usize, m))
        })
    }

    /// Index of the stored graph isomorphic to `g`.
    pub fn position(&self, g: &Graph) -> Option<usize> {
        self.position_with_hash(g, GraphHash::of(g)).map(|(i, _)| i)
    }

    /// Stored entry isomorphic to `g`, with a map from `g` onto it.
    pub fn find(&self, g: &Graph) -> Option<(usize, &V, VertexMap)> {
        self.position_with_hash(g, GraphHash::of(g)).map(|(i, m)| {
            (
                i,
                &self.entries[i].1,
                VertexMap::from_raw(m[..g.n()].to_vec()),
            )
        })
    }

    pub fn contains(&self, g: &Graph) -> bool {
        self.position(g).is_some()
    }

    /// Inserts `g` unless an isomorphic graph is present.
    ///
    /// Returns `(index, inserted)`.
    pub fn insert(&mut self, g: Graph, value: V) -> (usize, bool) {
        let h = GraphHash::of(&g);
        self.insert_hashed(g, h, value)
    }

    pub fn insert_hashed(&mut self, g: Graph, h: GraphHash, value: V) -> (usize, bool) {
        if let Some((i, _)) = self.position_with_hash(&g, h) {
            return (i, false);
        }
        let idx = self.entries.len();
        self.entries.push((g, value));
        self.buckets.entry(h.0).or_default().push(idx as u32);
        (idx, true)
    }

    pub fn get(&self, index: usize) -> &(Graph, V) {
        &self.entries[index]
    }

    pub fn get_mut(&mut self, index: usize) -> &mut V {
        &mut self.entries[index].1
    }

    /// Largest number of entries sharing one hash bucket.
    pub fn max_bucket(&self) -> usize {
        self.buckets.values().map(Vec::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedups_by_isomorphism() {
        let mut reg = GraphRegistry::new();
        assert_eq!(reg.insert(Graph::cycle(5), 'a'), (0, true));
        assert_eq!(reg.insert(Graph::cycle(5).permuted(&[1, 3, 0, 2, 4]), 'b'), (0, false));
        assert_eq!(reg.insert(Graph::path(5), 'c'), (1, true));
        // 2-regular collision pair lands in one bucket but stays distinct.
        let c6 = Graph::cycle(6);
        let two_k3 = Graph::complete(3).disjoint_union(&Graph::complete(3)).unwrap();
        assert_eq!(GraphHash::of(&c6), GraphHash::of(&two_k3));
        reg.insert(c6, 'd');
        reg.insert(two_k3, 'e');
        assert_eq!(reg.len(), 4);
        assert_eq!(reg.max_bucket(), 2);
        let (i, v, m) = reg.find(&two_k3.permuted(&[5, 4, 3, 2, 1, 0])).unwrap();
        assert_eq!((i, *v), (3, 'e'));
        assert_eq!(two_k3.permuted(&[5, 4, 3, 2, 1, 0]).relabeled(&m), two_k3);
    }
}
