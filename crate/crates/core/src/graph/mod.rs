//! Labeled simple undirected graphs on at most [`MAX_VERTICES`] vertices.
//!
//! Adjacency is stored as one bit mask per vertex, so neighborhood
//! operations (local complementation, fusion rewrites, cut ranks) are a
//! handful of word operations.

mod caterpillar;
mod enumerate;
mod io;
mod iso;
mod registry;
mod wl;

pub use caterpillar::{
    caterpillar_count_formula, caterpillar_from_leaves, enumerate_caterpillars, enumerate_detached_caterpillars,
    is_caterpillar, is_caterpillar_forest, spine_leaf_counts,
};
pub use enumerate::{all_connected_graphs, all_graphs};
pub use io::{read_graph, read_graph6, read_json_graph, write_graph6, write_json_graph, GraphFormat};
pub use iso::{is_isomorphic, isomorphic};
pub use registry::{GraphRegistry, HashIndex};
pub use wl::{wl_hash, GraphHash, DEFAULT_WL_ITERATIONS};

use std::fmt;

use thiserror::Error;

/// Hard cap on the number of vertices of a [`Graph`].
pub const MAX_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has {0} vertices, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("induced subgraph needs a nonempty vertex set")]
    EmptyVertexSet,
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// A set of vertices, stored as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(pub u32);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 32 {
            VertexSet(u32::MAX)
        } else {
            VertexSet((1u32 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        VertexSet(vertices.into_iter().fold(0, |m, v| m | (1 << v)))
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    /// Complement relative to `{0, .., n-1}`.
    pub fn complement(self, n: usize) -> VertexSet {
        VertexSet(!self.0 & VertexSet::full(n).0)
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        VertexSet::from_vertices(iter)
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;
    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

/// Iterator over the members of a [`VertexSet`] in increasing order.
#[derive(Clone)]
pub struct VertexIter(u32);

impl Iterator for VertexIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            let v = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(v)
        }
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for VertexIter {}

/// Injection from source vertex labels to target vertex labels.
///
/// `map[i]` is the image of source vertex `i`, or [`VertexMap::UNMAPPED`] when
/// `i` has no image (e.g. a qubit consumed by a fusion).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexMap {
    map: Vec<u8>,
}

impl VertexMap {
    pub const UNMAPPED: u8 = u8::MAX;

    pub fn identity(n: usize) -> Self {
        VertexMap {
            map: (0..n as u8).collect(),
        }
    }

    /// Builds a map from explicit images; `None` entries are unmapped.
    pub fn from_images<I: IntoIterator<Item = Option<usize>>>(images: I) -> Self {
        VertexMap {
            map: images
                .into_iter()
                .map(|t| t.map_or(Self::UNMAPPED, |t| t as u8))
                .collect(),
        }
    }

    pub fn from_permutation(perm: &[usize]) -> Self {
        VertexMap {
            map: perm.iter().map(|&t| t as u8).collect(),
        }
    }

    pub(crate) fn from_raw(map: Vec<u8>) -> Self {
        VertexMap { map }
    }

    /// Number of source labels.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        match self.map.get(v) {
            Some(&t) if t != Self::UNMAPPED => Some(t as usize),
            _ => None,
        }
    }

    pub fn images(&self) -> impl Iterator<Item = Option<usize>> + '_ {
        (0..self.map.len()).map(move |v| self.get(v))
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &t)| t as usize == i)
    }

    /// True when no two sources share an image.
    pub fn is_injective(&self) -> bool {
        let mut seen = 0u64;
        for &t in &self.map {
            if t == Self::UNMAPPED {
                continue;
            }
            if t >= 64 || seen >> t & 1 == 1 {
                return false;
            }
            seen |= 1 << t;
        }
        true
    }

    /// Inverse injection on `target_len` target labels.
    pub fn inverse(&self, target_len: usize) -> VertexMap {
        let mut inv = vec![Self::UNMAPPED; target_len];
        for (s, &t) in self.map.iter().enumerate() {
            if t != Self::UNMAPPED {
                inv[t as usize] = s as u8;
            }
        }
        VertexMap { map: inv }
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &VertexMap) -> VertexMap {
        VertexMap {
            map: self
                .map
                .iter()
                .map(|&t| {
                    if t == Self::UNMAPPED {
                        Self::UNMAPPED
                    } else {
                        other.map.get(t as usize).copied().unwrap_or(Self::UNMAPPED)
                    }
                })
                .collect(),
        }
    }
}

impl fmt::Debug for VertexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.images()).finish()
    }
}

/// Labeled simple undirected graph with dense vertex labels `0..n`.
///
/// Row `i` of the adjacency holds the neighbor mask of vertex `i`; rows at
/// or beyond `n` are always zero so that derived `Eq`/`Hash` are labeled
/// equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    n: u8,
    rows: [u32; MAX_VERTICES],
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph {
            n: n as u8,
            rows: [0; MAX_VERTICES],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            for v in [i, j] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Builds a graph from neighbor masks, validating symmetry and loops.
    pub fn from_rows(rows: &[u32]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut g = Graph::empty(n)?;
        let full = VertexSet::full(n).0;
        for (i, &r) in rows.iter().enumerate() {
            if r & !full != 0 {
                return Err(GraphError::VertexOutOfRange {
                    vertex: (r & !full).trailing_zeros() as usize,
                    n,
                });
            }
            if r >> i & 1 == 1 {
                return Err(GraphError::SelfLoop(i));
            }
            g.rows[i] = r;
        }
        for i in 0..n {
            for j in VertexSet(g.rows[i]) {
                if g.rows[j] >> i & 1 == 0 {
                    return Err(GraphError::Parse {
                        offset: 0,
                        message: format!("adjacency not symmetric at ({i}, {j})"),
                    });
                }
            }
        }
        Ok(g)
    }

    /// Unchecked constructor for rows already known to be valid.
    #[inline]
    pub(crate) fn from_rows_unchecked(n: usize, rows: [u32; MAX_VERTICES]) -> Self {
        debug_assert!(n <= MAX_VERTICES);
        Graph { n: n as u8, rows }
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path within size cap")
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n >= 3 {
            edges.push((n - 1, 0));
        }
        Graph::from_edges(n, &edges).expect("cycle within size cap")
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n).expect("complete graph within size cap");
        let full = VertexSet::full(n).0;
        for i in 0..n {
            g.rows[i] = full & !(1 << i);
        }
        g
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star within size cap")
    }

    /// Wheel: hub 0 joined to every vertex of a cycle on `1..=rim`.
    pub fn wheel(rim: usize) -> Self {
        let mut edges: Vec<_> = (1..=rim).map(|i| (0, i)).collect();
        for i in 1..=rim {
            edges.push((i, i % rim + 1));
        }
        Graph::from_edges(rim + 1, &edges).expect("wheel within size cap")
    }

    /// The 3-cube graph on vertices labeled by 3-bit strings.
    pub fn cube() -> Self {
        let mut edges = Vec::new();
        for v in 0..8usize {
            for bit in 0..3 {
                let u = v ^ (1 << bit);
                if v < u {
                    edges.push((v, u));
                }
            }
        }
        Graph::from_edges(8, &edges).expect("cube")
    }

    /// Repeater graph: a complete graph on `core` vertices `0..core`, each
    /// with one leaf `core + i`.
    pub fn repeater(core: usize) -> Self {
        let mut edges = Vec::new();
        for i in 0..core {
            for j in i + 1..core {
                edges.push((i, j));
            }
            edges.push((i, core + i));
        }
        Graph::from_edges(2 * core, &edges).expect("repeater within size cap")
    }

    /// Layered graph: `layers` layers of `width` vertices, consecutive layers
    /// complete bipartite, with an input vertex 0 joined to the first layer
    /// and an output vertex (the last label) joined to the last.
    pub fn crazy(layers: usize, width: usize) -> Self {
        let n = layers * width + 2;
        let node = |l: usize, i: usize| 1 + l * width + i;
        let mut edges = Vec::new();
        for i in 0..width {
            edges.push((0, node(0, i)));
            edges.push((node(layers - 1, i), n - 1));
        }
        for l in 1..layers {
            for i in 0..width {
                for j in 0..width {
                    edges.push((node(l - 1, i), node(l, j)));
                }
            }
        }
        Graph::from_edges(n, &edges).expect("crazy graph within size cap")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    #[inline]
    pub fn rows(&self) -> &[u32] {
        &self.rows[..self.n()]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.rows[v])
    }

    #[inline]
    pub fn neighbor_mask(&self, v: usize) -> u32 {
        self.rows[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn edge_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |i| {
            VertexSet(self.rows[i] & !((2u32 << i).wrapping_sub(1))).iter().map(move |j| (i, j))
        })
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i != j && i < self.n() && j < self.n());
        self.rows[i] |= 1 << j;
        self.rows[j] |= 1 << i;
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.rows[i] &= !(1 << j);
        self.rows[j] &= !(1 << i);
    }

    pub fn toggle_edge(&mut self, i: usize, j: usize) {
        debug_assert!(i != j);
        self.rows[i] ^= 1 << j;
        self.rows[j] ^= 1 << i;
    }

    #[inline]
    pub(crate) fn xor_row_unchecked(&mut self, v: usize, mask: u32) {
        self.rows[v] ^= mask;
    }

    /// Sorted degree sequence (ascending).
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<_> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    pub fn isolated_vertices(&self) -> VertexSet {
        VertexSet::from_vertices((0..self.n()).filter(|&v| self.rows[v] == 0))
    }

    /// Connected components as vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut left = self.vertices().0;
        let mut comps = Vec::new();
        while left != 0 {
            let start = left.trailing_zeros() as usize;
            let mut comp = 1u32 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for v in VertexSet(frontier) {
                    next |= self.rows[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            left &= !comp;
            comps.push(VertexSet(comp));
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Graph obtained by sending vertex `i` to `perm[i]`.
    ///
    /// `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n());
        let mut rows = [0u32; MAX_VERTICES];
        for i in 0..self.n() {
            let mut r = 0;
            for j in VertexSet(self.rows[i]) {
                r |= 1 << perm[j];
            }
            rows[perm[i]] = r;
        }
        Graph::from_rows_unchecked(self.n(), rows)
    }

    /// Relabels by a bijective [`VertexMap`] on `0..n`.
    pub fn relabeled(&self, map: &VertexMap) -> Graph {
        let perm: Vec<usize> = (0..self.n())
            .map(|v| map.get(v).expect("relabeling map must be total"))
            .collect();
        self.permuted(&perm)
    }

    /// Induced subgraph on `keep`, relabeled densely in increasing order.
    pub fn induced_subgraph(&self, keep: VertexSet) -> Result<Graph, GraphError> {
        if keep.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        if let Some(v) = keep.difference(self.vertices()).iter().next() {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() });
        }
        Ok(self.induced_unchecked(keep))
    }

    pub(crate) fn induced_unchecked(&self, keep: VertexSet) -> Graph {
        let mut new_label = [0u8; MAX_VERTICES];
        for (k, v) in keep.iter().enumerate() {
            new_label[v] = k as u8;
        }
        let mut rows = [0u32; MAX_VERTICES];
        for (k, v) in keep.iter().enumerate() {
            let mut r = 0;
            for u in VertexSet(self.rows[v] & keep.0) {
                r |= 1 << new_label[u];
            }
            rows[k] = r;
        }
        Graph::from_rows_unchecked(keep.len(), rows)
    }

    /// Removes vertex `v`; higher labels shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        debug_assert!(v < self.n());
        let low = (1u32 << v) - 1;
        let mut rows = [0u32; MAX_VERTICES];
        let mut k = 0;
        for (u, &r) in self.rows[..self.n()].iter().enumerate() {
            if u != v {
                rows[k] = (r & low) | ((r >> 1) & !low);
                k += 1;
            }
        }
        Graph::from_rows_unchecked(self.n() - 1, rows)
    }

    /// Removes the vertices in `drop`, relabeling the rest densely.
    pub fn without(&self, drop: VertexSet) -> Graph {
        self.induced_unchecked(self.vertices().difference(drop))
    }

    /// Local complementation at `a`: toggles every edge inside `N(a)`.
    pub fn local_complement(&self, a: usize) -> Graph {
        let mut g = *self;
        g.local_complement_in_place(a);
        g
    }

    #[inline]
    pub fn local_complement_in_place(&mut self, a: usize) {
        let nb = self.rows[a];
        for u in VertexSet(nb) {
            self.rows[u] ^= nb & !(1 << u);
        }
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let n = self.n() + other.n();
        let mut g = Graph::empty(n)?;
        g.rows[..self.n()].copy_from_slice(self.rows());
        for i in 0..other.n() {
            g.rows[self.n() + i] = other.rows[i] << self.n();
        }
        Ok(g)
    }

    /// Adds a new vertex adjacent to `nbrs`; returns its label.
    pub fn add_vertex(&mut self, nbrs: VertexSet) -> Result<usize, GraphError> {
        let v = self.n();
        if v + 1 > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(v + 1));
        }
        self.n += 1;
        self.rows[v] = nbrs.0;
        for u in nbrs {
            self.rows[u] |= 1 << v;
        }
        Ok(v)
    }

    /// Checks the structural invariants (symmetry, no loops, zero padding).
    pub fn is_valid(&self) -> bool {
        let full = VertexSet::full(self.n()).0;
        (0..MAX_VERTICES).all(|i| {
            if i >= self.n() {
                return self.rows[i] == 0;
            }
            let r = self.rows[i];
            r & !full == 0 && r >> i & 1 == 0 && VertexSet(r).iter().all(|j| self.rows[j] >> i & 1 == 1)
        })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_complement_examples() {
        let k3 = Graph::complete(3);
        let lc = k3.local_complement(0);
        assert_eq!(lc, Graph::from_edges(3, &[(0, 1), (0, 2)]).unwrap());
        assert_eq!(Graph::star(3).local_complement(0), Graph::complete(4));
        let c5 = Graph::cycle(5);
        for v in 0..5 {
            assert_eq!(c5.local_complement(v).local_complement(v), c5);
        }
    }

    #[test]
    fn induced_subgraph_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(
            k3.induced_subgraph(VertexSet::from_vertices([0, 1])).unwrap(),
            Graph::path(2)
        );
        let c5 = Graph::cycle(5);
        let p = c5.induced_subgraph(VertexSet::from_vertices([1, 2, 3, 4])).unwrap();
        assert_eq!(p, Graph::path(4));
        let cube = Graph::cube();
        for drop in 0..8 {
            let h = cube.without(VertexSet::singleton(drop));
            assert_eq!(h.n(), 7);
            assert_eq!(h.edge_count(), 9);
        }
        assert_eq!(
            k3.induced_subgraph(VertexSet::EMPTY),
            Err(GraphError::EmptyVertexSet)
        );
        assert_eq!(k3.induced_subgraph(k3.vertices()).unwrap(), k3);
    }

    #[test]
    fn constructors_validate() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::empty(25), Err(GraphError::TooManyVertices(25)));
        assert!(Graph::from_rows(&[0b10, 0b00]).is_err());
        for g in [Graph::cube(), Graph::wheel(5), Graph::star(4), Graph::cycle(7)] {
            assert!(g.is_valid());
        }
    }

    #[test]
    fn components_and_union() {
        let g = Graph::path(3).disjoint_union(&Graph::path(2)).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(
            g.components(),
            vec![VertexSet::from_vertices([0, 1, 2]), VertexSet::from_vertices([3, 4])]
        );
        assert!(!g.is_connected());
        assert!(Graph::cycle(6).is_connected());
    }

    #[test]
    fn vertex_map_algebra() {
        let m = VertexMap::from_permutation(&[2, 0, 1]);
        let inv = m.inverse(3);
        assert!(m.then(&inv).is_identity());
        assert!(m.is_injective());
        let partial = VertexMap::from_images([Some(1), None, Some(0)]);
        assert_eq!(partial.get(1), None);
        assert!(!VertexMap::from_permutation(&[0, 0]).is_injective());
    }
}
