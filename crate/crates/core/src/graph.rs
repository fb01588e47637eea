//! Undirected graphs with an optional equipartition into layers.
//!
//! Vertices are dense `usize` ids. In a [`LayeredGraph`] the id of the
//! vertex with layer-local index `i` in layer `l` is `offset(l) + i`, layers
//! being numbered from 0.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Undirected edge stored with the smaller endpoint first.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(a: usize, b: usize) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Sorts and deduplicates a list of normalized edges.
pub fn canonical_edges(mut edges: Vec<Edge>) -> Vec<Edge> {
    for e in edges.iter_mut() {
        *e = edge(e.0, e.1);
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}

/// Plain undirected simple graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges = canonical_edges(edges.into_iter().collect());
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self loop at {a}")));
            }
            if b >= n {
                return Err(Error::InvalidGraph(format!("vertex {b} out of range 0..{n}")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Ok(Graph { adj, edges })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adj.len() && self.adj[a].binary_search(&b).is_ok()
    }

    /// Subgraph induced on `vertices`, relabeled so that `vertices[i]` becomes `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.adj.len()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(vertices.len(), edges).expect("induced subgraph of a valid graph")
    }
}

/// Graph whose vertex set is split into equal-role layers, each an independent set.
///
/// Layers may differ in size while a graph is being assembled; the padding
/// step of the DUP construction is what equalizes them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayeredGraph {
    layer_sizes: Vec<usize>,
    offsets: Vec<usize>,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl LayeredGraph {
    /// Builds a layered graph. Edges use global ids; an edge inside a layer is rejected.
    pub fn new(layer_sizes: Vec<usize>, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        if layer_sizes.is_empty() {
            return Err(Error::InvalidGraph("a layered graph needs at least one layer".into()));
        }
        let mut offsets = Vec::with_capacity(layer_sizes.len() + 1);
        let mut total = 0usize;
        for &s in &layer_sizes {
            offsets.push(total);
            total += s;
        }
        offsets.push(total);
        let edges = canonical_edges(edges.into_iter().collect());
        let mut g = LayeredGraph {
            layer_sizes,
            offsets,
            edges: Vec::new(),
            adj: vec![Vec::new(); total],
        };
        for &(a, b) in &edges {
            if b >= total {
                return Err(Error::InvalidGraph(format!("vertex {b} out of range 0..{total}")));
            }
            if g.layer_of(a) == g.layer_of(b) {
                return Err(Error::InvalidGraph(format!(
                    "edge ({a},{b}) lies inside layer {}",
                    g.layer_of(a)
                )));
            }
            g.adj[a].push(b);
            g.adj[b].push(a);
        }
        for list in g.adj.iter_mut() {
            list.sort_unstable();
        }
        g.edges = edges;
        Ok(g)
    }

    /// Builds from `(layer, index)` endpoint pairs.
    pub fn from_local_edges(
        layer_sizes: Vec<usize>,
        edges: impl IntoIterator<Item = ((usize, usize), (usize, usize))>,
    ) -> Result<Self> {
        let empty = LayeredGraph::new(layer_sizes.clone(), std::iter::empty())?;
        let mut global = Vec::new();
        for (a, b) in edges {
            global.push((empty.try_vertex(a.0, a.1)?, empty.try_vertex(b.0, b.1)?));
        }
        LayeredGraph::new(layer_sizes, global)
    }

    pub fn num_layers(&self) -> usize {
        self.layer_sizes.len()
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn layer_size(&self, layer: usize) -> usize {
        self.layer_sizes[layer]
    }

    pub fn num_vertices(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adj.len() && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn offset(&self, layer: usize) -> usize {
        self.offsets[layer]
    }

    #[inline]
    pub fn vertex(&self, layer: usize, index: usize) -> usize {
        debug_assert!(index < self.layer_sizes[layer]);
        self.offsets[layer] + index
    }

    pub fn try_vertex(&self, layer: usize, index: usize) -> Result<usize> {
        if layer >= self.layer_sizes.len() {
            return Err(Error::IndexOutOfRange {
                what: "layer",
                index: layer,
                bound: self.layer_sizes.len(),
            });
        }
        if index >= self.layer_sizes[layer] {
            return Err(Error::IndexOutOfRange {
                what: "layer index",
                index,
                bound: self.layer_sizes[layer],
            });
        }
        Ok(self.offsets[layer] + index)
    }

    pub fn layer_of(&self, v: usize) -> usize {
        // offsets is sorted; the layer is the last offset <= v
        match self.offsets.binary_search(&v) {
            Ok(mut i) => {
                // skip empty layers sharing this offset
                while i + 1 < self.layer_sizes.len() && self.offsets[i + 1] == v {
                    i += 1;
                }
                i
            }
            Err(i) => i - 1,
        }
    }

    /// `(layer, index within layer)` of a global id.
    pub fn locate(&self, v: usize) -> (usize, usize) {
        let l = self.layer_of(v);
        (l, v - self.offsets[l])
    }

    /// True iff every edge joins two consecutive layers.
    pub fn is_strictly_layered(&self) -> bool {
        self.edges.iter().all(|&(a, b)| {
            let (la, lb) = (self.layer_of(a), self.layer_of(b));
            la.abs_diff(lb) == 1
        })
    }

    pub fn has_equal_layers(&self) -> bool {
        self.layer_sizes.windows(2).all(|w| w[0] == w[1])
    }

    pub fn to_graph(&self) -> Graph {
        Graph {
            adj: self.adj.clone(),
            edges: self.edges.clone(),
        }
    }

    /// Copy with one extra edge; used to build corrupted inputs.
    pub fn with_extra_edge(&self, a: usize, b: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(edge(a, b));
        LayeredGraph::new(self.layer_sizes.clone(), edges)
    }

    /// Copy with every layer grown to `size` by appending isolated vertices
    /// at the top of each layer's index range.
    pub fn padded_to(&self, size: usize) -> Result<Self> {
        if self.layer_sizes.iter().any(|&s| s > size) {
            return Err(Error::InvalidParameter(format!(
                "cannot pad layers of sizes {:?} down to {size}",
                self.layer_sizes
            )));
        }
        let new_sizes = vec![size; self.layer_sizes.len()];
        let mut moved = Vec::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            let (la, ia) = self.locate(a);
            let (lb, ib) = self.locate(b);
            moved.push((la * size + ia, lb * size + ib));
        }
        LayeredGraph::new(new_sizes, moved)
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges.iter().copied().collect()
    }
}
