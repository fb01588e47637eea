//! Embedding product of a graph family into a DUP graph.
//!
//! Every path `P_{i,j} = (u_1, …, u_{k+1})` of the outer DUP graph is
//! replaced by a copy of the inner layered graph `H_{i,j}`: inner vertex `x`
//! of layer `W_ℓ` becomes `(u_ℓ, x)` of layer `V_ℓ = U_ℓ × W_ℓ`, encoded as
//! `u_ℓ·|W_ℓ| + x`. Inner edges may join any two layers.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::dupgraph::{parse_dupg_body, write_dupg, DupGraph, DupParams, LayeredPath, Upc};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, LayeredGraph};

/// `q × p` inner graphs sharing one layer structure `W_1..W_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFamily {
    layer_sizes: Vec<usize>,
    members: Vec<Vec<LayeredGraph>>,
}

impl GraphFamily {
    pub fn new(members: Vec<Vec<LayeredGraph>>) -> Result<Self> {
        let first = members
            .first()
            .and_then(|row| row.first())
            .ok_or_else(|| Error::DimensionMismatch("family has no members".into()))?;
        let layer_sizes = first.layer_sizes().to_vec();
        let p = members[0].len();
        for (i, row) in members.iter().enumerate() {
            if row.len() != p {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} members, row 0 has {p}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|h| h.layer_sizes() != layer_sizes.as_slice()) {
                return Err(Error::DimensionMismatch(format!(
                    "member ({i},{j}) has layers {:?}, expected {layer_sizes:?}",
                    row[j].layer_sizes()
                )));
            }
        }
        Ok(GraphFamily {
            layer_sizes,
            members,
        })
    }

    /// Family of edgeless graphs.
    pub fn empty(q: usize, p: usize, layer_sizes: Vec<usize>) -> Result<Self> {
        let h = LayeredGraph::new(layer_sizes, std::iter::empty())?;
        GraphFamily::new(vec![vec![h; p]; q])
    }

    /// Each cross-layer pair of every member is an edge with probability `density`.
    pub fn random(
        q: usize,
        p: usize,
        layer_sizes: Vec<usize>,
        density: f64,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let base = LayeredGraph::new(layer_sizes.clone(), std::iter::empty())?;
        let n = base.num_vertices();
        let mut members = Vec::with_capacity(q);
        for _ in 0..q {
            let mut row = Vec::with_capacity(p);
            for _ in 0..p {
                let mut edges = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        if base.layer_of(a) != base.layer_of(b) && rng.gen_bool(density) {
                            edges.push((a, b));
                        }
                    }
                }
                row.push(LayeredGraph::new(layer_sizes.clone(), edges)?);
            }
            members.push(row);
        }
        GraphFamily::new(members)
    }

    pub fn q(&self) -> usize {
        self.members.len()
    }

    pub fn p(&self) -> usize {
        self.members[0].len()
    }

    pub fn layer_sizes(&self) -> &[usize] {
        &self.layer_sizes
    }

    pub fn member(&self, i: usize, j: usize) -> &LayeredGraph {
        &self.members[i][j]
    }

    pub fn members(&self) -> &[Vec<LayeredGraph>] {
        &self.members
    }
}

/// Vertex map of one embedding: outer layer sizes and inner layer sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingMap {
    outer: Vec<usize>,
    inner: Vec<usize>,
    offsets: Vec<usize>,
}

impl EmbeddingMap {
    pub fn new(outer: &[usize], inner: &[usize]) -> Result<Self> {
        if outer.len() != inner.len() {
            return Err(Error::DimensionMismatch(format!(
                "outer graph has {} layers, inner graphs have {}",
                outer.len(),
                inner.len()
            )));
        }
        let mut offsets = Vec::with_capacity(outer.len() + 1);
        let mut total = 0usize;
        for (o, w) in outer.iter().zip(inner) {
            offsets.push(total);
            total += o * w;
        }
        offsets.push(total);
        Ok(EmbeddingMap {
            outer: outer.to_vec(),
            inner: inner.to_vec(),
            offsets,
        })
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.outer.iter().zip(&self.inner).map(|(o, w)| o * w).collect()
    }

    pub fn num_vertices(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Global id of `(u, x)` where `u` is outer-local and `x` inner-local in `layer`.
    #[inline]
    pub fn vertex(&self, layer: usize, u: usize, x: usize) -> usize {
        self.offsets[layer] + u * self.inner[layer] + x
    }

    /// Inverse of [`EmbeddingMap::vertex`]: `(layer, u, x)`.
    pub fn split(&self, v: usize) -> (usize, usize, usize) {
        let layer = self.offsets.partition_point(|&o| o <= v) - 1;
        let local = v - self.offsets[layer];
        (layer, local / self.inner[layer], local % self.inner[layer])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    graph: LayeredGraph,
    map: EmbeddingMap,
    /// `provenance[e]` is the `(i, j)` that inserted `graph.edges()[e]`.
    provenance: Vec<(usize, usize)>,
}

impl EmbeddedGraph {
    pub fn graph(&self) -> &LayeredGraph {
        &self.graph
    }

    pub fn map(&self) -> &EmbeddingMap {
        &self.map
    }

    pub fn provenance(&self) -> &[(usize, usize)] {
        &self.provenance
    }

    /// Edges inserted for `(i, j)`, in edge order.
    pub fn edges_of(&self, i: usize, j: usize) -> Vec<Edge> {
        self.graph
            .edges()
            .iter()
            .zip(&self.provenance)
            .filter(|(_, &src)| src == (i, j))
            .map(|(&e, _)| e)
            .collect()
    }
}

/// Image of every edge of `H_{i,j}` along path `P_{i,j}`.
pub(crate) fn embed_member(
    map: &EmbeddingMap,
    inner: &LayeredGraph,
    path: &[usize],
) -> Vec<Edge> {
    inner
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (la, xa) = inner.locate(a);
            let (lb, xb) = inner.locate(b);
            edge(map.vertex(la, path[la], xa), map.vertex(lb, path[lb], xb))
        })
        .collect()
}

/// `EMBED(family → dup)`.
pub fn embed(family: &GraphFamily, dup: &DupGraph) -> Result<EmbeddedGraph> {
    if family.q() != dup.upcs().len() {
        return Err(Error::DimensionMismatch(format!(
            "family has q={}, DUP graph has {} UPCs",
            family.q(),
            dup.upcs().len()
        )));
    }
    for (i, upc) in dup.upcs().iter().enumerate() {
        if upc.paths.len() != family.p() {
            return Err(Error::DimensionMismatch(format!(
                "UPC {i} has {} paths, family has p={}",
                upc.paths.len(),
                family.p()
            )));
        }
    }
    let map = EmbeddingMap::new(dup.graph().layer_sizes(), family.layer_sizes())?;
    let pieces: Vec<((usize, usize), Vec<Edge>)> = (0..family.q())
        .into_par_iter()
        .flat_map_iter(|i| (0..family.p()).map(move |j| (i, j)))
        .map(|(i, j)| {
            let path = &dup.path(i, j).vertices;
            ((i, j), embed_member(&map, family.member(i, j), path))
        })
        .collect();
    let mut owner: HashMap<Edge, (usize, usize)> = HashMap::new();
    for (src, edges) in &pieces {
        for &e in edges {
            if let Some(prev) = owner.insert(e, *src) {
                return Err(Error::EdgeCollision(format!(
                    "edge {e:?} inserted by both {prev:?} and {src:?}"
                )));
            }
        }
    }
    let graph = LayeredGraph::new(map.layer_sizes(), owner.keys().copied())?;
    let provenance = graph.edges().iter().map(|e| owner[e]).collect();
    Ok(EmbeddedGraph {
        graph,
        map,
        provenance,
    })
}

/// Induced subgraph on the vertices above UPC `i`, relabeled so that `(u, x)`
/// with `u` on path `j` gets local index `j·|W_ℓ| + x` in layer `ℓ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedUpc {
    pub graph: LayeredGraph,
    /// `vertices[v]` is the id in the embedded graph of local vertex `v`.
    pub vertices: Vec<usize>,
}

pub fn induced_on_upc(g: &EmbeddedGraph, dup: &DupGraph, i: usize) -> Result<InducedUpc> {
    let upc = dup.upc(i)?;
    let map = g.map();
    let layers = dup.num_layers();
    let p = upc.paths.len();
    let sizes: Vec<usize> = (0..layers).map(|l| p * map.inner[l]).collect();
    let frame = LayeredGraph::new(sizes.clone(), std::iter::empty())?;
    let mut vertices = vec![0usize; frame.num_vertices()];
    let mut local: HashMap<usize, usize> = HashMap::new();
    for (j, path) in upc.paths.iter().enumerate() {
        for (l, &u) in path.vertices.iter().enumerate() {
            for x in 0..map.inner[l] {
                let v = frame.vertex(l, j * map.inner[l] + x);
                let id = map.vertex(l, u, x);
                vertices[v] = id;
                local.insert(id, v);
            }
        }
    }
    let mut edges = Vec::new();
    for (&id, &v) in &local {
        for w in g.graph().neighbors(id) {
            if let Some(&lw) = local.get(w) {
                if v < lw {
                    edges.push((v, lw));
                }
            }
        }
    }
    Ok(InducedUpc {
        graph: LayeredGraph::new(sizes, edges)?,
        vertices,
    })
}

/// True iff the induced subgraph above UPC `i` is exactly the disjoint union
/// of `H_{i,1..p}`, edge for edge.
pub fn verify_inducedness(g: &EmbeddedGraph, dup: &DupGraph, family: &GraphFamily, i: usize) -> bool {
    let Ok(induced) = induced_on_upc(g, dup, i) else {
        return false;
    };
    if i >= family.q() {
        return false;
    }
    let frame = &induced.graph;
    let mut expected = BTreeSet::new();
    for j in 0..family.p() {
        let h = family.member(i, j);
        for &(a, b) in h.edges() {
            let (la, xa) = h.locate(a);
            let (lb, xb) = h.locate(b);
            let wa = family.layer_sizes()[la];
            let wb = family.layer_sizes()[lb];
            expected.insert(edge(
                frame.vertex(la, j * wa + xa),
                frame.vertex(lb, j * wb + xb),
            ));
        }
    }
    frame.edge_set() == expected
}

/// `dupg 1` document extended with `wlayers` and one `emb i j a b` line per edge.
pub fn write_embedded(dup: &DupGraph, g: &EmbeddedGraph) -> String {
    let mut out = write_dupg(dup);
    out.push_str("wlayers");
    for w in &g.map().inner {
        let _ = write!(out, " {w}");
    }
    out.push('\n');
    let mut lines: Vec<((usize, usize), Edge)> = g
        .provenance()
        .iter()
        .copied()
        .zip(g.graph().edges().iter().copied())
        .collect();
    lines.sort_unstable();
    for ((i, j), (a, b)) in lines {
        let _ = writeln!(out, "emb {i} {j} {a} {b}");
    }
    out
}

/// Reads a document produced by [`write_embedded`]; the result is rebuilt from
/// the edge lines, so collisions and out-of-range ids are rejected.
pub fn parse_embedded(text: &str) -> Result<(DupGraph, EmbeddedGraph)> {
    let body = parse_dupg_body(text)?;
    let dup = body.dup;
    let mut rest = body.rest.into_iter();
    let (line_no, line) = rest
        .next()
        .ok_or_else(|| Error::parse(0, "missing `wlayers` line"))?;
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.first() != Some(&"wlayers") {
        return Err(Error::parse(line_no, "expected `wlayers`"));
    }
    let inner = fields[1..]
        .iter()
        .map(|f| f.parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::parse(line_no, "bad layer size"))?;
    let map = EmbeddingMap::new(dup.graph().layer_sizes(), &inner)?;
    let mut owner: HashMap<Edge, (usize, usize)> = HashMap::new();
    for (line_no, line) in rest {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != "emb" {
            return Err(Error::parse(line_no, "expected `emb i j a b`"));
        }
        let nums = fields[1..]
            .iter()
            .map(|f| f.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::parse(line_no, "bad number"))?;
        let e = edge(nums[2], nums[3]);
        if owner.insert(e, (nums[0], nums[1])).is_some() {
            return Err(Error::parse(line_no, format!("duplicate edge {e:?}")));
        }
    }
    let graph = LayeredGraph::new(map.layer_sizes(), owner.keys().copied())?;
    let provenance = graph.edges().iter().map(|e| owner[e]).collect();
    Ok((
        dup,
        EmbeddedGraph {
            graph,
            map,
            provenance,
        },
    ))
}

/// Outer graph where path `(0,2,1)` of UPC 1 runs from the start of
/// `P_{0,0}` to the end of `P_{0,1}`.
pub fn shortcut_counterexample() -> (DupGraph, GraphFamily) {
    let upcs = vec![
        Upc {
            paths: vec![LayeredPath::new(vec![0, 0, 0]), LayeredPath::new(vec![1, 1, 1])],
        },
        Upc {
            paths: vec![LayeredPath::new(vec![0, 2, 1]), LayeredPath::new(vec![2, 3, 2])],
        },
    ];
    let sizes = vec![3, 4, 3];
    let frame = LayeredGraph::new(sizes.clone(), std::iter::empty()).unwrap();
    let edges: Vec<Edge> = upcs
        .iter()
        .flat_map(|u| u.paths.iter().flat_map(|p| p.edges(&frame)))
        .collect();
    let graph = LayeredGraph::new(sizes, edges).unwrap();
    let dup = DupGraph::from_parts(
        graph,
        upcs,
        DupParams {
            ell: 1,
            d: 1,
            k: 2,
            p: 2,
            q: 2,
            padded: false,
        },
        None,
    );
    let w = vec![1, 1, 1];
    let empty = LayeredGraph::new(w.clone(), std::iter::empty()).unwrap();
    let skip = LayeredGraph::new(w, vec![(0, 2)]).unwrap();
    let family = GraphFamily::new(vec![
        vec![empty.clone(), empty.clone()],
        vec![skip, empty],
    ])
    .unwrap();
    (dup, family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::dupgraph::build_dup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_edge_family() {
        let dup = build_dup(2, 1, 1, &Budget::default()).unwrap();
        let one = LayeredGraph::new(vec![2, 2], vec![(1, 2)]).unwrap();
        let none = LayeredGraph::new(vec![2, 2], std::iter::empty()).unwrap();
        let family = GraphFamily::new(vec![vec![one], vec![none]]).unwrap();
        let g = embed(&family, &dup).unwrap();
        // path (1,2): inner a = (W1, 1), b = (W2, 0)
        let map = g.map();
        assert_eq!(g.graph().edges(), &[(map.vertex(0, 1, 1), map.vertex(1, 2, 0))]);
        assert_eq!(g.provenance(), &[(0, 0)]);
        assert_eq!(g.graph().num_vertices(), 2 * 6 * 2);
    }

    #[test]
    fn empty_family_embeds_to_no_edges() {
        let dup = build_dup(2, 2, 1, &Budget::default()).unwrap();
        let family = GraphFamily::empty(dup.q(), dup.p(), vec![3, 3]).unwrap();
        let g = embed(&family, &dup).unwrap();
        assert_eq!(g.graph().num_edges(), 0);
        for i in 0..dup.q() {
            let ind = induced_on_upc(&g, &dup, i).unwrap();
            assert_eq!(ind.graph.num_edges(), 0);
            assert_eq!(ind.graph.num_vertices(), 2 * dup.p() * 3);
            assert!(verify_inducedness(&g, &dup, &family, i));
        }
    }

    #[test]
    fn dimension_checks() {
        let dup = build_dup(2, 2, 1, &Budget::default()).unwrap();
        let family = GraphFamily::empty(dup.q() + 1, dup.p(), vec![1, 1]).unwrap();
        assert!(matches!(embed(&family, &dup), Err(Error::DimensionMismatch(_))));
        let family = GraphFamily::empty(dup.q(), dup.p(), vec![1, 1, 1]).unwrap();
        assert!(matches!(embed(&family, &dup), Err(Error::DimensionMismatch(_))));
        let g = embed(&GraphFamily::empty(dup.q(), dup.p(), vec![1, 1]).unwrap(), &dup).unwrap();
        assert!(matches!(
            induced_on_upc(&g, &dup, dup.q()),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn random_family_is_induced_per_upc() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dup = build_dup(2, 2, 2, &Budget::default()).unwrap();
        let family = GraphFamily::random(dup.q(), dup.p(), vec![2, 3, 2], 0.5, &mut rng).unwrap();
        let g = embed(&family, &dup).unwrap();
        let total: usize = family.members().iter().flatten().map(|h| h.num_edges()).sum();
        assert_eq!(g.graph().num_edges(), total);
        for i in 0..dup.q() {
            assert!(verify_inducedness(&g, &dup, &family, i));
        }
    }

    #[test]
    fn split_inverts_vertex() {
        let map = EmbeddingMap::new(&[3, 2], &[2, 5]).unwrap();
        for v in 0..map.num_vertices() {
            let (l, u, x) = map.split(v);
            assert_eq!(map.vertex(l, u, x), v);
        }
    }

    #[test]
    fn file_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let dup = build_dup(2, 1, 2, &Budget::default()).unwrap();
        let family = GraphFamily::random(dup.q(), dup.p(), vec![1, 2, 1], 0.7, &mut rng).unwrap();
        let g = embed(&family, &dup).unwrap();
        let text = write_embedded(&dup, &g);
        let (dup2, g2) = parse_embedded(&text).unwrap();
        assert_eq!(dup2.graph(), dup.graph());
        assert_eq!(g2, g);
        assert_eq!(write_embedded(&dup2, &g2), text);
    }

    #[test]
    fn shortcut_outer_graph_breaks_inducedness() {
        let (dup, family) = shortcut_counterexample();
        let g = embed(&family, &dup).unwrap();
        assert!(!verify_inducedness(&g, &dup, &family, 0));
        assert!(verify_inducedness(&g, &dup, &family, 1));
    }
}
