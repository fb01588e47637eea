//! Recursive sampler for the hard instances.
//!
//! A level-`r` instance has `2^{r+1}` layers: the `2^r` layers of the left
//! copy followed by those of the right copy. Inside a copy, vertex `(u, x)`
//! of layer `ℓ`, with `u` a DUP vertex and `x` a vertex of a sub-instance
//! layer, has global id `copy·(n/2) + ℓ·(b·w) + u·w + x` where `b` is the DUP
//! layer size and `w` the sub-instance layer size. A base instance has the
//! `u_i` as layer 0 (ids `0..p_0`) and the `v_i` as layer 1.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::dupgraph::{build_dup, derive_dup_dimensions, largest_ell, DupGraph};
use crate::embedding::{embed_member, EmbeddingMap};
use crate::error::{Error, Result};
use crate::graph::{canonical_edges, Edge, Graph, LayeredGraph};
use crate::hardness::params::ParamTable;
use crate::rng::SeedStream;

const T_LABEL: u64 = 0x7370_6563_6961_6c74;
const BASE_LABEL: u64 = 0x6261_7365_6269_7473;

/// Explicit per-level DUP dimensions for desk-scale instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToyParams {
    pub n_0: usize,
    /// `levels[j-1] = (ell, d)` for level `j`, which uses `k_j = 2^j - 1`.
    pub levels: Vec<(u32, u32)>,
}

/// Fixed DUP graph and layer sizes of one level.
#[derive(Debug, Clone)]
pub struct LevelPlan {
    pub level: usize,
    pub dup: Arc<DupGraph>,
    /// Layer size of the level's instances.
    pub layer_size: usize,
}

/// The fixed part of an `r`-round distribution: base size and one DUP graph per level.
#[derive(Debug, Clone)]
pub struct Hierarchy {
    n_0: usize,
    /// `levels[j-1]` is level `j`.
    levels: Vec<LevelPlan>,
}

fn check_base(n_0: usize) -> Result<()> {
    if n_0 < 2 || !n_0.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("n0 must be even and at least 2, got {n_0}")));
    }
    Ok(())
}

impl Hierarchy {
    pub fn toy(params: &ToyParams, budget: &Budget) -> Result<Self> {
        check_base(params.n_0)?;
        let mut layer_size = params.n_0 / 2;
        let mut levels = Vec::with_capacity(params.levels.len());
        for (idx, &(ell, d)) in params.levels.iter().enumerate() {
            let level = idx + 1;
            let dup = build_dup(ell, d, (1 << level) - 1, budget)?;
            layer_size = checked_layer(level, dup.layer_size(), layer_size, budget)?;
            levels.push(LevelPlan {
                level,
                dup: Arc::new(dup),
                layer_size,
            });
        }
        Ok(Hierarchy {
            n_0: params.n_0,
            levels,
        })
    }

    /// One DUP graph per level with `b_j` vertices in each of its `2^j` layers.
    ///
    /// The dimension `d` comes from [`derive_dup_dimensions`]; when no `ell`
    /// fits that `d`, smaller `d` are tried down to 1.
    pub fn formula(table: &ParamTable, budget: &Budget) -> Result<Self> {
        let n_0 = usize::try_from(table.n_0)
            .map_err(|_| Error::InvalidParameter("n0 too large".into()))?;
        check_base(n_0)?;
        let mut layer_size = n_0 / 2;
        let mut levels = Vec::with_capacity(table.r);
        for lp in &table.levels {
            let k = lp.k;
            let b = lp.b;
            let (ell, d) = dup_dimensions_for_layer(b, k)?;
            let b = usize::try_from(b).map_err(|_| Error::BudgetExceeded {
                what: "DUP layer vertices",
                needed: lp.b,
                cap: budget.vectors as u128,
            })?;
            Budget::check("DUP layer vertices", b as u128, budget.vectors)?;
            let dup = build_dup(ell, d, k, budget)?.padded_to(b)?;
            layer_size = checked_layer(lp.level, b, layer_size, budget)?;
            levels.push(LevelPlan {
                level: lp.level,
                dup: Arc::new(dup),
                layer_size,
            });
        }
        Ok(Hierarchy { n_0, levels })
    }

    pub fn rounds(&self) -> usize {
        self.levels.len()
    }

    pub fn n_0(&self) -> usize {
        self.n_0
    }

    pub fn level(&self, j: usize) -> &LevelPlan {
        &self.levels[j - 1]
    }

    pub fn levels(&self) -> &[LevelPlan] {
        &self.levels
    }

    pub fn layer_size(&self, j: usize) -> usize {
        if j == 0 {
            self.n_0 / 2
        } else {
            self.levels[j - 1].layer_size
        }
    }

    /// Vertex count of a level-`j` instance.
    pub fn num_vertices(&self, j: usize) -> usize {
        (2usize << j) * self.layer_size(j)
    }

    /// Hierarchy truncated to levels `0..=j`.
    pub fn truncated(&self, j: usize) -> Hierarchy {
        Hierarchy {
            n_0: self.n_0,
            levels: self.levels[..j].to_vec(),
        }
    }
}

/// `(ell, d)` for a `k`-DUP graph whose layers fit in `b` vertices.
pub(crate) fn dup_dimensions_for_layer(b: u128, k: usize) -> Result<(u32, u32)> {
    let n = b.saturating_mul(k as u128 + 1);
    let first = derive_dup_dimensions(n, k);
    if let Ok(dims) = first {
        return Ok((dims.ell, dims.d));
    }
    let start = match first {
        Err(Error::TooSmallN { d, .. }) => d,
        Err(e) => return Err(e),
        Ok(_) => unreachable!(),
    };
    for d in (1..start).rev() {
        if let Some(ell) = largest_ell(b, k, d) {
            return Ok((ell, d));
        }
    }
    Err(Error::TooSmallN { n, k, d: 1 })
}

/// Layer size of a level-`level` instance; its clique is bounded by `half^2` edges.
fn checked_layer(level: usize, dup_layer: usize, sub_layer: usize, budget: &Budget) -> Result<usize> {
    let size = dup_layer as u128 * sub_layer as u128;
    Budget::check("instance layer vertices", size, budget.vectors)?;
    let half = size << level;
    Budget::check("instance clique edges", half.saturating_mul(half), budget.edges)?;
    Ok(size as usize)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    /// `bits[i]` is whether edge `(u_i, v_i)` is present.
    Base { bits: Vec<bool> },
    Recursive {
        dup: Arc<DupGraph>,
        /// Special UPC index.
        t: usize,
        /// `subs[i][j]` is `H_{i,j}`.
        subs: Vec<Vec<Instance>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    rounds: usize,
    layer_size: usize,
    /// `players[a]` holds the edges of player `a + 1`, sorted.
    players: Vec<Vec<Edge>>,
    node: Node,
}

/// Which of the two identical copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    L,
    R,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::L => 0,
            Side::R => 1,
        }
    }
}

/// Vertices and edges of one special subgraph, in global ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialSubgraph {
    /// `vertices[v]` is the global id of vertex `v` of the sub-instance.
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
}

pub fn base_instance_from_bits(bits: Vec<bool>) -> Result<Instance> {
    if bits.is_empty() {
        return Err(Error::InvalidParameter("a base instance needs p0 >= 1".into()));
    }
    let p0 = bits.len();
    let edges = bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| (i, p0 + i))
        .collect();
    Ok(Instance {
        rounds: 0,
        layer_size: p0,
        players: vec![edges],
        node: Node::Base { bits },
    })
}

/// Base instance on `n_0` vertices: each `(u_i, v_i)` present with probability ½.
pub fn sample_base_instance(n_0: usize, rng: &mut impl Rng) -> Result<Instance> {
    check_base(n_0)?;
    let bits = (0..n_0 / 2).map(|_| rng.gen_bool(0.5)).collect();
    base_instance_from_bits(bits)
}

/// Samples a level-`h.rounds()` instance; all randomness comes from `stream`.
///
/// The special index `t` and every sub-instance `(i, j)` draw from their own
/// child streams, so resampling one part never shifts another.
pub fn sample_instance(h: &Hierarchy, stream: SeedStream) -> Result<Instance> {
    sample_level(h, h.rounds(), stream)
}

fn sample_level(h: &Hierarchy, level: usize, stream: SeedStream) -> Result<Instance> {
    if level == 0 {
        let mut rng = stream.child(BASE_LABEL, 0, 0).rng();
        return sample_base_instance(h.n_0(), &mut rng);
    }
    let plan = h.level(level);
    let dup = &plan.dup;
    let t = stream
        .child(T_LABEL, level as u64, 0)
        .rng()
        .gen_range(0..dup.q() as u64) as usize;
    let subs = (0..dup.q())
        .into_par_iter()
        .map(|i| {
            (0..dup.p())
                .map(|j| sample_level(h, level - 1, stream.child(level as u64, i as u64, j as u64)))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    assemble(dup.clone(), t, subs)
}

/// Deterministic part of the construction: both copies of the embedding,
/// player inputs, and the clique avoiding the special UPC.
pub fn assemble(dup: Arc<DupGraph>, t: usize, subs: Vec<Vec<Instance>>) -> Result<Instance> {
    if subs.len() != dup.q() || subs.iter().any(|row| row.len() != dup.p()) {
        return Err(Error::DimensionMismatch(format!(
            "expected {}x{} sub-instances",
            dup.q(),
            dup.p()
        )));
    }
    if t >= dup.q() {
        return Err(Error::IndexOutOfRange {
            what: "special UPC",
            index: t,
            bound: dup.q(),
        });
    }
    let first = &subs[0][0];
    let sub_rounds = first.rounds;
    let w = first.layer_size;
    if subs
        .iter()
        .flatten()
        .any(|s| s.rounds != sub_rounds || s.layer_size != w)
    {
        return Err(Error::DimensionMismatch("sub-instances differ in shape".into()));
    }
    let rounds = sub_rounds + 1;
    if dup.num_layers() != 1 << rounds {
        return Err(Error::DimensionMismatch(format!(
            "a level-{rounds} instance needs a DUP graph with {} layers, got {}",
            1 << rounds,
            dup.num_layers()
        )));
    }
    let frame = Frame::new(&dup, w);
    let mut players = vec![Vec::new(); rounds + 1];
    for (a, slot) in players.iter_mut().take(rounds).enumerate() {
        *slot = frame.player_edges(&dup, &subs, a);
    }
    players[rounds] = frame.clique(&dup, t)?;
    let total: usize = players.iter().map(Vec::len).sum();
    let distinct: BTreeSet<_> = players.iter().flatten().collect();
    if distinct.len() != total {
        return Err(Error::EdgeCollision(format!(
            "{} edges assigned more than once",
            total - distinct.len()
        )));
    }
    Ok(Instance {
        rounds,
        layer_size: frame.layer_size,
        players,
        node: Node::Recursive { dup, t, subs },
    })
}

/// Id arithmetic of one recursive level.
pub(crate) struct Frame {
    pub map: EmbeddingMap,
    /// Sub-instance layer size.
    pub w: usize,
    pub layer_size: usize,
    pub half: usize,
}

impl Frame {
    pub fn new(dup: &DupGraph, w: usize) -> Self {
        let layers = dup.num_layers();
        let map = EmbeddingMap::new(dup.graph().layer_sizes(), &vec![w; layers])
            .expect("layer counts agree");
        let layer_size = dup.layer_size() * w;
        Frame {
            map,
            w,
            layer_size,
            half: layers * layer_size,
        }
    }

    /// Sub-instance vertex `v` placed on path `path` in `side`.
    pub fn place(&self, side: Side, path: &[usize], v: usize) -> usize {
        let (l, x) = (v / self.w, v % self.w);
        side.index() * self.half + self.map.vertex(l, path[l], x)
    }

    /// Layered view of a sub-instance, for [`embed_member`].
    fn sub_graph(&self, layers: usize, edges: &[Edge]) -> LayeredGraph {
        LayeredGraph::new(vec![self.w; layers], edges.iter().copied())
            .expect("sub-instance edges join distinct layers")
    }

    /// Both-copy images of `edges` of sub-instance `(i, j)`.
    pub fn place_edges(&self, dup: &DupGraph, i: usize, j: usize, edges: &[Edge]) -> Vec<Edge> {
        let layers = dup.num_layers();
        let inner = self.sub_graph(layers, edges);
        let path = &dup.path(i, j).vertices;
        let left = embed_member(&self.map, &inner, path);
        let right = left.iter().map(|&(a, b)| (a + self.half, b + self.half));
        let mut out = left.clone();
        out.extend(right);
        out
    }

    pub fn player_edges(&self, dup: &DupGraph, subs: &[Vec<Instance>], a: usize) -> Vec<Edge> {
        let mut out = Vec::new();
        for (i, row) in subs.iter().enumerate() {
            for (j, sub) in row.iter().enumerate() {
                out.extend(self.place_edges(dup, i, j, &sub.players[a]));
            }
        }
        canonical_edges(out)
    }

    /// Vertices of one copy whose DUP vertex lies off the special UPC.
    pub fn non_special(&self, dup: &DupGraph, t: usize, side: Side) -> Result<Vec<usize>> {
        let special = dup.upc_vertices(t)?;
        let g = dup.graph();
        let mut out = Vec::new();
        for u in 0..g.num_vertices() {
            if special.contains(&u) {
                continue;
            }
            let (l, ul) = g.locate(u);
            for x in 0..self.w {
                out.push(side.index() * self.half + self.map.vertex(l, ul, x));
            }
        }
        Ok(out)
    }

    pub fn clique(&self, dup: &DupGraph, t: usize) -> Result<Vec<Edge>> {
        let left = self.non_special(dup, t, Side::L)?;
        let right = self.non_special(dup, t, Side::R)?;
        let mut out = Vec::with_capacity(left.len() * right.len());
        for &a in &left {
            for &b in &right {
                out.push((a, b));
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

impl Instance {
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn layer_size(&self) -> usize {
        self.layer_size
    }

    pub fn num_layers(&self) -> usize {
        2 << self.rounds
    }

    pub fn num_vertices(&self) -> usize {
        self.num_layers() * self.layer_size
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn players(&self) -> &[Vec<Edge>] {
        &self.players
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn edges(&self) -> Vec<Edge> {
        canonical_edges(self.players.iter().flatten().copied().collect())
    }

    pub fn graph(&self) -> Graph {
        Graph::new(self.num_vertices(), self.edges()).expect("instance edges are in range")
    }

    pub fn layered_graph(&self) -> Result<LayeredGraph> {
        LayeredGraph::new(vec![self.layer_size; self.num_layers()], self.edges())
    }

    /// Same structure with different player inputs; used to build corrupted
    /// instances and to load files whose edges may disagree with the seed.
    pub fn with_players(&self, players: Vec<Vec<Edge>>) -> Result<Instance> {
        if players.len() != self.players.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} players given, instance has {}",
                players.len(),
                self.players.len()
            )));
        }
        let n = self.num_vertices();
        for list in &players {
            if let Some(&(a, b)) = list.iter().find(|&&(a, b)| a == b || a.max(b) >= n) {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) is not valid on {n} vertices")));
            }
        }
        Ok(Instance {
            players: players.into_iter().map(canonical_edges).collect(),
            ..self.clone()
        })
    }

    pub fn t(&self) -> Option<usize> {
        match &self.node {
            Node::Base { .. } => None,
            Node::Recursive { t, .. } => Some(*t),
        }
    }

    pub fn dup(&self) -> Option<&Arc<DupGraph>> {
        match &self.node {
            Node::Base { .. } => None,
            Node::Recursive { dup, .. } => Some(dup),
        }
    }

    pub fn sub(&self, i: usize, j: usize) -> Option<&Instance> {
        match &self.node {
            Node::Base { .. } => None,
            Node::Recursive { subs, .. } => subs.get(i).and_then(|row| row.get(j)),
        }
    }

    pub fn bits(&self) -> Option<&[bool]> {
        match &self.node {
            Node::Base { bits } => Some(bits),
            Node::Recursive { .. } => None,
        }
    }

    /// Sub-instance layer size of a recursive instance.
    pub(crate) fn frame(&self) -> Option<Frame> {
        match &self.node {
            Node::Base { .. } => None,
            Node::Recursive { dup, subs, .. } => Some(Frame::new(dup, subs[0][0].layer_size)),
        }
    }

    /// The `p` special subgraphs of `side`, in path order. Empty for base instances.
    pub fn special_subgraphs(&self, side: Side) -> Vec<SpecialSubgraph> {
        let (Node::Recursive { dup, t, subs }, Some(frame)) = (&self.node, self.frame()) else {
            return Vec::new();
        };
        (0..dup.p())
            .map(|j| {
                let sub = &subs[*t][j];
                let path = &dup.path(*t, j).vertices;
                let vertices = (0..sub.num_vertices())
                    .map(|v| frame.place(side, path, v))
                    .collect();
                let edges = frame.place_edges(dup, *t, j, &sub.edges());
                let half = frame.half;
                let edges = edges
                    .into_iter()
                    .filter(|&(a, _)| (a >= half) == (side == Side::R))
                    .collect();
                SpecialSubgraph {
                    vertices,
                    edges: canonical_edges(edges),
                }
            })
            .collect()
    }

    /// Level-`r` instance identical to `self` except that `H_{i,j}` is replaced.
    pub fn with_subinstance(&self, i: usize, j: usize, replacement: Instance) -> Result<Instance> {
        let Node::Recursive { dup, t, subs } = &self.node else {
            return Err(Error::InvalidParameter("base instances have no sub-instances".into()));
        };
        let mut subs = subs.clone();
        let slot = subs
            .get_mut(i)
            .and_then(|row| row.get_mut(j))
            .ok_or(Error::IndexOutOfRange {
                what: "sub-instance",
                index: i,
                bound: dup.q(),
            })?;
        *slot = replacement;
        assemble(dup.clone(), *t, subs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn toy(n_0: usize, levels: &[(u32, u32)]) -> Hierarchy {
        Hierarchy::toy(
            &ToyParams {
                n_0,
                levels: levels.to_vec(),
            },
            &Budget::default(),
        )
        .unwrap()
    }

    #[test]
    fn forced_bits() {
        let inst = base_instance_from_bits(vec![true, false]).unwrap();
        assert_eq!(inst.players(), &[vec![(0, 2)]]);
        assert_eq!(inst.num_vertices(), 4);
        let one = sample_base_instance(2, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert_eq!(one.num_vertices(), 2);
        assert!(one.edges().len() <= 1);
        assert!(sample_base_instance(3, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn toy_one_round_shape() {
        let h = toy(4, &[(2, 1)]);
        let inst = sample_instance(&h, SeedStream::new(7)).unwrap();
        assert_eq!(inst.rounds(), 1);
        assert_eq!(inst.num_players(), 2);
        let dup = inst.dup().unwrap();
        assert_eq!((dup.q(), dup.p()), (2, 1));
        // 2 copies x 2 layers x (6 DUP vertices x 2 sub-instance vertices)
        assert_eq!(inst.num_vertices(), 48);
        assert_eq!(inst.num_vertices(), h.num_vertices(1));
        // DUP has 12 vertices, 2 of them on the special UPC; 10 x 2 per copy
        assert_eq!(inst.players()[1].len(), 20 * 20);
    }

    #[test]
    fn sampling_is_deterministic() {
        let h = toy(2, &[(1, 1), (1, 1)]);
        let a = sample_instance(&h, SeedStream::new(11)).unwrap();
        let b = sample_instance(&h, SeedStream::new(11)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rounds(), 2);
        assert_eq!(a.num_players(), 3);
    }

    #[test]
    fn formula_hierarchy_pads_to_b() {
        let table = crate::hardness::params::compute_parameters(1, 64, 4, 1.0, 1.0).unwrap();
        let h = Hierarchy::formula(&table, &Budget::default()).unwrap();
        assert_eq!(h.level(1).dup.layer_size(), 8);
        assert_eq!(h.num_vertices(1), 64);
    }

    #[test]
    fn fallback_dimension() {
        // b = 8, k = 1: d = 2 admits no ell, d = 1 gives 3·ell ≤ 8
        assert_eq!(dup_dimensions_for_layer(8, 1).unwrap(), (2, 1));
        assert!(dup_dimensions_for_layer(2, 1).is_err());
    }
}
