//! Disjoint-unique-paths (DUP) graphs.
//!
//! A `(p, q, k)`-DUP graph is a strictly-layered graph on `k + 1` layers
//! whose edges split into `q` unique path collections (UPCs) of `p` layered
//! paths each. Within a UPC the paths are vertex-disjoint and the only
//! layered path from any start vertex of the collection to any final vertex
//! of the collection is one of its own paths.
//!
//! The construction places the vectors of `[(k+2)·ℓ]^d` on every layer and
//! draws, for each `x ∈ [ℓ]^d` and each `y` in an average-free set `A`, the
//! path `x + y, x + 2y, …, x + (k+1)y`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::avgfree::{build_avg_free_set, pow_u128, AvgFreeSet, Vector};
use crate::budget::{Budget, SharedMeter};
use crate::error::{Error, Result};
use crate::graph::{edge, Edge, LayeredGraph};
use crate::report::Report;

/// One vertex per layer, stored as layer-local indices from layer 0 upward.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayeredPath {
    pub vertices: Vec<usize>,
}

impl LayeredPath {
    pub fn new(vertices: Vec<usize>) -> Self {
        LayeredPath { vertices }
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn final_vertex(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Global ids in `g`.
    pub fn global(&self, g: &LayeredGraph) -> Vec<usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(l, &i)| g.vertex(l, i))
            .collect()
    }

    pub fn edges(&self, g: &LayeredGraph) -> Vec<Edge> {
        let ids = self.global(g);
        ids.windows(2).map(|w| edge(w[0], w[1])).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Upc {
    pub paths: Vec<LayeredPath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DupParams {
    pub ell: u32,
    pub d: u32,
    pub k: usize,
    pub p: usize,
    pub q: usize,
    pub padded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DupGraph {
    graph: LayeredGraph,
    upcs: Vec<Upc>,
    params: DupParams,
    avg_free: Option<AvgFreeSet>,
}

/// Output of [`derive_dup_dimensions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DupDimensions {
    pub d: u32,
    pub ell: u32,
    /// Vertex count before padding, `(k+1)·((k+2)·ell)^d`.
    pub n_effective: u128,
    /// Per-layer size after padding, `⌊n / (k+1)⌋`.
    pub layer_size: u128,
}

/// Picks `d` and `ell` for a DUP graph on (at most) `n` vertices.
///
/// `d = max(1, round(sqrt(log2(n/(k+1)))))` and `ell` is the largest integer
/// with `(k+1)·((k+2)·ell)^d ≤ n`.
pub fn derive_dup_dimensions(n: u128, k: usize) -> Result<DupDimensions> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let per_layer = n / (k as u128 + 1);
    let real = n as f64 / (k as f64 + 1.0);
    let d = if real > 1.0 {
        (real.log2().sqrt().round() as u32).max(1)
    } else {
        1
    };
    let ell = largest_ell(per_layer, k, d).ok_or(Error::TooSmallN { n, k, d })?;
    Ok(DupDimensions {
        d,
        ell,
        n_effective: (k as u128 + 1) * pow_u128((k as u64 + 2) * ell as u64, d),
        layer_size: per_layer,
    })
}

/// Largest `ell ≥ 1` with `((k+2)·ell)^d ≤ per_layer`.
pub(crate) fn largest_ell(per_layer: u128, k: usize, d: u32) -> Option<u32> {
    let width = k as u64 + 2;
    let fits = |ell: u64| pow_u128(width * ell, d) <= per_layer;
    if !fits(1) {
        return None;
    }
    let guess = ((per_layer as f64).powf(1.0 / d as f64) / width as f64).floor() as u64;
    let mut ell = guess.clamp(1, u32::MAX as u64);
    while ell > 1 && !fits(ell) {
        ell -= 1;
    }
    while ell < u32::MAX as u64 && fits(ell + 1) {
        ell += 1;
    }
    Some(ell as u32)
}

/// Lexicographic index of a vector of `[width]^d` (coordinates from 1).
pub fn encode_vector(v: &[u32], width: u32) -> usize {
    v.iter().fold(0usize, |acc, &c| acc * width as usize + (c as usize - 1))
}

pub fn decode_vector(mut index: usize, width: u32, d: u32) -> Vector {
    let mut v = vec![0u32; d as usize];
    for slot in v.iter_mut().rev() {
        *slot = (index % width as usize) as u32 + 1;
        index /= width as usize;
    }
    v
}

/// Builds the `(|A|, ℓ^d, k)`-DUP graph with layers `[(k+2)·ℓ]^d`.
pub fn build_dup(ell: u32, d: u32, k: usize, budget: &Budget) -> Result<DupGraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let avg_free = build_avg_free_set(ell, d, budget)?;
    let width = (k as u64 + 2) * ell as u64;
    if width > u32::MAX as u64 {
        return Err(Error::InvalidParameter(format!("layer width {width} too large")));
    }
    let width = width as u32;
    let layer_size = pow_u128(width as u64, d);
    Budget::check("DUP layer vertices", layer_size, budget.vectors)?;
    let layer_size = layer_size as usize;

    let mut upcs = Vec::new();
    let mut edges = Vec::new();
    let mut x = vec![1u32; d as usize];
    let mut point = vec![0u32; d as usize];
    loop {
        let mut paths = Vec::with_capacity(avg_free.len());
        for y in avg_free.vectors() {
            let mut vertices = Vec::with_capacity(k + 1);
            for i in 1..=(k as u32 + 1) {
                for c in 0..d as usize {
                    point[c] = x[c] + i * y[c];
                }
                vertices.push(encode_vector(&point, width));
            }
            for (l, w) in vertices.windows(2).enumerate() {
                edges.push((l * layer_size + w[0], (l + 1) * layer_size + w[1]));
            }
            paths.push(LayeredPath::new(vertices));
        }
        upcs.push(Upc { paths });
        // next x in lexicographic order
        let mut pos = d as usize;
        loop {
            if pos == 0 {
                let graph = LayeredGraph::new(vec![layer_size; k + 1], edges)?;
                let params = DupParams {
                    ell,
                    d,
                    k,
                    p: avg_free.len(),
                    q: upcs.len(),
                    padded: false,
                };
                return Ok(DupGraph {
                    graph,
                    upcs,
                    params,
                    avg_free: Some(avg_free),
                });
            }
            pos -= 1;
            if x[pos] < ell {
                x[pos] += 1;
                break;
            }
            x[pos] = 1;
        }
    }
}

/// Builds for `n` vertices: derives dimensions, builds, then pads every layer
/// to `⌊n/(k+1)⌋` with isolated vertices.
pub fn build_dup_for_size(n: u128, k: usize, budget: &Budget) -> Result<DupGraph> {
    let dims = derive_dup_dimensions(n, k)?;
    let dup = build_dup(dims.ell, dims.d, k, budget)?;
    dup.padded_to(dims.layer_size as usize)
}

impl DupGraph {
    /// Assembles a graph from explicit parts without checking any DUP axiom.
    /// Used for counterexamples and for graphs read back from files.
    pub fn from_parts(
        graph: LayeredGraph,
        upcs: Vec<Upc>,
        params: DupParams,
        avg_free: Option<AvgFreeSet>,
    ) -> Self {
        DupGraph {
            graph,
            upcs,
            params,
            avg_free,
        }
    }

    pub fn graph(&self) -> &LayeredGraph {
        &self.graph
    }

    pub fn upcs(&self) -> &[Upc] {
        &self.upcs
    }

    pub fn upc(&self, i: usize) -> Result<&Upc> {
        self.upcs.get(i).ok_or(Error::IndexOutOfRange {
            what: "UPC",
            index: i,
            bound: self.upcs.len(),
        })
    }

    pub fn params(&self) -> &DupParams {
        &self.params
    }

    pub fn avg_free(&self) -> Option<&AvgFreeSet> {
        self.avg_free.as_ref()
    }

    pub fn p(&self) -> usize {
        self.params.p
    }

    pub fn q(&self) -> usize {
        self.params.q
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn num_layers(&self) -> usize {
        self.graph.num_layers()
    }

    pub fn layer_size(&self) -> usize {
        self.graph.layer_size(0)
    }

    /// Layer size of the unpadded construction, `((k+2)·ℓ)^d`.
    pub fn construction_layer_size(&self) -> usize {
        pow_u128((self.params.k as u64 + 2) * self.params.ell as u64, self.params.d) as usize
    }

    pub fn path(&self, i: usize, j: usize) -> &LayeredPath {
        &self.upcs[i].paths[j]
    }

    /// Pads every layer to `size` with isolated vertices at the top of its index range.
    pub fn padded_to(&self, size: usize) -> Result<DupGraph> {
        let graph = self.graph.padded_to(size)?;
        let padded = self.params.padded || size != self.layer_size();
        Ok(DupGraph {
            graph,
            upcs: self.upcs.clone(),
            params: DupParams {
                padded,
                ..self.params.clone()
            },
            avg_free: self.avg_free.clone(),
        })
    }

    /// Copy carrying one additional edge that belongs to no UPC path.
    pub fn with_foreign_edge(&self, a: usize, b: usize) -> Result<DupGraph> {
        Ok(DupGraph {
            graph: self.graph.with_extra_edge(a, b)?,
            ..self.clone()
        })
    }

    /// Set of DUP vertices (global ids) lying on paths of UPC `i`.
    pub fn upc_vertices(&self, i: usize) -> Result<BTreeSet<usize>> {
        let upc = self.upc(i)?;
        Ok(upc
            .paths
            .iter()
            .flat_map(|p| p.global(&self.graph))
            .collect())
    }
}

/// All layered paths from `s` (layer 0) that reach the last layer, as global ids.
fn paths_from(g: &LayeredGraph, s: usize, meter: &SharedMeter) -> Result<Vec<Vec<usize>>> {
    let last = g.num_layers() - 1;
    let mut out = Vec::new();
    let mut stack = vec![s];
    fn walk(
        g: &LayeredGraph,
        last: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        meter: &SharedMeter,
    ) -> Result<()> {
        meter.tick()?;
        let layer = stack.len() - 1;
        if layer == last {
            out.push(stack.clone());
            return Ok(());
        }
        let v = *stack.last().unwrap();
        for &w in g.neighbors(v) {
            if g.layer_of(w) == layer + 1 {
                stack.push(w);
                walk(g, last, stack, out, meter)?;
                stack.pop();
            }
        }
        Ok(())
    }
    walk(g, last, &mut stack, &mut out, meter)?;
    Ok(out)
}

fn to_local(g: &LayeredGraph, ids: &[usize]) -> LayeredPath {
    LayeredPath::new(ids.iter().map(|&v| g.locate(v).1).collect())
}

/// Every layered path from `s` in the first layer to `t` in the last layer.
pub fn enumerate_layered_paths(
    g: &LayeredGraph,
    s: usize,
    t: usize,
    budget: &Budget,
) -> Result<Vec<LayeredPath>> {
    let last = g.num_layers() - 1;
    if g.layer_of(s) != 0 || g.layer_of(t) != last {
        return Err(Error::InvalidParameter(format!(
            "path endpoints must lie in layers 0 and {last}"
        )));
    }
    let meter = SharedMeter::new("layered path search nodes", budget.paths);
    Ok(paths_from(g, s, &meter)?
        .into_iter()
        .filter(|p| *p.last().unwrap() == t)
        .map(|p| to_local(g, &p))
        .collect())
}

/// First violated UPC axiom, if any.
fn upc_violation(g: &LayeredGraph, upc: &Upc, meter: &SharedMeter) -> Result<Option<String>> {
    let layers = g.num_layers();
    let mut seen = HashSet::new();
    for (j, path) in upc.paths.iter().enumerate() {
        if path.len() != layers {
            return Ok(Some(format!("path {j} has {} vertices for {layers} layers", path.len())));
        }
        for (l, &v) in path.vertices.iter().enumerate() {
            if v >= g.layer_size(l) {
                return Ok(Some(format!("path {j} leaves layer {l}")));
            }
            if !seen.insert((l, v)) {
                return Ok(Some(format!("path {j} shares vertex {v} of layer {l}")));
            }
        }
        for (a, b) in path.edges(g) {
            if !g.has_edge(a, b) {
                return Ok(Some(format!("path {j} uses a missing edge ({a},{b})")));
            }
        }
    }
    let finals: BTreeMap<usize, usize> = upc
        .paths
        .iter()
        .enumerate()
        .map(|(j, p)| (g.vertex(layers - 1, p.final_vertex()), j))
        .collect();
    for (j, path) in upc.paths.iter().enumerate() {
        let own = path.global(g);
        for found in paths_from(g, own[0], meter)? {
            let end = *found.last().unwrap();
            match finals.get(&end) {
                None => {}
                Some(&jj) if jj == j && found == own => {}
                Some(&jj) => {
                    return Ok(Some(format!(
                        "extra layered path from START(P_{j}) to FINAL(P_{jj}): {:?}",
                        to_local(g, &found).vertices
                    )))
                }
            }
        }
    }
    Ok(None)
}

/// Checks both UPC axioms by exhaustive path enumeration.
pub fn verify_upc(g: &LayeredGraph, upc: &Upc, budget: &Budget) -> Result<bool> {
    let meter = SharedMeter::new("layered path search nodes", budget.paths);
    Ok(upc_violation(g, upc, &meter)?.is_none())
}

/// Full brute-force audit of a DUP graph.
pub fn verify_dup(dup: &DupGraph, budget: &Budget) -> Result<Report> {
    let g = dup.graph();
    let params = dup.params();
    let mut report = Report::new();

    report.push(
        "layer-count",
        g.num_layers() == params.k + 1,
        format!("{} layers for k={}", g.num_layers(), params.k),
    );
    report.push(
        "equal-layers",
        g.has_equal_layers(),
        format!("{:?}", dedup_sizes(g.layer_sizes())),
    );
    let intra = g
        .edges()
        .iter()
        .filter(|&&(a, b)| g.layer_of(a) == g.layer_of(b))
        .count();
    report.push("layers-independent", intra == 0, format!("{intra} edges inside a layer"));
    let non_strict = g
        .edges()
        .iter()
        .filter(|&&(a, b)| g.layer_of(a).abs_diff(g.layer_of(b)) != 1)
        .count();
    report.push(
        "strictly-layered",
        non_strict == 0,
        format!("{non_strict} edges skip layers"),
    );

    // edge partition: every graph edge on exactly one path, every path edge present
    let mut cover: BTreeMap<Edge, usize> = BTreeMap::new();
    let mut malformed = 0usize;
    for upc in dup.upcs() {
        for path in &upc.paths {
            if path.len() != g.num_layers()
                || path
                    .vertices
                    .iter()
                    .enumerate()
                    .any(|(l, &v)| v >= g.layer_size(l))
            {
                malformed += 1;
                continue;
            }
            for e in path.edges(g) {
                *cover.entry(e).or_default() += 1;
            }
        }
    }
    let uncovered = g.edges().iter().filter(|e| !cover.contains_key(e)).count();
    let doubled = cover.values().filter(|&&c| c > 1).count();
    let phantom = cover.keys().filter(|&&(a, b)| !g.has_edge(a, b)).count();
    report.push(
        "edge-partition",
        uncovered == 0 && doubled == 0 && phantom == 0 && malformed == 0,
        format!(
            "{uncovered} uncovered, {doubled} covered twice, {phantom} path edges missing, {malformed} malformed paths"
        ),
    );

    let meter = SharedMeter::new("layered path search nodes", budget.paths);
    let violations: Vec<(usize, String)> = dup
        .upcs()
        .par_iter()
        .enumerate()
        .map(|(i, upc)| upc_violation(g, upc, &meter).map(|v| v.map(|msg| (i, msg))))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    report.push(
        "unique-paths",
        violations.is_empty(),
        match violations.first() {
            Some((i, msg)) => format!("{} UPCs fail; first is UPC {i}: {msg}", violations.len()),
            None => format!("{} UPCs verified", dup.upcs().len()),
        },
    );

    let q_expected = pow_u128(params.ell as u64, params.d);
    report.push(
        "param-q",
        dup.upcs().len() == params.q && params.q as u128 == q_expected,
        format!("{} UPCs, declared q={}, ell^d={q_expected}", dup.upcs().len(), params.q),
    );
    let wrong_p = dup.upcs().iter().filter(|u| u.paths.len() != params.p).count();
    let p_matches_set = dup.avg_free().is_none_or(|a| a.len() == params.p);
    report.push(
        "param-p",
        wrong_p == 0 && p_matches_set,
        match dup.avg_free() {
            Some(a) if !p_matches_set => format!("path steps use {} direction vectors, p={}", a.len(), params.p),
            _ => format!("{wrong_p} UPCs without exactly p={} paths", params.p),
        },
    );
    if let Some(a) = dup.avg_free() {
        let bound = AvgFreeSet::pigeonhole_bound(params.ell, params.d);
        report.push(
            "p-lower-bound",
            params.p as u128 >= bound,
            format!("p={} vs ceil(ell^d/(d*ell^2))={bound}", params.p),
        );
        report.push("construction-endpoints", endpoints_match(dup, a), String::new());
    }
    Ok(report)
}

fn dedup_sizes(sizes: &[usize]) -> Vec<usize> {
    let mut s = sizes.to_vec();
    s.dedup();
    s
}

/// `START(P_{x,y}) = x + y` and `FINAL(P_{x,y}) = x + (k+1)·y` for every path.
fn endpoints_match(dup: &DupGraph, a: &AvgFreeSet) -> bool {
    let p = dup.params();
    let width = (p.k as u32 + 2) * p.ell;
    if dup.upcs().len() as u128 != pow_u128(p.ell as u64, p.d) {
        return false;
    }
    let base = dup.construction_layer_size();
    for (i, upc) in dup.upcs().iter().enumerate() {
        let x = decode_vector(i, p.ell, p.d);
        if upc.paths.len() != a.len() {
            return false;
        }
        for (path, y) in upc.paths.iter().zip(a.vectors()) {
            let at = |mult: u32| -> usize {
                let v: Vec<u32> = x.iter().zip(y).map(|(&xc, &yc)| xc + mult * yc).collect();
                encode_vector(&v, width)
            };
            if path.start() != at(1) || path.final_vertex() != at(p.k as u32 + 1) {
                return false;
            }
            if path.vertices.iter().any(|&v| v >= base) {
                return false;
            }
        }
    }
    true
}

/// Serializes to the line-oriented `dupg 1` format.
pub fn write_dupg(dup: &DupGraph) -> String {
    let p = dup.params();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "dupg 1 {} {} {} {} {} {}",
        p.k + 1,
        dup.layer_size(),
        p.p,
        p.q,
        p.ell,
        p.d
    );
    for (i, upc) in dup.upcs().iter().enumerate() {
        for (j, path) in upc.paths.iter().enumerate() {
            let _ = write!(out, "upc {i} {j}");
            for v in &path.vertices {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
    }
    let base = dup.construction_layer_size().min(dup.layer_size());
    for _ in 0..dup.num_layers() {
        let _ = writeln!(out, "pad {}", dup.layer_size() - base);
    }
    out
}

fn parse_fields<const N: usize>(line_no: usize, fields: &[&str]) -> Result<[usize; N]> {
    if fields.len() != N {
        return Err(Error::parse(line_no, format!("expected {N} numbers, found {}", fields.len())));
    }
    let mut out = [0usize; N];
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f
            .parse()
            .map_err(|_| Error::parse(line_no, format!("`{f}` is not a non-negative integer")))?;
    }
    Ok(out)
}

/// Parsed header and UPC paths of a `dupg 1` document.
pub(crate) struct DupgBody {
    pub dup: DupGraph,
    /// Lines after the `pad` block, with their 1-based line numbers.
    pub rest: Vec<(usize, String)>,
}

pub(crate) fn parse_dupg_body(text: &str) -> Result<DupgBody> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (line_no, header) = lines
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| Error::parse(1, "empty document"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 2 || fields[0] != "dupg" || fields[1] != "1" {
        return Err(Error::parse(line_no, "expected header `dupg 1 ...`"));
    }
    let [layers, layer_size, p, q, ell, d] = parse_fields::<6>(line_no, &fields[2..])?;
    if layers < 2 {
        return Err(Error::parse(line_no, "a DUP graph needs at least 2 layers"));
    }
    if ell == 0 || d == 0 {
        return Err(Error::parse(line_no, "ell and d must be positive"));
    }
    let k = layers - 1;
    let mut upcs: Vec<Upc> = Vec::new();
    let mut pads = Vec::new();
    let mut rest = Vec::new();
    for (line_no, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "upc" if pads.is_empty() => {
                if fields.len() != 3 + layers {
                    return Err(Error::parse(line_no, format!("a path needs {layers} vertices")));
                }
                let [i, j] = parse_fields::<2>(line_no, &fields[1..3])?;
                let (_, verts) = fields.split_at(3);
                let mut vertices = Vec::with_capacity(layers);
                for v in verts {
                    let [v] = parse_fields::<1>(line_no, &[v])?;
                    if v >= layer_size {
                        return Err(Error::parse(line_no, format!("vertex {v} outside layer")));
                    }
                    vertices.push(v);
                }
                if i != upcs.len() && i + 1 != upcs.len() {
                    return Err(Error::parse(line_no, "UPC lines out of order"));
                }
                if i == upcs.len() {
                    upcs.push(Upc { paths: Vec::new() });
                }
                if j != upcs[i].paths.len() {
                    return Err(Error::parse(line_no, "path lines out of order"));
                }
                upcs[i].paths.push(LayeredPath::new(vertices));
            }
            "pad" if pads.len() < layers => {
                let [count] = parse_fields::<1>(line_no, &fields[1..])?;
                if count > layer_size {
                    return Err(Error::parse(line_no, "padding larger than the layer"));
                }
                pads.push(count);
            }
            _ if pads.len() == layers => rest.push((line_no, line.to_string())),
            other => return Err(Error::parse(line_no, format!("unexpected `{other}` line"))),
        }
    }
    if pads.len() != layers {
        return Err(Error::parse(0, format!("expected {layers} pad lines, found {}", pads.len())));
    }
    let mut edges = Vec::new();
    let g0 = LayeredGraph::new(vec![layer_size; layers], std::iter::empty())?;
    for upc in &upcs {
        for path in &upc.paths {
            edges.extend(path.edges(&g0));
        }
    }
    let graph = LayeredGraph::new(vec![layer_size; layers], edges)?;
    let avg_free = recover_avg_free(&upcs, ell as u32, d as u32, k);
    let dup = DupGraph::from_parts(
        graph,
        upcs,
        DupParams {
            ell: ell as u32,
            d: d as u32,
            k,
            p,
            q,
            padded: pads.iter().any(|&c| c > 0),
        },
        avg_free,
    );
    Ok(DupgBody { dup, rest })
}

/// Reads a `dupg 1` document.
pub fn parse_dupg(text: &str) -> Result<DupGraph> {
    let body = parse_dupg_body(text)?;
    if let Some((line_no, line)) = body.rest.first() {
        return Err(Error::parse(*line_no, format!("trailing content `{line}`")));
    }
    Ok(body.dup)
}

/// Direction vectors `y` recovered from the first step of each path; `None`
/// when a step does not decode to a vector of `[ell]^d`.
fn recover_avg_free(upcs: &[Upc], ell: u32, d: u32, k: usize) -> Option<AvgFreeSet> {
    let width = (k as u32 + 2).checked_mul(ell)?;
    let mut ys = BTreeSet::new();
    for upc in upcs {
        for path in &upc.paths {
            let a = decode_vector(*path.vertices.first()?, width, d);
            let b = decode_vector(*path.vertices.get(1)?, width, d);
            let y: Option<Vec<u32>> = a
                .iter()
                .zip(&b)
                .map(|(&ac, &bc)| bc.checked_sub(ac).filter(|&c| c >= 1 && c <= ell))
                .collect();
            ys.insert(y?);
        }
    }
    AvgFreeSet::from_vectors(ell, d, ys.into_iter().collect()).ok()
}
