//! Rooted, locally finite, undirected graphs with an optional lattice
//! embedding, plus the intrinsic (graph-distance) and extrinsic (sup-norm)
//! growth profiles computed on them.
//!
//! Vertex ids are dense and assigned in BFS discovery order from the root,
//! so the intrinsic ball `B(k)` is always the id prefix `0..layer_end(k)`.

use std::collections::VecDeque;
use std::fmt;
use std::hash::Hash;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{arg, contract, Error, Result};

pub type VertexId = u32;

/// Integer coordinates of the vertices in `Z^d`, flattened row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    dim: usize,
    coords: Vec<i32>,
    injective: bool,
}

impl Embedding {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coord(&self, v: VertexId) -> &[i32] {
        let v = v as usize;
        &self.coords[v * self.dim..(v + 1) * self.dim]
    }

    /// `false` only for site embeddings of branching random walks, where
    /// several vertices may share a lattice site.
    pub fn is_injective(&self) -> bool {
        self.injective
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }
}

/// Graph distance, with unreachability as an explicit variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(u64),
    Infinite,
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}

/// Immutable rooted graph in compressed adjacency form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<VertexId>,
    /// `layer_ends[k]` = number of vertices at distance `<= k` from the root.
    layer_ends: Vec<usize>,
    embedding: Option<Embedding>,
    /// Set on windows cut out of a larger graph: only vertices at depth
    /// `< window` are guaranteed to have all their neighbors present.
    window: Option<usize>,
}

impl Graph {
    /// Build from an undirected edge list. Validates the graph invariants
    /// and relabels vertices in BFS order from `root`; `coords` (if any) are
    /// indexed by the input ids and travel with their vertices.
    pub fn from_edges(
        num_vertices: usize,
        edges: &[(VertexId, VertexId)],
        root: VertexId,
        coords: Option<(usize, Vec<i32>)>,
    ) -> Result<Graph> {
        Self::build(num_vertices, edges, root, coords, true)
    }

    /// As [`Graph::from_edges`], but the embedding may place several
    /// vertices on the same site.
    pub fn from_edges_with_sites(
        num_vertices: usize,
        edges: &[(VertexId, VertexId)],
        root: VertexId,
        dim: usize,
        coords: Vec<i32>,
    ) -> Result<Graph> {
        Self::build(num_vertices, edges, root, Some((dim, coords)), false)
    }

    /// Build from per-vertex neighbor lists, checking symmetry.
    pub fn from_adjacency(
        lists: &[Vec<VertexId>],
        root: VertexId,
        coords: Option<(usize, Vec<i32>)>,
    ) -> Result<Graph> {
        let n = lists.len();
        let mut edges = Vec::new();
        for (u, list) in lists.iter().enumerate() {
            for &v in list {
                if v as usize >= n {
                    return contract(format!("vertex {u} lists out-of-range neighbor {v}"));
                }
                if (u as VertexId) < v {
                    edges.push((u as VertexId, v));
                }
            }
        }
        let g = Self::build(n, &edges, root, coords, true)?;
        // Symmetry: each list must match the edge set exactly.
        let total: usize = lists.iter().map(Vec::len).sum();
        if total != 2 * g.num_edges() {
            return contract(
                "adjacency lists are not symmetric (or contain duplicates/self-loops)",
            );
        }
        for (u, list) in lists.iter().enumerate() {
            for &v in list {
                if !lists[v as usize].contains(&(u as VertexId)) {
                    return contract(format!(
                        "asymmetric adjacency: {u} lists {v} but not vice versa"
                    ));
                }
            }
        }
        Ok(g)
    }

    fn build(
        n: usize,
        edges: &[(VertexId, VertexId)],
        root: VertexId,
        coords: Option<(usize, Vec<i32>)>,
        require_injective: bool,
    ) -> Result<Graph> {
        if n == 0 {
            return arg("graph must have at least one vertex");
        }
        if n > VertexId::MAX as usize {
            return Err(Error::Capacity(format!("{n} vertices exceed the id range")));
        }
        if root as usize >= n {
            return arg(format!("root {root} out of range for {n} vertices"));
        }
        if let Some((dim, c)) = &coords {
            if *dim == 0 || c.len() != dim * n {
                return arg("embedding must have dim >= 1 and dim coordinates per vertex");
            }
        }
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return arg(format!("edge ({u},{v}) out of range"));
            }
            if u == v {
                return contract(format!("self-loop at {u}"));
            }
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut nbrs = vec![0 as VertexId; offsets[n]];
        for &(u, v) in edges {
            nbrs[fill[u as usize]] = v;
            fill[u as usize] += 1;
            nbrs[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for i in 0..n {
            let list = &mut nbrs[offsets[i]..offsets[i + 1]];
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return contract(format!("duplicate edge at vertex {i}"));
            }
        }

        // BFS relabelling.
        let mut order = Vec::with_capacity(n);
        let mut new_id = vec![VertexId::MAX; n];
        let mut layer_ends = Vec::new();
        new_id[root as usize] = 0;
        order.push(root);
        let mut head = 0;
        while head < order.len() {
            let layer_end = order.len();
            layer_ends.push(layer_end);
            while head < layer_end {
                let u = order[head] as usize;
                head += 1;
                for &v in &nbrs[offsets[u]..offsets[u + 1]] {
                    if new_id[v as usize] == VertexId::MAX {
                        new_id[v as usize] = order.len() as VertexId;
                        order.push(v);
                    }
                }
            }
        }
        if order.len() != n {
            return contract(format!(
                "graph is not connected: {} of {n} vertices reachable from root",
                order.len()
            ));
        }

        let mut new_offsets = Vec::with_capacity(n + 1);
        let mut new_nbrs = Vec::with_capacity(nbrs.len());
        new_offsets.push(0);
        for &old in &order {
            let old = old as usize;
            let start = new_nbrs.len();
            new_nbrs.extend(
                nbrs[offsets[old]..offsets[old + 1]]
                    .iter()
                    .map(|&v| new_id[v as usize]),
            );
            new_nbrs[start..].sort_unstable();
            new_offsets.push(new_nbrs.len());
        }

        let embedding = match coords {
            None => None,
            Some((dim, c)) => {
                let mut out = Vec::with_capacity(c.len());
                for &old in &order {
                    let old = old as usize;
                    out.extend_from_slice(&c[old * dim..(old + 1) * dim]);
                }
                let distinct = {
                    let mut seen = FxHashSet::default();
                    out.chunks_exact(dim).all(|p| seen.insert(p))
                };
                if require_injective && !distinct {
                    return contract("embedding is not injective");
                }
                Some(Embedding {
                    dim,
                    coords: out,
                    injective: distinct,
                })
            }
        };

        Ok(Graph {
            offsets: new_offsets,
            neighbors: new_nbrs,
            layer_ends,
            embedding,
            window: None,
        })
    }

    /// Assemble a graph whose ids are already in BFS order with sorted,
    /// symmetric neighbor lists. Checked in debug builds only.
    pub(crate) fn from_bfs_csr(
        offsets: Vec<usize>,
        neighbors: Vec<VertexId>,
        layer_ends: Vec<usize>,
        embedding: Option<(usize, Vec<i32>, bool)>,
    ) -> Graph {
        let g = Graph {
            offsets,
            neighbors,
            layer_ends,
            embedding: embedding.map(|(dim, coords, injective)| Embedding {
                dim,
                coords,
                injective,
            }),
            window: None,
        };
        debug_assert!(g.validate().is_ok(), "{:?}", g.validate());
        g
    }

    /// Mark the graph as a window of a larger graph, complete below depth `r`.
    pub fn with_window(mut self, r: usize) -> Graph {
        self.window = Some(self.window.map_or(r, |w| w.min(r)));
        self
    }

    /// `None` for a graph that is complete in its own right.
    pub fn window(&self) -> Option<usize> {
        self.window
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// The root always has id 0.
    pub fn root(&self) -> VertexId {
        0
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.embedding.as_ref()
    }

    /// Largest distance from the root.
    pub fn radius(&self) -> usize {
        self.layer_ends.len() - 1
    }

    /// Number of vertices within distance `k` of the root.
    pub fn layer_end(&self, k: usize) -> usize {
        self.layer_ends[k.min(self.layer_ends.len() - 1)]
    }

    /// Distance of `v` from the root.
    pub fn depth(&self, v: VertexId) -> usize {
        self.layer_ends.partition_point(|&end| end <= v as usize)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if (v as usize) < self.num_vertices() {
            Ok(())
        } else {
            arg(format!(
                "vertex {v} out of range (|V| = {})",
                self.num_vertices()
            ))
        }
    }

    /// Induced subgraph on `B(r)`; ids are preserved.
    pub fn ball_subgraph(&self, r: usize) -> Graph {
        let keep = self.layer_end(r);
        let mut offsets = Vec::with_capacity(keep + 1);
        let mut nbrs = Vec::new();
        offsets.push(0);
        for v in 0..keep {
            nbrs.extend(
                self.neighbors(v as VertexId)
                    .iter()
                    .filter(|&&w| (w as usize) < keep),
            );
            offsets.push(nbrs.len());
        }
        let layer_ends = self.layer_ends[..=r.min(self.radius())].to_vec();
        let embedding = self
            .embedding
            .as_ref()
            .map(|e| (e.dim, e.coords[..keep * e.dim].to_vec(), e.injective));
        let g = Graph::from_bfs_csr(offsets, nbrs, layer_ends, embedding);
        match self.window {
            Some(w) => g.with_window(w.min(r)),
            None if r < self.radius() => g.with_window(r),
            None => g,
        }
    }

    /// `true` if `|E| = |V| - 1` (connected graphs only, so a tree).
    pub fn is_tree(&self) -> bool {
        self.num_edges() + 1 == self.num_vertices()
    }

    /// Two-colourability check via BFS depths.
    pub fn is_bipartite(&self) -> bool {
        (0..self.num_vertices() as VertexId).all(|v| {
            let dv = self.depth(v);
            self.neighbors(v).iter().all(|&w| self.depth(w) != dv)
        })
    }

    /// Full invariant check: symmetry, no loops or duplicates, BFS ordering
    /// and layer bookkeeping, injectivity of the embedding.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vertices();
        for v in 0..n as VertexId {
            let list = self.neighbors(v);
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return contract(format!("neighbor list of {v} unsorted or duplicated"));
            }
            for &w in list {
                if w as usize >= n || w == v {
                    return contract(format!("bad neighbor {w} of {v}"));
                }
                if self.neighbors(w).binary_search(&v).is_err() {
                    return contract(format!("asymmetric edge {v} -> {w}"));
                }
            }
        }
        // BFS from root must reproduce the stored layers exactly.
        let dist = bfs_distances(self, 0);
        let mut ends = Vec::new();
        for (v, d) in dist.iter().enumerate() {
            let d = match d {
                Some(d) => *d,
                None => return contract(format!("vertex {v} unreachable from root")),
            };
            if v > 0 && d < dist[v - 1].unwrap_or(0) {
                return contract("ids are not in BFS order");
            }
            if d == ends.len() {
                ends.push(v + 1);
            } else {
                ends[d] = v + 1;
            }
        }
        if ends != self.layer_ends {
            return contract("layer bookkeeping inconsistent with BFS");
        }
        if let Some(e) = &self.embedding {
            if e.coords.len() != e.dim * n {
                return contract("embedding size mismatch");
            }
            if e.injective {
                let mut seen = FxHashSet::default();
                if !e.coords.chunks_exact(e.dim).all(|p| seen.insert(p)) {
                    return contract("embedding flagged injective but has collisions");
                }
            }
        }
        Ok(())
    }
}

fn bfs_distances(g: &Graph, source: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.num_vertices()];
    let mut queue = VecDeque::new();
    dist[source as usize] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize].unwrap();
        for &w in g.neighbors(u) {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Length of a shortest path between `x` and `y`.
pub fn graph_distance(g: &Graph, x: VertexId, y: VertexId) -> Result<Distance> {
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Ok(Distance::Finite(0));
    }
    let mut dist = vec![u32::MAX; g.num_vertices()];
    let mut queue = VecDeque::new();
    dist[x as usize] = 0;
    queue.push_back(x);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &w in g.neighbors(u) {
            if dist[w as usize] == u32::MAX {
                if w == y {
                    return Ok(Distance::Finite(du as u64 + 1));
                }
                dist[w as usize] = du + 1;
                queue.push_back(w);
            }
        }
    }
    Ok(Distance::Infinite)
}

/// `|B(k)|` and `|∂B(k)|` for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallProfile {
    pub ball_sizes: Vec<u64>,
    pub boundary_sizes: Vec<u64>,
}

impl BallProfile {
    pub fn from_ball_sizes(ball_sizes: Vec<u64>) -> BallProfile {
        let boundary_sizes = ball_sizes
            .iter()
            .enumerate()
            .map(|(k, &b)| if k == 0 { b } else { b - ball_sizes[k - 1] })
            .collect();
        BallProfile {
            ball_sizes,
            boundary_sizes,
        }
    }

    pub fn radius(&self) -> usize {
        self.ball_sizes.len() - 1
    }
}

/// Read access for graphs that are generated while being explored.
pub trait Explorer {
    type Vertex: Copy + Eq + Hash;
    fn root(&self) -> Self::Vertex;
    /// Push the neighbors of `v` onto `out`.
    fn neighbors(&mut self, v: Self::Vertex, out: &mut Vec<Self::Vertex>);
}

impl Explorer for &Graph {
    type Vertex = VertexId;

    fn root(&self) -> VertexId {
        0
    }

    fn neighbors(&mut self, v: VertexId, out: &mut Vec<VertexId>) {
        out.extend_from_slice(Graph::neighbors(self, v));
    }
}

/// Layered BFS to depth `n` on any explorer. Vertices at distance `> n`
/// are never expanded.
pub fn explore_ball<E: Explorer>(e: &mut E, n: usize) -> BallProfile {
    explore_ball_from(e, e.root(), n)
}

pub fn explore_ball_from<E: Explorer>(e: &mut E, start: E::Vertex, n: usize) -> BallProfile {
    let mut seen: FxHashSet<E::Vertex> = FxHashSet::default();
    seen.insert(start);
    let mut frontier = vec![start];
    let mut next = Vec::new();
    let mut buf = Vec::new();
    let mut sizes = vec![1u64];
    for _ in 0..n {
        for &u in &frontier {
            buf.clear();
            e.neighbors(u, &mut buf);
            for &w in &buf {
                if seen.insert(w) {
                    next.push(w);
                }
            }
        }
        sizes.push(seen.len() as u64);
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    BallProfile::from_ball_sizes(sizes)
}

/// Ball profile around the root, `k = 0..=n`.
pub fn ball_profile(g: &Graph, n: usize) -> BallProfile {
    BallProfile::from_ball_sizes((0..=n).map(|k| g.layer_end(k) as u64).collect())
}

/// Ball profile around an arbitrary base point.
pub fn ball_profile_from(g: &Graph, x: VertexId, n: usize) -> Result<BallProfile> {
    g.check_vertex(x)?;
    let mut dist = vec![u32::MAX; g.num_vertices()];
    let mut counts = vec![0u64; n + 1];
    let mut queue = VecDeque::new();
    dist[x as usize] = 0;
    queue.push_back(x);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize] as usize;
        counts[du] += 1;
        if du == n {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = du as u32 + 1;
                queue.push_back(w);
            }
        }
    }
    let mut acc = 0;
    Ok(BallProfile::from_ball_sizes(
        counts
            .into_iter()
            .map(|c| {
                acc += c;
                acc
            })
            .collect(),
    ))
}

/// `|V ∩ Q(k)|` for `k = 0..=n` (distinct occupied sites).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassProfile {
    pub counts: Vec<u64>,
}

/// Mass profile of any collection of lattice sites; duplicates count once.
pub fn site_mass_profile<'a>(sites: impl IntoIterator<Item = &'a [i32]>, n: usize) -> MassProfile {
    let mut hist = vec![0u64; n + 1];
    let mut seen: FxHashSet<&[i32]> = FxHashSet::default();
    for site in sites {
        let norm = site
            .iter()
            .map(|c| c.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        if norm <= n && seen.insert(site) {
            hist[norm] += 1;
        }
    }
    let mut acc = 0;
    MassProfile {
        counts: hist
            .into_iter()
            .map(|c| {
                acc += c;
                acc
            })
            .collect(),
    }
}

/// Sup-norm mass profile of an embedded graph.
pub fn mass_profile(g: &Graph, n: usize) -> Result<MassProfile> {
    let e = match g.embedding() {
        Some(e) => e,
        None => return contract("mass profile requires an embedded graph"),
    };
    Ok(site_mass_profile(e.coords.chunks_exact(e.dim), n))
}

/// Serialise in the `graphdim-adj v1` text format.
pub fn write_adjacency(g: &Graph) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let dim = g
        .embedding()
        .map(|e| e.dim.to_string())
        .unwrap_or_else(|| "-".into());
    writeln!(
        s,
        "graphdim-adj v1 {} {} {}",
        g.num_vertices(),
        g.root(),
        dim
    )
    .unwrap();
    for v in 0..g.num_vertices() as VertexId {
        write!(s, "{v}:").unwrap();
        for w in g.neighbors(v) {
            write!(s, " {w}").unwrap();
        }
        s.push('\n');
    }
    if let Some(e) = g.embedding() {
        for v in 0..g.num_vertices() as VertexId {
            write!(s, "{v}").unwrap();
            for c in e.coord(v) {
                write!(s, " {c}").unwrap();
            }
            s.push('\n');
        }
    }
    s
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

/// Parse the `graphdim-adj v1` text format. Vertices are relabelled in
/// BFS order from the declared root (a no-op for files written by
/// [`write_adjacency`]).
pub fn read_adjacency(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = match lines.next() {
        Some(h) => h,
        None => return parse_err(1, "empty input"),
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "graphdim-adj" || fields[1] != "v1" {
        return parse_err(1, "expected header `graphdim-adj v1 <V> <root> <d|->`");
    }
    let n: usize = fields[2]
        .parse()
        .or_else(|_| parse_err(1, "bad vertex count"))?;
    let root: VertexId = fields[3].parse().or_else(|_| parse_err(1, "bad root"))?;
    let dim: Option<usize> = match fields[4] {
        "-" => None,
        d => Some(d.parse().or_else(|_| parse_err(1, "bad dimension"))?),
    };
    let mut lists = vec![Vec::new(); n];
    for (expect, slot) in lists.iter_mut().enumerate() {
        let (ln, line) = match lines.next() {
            Some(l) => l,
            None => return parse_err(expect + 2, "missing adjacency line"),
        };
        let (id, rest) = match line.split_once(':') {
            Some(p) => p,
            None => return parse_err(ln, "expected `<id>: <neighbors>`"),
        };
        if id.trim().parse::<usize>().ok() != Some(expect) {
            return parse_err(ln, format!("expected vertex id {expect}"));
        }
        for tok in rest.split_whitespace() {
            slot.push(
                tok.parse()
                    .or_else(|_| parse_err(ln, format!("bad neighbor `{tok}`")))?,
            );
        }
    }
    let coords = match dim {
        None => None,
        Some(d) => {
            let mut c = Vec::with_capacity(n * d);
            for expect in 0..n {
                let (ln, line) = match lines.next() {
                    Some(l) => l,
                    None => return parse_err(n + expect + 2, "missing coordinate line"),
                };
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != d + 1 || toks[0].parse::<usize>().ok() != Some(expect) {
                    return parse_err(
                        ln,
                        format!("expected `{expect}` followed by {d} coordinates"),
                    );
                }
                for tok in &toks[1..] {
                    c.push(
                        tok.parse()
                            .or_else(|_| parse_err(ln, format!("bad coordinate `{tok}`")))?,
                    );
                }
            }
            Some((d, c))
        }
    };
    for (ln, line) in lines {
        if !line.trim().is_empty() {
            return parse_err(ln, "trailing content");
        }
    }
    // Site embeddings (collisions) are accepted; `from_adjacency` insists on
    // injectivity, so check first.
    let injective = coords.as_ref().is_none_or(|(d, c)| {
        let mut seen = FxHashSet::default();
        c.chunks_exact(*d).all(|p| seen.insert(p))
    });
    if injective {
        Graph::from_adjacency(&lists, root, coords)
    } else {
        let g = Graph::from_adjacency(&lists, root, None)?;
        let (d, c) = coords.unwrap();
        let edges: Vec<_> = lists
            .iter()
            .enumerate()
            .flat_map(|(u, l)| {
                l.iter()
                    .filter(move |&&v| (u as VertexId) < v)
                    .map(move |&v| (u as VertexId, v))
            })
            .collect();
        debug_assert_eq!(edges.len(), g.num_edges());
        Graph::from_edges_with_sites(n, &edges, root, d, c)
    }
}

/// Occupancy multiplicity of each site of an embedded graph.
pub fn site_multiplicity(g: &Graph) -> Option<FxHashMap<Vec<i32>, u32>> {
    let e = g.embedding()?;
    let mut m: FxHashMap<Vec<i32>, u32> = FxHashMap::default();
    for p in e.coords.chunks_exact(e.dim) {
        *m.entry(p.to_vec()).or_insert(0) += 1;
    }
    Some(m)
}
