//! Deterministic reference graphs.

use rustc_hash::FxHashMap;

use crate::error::{arg, Error, Result};
use crate::graph::{Graph, VertexId};

/// Upper bound on generated vertex counts.
pub const MAX_VERTICES: usize = 1 << 30;

fn capacity(what: &str, count: Option<usize>) -> Result<usize> {
    match count {
        Some(c) if c <= MAX_VERTICES => Ok(c),
        _ => Err(Error::Capacity(format!(
            "{what} exceeds {MAX_VERTICES} vertices"
        ))),
    }
}

/// The box `Q(n) = [-n, n]^d ∩ Z^d` with nearest-neighbour edges, rooted at
/// the origin and embedded identically.
pub fn make_lattice_box(d: usize, n: usize) -> Result<Graph> {
    if d == 0 {
        return arg("dimension must be at least 1");
    }
    let side = 2 * n + 1;
    let count = capacity("lattice box", side.checked_pow(d as u32))?;
    let mut coords = Vec::with_capacity(count * d);
    let mut edges = Vec::with_capacity(count * d);
    let mut stride = vec![1usize; d];
    for axis in 1..d {
        stride[axis] = stride[axis - 1] * side;
    }
    for id in 0..count {
        let mut rem = id;
        for axis in 0..d {
            let c = rem % side;
            rem /= side;
            coords.push(c as i32 - n as i32);
            if c + 1 < side {
                edges.push((id as VertexId, (id + stride[axis]) as VertexId));
            }
        }
    }
    let origin: usize = stride.iter().map(|s| s * n).sum();
    Graph::from_edges(count, &edges, origin as VertexId, Some((d, coords)))
}

/// Rooted `b`-ary tree: every vertex above depth `depth` has `b` children.
pub fn make_regular_tree(b: usize, depth: usize) -> Result<Graph> {
    if b < 2 {
        return arg("branching number must be at least 2");
    }
    let mut count = 1usize;
    let mut layer = 1usize;
    for _ in 0..depth {
        layer = layer
            .checked_mul(b)
            .ok_or_else(|| Error::Capacity("regular tree too large".into()))?;
        count = capacity("regular tree", count.checked_add(layer))?;
    }
    let internal = count - layer;
    let edges: Vec<_> = (0..internal)
        .flat_map(|p| (1..=b).map(move |c| (p as VertexId, (p * b + c) as VertexId)))
        .collect();
    Graph::from_edges(count, &edges, 0, None)
}

/// Finite ball of the `degree`-regular tree: the root has `degree`
/// children, every other internal vertex `degree - 1`.
pub fn make_homogeneous_tree(degree: usize, depth: usize) -> Result<Graph> {
    if degree < 2 {
        return arg("degree must be at least 2");
    }
    let mut edges = Vec::new();
    let mut layer: Vec<VertexId> = vec![0];
    let mut next_id = 1usize;
    for level in 0..depth {
        let kids = if level == 0 { degree } else { degree - 1 };
        capacity(
            "homogeneous tree",
            next_id.checked_add(layer.len().saturating_mul(kids)),
        )?;
        let mut next = Vec::with_capacity(layer.len() * kids);
        for &p in &layer {
            for _ in 0..kids {
                edges.push((p, next_id as VertexId));
                next.push(next_id as VertexId);
                next_id += 1;
            }
        }
        layer = next;
    }
    Graph::from_edges(next_id, &edges, 0, None)
}

/// Path `0 - 1 - ... - n` rooted at an end, embedded on the first axis.
pub fn make_path(n: usize) -> Result<Graph> {
    capacity("path", n.checked_add(1))?;
    let edges: Vec<_> = (0..n as VertexId).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n + 1, &edges, 0, Some((1, (0..=n as i32).collect())))
}

/// Level-`level` Sierpinski gasket graph.
///
/// Coordinates use the affine frame in which the outer triangle has corners
/// `(0,0)`, `(2^level, 0)` and `(0, 2^level)`; each unit cell contributes the
/// triangle on `(x,y)`, `(x+1,y)`, `(x,y+1)`. The root is the corner `(0,0)`.
pub fn make_sierpinski(level: usize) -> Result<Graph> {
    if level > 18 {
        return Err(Error::Capacity(format!(
            "Sierpinski level {level} too large"
        )));
    }
    let mut cells: Vec<(i32, i32)> = vec![(0, 0)];
    for k in 1..=level {
        let half = 1i32 << (k - 1);
        let base = cells.clone();
        cells.extend(base.iter().map(|&(x, y)| (x + half, y)));
        cells.extend(base.iter().map(|&(x, y)| (x, y + half)));
    }
    let mut ids: FxHashMap<(i32, i32), VertexId> = FxHashMap::default();
    let mut coords = Vec::new();
    let mut id_of = |p: (i32, i32), coords: &mut Vec<i32>| {
        let next = ids.len() as VertexId;
        *ids.entry(p).or_insert_with(|| {
            coords.push(p.0);
            coords.push(p.1);
            next
        })
    };
    let mut edges = Vec::with_capacity(3 * cells.len());
    for &(x, y) in &cells {
        let a = id_of((x, y), &mut coords);
        let b = id_of((x + 1, y), &mut coords);
        let c = id_of((x, y + 1), &mut coords);
        edges.extend([(a, b), (b, c), (a, c)]);
    }
    let n = coords.len() / 2;
    Graph::from_edges(n, &edges, 0, Some((2, coords)))
}
