//! Discrete Dirichlet problems for the graph Laplacian.
//!
//! Unknowns are a subset `U` of the vertices; every other vertex carries a
//! known value. For `x` in `U` the equation is
//!
//! `deg(x) u(x) - sum_{y ~ x, y in U} u(y) = source(x) + sum_{y ~ x, y not in U} value(y)`,
//!
//! which is symmetric positive definite whenever every component of `U`
//! touches a known vertex.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

pub struct Dirichlet<'a> {
    pub graph: &'a Graph,
    /// Unknowns are the ids in `range` for which `mask` (if any) is true.
    pub range: Range<usize>,
    pub mask: Option<&'a [bool]>,
    pub value: &'a dyn Fn(VertexId) -> f64,
    pub source: &'a dyn Fn(VertexId) -> f64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    /// Local index -> vertex id.
    pub vertices: Vec<VertexId>,
    pub values: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

impl Solution {
    pub fn get(&self, v: VertexId) -> Option<f64> {
        self.vertices.binary_search(&v).ok().map(|i| self.values[i])
    }
}

struct System {
    vertices: Vec<VertexId>,
    /// Vertex id -> local index + 1 (0 = known), over `range`.
    local: Vec<u32>,
    offset: usize,
    rhs: Vec<f64>,
    diag: Vec<f64>,
}

impl System {
    fn new(p: &Dirichlet<'_>) -> System {
        let offset = p.range.start;
        let mut local = vec![0u32; p.range.len()];
        let mut vertices = Vec::new();
        for v in p.range.clone() {
            if p.mask.is_none_or(|m| m[v]) {
                vertices.push(v as VertexId);
                local[v - offset] = vertices.len() as u32;
            }
        }
        let mut sys = System {
            vertices,
            local,
            offset,
            rhs: Vec::new(),
            diag: Vec::new(),
        };
        let mut rhs = Vec::with_capacity(sys.vertices.len());
        let mut diag = Vec::with_capacity(sys.vertices.len());
        for &v in &sys.vertices {
            let mut b = (p.source)(v);
            for &w in p.graph.neighbors(v) {
                if sys.index(w).is_none() {
                    b += (p.value)(w);
                }
            }
            rhs.push(b);
            diag.push(p.graph.degree(v) as f64);
        }
        sys.rhs = rhs;
        sys.diag = diag;
        sys
    }

    #[inline]
    fn index(&self, w: VertexId) -> Option<usize> {
        let w = w as usize;
        if w < self.offset || w >= self.offset + self.local.len() {
            return None;
        }
        match self.local[w - self.offset] {
            0 => None,
            i => Some(i as usize - 1),
        }
    }

    fn apply(&self, g: &Graph, x: &[f64], out: &mut [f64]) {
        for (i, &v) in self.vertices.iter().enumerate() {
            let mut acc = self.diag[i] * x[i];
            for &w in g.neighbors(v) {
                if let Some(j) = self.index(w) {
                    acc -= x[j];
                }
            }
            out[i] = acc;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradients to relative residual `tol`.
pub fn solve_pcg(p: &Dirichlet<'_>, tol: f64, max_iter: usize) -> Result<Solution> {
    let sys = System::new(p);
    let n = sys.vertices.len();
    let g = p.graph;
    let b_norm = dot(&sys.rhs, &sys.rhs).sqrt();
    let mut x = vec![0.0; n];
    if n == 0 || b_norm == 0.0 {
        return Ok(Solution {
            vertices: sys.vertices,
            values: x,
            iterations: 0,
            relative_residual: 0.0,
        });
    }
    let mut r = sys.rhs.clone();
    let mut z: Vec<f64> = r.iter().zip(&sys.diag).map(|(r, d)| r / d).collect();
    let mut dir = z.clone();
    let mut ad = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let mut residual = 1.0;
    for it in 1..=max_iter {
        sys.apply(g, &dir, &mut ad);
        let denom = dot(&dir, &ad);
        if denom <= 0.0 {
            return Err(Error::Numeric {
                message: "operator not positive definite".into(),
                residual,
            });
        }
        let alpha = rz / denom;
        for i in 0..n {
            x[i] += alpha * dir[i];
            r[i] -= alpha * ad[i];
        }
        residual = dot(&r, &r).sqrt() / b_norm;
        if residual <= tol {
            // Confirm against the true residual; recurrence drift can lie.
            sys.apply(g, &x, &mut ad);
            let true_res = sys
                .rhs
                .iter()
                .zip(&ad)
                .map(|(b, a)| (b - a) * (b - a))
                .sum::<f64>()
                .sqrt()
                / b_norm;
            if true_res <= tol * 10.0 {
                return Ok(Solution {
                    vertices: sys.vertices,
                    values: x,
                    iterations: it,
                    relative_residual: true_res,
                });
            }
            r = sys.rhs.iter().zip(&ad).map(|(b, a)| b - a).collect();
        }
        for i in 0..n {
            z[i] = r[i] / sys.diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            dir[i] = z[i] + beta * dir[i];
        }
    }
    Err(Error::Numeric {
        message: format!("conjugate gradients did not converge in {max_iter} iterations"),
        residual,
    })
}

/// Exact elimination when every unknown has at most one unknown neighbor
/// of smaller id (the unknowns induce a forest ordered by id). Returns
/// `None` when that structure is absent.
pub fn solve_forest(p: &Dirichlet<'_>) -> Option<Solution> {
    let sys = System::new(p);
    let g = p.graph;
    let n = sys.vertices.len();
    let mut parent = vec![usize::MAX; n];
    for (i, &v) in sys.vertices.iter().enumerate() {
        for &w in g.neighbors(v) {
            if w < v {
                if let Some(j) = sys.index(w) {
                    if parent[i] != usize::MAX {
                        return None;
                    }
                    parent[i] = j;
                }
            }
        }
    }
    // u_i = a_i + b_i u_parent(i).
    let mut a = sys.rhs.clone();
    let mut pivot = sys.diag.clone();
    for i in (0..n).rev() {
        if pivot[i] <= 0.0 {
            return None;
        }
        let ai = a[i] / pivot[i];
        let bi = 1.0 / pivot[i];
        a[i] = ai;
        if parent[i] != usize::MAX {
            a[parent[i]] += ai;
            pivot[parent[i]] -= bi;
        }
        pivot[i] = bi;
    }
    let mut u = vec![0.0; n];
    for i in 0..n {
        u[i] = a[i]
            + if parent[i] != usize::MAX {
                pivot[i] * u[parent[i]]
            } else {
                0.0
            };
    }
    Some(Solution {
        vertices: sys.vertices,
        values: u,
        iterations: 0,
        relative_residual: 0.0,
    })
}
