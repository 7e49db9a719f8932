//! Simple random walk: trajectories, exact and sampled return
//! probabilities, exit times and effective resistance.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{arg, contract, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::parallel::replicas;
use crate::rng::stream_rng;
use crate::solver::{solve_forest, solve_pcg, Dirichlet, Solution, DEFAULT_TOLERANCE};
use crate::stats::{Accumulator, EstimateCI};

/// Mass lost to an absorbing boundary beyond this rejects an exact series.
pub const MAX_ABSORBED_MASS: f64 = 1e-9;

/// Monte Carlo walks are handed out in chunks of this many per task.
const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Intrinsic,
    Extrinsic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// The graph is the whole state space.
    Finite,
    /// Vertices at depth `>= radius` absorb the walk.
    Absorbing { radius: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

/// Return probabilities `P(S_2k = root)` for `k = 1..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkStats {
    pub mode: Mode,
    pub return_probs: Vec<f64>,
    /// Per-entry standard errors; zero for exact series.
    pub std_errors: Vec<f64>,
    pub n_samples: usize,
    /// Total probability lost to the absorbing boundary (exact mode).
    pub absorbed_mass: f64,
}

impl WalkStats {
    pub fn len(&self) -> usize {
        self.return_probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.return_probs.is_empty()
    }

    /// `(2k, P(S_2k = root), stderr)` triples.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        self.return_probs
            .iter()
            .zip(&self.std_errors)
            .enumerate()
            .map(|(i, (&p, &s))| (2 * (i + 1), p, s))
    }
}

fn absorbing_radius(g: &Graph, boundary: Boundary) -> Result<Option<usize>> {
    match (boundary, g.window()) {
        (Boundary::Finite, Some(w)) => contract(format!(
            "graph is a window complete only below depth {w}; pass an absorbing boundary"
        )),
        (Boundary::Finite, None) => Ok(None),
        (Boundary::Absorbing { radius }, w) => {
            if radius == 0 {
                return arg("absorbing radius must be positive");
            }
            if let Some(w) = w {
                if radius > w {
                    return contract(format!(
                        "absorbing radius {radius} lies beyond the complete window {w}"
                    ));
                }
            }
            Ok(Some(radius))
        }
    }
}

/// Sample path `S_0 = root, S_1, ..., S_steps`.
pub fn walk(g: &Graph, steps: usize, seed: u64) -> Result<Vec<VertexId>> {
    if steps > 0 && g.degree(0) == 0 {
        return contract("the root is isolated; no walk can move");
    }
    let mut rng = stream_rng(seed, 0);
    let mut path = Vec::with_capacity(steps + 1);
    let mut v = g.root();
    path.push(v);
    for _ in 0..steps {
        let nb = g.neighbors(v);
        v = nb[rng.random_range(0..nb.len())];
        path.push(v);
    }
    Ok(path)
}

/// Law of the walk started at the root, evolved one step at a time. Mass
/// reaching depth `>= absorb` is removed and tallied.
#[derive(Debug, Clone)]
pub struct Distribution<'g> {
    g: &'g Graph,
    cur: Vec<f64>,
    next: Vec<f64>,
    inv_deg: Vec<f64>,
    absorb: usize,
    bipartite: bool,
    steps: usize,
    absorbed: f64,
}

impl<'g> Distribution<'g> {
    pub fn new(g: &'g Graph, boundary: Boundary) -> Result<Distribution<'g>> {
        let absorb = absorbing_radius(g, boundary)?.unwrap_or(usize::MAX);
        let n = g.num_vertices();
        let mut cur = vec![0.0; n];
        cur[0] = 1.0;
        let inv_deg = (0..n as VertexId)
            .map(|v| 1.0 / g.degree(v).max(1) as f64)
            .collect();
        let bipartite = n > 1 && g.is_bipartite();
        Ok(Distribution {
            g,
            cur,
            next: vec![0.0; n],
            inv_deg,
            absorb,
            bipartite,
            steps: 0,
            absorbed: 0.0,
        })
    }

    pub fn step(&mut self) {
        let g = self.g;
        // After t steps the support lies in B(t), and on a bipartite graph
        // only in the layers of the parity of t.
        let top = self
            .steps
            .min(self.absorb.saturating_sub(1))
            .min(g.radius());
        let mut k = if self.bipartite { self.steps % 2 } else { 0 };
        let stride = if self.bipartite { 2 } else { 1 };
        while k <= top {
            let lo = if k == 0 { 0 } else { g.layer_end(k - 1) };
            for v in lo..g.layer_end(k) {
                let m = self.cur[v];
                if m == 0.0 {
                    continue;
                }
                self.cur[v] = 0.0;
                if g.degree(v as VertexId) == 0 {
                    self.next[v] += m;
                    continue;
                }
                let share = m * self.inv_deg[v];
                for &w in g.neighbors(v as VertexId) {
                    self.next[w as usize] += share;
                }
            }
            k += stride;
        }
        std::mem::swap(&mut self.cur, &mut self.next);
        // Mass landing on the boundary layer is absorbed immediately.
        if self.absorb != usize::MAX && self.steps + 1 >= self.absorb {
            for v in g.layer_end(self.absorb - 1)..g.layer_end(self.absorb) {
                self.absorbed += self.cur[v];
                self.cur[v] = 0.0;
            }
        }
        self.steps += 1;
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn mass_at(&self, v: VertexId) -> f64 {
        self.cur[v as usize]
    }

    pub fn total_mass(&self) -> f64 {
        self.cur[..self.g.layer_end(self.steps)].iter().sum()
    }

    pub fn absorbed(&self) -> f64 {
        self.absorbed
    }
}

/// `P(S_2k = root)` for `k = 1..=k_max` by iterating the transition
/// operator. A window needs an absorbing boundary, and the series is
/// rejected if more than [`MAX_ABSORBED_MASS`] leaks into it.
pub fn return_probability_exact(g: &Graph, k_max: usize, boundary: Boundary) -> Result<WalkStats> {
    let mut dist = Distribution::new(g, boundary)?;
    let mut probs = Vec::with_capacity(k_max);
    for _ in 0..k_max {
        dist.step();
        dist.step();
        probs.push(dist.mass_at(0));
        if dist.absorbed() > MAX_ABSORBED_MASS {
            return Err(Error::Numeric {
                message: format!(
                    "absorbed mass exceeds {MAX_ABSORBED_MASS:e} after {} steps; enlarge the window",
                    dist.steps()
                ),
                residual: dist.absorbed(),
            });
        }
    }
    Ok(WalkStats {
        mode: Mode::Exact,
        std_errors: vec![0.0; probs.len()],
        return_probs: probs,
        n_samples: 0,
        absorbed_mass: dist.absorbed(),
    })
}

/// Monte Carlo estimate of `P(S_2k = root)`; walks absorbed at the
/// boundary count as non-returns from then on.
pub fn return_probability_mc(
    g: &Graph,
    k_max: usize,
    n_samples: usize,
    seed: u64,
    boundary: Boundary,
) -> Result<WalkStats> {
    if n_samples == 0 {
        return arg("n_samples must be positive");
    }
    if k_max > 0 && g.degree(0) == 0 {
        return contract("the root is isolated; no walk can move");
    }
    let stop = absorbing_radius(g, boundary)?.map_or(usize::MAX, |r| g.layer_end(r - 1));
    let chunks = n_samples.div_ceil(CHUNK);
    let counts = replicas(chunks, seed, |i, s| {
        let mut rng = stream_rng(s, 0);
        let mut hits = vec![0u64; k_max];
        let n = CHUNK.min(n_samples - i * CHUNK);
        for _ in 0..n {
            let mut v = 0u32;
            'walk: for hit in hits.iter_mut() {
                for _ in 0..2 {
                    let nb = g.neighbors(v);
                    v = nb[rng.random_range(0..nb.len())];
                    if v as usize >= stop {
                        break 'walk;
                    }
                }
                if v == 0 {
                    *hit += 1;
                }
            }
        }
        hits
    });
    let mut total = vec![0u64; k_max];
    for c in counts {
        for (t, x) in total.iter_mut().zip(c) {
            *t += x;
        }
    }
    let n = n_samples as f64;
    let probs: Vec<f64> = total.iter().map(|&h| h as f64 / n).collect();
    let errs = probs
        .iter()
        .map(|&p| (p * (1.0 - p) / (n - 1.0).max(1.0)).sqrt())
        .collect();
    Ok(WalkStats {
        mode: Mode::MonteCarlo,
        return_probs: probs,
        std_errors: errs,
        n_samples,
        absorbed_mass: 0.0,
    })
}

/// Vertices that end a walk started at the root when exiting radius `r`.
fn exit_set(g: &Graph, r: usize, metric: Metric) -> Result<Vec<bool>> {
    if r == 0 {
        return arg("exit radius must be positive");
    }
    match metric {
        Metric::Intrinsic => {
            if r > g.radius() {
                return arg(format!(
                    "no vertex at distance {r} (graph radius {})",
                    g.radius()
                ));
            }
            if let Some(w) = g.window() {
                if r > w {
                    return contract(format!("B({r}) is not complete in a window of depth {w}"));
                }
            }
            let inside = g.layer_end(r - 1);
            Ok((0..g.num_vertices()).map(|v| v >= inside).collect())
        }
        Metric::Extrinsic => {
            let Some(e) = g.embedding() else {
                return contract("extrinsic exit times need an embedded graph");
            };
            let norm = |v: usize| {
                e.coord(v as VertexId)
                    .iter()
                    .map(|c| c.unsigned_abs() as usize)
                    .max()
                    .unwrap_or(0)
            };
            let out: Vec<bool> = (0..g.num_vertices()).map(|v| norm(v) >= r).collect();
            if out[0] {
                return arg(format!("the root lies outside Q({})", r - 1));
            }
            if !out.iter().any(|&b| b) {
                return arg(format!("no vertex reaches the boundary of Q({r})"));
            }
            if let Some(w) = g.window() {
                // Every vertex inside Q(r) that the walk can visit must be complete.
                let reach = reachable_inside(g, &out);
                if reach
                    .iter()
                    .enumerate()
                    .any(|(v, &inside)| inside && g.depth(v as VertexId) >= w)
                {
                    return contract(format!(
                        "Q({r}) reaches past the complete window of depth {w}"
                    ));
                }
            }
            Ok(out)
        }
    }
}

/// Vertices reachable from the root without touching `stop`.
fn reachable_inside(g: &Graph, stop: &[bool]) -> Vec<bool> {
    let mut seen = vec![false; g.num_vertices()];
    let mut stack = vec![0 as VertexId];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !seen[w as usize] && !stop[w as usize] {
                seen[w as usize] = true;
                stack.push(w);
            }
        }
    }
    seen
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitTime {
    pub r: usize,
    pub metric: Metric,
    /// Censored walks enter at the step cap, so the mean is a lower bound when flagged.
    pub estimate: EstimateCI,
    pub censored: usize,
}

/// Monte Carlo mean exit time of `B(r)` (intrinsic) or `Q(r)` (extrinsic).
/// Walks still inside after `step_cap` steps (default `100 r^3`) are
/// censored.
pub fn exit_time(
    g: &Graph,
    r: usize,
    metric: Metric,
    n_samples: usize,
    seed: u64,
    step_cap: Option<u64>,
) -> Result<ExitTime> {
    if n_samples == 0 {
        return arg("n_samples must be positive");
    }
    let out = exit_set(g, r, metric)?;
    let cap = step_cap.unwrap_or_else(|| 100u64.saturating_mul((r as u64).saturating_pow(3)));
    let chunks = n_samples.div_ceil(CHUNK);
    let parts = replicas(chunks, seed, |i, s| {
        let mut rng = stream_rng(s, 0);
        let mut acc = Accumulator::default();
        let mut censored = 0usize;
        for _ in 0..CHUNK.min(n_samples - i * CHUNK) {
            let mut v = 0u32;
            let mut t = 0u64;
            loop {
                if t == cap {
                    censored += 1;
                    break;
                }
                let nb = g.neighbors(v);
                v = nb[rng.random_range(0..nb.len())];
                t += 1;
                if out[v as usize] {
                    break;
                }
            }
            acc.push(t as f64);
        }
        (acc, censored)
    });
    let mut acc = Accumulator::default();
    let mut censored = 0;
    for (a, c) in parts {
        acc.merge(&a);
        censored += c;
    }
    let mut estimate = acc.estimate();
    estimate.flagged = censored > 0;
    Ok(ExitTime {
        r,
        metric,
        estimate,
        censored,
    })
}

fn dirichlet_solve(p: &Dirichlet<'_>) -> Result<Solution> {
    if let Some(s) = solve_forest(p) {
        return Ok(s);
    }
    let n = p.range.len();
    solve_pcg(p, DEFAULT_TOLERANCE, 20 * n + 1000)
}

/// Quenched `E^root[tau]` for the exit from `B(r)` or `Q(r)`, solving
/// `L h = deg` inside with `h = 0` outside.
pub fn mean_exit_time_exact(g: &Graph, r: usize, metric: Metric) -> Result<f64> {
    let out = exit_set(g, r, metric)?;
    let (range, mask) = match metric {
        Metric::Intrinsic => (0..g.layer_end(r - 1), None),
        Metric::Extrinsic => {
            let inside = reachable_inside(g, &out);
            let end = inside.iter().rposition(|&b| b).map_or(0, |i| i + 1);
            (0..end, Some(inside))
        }
    };
    let zero = |_| 0.0;
    let deg = |v: VertexId| g.degree(v) as f64;
    let p = Dirichlet {
        graph: g,
        range,
        mask: mask.as_deref(),
        value: &zero,
        source: &deg,
    };
    let s = dirichlet_solve(&p)?;
    Ok(s.get(0).unwrap_or(0.0))
}

/// Effective resistance between the root and `{d(root, .) >= r}`:
/// one over the current out of the root at unit potential, with the
/// potential pinned to zero on `∂B(r)`.
pub fn effective_resistance(g: &Graph, r: usize) -> Result<f64> {
    if r == 0 {
        return arg("resistance radius must be positive");
    }
    if r > g.radius() {
        return arg(format!(
            "no vertex at distance {r} (graph radius {})",
            g.radius()
        ));
    }
    if let Some(w) = g.window() {
        if r > w {
            return contract(format!("B({r}) is not complete in a window of depth {w}"));
        }
    }
    let zero = |_| 0.0;
    let value = |v: VertexId| if v == 0 { 1.0 } else { 0.0 };
    let p = Dirichlet {
        graph: g,
        range: 1..g.layer_end(r - 1),
        mask: None,
        value: &value,
        source: &zero,
    };
    let s = solve_pcg(&p, DEFAULT_TOLERANCE, 20 * p.range.len() + 1000)?;
    let current: f64 = g
        .neighbors(0)
        .iter()
        .map(|&w| 1.0 - s.get(w).unwrap_or(0.0))
        .sum();
    if current <= 0.0 {
        return Err(Error::Numeric {
            message: "no current leaves the root".into(),
            residual: s.relative_residual,
        });
    }
    Ok(1.0 / current)
}
