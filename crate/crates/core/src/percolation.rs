//! Bernoulli bond percolation on `Z^d`, explored lazily from the origin.
//!
//! An edge is occupied iff the counter-based hash of `(seed, edge key)`
//! maps to a uniform below `p`, where the key is the lexicographically
//! smaller endpoint plus the axis. No edge state is ever stored, the same
//! edge always gets the same state, and raising `p` can only add edges.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::graph::{Explorer, Graph, VertexId};
use crate::parallel::replicas;
use crate::rng::{hash_words, unit_f64};
use crate::stats::{proportion, Accumulator, EstimateCI};

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 12;

/// Default cluster-size cap for subcritical sampling.
pub const DEFAULT_SAFETY_CAP: usize = 1_000_000;

/// A lattice site; only the first `d` entries are meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site([i32; MAX_DIM]);

impl Site {
    pub fn origin() -> Site {
        Site([0; MAX_DIM])
    }

    pub fn from_coords(c: &[i32]) -> Site {
        let mut s = [0; MAX_DIM];
        s[..c.len()].copy_from_slice(c);
        Site(s)
    }

    pub fn coords(&self, d: usize) -> &[i32] {
        &self.0[..d]
    }

    fn step(mut self, axis: usize, delta: i32) -> Site {
        self.0[axis] += delta;
        self
    }
}

/// The random environment: Bernoulli(`p`) bond configuration on `Z^d`.
#[derive(Debug, Clone, Copy)]
pub struct BondLattice {
    d: usize,
    p: f64,
    seed: u64,
}

impl BondLattice {
    pub fn new(d: usize, p: f64, seed: u64) -> Result<BondLattice> {
        if d == 0 || d > MAX_DIM {
            return arg(format!("dimension must be in 1..={MAX_DIM}"));
        }
        if !(0.0..=1.0).contains(&p) {
            return arg(format!("edge probability {p} outside [0, 1]"));
        }
        Ok(BondLattice { d, p, seed })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Uniform variable attached to the edge `{lower, lower + e_axis}`.
    pub fn edge_uniform(&self, lower: &Site, axis: usize) -> f64 {
        let words = std::iter::once(axis as u64)
            .chain(lower.coords(self.d).iter().map(|&c| c as i64 as u64));
        unit_f64(hash_words(self.seed, words))
    }

    /// State of the edge between two nearest neighbours (either order).
    pub fn is_open(&self, a: &Site, b: &Site) -> bool {
        let axis = (0..self.d)
            .find(|&i| a.0[i] != b.0[i])
            .expect("distinct sites");
        debug_assert_eq!((a.0[axis] - b.0[axis]).abs(), 1);
        let lower = if a.0[axis] < b.0[axis] { a } else { b };
        self.edge_uniform(lower, axis) < self.p
    }

    fn open_neighbors(&self, v: Site, out: &mut Vec<Site>) {
        for axis in 0..self.d {
            let up = v.step(axis, 1);
            if self.edge_uniform(&v, axis) < self.p {
                out.push(up);
            }
            let down = v.step(axis, -1);
            if self.edge_uniform(&down, axis) < self.p {
                out.push(down);
            }
        }
    }
}

impl Explorer for BondLattice {
    type Vertex = Site;

    fn root(&self) -> Site {
        Site::origin()
    }

    fn neighbors(&mut self, v: Site, out: &mut Vec<Site>) {
        self.open_neighbors(v, out);
    }
}

/// Result of exploring the open cluster of the origin.
#[derive(Debug, Clone, Default)]
struct Exploration {
    sites: Vec<Site>,
    /// `layer_ends[k]` = number of sites within intrinsic distance `k`.
    layer_ends: Vec<usize>,
    edges: Vec<(VertexId, VertexId)>,
    /// Some open edge leaves the explored ball.
    truncated: bool,
    /// Stopped because the size cap was hit.
    censored: bool,
}

fn explore(lat: &BondLattice, cutoff: usize, max_sites: usize, record_edges: bool) -> Exploration {
    let mut index: FxHashMap<Site, VertexId> = FxHashMap::default();
    let mut ex = Exploration::default();
    index.insert(Site::origin(), 0);
    ex.sites.push(Site::origin());
    let mut buf = Vec::with_capacity(2 * lat.d);
    let mut head = 0;
    let mut depth = 0;
    loop {
        let layer_end = ex.sites.len();
        ex.layer_ends.push(layer_end);
        if head == layer_end {
            break;
        }
        let expand = depth < cutoff;
        while head < layer_end {
            let u = ex.sites[head];
            let uid = head as VertexId;
            head += 1;
            buf.clear();
            lat.open_neighbors(u, &mut buf);
            for &w in &buf {
                match index.get(&w) {
                    Some(&wid) => {
                        // Each edge is seen from both ends; keep the lower.
                        if record_edges && uid < wid {
                            ex.edges.push((uid, wid));
                        }
                    }
                    None if expand => {
                        if ex.sites.len() >= max_sites {
                            ex.censored = true;
                            ex.truncated = true;
                            ex.layer_ends.push(ex.sites.len());
                            return ex;
                        }
                        let wid = ex.sites.len() as VertexId;
                        index.insert(w, wid);
                        ex.sites.push(w);
                        if record_edges {
                            ex.edges.push((uid, wid));
                        }
                    }
                    None => ex.truncated = true,
                }
            }
        }
        if !expand {
            break;
        }
        depth += 1;
    }
    // The final push came from an empty layer or the unexpanded cutoff
    // layer; drop duplicate trailing entries.
    while ex.layer_ends.len() >= 2
        && ex.layer_ends[ex.layer_ends.len() - 1] == ex.layer_ends[ex.layer_ends.len() - 2]
    {
        ex.layer_ends.pop();
    }
    ex
}

/// One sampled cluster of the origin, explored to intrinsic radius `cutoff`.
#[derive(Debug, Clone)]
pub struct PercolationSample {
    pub d: usize,
    pub p: f64,
    pub seed: u64,
    pub cutoff: usize,
    pub cluster: Graph,
    /// An open edge leaves `B(cutoff)`; when `false` the cluster is all of `C(0)`.
    pub truncated: bool,
}

/// BFS exploration of the open cluster of the origin up to `cutoff`.
pub fn sample_cluster(d: usize, p: f64, seed: u64, cutoff: usize) -> Result<PercolationSample> {
    let lat = BondLattice::new(d, p, seed)?;
    let ex = explore(&lat, cutoff, usize::MAX, true);
    let coords: Vec<i32> = ex
        .sites
        .iter()
        .flat_map(|s| s.coords(d).iter().copied())
        .collect();
    let mut cluster = Graph::from_edges(ex.sites.len(), &ex.edges, 0, Some((d, coords)))?;
    if ex.truncated {
        cluster = cluster.with_window(cutoff);
    }
    Ok(PercolationSample {
        d,
        p,
        seed,
        cutoff,
        cluster,
        truncated: ex.truncated,
    })
}

/// Fraction of clusters that reach beyond intrinsic radius `cutoff`.
pub fn estimate_theta(
    d: usize,
    p: f64,
    cutoff: usize,
    n_samples: usize,
    seed: u64,
) -> Result<EstimateCI> {
    if n_samples == 0 {
        return arg("n_samples must be positive");
    }
    let lat = BondLattice::new(d, p, seed)?;
    let hits = replicas(n_samples, seed, |_, s| {
        let lat = BondLattice { seed: s, ..lat };
        explore(&lat, cutoff, usize::MAX, false).truncated
    });
    Ok(proportion(hits.iter().filter(|&&h| h).count(), n_samples))
}

/// Mean cluster size with the number of samples that hit the safety cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Susceptibility {
    pub estimate: EstimateCI,
    pub censored: usize,
}

/// `E_p|C|` below criticality, with the default safety cap.
pub fn estimate_susceptibility(
    d: usize,
    p: f64,
    n_samples: usize,
    seed: u64,
) -> Result<Susceptibility> {
    estimate_susceptibility_capped(d, p, n_samples, seed, DEFAULT_SAFETY_CAP)
}

/// `E_p|C|`; a cluster reaching `cap` sites is censored and counted as
/// `cap`. More than 1% censored samples flags the estimate.
pub fn estimate_susceptibility_capped(
    d: usize,
    p: f64,
    n_samples: usize,
    seed: u64,
    cap: usize,
) -> Result<Susceptibility> {
    if n_samples == 0 {
        return arg("n_samples must be positive");
    }
    if cap == 0 {
        return arg("safety cap must be positive");
    }
    let lat = BondLattice::new(d, p, seed)?;
    let sizes = replicas(n_samples, seed, |_, s| {
        let lat = BondLattice { seed: s, ..lat };
        let ex = explore(&lat, usize::MAX, cap, false);
        (ex.sites.len(), ex.censored)
    });
    let censored = sizes.iter().filter(|s| s.1).count();
    let acc: Accumulator = sizes.iter().map(|s| s.0 as f64).collect();
    let mut estimate = acc.estimate();
    estimate.flagged = censored * 100 > n_samples;
    Ok(Susceptibility { estimate, censored })
}

/// `E|B(k)|` for `k = 1..=n_max` over clusters explored to radius `n_max`.
pub fn critical_ball_experiment(
    d: usize,
    p: f64,
    n_max: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<EstimateCI>> {
    if n_samples == 0 {
        return arg("n_samples must be positive");
    }
    let lat = BondLattice::new(d, p, seed)?;
    let profiles = replicas(n_samples, seed, |_, s| {
        let lat = BondLattice { seed: s, ..lat };
        let ex = explore(&lat, n_max, usize::MAX, false);
        (1..=n_max)
            .map(|k| ex.layer_ends[k.min(ex.layer_ends.len() - 1)] as f64)
            .collect::<Vec<_>>()
    });
    Ok((0..n_max)
        .map(|k| {
            profiles
                .iter()
                .map(|p| p[k])
                .collect::<Accumulator>()
                .estimate()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::make_lattice_box;
    use crate::graph::{ball_profile, explore_ball};
    use proptest::prelude::*;

    #[test]
    fn extreme_probabilities() {
        let s = sample_cluster(2, 0.0, 1, 10).unwrap();
        assert_eq!(s.cluster.num_vertices(), 1);
        assert!(!s.truncated);

        let s = sample_cluster(2, 1.0, 1, 6).unwrap();
        assert!(s.truncated);
        let full = make_lattice_box(2, 6).unwrap();
        assert_eq!(ball_profile(&s.cluster, 6), ball_profile(&full, 6));
        // Open subgraph induced on B(6) of Z^2.
        assert_eq!(s.cluster.num_vertices(), 2 * 36 + 2 * 6 + 1);
        s.cluster.validate().unwrap();

        assert_eq!(estimate_theta(2, 0.0, 5, 100, 3).unwrap().mean, 0.0);
        assert_eq!(estimate_theta(2, 1.0, 5, 100, 3).unwrap().mean, 1.0);
        assert!(estimate_theta(2, 0.5, 5, 0, 3).is_err());
        assert!(sample_cluster(2, 1.5, 1, 3).is_err());
    }

    #[test]
    fn deterministic_in_seed() {
        let a = sample_cluster(2, 0.5, 42, 30).unwrap();
        let b = sample_cluster(2, 0.5, 42, 30).unwrap();
        assert_eq!(a.cluster, b.cluster);
        assert_eq!(a.truncated, b.truncated);
    }

    #[test]
    fn lazy_explorer_matches_sampled_cluster() {
        for seed in 0..20 {
            let s = sample_cluster(2, 0.55, seed, 15).unwrap();
            let mut lat = BondLattice::new(2, 0.55, seed).unwrap();
            assert_eq!(explore_ball(&mut lat, 15), ball_profile(&s.cluster, 15));
        }
    }

    #[test]
    fn one_dimensional_cluster_mean() {
        // |C| = 1 + G1 + G2 with G geometric(1 - p) failures: mean (1+p)/(1-p).
        let chi = estimate_susceptibility(1, 0.5, 100_000, 11).unwrap();
        assert_eq!(chi.censored, 0);
        assert!(chi.estimate.z_score(3.0) < 3.0, "{:?}", chi.estimate);
        assert_eq!(
            estimate_susceptibility(1, 0.0, 50, 1)
                .unwrap()
                .estimate
                .mean,
            1.0
        );
    }

    #[test]
    fn censoring_flags_estimate() {
        let chi = estimate_susceptibility_capped(2, 0.7, 200, 5, 50).unwrap();
        assert!(chi.censored > 2);
        assert!(chi.estimate.flagged);
    }

    #[test]
    fn ball_expectation_in_one_dimension() {
        let b = critical_ball_experiment(1, 0.5, 3, 40_000, 8).unwrap();
        assert!(b[0].z_score(2.0) < 3.0, "{:?}", b[0]);
        let full = critical_ball_experiment(2, 1.0, 5, 10, 1).unwrap();
        for (k, e) in full.iter().enumerate() {
            let k = k as f64 + 1.0;
            assert_eq!(e.mean, 2.0 * k * k + 2.0 * k + 1.0);
            assert_eq!(e.std_error, 0.0);
        }
    }

    #[test]
    fn subcritical_theta_vanishes() {
        let t = estimate_theta(2, 0.3, 100, 2000, 17).unwrap();
        assert!(t.mean <= 3.0 * t.std_error, "{t:?}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn edge_state_is_order_independent(seed in any::<u64>(), coords in prop::collection::vec((-50i32..50, -50i32..50, 0usize..2), 1..60)) {
            let lat = BondLattice::new(2, 0.5, seed).unwrap();
            let first: Vec<bool> = coords.iter().map(|&(x, y, axis)| {
                let a = Site::from_coords(&[x, y]);
                let b = a.step(axis, 1);
                lat.is_open(&a, &b)
            }).collect();
            // Re-query in reverse order and from the other endpoint.
            for (i, &(x, y, axis)) in coords.iter().enumerate().rev() {
                let a = Site::from_coords(&[x, y]);
                let b = a.step(axis, 1);
                prop_assert_eq!(lat.is_open(&b, &a), first[i]);
            }
        }

        #[test]
        fn clusters_grow_with_p(seed in any::<u64>(), p in 0.2f64..0.6, dp in 0.0f64..0.3) {
            let small = sample_cluster(2, p, seed, 12).unwrap();
            let big = sample_cluster(2, p + dp, seed, 12).unwrap();
            let e = big.cluster.embedding().unwrap();
            let sites: std::collections::HashSet<&[i32]> =
                (0..big.cluster.num_vertices() as u32).map(|v| e.coord(v)).collect();
            let es = small.cluster.embedding().unwrap();
            for v in 0..small.cluster.num_vertices() as u32 {
                prop_assert!(sites.contains(es.coord(v)));
            }
        }

        #[test]
        fn theta_monotone_in_cutoff(seed in any::<u64>()) {
            let a = estimate_theta(2, 0.5, 4, 200, seed).unwrap();
            let b = estimate_theta(2, 0.5, 8, 200, seed).unwrap();
            prop_assert!(b.mean <= a.mean);
        }
    }
}
