//! Critical Galton–Watson trees and the survival-conditioned (Kesten) tree.
//!
//! The Kesten tree is built directly: an infinite spine whose vertices
//! have size-biased offspring counts `k p_k`, one uniformly chosen child
//! continuing the spine, and independent unconditioned trees rooted at all
//! other children. Everything is truncated at a fixed depth.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{arg, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::parallel::replicas;
use crate::rng::{stream_rng, SimRng};
use crate::stats::{proportion, EstimateCI};

pub type Rational = Ratio<u64>;

/// Critical offspring distribution. Criticality (mean exactly one) is
/// checked in rational arithmetic at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OffspringLaw {
    /// Binomial(n, 1/n).
    Binomial { n: u32 },
    /// `P(k) = 2^{-(k+1)}` on `{0, 1, ...}`.
    Geometric,
    /// Always one child.
    Deterministic,
    /// Finite-support pmf `pmf[k] = P(k)`.
    Custom { pmf: Vec<Rational> },
}

impl OffspringLaw {
    pub fn binomial(n: u32, q: Rational) -> Result<OffspringLaw> {
        if n == 0 || Rational::from_integer(n as u64) * q != Rational::from_integer(1) {
            return arg(format!("binomial({n}, {q}) is not critical: need n*q = 1"));
        }
        Ok(OffspringLaw::Binomial { n })
    }

    /// Geometric law `P(k) = (1-q)^k q`; critical only for `q = 1/2`.
    pub fn geometric(q: Rational) -> Result<OffspringLaw> {
        if q != Rational::new(1, 2) {
            return arg(format!("geometric({q}) is not critical: need q = 1/2"));
        }
        Ok(OffspringLaw::Geometric)
    }

    pub fn custom(pmf: Vec<Rational>) -> Result<OffspringLaw> {
        let total: Rational = pmf.iter().copied().sum();
        if total != Rational::from_integer(1) {
            return arg(format!("pmf sums to {total}, not 1"));
        }
        let mean: Rational = pmf.iter().enumerate().map(|(k, &p)| p * k as u64).sum();
        if mean != Rational::from_integer(1) {
            return arg(format!("pmf has mean {mean}, not 1"));
        }
        Ok(OffspringLaw::Custom { pmf })
    }

    /// Offspring variance, exactly.
    pub fn variance(&self) -> Rational {
        match self {
            OffspringLaw::Binomial { n } => Rational::new(*n as u64 - 1, *n as u64),
            OffspringLaw::Geometric => Rational::from_integer(2),
            OffspringLaw::Deterministic => Rational::from_integer(0),
            OffspringLaw::Custom { pmf } => {
                let second: Rational = pmf
                    .iter()
                    .enumerate()
                    .map(|(k, &p)| p * (k * k) as u64)
                    .sum();
                second - Rational::from_integer(1)
            }
        }
    }

    /// `P(k)` as a double.
    pub fn pmf(&self, k: u64) -> f64 {
        match self {
            OffspringLaw::Binomial { n } => {
                let n = *n as u64;
                if k > n {
                    return 0.0;
                }
                let q = 1.0 / n as f64;
                binomial_coefficient(n, k) * q.powi(k as i32) * (1.0 - q).powi((n - k) as i32)
            }
            OffspringLaw::Geometric => 0.5f64.powi(k as i32 + 1),
            OffspringLaw::Deterministic => (k == 1) as u8 as f64,
            OffspringLaw::Custom { pmf } => pmf
                .get(k as usize)
                .map_or(0.0, |r| *r.numer() as f64 / *r.denom() as f64),
        }
    }

    pub fn sampler(&self) -> LawSampler {
        LawSampler::new(self)
    }
}

fn binomial_coefficient(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Argument(format!("cannot parse `{s}` as an exact rational"));
    if let Some((a, b)) = s.split_once('/') {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac_num: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    let denom = 10u64.pow(frac.len() as u32);
    Ok(Rational::new(
        int.checked_mul(denom).ok_or_else(bad)? + frac_num,
        denom,
    ))
}

/// Parses `binomial:2:0.5`, `binomial:3:1/3`, `geometric:0.5`,
/// `deterministic`, `custom:1/4,1/2,1/4`.
impl FromStr for OffspringLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<OffspringLaw> {
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["binomial", n, q] => {
                let n: u32 = n
                    .parse()
                    .map_err(|_| Error::Argument(format!("bad binomial n `{n}`")))?;
                OffspringLaw::binomial(n, parse_rational(q)?)
            }
            ["geometric", q] => OffspringLaw::geometric(parse_rational(q)?),
            ["geometric"] => Ok(OffspringLaw::Geometric),
            ["deterministic"] | ["deterministic", "1"] => Ok(OffspringLaw::Deterministic),
            ["custom", pmf] => OffspringLaw::custom(
                pmf.split(',')
                    .map(|p| parse_rational(p.trim()))
                    .collect::<Result<_>>()?,
            ),
            _ => arg(format!("unknown offspring law `{s}`")),
        }
    }
}

impl fmt::Display for OffspringLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OffspringLaw::Binomial { n } => write!(f, "binomial:{n}:1/{n}"),
            OffspringLaw::Geometric => write!(f, "geometric:1/2"),
            OffspringLaw::Deterministic => write!(f, "deterministic"),
            OffspringLaw::Custom { pmf } => {
                write!(f, "custom:")?;
                for (i, p) in pmf.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for OffspringLaw {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for OffspringLaw {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Precomputed tables for drawing offspring and size-biased offspring.
#[derive(Debug, Clone)]
pub struct LawSampler {
    kind: SamplerKind,
}

#[derive(Debug, Clone)]
enum SamplerKind {
    Geometric,
    Deterministic,
    Table { cdf: Vec<f64>, biased_cdf: Vec<f64> },
}

fn cdf_of(weights: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = weights
        .map(|w| {
            acc += w;
            acc
        })
        .collect();
    // Guard against rounding leaving the last entry below 1.
    if let Some(last) = cdf.last_mut() {
        *last = f64::INFINITY;
    }
    cdf
}

fn draw_table(cdf: &[f64], rng: &mut SimRng) -> u32 {
    let u: f64 = rng.random();
    cdf.partition_point(|&c| c <= u) as u32
}

impl LawSampler {
    fn new(law: &OffspringLaw) -> LawSampler {
        let kind = match law {
            OffspringLaw::Geometric => SamplerKind::Geometric,
            OffspringLaw::Deterministic => SamplerKind::Deterministic,
            OffspringLaw::Binomial { n } => {
                let max = *n as u64;
                SamplerKind::Table {
                    cdf: cdf_of((0..=max).map(|k| law.pmf(k))),
                    biased_cdf: cdf_of((0..=max).map(|k| k as f64 * law.pmf(k))),
                }
            }
            OffspringLaw::Custom { pmf } => {
                let max = pmf.len() as u64 - 1;
                SamplerKind::Table {
                    cdf: cdf_of((0..=max).map(|k| law.pmf(k))),
                    biased_cdf: cdf_of((0..=max).map(|k| k as f64 * law.pmf(k))),
                }
            }
        };
        LawSampler { kind }
    }

    /// Number of children of an ordinary vertex.
    #[inline]
    pub fn offspring(&self, rng: &mut SimRng) -> u32 {
        match &self.kind {
            SamplerKind::Geometric => geometric_half(rng),
            SamplerKind::Deterministic => 1,
            SamplerKind::Table { cdf, .. } => draw_table(cdf, rng),
        }
    }

    /// Number of children of a spine vertex: `P(k) = k p_k`.
    #[inline]
    pub fn size_biased(&self, rng: &mut SimRng) -> u32 {
        match &self.kind {
            // k 2^{-(k+1)} is the law of 1 + G1 + G2.
            SamplerKind::Geometric => 1 + geometric_half(rng) + geometric_half(rng),
            SamplerKind::Deterministic => 1,
            SamplerKind::Table { biased_cdf, .. } => draw_table(biased_cdf, rng),
        }
    }
}

/// Failures before the first success of a fair coin.
#[inline]
fn geometric_half(rng: &mut SimRng) -> u32 {
    let mut total = 0;
    loop {
        let w: u64 = rng.random();
        if w != 0 {
            return total + w.trailing_zeros();
        }
        total += 64;
    }
}

/// Assemble a tree from per-vertex child counts listed in BFS order.
/// Children of a vertex are consecutive ids, so the parent is always the
/// first (and only smaller) neighbor.
pub(crate) fn tree_from_child_counts(counts: &[u32], layer_ends: Vec<usize>) -> Graph {
    let n = counts.len();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut nbrs = Vec::with_capacity(2 * n.saturating_sub(1));
    offsets.push(0);
    let mut parent = vec![0 as VertexId; n];
    let mut cursor = 1usize;
    for (v, &k) in counts.iter().enumerate() {
        for _ in 0..k {
            parent[cursor] = v as VertexId;
            cursor += 1;
        }
    }
    let mut next_child = 1usize;
    for (v, &k) in counts.iter().enumerate() {
        if v > 0 {
            nbrs.push(parent[v]);
        }
        nbrs.extend((next_child..next_child + k as usize).map(|c| c as VertexId));
        next_child += k as usize;
        offsets.push(nbrs.len());
    }
    Graph::from_bfs_csr(offsets, nbrs, layer_ends, None)
}

/// An unconditioned critical GW tree.
#[derive(Debug, Clone)]
pub struct GwTree {
    pub tree: Graph,
    /// `false` when growth stopped at the vertex cap.
    pub extinct: bool,
}

/// Sample an unconditioned tree, stopping once `max_vertices` exist.
pub fn sample_gw_tree(law: &OffspringLaw, seed: u64, max_vertices: usize) -> Result<GwTree> {
    if max_vertices == 0 {
        return arg("max_vertices must be positive");
    }
    let sampler = law.sampler();
    let mut rng = stream_rng(seed, 0);
    let mut counts: Vec<u32> = Vec::new();
    let mut total = 1usize;
    let mut layer_ends = vec![1usize];
    let mut extinct = true;
    let mut head = 0usize;
    'grow: while head < total {
        let layer_end = total;
        while head < layer_end {
            let mut k = sampler.offspring(&mut rng) as usize;
            if total + k > max_vertices {
                k = max_vertices - total;
                extinct = false;
            }
            counts.push(k as u32);
            total += k;
            head += 1;
            if !extinct {
                break 'grow;
            }
        }
        if total > layer_end {
            layer_ends.push(total);
        }
    }
    if !extinct {
        // Vertices never processed have no recorded children.
        counts.resize(total, 0);
        if *layer_ends.last().unwrap() != total {
            layer_ends.push(total);
        }
    }
    let mut tree = tree_from_child_counts(&counts, layer_ends);
    if !extinct {
        // The vertex cut short and everything after it lack children.
        let w = tree.depth((head - 1) as VertexId);
        tree = tree.with_window(w);
    }
    Ok(GwTree { tree, extinct })
}

/// Survival-conditioned tree truncated at `depth`.
#[derive(Debug, Clone)]
pub struct IicTree {
    pub tree: Graph,
    /// `spine[k]` is the spine vertex in generation `k`.
    pub spine: Vec<VertexId>,
    pub depth: usize,
}

/// Kesten's spine-plus-bushes construction down to generation `depth`.
pub fn sample_iic_tree(law: &OffspringLaw, depth: usize, seed: u64) -> Result<IicTree> {
    let sampler = law.sampler();
    let mut rng = stream_rng(seed, 0);
    let mut counts: Vec<u32> = Vec::new();
    let mut spine: Vec<VertexId> = vec![0];
    let mut layer_ends = vec![1usize];
    let mut total = 1usize;
    let mut head = 0usize;
    for generation in 0..depth {
        let layer_end = total;
        let spine_here = *spine.last().unwrap() as usize;
        while head < layer_end {
            let k = if head == spine_here {
                let k = sampler.size_biased(&mut rng);
                let pick = rng.random_range(0..k);
                spine.push((total + pick as usize) as VertexId);
                k
            } else {
                sampler.offspring(&mut rng)
            };
            counts.push(k);
            total += k as usize;
            if total > VertexId::MAX as usize {
                return Err(Error::Capacity(format!(
                    "Kesten tree exceeds id range at generation {generation}"
                )));
            }
            head += 1;
        }
        layer_ends.push(total);
    }
    counts.resize(total, 0);
    let tree = tree_from_child_counts(&counts, layer_ends).with_window(depth);
    Ok(IicTree { tree, spine, depth })
}

/// Total progeny, capped: returns `(size, censored)`.
pub fn sample_total_progeny(sampler: &LawSampler, rng: &mut SimRng, cap: u64) -> (u64, bool) {
    let mut pending: u64 = 1;
    let mut size: u64 = 0;
    while pending > 0 {
        size += 1;
        if size >= cap {
            return (cap, true);
        }
        pending = pending - 1 + sampler.offspring(rng) as u64;
    }
    (size, false)
}

/// Empirical `P(|C| >= k)` on a grid of `k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub k: Vec<u64>,
    pub survival: Vec<EstimateCI>,
    /// Samples that reached `max(k)`; their tail indicators are still exact.
    pub censored: usize,
    /// More than half the samples censored: the law looks non-extinct at
    /// this scale (e.g. the deterministic ray).
    pub flagged: bool,
}

pub fn cluster_tail_experiment(
    law: &OffspringLaw,
    k_grid: &[u64],
    n_samples: usize,
    seed: u64,
) -> Result<TailEstimate> {
    if n_samples == 0 {
        return arg("n_samples must be positive");
    }
    if k_grid.is_empty() || k_grid.contains(&0) {
        return arg("k grid must be non-empty with k >= 1");
    }
    let cap = *k_grid.iter().max().unwrap();
    let sampler = law.sampler();
    // Chunk replicas so each worker reuses one generator.
    const CHUNK: usize = 4096;
    let chunks = n_samples.div_ceil(CHUNK);
    let per_chunk = replicas(chunks, seed, |i, s| {
        let mut rng = stream_rng(s, 0);
        let m = CHUNK.min(n_samples - i * CHUNK);
        let mut hits = vec![0usize; k_grid.len()];
        let mut censored = 0;
        for _ in 0..m {
            let (size, cens) = sample_total_progeny(&sampler, &mut rng, cap);
            censored += cens as usize;
            for (h, &k) in hits.iter_mut().zip(k_grid) {
                *h += (size >= k) as usize;
            }
        }
        (hits, censored)
    });
    let mut hits = vec![0usize; k_grid.len()];
    let mut censored = 0;
    for (h, c) in per_chunk {
        censored += c;
        for (a, b) in hits.iter_mut().zip(h) {
            *a += b;
        }
    }
    Ok(TailEstimate {
        k: k_grid.to_vec(),
        survival: hits.into_iter().map(|h| proportion(h, n_samples)).collect(),
        censored,
        flagged: 2 * censored > n_samples,
    })
}

/// Embed a tree in `Z^d` as a branching random walk: the root sits at the
/// origin and every child is its parent plus a uniform nearest-neighbour
/// step. Several vertices may land on one site.
pub fn embed_branching_rw(tree: &Graph, d: usize, seed: u64) -> Result<Graph> {
    if d == 0 {
        return arg("ambient dimension must be at least 1");
    }
    if !tree.is_tree() {
        return arg("branching random walk embedding needs a tree");
    }
    let n = tree.num_vertices();
    let mut rng = stream_rng(seed, 1);
    let mut coords = vec![0i32; n * d];
    for v in 1..n {
        // BFS order: the parent is the unique smaller neighbor.
        let parent = tree.neighbors(v as VertexId)[0] as usize;
        debug_assert!(parent < v);
        let (head, tail) = coords.split_at_mut(v * d);
        let child = &mut tail[..d];
        child.copy_from_slice(&head[parent * d..(parent + 1) * d]);
        let step = rng.random_range(0..2 * d);
        child[step / 2] += if step % 2 == 0 { 1 } else { -1 };
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut nbrs = Vec::with_capacity(2 * tree.num_edges());
    offsets.push(0);
    for v in 0..n as VertexId {
        nbrs.extend_from_slice(tree.neighbors(v));
        offsets.push(nbrs.len());
    }
    let layer_ends = (0..=tree.radius()).map(|k| tree.layer_end(k)).collect();
    let injective = {
        let mut seen = rustc_hash::FxHashSet::default();
        coords.chunks_exact(d).all(|p| seen.insert(p))
    };
    Ok(Graph::from_bfs_csr(
        offsets,
        nbrs,
        layer_ends,
        Some((d, coords, injective)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{ball_profile, graph_distance, Distance};

    #[test]
    fn parse_and_validate_laws() {
        assert_eq!(
            "binomial:2:0.5".parse::<OffspringLaw>().unwrap(),
            OffspringLaw::Binomial { n: 2 }
        );
        assert_eq!(
            "binomial:3:1/3".parse::<OffspringLaw>().unwrap(),
            OffspringLaw::Binomial { n: 3 }
        );
        assert!("binomial:3:0.33".parse::<OffspringLaw>().is_err());
        assert!("geometric:0.4".parse::<OffspringLaw>().is_err());
        assert_eq!(
            "geometric:0.5".parse::<OffspringLaw>().unwrap(),
            OffspringLaw::Geometric
        );
        let c: OffspringLaw = "custom:1/4,1/2,1/4".parse().unwrap();
        assert_eq!(c.variance(), Rational::new(1, 2));
        assert!("custom:1/2,1/2".parse::<OffspringLaw>().is_err());
        assert!("poisson:1".parse::<OffspringLaw>().is_err());
        assert_eq!(
            OffspringLaw::Binomial { n: 2 }.variance(),
            Rational::new(1, 2)
        );
        assert_eq!(
            OffspringLaw::Geometric.variance(),
            Rational::from_integer(2)
        );
        assert_eq!(
            OffspringLaw::Deterministic.variance(),
            Rational::from_integer(0)
        );
        for law in [
            "binomial:4:1/4",
            "geometric",
            "deterministic",
            "custom:1/3,1/3,1/3",
        ] {
            let l: OffspringLaw = law.parse().unwrap();
            assert_eq!(l.to_string().parse::<OffspringLaw>().unwrap(), l);
        }
    }

    #[test]
    fn sampler_means() {
        let mut rng = stream_rng(1, 0);
        for law in [
            OffspringLaw::Binomial { n: 2 },
            OffspringLaw::Geometric,
            OffspringLaw::Binomial { n: 5 },
        ] {
            let s = law.sampler();
            let n = 200_000;
            let mean = (0..n).map(|_| s.offspring(&mut rng) as f64).sum::<f64>() / n as f64;
            let var = law.variance();
            let se = (*var.numer() as f64 / *var.denom() as f64 / n as f64).sqrt();
            assert!((mean - 1.0).abs() < 4.0 * se, "{law}: {mean}");
            // Size-biased mean is 1 + sigma^2.
            let sb = (0..n).map(|_| s.size_biased(&mut rng) as f64).sum::<f64>() / n as f64;
            let target = 1.0 + *var.numer() as f64 / *var.denom() as f64;
            assert!(
                (sb - target).abs() < 0.05 * target,
                "{law}: {sb} vs {target}"
            );
        }
    }

    #[test]
    fn deterministic_law_gives_rays() {
        let g = sample_gw_tree(&OffspringLaw::Deterministic, 3, 50).unwrap();
        assert!(!g.extinct);
        assert_eq!(g.tree.num_vertices(), 50);
        let iic = sample_iic_tree(&OffspringLaw::Deterministic, 10, 3).unwrap();
        assert_eq!(iic.tree.num_vertices(), 11);
        assert_eq!(iic.spine, (0..=10).collect::<Vec<_>>());
    }

    #[test]
    fn gw_tree_structure() {
        let law = OffspringLaw::Binomial { n: 2 };
        for seed in 0..50 {
            let t = sample_gw_tree(&law, seed, 500).unwrap();
            t.tree.validate().unwrap();
            assert!(t.tree.is_tree());
            assert!(t.tree.num_vertices() <= 500);
            if t.extinct {
                assert!(t.tree.num_vertices() < 500);
            }
        }
    }

    #[test]
    fn spine_is_a_geodesic() {
        let law = OffspringLaw::Binomial { n: 2 };
        for seed in 0..20 {
            let iic = sample_iic_tree(&law, 40, seed).unwrap();
            iic.tree.validate().unwrap();
            assert_eq!(iic.spine.len(), 41);
            for (k, &v) in iic.spine.iter().enumerate() {
                assert_eq!(
                    graph_distance(&iic.tree, 0, v).unwrap(),
                    Distance::Finite(k as u64)
                );
                if k > 0 {
                    assert!(iic.tree.neighbors(v).contains(&iic.spine[k - 1]));
                }
            }
            let b = ball_profile(&iic.tree, 40);
            for k in 0..=40 {
                assert!(b.ball_sizes[k] > k as u64);
            }
        }
    }

    #[test]
    fn determinism() {
        let law = OffspringLaw::Geometric;
        let a = sample_iic_tree(&law, 30, 77).unwrap();
        let b = sample_iic_tree(&law, 30, 77).unwrap();
        assert_eq!(a.tree, b.tree);
        assert_eq!(a.spine, b.spine);
        let ea = embed_branching_rw(&a.tree, 3, 5).unwrap();
        let eb = embed_branching_rw(&b.tree, 3, 5).unwrap();
        assert_eq!(ea, eb);
    }

    #[test]
    fn tail_edge_cases() {
        let law = OffspringLaw::Binomial { n: 2 };
        let t = cluster_tail_experiment(&law, &[1, 10], 1000, 1).unwrap();
        assert_eq!(t.survival[0].mean, 1.0);
        let ray = cluster_tail_experiment(&OffspringLaw::Deterministic, &[1, 100], 100, 1).unwrap();
        assert_eq!(ray.censored, 100);
        assert!(ray.flagged);
        assert!(cluster_tail_experiment(&law, &[0], 10, 1).is_err());
    }

    #[test]
    fn embedding_basics() {
        let single = sample_iic_tree(&OffspringLaw::Deterministic, 0, 1).unwrap();
        let e = embed_branching_rw(&single.tree, 4, 1).unwrap();
        assert_eq!(e.embedding().unwrap().coord(0), &[0, 0, 0, 0]);
        let iic = sample_iic_tree(&OffspringLaw::Binomial { n: 2 }, 30, 2).unwrap();
        let e = embed_branching_rw(&iic.tree, 2, 9).unwrap();
        let emb = e.embedding().unwrap();
        for v in 1..e.num_vertices() as VertexId {
            let p = e.neighbors(v)[0];
            let step: i32 = emb
                .coord(v)
                .iter()
                .zip(emb.coord(p))
                .map(|(a, b)| (a - b).abs())
                .sum();
            assert_eq!(step, 1);
        }
    }
}
