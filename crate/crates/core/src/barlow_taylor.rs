//! Discrete Hausdorff and packing dimensions of finite subsets of `Z^d`.
//!
//! Shell `n` is `F_n = Q(2^n) \ Q(2^(n-1))`, with `rad(F_n) = 2^n`. Covers
//! and packings use cubes centred at points of `A ∩ F_n` whose radii are
//! powers of two, at least 1. Covering radii run up to `2^n`, packing radii
//! up to `2^(n(1-eps))`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::dimension::{ols, Recurrence};
use crate::error::{arg, Error, Result};
use crate::graph::{site_mass_profile, MassProfile};
use crate::parallel::par_map;
use crate::rng::mix64;

/// Largest shell the exact solvers accept.
pub const EXACT_CAP: usize = 64;

/// Coordinates are `i32`, so shells beyond this index are empty.
pub const MAX_SHELL: u32 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    d: usize,
    /// Flat, lexicographically sorted, duplicate free.
    coords: Vec<i32>,
}

impl PointSet {
    pub fn new(d: usize, points: impl IntoIterator<Item = Vec<i32>>) -> Result<PointSet> {
        let mut flat = Vec::new();
        for (i, p) in points.into_iter().enumerate() {
            if p.len() != d {
                return arg(format!(
                    "point {i} has {} coordinates, expected {d}",
                    p.len()
                ));
            }
            flat.extend(p);
        }
        PointSet::from_flat(d, flat)
    }

    pub fn from_flat(d: usize, coords: Vec<i32>) -> Result<PointSet> {
        if d == 0 {
            return arg("dimension must be at least 1");
        }
        if !coords.len().is_multiple_of(d) {
            return arg("coordinate count is not a multiple of the dimension");
        }
        let mut pts: Vec<&[i32]> = coords.chunks_exact(d).collect();
        pts.sort_unstable();
        pts.dedup();
        let coords = pts.concat();
        Ok(PointSet { d, coords })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.d
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i32] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[i32]> {
        self.coords.chunks_exact(self.d)
    }

    /// `A ∩ F_n`.
    pub fn shell(&self, n: u32) -> PointSet {
        let (lo, hi) = shell_bounds(n);
        let coords = self
            .iter()
            .filter(|p| (lo + 1..=hi).contains(&sup_norm(p)))
            .flatten()
            .copied()
            .collect();
        PointSet { d: self.d, coords }
    }

    /// `|A ∩ Q(k)|` for `k = 0..=n`.
    pub fn mass_profile(&self, n: usize) -> MassProfile {
        site_mass_profile(self.iter(), n)
    }

    /// One point per line, coordinates separated by whitespace; blank lines
    /// and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<PointSet> {
        let mut d = None;
        let mut flat = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut count = 0;
            for tok in line.split_whitespace() {
                let c = tok.parse::<i32>().map_err(|e| Error::Parse {
                    line: i + 1,
                    message: format!("bad coordinate {tok:?}: {e}"),
                })?;
                flat.push(c);
                count += 1;
            }
            match d {
                None => d = Some(count),
                Some(d) if d != count => {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: format!("expected {d} coordinates, found {count}"),
                    })
                }
                _ => {}
            }
        }
        match d {
            None => Err(Error::Parse {
                line: 0,
                message: "no points".into(),
            }),
            Some(d) => PointSet::from_flat(d, flat),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in self.iter() {
            let line: Vec<String> = p.iter().map(i32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

fn sup_norm(p: &[i32]) -> u64 {
    p.iter().map(|c| c.unsigned_abs() as u64).max().unwrap_or(0)
}

fn sup_dist(a: &[i32], b: &[i32]) -> u64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x as i64 - y as i64).unsigned_abs())
        .max()
        .unwrap_or(0)
}

/// Sup-norm range `(lo, hi]` of shell `n`.
fn shell_bounds(n: u32) -> (u64, u64) {
    (1u64 << (n - 1), 1u64 << n)
}

/// Smallest `r` with `A ⊂ Q(r) + x` for some `x`.
pub fn rad(a: &PointSet) -> Result<u64> {
    if a.is_empty() {
        return arg("rad of the empty set");
    }
    Ok((0..a.d)
        .map(|axis| {
            let (lo, hi) = a.iter().fold((i64::MAX, i64::MIN), |(lo, hi), p| {
                (lo.min(p[axis] as i64), hi.max(p[axis] as i64))
            });
            ((hi - lo) as u64).div_ceil(2)
        })
        .max()
        .unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hausdorff,
    Packing,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        match s {
            "exact" => Ok(Method::Exact),
            "greedy" => Ok(Method::Greedy),
            _ => arg(format!("unknown method {s:?} (exact|greedy)")),
        }
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "hausdorff" => Ok(Kind::Hausdorff),
            "packing" => Ok(Kind::Packing),
            _ => arg(format!("unknown kind {s:?} (hausdorff|packing)")),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Hausdorff => "hausdorff",
            Kind::Packing => "packing",
        })
    }
}

fn check_shell(n: u32) -> Result<()> {
    if n == 0 || n > MAX_SHELL {
        return arg(format!("shell index {n} outside 1..={MAX_SHELL}"));
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return arg(format!(
            "alpha must be finite and non-negative, got {alpha}"
        ));
    }
    Ok(())
}

/// Largest packing radius exponent: `2^e <= 2^(n(1-eps))`.
fn packing_exponent(n: u32, eps: f64) -> Result<u32> {
    if !(eps > 0.0 && eps < 1.0) {
        return arg(format!("epsilon must lie in (0, 1), got {eps}"));
    }
    Ok((n as f64 * (1.0 - eps) + 1e-9).floor() as u32)
}

/// Count of chosen cubes per radius exponent; evaluates at any `alpha`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RadiusHistogram {
    pub n: u32,
    pub counts: Vec<u64>,
}

impl RadiusHistogram {
    pub fn value(&self, alpha: f64) -> f64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(e, &c)| c as f64 * weight(e as u32, self.n, alpha))
            .sum()
    }
}

/// `(2^e / 2^n)^alpha`.
fn weight(e: u32, n: u32, alpha: f64) -> f64 {
    if alpha == 0.0 {
        1.0
    } else {
        (-(n as f64 - e as f64) * alpha).exp2()
    }
}

/// `nu_alpha(A, F_n)` within the candidate family.
pub fn nu_alpha(a: &PointSet, n: u32, alpha: f64, method: Method) -> Result<f64> {
    check_shell(n)?;
    check_alpha(alpha)?;
    let shell = a.shell(n);
    if shell.is_empty() {
        return Ok(0.0);
    }
    match method {
        Method::Exact => exact_cover(&shell, n, alpha),
        Method::Greedy => Ok(greedy_cover(&shell, n, alpha).value(alpha)),
    }
}

/// `mu_alpha(A, F_n, eps)` within the candidate family.
pub fn mu_alpha(a: &PointSet, n: u32, alpha: f64, eps: f64, method: Method) -> Result<f64> {
    check_shell(n)?;
    check_alpha(alpha)?;
    let emax = packing_exponent(n, eps)?;
    let shell = a.shell(n);
    if shell.is_empty() {
        return Ok(0.0);
    }
    match method {
        Method::Exact => exact_packing(&shell, n, emax, alpha),
        Method::Greedy => Ok(greedy_packings(&shell, n, emax)
            .iter()
            .map(|h| h.value(alpha))
            .fold(0.0, f64::max)),
    }
}

fn check_exact(shell: &PointSet) -> Result<()> {
    if shell.len() > EXACT_CAP {
        return Err(Error::Capacity(format!(
            "exact solver handles at most {EXACT_CAP} points per shell, this shell has {}; use the greedy method",
            shell.len()
        )));
    }
    Ok(())
}

/// Every candidate cube as `(covered-points mask, radius exponent)`.
pub(crate) fn cover_candidates(shell: &PointSet, n: u32) -> Vec<(u64, u32)> {
    let m = shell.len();
    let mut out = Vec::with_capacity(m * (n as usize + 1));
    for c in 0..m {
        for e in 0..=n {
            let r = 1u64 << e;
            let mask = (0..m)
                .filter(|&i| sup_dist(shell.point(c), shell.point(i)) <= r)
                .fold(0u64, |acc, i| acc | 1 << i);
            out.push((mask, e));
        }
    }
    out
}

fn exact_cover(shell: &PointSet, n: u32, alpha: f64) -> Result<f64> {
    check_exact(shell)?;
    let m = shell.len();
    // Cheapest cube per distinct mask, then drop cubes dominated by a
    // cheaper superset.
    let mut by_mask: FxHashMap<u64, f64> = FxHashMap::default();
    for (mask, e) in cover_candidates(shell, n) {
        let w = weight(e, n, alpha);
        by_mask
            .entry(mask)
            .and_modify(|x| *x = x.min(w))
            .or_insert(w);
    }
    let mut cands: Vec<(u64, f64)> = by_mask.into_iter().collect();
    cands.sort_by(|a, b| {
        a.1.total_cmp(&b.1)
            .then(b.0.count_ones().cmp(&a.0.count_ones()))
            .then(a.0.cmp(&b.0))
    });
    let kept: Vec<(u64, f64)> = cands
        .iter()
        .enumerate()
        .filter(|&(i, &(mask, w))| {
            !cands.iter().enumerate().any(|(j, &(m2, w2))| {
                j != i && mask & m2 == mask && w2 <= w && (m2 != mask || j < i)
            })
        })
        .map(|(_, &c)| c)
        .collect();
    let full = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (k, &(mask, _)) in kept.iter().enumerate() {
        for (p, list) in covering.iter_mut().enumerate() {
            if mask >> p & 1 == 1 {
                list.push(k);
            }
        }
    }
    let upper = greedy_cover(shell, n, alpha).value(alpha);
    let mut search = CoverSearch {
        cands: &kept,
        covering: &covering,
        full,
        best: upper,
        counts: vec![0; kept.len()],
    };
    search.run(0, 0.0);
    Ok(search.best)
}

struct CoverSearch<'a> {
    cands: &'a [(u64, f64)],
    covering: &'a [Vec<usize>],
    full: u64,
    best: f64,
    counts: Vec<u32>,
}

impl CoverSearch<'_> {
    fn run(&mut self, covered: u64, cost: f64) {
        if covered == self.full {
            self.best = self.best.min(cost);
            return;
        }
        let open = self.full & !covered;
        for (k, &(mask, _)) in self.cands.iter().enumerate() {
            self.counts[k] = (mask & open).count_ones();
        }
        // Charge every open point its cheapest share of a cube through it.
        let mut bound = 0.0;
        let mut pivot = usize::MAX;
        let mut pivot_options = usize::MAX;
        let mut bits = open;
        while bits != 0 {
            let p = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let list = &self.covering[p];
            let share = list
                .iter()
                .map(|&k| self.cands[k].1 / self.counts[k] as f64)
                .fold(f64::INFINITY, f64::min);
            bound += share;
            if list.len() < pivot_options {
                pivot_options = list.len();
                pivot = p;
            }
        }
        if cost + bound >= self.best * (1.0 - 1e-12) {
            return;
        }
        let mut options: Vec<usize> = self.covering[pivot].clone();
        options.sort_by(|&a, &b| {
            let ra = self.cands[a].1 / self.counts[a] as f64;
            let rb = self.cands[b].1 / self.counts[b] as f64;
            ra.total_cmp(&rb).then(a.cmp(&b))
        });
        for k in options {
            let (mask, w) = self.cands[k];
            self.run(covered | mask, cost + w);
        }
    }
}

fn exact_packing(shell: &PointSet, n: u32, emax: u32, alpha: f64) -> Result<f64> {
    check_exact(shell)?;
    let m = shell.len();
    let dist: Vec<Vec<u64>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| sup_dist(shell.point(i), shell.point(j)))
                .collect()
        })
        .collect();
    let weights: Vec<f64> = (0..=emax).map(|e| weight(e, n, alpha)).collect();
    let search = PackSearch {
        dist: &dist,
        weights: &weights,
    };
    let items: Vec<(usize, i32)> = (0..m).map(|i| (i, emax as i32)).collect();
    Ok(search.solve(&items))
}

struct PackSearch<'a> {
    dist: &'a [Vec<u64>],
    weights: &'a [f64],
}

impl PackSearch<'_> {
    /// Best packing of the centres in `items`, each `(centre, largest
    /// admissible radius exponent)`. Centres that cannot interact at their
    /// caps are solved independently.
    fn solve(&self, items: &[(usize, i32)]) -> f64 {
        let items: Vec<(usize, i32)> = items.iter().copied().filter(|&(_, c)| c >= 0).collect();
        let k = items.len();
        let interact =
            |a: (usize, i32), b: (usize, i32)| self.dist[a.0][b.0] <= (1u64 << a.1) + (1u64 << b.1);
        let mut comp: Vec<usize> = (0..k).collect();
        let mut total = 0.0;
        let mut seen = vec![false; k];
        for start in 0..k {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            comp.clear();
            comp.push(start);
            let mut head = 0;
            while head < comp.len() {
                let a = comp[head];
                head += 1;
                for b in 0..k {
                    if !seen[b] && interact(items[a], items[b]) {
                        seen[b] = true;
                        comp.push(b);
                    }
                }
            }
            let part: Vec<(usize, i32)> = comp.iter().map(|&a| items[a]).collect();
            total += self.component(&part);
        }
        total
    }

    fn component(&self, items: &[(usize, i32)]) -> f64 {
        if let [(_, c)] = items {
            return self.weights[*c as usize];
        }
        // Branch on the centre with the most conflicts.
        let pivot = (0..items.len())
            .max_by_key(|&a| {
                let near = items
                    .iter()
                    .filter(|b| self.dist[items[a].0][b.0] <= (1u64 << items[a].1) + (1u64 << b.1))
                    .count();
                (near, std::cmp::Reverse(a))
            })
            .unwrap();
        let (i, cap) = items[pivot];
        let rest: Vec<(usize, i32)> = items
            .iter()
            .enumerate()
            .filter(|&(a, _)| a != pivot)
            .map(|(_, &x)| x)
            .collect();
        let bound = |xs: &[(usize, i32)]| {
            xs.iter()
                .filter(|x| x.1 >= 0)
                .map(|x| self.weights[x.1 as usize])
                .sum::<f64>()
        };
        let mut best = 0.0f64;
        for e in (0..=cap).rev() {
            let r = 1u64 << e;
            let next: Vec<(usize, i32)> = rest
                .iter()
                .map(|&(j, c)| {
                    // Disjoint iff some axis separates centres by more than r + s.
                    let room = self.dist[i][j] as i64 - r as i64 - 1;
                    let allowed = if room < 1 {
                        -1
                    } else {
                        63 - (room as u64).leading_zeros() as i32
                    };
                    (j, c.min(allowed))
                })
                .collect();
            if self.weights[e as usize] + bound(&next) <= best * (1.0 + 1e-12) {
                continue;
            }
            best = best.max(self.weights[e as usize] + self.solve(&next));
        }
        if bound(&rest) > best * (1.0 + 1e-12) {
            best = best.max(self.solve(&rest));
        }
        best
    }
}

/// Buckets of point indices keyed by cell at one grid scale.
struct Grid {
    shift: u32,
    cells: FxHashMap<u64, Vec<u32>>,
}

fn cell_key(cell: &[i64]) -> u64 {
    cell.iter()
        .fold(0x51_7c_c1_b7_27_22_0a_95, |h, &c| mix64(h ^ c as u64))
}

impl Grid {
    fn new(points: impl Iterator<Item = (u32, Vec<i64>)>, shift: u32) -> Grid {
        let mut cells: FxHashMap<u64, Vec<u32>> = FxHashMap::default();
        for (i, p) in points {
            let cell: Vec<i64> = p.iter().map(|&c| c >> shift).collect();
            cells.entry(cell_key(&cell)).or_default().push(i);
        }
        Grid { shift, cells }
    }

    fn insert(&mut self, i: u32, p: &[i32]) {
        let cell: Vec<i64> = p.iter().map(|&c| (c as i64) >> self.shift).collect();
        self.cells.entry(cell_key(&cell)).or_default().push(i);
    }

    /// Visit every bucket meeting the box `[lo, hi]`. Buckets may hold
    /// extra points on hash collisions, so callers re-test membership.
    fn for_each_in_box(&self, lo: &[i64], hi: &[i64], mut f: impl FnMut(u32)) {
        let clo: Vec<i64> = lo.iter().map(|&c| c >> self.shift).collect();
        let chi: Vec<i64> = hi.iter().map(|&c| c >> self.shift).collect();
        let mut cell = clo.clone();
        loop {
            if let Some(list) = self.cells.get(&cell_key(&cell)) {
                list.iter().for_each(|&i| f(i));
            }
            if !next_cell(&mut cell, &clo, &chi) {
                return;
            }
        }
    }

    /// Like `for_each_in_box`, dropping entries for which `keep` is false.
    fn retain_in_box(&mut self, lo: &[i64], hi: &[i64], mut keep: impl FnMut(u32) -> bool) {
        let clo: Vec<i64> = lo.iter().map(|&c| c >> self.shift).collect();
        let chi: Vec<i64> = hi.iter().map(|&c| c >> self.shift).collect();
        let mut cell = clo.clone();
        loop {
            if let Some(list) = self.cells.get_mut(&cell_key(&cell)) {
                list.retain(|&i| keep(i));
            }
            if !next_cell(&mut cell, &clo, &chi) {
                return;
            }
        }
    }
}

fn next_cell(cell: &mut [i64], clo: &[i64], chi: &[i64]) -> bool {
    for axis in 0..cell.len() {
        if cell[axis] < chi[axis] {
            cell[axis] += 1;
            return true;
        }
        cell[axis] = clo[axis];
    }
    false
}

/// Lazy-greedy entry: higher ratio first, then lower centre, then smaller radius.
#[derive(PartialEq)]
struct Entry {
    ratio: f64,
    center: u32,
    e: u32,
    round: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ratio
            .total_cmp(&other.ratio)
            .then(other.center.cmp(&self.center))
            .then(other.e.cmp(&self.e))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ratio greedy: repeatedly take the cube with the most newly covered
/// points per unit weight. Ties go to the lexicographically lowest centre,
/// then the smaller radius.
pub(crate) fn greedy_cover(shell: &PointSet, n: u32, alpha: f64) -> RadiusHistogram {
    greedy_covers(shell, n, &[alpha]).pop().unwrap()
}

/// One ratio-greedy cover per alpha. Cube sizes are counted once and shared.
pub(crate) fn greedy_covers(shell: &PointSet, n: u32, alphas: &[f64]) -> Vec<RadiusHistogram> {
    let m = shell.len();
    let d = shell.dim();
    let pts: Vec<Vec<i64>> = shell
        .iter()
        .map(|p| p.iter().map(|&c| c as i64).collect())
        .collect();
    // Grid at scale 2^e answers queries for cubes of radius 2^e.
    let scan_all = 3f64.powi(d as i32) > m as f64;
    let fresh_grids = || -> Vec<Grid> {
        if scan_all {
            Vec::new()
        } else {
            (0..=n)
                .map(|e| {
                    Grid::new(
                        pts.iter().enumerate().map(|(i, p)| (i as u32, p.clone())),
                        e,
                    )
                })
                .collect()
        }
    };
    // Visits the uncovered points of a cube; covered points are dropped
    // from the grid as they are met.
    let visit =
        |grids: &mut Vec<Grid>, covered: &[bool], c: usize, e: u32, f: &mut dyn FnMut(usize)| {
            let r = 1i64 << e;
            let inside = |i: usize| pts[i].iter().zip(&pts[c]).all(|(a, b)| (a - b).abs() <= r);
            if scan_all {
                (0..m).filter(|&i| !covered[i] && inside(i)).for_each(f);
            } else {
                let lo: Vec<i64> = pts[c].iter().map(|x| x - r).collect();
                let hi: Vec<i64> = pts[c].iter().map(|x| x + r).collect();
                grids[e as usize].retain_in_box(&lo, &hi, |i| {
                    let i = i as usize;
                    if covered[i] {
                        return false;
                    }
                    if inside(i) {
                        f(i)
                    }
                    true
                });
            }
        };
    let mut grids = fresh_grids();
    let nothing = vec![false; m];
    let mut sizes = vec![0usize; m * (n as usize + 1)];
    for c in 0..m {
        for e in 0..=n {
            let mut k = 0;
            visit(&mut grids, &nothing, c, e, &mut |_| k += 1);
            sizes[c * (n as usize + 1) + e as usize] = k;
        }
    }
    alphas
        .iter()
        .map(|&alpha| {
            let mut grids = fresh_grids();
            let mut covered = vec![false; m];
            let mut heap = BinaryHeap::with_capacity(m * (n as usize + 1));
            for c in 0..m {
                for e in 0..=n {
                    let k = sizes[c * (n as usize + 1) + e as usize];
                    heap.push(Entry {
                        ratio: k as f64 / weight(e, n, alpha),
                        center: c as u32,
                        e,
                        round: 0,
                    });
                }
            }
            let mut hist = RadiusHistogram {
                n,
                counts: vec![0; n as usize + 1],
            };
            let mut remaining = m;
            let mut round = 0;
            while remaining > 0 {
                let Some(top) = heap.pop() else { break };
                if top.round == round {
                    let mut newly = Vec::new();
                    visit(&mut grids, &covered, top.center as usize, top.e, &mut |i| {
                        newly.push(i)
                    });
                    for &i in &newly {
                        covered[i] = true;
                    }
                    remaining -= newly.len();
                    hist.counts[top.e as usize] += 1;
                    round += 1;
                    continue;
                }
                let mut fresh = 0usize;
                visit(
                    &mut grids,
                    &covered,
                    top.center as usize,
                    top.e,
                    &mut |_| fresh += 1,
                );
                if fresh > 0 {
                    heap.push(Entry {
                        ratio: fresh as f64 / weight(top.e, n, alpha),
                        round,
                        ..top
                    });
                }
            }
            hist
        })
        .collect()
}

/// Largest-radius-first disjoint packings, one per starting radius: from
/// radius `2^s` down to 1, scan centres in order and keep every cube
/// disjoint from those already placed.
pub(crate) fn greedy_packings(shell: &PointSet, n: u32, emax: u32) -> Vec<RadiusHistogram> {
    let m = shell.len();
    (0..=emax)
        .map(|start| {
            let mut hist = RadiusHistogram {
                n,
                counts: vec![0; emax as usize + 1],
            };
            let mut placed: Vec<(u32, u32)> = Vec::new();
            let mut grid = Grid {
                shift: start + 1,
                cells: FxHashMap::default(),
            };
            let reach = 1i64 << start;
            for e in (0..=start).rev() {
                let r = 1i64 << e;
                for c in 0..m {
                    let p = shell.point(c);
                    let lo: Vec<i64> = p.iter().map(|&x| x as i64 - r - reach).collect();
                    let hi: Vec<i64> = p.iter().map(|&x| x as i64 + r + reach).collect();
                    let mut clash = false;
                    grid.for_each_in_box(&lo, &hi, |k| {
                        let (q, s) = placed[k as usize];
                        if !clash && sup_dist(p, shell.point(q as usize)) as i64 <= r + (1i64 << s)
                        {
                            clash = true;
                        }
                    });
                    if !clash {
                        grid.insert(placed.len() as u32, p);
                        placed.push((c as u32, e));
                        hist.counts[e as usize] += 1;
                    }
                }
            }
            hist
        })
        .collect()
}

/// Shell values and partial sums for one `alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellMeasure {
    pub kind: Kind,
    pub alpha: f64,
    pub epsilon: Option<f64>,
    pub method: Method,
    /// `shells[i]` is the value on shell `n = i + 1`.
    pub shells: Vec<f64>,
    pub partial_sums: Vec<f64>,
}

/// Fitted slope of `log2` shell value against `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub alpha: f64,
    pub rate: f64,
    pub std_error: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionScan {
    pub kind: Kind,
    pub epsilon: Option<f64>,
    pub n_max: u32,
    pub curves: Vec<ShellMeasure>,
    pub growth: Vec<Growth>,
    pub estimate: f64,
    pub std_error: f64,
    /// `false` when the threshold lies outside the alpha grid.
    pub bracketed: bool,
}

/// Shell values `n = 1..=n_max` for each alpha, per-alpha growth rates, and
/// a threshold estimate.
///
/// Hausdorff: shell values stay bounded below the threshold and decay like
/// `2^(n (d_H - alpha))` above it; the estimate is the alpha-intercept of a
/// line through the significantly decaying rates. Packing: rates change
/// sign at the threshold, located by interpolation between grid points.
pub fn dimension_scan(
    a: &PointSet,
    alphas: &[f64],
    n_max: u32,
    kind: Kind,
    epsilon: Option<f64>,
    method: Method,
) -> Result<DimensionScan> {
    if n_max < 3 {
        return arg(format!(
            "n_max = {n_max} leaves too few shells; need at least 3"
        ));
    }
    if n_max > MAX_SHELL {
        return arg(format!("n_max must be at most {MAX_SHELL}"));
    }
    if alphas.is_empty() {
        return arg("empty alpha grid");
    }
    for &x in alphas {
        check_alpha(x)?;
    }
    if alphas.windows(2).any(|w| w[0] >= w[1]) {
        return arg("alpha grid must be strictly increasing");
    }
    let eps = match kind {
        Kind::Packing => {
            let e = epsilon.ok_or_else(|| Error::Argument("packing scans need epsilon".into()))?;
            packing_exponent(1, e)?;
            Some(e)
        }
        Kind::Hausdorff => None,
    };
    let shells: Vec<(u32, PointSet)> = (1..=n_max).map(|n| (n, a.shell(n))).collect();
    // values[n-1][alpha index]
    let values: Vec<Result<Vec<f64>>> = par_map(&shells, |(n, shell)| {
        let n = *n;
        if shell.is_empty() {
            return Ok(vec![0.0; alphas.len()]);
        }
        match (kind, method) {
            (Kind::Hausdorff, Method::Exact) => {
                alphas.iter().map(|&x| exact_cover(shell, n, x)).collect()
            }
            (Kind::Hausdorff, Method::Greedy) => {
                // Any cover found at one alpha is a cover at every alpha.
                let covers = greedy_covers(shell, n, alphas);
                Ok(alphas
                    .iter()
                    .map(|&x| {
                        covers
                            .iter()
                            .map(|h| h.value(x))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .collect())
            }
            (Kind::Packing, Method::Exact) => {
                let emax = packing_exponent(n, eps.unwrap())?;
                alphas
                    .iter()
                    .map(|&x| exact_packing(shell, n, emax, x))
                    .collect()
            }
            (Kind::Packing, Method::Greedy) => {
                let emax = packing_exponent(n, eps.unwrap())?;
                let packs = greedy_packings(shell, n, emax);
                Ok(alphas
                    .iter()
                    .map(|&x| packs.iter().map(|h| h.value(x)).fold(0.0, f64::max))
                    .collect())
            }
        }
    });
    let values: Vec<Vec<f64>> = values.into_iter().collect::<Result<_>>()?;

    let n_lo = if n_max >= 5 { 2 } else { 1 };
    let curves: Vec<ShellMeasure> = alphas
        .iter()
        .enumerate()
        .map(|(j, &alpha)| {
            let shells: Vec<f64> = values.iter().map(|v| v[j]).collect();
            let partial_sums = shells
                .iter()
                .scan(0.0, |acc, &v| {
                    *acc += v;
                    Some(*acc)
                })
                .collect();
            ShellMeasure {
                kind,
                alpha,
                epsilon: eps,
                method,
                shells,
                partial_sums,
            }
        })
        .collect();
    let grid_step = if alphas.len() > 1 {
        alphas[1] - alphas[0]
    } else {
        0.0
    };
    let threshold = |growth: &[Growth]| match kind {
        Kind::Hausdorff => hausdorff_threshold(growth, grid_step),
        Kind::Packing => packing_threshold(growth, grid_step),
    };
    let growth = growth_rates(&curves, n_lo, n_max);
    let (estimate, mut std_error, bracketed) = threshold(&growth);
    // Same finite-size check as fit_exponent: re-estimate on the lower and
    // upper halves of the shells (sharing the middle one).
    let mid = (n_lo + n_max).div_ceil(2);
    if mid - n_lo >= 2 && n_max - mid >= 2 {
        let (lo, _, lo_ok) = threshold(&growth_rates(&curves, n_lo, mid));
        let (hi, _, hi_ok) = threshold(&growth_rates(&curves, mid, n_max));
        if lo_ok && hi_ok {
            std_error = std_error.hypot(lo - hi);
        }
    }
    Ok(DimensionScan {
        kind,
        epsilon: eps,
        n_max,
        curves,
        growth,
        estimate,
        std_error,
        bracketed,
    })
}

fn growth_rates(curves: &[ShellMeasure], n_lo: u32, n_hi: u32) -> Vec<Growth> {
    curves
        .iter()
        .map(|c| {
            let pts: Vec<(f64, f64)> = (n_lo..=n_hi)
                .map(|n| (n as f64, c.shells[n as usize - 1]))
                .filter(|&(_, v)| v > 0.0)
                .map(|(n, v)| (n, v.log2()))
                .collect();
            if pts.len() >= 3 {
                let fit = ols(&pts);
                Growth {
                    alpha: c.alpha,
                    rate: fit.slope,
                    std_error: fit.se,
                    n_points: pts.len(),
                }
            } else {
                Growth {
                    alpha: c.alpha,
                    rate: f64::NEG_INFINITY,
                    std_error: 0.0,
                    n_points: pts.len(),
                }
            }
        })
        .collect()
}

/// Rates below this are treated as decay regardless of their error.
const DECAY_FLOOR: f64 = 0.05;

fn hausdorff_threshold(growth: &[Growth], grid_step: f64) -> (f64, f64, bool) {
    if growth.iter().all(|g| g.rate == f64::NEG_INFINITY) {
        // Fewer than three occupied shells: a finite set.
        return (0.0, 0.0, true);
    }
    let branch: Vec<&Growth> = growth
        .iter()
        .filter(|g| g.rate.is_finite() && g.rate < -DECAY_FLOOR && g.rate + 2.0 * g.std_error < 0.0)
        .collect();
    let last = growth.last().unwrap().alpha;
    match branch.len() {
        0 => (last, grid_step / 2.0, false),
        1 => {
            let g = branch[0];
            (
                g.alpha + g.rate,
                (g.std_error.powi(2) + (grid_step / 2.0).powi(2)).sqrt(),
                true,
            )
        }
        _ => {
            let pts: Vec<(f64, f64)> = branch.iter().map(|g| (g.alpha, g.rate)).collect();
            let fit = ols(&pts);
            if fit.slope >= 0.0 {
                let mean =
                    branch.iter().map(|g| g.alpha + g.rate).sum::<f64>() / branch.len() as f64;
                return (mean.max(0.0), grid_step / 2.0, true);
            }
            let est = -fit.intercept / fit.slope;
            // Spread of the per-point intercepts stands in for the
            // regression error of the ratio.
            let spread = {
                let xs: Vec<f64> = branch
                    .iter()
                    .map(|g| g.alpha - g.rate / fit.slope)
                    .collect();
                let mean = xs.iter().sum::<f64>() / xs.len() as f64;
                (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64).sqrt()
            };
            let rate_err = branch.iter().map(|g| g.std_error).fold(0.0, f64::max) / fit.slope.abs();
            let se = (spread.powi(2) + rate_err.powi(2) + (grid_step / 2.0).powi(2)).sqrt();
            (est.max(0.0), se, true)
        }
    }
}

fn packing_threshold(growth: &[Growth], grid_step: f64) -> (f64, f64, bool) {
    let half = grid_step / 2.0;
    let first = growth[0];
    if first.rate <= 0.0 {
        return (first.alpha, half, first.alpha == 0.0);
    }
    for w in growth.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.rate > 0.0 && b.rate <= 0.0 {
            let t = if b.rate.is_finite() {
                a.rate / (a.rate - b.rate)
            } else {
                0.0
            };
            let est = a.alpha + t * (b.alpha - a.alpha);
            let drop = if b.rate.is_finite() {
                (a.rate - b.rate) / (b.alpha - a.alpha)
            } else {
                f64::INFINITY
            };
            let rate_err = a
                .std_error
                .max(if b.rate.is_finite() { b.std_error } else { 0.0 })
                / drop;
            return (est, (rate_err.powi(2) + half.powi(2)).sqrt(), true);
        }
    }
    (growth.last().unwrap().alpha, half, false)
}

/// Apply "recurrent if d_H > d - 2, transient if d_H < d - 2" with a
/// two-standard-error band around `d - 2`.
pub fn recurrence_by_dh(estimate: f64, std_error: f64, d: usize) -> Recurrence {
    let threshold = d as f64 - 2.0;
    if estimate - 2.0 * std_error > threshold {
        Recurrence::Recurrent
    } else if estimate + 2.0 * std_error < threshold {
        Recurrence::Transient
    } else {
        Recurrence::Inconclusive
    }
}
