//! Replica-averaged dimension estimates for the Kesten tree, shared by the
//! CLI and the acceptance tests.

use serde::{Deserialize, Serialize};

use crate::dimension::{barlow_bass_check, estimate_beta, fit_exponent, spectral, BarlowBass};
use crate::error::{arg, Error, Result};
use crate::graph::{ball_profile, mass_profile};
use crate::gw::{embed_branching_rw, sample_iic_tree, OffspringLaw};
use crate::parallel::replicas;
use crate::stats::{Accumulator, EstimateCI};
use crate::walk::{mean_exit_time_exact, return_probability_exact, Boundary, Metric};
use crate::ExponentFit;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KestenParams {
    pub replicas: usize,
    pub depth: usize,
    /// Length of the return-probability series.
    pub steps: usize,
    /// First absorbing radius tried; doubled until the absorbed mass is
    /// negligible.
    pub start_radius: usize,
    /// Exit-time radii.
    pub exit_radii: Vec<usize>,
    pub df_window: Option<(f64, f64)>,
    pub ds_window: Option<(f64, f64)>,
    pub beta_window: Option<(f64, f64)>,
}

impl KestenParams {
    /// The full-size run: 200 replicas to depth 4096.
    pub fn standard() -> KestenParams {
        KestenParams {
            replicas: 200,
            depth: 4096,
            steps: 4096,
            start_radius: 256,
            exit_radii: (2..=10).map(|j| 1 << j).collect(),
            df_window: None,
            ds_window: None,
            beta_window: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KestenDimensions {
    /// `E|B(k)|`, `k = 0..=depth`.
    pub ball: Vec<EstimateCI>,
    /// Annealed `P(S_2k = root)`, `k = 1..=steps`.
    pub returns: Vec<EstimateCI>,
    /// `(r, E tau_r)` per exit radius.
    pub exit: Vec<(f64, EstimateCI)>,
    /// Absorbing radius each replica needed.
    pub radii: Vec<usize>,
    pub max_absorbed: f64,
    pub df: ExponentFit,
    pub ds: ExponentFit,
    pub beta: ExponentFit,
    pub barlow_bass: BarlowBass,
}

struct Replica {
    ball: Vec<u64>,
    ret: Vec<f64>,
    exit: Vec<f64>,
    radius: usize,
    absorbed: f64,
}

pub fn kesten_dimensions(
    law: &OffspringLaw,
    params: &KestenParams,
    seed: u64,
) -> Result<KestenDimensions> {
    let p = params;
    if p.replicas == 0 || p.depth < 2 || p.steps < 3 || p.start_radius == 0 {
        return arg("replicas, depth, steps and start_radius must be positive");
    }
    if let Some(&r) = p.exit_radii.iter().find(|&&r| r == 0 || r > p.depth) {
        return arg(format!("exit radius {r} outside 1..={}", p.depth));
    }
    let runs: Vec<Result<Replica>> = replicas(p.replicas, seed, |_, s| {
        let t = sample_iic_tree(law, p.depth, s)?.tree;
        let ball = ball_profile(&t, p.depth).ball_sizes;
        let mut radius = p.start_radius.min(p.depth);
        let walk = loop {
            let sub = t.ball_subgraph(radius);
            match return_probability_exact(&sub, p.steps, Boundary::Absorbing { radius }) {
                Ok(w) => break w,
                Err(Error::Numeric { .. }) if radius < p.depth => {
                    radius = (2 * radius).min(p.depth)
                }
                Err(e) => return Err(e),
            }
        };
        let exit = p
            .exit_radii
            .iter()
            .map(|&r| mean_exit_time_exact(&t, r, Metric::Intrinsic))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Replica {
            ball,
            ret: walk.return_probs,
            exit,
            radius,
            absorbed: walk.absorbed_mass,
        })
    });
    let runs: Vec<Replica> = runs.into_iter().collect::<Result<_>>()?;
    let mean = |f: &dyn Fn(&Replica) -> &[f64], len: usize| -> Vec<EstimateCI> {
        (0..len)
            .map(|i| {
                runs.iter()
                    .map(|r| f(r)[i])
                    .collect::<Accumulator>()
                    .estimate()
            })
            .collect()
    };
    let ball: Vec<EstimateCI> = (0..=p.depth)
        .map(|k| {
            runs.iter()
                .map(|r| r.ball[k] as f64)
                .collect::<Accumulator>()
                .estimate()
        })
        .collect();
    let returns = mean(&|r| &r.ret, p.steps);
    let exit: Vec<(f64, EstimateCI)> = p
        .exit_radii
        .iter()
        .map(|&r| r as f64)
        .zip(mean(&|r| &r.exit, p.exit_radii.len()))
        .collect();

    let ball_pts: Vec<(f64, f64)> = means(&ball)
        .enumerate()
        .skip(1)
        .map(|(k, b)| (k as f64, b))
        .collect();
    let df = fit_exponent(&ball_pts, p.df_window)?;
    let return_pts: Vec<(f64, f64)> = means(&returns)
        .enumerate()
        .map(|(i, q)| ((i + 1) as f64, q))
        .collect();
    let ds = spectral(fit_exponent(&return_pts, p.ds_window)?);
    let exit_pts: Vec<(f64, f64)> = exit.iter().map(|(r, e)| (*r, e.mean)).collect();
    let beta = estimate_beta(&exit_pts, p.beta_window)?;
    let barlow_bass = barlow_bass_check(&df, &ds, &beta);
    Ok(KestenDimensions {
        ball,
        returns,
        exit,
        radii: runs.iter().map(|r| r.radius).collect(),
        max_absorbed: runs.iter().map(|r| r.absorbed).fold(0.0, f64::max),
        df,
        ds,
        beta,
        barlow_bass,
    })
}

fn means(v: &[EstimateCI]) -> impl Iterator<Item = f64> + '_ {
    v.iter().map(|e| e.mean)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassDimension {
    /// `mass[k]` estimates `E|C ∩ Q(k)|`.
    pub mass: Vec<EstimateCI>,
    pub dm: ExponentFit,
}

/// `E|C ∩ Q(k)|`, `k = 0..=n_max`, for the Kesten tree embedded in `Z^d`
/// as a branching random walk. Replica `i` uses `derive_seed(seed, i)` for
/// both the tree and the embedding.
pub fn kesten_mass_profile(
    law: &OffspringLaw,
    depth: usize,
    d: usize,
    n_replicas: usize,
    n_max: usize,
    seed: u64,
) -> Result<Vec<EstimateCI>> {
    if n_replicas == 0 {
        return arg("need at least one replica");
    }
    let runs: Vec<Result<Vec<u64>>> = replicas(n_replicas, seed, |_, s| {
        let t = sample_iic_tree(law, depth, s)?.tree;
        let g = embed_branching_rw(&t, d, s)?;
        Ok(mass_profile(&g, n_max)?.counts)
    });
    let runs: Vec<Vec<u64>> = runs.into_iter().collect::<Result<_>>()?;
    Ok((0..=n_max)
        .map(|k| {
            runs.iter()
                .map(|r| r[k] as f64)
                .collect::<Accumulator>()
                .estimate()
        })
        .collect())
}

/// Mass dimension fitted to [`kesten_mass_profile`].
pub fn kesten_mass_dimension(
    law: &OffspringLaw,
    depth: usize,
    d: usize,
    n_replicas: usize,
    n_max: usize,
    window: Option<(f64, f64)>,
    seed: u64,
) -> Result<MassDimension> {
    if n_max < 3 {
        return arg("need n_max >= 3");
    }
    let mass = kesten_mass_profile(law, depth, d, n_replicas, n_max, seed)?;
    let pts: Vec<(f64, f64)> = mass
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, m)| (k as f64, m.mean))
        .collect();
    let dm = fit_exponent(&pts, window)?;
    Ok(MassDimension { mass, dm })
}
