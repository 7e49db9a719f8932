//! Experiment configs: TOML with one table per concern. Every field other
//! than `experiment.kind` and `experiment.seed` is optional at parse time;
//! `Config::plan` checks what each kind needs.

use std::path::{Path, PathBuf};

use graphdim_core::barlow_taylor::{Kind, Method};
use graphdim_core::gw::OffspringLaw;
use graphdim_core::suite::KestenParams;
use serde::{Deserialize, Serialize};

use crate::commands::{iic::default_mass_n_max, parse_grid};
use crate::error::{CliError, CliResult};
use crate::family::Family;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    /// Deterministic reference graph.
    Graph,
    /// Kesten tree: d_f, d_s, beta and optionally the embedded mass.
    Kesten,
    CriticalBall,
    ClusterTail,
    BarlowTaylor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: Experiment,
    #[serde(default)]
    pub model: Model,
    #[serde(default)]
    pub samples: Samples,
    #[serde(default)]
    pub walk: Walk,
    #[serde(default)]
    pub scan: Scan,
    #[serde(default)]
    pub fit: Fit,
    #[serde(default)]
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Experiment {
    pub name: Option<String>,
    pub kind: ExperimentKind,
    /// Master seed; every random stream is split from it.
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Model {
    /// Graph family, e.g. `lattice:2:300`.
    pub family: Option<String>,
    pub d: Option<usize>,
    pub p: Option<f64>,
    pub cutoff: Option<usize>,
    pub law: Option<OffspringLaw>,
    pub depth: Option<usize>,
    /// Embed the Kesten tree in `Z^ambient_d` and fit d_m.
    pub ambient_d: Option<usize>,
    /// Tail grid for `cluster-tail`: comma list or `lo:hi:count`.
    pub k_grid: Option<String>,
    /// Point-set file for `barlow-taylor`, relative to the config file.
    pub set: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Samples {
    pub replicas: Option<usize>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Walk {
    /// Length of the return series.
    pub steps: Option<usize>,
    pub start_radius: Option<usize>,
    pub exit_radii: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scan {
    pub kind: Option<Kind>,
    pub alpha_grid: Option<String>,
    pub eps: Option<f64>,
    pub n_max: Option<u32>,
    pub method: Option<Method>,
}

/// Fit windows `[a, b]` in the units of the `k` column of the data files.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fit {
    pub df: Option<[f64; 2]>,
    pub ds: Option<[f64; 2]>,
    pub dm: Option<[f64; 2]>,
    pub beta: Option<[f64; 2]>,
    pub tail: Option<[f64; 2]>,
    /// Largest box of the mass profile.
    pub mass_n_max: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub dir: Option<PathBuf>,
}

/// A validated config, one variant per kind.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Graph {
        family: Family,
        steps: Option<usize>,
        exit_radii: Vec<usize>,
    },
    Kesten {
        law: OffspringLaw,
        params: KestenParams,
        mass: Option<(usize, usize)>,
    },
    CriticalBall {
        d: usize,
        p: f64,
        cutoff: usize,
        samples: usize,
    },
    ClusterTail {
        law: OffspringLaw,
        k_grid: Vec<u64>,
        samples: usize,
    },
    BarlowTaylor {
        set: PathBuf,
        kind: Kind,
        alphas: Vec<f64>,
        eps: Option<f64>,
        n_max: Option<u32>,
        method: Method,
    },
}

fn field_error(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{path}: {msg}"))
}

fn need<T: Clone>(v: &Option<T>, path: &str, kind: &str) -> CliResult<T> {
    v.clone()
        .ok_or_else(|| field_error(path, format!("required for kind `{kind}`")))
}

fn positive(v: usize, path: &str) -> CliResult<usize> {
    if v == 0 {
        return Err(field_error(path, "must be positive"));
    }
    Ok(v)
}

fn window(w: Option<[f64; 2]>, path: &str) -> CliResult<Option<(f64, f64)>> {
    match w {
        Some([a, b]) if !(a < b) => Err(field_error(path, format!("empty window [{a}, {b}]"))),
        Some([a, b]) => Ok(Some((a, b))),
        None => Ok(None),
    }
}

impl Config {
    /// Parse TOML; errors name the offending field, e.g. `model.depth`.
    pub fn parse(text: &str) -> CliResult<Config> {
        let de = toml::Deserializer::parse(text).map_err(|e| {
            let line = e
                .span()
                .map_or(0, |r| text[..r.start].matches('\n').count() + 1);
            CliError::Config(format!("line {line}: {}", e.message()))
        })?;
        serde_path_to_error::deserialize(de).map_err(|e| {
            let mut path = e.path().to_string();
            let msg = e.inner().message().to_string();
            // Name the missing field itself, not its table.
            if let Some(field) = msg
                .strip_prefix("missing field `")
                .and_then(|r| r.split('`').next())
            {
                path = if path == "." {
                    field.to_string()
                } else {
                    format!("{path}.{field}")
                };
            }
            field_error(&path, msg)
        })
    }

    pub fn load(path: &Path) -> CliResult<Config> {
        let text = crate::error::read_file(path)?;
        Config::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn name(&self) -> String {
        self.experiment
            .name
            .clone()
            .unwrap_or_else(|| kind_name(self.experiment.kind).to_string())
    }

    /// Check the fields `experiment.kind` needs; relative paths resolve
    /// against `base`.
    pub fn plan(&self, base: &Path) -> CliResult<Plan> {
        let kind = kind_name(self.experiment.kind);
        let m = &self.model;
        let w = &self.walk;
        for (path, win) in [
            ("fit.df", self.fit.df),
            ("fit.ds", self.fit.ds),
            ("fit.dm", self.fit.dm),
            ("fit.beta", self.fit.beta),
            ("fit.tail", self.fit.tail),
        ] {
            window(win, path)?;
        }
        Ok(match self.experiment.kind {
            ExperimentKind::Graph => {
                let spec = need(&m.family, "model.family", kind)?;
                let family = spec.parse().map_err(|e| field_error("model.family", e))?;
                let exit_radii = w.exit_radii.clone().unwrap_or_default();
                if exit_radii.contains(&0) {
                    return Err(field_error("walk.exit_radii", "radii must be positive"));
                }
                Plan::Graph {
                    family,
                    steps: w.steps,
                    exit_radii,
                }
            }
            ExperimentKind::Kesten => {
                let depth = positive(need(&m.depth, "model.depth", kind)?, "model.depth")?;
                let params = KestenParams {
                    replicas: positive(
                        need(&self.samples.replicas, "samples.replicas", kind)?,
                        "samples.replicas",
                    )?,
                    depth,
                    steps: positive(need(&w.steps, "walk.steps", kind)?, "walk.steps")?,
                    start_radius: positive(w.start_radius.unwrap_or(depth), "walk.start_radius")?,
                    exit_radii: need(&w.exit_radii, "walk.exit_radii", kind)?,
                    df_window: window(self.fit.df, "fit.df")?,
                    // The library indexes the return series by k, the files by 2k.
                    ds_window: window(self.fit.ds, "fit.ds")?.map(|(a, b)| (a / 2.0, b / 2.0)),
                    beta_window: window(self.fit.beta, "fit.beta")?,
                };
                if let Some(&r) = params.exit_radii.iter().find(|&&r| r == 0 || r > depth) {
                    return Err(field_error(
                        "walk.exit_radii",
                        format!("radius {r} outside 1..={depth}"),
                    ));
                }
                let mass = m.ambient_d.map(|d| {
                    (
                        d,
                        self.fit
                            .mass_n_max
                            .unwrap_or_else(|| default_mass_n_max(depth, d)),
                    )
                });
                if let Some((d, _)) = mass {
                    positive(d, "model.ambient_d")?;
                }
                Plan::Kesten {
                    law: need(&m.law, "model.law", kind)?,
                    params,
                    mass,
                }
            }
            ExperimentKind::CriticalBall => {
                let p = need(&m.p, "model.p", kind)?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(field_error("model.p", "must lie in [0, 1]"));
                }
                Plan::CriticalBall {
                    d: positive(need(&m.d, "model.d", kind)?, "model.d")?,
                    p,
                    cutoff: positive(need(&m.cutoff, "model.cutoff", kind)?, "model.cutoff")?,
                    samples: positive(
                        need(&self.samples.samples, "samples.samples", kind)?,
                        "samples.samples",
                    )?,
                }
            }
            ExperimentKind::ClusterTail => {
                let grid = need(&m.k_grid, "model.k_grid", kind)?;
                Plan::ClusterTail {
                    law: need(&m.law, "model.law", kind)?,
                    k_grid: crate::commands::parse_k_grid(&grid)
                        .map_err(|e| field_error("model.k_grid", e))?,
                    samples: positive(
                        need(&self.samples.samples, "samples.samples", kind)?,
                        "samples.samples",
                    )?,
                }
            }
            ExperimentKind::BarlowTaylor => {
                let s = &self.scan;
                let scan_kind = need(&s.kind, "scan.kind", kind)?;
                if scan_kind == Kind::Packing && s.eps.is_none() {
                    return Err(field_error("scan.eps", "required for packing scans"));
                }
                let grid = s.alpha_grid.as_deref().unwrap_or("0:0.1:3");
                Plan::BarlowTaylor {
                    set: base.join(need(&m.set, "model.set", kind)?),
                    kind: scan_kind,
                    alphas: parse_grid(grid).map_err(|e| field_error("scan.alpha_grid", e))?,
                    eps: s.eps,
                    n_max: s.n_max,
                    method: s.method.unwrap_or(Method::Greedy),
                }
            }
        })
    }
}

pub fn kind_name(kind: ExperimentKind) -> &'static str {
    match kind {
        ExperimentKind::Graph => "graph",
        ExperimentKind::Kesten => "kesten",
        ExperimentKind::CriticalBall => "critical-ball",
        ExperimentKind::ClusterTail => "cluster-tail",
        ExperimentKind::BarlowTaylor => "barlow-taylor",
    }
}
