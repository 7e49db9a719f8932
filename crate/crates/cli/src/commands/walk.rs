use clap::{Args, Subcommand};
use graphdim_core::walk::{
    effective_resistance, exit_time, mean_exit_time_exact, return_probability_exact,
    return_probability_mc, Boundary, Metric,
};

use super::require_positive;
use crate::error::{config, CliResult, Context};
use crate::family::GraphSource;
use crate::output::{Format, Table};

#[derive(Debug, Subcommand)]
pub enum WalkCommand {
    /// `P(S_2k = root)`; the `k` column holds the time `2k`.
    Return {
        #[command(flatten)]
        graph: GraphSource,
        #[command(flatten)]
        mode: ModeArgs,
        /// Number of even times.
        #[arg(long)]
        steps: usize,
        /// Depth at which the walk is absorbed.
        #[arg(long)]
        absorbing: Option<usize>,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
    /// Mean exit time of `B(r)` or `Q(r)`.
    Exit {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, value_enum, default_value = "intrinsic")]
        metric: MetricArg,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        /// Monte Carlo instead of the exact linear solve.
        #[arg(long)]
        mc: bool,
        #[command(flatten)]
        samples: McArgs,
        /// Censoring cap for Monte Carlo walks (default `100 r^3`).
        #[arg(long)]
        step_cap: Option<u64>,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
    /// Effective resistance from the root to distance `r`.
    Resistance {
        #[command(flatten)]
        graph: GraphSource,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ModeArgs {
    #[arg(long)]
    pub exact: bool,
    #[arg(long)]
    pub mc: bool,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl McArgs {
    fn seed(&self) -> CliResult<u64> {
        require_positive("samples", self.samples)?;
        self.seed
            .map_or_else(|| config("--seed is required for Monte Carlo runs"), Ok)
    }
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum MetricArg {
    Intrinsic,
    Extrinsic,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Metric {
        match m {
            MetricArg::Intrinsic => Metric::Intrinsic,
            MetricArg::Extrinsic => Metric::Extrinsic,
        }
    }
}

pub fn run(cmd: &WalkCommand) -> CliResult<String> {
    match cmd {
        WalkCommand::Return {
            graph,
            mode,
            steps,
            absorbing,
            mc,
            out,
        } => {
            let g = graph.load()?;
            let boundary =
                absorbing.map_or(Boundary::Finite, |radius| Boundary::Absorbing { radius });
            let stats = if mode.exact {
                return_probability_exact(&g, *steps, boundary).context("exact return series")?
            } else {
                return_probability_mc(&g, *steps, mc.samples, mc.seed()?, boundary)
                    .context("return series")?
            };
            if stats.absorbed_mass > 0.0 {
                eprintln!("absorbed mass {:e}", stats.absorbed_mass);
            }
            Ok(Table::values(stats.rows().map(|(t, p, s)| (t as f64, p, s))).render(*out))
        }
        WalkCommand::Exit {
            graph,
            metric,
            r,
            mc,
            samples,
            step_cap,
            out,
        } => {
            let g = graph.load()?;
            let metric = Metric::from(*metric);
            let mut rows = Vec::new();
            for &r in r {
                if *mc {
                    let e = exit_time(&g, r, metric, samples.samples, samples.seed()?, *step_cap)
                        .context(format!("exit time at r = {r}"))?;
                    if e.censored > 0 {
                        eprintln!("warning: {} walks censored at r = {r}", e.censored);
                    }
                    rows.push((r as f64, e.estimate.mean, e.estimate.std_error));
                } else {
                    let t = mean_exit_time_exact(&g, r, metric)
                        .context(format!("exit time at r = {r}"))?;
                    rows.push((r as f64, t, 0.0));
                }
            }
            Ok(Table::values(rows).render(*out))
        }
        WalkCommand::Resistance { graph, r, out } => {
            let g = graph.load()?;
            let rows = r
                .iter()
                .map(|&r| {
                    Ok((
                        r as f64,
                        effective_resistance(&g, r).context(format!("resistance at r = {r}"))?,
                        0.0,
                    ))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(Table::values(rows).render(*out))
        }
    }
}
