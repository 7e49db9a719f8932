use std::path::PathBuf;

use clap::{Args, Subcommand};
use graphdim_core::graph::{ball_profile, write_adjacency};
use graphdim_core::percolation::{
    critical_ball_experiment, estimate_susceptibility_capped, estimate_theta, sample_cluster,
    DEFAULT_SAFETY_CAP,
};
use graphdim_core::EstimateCI;

use super::require_positive;
use crate::error::{config, write_file, CliResult, Context};
use crate::output::{Format, Table};

#[derive(Debug, Subcommand)]
pub enum PercCommand {
    /// Ball profile of one cluster of the origin.
    Sample {
        #[command(flatten)]
        common: PercArgs,
        /// Also write the cluster in adjacency format.
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Probability of surviving to intrinsic radius `cutoff`.
    Theta(PercArgs),
    /// Mean cluster size; `--cutoff` is the safety cap on cluster size.
    Chi(PercArgs),
    /// `E|B(k)|` for `k = 1..=cutoff`.
    CriticalBall(PercArgs),
}

#[derive(Debug, Args)]
pub struct PercArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub out: Format,
}

impl PercArgs {
    fn cutoff(&self) -> CliResult<usize> {
        self.cutoff
            .map_or_else(|| config("--cutoff is required"), Ok)
    }
}

pub fn run(cmd: &PercCommand) -> CliResult<String> {
    let (table, out) = match cmd {
        PercCommand::Sample { common: a, save } => {
            let s = sample_cluster(a.d, a.p, a.seed, a.cutoff()?).context("sampling cluster")?;
            if let Some(path) = save {
                write_file(path, &write_adjacency(&s.cluster))?;
            }
            let prof = ball_profile(&s.cluster, s.cluster.radius().min(a.cutoff()?));
            let rows = prof
                .ball_sizes
                .iter()
                .enumerate()
                .map(|(k, &b)| (k as f64, EstimateCI::exact(b as f64)));
            (Table::estimates(rows), a.out)
        }
        PercCommand::Theta(a) => {
            require_positive("samples", a.samples)?;
            let cutoff = a.cutoff()?;
            let t =
                estimate_theta(a.d, a.p, cutoff, a.samples, a.seed).context("estimating theta")?;
            (Table::estimates([(cutoff as f64, t)]), a.out)
        }
        PercCommand::Chi(a) => {
            require_positive("samples", a.samples)?;
            let cap = a.cutoff.unwrap_or(DEFAULT_SAFETY_CAP);
            let chi = estimate_susceptibility_capped(a.d, a.p, a.samples, a.seed, cap)
                .context("estimating chi")?;
            if chi.estimate.flagged {
                eprintln!(
                    "warning: {} of {} clusters reached the cap {cap}",
                    chi.censored, a.samples
                );
            }
            (Table::estimates([(cap as f64, chi.estimate)]), a.out)
        }
        PercCommand::CriticalBall(a) => {
            require_positive("samples", a.samples)?;
            let balls = critical_ball_experiment(a.d, a.p, a.cutoff()?, a.samples, a.seed)
                .context("ball experiment")?;
            (
                Table::estimates(
                    balls
                        .into_iter()
                        .enumerate()
                        .map(|(i, e)| ((i + 1) as f64, e)),
                ),
                a.out,
            )
        }
    };
    Ok(table.render(out))
}
