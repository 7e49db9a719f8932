use std::path::PathBuf;

use clap::{Args, Subcommand};
use graphdim_core::graph::write_adjacency;
use graphdim_core::gw::{
    cluster_tail_experiment, embed_branching_rw, sample_iic_tree, OffspringLaw,
};
use graphdim_core::rng::derive_seed;
use graphdim_core::suite::kesten_mass_profile;

use super::{parse_k_grid, require_positive};
use crate::error::{write_file, CliResult, Context};
use crate::output::{Format, Table};

#[derive(Debug, Subcommand)]
pub enum IicCommand {
    /// Sample the Kesten tree to a depth and write it in adjacency format.
    Sample {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// `P(|C| >= k)` for the unconditioned critical tree.
    Tail {
        #[arg(long)]
        law: OffspringLaw,
        /// Comma list or `lo:hi:count` (log-spaced).
        #[arg(long, default_value = "100:10000:9", value_parser = parse_k_grid)]
        k_grid: std::vec::Vec<u64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
    /// `E|C ∩ Q(k)|` for the tree embedded as a branching random walk.
    Embed {
        #[command(flatten)]
        tree: TreeArgs,
        #[arg(long)]
        ambient_d: usize,
        #[arg(long, default_value_t = 1)]
        replicas: usize,
        /// Largest box; defaults to `sqrt(depth / ambient_d)`.
        #[arg(long)]
        n_max: Option<usize>,
        /// Write the first replica's embedded tree.
        #[arg(long)]
        save: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        out: Format,
    },
}

#[derive(Debug, Args)]
pub struct TreeArgs {
    #[arg(long, default_value = "binomial:2:0.5")]
    pub law: OffspringLaw,
    #[arg(long)]
    pub depth: usize,
    #[arg(long)]
    pub seed: u64,
}

/// Default box size for the mass profile of an embedded tree of `depth`.
pub fn default_mass_n_max(depth: usize, d: usize) -> usize {
    ((depth as f64 / d.max(1) as f64).sqrt().round() as usize).max(3)
}

pub fn run(cmd: &IicCommand) -> CliResult<String> {
    match cmd {
        IicCommand::Sample { tree: t, out } => {
            let tree = sample_iic_tree(&t.law, t.depth, t.seed).context("sampling tree")?;
            write_file(out, &write_adjacency(&tree.tree))?;
            Ok(String::new())
        }
        IicCommand::Tail {
            law,
            k_grid,
            samples,
            seed,
            out,
        } => {
            require_positive("samples", *samples)?;
            let tail =
                cluster_tail_experiment(law, k_grid, *samples, *seed).context("tail experiment")?;
            if tail.flagged {
                eprintln!(
                    "warning: {} of {samples} samples reached k = {}",
                    tail.censored,
                    k_grid.iter().max().unwrap()
                );
            }
            Ok(Table::estimates(tail.k.iter().map(|&k| k as f64).zip(tail.survival)).render(*out))
        }
        IicCommand::Embed {
            tree: t,
            ambient_d,
            replicas,
            n_max,
            save,
            out,
        } => {
            require_positive("replicas", *replicas)?;
            let n_max = n_max.unwrap_or_else(|| default_mass_n_max(t.depth, *ambient_d));
            if let Some(path) = save {
                // Replica 0 of the profile below.
                let s = derive_seed(t.seed, 0);
                let tree = sample_iic_tree(&t.law, t.depth, s)
                    .context("sampling tree")?
                    .tree;
                let g = embed_branching_rw(&tree, *ambient_d, s).context("embedding")?;
                write_file(path, &write_adjacency(&g))?;
            }
            let m = kesten_mass_profile(&t.law, t.depth, *ambient_d, *replicas, n_max, t.seed);
            let m = m.context("mass profile")?;
            Ok(
                Table::estimates(m.into_iter().enumerate().map(|(k, e)| (k as f64, e)))
                    .render(*out),
            )
        }
    }
}
