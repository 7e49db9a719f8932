use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use graphdim_core::generators::{
    make_homogeneous_tree, make_lattice_box, make_path, make_regular_tree, make_sierpinski,
};
use graphdim_core::graph::read_adjacency;
use graphdim_core::Graph;

use crate::error::{read_file, CliResult, Context};

/// Deterministic reference graphs, written `lattice:D:N`, `sierpinski:L`,
/// `regular-tree:B:DEPTH`, `homogeneous-tree:DEG:DEPTH` or `path:N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Lattice { d: usize, n: usize },
    Sierpinski { level: usize },
    RegularTree { b: usize, depth: usize },
    HomogeneousTree { degree: usize, depth: usize },
    Path { n: usize },
}

impl Family {
    pub fn build(&self) -> CliResult<Graph> {
        let g = match *self {
            Family::Lattice { d, n } => make_lattice_box(d, n),
            Family::Sierpinski { level } => make_sierpinski(level),
            Family::RegularTree { b, depth } => make_regular_tree(b, depth),
            Family::HomogeneousTree { degree, depth } => make_homogeneous_tree(degree, depth),
            Family::Path { n } => make_path(n),
        };
        g.context(format!("building {self}"))
    }
}

impl Family {
    /// Largest radius whose ball is not cut by the edge of the finite graph.
    pub fn complete_radius(&self, g: &Graph) -> usize {
        match *self {
            Family::Lattice { n, .. } => n,
            _ => g.radius(),
        }
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| format!("bad number `{t}` in graph family `{s}`"))
        };
        match parts.as_slice() {
            ["lattice", d, n] => Ok(Family::Lattice { d: num(d)?, n: num(n)? }),
            ["sierpinski", l] => Ok(Family::Sierpinski { level: num(l)? }),
            ["regular-tree", b, depth] => Ok(Family::RegularTree { b: num(b)?, depth: num(depth)? }),
            ["homogeneous-tree", deg, depth] => Ok(Family::HomogeneousTree { degree: num(deg)?, depth: num(depth)? }),
            ["path", n] => Ok(Family::Path { n: num(n)? }),
            _ => Err(format!(
                "unknown graph family `{s}` (lattice:D:N, sierpinski:L, regular-tree:B:DEPTH, homogeneous-tree:DEG:DEPTH, path:N)"
            )),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Lattice { d, n } => write!(f, "lattice:{d}:{n}"),
            Family::Sierpinski { level } => write!(f, "sierpinski:{level}"),
            Family::RegularTree { b, depth } => write!(f, "regular-tree:{b}:{depth}"),
            Family::HomogeneousTree { degree, depth } => {
                write!(f, "homogeneous-tree:{degree}:{depth}")
            }
            Family::Path { n } => write!(f, "path:{n}"),
        }
    }
}

/// `--graph FILE` or `--family SPEC`.
#[derive(Debug, Clone, clap::Args)]
#[group(required = true, multiple = false)]
pub struct GraphSource {
    /// Graph in adjacency format.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<Family>,
}

impl GraphSource {
    pub fn load(&self) -> CliResult<Graph> {
        match (&self.graph, &self.family) {
            (Some(path), _) => {
                read_adjacency(&read_file(path)?).context(format!("reading {}", path.display()))
            }
            (None, Some(f)) => f.build(),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}
