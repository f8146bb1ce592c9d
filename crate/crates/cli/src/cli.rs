//! Command-line surface. Every flag lands in the run [`Settings`] under the
//! flag's long name, overriding the same key from `--config`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::Settings;

#[derive(Debug, Parser)]
#[command(name = "girthlab", version, about = "Girth, Chebyshev localizers and eigenvector delocalization on regular graphs")]
pub struct Cli {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// 64-bit master seed for randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output directory (default: current directory).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GraphArg {
    /// Graph file.
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Girth and a shortest cycle.
    Girth(GraphArg),
    /// Dense adjacency spectrum, written as a vector file.
    Spectrum {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// `‖T_m(A/2√d)‖_{1→∞}` against `(d−1)/(2d^{m/2})`.
    ChebNorm {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Fejér localizer coefficients and a plot of `f` on `[-1, 1]`.
    Localizer {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        /// Peak angle in radians; `pi/3` style fractions of pi are accepted.
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Symmetric eigenvalues of the d-ary tree of depth D.
    TreeSpectrum {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long = "depth")]
        depth: Option<usize>,
        /// Interval as `a,b`.
        #[arg(long)]
        interval: Option<String>,
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Build a high-girth graph carrying a localized eigenvector.
    Construct(ConstructArgs),
    /// Check the delocalization bound for a graph and vector.
    Verify {
        #[command(flatten)]
        graph: GraphArg,
        /// Vector file.
        vector: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// File listing the vertices of `S`.
        #[arg(long)]
        set: Option<PathBuf>,
        #[arg(long)]
        girth: Option<usize>,
    },
    /// Cycle inside the support of an exactly supported eigenvector.
    Support {
        #[command(flatten)]
        graph: GraphArg,
        vector: Option<PathBuf>,
    },
    /// Largest eigenvector entries over a dense eigenbasis.
    Linf {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Grid of constructions over `(d, ε, k, seed)`, as CSV.
    Sweep {
        /// Comma-separated list.
        #[arg(long)]
        d: Option<String>,
        /// Comma-separated list; fractions allowed.
        #[arg(long)]
        epsilon: Option<String>,
        /// Comma-separated list.
        #[arg(long)]
        k: Option<String>,
        /// Seeds per cell.
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
    },
    /// Largest gap in the union of tree eigenvalues over a range of depths.
    Density {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        min_depth: Option<usize>,
        #[arg(long)]
        max_depth: Option<usize>,
    },
    /// Write the corpus as graph files.
    Corpus {
        /// Include members too large for dense oracles.
        #[arg(long)]
        large: bool,
    },
}

#[derive(Debug, Args, Default)]
pub struct ConstructArgs {
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Plant the eigenvalue nearest this value.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Plant the eigenvalue at this ascending position instead.
    #[arg(long)]
    pub lambda_index: Option<usize>,
    #[arg(long)]
    pub c: Option<f64>,
    /// Short-cycle threshold `L`, overriding `c`.
    #[arg(long)]
    pub cycle_len: Option<usize>,
    /// `guaranteed`, `match`, or a number.
    #[arg(long)]
    pub gadget_girth: Option<String>,
    /// `shared` or `per-vertex`.
    #[arg(long)]
    pub gadget_mode: Option<String>,
    #[arg(long)]
    pub gadget_size: Option<usize>,
    /// `minimal` or `double`.
    #[arg(long)]
    pub separation: Option<String>,
}

fn path(p: &Option<PathBuf>) -> Option<String> {
    p.as_ref().map(|p| p.display().to_string())
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Girth(_) => "girth",
            Command::Spectrum { .. } => "spectrum",
            Command::ChebNorm { .. } => "cheb-norm",
            Command::Localizer { .. } => "localizer",
            Command::TreeSpectrum { .. } => "tree-spectrum",
            Command::Construct(_) => "construct",
            Command::Verify { .. } => "verify",
            Command::Support { .. } => "support",
            Command::Linf { .. } => "linf",
            Command::Sweep { .. } => "sweep",
            Command::Density { .. } => "density",
            Command::Corpus { .. } => "corpus",
        }
    }

    /// Whether the command consumes the master seed.
    pub fn is_randomized(&self) -> bool {
        matches!(self, Command::Construct(_) | Command::Sweep { .. })
    }

    pub fn apply(&self, s: &mut Settings) {
        match self {
            Command::Girth(g) => s.set("graph", path(&g.graph)),
            Command::Spectrum { graph, cap } | Command::Linf { graph, cap } => {
                s.set("graph", path(&graph.graph));
                s.set("cap", *cap);
            }
            Command::ChebNorm { graph, m } => {
                s.set("graph", path(&graph.graph));
                s.set("m", *m);
            }
            Command::Localizer { d, m, r, phi, grid } => {
                s.set("d", *d);
                s.set("m", *m);
                s.set("r", *r);
                s.set("phi", phi.clone());
                s.set("grid", *grid);
            }
            Command::TreeSpectrum { d, depth, interval, grid } => {
                s.set("d", *d);
                s.set("depth", *depth);
                s.set("interval", interval.clone());
                s.set("grid", *grid);
            }
            Command::Construct(a) => {
                s.set("d", a.d);
                s.set("epsilon", a.epsilon.clone());
                s.set("k", a.k);
                s.set("lambda", a.lambda);
                s.set("lambda-index", a.lambda_index);
                s.set("c", a.c);
                s.set("cycle-len", a.cycle_len);
                s.set("gadget-girth", a.gadget_girth.clone());
                s.set("gadget-mode", a.gadget_mode.clone());
                s.set("gadget-size", a.gadget_size);
                s.set("separation", a.separation.clone());
            }
            Command::Verify { graph, vector, k, set, girth } => {
                s.set("graph", path(&graph.graph));
                s.set("vector", path(vector));
                s.set("k", *k);
                s.set("set", path(set));
                s.set("girth", *girth);
            }
            Command::Support { graph, vector } => {
                s.set("graph", path(&graph.graph));
                s.set("vector", path(vector));
            }
            Command::Sweep { d, epsilon, k, seeds, c } => {
                s.set("d", d.clone());
                s.set("epsilon", epsilon.clone());
                s.set("k", k.clone());
                s.set("seeds", *seeds);
                s.set("c", *c);
            }
            Command::Density { d, min_depth, max_depth } => {
                s.set("d", *d);
                s.set("min-depth", *min_depth);
                s.set("max-depth", *max_depth);
            }
            Command::Corpus { large } => s.set("large", large.then_some(true)),
        }
    }
}
