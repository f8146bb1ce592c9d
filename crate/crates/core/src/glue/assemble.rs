use serde::Serialize;

use super::gadget::{make_gadget, moore_bound, Gadget, GadgetConfig, GadgetSpec};
use super::state::{GlueState, RepairConfig, Separation};
use super::{GlueError, Result};
use crate::graph::{girth, Graph};
use crate::seed::{derive_seed, rng_for};
use crate::spectral::{eigenvector_entropy, Eigenpair};
use crate::tree::{find_symmetric_eigenvalues, symmetric_eigenvector, tree_edges, SymmetricEigenpair, TreeSpec};

/// Which symmetric eigenvalue of the tree to plant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum LambdaSelector {
    /// The eigenvalue closest to this value (the smaller one on ties).
    Nearest(f64),
    /// Position in ascending order.
    Index(usize),
}

/// Girth demanded of each gadget's regular graph before surgery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GadgetGirth {
    /// `max(4, ⌈L'/2⌉ + 1)` with `L' = 2c·log_d n`, so that after surgery
    /// gadgets never undercut the girth the gluing promises.
    Guaranteed,
    /// One more than the measured girth of the contracted double tree.
    MatchGlue,
    Fixed(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GadgetMode {
    /// One gadget design, copied onto every marked vertex.
    Shared,
    /// An independently generated gadget for every marked vertex.
    PerVertex,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AssembleParams {
    pub d: usize,
    pub epsilon: f64,
    pub k: usize,
    pub lambda: LambdaSelector,
    /// Threshold constant: `L = ⌊2c·log_d n⌋` unless `cycle_len` is given.
    pub c: f64,
    pub cycle_len: Option<usize>,
    pub separation: Separation,
    pub repair: RepairConfig,
    pub gadget_girth: GadgetGirth,
    pub gadget_mode: GadgetMode,
    pub gadget_size: Option<usize>,
    pub gadget: GadgetConfig,
}

impl AssembleParams {
    pub fn new(d: usize, epsilon: f64, k: usize) -> Self {
        Self {
            d,
            epsilon,
            k,
            lambda: LambdaSelector::Nearest(0.0),
            c: 0.25,
            cycle_len: None,
            separation: Separation::Minimal,
            repair: RepairConfig::default(),
            gadget_girth: GadgetGirth::Guaranteed,
            gadget_mode: GadgetMode::Shared,
            gadget_size: None,
            gadget: GadgetConfig::default(),
        }
    }

    /// Largest `t` with `(d+1) d^{t−1} ≤ k`.
    pub fn levels_t(&self) -> usize {
        let mut t = 0;
        let mut size = self.d + 1;
        while size <= self.k {
            t += 1;
            size = size.saturating_mul(self.d);
        }
        t
    }

    /// Depth of the trees carrying the eigenvector, `D − 1 = ⌈t/ε⌉`.
    pub fn eigen_depth(&self) -> usize {
        ((self.levels_t() as f64 / self.epsilon) - 1e-9).ceil() as usize
    }
}

/// Vertex layout of an assembled graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Layout {
    /// Vertices per tree (levels `0..D−1`); tree one is `0..n_t`, tree two
    /// `n_t..2n_t`.
    pub tree_vertices: usize,
    pub marked_start: usize,
    pub n_leaves: usize,
    pub gadget_start: usize,
    /// Vertices each gadget adds besides the merged one.
    pub gadget_interior: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GadgetSummary {
    pub mode: GadgetMode,
    pub size: usize,
    pub girth_target: usize,
    pub regular_girth: Option<usize>,
    pub girth: Option<usize>,
    pub copies: usize,
    pub switches: usize,
}

/// Summary of one construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub d: usize,
    pub epsilon: f64,
    pub k: usize,
    pub t: usize,
    #[serde(rename = "D")]
    pub depth: usize,
    pub lambda: f64,
    pub lambda_index: usize,
    pub theta: f64,
    pub sin4_theta: f64,
    #[serde(rename = "mass_on_S")]
    pub mass_on_s: f64,
    pub set_size: usize,
    pub girth: Option<usize>,
    #[serde(rename = "L")]
    pub cycle_len: usize,
    pub threshold: f64,
    pub glue_girth: Option<usize>,
    pub guaranteed_girth: usize,
    pub switches_used: usize,
    pub restarts: usize,
    pub initial_short_cycles: usize,
    pub min_eligible: Option<usize>,
    pub seed: u64,
    pub n: usize,
    pub n_leaves: usize,
    pub residual: f64,
    pub entropy: f64,
    pub gadget: GadgetSummary,
}

/// Output of [`assemble`].
#[derive(Clone, Debug)]
pub struct Construction {
    pub graph: Graph,
    pub eigenpair: Eigenpair,
    pub set_s: Vec<usize>,
    pub tree_pair: SymmetricEigenpair,
    pub layout: Layout,
    pub report: ConstructionReport,
}

fn gadget_for(
    degree: usize,
    target: usize,
    size: Option<usize>,
    cfg: &GadgetConfig,
    seed: u64,
    label: &str,
) -> Result<Gadget> {
    if let Some(size) = size {
        let spec = GadgetSpec {
            degree,
            size,
            girth_target: target,
        };
        return make_gadget(&spec, cfg, &mut rng_for(seed, label));
    }
    let mut size = moore_bound(degree, target).max(degree + 2);
    let mut last = GlueError::GadgetBudget { target };
    for round in 0..12 {
        if (size * degree) % 2 == 1 {
            size += 1;
        }
        let spec = GadgetSpec {
            degree,
            size,
            girth_target: target,
        };
        match make_gadget(&spec, cfg, &mut rng_for(seed, &format!("{label}/{round}"))) {
            Ok(g) => return Ok(g),
            Err(e @ (GlueError::GadgetBudget { .. } | GlueError::GadgetSpec(_))) => last = e,
            Err(e) => return Err(e),
        }
        size = size * 3 / 2 + 2;
    }
    Err(last)
}

/// Builds the graph of the lower-bound construction together with its
/// planted eigenvector and the set `S` of the top `t` levels of both trees.
pub fn assemble(params: &AssembleParams, seed: u64) -> Result<Construction> {
    let AssembleParams { d, epsilon, k, .. } = *params;
    if d < 2 {
        return Err(GlueError::Params(format!("d = {d} must be at least 2")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(GlueError::Params(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    let t = params.levels_t();
    if t < 2 {
        return Err(GlueError::Params(format!("k = {k} gives t = {t}; need (d+1)d ≤ k")));
    }
    let eigen_depth = params.eigen_depth();
    let depth = eigen_depth + 1;

    let tree_spec = TreeSpec::new(d, eigen_depth).map_err(|e| GlueError::at("tree")(e.into()))?;
    let candidates = find_symmetric_eigenvalues(&tree_spec, None, None).map_err(|e| GlueError::at("tree")(e.into()))?;
    let lambda_index = match params.lambda {
        LambdaSelector::Index(i) if i < candidates.len() => i,
        LambdaSelector::Index(i) => {
            return Err(GlueError::Params(format!(
                "eigenvalue index {i} out of range ({} symmetric eigenvalues)",
                candidates.len()
            )))
        }
        LambdaSelector::Nearest(x) => (0..candidates.len())
            .min_by(|&a, &b| (candidates[a] - x).abs().total_cmp(&(candidates[b] - x).abs()))
            .ok_or_else(|| GlueError::Params("tree has no symmetric eigenvalue".into()))?,
    };
    let lambda = candidates[lambda_index];
    let tree_pair = symmetric_eigenvector(&tree_spec, lambda).map_err(|e| GlueError::at("tree")(e.into()))?;

    // Gluing and repair.
    let marked = TreeSpec::new(d, depth).map_err(|e| GlueError::at("glue")(e.into()))?;
    let n_leaves = marked.level_size(depth);
    let threshold = 2.0 * params.c * (n_leaves as f64).ln() / (d as f64).ln();
    let cycle_len = params.cycle_len.unwrap_or((threshold + 1e-9).floor() as usize);
    let mut glue_rng = rng_for(seed, "glue");
    let mut state = GlueState::new(d, depth, cycle_len, params.c, params.separation, &mut glue_rng)
        .map_err(GlueError::at("glue"))?;
    let repair = state
        .repair_girth(&params.repair, &mut glue_rng)
        .map_err(GlueError::at("repair"))?;
    let glue_girth = girth(&state.contracted().map_err(GlueError::at("contract"))?.graph);

    // Gadgets.
    let degree = d + 1;
    let target = match params.gadget_girth {
        GadgetGirth::Guaranteed => ((threshold / 2.0 - 1e-9).ceil() as usize + 1).max(4),
        GadgetGirth::MatchGlue => glue_girth.map_or(4, |g| g + 1).max(4),
        GadgetGirth::Fixed(g) => g,
    };
    let gadget_seed = derive_seed(seed, "gadget");
    let gadgets: Vec<Gadget> = match params.gadget_mode {
        GadgetMode::Shared => vec![gadget_for(degree, target, params.gadget_size, &params.gadget, gadget_seed, "shared")
            .map_err(GlueError::at("gadget"))?],
        GadgetMode::PerVertex => (0..n_leaves)
            .map(|i| gadget_for(degree, target, params.gadget_size, &params.gadget, gadget_seed, &format!("vertex/{i}")))
            .collect::<Result<_>>()
            .map_err(GlueError::at("gadget"))?,
    };
    let interior = gadgets[0].graph.vertex_count() - 1;
    if gadgets.iter().any(|g| g.graph.vertex_count() - 1 != interior) {
        return Err(GlueError::Invariant("gadgets of different sizes".into()));
    }

    // Final vertex layout and edges.
    let n_t = marked.level_start(depth);
    let marked_start = 2 * n_t;
    let gadget_start = marked_start + n_leaves;
    let n = gadget_start + n_leaves * interior;
    let layout = Layout {
        tree_vertices: n_t,
        marked_start,
        n_leaves,
        gadget_start,
        gadget_interior: interior,
    };
    let inner = tree_edges(&tree_spec);
    let leaf_start = marked.level_start(depth);
    let up_start = marked.level_start(depth - 1);
    let mut edges = Vec::with_capacity(n * degree / 2);
    for &(u, v) in &inner {
        edges.push((u, v));
        edges.push((n_t + u, n_t + v));
    }
    let mut marked_degree = vec![0u8; n_leaves];
    for pos in 0..n_leaves {
        let parent = up_start + pos / d;
        edges.push((parent, marked_start + pos));
        marked_degree[pos] += 1;
        let i = state.inverse(pos);
        edges.push((n_t + parent, marked_start + i));
        marked_degree[i] += 1;
    }
    debug_assert_eq!(leaf_start - up_start, marked.level_size(depth - 1));
    if let Some(i) = marked_degree.iter().position(|&k| k != 2) {
        return Err(GlueError::at("audit")(GlueError::Invariant(format!(
            "marked vertex {i} has degree {} before gadget attachment",
            marked_degree[i]
        ))));
    }
    for i in 0..n_leaves {
        let gadget = &gadgets[if gadgets.len() == 1 { 0 } else { i }];
        let dist = gadget.distinguished;
        let base = gadget_start + i * interior;
        let map = |x: usize| match x.cmp(&dist) {
            std::cmp::Ordering::Equal => marked_start + i,
            std::cmp::Ordering::Less => base + x,
            std::cmp::Ordering::Greater => base + x - 1,
        };
        for (a, b) in gadget.graph.edges() {
            let (p, q) = (map(a), map(b));
            edges.push((p.min(q), p.max(q)));
        }
    }
    let graph = Graph::from_edges(n, &edges).map_err(|e| GlueError::at("assemble")(e.into()))?;
    if graph.declared_degree() != Some(degree) {
        let bad = (0..n).find(|&v| graph.degree(v) != degree).unwrap_or(0);
        return Err(GlueError::at("audit")(GlueError::Invariant(format!(
            "vertex {bad} has degree {} in the assembled graph",
            graph.degree(bad)
        ))));
    }

    // Planted vector: f on tree one, −f on tree two, zero elsewhere.
    let mut nu = vec![0.0; n];
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for level in 0..=eigen_depth {
        let value = tree_pair.level_values[level] * half;
        for v in tree_spec.level_start(level)..tree_spec.level_start(level + 1) {
            nu[v] = value;
            nu[n_t + v] = -value;
        }
    }
    let eigenpair = Eigenpair { lambda, vector: nu };
    let residual = eigenpair.residual(&graph);
    if residual > 1e-10 {
        return Err(GlueError::at("planted")(GlueError::Invariant(format!(
            "planted residual {residual:e} exceeds 1e-10"
        ))));
    }
    let top = tree_spec.top_count(t);
    let set_s: Vec<usize> = (0..top).chain(n_t..n_t + top).collect();
    let mass_on_s: f64 = set_s.iter().map(|&v| eigenpair.vector[v].powi(2)).sum();
    let theta = tree_pair.theta;
    let final_girth = girth(&graph);
    let entropy = eigenvector_entropy(&eigenpair.vector, d as f64).map_err(|e| GlueError::Invariant(e.to_string()))?;
    let gadget_girth = gadgets.iter().map(|g| g.girth.unwrap_or(usize::MAX)).min().unwrap_or(usize::MAX);
    let report = ConstructionReport {
        d,
        epsilon,
        k,
        t,
        depth,
        lambda,
        lambda_index,
        theta,
        sin4_theta: theta.sin().powi(4),
        mass_on_s,
        set_size: set_s.len(),
        girth: final_girth,
        cycle_len,
        threshold,
        glue_girth,
        guaranteed_girth: cycle_len.div_ceil(2).min(gadget_girth),
        switches_used: repair.switches_used,
        restarts: repair.restarts,
        initial_short_cycles: repair.initial_inventory,
        min_eligible: repair.records.iter().map(|r| r.eligible).min(),
        seed,
        n,
        n_leaves,
        residual,
        entropy,
        gadget: GadgetSummary {
            mode: params.gadget_mode,
            size: interior + 1,
            girth_target: target,
            regular_girth: gadgets.iter().filter_map(|g| g.regular_girth).min(),
            girth: gadgets.iter().filter_map(|g| g.girth).min(),
            copies: n_leaves,
            switches: gadgets.iter().map(|g| g.stats.switches).sum(),
        },
    };
    Ok(Construction {
        graph,
        eigenpair,
        set_s,
        tree_pair,
        layout,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_arithmetic() {
        let p = AssembleParams::new(2, 0.5, 24);
        assert_eq!(p.levels_t(), 4);
        assert_eq!(p.eigen_depth(), 8);
        let p = AssembleParams::new(2, 1.0 / 3.0, 24);
        assert_eq!(p.eigen_depth(), 12);
        assert_eq!(AssembleParams::new(2, 0.5, 5).levels_t(), 1);
    }

    #[test]
    fn small_instance_is_regular_with_exact_eigenvector() {
        let p = AssembleParams::new(2, 0.5, 6);
        let c = assemble(&p, 42).unwrap();
        assert_eq!(c.graph.declared_degree(), Some(3));
        assert!(c.report.residual <= 1e-10);
        assert_eq!(c.report.t, 2);
        assert_eq!(c.set_s.len(), 2 * 4);
        let again = assemble(&p, 42).unwrap();
        assert_eq!(again.graph, c.graph);
        assert_eq!(again.report, c.report);
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(assemble(&AssembleParams::new(1, 0.5, 24), 0), Err(GlueError::Params(_))));
        assert!(matches!(assemble(&AssembleParams::new(2, 1.0, 24), 0), Err(GlueError::Params(_))));
        assert!(matches!(assemble(&AssembleParams::new(2, 0.5, 5), 0), Err(GlueError::Params(_))));
    }
}
