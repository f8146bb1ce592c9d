//! Complete `d`-ary trees and their level-constant ("symmetric") eigenvectors.
//!
//! A symmetric eigenvector is determined by its root value `x_0` through
//! `λ x_0 = (d+1) x_1` and `λ x_i = x_{i−1} + d x_{i+1}`; the leaves close the
//! system with `λ x_D = x_{D−1}`. Level masses `m_i = √|S_i| x_i` obey
//! `m_{i+1} = (λ/√d) m_i − m_{i−1}` from `i = 2` on, a rotation in disguise
//! once written with `λ = 2√d cos θ`.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Trees larger than this many vertices are refused.
pub const DEFAULT_TREE_CAP: usize = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeError {
    #[error("branching d = {0} must be at least 2")]
    BadBranching(usize),
    #[error("depth must be at least 1")]
    BadDepth,
    #[error("tree with d = {d}, depth {depth} exceeds the size cap {cap}")]
    TooLarge { d: usize, depth: usize, cap: usize },
    #[error("interval [{a}, {b}] is not inside (−2√d, 2√d)")]
    BadInterval { a: f64, b: f64 },
    #[error("{lambda} is not a symmetric eigenvalue (leaf residual {residual:e})")]
    NotSymmetricEigenvalue { lambda: f64, residual: f64 },
    #[error("{t} levels requested from a tree with {levels} levels")]
    BadLevelCount { t: usize, levels: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

pub type Result<T> = std::result::Result<T, TreeError>;

/// Shape of a complete tree: root with `d+1` children, every other internal
/// vertex with `d`, leaves at depth `depth`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TreeSpec {
    pub d: usize,
    pub depth: usize,
}

impl TreeSpec {
    pub fn new(d: usize, depth: usize) -> Result<Self> {
        if d < 2 {
            return Err(TreeError::BadBranching(d));
        }
        if depth < 1 {
            return Err(TreeError::BadDepth);
        }
        let spec = Self { d, depth };
        let mut total: usize = 1;
        let mut level: usize = 1;
        for i in 1..=depth {
            level = if i == 1 { d + 1 } else { level.saturating_mul(d) };
            total = total.saturating_add(level);
        }
        if total > DEFAULT_TREE_CAP {
            return Err(TreeError::TooLarge {
                d,
                depth,
                cap: DEFAULT_TREE_CAP,
            });
        }
        Ok(spec)
    }

    pub fn level_size(&self, i: usize) -> usize {
        if i == 0 {
            1
        } else {
            (self.d + 1) * self.d.pow(i as u32 - 1)
        }
    }

    pub fn level_sizes(&self) -> Vec<usize> {
        (0..=self.depth).map(|i| self.level_size(i)).collect()
    }

    /// First vertex id of level `i`; levels are numbered contiguously.
    pub fn level_start(&self, i: usize) -> usize {
        (0..i).map(|j| self.level_size(j)).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.level_start(self.depth + 1)
    }

    /// Size of the top `t` levels, `1 + (d+1)(d^{t−1} − 1)/(d − 1)`.
    pub fn top_count(&self, t: usize) -> usize {
        self.level_start(t)
    }

    /// The spectral edge `2√d`.
    pub fn edge(&self) -> f64 {
        2.0 * (self.d as f64).sqrt()
    }

    /// `θ` with `λ = 2√d cos θ`, defined on the tempered range only.
    pub fn theta_of(&self, lambda: f64) -> Option<f64> {
        let c = lambda / self.edge();
        (-1.0..=1.0).contains(&c).then(|| c.acos())
    }
}

/// A built tree: the graph and the level of each vertex.
#[derive(Clone, Debug)]
pub struct Tree {
    pub spec: TreeSpec,
    pub graph: Graph,
    pub levels: Vec<usize>,
}

impl Tree {
    /// Comment line recorded in tree graph files.
    pub fn levels_comment(&self) -> String {
        let sizes: Vec<String> = self.spec.level_sizes().iter().map(|s| s.to_string()).collect();
        format!("levels d={} D={} sizes={}", self.spec.d, self.spec.depth, sizes.join(","))
    }
}

/// Parent of each non-root vertex in the contiguous level numbering.
pub fn parent(spec: &TreeSpec, v: usize) -> Option<usize> {
    if v == 0 {
        return None;
    }
    if v <= spec.d + 1 {
        return Some(0);
    }
    let mut level = 1;
    while spec.level_start(level + 1) <= v {
        level += 1;
    }
    let pos = v - spec.level_start(level);
    Some(spec.level_start(level - 1) + pos / spec.d)
}

/// Edges `(parent, child)` in child order.
pub fn tree_edges(spec: &TreeSpec) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(spec.vertex_count() - 1);
    for child in 1..=spec.d + 1 {
        edges.push((0, child));
    }
    for level in 2..=spec.depth {
        let start = spec.level_start(level);
        let up = spec.level_start(level - 1);
        for pos in 0..spec.level_size(level) {
            edges.push((up + pos / spec.d, start + pos));
        }
    }
    edges
}

pub fn build_dary_tree(spec: TreeSpec) -> Result<Tree> {
    let spec = TreeSpec::new(spec.d, spec.depth)?;
    let graph = Graph::from_edges(spec.vertex_count(), &tree_edges(&spec))?;
    let mut levels = Vec::with_capacity(spec.vertex_count());
    for i in 0..=spec.depth {
        levels.extend(std::iter::repeat_n(i, spec.level_size(i)));
    }
    Ok(Tree { spec, graph, levels })
}

/// Level values `x_i` (root normalized to 1) and level masses `m_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelProfile {
    pub lambda: f64,
    pub theta: Option<f64>,
    pub x: Vec<f64>,
    pub m: Vec<f64>,
}

/// Propagates the interior recurrence from `x_0 = 1` down to level `D`,
/// ignoring the leaf equation.
pub fn level_recurrence(lambda: f64, spec: &TreeSpec) -> LevelProfile {
    let d = spec.d as f64;
    let mut x = Vec::with_capacity(spec.depth + 1);
    x.push(1.0);
    x.push(lambda / (d + 1.0));
    for i in 1..spec.depth {
        x.push((lambda * x[i] - x[i - 1]) / d);
    }
    let m = x
        .iter()
        .enumerate()
        .map(|(i, xi)| (spec.level_size(i) as f64).sqrt() * xi)
        .collect();
    LevelProfile {
        lambda,
        theta: spec.theta_of(lambda),
        x,
        m,
    }
}

/// Level masses computed directly from the mass recurrence.
///
/// The step from level 1 to level 2 carries the factor `√((d+1)/d)` because
/// `|S_2| / |S_0| = d(d+1)` rather than `d²`; every later step is the plain
/// recurrence `m_{i+1} = (λ/√d) m_i − m_{i−1}`.
pub fn mass_recurrence(lambda: f64, spec: &TreeSpec) -> Vec<f64> {
    let d = spec.d as f64;
    let a = lambda / d.sqrt();
    let mut m = Vec::with_capacity(spec.depth + 1);
    m.push(1.0);
    m.push(lambda / (d + 1.0).sqrt());
    for i in 1..spec.depth {
        let back = if i == 1 { ((d + 1.0) / d).sqrt() } else { 1.0 };
        m.push(a * m[i] - back * m[i - 1]);
    }
    m
}

/// Leaf residual `√|S_D| (λ x_D − x_{D−1})`; its zeros are exactly the
/// symmetric eigenvalues.
pub fn char_residual(lambda: f64, spec: &TreeSpec) -> f64 {
    let p = level_recurrence(lambda, spec);
    let dpt = spec.depth;
    (spec.level_size(dpt) as f64).sqrt() * (lambda * p.x[dpt] - p.x[dpt - 1])
}

/// All symmetric eigenvalues in `interval` (default: the whole open interval
/// `(−2√d, 2√d)`), ascending.
///
/// Roots are bracketed by sign changes on a uniform grid in `θ` with
/// `grid` points (default `16(D+1)`) and refined by bisection in `θ`.
pub fn find_symmetric_eigenvalues(spec: &TreeSpec, interval: Option<(f64, f64)>, grid: Option<usize>) -> Result<Vec<f64>> {
    let edge = spec.edge();
    let (a, b) = interval.unwrap_or((-edge, edge));
    if !(a < b && a >= -edge && b <= edge) || (interval.is_some() && (a <= -edge || b >= edge)) {
        return Err(TreeError::BadInterval { a, b });
    }
    let (lo, hi) = ((b / edge).acos(), (a / edge).acos());
    let points = grid.unwrap_or(16 * (spec.depth + 1)).max(2);
    let f = |theta: f64| char_residual(edge * theta.cos(), spec);
    // For the full interval the endpoints θ = 0, π are excluded.
    let thetas: Vec<f64> = if interval.is_none() {
        (1..=points).map(|j| lo + (hi - lo) * j as f64 / (points + 1) as f64).collect()
    } else {
        (0..points).map(|j| lo + (hi - lo) * j as f64 / (points - 1) as f64).collect()
    };
    let values: Vec<f64> = thetas.iter().map(|&t| f(t)).collect();
    let mut roots = Vec::new();
    for j in 0..thetas.len() {
        if values[j] == 0.0 {
            roots.push(thetas[j]);
            continue;
        }
        if j + 1 < thetas.len() && values[j + 1] != 0.0 && (values[j] < 0.0) != (values[j + 1] < 0.0) {
            roots.push(bisect(&f, thetas[j], thetas[j + 1], values[j]));
        }
    }
    let mut lambdas: Vec<f64> = roots.into_iter().map(|t| edge * t.cos()).collect();
    lambdas.sort_by(f64::total_cmp);
    Ok(lambdas)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// A normalized level-constant eigenvector of the tree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetricEigenpair {
    pub spec: TreeSpec,
    pub lambda: f64,
    pub theta: f64,
    pub profile: LevelProfile,
    /// Value on each level of the unit-norm vector.
    pub level_values: Vec<f64>,
    #[serde(skip)]
    pub vector: Vec<f64>,
}

pub fn symmetric_eigenvector(spec: &TreeSpec, lambda: f64) -> Result<SymmetricEigenpair> {
    let spec = TreeSpec::new(spec.d, spec.depth)?;
    let residual = char_residual(lambda, &spec);
    let theta = spec.theta_of(lambda);
    let (Some(theta), true) = (theta, residual.abs() <= 1e-10) else {
        return Err(TreeError::NotSymmetricEigenvalue { lambda, residual });
    };
    let profile = level_recurrence(lambda, &spec);
    let norm = profile.m.iter().map(|m| m * m).sum::<f64>().sqrt();
    let level_values: Vec<f64> = profile.x.iter().map(|x| x / norm).collect();
    let mut vector = Vec::with_capacity(spec.vertex_count());
    for (i, &value) in level_values.iter().enumerate() {
        vector.extend(std::iter::repeat_n(value, spec.level_size(i)));
    }
    Ok(SymmetricEigenpair {
        spec,
        lambda,
        theta,
        profile,
        level_values,
        vector,
    })
}

/// Fraction of the squared norm on each level.
pub fn mass_profile(pair: &SymmetricEigenpair) -> Vec<f64> {
    let total: f64 = pair.profile.m.iter().map(|m| m * m).sum();
    pair.profile.m.iter().map(|m| m * m / total).collect()
}

/// Vertices of levels `0..t`.
pub fn top_levels_set(spec: &TreeSpec, t: usize) -> Result<Vec<usize>> {
    if t == 0 || t > spec.depth + 1 {
        return Err(TreeError::BadLevelCount {
            t,
            levels: spec.depth + 1,
        });
    }
    Ok((0..spec.top_count(t)).collect())
}

/// Pairs `w_i = (m_i, m_{i−1})` for `i = 1..=D`.
pub fn transfer_pairs(profile: &LevelProfile) -> Vec<[f64; 2]> {
    profile.m.windows(2).map(|w| [w[1], w[0]]).collect()
}

/// `‖P^{-1} w‖` for `P = [[1, 1], [e^{−iθ}, e^{iθ}]]`, which reduces to
/// `√((a² − 2ab cos θ + b²) / 2) / sin θ` for `w = (a, b)`.
pub fn transfer_invariant(theta: f64, w: [f64; 2]) -> f64 {
    let [a, b] = w;
    ((a * a - 2.0 * a * b * theta.cos() + b * b) / 2.0).sqrt() / theta.sin()
}

pub fn euclid(w: [f64; 2]) -> f64 {
    w[0].hypot(w[1])
}

/// Union of symmetric eigenvalues over a range of depths, and its largest gap
/// inside `(−2√d, 2√d)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub d: usize,
    pub min_depth: usize,
    pub max_depth: usize,
    pub eigenvalue_count: usize,
    pub largest_gap: f64,
    pub gap_from: f64,
    pub gap_to: f64,
}

pub fn eigenvalue_density(d: usize, min_depth: usize, max_depth: usize) -> Result<DensityReport> {
    let mut all = Vec::new();
    for depth in min_depth..=max_depth {
        all.extend(find_symmetric_eigenvalues(&TreeSpec::new(d, depth)?, None, None)?);
    }
    all.sort_by(f64::total_cmp);
    let edge = 2.0 * (d as f64).sqrt();
    let mut marks = vec![-edge];
    marks.extend(&all);
    marks.push(edge);
    let (mut gap, mut from, mut to) = (0.0, -edge, edge);
    for w in marks.windows(2) {
        if w[1] - w[0] > gap {
            gap = w[1] - w[0];
            from = w[0];
            to = w[1];
        }
    }
    Ok(DensityReport {
        d,
        min_depth,
        max_depth,
        eigenvalue_count: all.len(),
        largest_gap: gap,
        gap_from: from,
        gap_to: to,
    })
}
