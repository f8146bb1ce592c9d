//! The upper-bound side: how much mass an eigenvector of a high-girth regular
//! graph can put on a small set, checked numerically through the localizer
//! quadratic form, plus the combinatorial argument for exactly supported
//! eigenvectors.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{girth, is_closed_trail, Graph};
use crate::spectral::{
    branching, dense_spectrum, localizer_coeffs, localizer_quadratic_form, scale, Eigenpair, SpectralError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalizeError {
    #[error("vector has length {got}, graph has {n} vertices")]
    Length { got: usize, n: usize },
    #[error("vertex {v} is out of range for {n} vertices")]
    Vertex { v: usize, n: usize },
    #[error("k = {k} exceeds the vector length {n}")]
    KTooLarge { k: usize, n: usize },
    #[error("vector norm {0} is not 1")]
    NotUnit(f64),
    #[error("vector is zero")]
    Zero,
    #[error("graph is acyclic; girth is infinite")]
    Acyclic,
    #[error("eigen-equation residual {0:e} is too large")]
    NotEigenvector(f64),
    #[error(
        "vertex {vertex} outside the support sees support mass {sum:e}; the vector is not exactly supported, \
         zero out entries below a support threshold first"
    )]
    NotExactlySupported { vertex: usize, sum: f64 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

pub type Result<T> = std::result::Result<T, LocalizeError>;

const UNIT_TOL: f64 = 1e-9;
const SANDWICH_TOL: f64 = 1e-9;

fn check_unit(v: &[f64]) -> Result<()> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(LocalizeError::NotUnit(norm));
    }
    Ok(())
}

/// `Σ_{x∈S} v_x²` for a unit vector `v`.
pub fn mass_on_set(v: &[f64], s: &[usize]) -> Result<f64> {
    check_unit(v)?;
    s.iter()
        .map(|&x| {
            v.get(x)
                .map(|a| a * a)
                .ok_or(LocalizeError::Vertex { v: x, n: v.len() })
        })
        .sum()
}

/// The `k` entries of largest magnitude, in decreasing order of `|v_x|`
/// (ties by index).
pub fn greedy_top_k(v: &[f64], k: usize) -> Result<Vec<usize>> {
    if k > v.len() {
        return Err(LocalizeError::KTooLarge { k, n: v.len() });
    }
    check_unit(v)?;
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[b].abs().total_cmp(&v[a].abs()).then(a.cmp(&b)));
    idx.truncate(k);
    Ok(idx)
}

/// `ln` of the lower bound `d^{εg/4} ε / (2d²)`.
pub fn deloc_bound_ln(d: usize, g: usize, epsilon: f64) -> f64 {
    let ln_d = (d as f64).ln();
    (epsilon * g as f64 / 4.0 - 2.0) * ln_d + epsilon.ln() - 2f64.ln()
}

/// Smallest set size compatible with mass `ε` at girth `g`:
/// `d^{εg/4} ε / (2d²)`.
pub fn deloc_bound(d: usize, g: usize, epsilon: f64) -> f64 {
    if epsilon <= 0.0 {
        return 0.0;
    }
    deloc_bound_ln(d, g, epsilon).exp()
}

/// Girth ceiling implied by a set of size `k` carrying mass `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GirthCeiling {
    /// `4 log_d(k/ε) / ε`.
    pub main: f64,
    /// `4 log_d(2d²) / ε`.
    pub constant: f64,
    pub total: f64,
}

pub fn contrapositive_girth_bound(d: usize, k: usize, epsilon: f64) -> GirthCeiling {
    let ln_d = (d as f64).ln();
    let main = 4.0 * (k as f64 / epsilon).ln() / ln_d / epsilon;
    let constant = 4.0 * (2.0 * (d * d) as f64).ln() / ln_d / epsilon;
    GirthCeiling {
        main,
        constant,
        total: main + constant,
    }
}

/// Localizer parameters for mass `ε` at girth `g`: `m = ⌈4/ε⌉ + 4` and the
/// even one of `⌈g/2m⌉ − 1`, `⌈g/2m⌉ − 2` when it is at least 2.
pub fn localizer_params(epsilon: f64, g: usize) -> (Option<usize>, Option<usize>) {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return (None, None);
    }
    let m = (4.0 / epsilon - 1e-12).ceil() + 4.0;
    if m > (g as f64) {
        return ((m < 1e15).then_some(m as usize), None);
    }
    let m = m as usize;
    let q = g.div_ceil(2 * m);
    let r = [q.checked_sub(1), q.checked_sub(2)]
        .into_iter()
        .flatten()
        .find(|r| r % 2 == 0)
        .filter(|&r| r >= 2);
    (Some(m), r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalizationReport {
    pub lambda: f64,
    pub epsilon: f64,
    pub set_size: usize,
    pub girth: usize,
    pub bound: f64,
    pub pass: bool,
    pub m: Option<usize>,
    pub r: Option<usize>,
    /// `⟨v1_S, K v1_S⟩` with `K = f(A/(2√d))`.
    pub quad_form: Option<f64>,
    /// `ε²`.
    pub lower_witness: f64,
    /// `2d^{2−εg/4}|S|ε`.
    pub upper_witness: Option<f64>,
    /// `2(d−1)/d^{r/2} · |S|ε`, the bound on the localizer itself.
    pub norm_witness: Option<f64>,
    pub lower_ok: Option<bool>,
    pub upper_ok: Option<bool>,
    pub flag: Option<String>,
}

impl LocalizationReport {
    /// Both sides of the sandwich, when evaluated.
    pub fn sandwich_ok(&self) -> Option<bool> {
        Some(self.lower_ok? && self.upper_ok?)
    }
}

/// Checks `|S| ≥ d^{εg/4}ε/(2d²)` for the measured `ε` and, when the girth
/// allows a localizer, the quadratic-form sandwich. `girth` is computed when
/// not supplied.
pub fn verify_delocalization(
    g: &Graph,
    pair: &Eigenpair,
    s: &[usize],
    girth_hint: Option<usize>,
) -> Result<LocalizationReport> {
    let n = g.vertex_count();
    if pair.vector.len() != n {
        return Err(LocalizeError::Length {
            got: pair.vector.len(),
            n,
        });
    }
    let d = branching(g)?;
    let residual = pair.residual(g);
    if residual > 1e-8 * pair.lambda.abs().max(1.0) {
        return Err(LocalizeError::NotEigenvector(residual));
    }
    let gir = match girth_hint {
        Some(x) => x,
        None => girth(g).ok_or(LocalizeError::Acyclic)?,
    };
    let epsilon = mass_on_set(&pair.vector, s)?;
    let set_size = s.len();
    let bound = deloc_bound(d, gir, epsilon);
    let mut report = LocalizationReport {
        lambda: pair.lambda,
        epsilon,
        set_size,
        girth: gir,
        bound,
        pass: set_size as f64 >= bound,
        m: None,
        r: None,
        quad_form: None,
        lower_witness: epsilon * epsilon,
        upper_witness: None,
        norm_witness: None,
        lower_ok: None,
        upper_ok: None,
        flag: None,
    };
    let (m, r) = localizer_params(epsilon, gir);
    report.m = m;
    let (Some(m), Some(r)) = (m, r) else {
        report.flag = Some(if epsilon > 0.0 {
            "girth too small for this ε".to_string()
        } else {
            "no mass on S".to_string()
        });
        return Ok(report);
    };
    report.r = Some(r);
    let f = localizer_coeffs(pair.lambda / scale(d), m, r, d)?;
    let mut x = vec![0.0; n];
    for &v in s {
        x[v] = pair.vector[v];
    }
    let q = localizer_quadratic_form(g, &f, &x, Some(gir))?;
    let upper = 2.0 * (((2.0 - epsilon * gir as f64 / 4.0) * (d as f64).ln()).exp()) * set_size as f64 * epsilon;
    report.quad_form = Some(q);
    report.upper_witness = Some(upper);
    report.norm_witness = Some(f.norm_bound() * set_size as f64 * epsilon);
    report.lower_ok = Some(report.lower_witness - SANDWICH_TOL <= q);
    report.upper_ok = Some(q <= upper + SANDWICH_TOL);
    Ok(report)
}

/// Edge of the support multigraph: `a–b` directly or through an exterior
/// vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct SupportEdge {
    a: usize,
    b: usize,
    via: Option<usize>,
}

/// Multigraph on the support in which every path `t s t'` through an
/// exterior vertex `s` becomes an edge `t t'`. Kept private; parallel edges
/// and their identities matter here.
struct SupportMultigraph {
    vertices: Vec<usize>,
    edges: Vec<SupportEdge>,
    incident: Vec<Vec<usize>>,
}

impl SupportMultigraph {
    fn other(&self, e: usize, x: usize) -> usize {
        let edge = self.edges[e];
        if edge.a == x {
            edge.b
        } else {
            edge.a
        }
    }

    /// Shortest closed walk found from `root`: `(length, edge ids)`.
    fn cycle_from(&self, root: usize, limit: usize, dist: &mut [usize], parent: &mut [usize]) -> Option<(usize, Vec<usize>)> {
        let mut touched = vec![root];
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        let mut best: Option<(usize, usize, usize, usize)> = None;
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|(len, ..)| 2 * dist[u] + 1 >= len) || 2 * dist[u] + 1 > limit {
                break;
            }
            for &e in &self.incident[u] {
                if e == parent[u] {
                    continue;
                }
                let w = self.other(e, u);
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = e;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    let len = dist[u] + dist[w] + 1;
                    if best.is_none_or(|(b, ..)| len < b) {
                        best = Some((len, u, w, e));
                    }
                }
            }
        }
        let out = best.map(|(len, u, w, e)| {
            let mut left = Vec::new();
            let mut x = u;
            while parent[x] != usize::MAX {
                left.push(parent[x]);
                x = self.other(parent[x], x);
            }
            left.reverse();
            left.push(e);
            let mut x = w;
            while parent[x] != usize::MAX {
                left.push(parent[x]);
                x = self.other(parent[x], x);
            }
            (len, left)
        });
        for v in touched {
            dist[v] = usize::MAX;
            parent[v] = usize::MAX;
        }
        out
    }

    /// Vertices of `G` along the closed walk `root, e_0, e_1, ...`.
    fn lift(&self, root: usize, edges: &[usize]) -> Vec<usize> {
        let mut walk = Vec::with_capacity(2 * edges.len());
        let mut x = root;
        for &e in edges {
            walk.push(self.vertices[x]);
            if let Some(s) = self.edges[e].via {
                walk.push(s);
            }
            x = self.other(e, x);
        }
        walk
    }
}

/// Removes backtracking (`a b a`), cyclically, then cuts out the first simple
/// cycle. Empty when the walk is tree-like.
pub fn simple_cycle_in_walk(walk: &[usize]) -> Vec<usize> {
    let mut stack: Vec<usize> = Vec::with_capacity(walk.len());
    for &x in walk {
        if stack.len() >= 2 && stack[stack.len() - 2] == x {
            stack.pop();
        } else if stack.last() != Some(&x) {
            stack.push(x);
        }
    }
    // Cyclic reduction at the seam.
    let mut lo = 0;
    let mut hi = stack.len();
    loop {
        while hi - lo >= 2 && stack[lo] == stack[hi - 1] {
            hi -= 1;
        }
        if hi - lo >= 3 && stack[lo + 1] == stack[hi - 1] {
            lo += 1;
            hi -= 1;
            continue;
        }
        break;
    }
    let reduced = &stack[lo..hi];
    if reduced.len() < 3 {
        return Vec::new();
    }
    let mut last_seen = std::collections::HashMap::new();
    for (j, &x) in reduced.iter().enumerate() {
        if let Some(i) = last_seen.insert(x, j) {
            return reduced[i..j].to_vec();
        }
    }
    reduced.to_vec()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupportGirthReport {
    pub support_size: usize,
    /// True when the support is everything and the argument says nothing.
    pub vacuous: bool,
    pub lambda: f64,
    /// Exterior vertices adjacent to the support.
    pub exterior: usize,
    /// Largest `|Σ_{t∈H} A(s,t) v_t|` over exterior `s`, relative to `‖v‖∞`.
    pub exterior_residual: f64,
    /// Every exterior vertex sees support values of both signs.
    pub opposite_signs: bool,
    pub multigraph_edges: usize,
    pub min_degree: usize,
    pub multigraph_girth: Option<usize>,
    /// `2 log_d k + 2`.
    pub multigraph_bound: f64,
    /// A cycle of `G`, listed without repeating the first vertex.
    pub cycle: Vec<usize>,
    pub cycle_len: Option<usize>,
    /// `4 log_d k + 4`.
    pub bound: f64,
    pub within_bound: bool,
    pub is_trail: bool,
}

/// Relative size below which an entry counts as zero.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// For an eigenvector vanishing outside its support `H`, builds the support
/// multigraph, certifies minimum degree `d+1`, finds its shortest cycle and
/// lifts it to a cycle of `G` of length at most `4 log_d |H| + 4`.
pub fn support_girth_bound(g: &Graph, v: &[f64]) -> Result<SupportGirthReport> {
    let n = g.vertex_count();
    if v.len() != n {
        return Err(LocalizeError::Length { got: v.len(), n });
    }
    let d = branching(g)?;
    let vmax = v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if vmax == 0.0 {
        return Err(LocalizeError::Zero);
    }
    let cut = SUPPORT_THRESHOLD * vmax;
    let w: Vec<f64> = v.iter().map(|&x| if x.abs() <= cut { 0.0 } else { x }).collect();
    let mut av = vec![0.0; n];
    g.apply_adjacency(&w, &mut av);
    let norm2: f64 = w.iter().map(|x| x * x).sum();
    let lambda = w.iter().zip(&av).map(|(a, b)| a * b).sum::<f64>() / norm2;
    let residual = av.iter().zip(&w).map(|(a, x)| (a - lambda * x).abs()).fold(0.0, f64::max) / vmax;

    let mut index = vec![usize::MAX; n];
    let mut vertices = Vec::new();
    for x in 0..n {
        if w[x] != 0.0 {
            index[x] = vertices.len();
            vertices.push(x);
        }
    }
    let k = vertices.len();
    let ln_d = (d as f64).ln();
    let mut report = SupportGirthReport {
        support_size: k,
        vacuous: k == n,
        lambda,
        exterior: 0,
        exterior_residual: 0.0,
        opposite_signs: true,
        multigraph_edges: 0,
        min_degree: 0,
        multigraph_girth: None,
        multigraph_bound: 2.0 * (k as f64).ln() / ln_d + 2.0,
        cycle: Vec::new(),
        cycle_len: None,
        bound: 4.0 * (k as f64).ln() / ln_d + 4.0,
        within_bound: false,
        is_trail: false,
    };
    if report.vacuous {
        return Ok(report);
    }

    let mut edges = Vec::new();
    for (i, &t) in vertices.iter().enumerate() {
        for u in g.neighbors(t) {
            let j = index[u];
            if j != usize::MAX && i < j {
                edges.push(SupportEdge { a: i, b: j, via: None });
            }
        }
    }
    for s in (0..n).filter(|&s| index[s] == usize::MAX) {
        let inside: Vec<usize> = g.neighbors(s).filter(|&u| index[u] != usize::MAX).collect();
        if inside.is_empty() {
            continue;
        }
        report.exterior += 1;
        let sum: f64 = inside.iter().map(|&u| w[u]).sum();
        report.exterior_residual = report.exterior_residual.max(sum.abs() / vmax);
        if sum.abs() > 1e-9 * vmax || inside.len() < 2 {
            return Err(LocalizeError::NotExactlySupported { vertex: s, sum });
        }
        let pos = inside.iter().any(|&u| w[u] > 0.0);
        let neg = inside.iter().any(|&u| w[u] < 0.0);
        report.opposite_signs &= pos && neg;
        for pair in inside.chunks(2) {
            let b = if pair.len() == 2 { pair[1] } else { inside[0] };
            edges.push(SupportEdge {
                a: index[pair[0]],
                b: index[b],
                via: Some(s),
            });
        }
    }
    if residual > 1e-8 {
        return Err(LocalizeError::NotEigenvector(residual));
    }
    let mut incident = vec![Vec::new(); k];
    for (e, edge) in edges.iter().enumerate() {
        incident[edge.a].push(e);
        incident[edge.b].push(e);
    }
    report.multigraph_edges = edges.len();
    report.min_degree = incident.iter().map(Vec::len).min().unwrap_or(0);
    if report.min_degree < d + 1 {
        return Err(LocalizeError::Invariant(format!(
            "support multigraph has minimum degree {} < {}",
            report.min_degree,
            d + 1
        )));
    }
    let h = SupportMultigraph {
        vertices,
        edges,
        incident,
    };

    let mut dist = vec![usize::MAX; k];
    let mut parent = vec![usize::MAX; k];
    let mut found: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut limit = usize::MAX;
    for root in 0..k {
        if let Some((len, path)) = h.cycle_from(root, limit, &mut dist, &mut parent) {
            limit = limit.min(len + 2);
            found.push((len, root, path));
        }
    }
    found.sort_by_key(|(len, root, _)| (*len, *root));
    report.multigraph_girth = found.first().map(|f| f.0);
    for (_, root, path) in &found {
        let cycle = simple_cycle_in_walk(&h.lift(*root, path));
        if cycle.is_empty() {
            continue;
        }
        report.is_trail = is_closed_trail(g, &cycle);
        report.cycle_len = Some(cycle.len());
        report.within_bound = cycle.len() as f64 <= report.bound + 1e-9;
        report.cycle = cycle;
        break;
    }
    Ok(report)
}

/// Largest entry magnitudes over a dense eigenbasis, with the comparison
/// curve `√(log_d log_d n / log_d n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinfProfile {
    pub n: usize,
    pub d: usize,
    /// `(λ, ‖v‖∞)` per eigenvector, ascending in `λ`.
    pub entries: Vec<(f64, f64)>,
    pub max_linf: f64,
    pub curve: Option<f64>,
}

pub fn linf_profile(g: &Graph, cap: usize) -> Result<LinfProfile> {
    let d = branching(g)?;
    let pairs = dense_spectrum(g, cap)?;
    let entries: Vec<(f64, f64)> = pairs
        .iter()
        .map(|p| (p.lambda, p.vector.iter().fold(0.0f64, |a, x| a.max(x.abs()))))
        .collect();
    let max_linf = entries.iter().map(|e| e.1).fold(0.0, f64::max);
    Ok(LinfProfile {
        n: g.vertex_count(),
        d,
        entries,
        max_linf,
        curve: linf_curve(d, g.vertex_count()),
    })
}

/// `√(log_d log_d n / log_d n)`, defined for `d ≥ 2` once `log_d n > 1`.
pub fn linf_curve(d: usize, n: usize) -> Option<f64> {
    if d < 2 {
        return None;
    }
    let ln_d = (d as f64).ln();
    let l = (n as f64).ln() / ln_d;
    (l > 1.0).then(|| ((l.ln() / ln_d) / l).sqrt())
}
