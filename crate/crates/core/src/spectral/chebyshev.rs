use rayon::prelude::*;

use super::{Result, SpectralError};
use crate::graph::Graph;

/// Branching parameter `d` of a `(d+1)`-regular graph.
pub fn branching(g: &Graph) -> Result<usize> {
    match g.declared_degree() {
        None => Err(SpectralError::NotRegular),
        Some(k) if k < 2 => Err(SpectralError::DegreeTooSmall(k)),
        Some(k) => Ok(k - 1),
    }
}

/// The normalizing factor `2√d`.
pub fn scale(d: usize) -> f64 {
    2.0 * (d as f64).sqrt()
}

/// `T_m(x)` by the three-term recurrence.
pub fn chebyshev_t(m: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if m == 0 {
        return prev;
    }
    for _ in 1..m {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

/// `U_m(x)`, extended by `U_{-1} = 0` and `U_{-2} = -1`.
pub fn chebyshev_u(m: i64, x: f64) -> f64 {
    match m {
        ..=-3 => panic!("U_m is only extended down to m = -2"),
        -2 => -1.0,
        -1 => 0.0,
        _ => {
            let (mut prev, mut cur) = (0.0, 1.0);
            for _ in 0..m {
                (prev, cur) = (cur, 2.0 * x * cur - prev);
            }
            cur
        }
    }
}

/// A polynomial `Σ_k c_k T_k(x)` stored by its Chebyshev coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebSeries {
    coeffs: Vec<f64>,
}

impl ChebSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// The single term `T_m`.
    pub fn single(m: usize) -> Self {
        let mut coeffs = vec![0.0; m + 1];
        coeffs[m] = 1.0;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    /// Scalar evaluation. Inside `[-1, 1]` each term is `cos(k arccos x)`.
    pub fn eval(&self, x: f64) -> f64 {
        if (-1.0..=1.0).contains(&x) {
            let phi = x.acos();
            self.coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0.0)
                .map(|(k, &c)| c * (k as f64 * phi).cos())
                .sum()
        } else {
            let (mut prev, mut cur) = (1.0, x);
            let mut acc = self.coeffs.first().copied().unwrap_or(0.0);
            for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
                if k > 1 {
                    (prev, cur) = (cur, 2.0 * x * cur - prev);
                }
                acc += c * cur;
            }
            acc
        }
    }
}

fn check_len(g: &Graph, x: &[f64]) -> Result<()> {
    if x.len() != g.vertex_count() {
        return Err(SpectralError::Length {
            got: x.len(),
            n: g.vertex_count(),
        });
    }
    Ok(())
}

/// Runs the recurrence `T_{k+1} = 2 (A/2√d) T_k − T_{k−1}` on `x` and hands
/// each `(k, T_k x)` to `visit`.
fn recur<F: FnMut(usize, &[f64])>(g: &Graph, degree: usize, x: &[f64], mut visit: F) -> Result<()> {
    check_len(g, x)?;
    let d = branching(g)?;
    let step = 2.0 / scale(d);
    let n = x.len();
    let mut prev = x.to_vec();
    visit(0, &prev);
    if degree == 0 {
        return Ok(());
    }
    let mut cur = vec![0.0; n];
    g.apply_adjacency(&prev, &mut cur);
    cur.iter_mut().for_each(|c| *c *= step / 2.0);
    visit(1, &cur);
    let mut next = vec![0.0; n];
    for k in 2..=degree {
        g.apply_adjacency(&cur, &mut next);
        for (y, p) in next.iter_mut().zip(&prev) {
            *y = step * *y - p;
        }
        visit(k, &next);
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    Ok(())
}

/// `T_m(A/(2√d)) x` using only sparse products.
pub fn cheb_apply(g: &Graph, m: usize, x: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    recur(g, m, x, |k, t| {
        if k == m {
            out = t.to_vec();
        }
    })?;
    Ok(out)
}

/// `p(A/(2√d)) x`.
pub fn series_apply(g: &Graph, p: &ChebSeries, x: &[f64]) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; x.len()];
    recur(g, p.degree(), x, |k, t| {
        let c = p.coeffs()[k];
        if c != 0.0 {
            acc.iter_mut().zip(t).for_each(|(a, v)| *a += c * v);
        }
    })?;
    Ok(acc)
}

/// `⟨x, p(A/(2√d)) x⟩`, accumulated term by term during one recurrence pass.
pub fn series_quadratic_form(g: &Graph, p: &ChebSeries, x: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    recur(g, p.degree(), x, |k, t| {
        let c = p.coeffs()[k];
        if c != 0.0 {
            total += c * x.iter().zip(t).map(|(a, b)| a * b).sum::<f64>();
        }
    })?;
    Ok(total)
}

struct ColumnScratch {
    /// Local index + 1 of each vertex in the current ball, 0 when absent.
    local: Vec<u32>,
    order: Vec<usize>,
    depth: Vec<usize>,
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

impl ColumnScratch {
    fn new(n: usize) -> Self {
        Self {
            local: vec![0; n],
            order: Vec::new(),
            depth: Vec::new(),
            offsets: Vec::new(),
            adj: Vec::new(),
        }
    }
}

fn column_max_with(g: &Graph, p: &ChebSeries, u: usize, step: f64, s: &mut ColumnScratch) -> f64 {
    let radius = p.degree();
    let coeffs = p.coeffs();
    if radius == 0 {
        return coeffs.first().map_or(0.0, |c| c.abs());
    }
    s.order.clear();
    s.depth.clear();
    s.order.push(u);
    s.depth.push(0);
    s.local[u] = 1;
    let mut head = 0;
    while head < s.order.len() {
        let v = s.order[head];
        let dv = s.depth[head];
        head += 1;
        if dv == radius {
            continue;
        }
        for &w in g.neighbor_slice(v) {
            let w = w as usize;
            if s.local[w] == 0 {
                s.order.push(w);
                s.depth.push(dv + 1);
                s.local[w] = s.order.len() as u32;
            }
        }
    }
    let size = s.order.len();
    s.offsets.clear();
    s.adj.clear();
    s.offsets.push(0);
    for &v in &s.order {
        for &w in g.neighbor_slice(v) {
            let lw = s.local[w as usize];
            if lw != 0 {
                s.adj.push(lw - 1);
            }
        }
        s.offsets.push(s.adj.len());
    }
    for &v in &s.order {
        s.local[v] = 0;
    }
    let mut prev = vec![0.0; size];
    let mut cur = vec![0.0; size];
    let mut next = vec![0.0; size];
    let mut acc = vec![0.0; size];
    prev[0] = 1.0;
    acc[0] = coeffs[0];
    for i in 0..size {
        let sum: f64 = s.adj[s.offsets[i]..s.offsets[i + 1]].iter().map(|&j| prev[j as usize]).sum();
        cur[i] = step / 2.0 * sum;
    }
    if coeffs[1] != 0.0 {
        acc.iter_mut().zip(&cur).for_each(|(a, v)| *a += coeffs[1] * v);
    }
    for &c in &coeffs[2..=radius] {
        for i in 0..size {
            let sum: f64 = s.adj[s.offsets[i]..s.offsets[i + 1]].iter().map(|&j| cur[j as usize]).sum();
            next[i] = step * sum - prev[i];
        }
        if c != 0.0 {
            acc.iter_mut().zip(&next).for_each(|(a, v)| *a += c * v);
        }
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    acc.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Largest absolute entry of column `u` of `p(A/(2√d))`.
///
/// The column is supported on the ball of radius `deg p` around `u`, so the
/// recurrence runs on that ball only.
pub fn column_max(g: &Graph, p: &ChebSeries, u: usize) -> Result<f64> {
    let d = branching(g)?;
    let mut scratch = ColumnScratch::new(g.vertex_count());
    Ok(column_max_with(g, p, u, 2.0 / scale(d), &mut scratch))
}

/// `‖p(A/(2√d))‖_{1→∞}`, the largest absolute matrix entry, taken as a max
/// over columns. The max is order free, so the parallel sweep is exact.
pub fn op_norm_1_inf(g: &Graph, p: &ChebSeries) -> Result<f64> {
    let d = branching(g)?;
    let step = 2.0 / scale(d);
    let n = g.vertex_count();
    Ok((0..n)
        .into_par_iter()
        .with_min_len(1 << 12)
        .map_init(|| ColumnScratch::new(n), |s, u| column_max_with(g, p, u, step, s))
        .reduce(|| 0.0, f64::max))
}
