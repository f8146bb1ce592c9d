use serde::Serialize;

use super::{Result, SpectralError};
use crate::graph::Graph;

pub const DEFAULT_DENSE_CAP: usize = 4096;

/// An eigenvalue of the adjacency operator with a unit eigenvector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Eigenpair {
    pub lambda: f64,
    pub vector: Vec<f64>,
}

impl Eigenpair {
    /// `‖A v − λ v‖_∞`.
    pub fn residual(&self, g: &Graph) -> f64 {
        let mut av = vec![0.0; self.vector.len()];
        g.apply_adjacency(&self.vector, &mut av);
        av.iter()
            .zip(&self.vector)
            .map(|(a, v)| (a - self.lambda * v).abs())
            .fold(0.0, f64::max)
    }
}

/// Row-major dense adjacency matrix.
pub fn dense_adjacency(g: &Graph) -> Vec<f64> {
    let n = g.vertex_count();
    let mut a = vec![0.0; n * n];
    for (u, v) in g.edges() {
        a[u * n + v] = 1.0;
        a[v * n + u] = 1.0;
    }
    a
}

/// Full eigendecomposition of the adjacency matrix, eigenvalues ascending.
pub fn dense_spectrum(g: &Graph, cap: usize) -> Result<Vec<Eigenpair>> {
    let n = g.vertex_count();
    if n > cap {
        return Err(SpectralError::CapExceeded { n, cap });
    }
    let (values, vectors) = symmetric_eigen(dense_adjacency(g), n);
    Ok(values
        .into_iter()
        .enumerate()
        .map(|(i, lambda)| Eigenpair {
            lambda,
            vector: vectors[i * n..(i + 1) * n].to_vec(),
        })
        .collect())
}

/// Eigenvalues (ascending) and eigenvectors of a symmetric row-major matrix.
/// Row `i` of the returned matrix is the unit eigenvector for value `i`.
///
/// Householder reduction to tridiagonal form followed by the implicit QL
/// iteration, after the EISPACK routines `tred2` and `tql2`. The working
/// matrix `w` is the transpose of the classical `V`, which keeps the inner
/// loops on contiguous memory.
pub fn symmetric_eigen(a: Vec<f64>, n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n, "matrix is not {n}x{n}");
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    let mut w = a;
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut w, &mut d, &mut e, n);
    tql2(&mut w, &mut d, &mut e, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n * n);
    for &i in &order {
        values.push(d[i]);
        vectors.extend_from_slice(&w[i * n..(i + 1) * n]);
    }
    (values, vectors)
}

// `v(r, c)` of the classical algorithm lives at `w[c * n + r]`.
fn tred2(w: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    let at = |r: usize, c: usize| c * n + r;
    for j in 0..n {
        d[j] = w[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = w[at(i - 1, j)];
                w[at(i, j)] = 0.0;
                w[at(j, i)] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);
            for j in 0..i {
                f = d[j];
                w[at(j, i)] = f;
                g = e[j] + w[at(j, j)] * f;
                let col = &w[j * n..j * n + i];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut w[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = w[at(i - 1, j)];
                w[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
    for i in 0..n - 1 {
        w[at(n - 1, i)] = w[at(i, i)];
        w[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = w[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let g: f64 = (0..=i).map(|k| w[at(k, i + 1)] * w[at(k, j)]).sum();
                let col = &mut w[j * n..j * n + i + 1];
                for k in 0..=i {
                    col[k] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            w[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = w[at(n - 1, j)];
        w[at(n - 1, j)] = 0.0;
    }
    w[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

fn tql2(w: &mut [f64], d: &mut [f64], e: &mut [f64], n: usize) {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            for _ in 0..200 {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d[l + 2..].iter_mut() {
                    *x -= h;
                }
                f += h;
                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let vi = &mut lo[i * n..];
                    let vi1 = &mut hi[..n];
                    for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_cycle_spectrum() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let spec = dense_spectrum(&g, 16).unwrap();
        let values: Vec<f64> = spec.iter().map(|p| p.lambda).collect();
        for (got, want) in values.iter().zip([-2.0, 0.0, 0.0, 2.0]) {
            assert!((got - want).abs() < 1e-12, "{values:?}");
        }
        for p in &spec {
            assert!(p.residual(&g) < 1e-12);
        }
    }

    #[test]
    fn star_spectrum() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let spec = dense_spectrum(&g, 16).unwrap();
        let s3 = 3f64.sqrt();
        for (p, want) in spec.iter().zip([-s3, 0.0, 0.0, s3]) {
            assert!((p.lambda - want).abs() < 1e-12);
        }
    }

    #[test]
    fn general_symmetric_matrix() {
        let n = 5;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] = 1.0 / (1 + i + j) as f64;
            }
        }
        let (values, vectors) = symmetric_eigen(a.clone(), n);
        for k in 0..n {
            let v = &vectors[k * n..(k + 1) * n];
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[i * n + j] * v[j]).sum();
                assert!((av - values[k] * v[i]).abs() < 1e-13);
            }
            let norm: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm - 1.0).abs() < 1e-13);
        }
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn tiny_sizes() {
        assert_eq!(symmetric_eigen(vec![], 0), (vec![], vec![]));
        assert_eq!(symmetric_eigen(vec![2.5], 1), (vec![2.5], vec![1.0]));
    }
}
