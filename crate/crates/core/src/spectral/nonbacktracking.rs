use super::chebyshev::branching;
use super::{Result, SpectralError};
use crate::graph::Graph;

/// Dense table of non-backtracking walk counts between vertex pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMatrix {
    n: usize,
    data: Vec<i64>,
}

impl CountMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> i64 {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: usize) -> &[i64] {
        &self.data[u * self.n..(u + 1) * self.n]
    }
}

/// `B^(m)` from `B^(1) = A`, `B^(2) = A² − (d+1)I`, `B^(k) = A B^(k−1) − d B^(k−2)`.
pub fn nonbacktracking_counts(g: &Graph, m: usize, cap: usize) -> Result<CountMatrix> {
    let d = branching(g)? as i64;
    let n = g.vertex_count();
    if n > cap {
        return Err(SpectralError::CapExceeded { n, cap });
    }
    if m == 0 {
        return Err(SpectralError::BadLength);
    }
    let times_a = |b: &[i64], k: usize| -> Result<Vec<i64>> {
        let mut out = vec![0i64; n * n];
        for u in 0..n {
            let row = &mut out[u * n..(u + 1) * n];
            for &w in g.neighbor_slice(u) {
                let src = &b[w as usize * n..(w as usize + 1) * n];
                for (o, &s) in row.iter_mut().zip(src) {
                    *o = o.checked_add(s).ok_or(SpectralError::Overflow(k))?;
                }
            }
        }
        Ok(out)
    };
    let mut identity = vec![0i64; n * n];
    for u in 0..n {
        identity[u * n + u] = 1;
    }
    let b1 = times_a(&identity, 1)?;
    if m == 1 {
        return Ok(CountMatrix { n, data: b1 });
    }
    let mut b2 = times_a(&b1, 2)?;
    for u in 0..n {
        b2[u * n + u] -= d + 1;
    }
    let (mut prev, mut cur) = (b1, b2);
    for k in 3..=m {
        let mut next = times_a(&cur, k)?;
        for (x, &p) in next.iter_mut().zip(&prev) {
            *x = p
                .checked_mul(d)
                .and_then(|dp| x.checked_sub(dp))
                .ok_or(SpectralError::Overflow(k))?;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(CountMatrix { n, data: cur })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_power_is_adjacency() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let b = nonbacktracking_counts(&g, 1, 16).unwrap();
        for u in 0..4 {
            for v in 0..4 {
                assert_eq!(b.get(u, v), g.has_edge(u, v) as i64);
            }
        }
    }

    #[test]
    fn cycle_counts() {
        // On C_n the only non-backtracking walks go straight around.
        let n = 6;
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let b = nonbacktracking_counts(&g, 6, 16).unwrap();
        assert_eq!(b.get(0, 0), 2);
        assert_eq!(b.get(0, 3), 0);
        let b3 = nonbacktracking_counts(&g, 3, 16).unwrap();
        assert_eq!(b3.get(0, 3), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(
            nonbacktracking_counts(&g, 2, 3),
            Err(SpectralError::CapExceeded { n: 4, cap: 3 })
        );
    }
}
