//! Named graphs used as fixtures and corpus members.

use rand::Rng;

use crate::graph::{Graph, GraphError};

type Result<T> = std::result::Result<T, GraphError>;

/// Hamiltonian cubic graph from LCF notation: a cycle `0..n` plus chords
/// `i ~ i + pattern[i mod len]`.
pub fn lcf(n: usize, pattern: &[i64]) -> Result<Graph> {
    let mut edges = Vec::with_capacity(3 * n / 2);
    for i in 0..n {
        edges.push((i, (i + 1) % n));
    }
    for i in 0..n {
        let j = (i as i64 + pattern[i % pattern.len()]).rem_euclid(n as i64) as usize;
        if i < j {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, &edges)
}

pub fn cycle(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete(n: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::from_edges(n, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
    let edges: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
    Graph::from_edges(a + b, &edges)
}

/// The `k`-dimensional hypercube.
pub fn hypercube(k: usize) -> Result<Graph> {
    let n = 1usize << k;
    let edges: Vec<_> = (0..n)
        .flat_map(|v| (0..k).map(move |b| (v, v ^ (1 << b))))
        .filter(|&(u, v)| u < v)
        .collect();
    Graph::from_edges(n, &edges)
}

/// Generalized Petersen graph `GP(n, k)`.
pub fn generalized_petersen(n: usize, k: usize) -> Result<Graph> {
    let mut edges = Vec::with_capacity(3 * n);
    for i in 0..n {
        edges.push((i, (i + 1) % n));
        edges.push((i, n + i));
        edges.push((n + i, n + (i + k) % n));
    }
    Graph::from_edges(2 * n, &edges)
}

pub fn petersen() -> Graph {
    generalized_petersen(5, 2).expect("valid")
}

pub fn heawood() -> Graph {
    lcf(14, &[5, -5]).expect("valid")
}

pub fn mobius_kantor() -> Graph {
    generalized_petersen(8, 3).expect("valid")
}

pub fn desargues() -> Graph {
    generalized_petersen(10, 3).expect("valid")
}

pub fn dodecahedron() -> Graph {
    generalized_petersen(10, 2).expect("valid")
}

/// The (3,7)-cage on 24 vertices.
pub fn mcgee() -> Graph {
    lcf(24, &[12, 7, -7]).expect("valid")
}

/// Tutte's 8-cage on 30 vertices.
pub fn tutte_coxeter() -> Graph {
    lcf(30, &[-13, -9, 7, -7, 9, 13]).expect("valid")
}

/// Uniform `degree`-regular multigraph-free graph from the pairing model,
/// by rejection.
pub fn random_regular<R: Rng>(n: usize, degree: usize, rng: &mut R) -> Result<Graph> {
    use rand::seq::SliceRandom;
    if (n * degree) % 2 == 1 || degree >= n {
        return Err(GraphError::NoRegularGraph { n, degree });
    }
    loop {
        let mut points: Vec<usize> = (0..n * degree).map(|p| p / degree).collect();
        points.shuffle(rng);
        let mut edges: Vec<(usize, usize)> = points
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if edges.iter().any(|&(u, v)| u == v) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Graph::from_edges(n, &edges);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::girth;

    #[test]
    fn named_girths() {
        let cases = [
            (petersen(), 10, 5),
            (heawood(), 14, 6),
            (mobius_kantor(), 16, 6),
            (desargues(), 20, 6),
            (dodecahedron(), 20, 5),
            (mcgee(), 24, 7),
            (tutte_coxeter(), 30, 8),
            (complete(4).unwrap(), 4, 3),
            (complete_bipartite(3, 3).unwrap(), 6, 4),
            (hypercube(3).unwrap(), 8, 4),
        ];
        for (g, n, gir) in cases {
            assert_eq!(g.vertex_count(), n);
            assert_eq!(g.declared_degree(), Some(3));
            assert_eq!(girth(&g), Some(gir), "n = {n}");
        }
    }

    #[test]
    fn random_regular_is_simple() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = random_regular(50, 4, &mut rng).unwrap();
        assert_eq!(g.declared_degree(), Some(4));
        assert!(random_regular(5, 3, &mut rng).is_err());
    }
}
