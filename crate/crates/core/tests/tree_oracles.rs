use girthlab_core::spectral::{dense_spectrum, symmetric_eigen};
use girthlab_core::tree::{
    build_dary_tree, char_residual, eigenvalue_density, euclid, find_symmetric_eigenvalues, level_recurrence,
    mass_profile, mass_recurrence, symmetric_eigenvector, transfer_invariant, transfer_pairs, TreeSpec,
};
use proptest::prelude::*;

/// Eigenvalues of the level quotient, symmetrized: off-diagonals `√(d+1)`
/// between levels 0 and 1, `√d` below.
fn quotient_eigenvalues(spec: &TreeSpec) -> Vec<f64> {
    let n = spec.depth + 1;
    let mut q = vec![0.0; n * n];
    for i in 0..spec.depth {
        let w = if i == 0 { ((spec.d + 1) as f64).sqrt() } else { (spec.d as f64).sqrt() };
        q[i * n + i + 1] = w;
        q[(i + 1) * n + i] = w;
    }
    symmetric_eigen(q, n).0
}

#[test]
fn symmetric_eigenvalues_are_the_quotient_spectrum() {
    for d in [2, 3] {
        for depth in 1..=6 {
            let spec = TreeSpec::new(d, depth).unwrap();
            let found = find_symmetric_eigenvalues(&spec, None, None).unwrap();
            let oracle = quotient_eigenvalues(&spec);
            assert_eq!(found.len(), depth + 1, "d={d} D={depth}");
            for (a, b) in found.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-8, "d={d} D={depth}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn symmetric_eigenvalues_are_dense_level_constant_eigenvalues() {
    for d in [2, 3] {
        for depth in 1..=4 {
            let spec = TreeSpec::new(d, depth).unwrap();
            let tree = build_dary_tree(spec).unwrap();
            let dense = dense_spectrum(&tree.graph, 2000).unwrap();
            // The level-averaging projector applied to each dense eigenvector;
            // a nonzero image is a level-constant eigenvector.
            let mut level_constant = Vec::new();
            for p in &dense {
                let mut img = vec![0.0; depth + 1];
                for (v, x) in p.vector.iter().enumerate() {
                    img[tree.levels[v]] += x;
                }
                if img.iter().any(|x| x.abs() > 1e-6) {
                    level_constant.push(p.lambda);
                }
            }
            let found = find_symmetric_eigenvalues(&spec, None, None).unwrap();
            for lambda in &found {
                assert!(
                    level_constant.iter().any(|x| (x - lambda).abs() < 1e-8),
                    "d={d} D={depth}: {lambda} not level-constant in dense spectrum"
                );
            }
        }
    }
}

#[test]
fn eigenvectors_satisfy_the_tree_equation() {
    for d in [2, 3] {
        for depth in 1..=6 {
            let spec = TreeSpec::new(d, depth).unwrap();
            let tree = build_dary_tree(spec).unwrap();
            for lambda in find_symmetric_eigenvalues(&spec, None, None).unwrap() {
                let pair = symmetric_eigenvector(&spec, lambda).unwrap();
                let mut av = vec![0.0; pair.vector.len()];
                tree.graph.apply_adjacency(&pair.vector, &mut av);
                let res = av.iter().zip(&pair.vector).map(|(a, v)| (a - lambda * v).abs()).fold(0.0, f64::max);
                assert!(res <= 1e-9, "d={d} D={depth} λ={lambda}: {res}");
                let norm: f64 = pair.vector.iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-12);
                let masses = mass_profile(&pair);
                assert!((masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn transfer_band_holds_at_every_level() {
    for d in [2, 3] {
        for depth in 1..=6 {
            let spec = TreeSpec::new(d, depth).unwrap();
            for lambda in find_symmetric_eigenvalues(&spec, None, None).unwrap() {
                let pair = symmetric_eigenvector(&spec, lambda).unwrap();
                let w = transfer_pairs(&pair.profile);
                let s = pair.theta.sin();
                let base = euclid(w[0]);
                for wi in &w {
                    let ratio = euclid(*wi) / base;
                    assert!(ratio >= s / 2.0 - 1e-9 && ratio <= 2.0 / s + 1e-9, "d={d} D={depth} λ={lambda}: {ratio}");
                }
                // The invariant is conserved from level 2 on.
                let inv: Vec<f64> = w[1..].iter().map(|&wi| transfer_invariant(pair.theta, wi)).collect();
                for x in &inv {
                    assert!((x - inv[0]).abs() < 1e-9 * inv[0].max(1.0));
                }
            }
        }
    }
}

fn union_gap_oracle(d: usize, lo: usize, hi: usize) -> f64 {
    let mut all: Vec<f64> = (lo..=hi)
        .flat_map(|depth| quotient_eigenvalues(&TreeSpec::new(d, depth).unwrap()))
        .collect();
    let edge = 2.0 * (d as f64).sqrt();
    all.push(-edge);
    all.push(edge);
    all.sort_by(f64::total_cmp);
    all.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

#[test]
fn union_gaps_match_the_quotient_oracle() {
    for hi in [6, 12, 21] {
        let report = eigenvalue_density(2, 2, hi).unwrap();
        assert!((report.largest_gap - union_gap_oracle(2, 2, hi)).abs() < 1e-8, "{report:?}");
        assert_eq!(report.eigenvalue_count, (2..=hi).map(|k| k + 1).sum::<usize>());
    }
    // Gaps shrink with depth; below 0.2 from depth 21 on.
    assert!(eigenvalue_density(2, 2, 21).unwrap().largest_gap < 0.2);
    assert!(eigenvalue_density(2, 2, 20).unwrap().largest_gap > 0.2);
}

#[test]
fn star_example() {
    // K_{1,3}: λ = ±√3.
    let spec = TreeSpec::new(2, 1).unwrap();
    let found = find_symmetric_eigenvalues(&spec, None, None).unwrap();
    assert_eq!(found.len(), 2);
    assert!((found[1] - 3f64.sqrt()).abs() < 1e-12);
    assert!(char_residual(3f64.sqrt(), &spec).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn two_mass_paths_agree(d in 2usize..6, depth in 2usize..14, t in 0.01f64..3.13) {
        let spec = TreeSpec::new(d, depth);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let lambda = spec.edge() * t.cos();
        let direct = level_recurrence(lambda, &spec).m;
        let rec = mass_recurrence(lambda, &spec);
        for (a, b) in direct.iter().zip(&rec) {
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }
    }

    #[test]
    fn interval_search_is_a_sub_selection(d in 2usize..4, depth in 1usize..10, a in -0.99f64..0.99, w in 0.01f64..1.0) {
        let spec = TreeSpec::new(d, depth).unwrap();
        let e = spec.edge();
        let lo = a * e;
        let hi = (lo + w * e).min(0.999 * e);
        prop_assume!(lo < hi);
        let all = find_symmetric_eigenvalues(&spec, None, None).unwrap();
        let part = find_symmetric_eigenvalues(&spec, Some((lo, hi)), Some(4000)).unwrap();
        let expected: Vec<f64> = all.iter().copied().filter(|&x| x > lo + 1e-9 && x < hi - 1e-9).collect();
        for x in &expected {
            prop_assert!(part.iter().any(|y| (x - y).abs() < 1e-8));
        }
        for y in &part {
            prop_assert!(all.iter().any(|x| (x - y).abs() < 1e-8));
        }
    }
}
