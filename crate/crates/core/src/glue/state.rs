use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{GlueError, Result};
use crate::graph::{
    cycles_through_edge, enumerate_anchored, Adjacency, Bfs, Cycle, Graph, GraphError, Matching, DEFAULT_CYCLE_CAP,
};
use crate::tree::{build_dary_tree, TreeSpec};

/// Uniformly random bijection `V1 → V2` by a Fisher–Yates shuffle of `V2`.
pub fn random_matching<R: Rng>(v1: &[usize], v2: &[usize], rng: &mut R) -> Result<Matching> {
    if v1.len() != v2.len() {
        return Err(GlueError::SizeMismatch(v1.len(), v2.len()));
    }
    let mut shuffled = v2.to_vec();
    shuffled.shuffle(rng);
    Ok(Matching::new(v1.iter().copied().zip(shuffled).collect())?)
}

/// Minimum distance between the switched edge `e` and a candidate `f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Separation {
    /// Distance at least `L` from both endpoints of `e`; enough to rule out
    /// new cycles of length at most `L`.
    Minimal,
    /// Distance at least `2L`.
    Double,
}

/// One forward switching: matching edges `e = st`, `f = uv` replaced by
/// `sv`, `ut`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SwitchRecord {
    pub iteration: usize,
    pub e: (usize, usize),
    pub f: (usize, usize),
    pub added: [(usize, usize); 2],
    pub target_len: usize,
    pub eligible: usize,
    pub inventory_before: usize,
    pub inventory_after: usize,
    pub target_len_before: usize,
    pub target_len_after: usize,
}

impl SwitchRecord {
    /// The counting floor `n − |inventory|·L − 3^{2L}` for this step.
    pub fn eligible_floor(&self, n_leaves: usize, l: usize) -> f64 {
        n_leaves as f64 - (self.inventory_before * l) as f64 - 3f64.powi(2 * l as i32)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepairConfig {
    /// Switches per attempt before restarting; `None` means `50·n`.
    pub max_switches: Option<usize>,
    pub max_restarts: usize,
}

impl Default for RepairConfig {
    fn default() -> Self {
        Self {
            max_switches: None,
            max_restarts: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepairReport {
    pub switches_used: usize,
    pub restarts: usize,
    pub initial_inventory: usize,
    pub records: Vec<SwitchRecord>,
}

/// Two copies of a depth-`D` tree whose leaves (the marked vertices) are
/// joined by a perfect matching, with the set of cycles of length at most `L`.
///
/// Vertex `x` of the first tree is `x`; vertex `x` of the second is
/// `tree_n + x`. Leaf `i` of the first tree is matched to leaf `partner[i]` of
/// the second.
#[derive(Clone, Debug)]
pub struct GlueState {
    spec: TreeSpec,
    tree: Graph,
    tree_n: usize,
    leaf_start: usize,
    n_leaves: usize,
    max_len: usize,
    separation: Separation,
    partner: Vec<u32>,
    inverse: Vec<u32>,
    inventory: BTreeSet<Cycle>,
}

pub struct UnionNeighbors<'a> {
    inner: std::slice::Iter<'a, u32>,
    offset: usize,
    extra: Option<usize>,
}

impl Iterator for UnionNeighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        match self.inner.next() {
            Some(&w) => Some(w as usize + self.offset),
            None => self.extra.take(),
        }
    }
}

impl Adjacency for GlueState {
    type Iter<'a> = UnionNeighbors<'a>;

    fn vertex_count(&self) -> usize {
        2 * self.tree_n
    }

    fn neighbors(&self, v: usize) -> UnionNeighbors<'_> {
        let (x, offset) = if v < self.tree_n { (v, 0) } else { (v - self.tree_n, self.tree_n) };
        let extra = (x >= self.leaf_start).then(|| {
            let i = x - self.leaf_start;
            if offset == 0 {
                self.tree_n + self.leaf_start + self.partner[i] as usize
            } else {
                self.leaf_start + self.inverse[i] as usize
            }
        });
        UnionNeighbors {
            inner: self.tree.neighbor_slice(x).iter(),
            offset,
            extra,
        }
    }
}

impl GlueState {
    /// Builds both trees, draws a matching and takes the cycle census.
    ///
    /// `c` bounds the threshold: `max_len ≤ 2c·log_d(n)` with `n` the number
    /// of marked leaves per tree.
    pub fn new<R: Rng>(d: usize, depth: usize, max_len: usize, c: f64, separation: Separation, rng: &mut R) -> Result<Self> {
        let spec = TreeSpec::new(d, depth)?;
        let tree = build_dary_tree(spec)?.graph;
        let tree_n = spec.vertex_count();
        let leaf_start = spec.level_start(depth);
        let n_leaves = spec.level_size(depth);
        let limit = 2.0 * c * (n_leaves as f64).ln() / (d as f64).ln();
        if max_len as f64 > limit + 1e-9 {
            return Err(GlueError::ThresholdTooLarge { l: max_len, limit });
        }
        let mut state = Self {
            spec,
            tree,
            tree_n,
            leaf_start,
            n_leaves,
            max_len,
            separation,
            partner: Vec::new(),
            inverse: Vec::new(),
            inventory: BTreeSet::new(),
        };
        state.rematch(rng)?;
        Ok(state)
    }

    /// Replaces the matching by a fresh uniform one and recounts.
    pub fn rematch<R: Rng>(&mut self, rng: &mut R) -> Result<()> {
        let v1: Vec<usize> = (0..self.n_leaves).collect();
        let v2: Vec<usize> = (self.n_leaves..2 * self.n_leaves).collect();
        let m = random_matching(&v1, &v2, rng)?;
        self.partner = vec![0; self.n_leaves];
        self.inverse = vec![0; self.n_leaves];
        for &(i, j) in m.pairs() {
            let j = j - self.n_leaves;
            self.partner[i] = j as u32;
            self.inverse[j] = i as u32;
        }
        self.inventory = self.census()?.into_iter().collect();
        Ok(())
    }

    /// Overrides the matching (leaf index pairs); used by tests.
    pub fn set_partner(&mut self, partner: Vec<usize>) -> Result<()> {
        let m = Matching::new(partner.iter().enumerate().map(|(i, &j)| (i, j + self.n_leaves)).collect())?;
        if m.len() != self.n_leaves || partner.iter().any(|&j| j >= self.n_leaves) {
            return Err(GlueError::SizeMismatch(self.n_leaves, partner.len()));
        }
        self.partner = partner.iter().map(|&j| j as u32).collect();
        self.inverse = vec![0; self.n_leaves];
        for (i, &j) in partner.iter().enumerate() {
            self.inverse[j] = i as u32;
        }
        self.inventory = self.census()?.into_iter().collect();
        Ok(())
    }

    /// Full enumeration of short cycles; each passes through a first-tree leaf.
    pub fn census(&self) -> Result<Vec<Cycle>> {
        if self.max_len < 3 {
            return Ok(Vec::new());
        }
        let (lo, hi) = (self.leaf_start, self.tree_n);
        Ok(enumerate_anchored(self, self.max_len, DEFAULT_CYCLE_CAP, |v| v >= lo && v < hi)?)
    }

    pub fn spec(&self) -> TreeSpec {
        self.spec
    }

    pub fn tree_vertex_count(&self) -> usize {
        self.tree_n
    }

    pub fn n_leaves(&self) -> usize {
        self.n_leaves
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn inventory(&self) -> &BTreeSet<Cycle> {
        &self.inventory
    }

    pub fn first_leaf(&self) -> usize {
        self.leaf_start
    }

    /// Second-tree leaf index matched to first-tree leaf `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.partner[i] as usize
    }

    /// First-tree leaf index matched to second-tree leaf `j`.
    pub fn inverse(&self, j: usize) -> usize {
        self.inverse[j] as usize
    }

    fn v1(&self, i: usize) -> usize {
        self.leaf_start + i
    }

    fn v2(&self, j: usize) -> usize {
        self.tree_n + self.leaf_start + j
    }

    /// Matching as pairs of union-graph vertices.
    pub fn matching(&self) -> Matching {
        Matching::new((0..self.n_leaves).map(|i| (self.v1(i), self.v2(self.partner(i)))).collect())
            .expect("partner is a bijection")
    }

    pub fn is_matching_edge(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        a >= self.leaf_start && a < self.tree_n && b == self.v2(self.partner(a - self.leaf_start))
    }

    /// The union graph as an explicit [`Graph`].
    pub fn union_graph(&self) -> Result<Graph> {
        let mut edges = Vec::with_capacity(2 * self.tree.edge_count() + self.n_leaves);
        for (u, v) in self.tree.edges() {
            edges.push((u, v));
            edges.push((u + self.tree_n, v + self.tree_n));
        }
        edges.extend(self.matching().pairs().iter().copied());
        Ok(Graph::from_edges(2 * self.tree_n, &edges)?)
    }

    fn first_matching_edge(&self, c: &Cycle) -> Option<(usize, usize)> {
        c.edges()
            .filter(|&(a, b)| self.is_matching_edge(a, b))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .min()
    }

    fn radius(&self) -> usize {
        match self.separation {
            Separation::Minimal => self.max_len,
            Separation::Double => 2 * self.max_len,
        }
    }

    /// Destroys `target` by switching its lexicographically first matching
    /// edge with a uniformly random eligible one.
    pub fn forward_switch<R: Rng>(&mut self, target: &Cycle, iteration: usize, rng: &mut R) -> Result<SwitchRecord> {
        if !self.inventory.contains(target) {
            return Err(GlueError::UnknownCycle);
        }
        let (s, t) = self
            .first_matching_edge(target)
            .ok_or_else(|| GlueError::Invariant("short cycle without a matching edge".into()))?;
        let mut near = Bfs::new(self.vertex_count());
        near.run(&*self, &[s, t], self.radius() - 1, |_| true);
        let mut busy = vec![false; self.n_leaves];
        for c in &self.inventory {
            for (a, b) in c.edges() {
                if self.is_matching_edge(a, b) {
                    busy[a.min(b) - self.leaf_start] = true;
                }
            }
        }
        let eligible: Vec<usize> = (0..self.n_leaves)
            .filter(|&i| {
                !busy[i] && near.dist(self.v1(i)).is_none() && near.dist(self.v2(self.partner(i))).is_none()
            })
            .collect();
        if eligible.is_empty() {
            return Err(GlueError::Starved);
        }
        let i_u = eligible[rng.gen_range(0..eligible.len())];
        let i_s = s - self.leaf_start;
        let j_t = self.partner(i_s);
        let j_v = self.partner(i_u);
        let (u, v) = (self.v1(i_u), self.v2(j_v));

        let target_len = target.len();
        let count_len = |inv: &BTreeSet<Cycle>| inv.iter().filter(|c| c.len() == target_len).count();
        let inventory_before = self.inventory.len();
        let target_len_before = count_len(&self.inventory);

        self.partner[i_s] = j_v as u32;
        self.partner[i_u] = j_t as u32;
        self.inverse[j_v] = i_s as u32;
        self.inverse[j_t] = i_u as u32;
        self.inventory.retain(|c| !c.contains_edge(s, t) && !c.contains_edge(u, v));
        let mut created = cycles_through_edge(&*self, s, v, self.max_len, DEFAULT_CYCLE_CAP)?;
        created.extend(cycles_through_edge(&*self, u, t, self.max_len, DEFAULT_CYCLE_CAP)?);
        if !created.is_empty() {
            return Err(GlueError::Invariant(format!(
                "switch created {} cycles of length <= {}",
                created.len(),
                self.max_len
            )));
        }
        Ok(SwitchRecord {
            iteration,
            e: (s, t),
            f: (u, v),
            added: [(s, v), (u, t)],
            target_len,
            eligible: eligible.len(),
            inventory_before,
            inventory_after: self.inventory.len(),
            target_len_before,
            target_len_after: count_len(&self.inventory),
        })
    }

    /// Switches until no cycle of length at most `L` remains, restarting
    /// with a fresh matching on starvation or after `max_switches` switches.
    /// A clean state is returned untouched.
    pub fn repair_girth<R: Rng>(&mut self, cfg: &RepairConfig, rng: &mut R) -> Result<RepairReport> {
        let max_switches = cfg.max_switches.unwrap_or(50 * self.n_leaves);
        let initial_inventory = self.inventory.len();
        let mut records = Vec::new();
        let mut restarts = 0;
        loop {
            let mut used = 0;
            while let Some(target) = self.inventory.first().cloned() {
                if used >= max_switches {
                    break;
                }
                match self.forward_switch(&target, records.len(), rng) {
                    Ok(rec) => records.push(rec),
                    Err(GlueError::Starved) => break,
                    Err(e) => return Err(e),
                }
                used += 1;
            }
            if self.inventory.is_empty() {
                return Ok(RepairReport {
                    switches_used: records.len(),
                    restarts,
                    initial_inventory,
                    records,
                });
            }
            if restarts == cfg.max_restarts {
                return Err(GlueError::RepairBudget {
                    restarts,
                    residual: self.inventory.iter().cloned().collect(),
                });
            }
            restarts += 1;
            log::debug!("repair restart {restarts} with {} short cycles left", self.inventory.len());
            self.rematch(rng)?;
        }
    }

    /// Union graph with every matching edge contracted.
    pub fn contracted(&self) -> Result<crate::graph::Contraction> {
        let g = self.union_graph()?;
        crate::graph::contract_matching(&g, &self.matching()).map_err(|e| match e {
            e @ (GraphError::ContractionLoop(..) | GraphError::ContractionParallel(..)) => {
                GlueError::Invariant(format!("contraction after repair failed: {e}"))
            }
            e => e.into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_short_cycles, girth};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_pairing() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matching(&[3], &[9], &mut rng).unwrap();
        assert_eq!(m.pairs(), &[(3, 9)]);
        assert!(random_matching(&[1, 2], &[3], &mut rng).is_err());
    }

    #[test]
    fn inventory_matches_full_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let state = GlueState::new(2, 3, 8, 2.0, Separation::Minimal, &mut rng).unwrap();
        let full = enumerate_short_cycles(&state.union_graph().unwrap(), 8, DEFAULT_CYCLE_CAP).unwrap();
        assert_eq!(state.inventory().iter().cloned().collect::<Vec<_>>(), full);
        assert!(full.iter().all(|c| c.len() % 2 == 0));
    }

    #[test]
    fn threshold_is_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        assert!(matches!(
            GlueState::new(2, 3, 8, 0.25, Separation::Minimal, &mut rng),
            Err(GlueError::ThresholdTooLarge { .. })
        ));
    }

    #[test]
    fn repair_clears_and_contraction_keeps_half_girth() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut state = GlueState::new(2, 6, 6, 0.5, Separation::Minimal, &mut rng).unwrap();
        let report = state.repair_girth(&RepairConfig::default(), &mut rng).unwrap();
        assert!(state.inventory().is_empty());
        let union = state.union_graph().unwrap();
        assert!(girth(&union).unwrap() > 6);
        let c = state.contracted().unwrap();
        assert!(girth(&c.graph).unwrap() >= 4);
        for r in &report.records {
            assert!(r.inventory_after < r.inventory_before);
        }
        let again = state.repair_girth(&RepairConfig::default(), &mut rng).unwrap();
        assert_eq!(again.switches_used, 0);
    }
}
