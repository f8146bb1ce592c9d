use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{GlueError, Result};
use crate::graph::{
    cycles_through_edge, enumerate_short_cycles, girth, Adjacency, Cycle, Graph, DEFAULT_CYCLE_CAP,
};

/// A near-regular graph request: every vertex of degree `degree` except one
/// distinguished vertex of degree `degree − 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetSpec {
    pub degree: usize,
    pub size: usize,
    /// Girth demanded of the regular graph before surgery.
    pub girth_target: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GadgetConfig {
    /// Regular-graph attempts (fresh pairing each) before giving up.
    pub max_restarts: usize,
    /// Switch attempts per short cycle before an attempt counts as stuck.
    pub candidates_per_step: usize,
    /// Accepted switches per attempt, as a multiple of the size.
    pub steps_per_vertex: usize,
    /// Feasibility gate: `girth_target ≤ c·log_{degree−1}(size)`.
    pub feasibility_c: f64,
    /// Vertices tried as the surgery center.
    pub surgery_candidates: usize,
}

impl Default for GadgetConfig {
    fn default() -> Self {
        Self {
            max_restarts: 4,
            candidates_per_step: 400,
            steps_per_vertex: 20,
            feasibility_c: 2.0,
            surgery_candidates: 48,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gadget {
    pub graph: Graph,
    pub distinguished: usize,
    /// Girth after surgery.
    pub girth: Option<usize>,
    /// Girth of the regular graph before surgery.
    pub regular_girth: Option<usize>,
    pub stats: RegularGraphStats,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RegularGraphStats {
    pub pairings: usize,
    pub switches: usize,
    pub restarts: usize,
}

/// Lower bound on the order of a `degree`-regular graph of girth `g`.
pub fn moore_bound(degree: usize, g: usize) -> usize {
    let r = degree.saturating_sub(1);
    let k = g / 2;
    let geometric = |terms: usize| (0..terms).map(|i| r.saturating_pow(i as u32)).fold(0usize, usize::saturating_add);
    if g % 2 == 1 {
        1usize.saturating_add(degree.saturating_mul(geometric(k)))
    } else {
        2usize.saturating_mul(geometric(k))
    }
}

/// Mutable adjacency lists used while a graph is being rewired.
#[derive(Clone, Debug)]
struct Rewire {
    adj: Vec<Vec<u32>>,
    edges: Vec<(usize, usize)>,
    slot: HashMap<(usize, usize), usize>,
}

impl Adjacency for Rewire {
    type Iter<'a> = std::iter::Map<std::slice::Iter<'a, u32>, fn(&u32) -> usize>;

    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, v: usize) -> Self::Iter<'_> {
        self.adj[v].iter().map(|&w| w as usize)
    }
}

impl Rewire {
    fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut slot = HashMap::with_capacity(edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            adj[u].push(v as u32);
            adj[v].push(u as u32);
            slot.insert((u.min(v), u.max(v)), i);
        }
        Self { adj, edges, slot }
    }

    fn has(&self, u: usize, v: usize) -> bool {
        self.slot.contains_key(&(u.min(v), u.max(v)))
    }

    fn replace(&mut self, old: (usize, usize), new: (usize, usize)) {
        let key = (old.0.min(old.1), old.0.max(old.1));
        let i = self.slot.remove(&key).expect("edge present");
        for (a, b) in [(old.0, old.1), (old.1, old.0)] {
            let pos = self.adj[a].iter().position(|&w| w as usize == b).expect("edge present");
            self.adj[a].swap_remove(pos);
        }
        self.adj[new.0].push(new.1 as u32);
        self.adj[new.1].push(new.0 as u32);
        let key = (new.0.min(new.1), new.0.max(new.1));
        self.edges[i] = key;
        self.slot.insert(key, i);
    }

    fn to_graph(&self) -> Result<Graph> {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        Ok(Graph::from_edges(self.adj.len(), &edges)?)
    }
}

/// Configuration-model sample: a uniform simple `degree`-regular graph on
/// `size` vertices, by rejection.
fn pairing<R: Rng>(degree: usize, size: usize, rng: &mut R, tries: usize) -> Option<(Vec<(usize, usize)>, usize)> {
    let mut points: Vec<usize> = (0..size * degree).map(|p| p / degree).collect();
    for attempt in 1..=tries {
        points.shuffle(rng);
        let mut edges: Vec<(usize, usize)> = points
            .chunks(2)
            .map(|p| (p[0].min(p[1]), p[0].max(p[1])))
            .collect();
        if edges.iter().any(|&(a, b)| a == b) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Some((edges, attempt));
    }
    None
}

fn census_counts(cycles: &BTreeSet<Cycle>, below: usize) -> Vec<usize> {
    let mut counts = vec![0; below];
    for c in cycles {
        counts[c.len()] += 1;
    }
    counts
}

/// A `degree`-regular graph on `size` vertices with girth at least
/// `girth_target`: a pairing-model sample whose short cycles are removed by
/// random double-edge switchings, accepting a switch only when the vector of
/// short-cycle counts (shortest length first) decreases lexicographically.
pub fn high_girth_regular<R: Rng>(
    degree: usize,
    size: usize,
    girth_target: usize,
    cfg: &GadgetConfig,
    rng: &mut R,
) -> Result<(Graph, RegularGraphStats)> {
    if degree < 2 || (degree * size) % 2 == 1 || size <= degree {
        return Err(GlueError::GadgetSpec(format!(
            "no simple {degree}-regular graph on {size} vertices"
        )));
    }
    let mut stats = RegularGraphStats::default();
    let below = girth_target.max(3);
    for restart in 0..=cfg.max_restarts {
        stats.restarts = restart;
        let (edges, tries) = pairing(degree, size, rng, 10_000).ok_or(GlueError::GadgetBudget { target: girth_target })?;
        stats.pairings += tries;
        let mut g = Rewire::new(size, edges);
        let mut inventory: BTreeSet<Cycle> = if below > 3 {
            enumerate_short_cycles(&g, below - 1, DEFAULT_CYCLE_CAP)?.into_iter().collect()
        } else {
            BTreeSet::new()
        };
        let mut counts = census_counts(&inventory, below);
        let mut steps = 0;
        let budget = cfg.steps_per_vertex * size;
        while let Some(c) = inventory.first().cloned() {
            if steps >= budget {
                break;
            }
            let (s, t) = c.edges().map(|(a, b)| (a.min(b), a.max(b))).min().unwrap();
            let mut accepted = false;
            for _ in 0..cfg.candidates_per_step {
                let (a, b) = g.edges[rng.gen_range(0..g.edges.len())];
                let (u, v) = if rng.gen::<bool>() { (a, b) } else { (b, a) };
                if u == s || u == t || v == s || v == t || g.has(s, u) || g.has(t, v) {
                    continue;
                }
                let mut removed = cycles_through_edge(&g, s, t, below - 1, DEFAULT_CYCLE_CAP)?;
                removed.extend(cycles_through_edge(&g, u, v, below - 1, DEFAULT_CYCLE_CAP)?);
                let removed: BTreeSet<Cycle> = removed.into_iter().collect();
                g.replace((s, t), (s, u));
                g.replace((u, v), (t, v));
                let mut added = cycles_through_edge(&g, s, u, below - 1, DEFAULT_CYCLE_CAP)?;
                added.extend(cycles_through_edge(&g, t, v, below - 1, DEFAULT_CYCLE_CAP)?);
                let added: BTreeSet<Cycle> = added.into_iter().collect();
                let mut next = counts.clone();
                for c in &removed {
                    next[c.len()] -= 1;
                }
                for c in &added {
                    next[c.len()] += 1;
                }
                if next < counts {
                    for c in &removed {
                        inventory.remove(c);
                    }
                    inventory.extend(added);
                    counts = next;
                    accepted = true;
                    stats.switches += 1;
                    break;
                }
                g.replace((s, u), (s, t));
                g.replace((t, v), (u, v));
            }
            if !accepted {
                break;
            }
            steps += 1;
        }
        if inventory.is_empty() {
            return Ok((g.to_graph()?, stats));
        }
        log::debug!(
            "regular graph attempt {restart}: {} cycles below {girth_target} remain",
            inventory.len()
        );
    }
    Err(GlueError::GadgetBudget { target: girth_target })
}

/// Builds a high-girth regular graph, then deletes `v u1`, `v u2` and adds
/// `u1 u2`, leaving `v` with degree `degree − 2`. Among the tried surgeries
/// the one with the largest resulting girth is kept.
pub fn make_gadget<R: Rng>(spec: &GadgetSpec, cfg: &GadgetConfig, rng: &mut R) -> Result<Gadget> {
    let GadgetSpec {
        degree,
        size,
        girth_target,
    } = *spec;
    if degree < 3 {
        return Err(GlueError::GadgetSpec(format!("degree {degree} leaves no room for surgery")));
    }
    if (degree * size) % 2 == 1 {
        return Err(GlueError::GadgetSpec(format!("degree·size = {} is odd", degree * size)));
    }
    let reach = cfg.feasibility_c * (size as f64).ln() / ((degree - 1) as f64).ln();
    if girth_target as f64 > reach {
        return Err(GlueError::GadgetSpec(format!(
            "girth target {girth_target} exceeds {:.2}·log_{}({size}) = {reach:.2}",
            cfg.feasibility_c,
            degree - 1
        )));
    }
    if size < moore_bound(degree, girth_target) {
        return Err(GlueError::GadgetSpec(format!(
            "{size} vertices are below the Moore bound {} for girth {girth_target}",
            moore_bound(degree, girth_target)
        )));
    }
    let (regular, stats) = high_girth_regular(degree, size, girth_target, cfg, rng)?;
    let regular_girth = girth(&regular);
    let mut centers: Vec<usize> = (0..size).collect();
    centers.shuffle(rng);
    let mut best: Option<(Option<usize>, Graph, usize)> = None;
    'search: for &v in centers.iter().take(cfg.surgery_candidates) {
        let nb: Vec<usize> = regular.neighbors(v).collect();
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                let (u1, u2) = (nb[i], nb[j]);
                if regular.has_edge(u1, u2) {
                    continue;
                }
                let mut edges: Vec<(usize, usize)> = regular
                    .edges()
                    .filter(|&e| e != (v.min(u1), v.max(u1)) && e != (v.min(u2), v.max(u2)))
                    .collect();
                edges.push((u1.min(u2), u1.max(u2)));
                let h = Graph::from_edges(size, &edges)?;
                let gh = girth(&h);
                let better = match &best {
                    None => true,
                    Some((b, _, _)) => gh.unwrap_or(usize::MAX) > b.unwrap_or(usize::MAX),
                };
                if better {
                    best = Some((gh, h, v));
                    if gh.unwrap_or(usize::MAX) >= regular_girth.unwrap_or(usize::MAX) {
                        break 'search;
                    }
                }
            }
        }
    }
    let (post, graph, distinguished) = best.ok_or_else(|| GlueError::GadgetSpec("no vertex admits the surgery".into()))?;
    for x in 0..size {
        let want = if x == distinguished { degree - 2 } else { degree };
        if graph.degree(x) != want {
            return Err(GlueError::Invariant(format!("gadget vertex {x} has degree {}", graph.degree(x))));
        }
    }
    Ok(Gadget {
        graph,
        distinguished,
        girth: post,
        regular_girth,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moore_values() {
        assert_eq!(moore_bound(3, 5), 10);
        assert_eq!(moore_bound(3, 6), 14);
        assert_eq!(moore_bound(3, 4), 6);
    }

    #[test]
    fn heawood_sized_gadget() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = GadgetSpec {
            degree: 3,
            size: 14,
            girth_target: 5,
        };
        let g = make_gadget(&spec, &GadgetConfig::default(), &mut rng).unwrap();
        assert!(g.regular_girth.unwrap() >= 5);
        assert!(g.girth.unwrap() >= 4);
        assert_eq!(g.graph.degree(g.distinguished), 1);
        let others = (0..14).filter(|&x| x != g.distinguished).all(|x| g.graph.degree(x) == 3);
        assert!(others);
    }

    #[test]
    fn rejects_bad_requests() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = GadgetConfig::default();
        let odd = GadgetSpec {
            degree: 3,
            size: 13,
            girth_target: 4,
        };
        assert!(matches!(make_gadget(&odd, &cfg, &mut rng), Err(GlueError::GadgetSpec(_))));
        let tight = GadgetSpec {
            degree: 3,
            size: 12,
            girth_target: 6,
        };
        assert!(matches!(make_gadget(&tight, &cfg, &mut rng), Err(GlueError::GadgetSpec(_))));
    }
}
