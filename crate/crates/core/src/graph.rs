//! Simple undirected graphs in compressed adjacency form, together with the
//! cycle machinery the rest of the crate leans on: girth, short-cycle
//! enumeration, distances and matching contraction.

use std::cmp::Ordering;

use thiserror::Error;

/// Default cap on the number of cycles a single enumeration may return.
pub const DEFAULT_CYCLE_CAP: usize = 1_000_000;

const UNSEEN: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge #{index} ({u}, {v}) has an endpoint outside 0..{n}")]
    OutOfRange {
        index: usize,
        u: usize,
        v: usize,
        n: usize,
    },
    #[error("edge #{index} ({u}, {u}) is a loop")]
    Loop { index: usize, u: usize },
    #[error("edge ({u}, {v}) appears more than once")]
    Duplicate { u: usize, v: usize },
    #[error("{n} vertices exceed the 32-bit vertex id range")]
    TooLarge { n: usize },
    #[error("cycle length cap {0} is below 3")]
    CapTooSmall(usize),
    #[error("more than {cap} cycles of length <= {max_len}; lower the length cap")]
    CycleBudget { cap: usize, max_len: usize },
    #[error("matched pair ({0}, {1}) is not an edge")]
    PairNotEdge(usize, usize),
    #[error("vertex {0} appears in more than one matched pair")]
    PairOverlap(usize),
    #[error("contracting pair ({0}, {1}) creates a loop")]
    ContractionLoop(usize, usize),
    #[error("contracting pair ({0}, {1}) creates a parallel edge")]
    ContractionParallel(usize, usize),
    #[error("no simple {degree}-regular graph on {n} vertices")]
    NoRegularGraph { n: usize, degree: usize },
}

pub type Result<T> = std::result::Result<T, GraphError>;

/// Read access to an undirected simple graph on vertices `0..vertex_count()`.
///
/// Implemented by [`Graph`] and by the lighter views used during
/// construction, so the cycle routines below work on all of them.
pub trait Adjacency {
    type Iter<'a>: Iterator<Item = usize> + 'a
    where
        Self: 'a;

    fn vertex_count(&self) -> usize;

    fn neighbors(&self, v: usize) -> Self::Iter<'_>;
}

/// Immutable simple graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    declared_degree: Option<usize>,
}

/// Iterator over the neighbors of one vertex of a [`Graph`].
#[derive(Clone, Debug)]
pub struct Neighbors<'a>(std::slice::Iter<'a, u32>);

impl Iterator for Neighbors<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        self.0.next().map(|&w| w as usize)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.0.size_hint()
    }
}

impl ExactSizeIterator for Neighbors<'_> {}

impl Graph {
    /// Validates `edges` and builds the graph; degree uniformity is recorded.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n >= UNSEEN as usize {
            return Err(GraphError::TooLarge { n });
        }
        let mut degree = vec![0usize; n];
        for (index, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange { index, u, v, n });
            }
            if u == v {
                return Err(GraphError::Loop { index, u });
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for &k in &degree {
            offsets.push(offsets.last().unwrap() + k);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            targets[fill[u]] = v as u32;
            fill[u] += 1;
            targets[fill[v]] = u as u32;
            fill[v] += 1;
        }
        for u in 0..n {
            let row = &mut targets[offsets[u]..offsets[u + 1]];
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0] as usize;
                return Err(GraphError::Duplicate {
                    u: u.min(v),
                    v: u.max(v),
                });
            }
        }
        let declared_degree = match degree.first() {
            Some(&k) if degree.iter().all(|&x| x == k) => Some(k),
            _ => None,
        };
        Ok(Self {
            offsets,
            targets,
            declared_degree,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Common degree of every vertex, if the graph is regular.
    pub fn declared_degree(&self) -> Option<usize> {
        self.declared_degree
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> Neighbors<'_> {
        Neighbors(self.neighbor_slice(v).iter())
    }

    pub fn neighbor_slice(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        v < self.vertex_count() && self.neighbor_slice(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count())
            .flat_map(move |u| self.neighbors(u).filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// `y = A x`.
    pub fn apply_adjacency(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            *out = self.neighbor_slice(v).iter().map(|&w| x[w as usize]).sum();
        }
    }
}

impl Adjacency for Graph {
    type Iter<'a> = Neighbors<'a>;

    fn vertex_count(&self) -> usize {
        Graph::vertex_count(self)
    }

    fn neighbors(&self, v: usize) -> Neighbors<'_> {
        Graph::neighbors(self, v)
    }
}

/// A cycle stored as its canonical vertex sequence.
///
/// Among all rotations of both orientations the representative starts at the
/// smallest vertex and is lexicographically least. Cycles order by length
/// first, then by that sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    pub fn from_vertices(seq: &[usize]) -> Self {
        let len = seq.len();
        if len == 0 {
            return Self {
                vertices: Vec::new(),
            };
        }
        let mut best: Option<Vec<usize>> = None;
        let min = *seq.iter().min().unwrap();
        for start in (0..len).filter(|&i| seq[i] == min) {
            let fwd: Vec<usize> = (0..len).map(|i| seq[(start + i) % len]).collect();
            let bwd: Vec<usize> = (0..len).map(|i| seq[(start + len - i) % len]).collect();
            for cand in [fwd, bwd] {
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        Self {
            vertices: best.unwrap(),
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Oriented edges `(v_i, v_{i+1})`, closing back to the first vertex.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let len = self.vertices.len();
        (0..len).map(move |i| (self.vertices[i], self.vertices[(i + 1) % len]))
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.edges().any(|(x, y)| (x == a && y == b) || (x == b && y == a))
    }
}

impl Ord for Cycle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for Cycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// True when `walk` (implicitly closed) follows edges of `g` and never reuses one.
pub fn is_closed_trail<G: Adjacency>(g: &G, walk: &[usize]) -> bool {
    let len = walk.len();
    if len < 3 {
        return false;
    }
    let mut seen = Vec::with_capacity(len);
    for i in 0..len {
        let (a, b) = (walk[i], walk[(i + 1) % len]);
        if a >= g.vertex_count() || !g.neighbors(a).any(|w| w == b) {
            return false;
        }
        seen.push((a.min(b), a.max(b)));
    }
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Reusable breadth-first search scratch space.
#[derive(Clone, Debug)]
pub struct Bfs {
    dist: Vec<u32>,
    order: Vec<usize>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Self {
            dist: vec![UNSEEN; n],
            order: Vec::new(),
        }
    }

    /// Multi-source search out to `radius`, restricted to vertices for which
    /// `allow` holds (sources are always entered).
    pub fn run<G, F>(&mut self, g: &G, sources: &[usize], radius: usize, allow: F)
    where
        G: Adjacency,
        F: Fn(usize) -> bool,
    {
        self.clear();
        for &s in sources {
            if self.dist[s] == UNSEEN {
                self.dist[s] = 0;
                self.order.push(s);
            }
        }
        let mut head = 0;
        while head < self.order.len() {
            let u = self.order[head];
            head += 1;
            let du = self.dist[u] as usize;
            if du >= radius {
                continue;
            }
            for w in g.neighbors(u) {
                if self.dist[w] == UNSEEN && allow(w) {
                    self.dist[w] = (du + 1) as u32;
                    self.order.push(w);
                }
            }
        }
    }

    pub fn dist(&self, v: usize) -> Option<usize> {
        match self.dist[v] {
            UNSEEN => None,
            d => Some(d as usize),
        }
    }

    /// Vertices reached by the last search, in visiting order.
    pub fn visited(&self) -> &[usize] {
        &self.order
    }

    fn clear(&mut self) {
        for &v in &self.order {
            self.dist[v] = UNSEEN;
        }
        self.order.clear();
    }
}

/// Hop distance, or `None` when `v` is unreachable from `u`.
pub fn distance<G: Adjacency>(g: &G, u: usize, v: usize) -> Option<usize> {
    let mut bfs = Bfs::new(g.vertex_count());
    bfs.run(g, &[u], usize::MAX, |_| true);
    bfs.dist(v)
}

/// Sorted set of vertices within `radius` hops of `u`.
pub fn ball<G: Adjacency>(g: &G, u: usize, radius: usize) -> Vec<usize> {
    let mut bfs = Bfs::new(g.vertex_count());
    bfs.run(g, &[u], radius, |_| true);
    let mut out = bfs.visited().to_vec();
    out.sort_unstable();
    out
}

/// Length of the shortest cycle, or `None` for a forest.
pub fn girth<G: Adjacency>(g: &G) -> Option<usize> {
    shortest_cycle(g).map(|c| c.len())
}

/// A shortest cycle, found by breadth-first search from every vertex with
/// each search truncated at the best length seen so far.
pub fn shortest_cycle<G: Adjacency>(g: &G) -> Option<Cycle> {
    let n = g.vertex_count();
    let mut dist = vec![UNSEEN; n];
    let mut parent = vec![UNSEEN; n];
    let mut queue: Vec<usize> = Vec::new();
    let mut best = usize::MAX;
    let mut witness = None;
    for root in 0..n {
        if best == 3 {
            break;
        }
        dist[root] = 0;
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let du = dist[u] as usize;
            if 2 * du + 1 >= best {
                break;
            }
            for w in g.neighbors(u) {
                if dist[w] == UNSEEN {
                    dist[w] = (du + 1) as u32;
                    parent[w] = u as u32;
                    queue.push(w);
                } else if parent[u] != w as u32 {
                    let len = du + dist[w] as usize + 1;
                    if len < best {
                        best = len;
                        witness = Some((root, u, w));
                    }
                }
            }
        }
        for &v in &queue {
            dist[v] = UNSEEN;
            parent[v] = UNSEEN;
        }
        queue.clear();
    }
    let (root, u, w) = witness?;
    Some(trace_cycle(g, root, u, w))
}

fn trace_cycle<G: Adjacency>(g: &G, root: usize, u: usize, w: usize) -> Cycle {
    let n = g.vertex_count();
    let mut parent = vec![UNSEEN; n];
    let mut seen = vec![false; n];
    let mut queue = vec![root];
    seen[root] = true;
    let mut head = 0;
    while head < queue.len() && !(seen[u] && seen[w]) {
        let x = queue[head];
        head += 1;
        for y in g.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x as u32;
                queue.push(y);
            }
        }
    }
    let path = |mut x: usize| {
        let mut p = vec![x];
        while x != root {
            x = parent[x] as usize;
            p.push(x);
        }
        p.reverse();
        p
    };
    let mut seq = path(u);
    let back = path(w);
    seq.extend(back[1..].iter().rev());
    Cycle::from_vertices(&seq)
}

/// Every simple cycle of length at most `max_len`, sorted, each reported once.
pub fn enumerate_short_cycles<G: Adjacency>(g: &G, max_len: usize, cap: usize) -> Result<Vec<Cycle>> {
    enumerate_anchored(g, max_len, cap, |_| true)
}

/// Every simple cycle of length at most `max_len` that passes through at least
/// one vertex satisfying `is_anchor`.
///
/// Each cycle is discovered from its smallest anchor, so the search cost
/// scales with the anchor set rather than the whole graph.
pub fn enumerate_anchored<G, F>(g: &G, max_len: usize, cap: usize, is_anchor: F) -> Result<Vec<Cycle>>
where
    G: Adjacency,
    F: Fn(usize) -> bool,
{
    if max_len < 3 {
        return Err(GraphError::CapTooSmall(max_len));
    }
    let n = g.vertex_count();
    let mut search = PathSearch::new(n, max_len, cap);
    for s in (0..n).filter(|&s| is_anchor(s)) {
        let allowed = |v: usize| v >= s || !is_anchor(v);
        search.bfs.run(g, &[s], max_len / 2, allowed);
        search.reach = max_len / 2 + 1;
        search.path.clear();
        search.path.push(s);
        search.on_path[s] = true;
        search.closed_loops(g, s, &allowed)?;
        search.on_path[s] = false;
    }
    let mut out = search.found;
    out.sort_unstable();
    Ok(out)
}

/// Every simple cycle of length at most `max_len` that uses the edge `{a, b}`.
/// The edge itself need not be present in `g`; the search then reports the
/// cycles that adding it would create.
pub fn cycles_through_edge<G: Adjacency>(g: &G, a: usize, b: usize, max_len: usize, cap: usize) -> Result<Vec<Cycle>> {
    if max_len < 3 {
        return Ok(Vec::new());
    }
    let n = g.vertex_count();
    let mut search = PathSearch::new(n, max_len - 1, cap);
    let radius = max_len / 2;
    search.bfs.run(g, &[a], radius, |_| true);
    search.reach = radius + 1;
    search.path.push(b);
    search.on_path[b] = true;
    search.on_path[a] = true;
    search.paths_to(g, a)?;
    let mut out = search.found;
    out.sort_unstable();
    Ok(out)
}

struct PathSearch {
    bfs: Bfs,
    on_path: Vec<bool>,
    path: Vec<usize>,
    found: Vec<Cycle>,
    max_len: usize,
    reach: usize,
    cap: usize,
}

impl PathSearch {
    fn new(n: usize, max_len: usize, cap: usize) -> Self {
        Self {
            bfs: Bfs::new(n),
            on_path: vec![false; n],
            path: Vec::new(),
            found: Vec::new(),
            max_len,
            reach: 0,
            cap,
        }
    }

    fn lower_bound(&self, v: usize) -> usize {
        self.bfs.dist(v).unwrap_or(self.reach)
    }

    fn emit(&mut self, seq: &[usize]) -> Result<()> {
        if self.found.len() >= self.cap {
            return Err(GraphError::CycleBudget {
                cap: self.cap,
                max_len: self.max_len,
            });
        }
        self.found.push(Cycle::from_vertices(seq));
        Ok(())
    }

    fn closed_loops<G, F>(&mut self, g: &G, s: usize, allowed: &F) -> Result<()>
    where
        G: Adjacency,
        F: Fn(usize) -> bool,
    {
        let v = *self.path.last().unwrap();
        let depth = self.path.len() - 1;
        for w in g.neighbors(v) {
            if w == s {
                if depth >= 2 && self.path[1] < self.path[depth] {
                    let seq = self.path.clone();
                    self.emit(&seq)?;
                }
            } else if !self.on_path[w] && allowed(w) && depth + 1 + self.lower_bound(w) <= self.max_len {
                self.on_path[w] = true;
                self.path.push(w);
                self.closed_loops(g, s, allowed)?;
                self.path.pop();
                self.on_path[w] = false;
            }
        }
        Ok(())
    }

    /// Extends the path (which starts at `b`) until it reaches `a`.
    fn paths_to<G: Adjacency>(&mut self, g: &G, a: usize) -> Result<()> {
        let v = *self.path.last().unwrap();
        let depth = self.path.len() - 1;
        for w in g.neighbors(v) {
            if w == a {
                if depth >= 1 {
                    let mut seq = Vec::with_capacity(depth + 2);
                    seq.push(a);
                    seq.extend_from_slice(&self.path);
                    self.emit(&seq)?;
                }
            } else if !self.on_path[w] && depth + 1 + self.lower_bound(w) <= self.max_len {
                self.on_path[w] = true;
                self.path.push(w);
                self.paths_to(g, a)?;
                self.path.pop();
                self.on_path[w] = false;
            }
        }
        Ok(())
    }
}

/// A set of vertex-disjoint pairs, read as a bijection between the first and
/// second coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::PairOverlap(w[0]));
        }
        Ok(Self { pairs })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Result of contracting a matching: the new graph and the vertex map.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub graph: Graph,
    /// `map[v]` is the vertex of the contracted graph that `v` became.
    pub map: Vec<usize>,
}

/// Merges each matched pair into one vertex. New ids follow the order of the
/// original ids, a pair taking the position of its smaller endpoint.
pub fn contract_matching(g: &Graph, m: &Matching) -> Result<Contraction> {
    let n = g.vertex_count();
    const NONE: usize = usize::MAX;
    let mut partner = vec![NONE; n];
    for &(a, b) in m.pairs() {
        if a >= n || b >= n || !g.has_edge(a, b) {
            return Err(GraphError::PairNotEdge(a, b));
        }
        partner[a] = b;
        partner[b] = a;
    }
    let mut map = vec![NONE; n];
    let mut rep = Vec::with_capacity(n - m.len());
    for v in 0..n {
        let p = partner[v];
        if p != NONE && p < v {
            map[v] = map[p];
        } else {
            map[v] = rep.len();
            rep.push(v);
        }
    }
    let pair_of = |x: usize| {
        let r = rep[x];
        (r, partner[r])
    };
    let mut edges = Vec::with_capacity(g.edge_count() - m.len());
    for (u, v) in g.edges() {
        if partner[u] == v {
            continue;
        }
        let (a, b) = (map[u], map[v]);
        if a == b {
            let (p, q) = pair_of(a);
            return Err(GraphError::ContractionLoop(p, q));
        }
        edges.push((a.min(b), a.max(b)));
    }
    edges.sort_unstable();
    if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
        let (a, b) = w[0];
        let merged = if partner[rep[a]] != NONE { a } else { b };
        let (p, q) = pair_of(merged);
        return Err(GraphError::ContractionParallel(p, q));
    }
    let graph = Graph::from_edges(rep.len(), &edges)?;
    Ok(Contraction { graph, map })
}
