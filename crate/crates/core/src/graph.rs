//! Simple undirected graphs with dense vertex ids and the neighbourhood
//! predicates used throughout the crate (balls, boundaries, pockets, depth).

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Vertex identifier. Ids are dense: a graph on `n` vertices uses `0..n`.
pub type Vertex = u32;

/// An immutable simple undirected graph.
///
/// Adjacency lists are sorted and symmetric; there are no loops or parallel
/// edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u as usize >= n || v as usize >= n {
                return Err(Error::VertexOutOfRange {
                    vertex: u.max(v),
                    n,
                });
            }
            if u == v {
                return Err(Error::InvalidEdge {
                    index: i,
                    u,
                    v,
                    reason: "loop",
                });
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0];
                let index = edges
                    .iter()
                    .enumerate()
                    .filter(|(_, &(a, b))| (a.min(b), a.max(b)) == ((u as Vertex).min(v), (u as Vertex).max(v)))
                    .map(|(i, _)| i)
                    .nth(1)
                    .unwrap_or(0);
                return Err(Error::InvalidEdge {
                    index,
                    u: (u as Vertex).min(v),
                    v: (u as Vertex).max(v),
                    reason: "duplicate edge",
                });
            }
        }
        Ok(Graph {
            adj,
            m: edges.len(),
        })
    }

    /// Builds a graph from possibly redundant edges: loops are dropped and
    /// parallel edges merged.
    pub fn from_edges_lossy(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u != v {
                adj[u as usize].push(v);
                adj[v as usize].push(u);
            }
        }
        let mut m = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Graph { adj, m: m / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len() as Vertex
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, sorted ascending.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, list) in self.adj.iter().enumerate() {
            let u = u as Vertex;
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if (v as usize) < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Induced subgraph on `set`; vertex `i` of the result is `set[i]`.
    pub fn induced(&self, set: &[Vertex]) -> Graph {
        let mut index = std::collections::HashMap::with_capacity(set.len());
        for (i, &v) in set.iter().enumerate() {
            index.insert(v, i as Vertex);
        }
        let mut adj = vec![Vec::new(); set.len()];
        let mut m = 0;
        for (i, &v) in set.iter().enumerate() {
            for w in self.neighbours(v) {
                if let Some(&j) = index.get(w) {
                    adj[i].push(j);
                    m += 1;
                }
            }
            adj[i].sort_unstable();
        }
        Graph { adj, m: m / 2 }
    }

    /// The graph with the vertices of `removed` deleted; ids are kept, so the
    /// deleted vertices simply become isolated.
    pub fn without_vertices(&self, removed: &[bool]) -> Graph {
        let edges = self
            .edges()
            .into_iter()
            .filter(|&(u, v)| !removed[u as usize] && !removed[v as usize]);
        Graph::from_edges_lossy(self.n(), edges)
    }

    /// Connected components as sorted vertex lists, ordered by minimum vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s as usize] {
                continue;
            }
            seen[s as usize] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in self.neighbours(u) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// BFS distances from `src`; `None` for unreachable vertices.
    pub fn distances(&self, src: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src as usize] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u as usize].unwrap();
            for &w in self.neighbours(u) {
                if dist[w as usize].is_none() {
                    dist[w as usize] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}

/// A sorted set of vertex ids belonging to a host graph with `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    ids: Vec<Vertex>,
    n: usize,
}

impl VertexSet {
    /// Builds a set, sorting and checking bounds; duplicates are rejected.
    pub fn new(n: usize, ids: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut ids: Vec<Vertex> = ids.into_iter().collect();
        ids.sort_unstable();
        if let Some(&v) = ids.iter().find(|&&v| v as usize >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateVertex(w[0]));
        }
        Ok(VertexSet { ids, n })
    }

    pub fn of(g: &Graph, ids: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        VertexSet::new(g.n(), ids)
    }

    pub fn empty(n: usize) -> Self {
        VertexSet { ids: Vec::new(), n }
    }

    pub fn host_n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.ids
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.ids.iter().copied()
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.ids
    }

    pub fn mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n];
        for &v in &self.ids {
            mask[v as usize] = true;
        }
        mask
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.ids.len() && j < other.ids.len() {
            match self.ids[i].cmp(&other.ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }
}

/// Vertices at distance at most `r` from `v`, including `v`.
pub fn ball(g: &Graph, v: Vertex, r: usize) -> Result<VertexSet> {
    g.check_vertex(v)?;
    let mut dist = vec![usize::MAX; g.n()];
    dist[v as usize] = 0;
    let mut order = vec![v];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        let d = dist[u as usize];
        if d == r {
            continue;
        }
        for &w in g.neighbours(u) {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = d + 1;
                order.push(w);
            }
        }
    }
    order.sort_unstable();
    Ok(VertexSet { ids: order, n: g.n() })
}

/// `(boundary, coboundary)` of `s`: the members of `s` with a neighbour
/// outside, and the outside vertices with a neighbour in `s`.
pub fn boundary_and_coboundary(g: &Graph, s: &VertexSet) -> Result<(VertexSet, VertexSet)> {
    check_set(g, s)?;
    let inside = s.mask();
    let mut boundary = Vec::new();
    let mut cob = vec![false; g.n()];
    for v in s.iter() {
        let mut outside = false;
        for &w in g.neighbours(v) {
            if !inside[w as usize] {
                outside = true;
                cob[w as usize] = true;
            }
        }
        if outside {
            boundary.push(v);
        }
    }
    let coboundary = (0..g.n() as Vertex).filter(|&v| cob[v as usize]).collect();
    Ok((
        VertexSet { ids: boundary, n: g.n() },
        VertexSet { ids: coboundary, n: g.n() },
    ))
}

/// True when `g[s]` is connected, `|s| <= cap` and every member has host
/// degree at most `cap`.
pub fn is_pocket(g: &Graph, s: &VertexSet, cap: usize) -> Result<bool> {
    check_set(g, s)?;
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if s.len() > cap || s.iter().any(|v| g.degree(v) > cap) {
        return Ok(false);
    }
    Ok(induces_connected(g, s.as_slice()))
}

/// True when the coboundary of `s` is non-empty and `|coboundary| <= |s| / k`.
pub fn is_deep(g: &Graph, s: &VertexSet, k: usize) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    if k == 0 {
        return Err(Error::InvalidParameter("depth k must be positive".into()));
    }
    let (_, cob) = boundary_and_coboundary(g, s)?;
    // |cob| <= |s|/k  <=>  k|cob| <= |s|
    Ok(!cob.is_empty() && k * cob.len() <= s.len())
}

/// Whether the subgraph induced by `set` (sorted) is connected. The empty
/// set counts as connected.
pub fn induces_connected(g: &Graph, set: &[Vertex]) -> bool {
    if set.len() <= 1 {
        return true;
    }
    let mut seen = vec![false; set.len()];
    seen[0] = true;
    let mut stack = vec![0usize];
    let mut count = 1;
    while let Some(i) = stack.pop() {
        for w in g.neighbours(set[i]) {
            if let Ok(j) = set.binary_search(w) {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
    }
    count == set.len()
}

/// Vertex sets of the blocks (maximal 2-connected pieces, bridges and
/// isolated vertices) of `g`, each sorted.
pub fn blocks(g: &Graph) -> Vec<Vec<Vertex>> {
    let n = g.n();
    let mut disc = vec![0usize; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut out = Vec::new();
    let mut vstack: Vec<Vertex> = Vec::new();
    // (vertex, parent, next neighbour index)
    let mut frames: Vec<(Vertex, Option<Vertex>, usize)> = Vec::new();
    for root in 0..n as Vertex {
        if disc[root as usize] != 0 {
            continue;
        }
        if g.degree(root) == 0 {
            out.push(vec![root]);
            continue;
        }
        time += 1;
        disc[root as usize] = time;
        low[root as usize] = time;
        vstack.push(root);
        frames.push((root, None, 0));
        while let Some(frame) = frames.last_mut() {
            let (v, parent, i) = *frame;
            if i < g.degree(v) {
                frame.2 += 1;
                let w = g.neighbours(v)[i];
                if disc[w as usize] == 0 {
                    time += 1;
                    disc[w as usize] = time;
                    low[w as usize] = time;
                    vstack.push(w);
                    frames.push((w, Some(v), 0));
                } else if Some(w) != parent {
                    low[v as usize] = low[v as usize].min(disc[w as usize]);
                }
                continue;
            }
            frames.pop();
            if let Some(p) = parent {
                low[p as usize] = low[p as usize].min(low[v as usize]);
                if low[v as usize] >= disc[p as usize] {
                    let mut block = vec![p];
                    loop {
                        let x = vstack.pop().unwrap();
                        block.push(x);
                        if x == v {
                            break;
                        }
                    }
                    block.sort_unstable();
                    out.push(block);
                }
            }
        }
        vstack.clear();
    }
    out
}

fn check_set(g: &Graph, s: &VertexSet) -> Result<()> {
    if let Some(v) = s.iter().find(|&v| v as usize >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(())
}

/// Small constructors used by tests, examples and generators.
pub mod named {
    use super::{Graph, Vertex};

    pub fn path(n: usize) -> Graph {
        Graph::from_edges_lossy(n, (1..n as Vertex).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least three vertices");
        Graph::from_edges_lossy(n, (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex)))
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                edges.push((u, v));
            }
        }
        Graph::from_edges_lossy(n, edges)
    }

    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges_lossy(leaves + 1, (1..=leaves as Vertex).map(|i| (0, i)))
    }

    /// `K_4` minus the edge `{0, 3}`; vertices 0 and 3 have degree two.
    pub fn k4_minus_edge() -> Graph {
        Graph::from_edges_lossy(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])
    }
}
