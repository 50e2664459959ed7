//! Seeded graph families and list assignments.
//!
//! Every random family draws from [`SplitMix64`] seeded with the given
//! seed, so a `(family, parameters, seed)` triple always yields the same
//! canonical graph.

use serde::{Deserialize, Serialize};

use crate::colouring::{Colour, ListAssignment};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};
use crate::io::GraphMetadata;
use crate::rng::SplitMix64;

pub const DEFAULT_DROP_PROBABILITY: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Necklace,
    Sp,
    Planar,
    WagnerSum,
    V8,
    Tree,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Necklace => "necklace",
            Family::Sp => "sp",
            Family::Planar => "planar",
            Family::WagnerSum => "wagner-sum",
            Family::V8 => "v8",
            Family::Tree => "tree",
        }
    }

    /// `t` such that every member of the family is `K_t`-minor-free.
    pub fn certified_minor_free(self) -> Option<u32> {
        match self {
            Family::Necklace => None,
            Family::Sp => Some(4),
            Family::Planar | Family::WagnerSum | Family::V8 => Some(5),
            Family::Tree => Some(3),
        }
    }
}

/// Everything needed to regenerate a graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    /// Target vertex count (necklace: number of copies).
    pub n: usize,
    /// Clique order for necklaces.
    pub t: usize,
    /// Vertices per planar block for Wagner compositions.
    pub block_size: usize,
    pub seed: u64,
    pub drop_probability: f64,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        GenSpec {
            family,
            n,
            t: 4,
            block_size: 12,
            seed,
            drop_probability: DEFAULT_DROP_PROBABILITY,
        }
    }

    pub fn generate(&self) -> Result<(Graph, GraphMetadata)> {
        let g = match self.family {
            Family::Necklace => necklace(self.t, self.n)?,
            Family::Sp => series_parallel_random(self.n, self.seed)?,
            Family::Planar => planar_triangulation_random(self.n, self.seed)?,
            Family::WagnerSum => {
                let blocks = (self.n / self.block_size.saturating_sub(2).max(1)).max(1);
                wagner_composition_with(blocks, self.block_size, self.seed, self.drop_probability)?
            }
            Family::V8 => wagner_v8(),
            Family::Tree => random_tree(self.n, self.seed)?,
        };
        let random = !matches!(self.family, Family::Necklace | Family::V8);
        Ok((
            g,
            GraphMetadata {
                family: self.family.name().into(),
                seed: random.then_some(self.seed),
                certified_minor_free: self.family.certified_minor_free(),
            },
        ))
    }
}

/// `n` copies of `K_t` minus an edge chained end to end, closed by one edge
/// between the two free ends.
///
/// Spine vertices are `0..=n` in the order of the chain; copy `i` joins
/// spine vertices `i` and `i + 1` (its two non-adjacent vertices) and owns
/// the `t - 2` vertices `n + 1 + i(t - 2) ..`.
pub fn necklace(t: usize, n: usize) -> Result<Graph> {
    if t < 3 || n < 1 {
        return Err(Error::InvalidParameter(format!("necklace needs t >= 3 and n >= 1, got t = {t}, n = {n}")));
    }
    let total = n * (t - 1) + 1;
    let mut edges = Vec::new();
    for i in 0..n {
        let b = i as Vertex;
        let a = b + 1;
        let mids: Vec<Vertex> = (0..t - 2).map(|j| (n + 1 + i * (t - 2) + j) as Vertex).collect();
        for (x, &m) in mids.iter().enumerate() {
            edges.push((b, m));
            edges.push((a, m));
            for &m2 in &mids[x + 1..] {
                edges.push((m, m2));
            }
        }
    }
    edges.push((0, n as Vertex));
    Ok(Graph::from_edges_lossy(total, edges))
}

/// The Wagner graph: an 8-cycle plus its four long diagonals.
pub fn wagner_v8() -> Graph {
    Graph::from_edges_lossy(8, (0..8).map(|i| (i, (i + 1) % 8)).chain((0..4).map(|i| (i, i + 4))))
}

/// Grows `K_2` by subdividing a random edge or adding a path of length two
/// parallel to it, one new vertex per step.
pub fn series_parallel_random(n: usize, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter("series-parallel graphs need n >= 2".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut edges: Vec<(Vertex, Vertex)> = vec![(0, 1)];
    for w in 2..n as Vertex {
        let i = rng.index(edges.len());
        let (u, v) = edges[i];
        if rng.below(2) == 0 {
            edges[i] = (u, w);
            edges.push((w, v));
        } else {
            edges.push((u, w));
            edges.push((w, v));
        }
    }
    Ok(Graph::from_edges_lossy(n, edges))
}

/// Stacked triangulation: start from a triangle (two faces) and repeatedly
/// put a new vertex in a random face, joined to its three corners.
pub fn planar_triangulation_random(n: usize, seed: u64) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter("triangulations need n >= 3".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut faces: Vec<[Vertex; 3]> = vec![[0, 1, 2], [0, 1, 2]];
    let mut edges = vec![(0, 1), (1, 2), (0, 2)];
    for w in 3..n as Vertex {
        let i = rng.index(faces.len());
        let [a, b, c] = faces[i];
        edges.extend([(a, w), (b, w), (c, w)]);
        faces[i] = [a, b, w];
        faces.push([b, c, w]);
        faces.push([a, c, w]);
    }
    Ok(Graph::from_edges_lossy(n, edges))
}

/// Glues `g2` onto `g1` along equally sized cliques (matched in sorted id
/// order), then deletes the `drop` edges, given in `g1`'s ids, from the
/// identified clique. `g1` keeps its ids; the other vertices of `g2` follow
/// in increasing order.
pub fn clique_sum(
    g1: &Graph,
    k1: &VertexSet,
    g2: &Graph,
    k2: &VertexSet,
    drop: &[(Vertex, Vertex)],
) -> Result<Graph> {
    if k1.len() != k2.len() {
        return Err(Error::InvalidParameter("clique sizes differ".into()));
    }
    for (g, k) in [(g1, k1), (g2, k2)] {
        let ids = k.as_slice();
        for (i, &u) in ids.iter().enumerate() {
            g.check_vertex(u)?;
            if ids[i + 1..].iter().any(|&v| !g.has_edge(u, v)) {
                return Err(Error::InvalidParameter("summed vertex set is not a clique".into()));
            }
        }
    }
    let mut map = vec![0 as Vertex; g2.n()];
    let mut next = g1.n() as Vertex;
    for v in g2.vertices() {
        map[v as usize] = match k2.as_slice().binary_search(&v) {
            Ok(i) => k1.as_slice()[i],
            Err(_) => {
                next += 1;
                next - 1
            }
        };
    }
    let mut dropped = Vec::new();
    for &(u, v) in drop {
        if !k1.contains(u) || !k1.contains(v) || u == v {
            return Err(Error::InvalidParameter(format!("edge ({u},{v}) is not inside the summed clique")));
        }
        dropped.push((u.min(v), u.max(v)));
    }
    let edges = g1
        .edges()
        .into_iter()
        .chain(g2.edges().into_iter().map(|(u, v)| {
            let (a, b) = (map[u as usize], map[v as usize]);
            (a.min(b), a.max(b))
        }))
        .filter(|e| !dropped.contains(e));
    Ok(Graph::from_edges_lossy(next as usize, edges))
}

pub fn wagner_composition_random(blocks: usize, n_per_block: usize, seed: u64) -> Result<Graph> {
    wagner_composition_with(blocks, n_per_block, seed, DEFAULT_DROP_PROBABILITY)
}

/// Clique sums (order 1 to 3) of random stacked triangulations and copies
/// of `V_8`. Each new block is glued to a random clique of the graph built
/// so far; each identified edge is then dropped with probability `drop_p`.
pub fn wagner_composition_with(blocks: usize, n_per_block: usize, seed: u64, drop_p: f64) -> Result<Graph> {
    if blocks < 1 || n_per_block < 3 {
        return Err(Error::InvalidParameter("need blocks >= 1 and n_per_block >= 3".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let next_block = |rng: &mut SplitMix64| -> Result<Graph> {
        if rng.below(4) == 0 {
            Ok(wagner_v8())
        } else {
            planar_triangulation_random(n_per_block, rng.next_u64())
        }
    };
    let mut g = next_block(&mut rng)?;
    for _ in 1..blocks {
        let block = next_block(&mut rng)?;
        let arity = 1 + rng.index(3);
        let k1 = random_clique(&g, arity, &mut rng);
        let k2 = random_clique(&block, k1.len(), &mut rng);
        let k = k1.len().min(k2.len());
        let (k1, k2) = (&k1[..k], &k2[..k]);
        let mut drop = Vec::new();
        for (i, &u) in k1.iter().enumerate() {
            for &v in &k1[i + 1..] {
                if rng.chance(drop_p) {
                    drop.push((u, v));
                }
            }
        }
        let s1 = VertexSet::new(g.n(), k1.iter().copied())?;
        let s2 = VertexSet::new(block.n(), k2.iter().copied())?;
        g = clique_sum(&g, &s1, &block, &s2, &drop)?;
    }
    Ok(g)
}

/// A clique of size at most `size` (sorted): a random vertex, then a random
/// edge at it, then a common neighbour if one exists. Falls back to fewer
/// vertices when the graph has no larger clique there.
fn random_clique(g: &Graph, size: usize, rng: &mut SplitMix64) -> Vec<Vertex> {
    let u = rng.index(g.n()) as Vertex;
    let mut clique = vec![u];
    if size >= 2 && g.degree(u) > 0 {
        let v = g.neighbours(u)[rng.index(g.degree(u))];
        clique.push(v);
        if size >= 3 {
            let common: Vec<Vertex> = g.neighbours(u).iter().copied().filter(|&w| g.has_edge(v, w)).collect();
            if !common.is_empty() {
                clique.push(common[rng.index(common.len())]);
            }
        }
    }
    clique.sort_unstable();
    clique
}

/// A random labelled tree: vertex `i > 0` hangs off a uniform earlier vertex.
pub fn random_tree(n: usize, seed: u64) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParameter("trees need n >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    Ok(Graph::from_edges_lossy(
        n,
        (1..n as Vertex).map(|i| (rng.below(i as u64) as Vertex, i)),
    ))
}

/// Each vertex, in id order, gets a uniform `size`-subset of
/// `0..universe` (partial Fisher-Yates), stored sorted.
pub fn random_lists(g: &Graph, size: usize, universe: u32, seed: u64) -> Result<ListAssignment> {
    if size > universe as usize {
        return Err(Error::InvalidParameter(format!("list size {size} exceeds universe {universe}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut pool: Vec<Colour> = (0..universe).collect();
    let lists = (0..g.n())
        .map(|_| {
            for i in 0..size {
                let j = i + rng.index(pool.len() - i);
                pool.swap(i, j);
            }
            pool[..size].to_vec()
        })
        .collect();
    ListAssignment::new(universe, lists)
}
