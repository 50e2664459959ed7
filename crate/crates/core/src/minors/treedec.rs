use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Bags indexed by the nodes of `tree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: Graph,
    pub bags: Vec<Vec<Vertex>>,
}

impl TreeDecomposition {
    /// Largest bag size minus one (`-1` for no bags or only empty ones).
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }
}

/// Checks the three decomposition axioms and that the tree is a tree.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> std::result::Result<(), String> {
    let nodes = td.tree.n();
    if nodes != td.bags.len() {
        return Err(format!("{} tree nodes but {} bags", nodes, td.bags.len()));
    }
    if nodes == 0 || td.tree.m() != nodes - 1 || !td.tree.is_connected() {
        return Err("the decomposition tree is not a tree".into());
    }
    let mut holders: Vec<Vec<Vertex>> = vec![Vec::new(); g.n()];
    for (x, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v as usize >= g.n() {
                return Err(format!("bag {x} names vertex {v} outside the graph"));
            }
            holders[v as usize].push(x as Vertex);
        }
    }
    for v in g.vertices() {
        if holders[v as usize].is_empty() {
            return Err(format!("vertex {v} is in no bag"));
        }
        if !crate::graph::induces_connected(&td.tree, &holders[v as usize]) {
            return Err(format!("bags holding vertex {v} are not connected in the tree"));
        }
    }
    for (u, v) in g.edges() {
        let covered = holders[u as usize].iter().any(|x| holders[v as usize].contains(x));
        if !covered {
            return Err(format!("edge ({u},{v}) lies in no bag"));
        }
    }
    Ok(())
}

/// A decomposition of width at most two, or `None` when `g` has a `K_4`
/// minor. Vertices are eliminated, lowest degree first, while some vertex
/// has at most two remaining neighbours (these become adjacent); each
/// vertex's bag is itself plus those neighbours, hung below the bag of
/// whichever of them is eliminated first.
pub fn tree_decomposition_w2(g: &Graph) -> Option<TreeDecomposition> {
    let n = g.n();
    if n == 0 {
        return Some(TreeDecomposition {
            tree: Graph::empty(1),
            bags: vec![Vec::new()],
        });
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbours(v).iter().copied().collect()).collect();
    let mut gone = vec![false; n];
    let mut step = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut bags = vec![Vec::new(); n];
    // lowest remaining degree first, so forests stay at width one
    let mut buckets: [Vec<Vertex>; 3] = Default::default();
    for v in g.vertices().rev() {
        if adj[v as usize].len() <= 2 {
            buckets[adj[v as usize].len()].push(v);
        }
    }
    while let Some(d) = (0..3).find(|&d| !buckets[d].is_empty()) {
        let v = buckets[d].pop().unwrap();
        if gone[v as usize] || adj[v as usize].len() != d {
            continue;
        }
        gone[v as usize] = true;
        step[v as usize] = order.len();
        order.push(v);
        let nb: Vec<Vertex> = std::mem::take(&mut adj[v as usize]).into_iter().collect();
        for &w in &nb {
            adj[w as usize].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a as usize].insert(b);
            adj[b as usize].insert(a);
        }
        for &w in &nb {
            let dw = adj[w as usize].len();
            if dw <= 2 {
                buckets[dw].push(w);
            }
        }
        let mut bag = nb;
        bag.push(v);
        bag.sort_unstable();
        bags[v as usize] = bag;
    }
    if order.len() < n {
        return None;
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for &v in &order {
        let later = bags[v as usize]
            .iter()
            .copied()
            .filter(|&w| w != v)
            .min_by_key(|&w| step[w as usize]);
        match later {
            Some(p) => edges.push((v, p)),
            None => roots.push(v),
        }
    }
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    Some(TreeDecomposition {
        tree: Graph::from_edges_lossy(n, edges),
        bags,
    })
}

/// Rewrites `td` so that every bag has exactly `k + 1` vertices and
/// adjacent bags share exactly `k`. Needs at least `k + 1` graph vertices.
pub fn make_smooth(td: &TreeDecomposition, k: usize) -> Result<TreeDecomposition> {
    if td.width() > k as i64 {
        return Err(Error::InvalidParameter(format!("width {} exceeds {k}", td.width())));
    }
    let universe: BTreeSet<Vertex> = td.bags.iter().flatten().copied().collect();
    if universe.len() < k + 1 {
        return Err(Error::InvalidParameter(format!(
            "{} vertices cannot fill bags of size {}",
            universe.len(),
            k + 1
        )));
    }
    let mut bags: Vec<BTreeSet<Vertex>> = td.bags.iter().map(|b| b.iter().copied().collect()).collect();
    let mut adj: Vec<BTreeSet<usize>> = td
        .tree
        .vertices()
        .map(|x| td.tree.neighbours(x).iter().map(|&y| y as usize).collect())
        .collect();
    let mut alive = vec![true; bags.len()];

    // grow small bags from their neighbours until everything has k + 1
    loop {
        let mut changed = false;
        for x in 0..bags.len() {
            if !alive[x] || bags[x].len() > k {
                continue;
            }
            let extra: Vec<Vertex> = adj[x]
                .iter()
                .flat_map(|&y| bags[y].iter().copied())
                .filter(|v| !bags[x].contains(v))
                .collect();
            for v in extra {
                if bags[x].len() > k {
                    break;
                }
                changed |= bags[x].insert(v);
            }
        }
        if !changed {
            break;
        }
    }

    // merge equal neighbours
    loop {
        let pair = (0..bags.len())
            .filter(|&x| alive[x])
            .flat_map(|x| adj[x].iter().map(move |&y| (x, y)))
            .find(|&(x, y)| bags[x] == bags[y]);
        let Some((x, y)) = pair else { break };
        alive[y] = false;
        let ys: Vec<usize> = std::mem::take(&mut adj[y]).into_iter().collect();
        for z in ys {
            adj[z].remove(&y);
            if z != x {
                adj[z].insert(x);
                adj[x].insert(z);
            }
        }
    }

    // renumber and bridge edges whose bags overlap in fewer than k vertices
    let mut index = vec![0; bags.len()];
    let mut next = 0;
    for x in 0..bags.len() {
        index[x] = next;
        next += alive[x] as usize;
    }
    let mut out_bags: Vec<Vec<Vertex>> = (0..bags.len())
        .filter(|&x| alive[x])
        .map(|x| bags[x].iter().copied().collect())
        .collect();
    let mut edges = Vec::new();
    for x in (0..bags.len()).filter(|&x| alive[x]) {
        for &y in adj[x].iter().filter(|&&y| y > x) {
            let mut cur = bags[x].clone();
            let mut prev = index[x];
            loop {
                let out = cur.iter().copied().find(|v| !bags[y].contains(v));
                let inn = bags[y].iter().copied().find(|v| !cur.contains(v));
                let (Some(out), Some(inn)) = (out, inn) else { break };
                cur.remove(&out);
                cur.insert(inn);
                if cur == bags[y] {
                    break;
                }
                out_bags.push(cur.iter().copied().collect());
                let id = out_bags.len() - 1;
                edges.push((prev as Vertex, id as Vertex));
                prev = id;
            }
            edges.push((prev as Vertex, index[y] as Vertex));
        }
    }
    Ok(TreeDecomposition {
        tree: Graph::from_edges_lossy(out_bags.len(), edges),
        bags: out_bags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_tree, series_parallel_random};
    use crate::graph::named;

    fn check_smooth(td: &TreeDecomposition, k: usize) {
        assert!(td.bags.iter().all(|b| b.len() == k + 1));
        for (x, y) in td.tree.edges() {
            let shared = td.bags[x as usize].iter().filter(|v| td.bags[y as usize].contains(v)).count();
            assert_eq!(shared, k);
        }
    }

    #[test]
    fn k4_has_none_and_trees_have_width_one() {
        assert!(tree_decomposition_w2(&named::complete(4)).is_none());
        let t = random_tree(30, 5).unwrap();
        let td = tree_decomposition_w2(&t).unwrap();
        assert!(td.width() <= 1);
        validate_decomposition(&t, &td).unwrap();
    }

    #[test]
    fn small_smoothing_examples() {
        let k3 = named::complete(3);
        let single = TreeDecomposition {
            tree: Graph::empty(1),
            bags: vec![vec![0, 1, 2]],
        };
        assert_eq!(make_smooth(&single, 2).unwrap(), single);
        let p3 = named::path(3);
        let td = TreeDecomposition {
            tree: named::path(2),
            bags: vec![vec![0, 1], vec![1, 2]],
        };
        let smooth = make_smooth(&td, 2).unwrap();
        validate_decomposition(&p3, &smooth).unwrap();
        check_smooth(&smooth, 2);
        validate_decomposition(&k3, &single).unwrap();
        assert!(make_smooth(&single, 1).is_err());
    }

    #[test]
    fn series_parallel_graphs_smooth() {
        for seed in 0..30 {
            let g = series_parallel_random(60, seed).unwrap();
            let td = tree_decomposition_w2(&g).unwrap();
            assert!(td.width() <= 2);
            validate_decomposition(&g, &td).unwrap();
            let smooth = make_smooth(&td, 2).unwrap();
            validate_decomposition(&g, &smooth).unwrap();
            check_smooth(&smooth, 2);
        }
    }
}
