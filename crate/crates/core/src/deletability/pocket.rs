//! Searching for deletable connected vertex sets.
//!
//! Candidates are produced breadth first: all admissible singletons, then
//! all admissible connected sets of size two, and so on, each layer in
//! lexicographic order of sorted id vectors. The first `yes` verdict wins,
//! so the answer is the canonical minimum under (size, ids).

use std::collections::BTreeSet;

use super::{deletable_in, Neighbourhoods, DEFAULT_EXACT_CAP};
use crate::error::Result;
use crate::graph::{Graph, Vertex, VertexSet};

/// The canonical first `c`-deletable pocket (connected, at most
/// `min(size_cap, cap)` vertices, each of host degree at most `cap`)
/// containing `v`.
pub fn find_deletable_pocket(g: &Graph, v: Vertex, cap: usize, c: i64, size_cap: usize) -> Result<Option<VertexSet>> {
    g.check_vertex(v)?;
    let found = find_deletable_pocket_in(g, v, cap, c, size_cap, DEFAULT_EXACT_CAP);
    Ok(found.map(|ids| VertexSet::new(g.n(), ids).expect("ids come from g")))
}

/// [`find_deletable_pocket`] over any neighbourhood view; vertices the view
/// does not know are never used.
pub fn find_deletable_pocket_in<V: Neighbourhoods + ?Sized>(
    view: &V,
    v: Vertex,
    cap: usize,
    c: i64,
    size_cap: usize,
    exact_cap: usize,
) -> Option<Vec<Vertex>> {
    let admissible = |u: Vertex| view.neighbours_of(u).is_some_and(|nb| nb.len() <= cap);
    layered_search(view, vec![v], admissible, size_cap.min(cap), c, exact_cap)
}

/// The canonical first `c`-deletable connected set of at most `size_cap`
/// vertices avoiding `x`. No degree cap applies.
pub fn find_deletable_disjoint_from(g: &Graph, x: &VertexSet, c: i64, size_cap: usize) -> Result<Option<VertexSet>> {
    let blocked = x.mask();
    if blocked.len() != g.n() {
        return Err(crate::error::Error::InvalidParameter("x belongs to another graph".into()));
    }
    let seeds: Vec<Vertex> = g.vertices().filter(|&u| !blocked[u as usize]).collect();
    let found = layered_search(g, seeds, |u| !blocked[u as usize], size_cap, c, DEFAULT_EXACT_CAP);
    Ok(found.map(|ids| VertexSet::new(g.n(), ids).expect("ids come from g")))
}

fn layered_search<V: Neighbourhoods + ?Sized>(
    view: &V,
    seeds: Vec<Vertex>,
    admissible: impl Fn(Vertex) -> bool,
    size_cap: usize,
    c: i64,
    exact_cap: usize,
) -> Option<Vec<Vertex>> {
    let mut layer: BTreeSet<Vec<Vertex>> = seeds.into_iter().filter(|&u| admissible(u)).map(|u| vec![u]).collect();
    for size in 1..=size_cap {
        for set in &layer {
            if deletable_in(view, set, c, exact_cap).is_some_and(|v| v.is_yes()) {
                return Some(set.clone());
            }
        }
        if size == size_cap {
            break;
        }
        let mut next = BTreeSet::new();
        for set in &layer {
            for &u in set {
                for &w in view.neighbours_of(u).unwrap_or(&[]) {
                    if set.binary_search(&w).is_err() && admissible(w) {
                        let mut bigger = set.clone();
                        let pos = bigger.binary_search(&w).unwrap_err();
                        bigger.insert(pos, w);
                        next.insert(bigger);
                    }
                }
            }
        }
        layer = next;
    }
    None
}
