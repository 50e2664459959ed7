//! Exact list colouring by backtracking.
//!
//! Vertices are picked by smallest remaining list (ties to the smallest id),
//! colours are tried in ascending order and every assignment is forward
//! checked against uncoloured neighbours. Components are solved
//! independently, so the result is a deterministic function of the graph
//! and the lists.

use crate::colouring::{Colour, Colouring, ListAssignment};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Finds an `L`-colouring of `g`, or proves none exists.
pub fn list_colour_exhaustive(g: &Graph, lists: &ListAssignment) -> Result<Option<Colouring>> {
    if lists.n() != g.n() {
        return Err(Error::InvalidParameter("list assignment size mismatch".into()));
    }
    Ok(solve_lists(g, lists.lists()).map(Colouring::from_total))
}

/// Same as [`list_colour_exhaustive`] on raw lists (each sorted, distinct).
pub fn solve_lists(g: &Graph, lists: &[Vec<Colour>]) -> Option<Vec<Colour>> {
    let mut out = vec![0; g.n()];
    for comp in g.components() {
        let solved = if comp.len() == g.n() {
            Search::new(g, lists).run()?
        } else {
            let sub = g.induced(&comp);
            let sub_lists: Vec<Vec<Colour>> = comp.iter().map(|&v| lists[v as usize].clone()).collect();
            Search::new(&sub, &sub_lists).run()?
        };
        for (i, &v) in comp.iter().enumerate() {
            out[v as usize] = solved[i];
        }
    }
    Some(out)
}

/// Smallest `k <= limit` such that `g` is `k`-colourable.
pub fn chromatic_number_exact(g: &Graph, limit: u32) -> ChromaticOutcome {
    if g.n() == 0 {
        return ChromaticOutcome::Exact(0);
    }
    for k in 1..=limit {
        let lists = vec![(0..k).collect::<Vec<_>>(); g.n()];
        if solve_lists(g, &lists).is_some() {
            return ChromaticOutcome::Exact(k);
        }
    }
    ChromaticOutcome::ExceedsLimit(limit)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChromaticOutcome {
    Exact(u32),
    ExceedsLimit(u32),
}

struct Search<'a> {
    g: &'a Graph,
    lists: &'a [Vec<Colour>],
    colour: Vec<Option<Colour>>,
    // blocked[v][i] counts coloured neighbours holding lists[v][i]
    blocked: Vec<Vec<u16>>,
    avail: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, lists: &'a [Vec<Colour>]) -> Self {
        Search {
            g,
            lists,
            colour: vec![None; g.n()],
            blocked: lists.iter().map(|l| vec![0; l.len()]).collect(),
            avail: lists.iter().map(Vec::len).collect(),
        }
    }

    fn run(mut self) -> Option<Vec<Colour>> {
        if self.rec(self.g.n()) {
            Some(self.colour.into_iter().map(|c| c.unwrap()).collect())
        } else {
            None
        }
    }

    fn pick(&self) -> Option<Vertex> {
        let mut best: Option<(usize, Vertex)> = None;
        for v in 0..self.g.n() {
            if self.colour[v].is_none() {
                let key = (self.avail[v], v as Vertex);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, v)| v)
    }

    fn rec(&mut self, remaining: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        let v = self.pick().unwrap();
        if self.avail[v as usize] == 0 {
            return false;
        }
        for i in 0..self.lists[v as usize].len() {
            if self.blocked[v as usize][i] != 0 {
                continue;
            }
            let c = self.lists[v as usize][i];
            if self.assign(v, c) && self.rec(remaining - 1) {
                return true;
            }
            self.unassign(v, c);
        }
        false
    }

    /// Colours `v` with `c`; returns false when some uncoloured neighbour is
    /// left without options (the caller still undoes via `unassign`).
    fn assign(&mut self, v: Vertex, c: Colour) -> bool {
        self.colour[v as usize] = Some(c);
        let mut ok = true;
        for &w in self.g.neighbours(v) {
            let w = w as usize;
            if self.colour[w].is_some() {
                continue;
            }
            if let Ok(i) = self.lists[w].binary_search(&c) {
                self.blocked[w][i] += 1;
                if self.blocked[w][i] == 1 {
                    self.avail[w] -= 1;
                    if self.avail[w] == 0 {
                        ok = false;
                    }
                }
            }
        }
        ok
    }

    fn unassign(&mut self, v: Vertex, c: Colour) {
        self.colour[v as usize] = None;
        for &w in self.g.neighbours(v) {
            let w = w as usize;
            if self.colour[w].is_some() {
                continue;
            }
            if let Ok(i) = self.lists[w].binary_search(&c) {
                self.blocked[w][i] -= 1;
                if self.blocked[w][i] == 0 {
                    self.avail[w] += 1;
                }
            }
        }
    }
}
