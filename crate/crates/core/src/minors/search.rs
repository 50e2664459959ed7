//! Exact minor search by growing branch sets.
//!
//! Every branch set starts at a root and only grows along host edges, so it
//! stays connected. While some pattern edge `ij` is unmet, a frontier vertex
//! of set `i` is either added to `i` or forbidden for `i`. A model that
//! extends the current sets survives in one of the two branches, which makes
//! the search exact. For complete patterns the sets are ordered by their
//! lowest-ranked vertex (the root), which removes the `k!` relabellings.

use super::{MinorModel, MinorOutcome};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

const FREE: usize = usize::MAX;

/// Searches `host` for a `pattern` minor, expanding at most `budget` search
/// nodes.
pub fn has_minor(host: &Graph, pattern: &Graph, budget: u64) -> Result<MinorOutcome> {
    let k = pattern.n();
    if k == 0 {
        return Err(Error::InvalidParameter("pattern must have at least one vertex".into()));
    }
    if k > 64 {
        return Err(Error::InvalidParameter("patterns are limited to 64 vertices".into()));
    }
    if k > host.n() || pattern.m() > host.m() {
        return Ok(MinorOutcome::Absent);
    }
    let mut by_rank: Vec<Vertex> = host.vertices().collect();
    by_rank.sort_by_key(|&v| (std::cmp::Reverse(host.degree(v)), v));
    let mut rank = vec![0; host.n()];
    for (r, &v) in by_rank.iter().enumerate() {
        rank[v as usize] = r;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&p| (std::cmp::Reverse(pattern.degree(p as Vertex)), p));
    let complete = pattern.m() == k * (k - 1) / 2;
    let mut s = Search {
        host,
        pattern_edges: pattern.edges().into_iter().map(|(a, b)| (a as usize, b as usize)).collect(),
        k,
        complete,
        by_rank,
        rank,
        order,
        owner: vec![FREE; host.n()],
        forbidden: vec![0; host.n()],
        roots: vec![0; k],
        sets: vec![Vec::new(); k],
        touch: vec![vec![0; k]; k],
        nodes: 0,
        budget,
        found: Vec::new(),
    };
    Ok(match s.place_root(0) {
        Step::Found => MinorOutcome::Found(MinorModel {
            pattern: pattern.clone(),
            branch_sets: s.found,
        }),
        Step::Dead => MinorOutcome::Absent,
        Step::OutOfBudget => MinorOutcome::Exceeded,
    })
}

#[derive(PartialEq, Eq)]
enum Step {
    Found,
    Dead,
    OutOfBudget,
}

struct Search<'a> {
    host: &'a Graph,
    pattern_edges: Vec<(usize, usize)>,
    k: usize,
    complete: bool,
    by_rank: Vec<Vertex>,
    rank: Vec<usize>,
    /// Pattern vertices in the order their roots are placed.
    order: Vec<usize>,
    owner: Vec<usize>,
    /// Bit `i` set: the vertex may not join set `i`.
    forbidden: Vec<u64>,
    roots: Vec<Vertex>,
    sets: Vec<Vec<Vertex>>,
    /// Host edges between each pair of sets.
    touch: Vec<Vec<u32>>,
    nodes: u64,
    budget: u64,
    found: Vec<Vec<Vertex>>,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.budget
    }

    fn allowed(&self, set: usize, w: Vertex) -> bool {
        self.owner[w as usize] == FREE
            && self.forbidden[w as usize] >> set & 1 == 0
            && (!self.complete || self.rank[w as usize] > self.rank[self.roots[set] as usize])
    }

    fn add(&mut self, set: usize, v: Vertex) {
        self.owner[v as usize] = set;
        self.sets[set].push(v);
        for &w in self.host.neighbours(v) {
            let o = self.owner[w as usize];
            if o != FREE && o != set {
                self.touch[set][o] += 1;
                self.touch[o][set] += 1;
            }
        }
    }

    fn remove(&mut self, set: usize, v: Vertex) {
        for &w in self.host.neighbours(v) {
            let o = self.owner[w as usize];
            if o != FREE && o != set {
                self.touch[set][o] -= 1;
                self.touch[o][set] -= 1;
            }
        }
        self.sets[set].pop();
        self.owner[v as usize] = FREE;
    }

    fn place_root(&mut self, idx: usize) -> Step {
        if idx == self.k {
            return self.grow();
        }
        let p = self.order[idx];
        let start = if self.complete && idx > 0 {
            self.rank[self.roots[self.order[idx - 1]] as usize] + 1
        } else {
            0
        };
        // leave room for the roots still to come
        let end = if self.complete {
            self.by_rank.len() - (self.k - idx - 1)
        } else {
            self.by_rank.len()
        };
        for r in start..end {
            if !self.tick() {
                return Step::OutOfBudget;
            }
            let v = self.by_rank[r];
            if self.owner[v as usize] != FREE {
                continue;
            }
            self.roots[p] = v;
            self.add(p, v);
            let step = self.place_root(idx + 1);
            self.remove(p, v);
            if step != Step::Dead {
                return step;
            }
        }
        Step::Dead
    }

    fn grow(&mut self) -> Step {
        if !self.tick() {
            return Step::OutOfBudget;
        }
        let unmet: Vec<(usize, usize)> = self
            .pattern_edges
            .iter()
            .copied()
            .filter(|&(i, j)| self.touch[i][j] == 0)
            .collect();
        let Some(&(i, j)) = unmet.first() else {
            self.found = self
                .sets
                .iter()
                .map(|b| {
                    let mut b = b.clone();
                    b.sort_unstable();
                    b
                })
                .collect();
            return Step::Found;
        };
        if unmet.iter().any(|&(a, b)| !self.can_meet(a, b)) {
            return Step::Dead;
        }
        let (set, v) = match self.frontier_pick(i, j) {
            Some(v) => (i, v),
            None => match self.frontier_pick(j, i) {
                Some(v) => (j, v),
                None => return Step::Dead,
            },
        };
        self.add(set, v);
        let step = self.grow();
        self.remove(set, v);
        if step != Step::Dead {
            return step;
        }
        self.forbidden[v as usize] |= 1 << set;
        let step = self.grow();
        self.forbidden[v as usize] &= !(1 << set);
        step
    }

    /// A free vertex next to `set` that may join it, preferring one that
    /// already touches `target`, then the lowest rank.
    fn frontier_pick(&self, set: usize, target: usize) -> Option<Vertex> {
        let mut best: Option<(bool, usize, Vertex)> = None;
        for &u in &self.sets[set] {
            for &w in self.host.neighbours(u) {
                if !self.allowed(set, w) {
                    continue;
                }
                let hits = self.host.neighbours(w).iter().any(|&x| self.owner[x as usize] == target);
                let key = (!hits, self.rank[w as usize], w);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        best.map(|(_, _, w)| w)
    }

    /// Whether sets `a` and `b` can still become adjacent through free
    /// vertices either of them may take.
    fn can_meet(&self, a: usize, b: usize) -> bool {
        let n = self.host.n();
        let mut seen = vec![false; n];
        let mut stack: Vec<Vertex> = self.sets[a].clone();
        for &v in &stack {
            seen[v as usize] = true;
        }
        while let Some(u) = stack.pop() {
            for &w in self.host.neighbours(u) {
                if self.owner[w as usize] == b {
                    return true;
                }
                if !seen[w as usize] && (self.allowed(a, w) || self.allowed(b, w)) {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::wagner_v8;
    use crate::graph::named;
    use crate::minors::validate_model;

    #[test]
    fn k3_in_k4() {
        let out = has_minor(&named::complete(4), &named::complete(3), 1000).unwrap();
        let m = out.model().unwrap();
        validate_model(&named::complete(4), m).unwrap();
    }

    #[test]
    fn trees_have_no_triangle_minor() {
        assert_eq!(has_minor(&named::star(6), &named::complete(3), 10_000).unwrap(), MinorOutcome::Absent);
        assert_eq!(has_minor(&named::path(7), &named::complete(3), 10_000).unwrap(), MinorOutcome::Absent);
    }

    #[test]
    fn wagner_graph() {
        let v8 = wagner_v8();
        assert_eq!(has_minor(&v8, &named::complete(5), 10_000_000).unwrap(), MinorOutcome::Absent);
        let out = has_minor(&v8, &named::complete(4), 10_000_000).unwrap();
        validate_model(&v8, out.model().unwrap()).unwrap();
    }

    #[test]
    fn cycle_contracts_to_triangle_and_budget_is_reported() {
        let c9 = named::cycle(9);
        let out = has_minor(&c9, &named::complete(3), 10_000).unwrap();
        validate_model(&c9, out.model().unwrap()).unwrap();
        assert_eq!(has_minor(&named::complete(8), &named::complete(6), 3).unwrap(), MinorOutcome::Exceeded);
    }

    #[test]
    fn non_complete_pattern() {
        let c4 = named::cycle(4);
        let k4 = named::complete(4);
        assert!(has_minor(&k4, &c4, 10_000).unwrap().model().is_some());
        assert_eq!(has_minor(&named::cycle(6), &k4, 100_000).unwrap(), MinorOutcome::Absent);
    }
}
