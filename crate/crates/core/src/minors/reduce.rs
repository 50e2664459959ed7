//! Clique-minor search with lossless reductions in front of [`has_minor`].
//!
//! For `K_t` with `t >= 4` the following keep the answer unchanged:
//! deleting vertices of degree at most one, suppressing a degree-two vertex
//! (replacing it by an edge between its neighbours), deleting a simplicial
//! vertex of degree below `t - 1`, and splitting into blocks. Models found in
//! the reduced graph are lifted back by re-inserting suppressed vertices.

use std::collections::BTreeSet;

use super::search::has_minor;
use super::{MinorModel, MinorOutcome};
use crate::error::{Error, Result};
use crate::graph::{blocks, named, Graph, Vertex};

/// Searches `g` for a `K_t` minor. `budget` applies to each block search.
pub fn clique_minor(g: &Graph, t: usize, budget: u64) -> Result<MinorOutcome> {
    let pattern = named::complete(t);
    let found = |sets: Vec<Vec<Vertex>>| {
        MinorOutcome::Found(MinorModel {
            pattern: pattern.clone(),
            branch_sets: sets,
        })
    };
    match t {
        0 => Err(Error::InvalidParameter("t must be positive".into())),
        1 => Ok(if g.n() > 0 { found(vec![vec![0]]) } else { MinorOutcome::Absent }),
        2 => Ok(match g.edges().first() {
            Some(&(u, v)) => found(vec![vec![u], vec![v]]),
            None => MinorOutcome::Absent,
        }),
        3 => Ok(match find_cycle(g) {
            Some(c) => found(vec![vec![c[0]], vec![c[1]], {
                let mut rest = c[2..].to_vec();
                rest.sort_unstable();
                rest
            }]),
            None => MinorOutcome::Absent,
        }),
        _ => {
            let work = Work {
                adj: g.vertices().map(|v| g.neighbours(v).iter().copied().collect()).collect(),
                alive: vec![true; g.n()],
            };
            let out = solve(work, t, Vec::new(), budget)?;
            Ok(match out {
                Solved::Found(sets) => found(sets),
                Solved::Absent => MinorOutcome::Absent,
                Solved::Exceeded => MinorOutcome::Exceeded,
            })
        }
    }
}

/// Vertices of some cycle in order, or `None` for a forest.
pub(crate) fn find_cycle(g: &Graph) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut parent: Vec<Option<Vertex>> = vec![None; n];
    let mut seen = vec![false; n];
    for root in g.vertices() {
        if seen[root as usize] {
            continue;
        }
        seen[root as usize] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in g.neighbours(u) {
                if Some(w) == parent[u as usize] {
                    continue;
                }
                if seen[w as usize] {
                    // w is an ancestor of u or a discovered sibling branch;
                    // walk both up to their meeting point
                    let path_u = ancestors(&parent, u);
                    let path_w = ancestors(&parent, w);
                    let meet = *path_u.iter().find(|x| path_w.contains(x))?;
                    let mut cycle: Vec<Vertex> = path_u.iter().copied().take_while(|&x| x != meet).collect();
                    cycle.push(meet);
                    let back: Vec<Vertex> = path_w.iter().copied().take_while(|&x| x != meet).collect();
                    cycle.extend(back.into_iter().rev());
                    return Some(cycle);
                }
                seen[w as usize] = true;
                parent[w as usize] = Some(u);
                stack.push(w);
            }
        }
    }
    None
}

fn ancestors(parent: &[Option<Vertex>], mut v: Vertex) -> Vec<Vertex> {
    let mut out = vec![v];
    while let Some(p) = parent[v as usize] {
        out.push(p);
        v = p;
    }
    out
}

#[derive(Clone)]
struct Work {
    adj: Vec<BTreeSet<Vertex>>,
    alive: Vec<bool>,
}

/// A degree-two vertex `v` replaced by the edge `ab`.
#[derive(Clone, Copy)]
struct Suppressed {
    v: Vertex,
    a: Vertex,
    b: Vertex,
}

enum Solved {
    Found(Vec<Vec<Vertex>>),
    Absent,
    Exceeded,
}

impl Work {
    fn delete(&mut self, v: Vertex) -> Vec<Vertex> {
        self.alive[v as usize] = false;
        let nb: Vec<Vertex> = std::mem::take(&mut self.adj[v as usize]).into_iter().collect();
        for &w in &nb {
            self.adj[w as usize].remove(&v);
        }
        nb
    }

    fn simplicial(&self, v: Vertex) -> bool {
        let nb: Vec<Vertex> = self.adj[v as usize].iter().copied().collect();
        nb.iter()
            .enumerate()
            .all(|(i, &a)| nb[i + 1..].iter().all(|b| self.adj[a as usize].contains(b)))
    }

    /// Applies reductions to a fixpoint. Returns a `K_t` subgraph if one
    /// shows up as a simplicial vertex with enough neighbours.
    fn reduce(&mut self, t: usize, records: &mut Vec<Suppressed>) -> Option<Vec<Vertex>> {
        let mut queue: Vec<Vertex> = (0..self.adj.len() as Vertex).filter(|&v| self.alive[v as usize]).rev().collect();
        while let Some(v) = queue.pop() {
            if !self.alive[v as usize] {
                continue;
            }
            let d = self.adj[v as usize].len();
            if d <= 1 {
                queue.extend(self.delete(v));
            } else if d == 2 {
                let nb = self.delete(v);
                let (a, b) = (nb[0], nb[1]);
                self.adj[a as usize].insert(b);
                self.adj[b as usize].insert(a);
                records.push(Suppressed { v, a, b });
                queue.extend([a, b]);
            } else if self.simplicial(v) {
                if d >= t - 1 {
                    let mut clique = vec![v];
                    clique.extend(self.adj[v as usize].iter().take(t - 1));
                    return Some(clique);
                }
                queue.extend(self.delete(v));
            }
        }
        None
    }

    /// Alive vertices and the compact graph on them.
    fn compact(&self) -> (Vec<Vertex>, Graph) {
        let ids: Vec<Vertex> = (0..self.adj.len() as Vertex).filter(|&v| self.alive[v as usize]).collect();
        let mut edges = Vec::new();
        for (i, &v) in ids.iter().enumerate() {
            for w in &self.adj[v as usize] {
                let j = ids.binary_search(w).unwrap();
                if i < j {
                    edges.push((i as Vertex, j as Vertex));
                }
            }
        }
        let g = Graph::from_edges_lossy(ids.len(), edges);
        (ids, g)
    }

    fn restrict(&self, keep: &[Vertex]) -> Work {
        let mut alive = vec![false; self.adj.len()];
        for &v in keep {
            alive[v as usize] = true;
        }
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, nb)| {
                if alive[v] {
                    nb.iter().copied().filter(|&w| alive[w as usize]).collect()
                } else {
                    BTreeSet::new()
                }
            })
            .collect();
        Work { adj, alive }
    }
}

fn solve(mut work: Work, t: usize, mut records: Vec<Suppressed>, budget: u64) -> Result<Solved> {
    if let Some(clique) = work.reduce(t, &mut records) {
        let sets = clique.into_iter().map(|v| vec![v]).collect();
        return Ok(Solved::Found(lift(sets, &records)));
    }
    let (ids, g) = work.compact();
    if ids.len() < t {
        return Ok(Solved::Absent);
    }
    let parts = blocks(&g);
    if parts.len() == 1 {
        return Ok(match has_minor(&g, &named::complete(t), budget)? {
            MinorOutcome::Found(m) => {
                let sets = m
                    .branch_sets
                    .iter()
                    .map(|s| s.iter().map(|&i| ids[i as usize]).collect())
                    .collect();
                Solved::Found(lift(sets, &records))
            }
            MinorOutcome::Absent => Solved::Absent,
            MinorOutcome::Exceeded => Solved::Exceeded,
        });
    }
    let mut exceeded = false;
    for part in parts {
        if part.len() < t {
            continue;
        }
        let keep: Vec<Vertex> = part.iter().map(|&i| ids[i as usize]).collect();
        match solve(work.restrict(&keep), t, records.clone(), budget)? {
            Solved::Found(sets) => return Ok(Solved::Found(sets)),
            Solved::Exceeded => exceeded = true,
            Solved::Absent => {}
        }
    }
    Ok(if exceeded { Solved::Exceeded } else { Solved::Absent })
}

fn lift(mut sets: Vec<Vec<Vertex>>, records: &[Suppressed]) -> Vec<Vec<Vertex>> {
    for r in records.iter().rev() {
        let home = sets
            .iter()
            .position(|s| s.contains(&r.a))
            .or_else(|| sets.iter().position(|s| s.contains(&r.b)));
        if let Some(i) = home {
            sets[i].push(r.v);
        }
    }
    for s in &mut sets {
        s.sort_unstable();
    }
    sets
}
