use std::collections::{BTreeSet, HashMap};

use super::reduce::{clique_minor, find_cycle};
use super::{MinorModel, MinorOutcome};
use crate::error::{Error, Result};
use crate::graph::{ball, named, Graph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinorFreeness {
    Free,
    HasMinor,
    Unknown,
}

/// `t = 3`: acyclicity. `t = 4`: series-parallel reduction (delete
/// degree-one vertices, suppress degree-two ones; the graph is `K_4`-minor
/// free iff nothing survives). Larger `t`: budgeted clique-minor search.
pub fn is_kt_minor_free(g: &Graph, t: usize, budget: u64) -> Result<MinorFreeness> {
    use MinorFreeness::*;
    let yes = |free: bool| if free { Free } else { HasMinor };
    Ok(match t {
        0 => return Err(Error::InvalidParameter("t must be positive".into())),
        1 => yes(g.n() == 0),
        2 => yes(g.m() == 0),
        3 => yes(find_cycle(g).is_none()),
        4 => yes(series_parallel_reduces(g)),
        _ => match clique_minor(g, t, budget)? {
            MinorOutcome::Found(_) => HasMinor,
            MinorOutcome::Absent => Free,
            MinorOutcome::Exceeded => Unknown,
        },
    })
}

fn series_parallel_reduces(g: &Graph) -> bool {
    let mut adj: Vec<BTreeSet<Vertex>> = g.vertices().map(|v| g.neighbours(v).iter().copied().collect()).collect();
    let mut queue: Vec<Vertex> = g.vertices().collect();
    let mut left = g.n();
    let mut gone = vec![false; g.n()];
    while let Some(v) = queue.pop() {
        if gone[v as usize] || adj[v as usize].len() > 2 {
            continue;
        }
        gone[v as usize] = true;
        left -= 1;
        let nb: Vec<Vertex> = std::mem::take(&mut adj[v as usize]).into_iter().collect();
        for &w in &nb {
            adj[w as usize].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a as usize].insert(b);
            adj[b as usize].insert(a);
        }
        queue.extend(nb);
    }
    left == 0
}

/// Outcome of a local minor-freeness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalFreeness {
    Free,
    /// The smallest vertex whose ball contains the minor, with a model in
    /// host ids when one was recovered within budget.
    NotFree { vertex: Vertex, model: Option<MinorModel> },
    /// No ball was found to contain the minor, but the ball of `vertex`
    /// could not be decided.
    Unknown { vertex: Vertex },
}

/// Whether every radius-`r` ball induces a `K_t`-minor-free subgraph.
pub fn is_locally_minor_free(g: &Graph, t: usize, r: usize, budget: u64) -> Result<LocalFreeness> {
    let mut decided: HashMap<Vec<Vertex>, MinorFreeness> = HashMap::new();
    let mut first_unknown = None;
    for v in g.vertices() {
        let members = ball(g, v, r)?.into_vec();
        let verdict = match decided.get(&members) {
            Some(&f) => f,
            None => {
                let f = is_kt_minor_free(&g.induced(&members), t, budget)?;
                decided.insert(members.clone(), f);
                f
            }
        };
        match verdict {
            MinorFreeness::Free => {}
            MinorFreeness::Unknown => {
                first_unknown.get_or_insert(v);
            }
            MinorFreeness::HasMinor => {
                let sub = g.induced(&members);
                let model = clique_minor(&sub, t, budget)?.model().map(|m| MinorModel {
                    pattern: named::complete(t),
                    branch_sets: m
                        .branch_sets
                        .iter()
                        .map(|s| s.iter().map(|&i| members[i as usize]).collect())
                        .collect(),
                });
                return Ok(LocalFreeness::NotFree { vertex: v, model });
            }
        }
    }
    Ok(match first_unknown {
        Some(vertex) => LocalFreeness::Unknown { vertex },
        None => LocalFreeness::Free,
    })
}
