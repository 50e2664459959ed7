//! Choosability of small graphs under a per-vertex list-size budget.

use serde::Serialize;

use super::solver::solve_lists;
use crate::colouring::{Colour, ListAssignment};
use crate::error::{Error, Result};
use crate::graph::{blocks, Graph, Vertex};

/// Why a budgeted graph is choosable without enumerating list assignments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SufficientCertificate {
    /// Every vertex, when removed, had fewer remaining neighbours than its
    /// budget; colour in reverse order.
    Degeneracy { order: Vec<Vertex> },
    /// After `order` is peeled off, every remaining component has budget
    /// equal to degree and contains `block`, which is neither a clique nor
    /// an odd cycle.
    Gallai {
        order: Vec<Vertex>,
        components: Vec<GallaiComponent>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GallaiComponent {
    pub vertices: Vec<Vertex>,
    pub block: Vec<Vertex>,
}

/// Degeneracy elimination followed by the degree-choosability criterion on
/// what is left. Returns `None` for "unknown".
pub fn choosable_sufficient(h: &Graph, f: &[i64]) -> Option<SufficientCertificate> {
    assert_eq!(f.len(), h.n());
    if f.iter().any(|&x| x < 1) {
        return None;
    }
    let n = h.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<i64> = h.vertices().map(|v| h.degree(v) as i64).collect();
    let mut order = Vec::new();
    while let Some(v) = (0..n).find(|&v| alive[v] && deg[v] < f[v]) {
        alive[v] = false;
        order.push(v as Vertex);
        for &w in h.neighbours(v as Vertex) {
            deg[w as usize] -= 1;
        }
    }
    if order.len() == n {
        return Some(SufficientCertificate::Degeneracy { order });
    }

    let core: Vec<Vertex> = (0..n as Vertex).filter(|&v| alive[v as usize]).collect();
    if core.iter().any(|&v| deg[v as usize] != f[v as usize]) {
        return None;
    }
    let core_graph = h.induced(&core);
    let mut components = Vec::new();
    for comp in core_graph.components() {
        let sub = core_graph.induced(&comp);
        let block = blocks(&sub).into_iter().find(|b| !is_clique_or_odd_cycle(&sub, b))?;
        components.push(GallaiComponent {
            vertices: comp.iter().map(|&i| core[i as usize]).collect(),
            block: block.iter().map(|&i| core[comp[i as usize] as usize]).collect(),
        });
    }
    Some(SufficientCertificate::Gallai { order, components })
}

fn is_clique_or_odd_cycle(g: &Graph, block: &[Vertex]) -> bool {
    let k = block.len();
    let edges: usize = block
        .iter()
        .map(|&v| g.neighbours(v).iter().filter(|w| block.binary_search(w).is_ok()).count())
        .sum::<usize>()
        / 2;
    edges == k * (k - 1) / 2 || (k % 2 == 1 && edges == k)
}

/// Result of [`choosable_exact`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    Choosable,
    /// Lists with the budgeted sizes admitting no proper colouring.
    NotChoosable(ListAssignment),
}

/// Decides `f`-choosability exactly.
///
/// A graph is not `f`-choosable iff some vertex set `S` carries a bad
/// assignment whose colours come from only `|S| - 1` values (a Hall-type
/// argument on a minimal uncolourable set). The search therefore runs over
/// connected sets `S` in order of size and, inside each, over assignments
/// from a universe of `|S| - 1` colours. The first list is fixed to
/// `0..f` and the second is determined by its overlap with the first, which
/// removes the colour-permutation symmetry at those two positions.
pub fn choosable_exact(h: &Graph, f: &[i64], exact_cap: usize) -> Result<ExactOutcome> {
    assert_eq!(f.len(), h.n());
    let n = h.n();
    if n > exact_cap || n > 16 {
        return Err(Error::Refused(format!(
            "exact choosability limited to {exact_cap} vertices, got {n}"
        )));
    }
    if let Some(v) = f.iter().position(|&x| x < 1) {
        return Err(Error::InvalidParameter(format!("budget of vertex {v} is below one")));
    }
    let mut subsets: Vec<u32> = (1u32..1 << n).collect();
    subsets.sort_by_key(|&m| (m.count_ones(), m));
    for mask in subsets {
        let set: Vec<Vertex> = (0..n as Vertex).filter(|&v| mask >> v & 1 == 1).collect();
        let k = set.len();
        if k < 2 || set.iter().any(|&v| f[v as usize] as usize > k - 1) {
            continue;
        }
        let sub = h.induced(&set);
        if !sub.is_connected() {
            continue;
        }
        let sub_f: Vec<i64> = set.iter().map(|&v| f[v as usize]).collect();
        if let Some(SufficientCertificate::Degeneracy { .. }) = choosable_sufficient(&sub, &sub_f) {
            continue;
        }
        if let Some(bad) = bad_assignment(&sub, &sub_f, (k - 1) as u32) {
            let universe = (k as u32 - 1).max(*f.iter().max().unwrap() as u32);
            let mut lists: Vec<Vec<Colour>> = f.iter().map(|&x| (0..x as Colour).collect()).collect();
            for (i, &v) in set.iter().enumerate() {
                lists[v as usize] = bad[i].clone();
            }
            return Ok(ExactOutcome::NotChoosable(
                ListAssignment::new(universe, lists).expect("lists drawn from the universe"),
            ));
        }
    }
    Ok(ExactOutcome::Choosable)
}

fn bad_assignment(h: &Graph, f: &[i64], universe: u32) -> Option<Vec<Vec<Colour>>> {
    let k = h.n();
    let mut options: Vec<Vec<Vec<Colour>>> = Vec::with_capacity(k);
    let f0 = f[0] as u32;
    options.push(vec![(0..f0).collect()]);
    let f1 = f[1] as u32;
    let mut second = Vec::new();
    for shared in (f0 + f1).saturating_sub(universe)..=f0.min(f1) {
        second.push((0..shared).chain(f0..f0 + f1 - shared).collect());
    }
    options.push(second);
    for &size in &f[2..] {
        options.push(subsets_of_size(universe, size as u32));
    }
    let mut idx = vec![0usize; k];
    let mut lists: Vec<Vec<Colour>> = options.iter().map(|o| o[0].clone()).collect();
    loop {
        if solve_lists(h, &lists).is_none() {
            return Some(lists);
        }
        // odometer over the option tables
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < options[pos].len() {
                lists[pos] = options[pos][idx[pos]].clone();
                break;
            }
            idx[pos] = 0;
            lists[pos] = options[pos][0].clone();
        }
    }
}

fn subsets_of_size(universe: u32, size: u32) -> Vec<Vec<Colour>> {
    let mut out = Vec::new();
    for mask in 0u32..1 << universe {
        if mask.count_ones() == size {
            out.push((0..universe).filter(|&c| mask >> c & 1 == 1).collect());
        }
    }
    out
}
