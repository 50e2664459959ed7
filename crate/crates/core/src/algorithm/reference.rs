use std::collections::BTreeMap;

use super::{
    advance, initial_state, inner_edges, level_records, solve_on, AlgoParams, ContactView, LevelRecord, Removal,
    Schedule,
};
use crate::colouring::{Colour, Colouring, ListAssignment};
use crate::deletability::find_deletable_pocket_in;
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

fn remaining(gone: &[bool]) -> Vec<Vertex> {
    (0..gone.len() as Vertex).filter(|&v| !gone[v as usize]).collect()
}

struct Removed {
    class: u64,
    id: Vertex,
    members: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
}

/// The level structure and colouring of the distributed run, computed
/// centrally.
pub fn sequential_reference_colour(g: &Graph, l: &ListAssignment, p: &AlgoParams) -> Result<(Colouring, Vec<LevelRecord>)> {
    p.check_lists(g, l)?;
    let n = g.n();
    let schedule = Schedule::new(p, n);
    let mut gone = vec![false; n];
    let mut removal: Vec<Option<(usize, Removal)>> = vec![None; n];
    let mut colour: Vec<Option<Colour>> = vec![None; n];
    let mut by_level: Vec<Vec<Removed>> = Vec::new();
    let mut left = n;
    let mut idle = 0;
    while left > 0 {
        let level = by_level.len();
        if level == p.max_levels {
            return Err(Error::LevelLimit {
                max_levels: p.max_levels,
                remaining: remaining(&gone),
            });
        }
        let r = g.without_vertices(&gone);

        let mut base = vec![false; n];
        for comp in r.components() {
            if gone[comp[0] as usize] || comp.len() > p.k_base {
                continue;
            }
            let edges = inner_edges(|v| r.neighbours(v).to_vec(), &comp);
            let lists: Vec<Vec<Colour>> = comp.iter().map(|&v| l.list(v).to_vec()).collect();
            let solved = solve_on(&comp, &edges, &lists).ok_or_else(|| Error::ExtensionFailed(comp.clone()))?;
            for (&v, c) in comp.iter().zip(solved) {
                base[v as usize] = true;
                colour[v as usize] = Some(c);
                removal[v as usize] = Some((level, Removal::Base));
            }
        }

        let mut found: BTreeMap<Vec<Vertex>, Vertex> = BTreeMap::new();
        for v in r.vertices() {
            if gone[v as usize] || base[v as usize] || r.degree(v) > p.cap {
                continue;
            }
            let pocket = find_deletable_pocket_in(&r, v, p.cap, p.c as i64, p.size_cap, p.exact_cap);
            if let Some(members) = pocket {
                found.entry(members).or_insert(v);
            }
        }
        let mut cands: Vec<(Vertex, Vec<Vertex>)> = found.into_iter().map(|(m, id)| (id, m)).collect();
        cands.sort_unstable();

        let mut holding: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, (_, members)) in cands.iter().enumerate() {
            for &x in members {
                holding[x as usize].push(i);
            }
        }
        let contacts: Vec<Vec<(usize, bool)>> = cands
            .iter()
            .enumerate()
            .map(|(i, (_, members))| {
                let mut seen: BTreeMap<usize, bool> = BTreeMap::new();
                for &x in members {
                    for &j in &holding[x as usize] {
                        seen.insert(j, true);
                    }
                    for &y in r.neighbours(x) {
                        for &j in &holding[y as usize] {
                            seen.entry(j).or_insert(false);
                        }
                    }
                }
                seen.remove(&i);
                seen.into_iter().collect()
            })
            .collect();

        let mut states: Vec<_> = cands
            .iter()
            .zip(&contacts)
            .map(|((id, _), cs)| initial_state(*id, cs.len(), p))
            .collect();
        for &op in &schedule.plan.ops[1..] {
            let before = states.clone();
            for (i, cs) in contacts.iter().enumerate() {
                let views: Vec<ContactView> = cs
                    .iter()
                    .map(|&(j, overlap)| ContactView {
                        overlap,
                        state: before[j],
                    })
                    .collect();
                states[i] = advance(op, before[i], &views, &schedule.plan);
            }
        }

        let mut survivors = Vec::new();
        for (i, (id, members)) in cands.iter().enumerate() {
            if states[i].survived != Some(true) {
                continue;
            }
            let class = states[i].colour;
            for &(j, _) in &contacts[i] {
                if states[j].survived == Some(true) && states[j].colour == class {
                    return Err(Error::Refused(format!(
                        "pockets {} and {} touch but share class {class}",
                        id, cands[j].0
                    )));
                }
            }
            survivors.push(Removed {
                class,
                id: *id,
                edges: inner_edges(|v| r.neighbours(v).to_vec(), members),
                members: members.clone(),
            });
        }

        let mut removed = 0;
        for v in 0..n {
            if base[v] {
                gone[v] = true;
                removed += 1;
            }
        }
        for s in &survivors {
            for &x in &s.members {
                if gone[x as usize] {
                    return Err(Error::Refused(format!("vertex {x} lies in two surviving pockets")));
                }
                gone[x as usize] = true;
                removal[x as usize] = Some((level, Removal::Pocket { id: s.id, class: s.class }));
                removed += 1;
            }
        }
        left -= removed;
        idle = if removed == 0 { idle + 1 } else { 0 };
        if idle == 2 {
            return Err(Error::Stalled {
                level,
                remaining: remaining(&gone),
            });
        }
        by_level.push(survivors);
    }

    for level in by_level.iter_mut().rev() {
        level.sort_by_key(|s| (s.class, s.id));
        for s in level.iter() {
            let lists: Vec<Vec<Colour>> = s
                .members
                .iter()
                .map(|&u| {
                    let taken: Vec<Colour> = g.neighbours(u).iter().filter_map(|&w| colour[w as usize]).collect();
                    l.list(u).iter().copied().filter(|c| !taken.contains(c)).collect()
                })
                .collect();
            let solved =
                solve_on(&s.members, &s.edges, &lists).ok_or_else(|| Error::ExtensionFailed(s.members.clone()))?;
            for (&u, c) in s.members.iter().zip(solved) {
                colour[u as usize] = Some(c);
            }
        }
    }

    let removals: Vec<(usize, Removal)> = removal.into_iter().map(|r| r.expect("every vertex removed")).collect();
    let colouring = Colouring::from_total(colour.into_iter().map(|c| c.expect("every vertex coloured")).collect());
    Ok((colouring, level_records(&removals, schedule.block)))
}
