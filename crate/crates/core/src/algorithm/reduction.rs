//! Deterministic colour reduction on the pocket-contact graph.
//!
//! Pockets start with their id as colour. Polynomial steps shrink an
//! `m`-colouring to a `q^2`-colouring: a colour is read as a polynomial of
//! degree `d` over `F_q` (its base-`q` digits), and a pocket keeps the pair
//! `(a, f(a))` for the smallest `a` where its polynomial differs from every
//! contact's. With `q > delta * d` such an `a` exists. Halving steps then cut
//! the palette to `delta + 1`: colours are grouped in bins of `2b`
//! (`b = delta + 1`), and for each upper offset in turn the pockets holding
//! it move to the smallest lower offset unused by contacts in the same bin.
//! Each step needs one exchange of colours between contacts.

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyStep {
    pub q: u64,
    pub d: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    /// Contacts exchange membership; pockets learn their contact degree.
    Discover,
    Poly(PolyStep),
    /// Halving step: pockets at offset `b + j` of their bin move down.
    Halve { j: u64, last: bool },
    /// Pockets of colour `class` decide whether they survive.
    Resolve { class: u64 },
}

/// The fixed sequence of contact-graph operations for ids below `id_bound`
/// and contact degree at most `delta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub delta: u64,
    pub ops: Vec<Op>,
    /// Palette size after the reduction steps.
    pub palette: u64,
}

impl Plan {
    pub fn new(id_bound: u64, delta: u64) -> Plan {
        let delta = delta.max(1);
        let b = delta + 1;
        let mut ops = vec![Op::Discover];
        let mut m = id_bound.max(1);
        while let Some((step, next)) = best_poly_step(m, delta) {
            ops.push(Op::Poly(step));
            m = next;
        }
        while m > b {
            for j in 0..b {
                ops.push(Op::Halve { j, last: j + 1 == b });
            }
            m = m.div_ceil(2 * b) * b;
        }
        for class in 0..m {
            ops.push(Op::Resolve { class });
        }
        Plan { delta, ops, palette: m }
    }

    pub fn b(&self) -> u64 {
        self.delta + 1
    }
}

fn best_poly_step(m: u64, delta: u64) -> Option<(PolyStep, u64)> {
    let mut best: Option<(PolyStep, u64)> = None;
    for d in 1..=32u32 {
        let mut q = next_prime(delta * d as u64 + 1);
        while !pow_at_least(q, d + 1, m) {
            q = next_prime(q + 1);
        }
        let size = q * q;
        if best.map_or(true, |(_, s)| size < s) {
            best = Some((PolyStep { q, d }, size));
        }
    }
    best.filter(|&(_, size)| size < m)
}

/// `q^e >= m` without overflow.
fn pow_at_least(q: u64, e: u32, m: u64) -> bool {
    let mut acc: u64 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q);
        if acc >= m {
            return true;
        }
    }
    acc >= m
}

fn next_prime(mut x: u64) -> u64 {
    x = x.max(2);
    loop {
        if (2..).take_while(|p| p * p <= x).all(|p| x % p != 0) {
            return x;
        }
        x += 1;
    }
}

fn eval(colour: u64, step: PolyStep, a: u64) -> u64 {
    let q = step.q;
    let mut digits = colour;
    let mut acc = 0;
    let mut power = 1;
    for _ in 0..=step.d {
        acc = (acc + (digits % q) * power) % q;
        digits /= q;
        power = power * a % q;
    }
    acc
}

/// One polynomial step. `others` are the current colours of the contacts.
pub fn poly_step(colour: u64, others: &[u64], step: PolyStep) -> Option<u64> {
    (0..step.q).find_map(|a| {
        let mine = eval(colour, step, a);
        others
            .iter()
            .all(|&y| y == colour || eval(y, step, a) != mine)
            .then_some(a * step.q + mine)
    })
}

/// One halving sub-step for upper offset `b + j`.
pub fn halve_step(colour: u64, others: &[u64], b: u64, j: u64, last: bool) -> u64 {
    let (bin, mut off) = (colour / (2 * b), colour % (2 * b));
    if off == b + j {
        let taken: Vec<u64> = others.iter().filter(|&&y| y / (2 * b) == bin).map(|&y| y % (2 * b)).collect();
        off = (0..b).find(|o| !taken.contains(o)).expect("at most delta contacts");
    }
    if last {
        bin * b + off
    } else {
        bin * 2 * b + off
    }
}

/// Runs the plan's reduction steps on an explicit contact graph whose
/// vertices carry distinct `ids`. Returns colours below `delta + 1` and the
/// number of exchanges used.
pub fn contact_graph_colouring(contact: &Graph, ids: &[u64], delta: u64) -> Result<(Vec<u64>, usize)> {
    if ids.len() != contact.n() {
        return Err(Error::InvalidParameter("one id per pocket required".into()));
    }
    if contact.max_degree() as u64 > delta {
        return Err(Error::InvalidParameter(format!(
            "contact degree {} exceeds {delta}",
            contact.max_degree()
        )));
    }
    let bound = ids.iter().max().map_or(1, |&x| x + 1);
    let plan = Plan::new(bound, delta);
    let mut colours = ids.to_vec();
    let mut used = 0;
    for op in &plan.ops {
        let next: Vec<u64> = contact
            .vertices()
            .map(|p| {
                let others: Vec<u64> = contact.neighbours(p).iter().map(|&x| colours[x as usize]).collect();
                let own = colours[p as usize];
                match *op {
                    Op::Poly(step) => poly_step(own, &others, step).expect("q exceeds delta * d"),
                    Op::Halve { j, last } => halve_step(own, &others, plan.b(), j, last),
                    _ => own,
                }
            })
            .collect();
        if matches!(op, Op::Poly(_) | Op::Halve { .. }) {
            used += 1;
        }
        colours = next;
    }
    Ok((colours, used))
}
