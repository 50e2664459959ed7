//! Deletable subgraphs: budgets, verdicts, pocket search and extension.
//!
//! A vertex set `S` is `c`-deletable in `G` when `G[S]` is colourable from
//! every assignment giving each `v` in `S` at least
//! `c - (d_G(v) - d_{G[S]}(v))` colours, so that any colouring of `G - S`
//! from `c`-lists extends into `S`.

mod choosability;
mod pocket;
mod solver;

use std::cell::RefCell;
use std::collections::HashMap;

use serde::Serialize;

pub use choosability::{choosable_exact, choosable_sufficient, ExactOutcome, GallaiComponent, SufficientCertificate};
pub use pocket::{find_deletable_disjoint_from, find_deletable_pocket, find_deletable_pocket_in};
pub use solver::{chromatic_number_exact, list_colour_exhaustive, solve_lists, ChromaticOutcome};

use crate::colouring::{Colour, Colouring, ListAssignment};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex, VertexSet};

pub const DEFAULT_EXACT_CAP: usize = 6;

/// Read access to the neighbourhoods a search may look at. A full graph
/// knows every vertex; a node's local picture only knows some.
pub trait Neighbourhoods {
    fn neighbours_of(&self, v: Vertex) -> Option<&[Vertex]>;
}

impl Neighbourhoods for Graph {
    fn neighbours_of(&self, v: Vertex) -> Option<&[Vertex]> {
        ((v as usize) < self.n()).then(|| self.neighbours(v))
    }
}

/// `f(v) = c - (external degree of v)` for each `v` in `vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBudget {
    pub vertices: Vec<Vertex>,
    pub f: Vec<i64>,
}

impl DegreeBudget {
    pub fn infeasible(&self) -> bool {
        self.f.iter().any(|&x| x <= 0)
    }

    pub fn get(&self, v: Vertex) -> Option<i64> {
        self.vertices.binary_search(&v).ok().map(|i| self.f[i])
    }
}

pub fn list_budget(g: &Graph, s: &VertexSet, c: i64) -> Result<DegreeBudget> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    let (_, budget) = budget_in(g, s.as_slice(), c).ok_or(Error::VertexOutOfRange {
        vertex: *s.as_slice().last().unwrap(),
        n: g.n(),
    })?;
    Ok(budget)
}

/// The subgraph induced by `members` (sorted) and its budget, or `None` if
/// some member's neighbourhood is unknown to `view`.
pub(crate) fn budget_in<V: Neighbourhoods + ?Sized>(
    view: &V,
    members: &[Vertex],
    c: i64,
) -> Option<(Graph, DegreeBudget)> {
    let mut edges = Vec::new();
    let mut f = Vec::with_capacity(members.len());
    for (i, &v) in members.iter().enumerate() {
        let nb = view.neighbours_of(v)?;
        let mut internal = 0;
        for w in nb {
            if let Ok(j) = members.binary_search(w) {
                internal += 1;
                if i < j {
                    edges.push((i as Vertex, j as Vertex));
                }
            }
        }
        f.push(c - (nb.len() as i64 - internal));
    }
    let h = Graph::from_edges_lossy(members.len(), edges);
    Some((
        h,
        DegreeBudget {
            vertices: members.to_vec(),
            f,
        },
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Yes,
    No,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    InfeasibleBudget,
    Degeneracy,
    Gallai,
    Exact,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A vertex whose budget is below one.
    InfeasibleVertex { vertex: Vertex, budget: i64 },
    Sufficient(SufficientCertificate),
    /// Exhaustive enumeration found no bad assignment.
    Exhaustive,
    /// Lists of the budgeted sizes, indexed like the verdict's vertices,
    /// under which the subgraph has no colouring.
    FailingAssignment { universe: u32, lists: Vec<Vec<Colour>> },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeletabilityVerdict {
    pub decision: Decision,
    pub method: Method,
    pub vertices: Vec<Vertex>,
    pub certificate: Certificate,
}

impl DeletabilityVerdict {
    pub fn is_yes(&self) -> bool {
        self.decision == Decision::Yes
    }
}

pub fn is_deletable(g: &Graph, s: &VertexSet, c: i64) -> Result<DeletabilityVerdict> {
    is_deletable_with_cap(g, s, c, DEFAULT_EXACT_CAP)
}

pub fn is_deletable_with_cap(g: &Graph, s: &VertexSet, c: i64, exact_cap: usize) -> Result<DeletabilityVerdict> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    deletable_in(g, s.as_slice(), c, exact_cap).ok_or(Error::VertexOutOfRange {
        vertex: *s.as_slice().last().unwrap(),
        n: g.n(),
    })
}

/// Verdict for `members` (sorted, non-empty) as seen through `view`.
pub fn deletable_in<V: Neighbourhoods + ?Sized>(
    view: &V,
    members: &[Vertex],
    c: i64,
    exact_cap: usize,
) -> Option<DeletabilityVerdict> {
    let (h, budget) = budget_in(view, members, c)?;
    let local = decide_cached(&h, &budget.f, exact_cap);
    let certificate = match local.certificate {
        Certificate::InfeasibleVertex { vertex, budget } => Certificate::InfeasibleVertex {
            vertex: members[vertex as usize],
            budget,
        },
        Certificate::Sufficient(cert) => Certificate::Sufficient(relabel(cert, members)),
        other => other,
    };
    Some(DeletabilityVerdict {
        decision: local.decision,
        method: local.method,
        vertices: members.to_vec(),
        certificate,
    })
}

fn relabel(cert: SufficientCertificate, members: &[Vertex]) -> SufficientCertificate {
    let map = |v: &Vertex| members[*v as usize];
    match cert {
        SufficientCertificate::Degeneracy { order } => SufficientCertificate::Degeneracy {
            order: order.iter().map(map).collect(),
        },
        SufficientCertificate::Gallai { order, components } => SufficientCertificate::Gallai {
            order: order.iter().map(map).collect(),
            components: components
                .into_iter()
                .map(|c| GallaiComponent {
                    vertices: c.vertices.iter().map(map).collect(),
                    block: c.block.iter().map(map).collect(),
                })
                .collect(),
        },
    }
}

struct LocalVerdict {
    decision: Decision,
    method: Method,
    certificate: Certificate,
}

type CacheKey = (usize, u64, Vec<i64>, usize);

thread_local! {
    static VERDICTS: RefCell<HashMap<CacheKey, (Decision, Method, Certificate)>> = RefCell::new(HashMap::new());
}

fn decide_cached(h: &Graph, f: &[i64], exact_cap: usize) -> LocalVerdict {
    if h.n() > 11 {
        return decide(h, f, exact_cap);
    }
    let mut bits = 0u64;
    for (u, v) in h.edges() {
        let (u, v) = (u as u64, v as u64);
        bits |= 1 << (v * (v - 1) / 2 + u);
    }
    let key = (h.n(), bits, f.to_vec(), exact_cap);
    if let Some((decision, method, certificate)) = VERDICTS.with(|m| m.borrow().get(&key).cloned()) {
        return LocalVerdict {
            decision,
            method,
            certificate,
        };
    }
    let v = decide(h, f, exact_cap);
    VERDICTS.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() > 1 << 20 {
            m.clear();
        }
        m.insert(key, (v.decision, v.method, v.certificate.clone()));
    });
    v
}

fn decide(h: &Graph, f: &[i64], exact_cap: usize) -> LocalVerdict {
    if let Some(i) = f.iter().position(|&x| x <= 0) {
        return LocalVerdict {
            decision: Decision::No,
            method: Method::InfeasibleBudget,
            certificate: Certificate::InfeasibleVertex {
                vertex: i as Vertex,
                budget: f[i],
            },
        };
    }
    if let Some(cert) = choosable_sufficient(h, f) {
        let method = match cert {
            SufficientCertificate::Degeneracy { .. } => Method::Degeneracy,
            SufficientCertificate::Gallai { .. } => Method::Gallai,
        };
        return LocalVerdict {
            decision: Decision::Yes,
            method,
            certificate: Certificate::Sufficient(cert),
        };
    }
    match choosable_exact(h, f, exact_cap) {
        Ok(ExactOutcome::Choosable) => LocalVerdict {
            decision: Decision::Yes,
            method: Method::Exact,
            certificate: Certificate::Exhaustive,
        },
        Ok(ExactOutcome::NotChoosable(l)) => LocalVerdict {
            decision: Decision::No,
            method: Method::Exact,
            certificate: Certificate::FailingAssignment {
                universe: l.universe(),
                lists: l.lists().to_vec(),
            },
        },
        Err(_) => LocalVerdict {
            decision: Decision::Unknown,
            method: Method::BudgetExceeded,
            certificate: Certificate::None,
        },
    }
}

/// Colours `s` so that the result, together with `phi` outside `s`, is a
/// proper `L`-colouring wherever `phi` is defined. Colours `phi` assigns
/// inside `s` are ignored.
pub fn extend_into(g: &Graph, s: &VertexSet, phi: &Colouring, l: &ListAssignment) -> Result<Option<Colouring>> {
    if phi.n() != g.n() || l.n() != g.n() {
        return Err(Error::InvalidParameter("colouring or lists do not match the graph".into()));
    }
    let members = s.as_slice();
    if let Some(&v) = members.iter().find(|&&v| v as usize >= g.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    let pruned: Vec<Vec<Colour>> = members
        .iter()
        .map(|&v| {
            let taken: Vec<Colour> = g
                .neighbours(v)
                .iter()
                .filter(|w| members.binary_search(w).is_err())
                .filter_map(|&w| phi.get(w))
                .collect();
            l.list(v).iter().copied().filter(|c| !taken.contains(c)).collect()
        })
        .collect();
    let h = g.induced(members);
    let Some(inner) = solve_lists(&h, &pruned) else {
        return Ok(None);
    };
    let mut out = phi.clone();
    for (i, &v) in members.iter().enumerate() {
        out.set(v, inner[i]);
    }
    Ok(Some(out))
}
