//! Level-by-level list colouring.
//!
//! Each level works on the graph `R` of vertices not yet removed:
//!
//! 1. Components of `R` with at most `k_base` vertices are coloured outright.
//! 2. Every other vertex of degree at most `cap` looks for its canonical
//!    `c`-deletable pocket. Equal pockets found by several seeds merge; the
//!    pocket id is the smallest seed.
//! 3. Pockets touch when they share a vertex or an edge joins them. Pockets
//!    with more than `contact_degree` touching pockets sit the level out; the
//!    rest get a proper colouring with at most `contact_degree + 1` classes.
//! 4. Classes decide in increasing order: a pocket survives unless it
//!    overlaps a pocket of a lower class that survived. Survivors leave `R`.
//!
//! Colours are assigned afterwards in reverse removal order: later levels
//! first, and within a level lower classes first. A pocket extends the
//! colouring of the vertices already coloured, which is possible because it
//! was deletable when removed.
//!
//! [`distributed_list_colour`] runs this as one node program on the
//! simulator; [`sequential_reference_colour`] computes the same thing
//! centrally and must agree with it exactly.

mod node;
mod reduction;
mod reference;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use node::{distributed_list_colour, ColourProgram, Msg, NodeOutput, NodeState};
pub use reduction::{contact_graph_colouring, halve_step, poly_step, Op, Plan, PolyStep};
pub use reference::sequential_reference_colour;

use crate::colouring::{Colour, ListAssignment};
use crate::deletability::{solve_lists, DEFAULT_EXACT_CAP};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgoParams {
    /// List size, and the `c` of `c`-deletability.
    pub c: u32,
    /// Degree cap for pocket vertices.
    pub cap: usize,
    /// Largest pocket searched for.
    pub size_cap: usize,
    /// Components of at most this many vertices are coloured directly.
    pub k_base: usize,
    pub max_levels: usize,
    /// Pockets touching more pockets than this wait for a later level.
    pub contact_degree: usize,
    pub exact_cap: usize,
}

impl AlgoParams {
    /// Defaults for `K_t`-minor-free inputs with `t`-lists, `t` in 3..=5.
    pub fn for_t(t: usize) -> Result<AlgoParams> {
        let (cap, size_cap, contact_degree) = match t {
            3 => (4, 2, 8),
            4 => (8, 4, 12),
            5 => (10, 4, 16),
            _ => return Err(Error::InvalidParameter(format!("no defaults for t = {t}; use AlgoParams::general"))),
        };
        Ok(AlgoParams {
            c: t as u32,
            cap,
            size_cap,
            k_base: 12,
            max_levels: 200,
            contact_degree,
            exact_cap: DEFAULT_EXACT_CAP,
        })
    }

    /// Arbitrary `(c, cap, size_cap)`; nothing is promised about progress.
    pub fn general(c: u32, cap: usize, size_cap: usize) -> AlgoParams {
        AlgoParams {
            c,
            cap,
            size_cap,
            k_base: 12,
            max_levels: 200,
            contact_degree: 16,
            exact_cap: DEFAULT_EXACT_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.c < 1 {
            return bad("c must be at least 1");
        }
        if self.size_cap < 1 || self.size_cap > self.cap {
            return bad("size_cap must lie in 1..=cap");
        }
        if self.k_base < 1 {
            return bad("k_base must be at least 1");
        }
        if self.contact_degree < 1 {
            return bad("contact_degree must be at least 1");
        }
        if self.max_levels < 1 {
            return bad("max_levels must be at least 1");
        }
        Ok(())
    }

    /// The default per-level progress floor, `1 / (2 cap)`.
    pub fn progress_floor(&self) -> f64 {
        1.0 / (2.0 * self.cap as f64)
    }

    fn check_lists(&self, g: &Graph, l: &ListAssignment) -> Result<()> {
        self.validate()?;
        if l.n() != g.n() {
            return Err(Error::InvalidParameter(format!("{} lists for {} vertices", l.n(), g.n())));
        }
        l.require_min_size(self.c as usize)
    }
}

/// Round layout of one level, identical at every node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    /// Gathering rounds; enough to see a whole component of `k_base`
    /// vertices and every vertex a pocket search may touch.
    pub gather: u64,
    /// Rounds per contact-graph exchange: one hop plus spreading through a
    /// pocket of diameter below `size_cap`.
    pub span: u64,
    pub plan: Plan,
    pub block: u64,
}

impl Schedule {
    pub fn new(p: &AlgoParams, n: usize) -> Schedule {
        let s = p.size_cap as u64;
        let gather = (p.k_base as u64 - 1).max(s - 1).max(1);
        let plan = Plan::new(n.max(1) as u64, p.contact_degree as u64);
        let block = gather + s - 1 + plan.ops.len() as u64 * s + 1;
        Schedule {
            gather,
            span: s,
            plan,
            block,
        }
    }

    /// Offset at which every member knows the pockets it belongs to and
    /// the first exchange starts.
    pub fn first_exchange(&self) -> u64 {
        self.gather + self.span - 1
    }

    /// Offset of exchange `j`; the results of exchange `j - 1` are
    /// processed there. `j = ops.len()` is the end of the level.
    pub fn exchange(&self, j: usize) -> u64 {
        self.first_exchange() + j as u64 * self.span
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Removal {
    Base,
    Pocket { id: Vertex, class: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub remaining: usize,
    /// Vertices removed at this level, pockets and base components together.
    pub removed: usize,
    /// The part of `removed` coloured as small components.
    pub base: usize,
    pub pockets: usize,
    pub classes: usize,
    pub rounds: u64,
}

impl LevelRecord {
    pub fn progress(&self) -> f64 {
        if self.remaining == 0 {
            1.0
        } else {
            self.removed as f64 / self.remaining as f64
        }
    }
}

/// Levels whose progress fraction is below `floor`.
pub fn levels_below(records: &[LevelRecord], floor: f64) -> Vec<usize> {
    records.iter().filter(|r| r.progress() < floor).map(|r| r.level).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub rounds: u64,
    pub levels: Vec<LevelRecord>,
    pub verified: bool,
}

/// Per-level counts from each vertex's removal level and kind.
pub fn level_records(removals: &[(usize, Removal)], block: u64) -> Vec<LevelRecord> {
    let depth = removals.iter().map(|&(l, _)| l + 1).max().unwrap_or(0);
    let mut out: Vec<LevelRecord> = (0..depth)
        .map(|level| LevelRecord {
            level,
            remaining: 0,
            removed: 0,
            base: 0,
            pockets: 0,
            classes: 0,
            rounds: block,
        })
        .collect();
    let mut pockets = vec![BTreeSet::new(); depth];
    let mut classes = vec![BTreeSet::new(); depth];
    for &(level, removal) in removals {
        for r in &mut out[..=level] {
            r.remaining += 1;
        }
        out[level].removed += 1;
        match removal {
            Removal::Base => out[level].base += 1,
            Removal::Pocket { id, class } => {
                pockets[level].insert(id);
                classes[level].insert(class);
            }
        }
    }
    for (level, r) in out.iter_mut().enumerate() {
        r.pockets = pockets[level].len();
        r.classes = classes[level].len();
    }
    out
}

/// What a pocket publishes to its contacts after each exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PocketState {
    pub participating: bool,
    pub colour: u64,
    pub survived: Option<bool>,
}

/// A touching pocket as seen by its neighbour.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ContactView {
    pub overlap: bool,
    pub state: PocketState,
}

/// The state of a pocket after operation `op`, from its own state and its
/// contacts' states before the operation.
pub(crate) fn advance(op: Op, own: PocketState, contacts: &[ContactView], plan: &Plan) -> PocketState {
    if !own.participating {
        return own;
    }
    let colours = || -> Vec<u64> {
        contacts
            .iter()
            .filter(|c| c.state.participating)
            .map(|c| c.state.colour)
            .collect()
    };
    let mut next = own;
    match op {
        Op::Discover => {}
        Op::Poly(step) => {
            next.colour = poly_step(own.colour, &colours(), step).expect("contact degree within the plan's bound");
        }
        Op::Halve { j, last } => next.colour = halve_step(own.colour, &colours(), plan.b(), j, last),
        Op::Resolve { class } => {
            if own.colour == class {
                let beaten = contacts
                    .iter()
                    .any(|c| c.overlap && c.state.participating && c.state.survived == Some(true));
                next.survived = Some(!beaten);
            }
        }
    }
    next
}

pub(crate) fn initial_state(id: Vertex, contacts: usize, p: &AlgoParams) -> PocketState {
    PocketState {
        participating: contacts <= p.contact_degree,
        colour: id as u64,
        survived: None,
    }
}

/// Colours the subgraph on sorted `members` with `edges` (host ids) from
/// `lists`, by the deterministic exhaustive solver.
pub(crate) fn solve_on(members: &[Vertex], edges: &[(Vertex, Vertex)], lists: &[Vec<Colour>]) -> Option<Vec<Colour>> {
    let index = |v: Vertex| members.binary_search(&v).expect("edge inside the set") as Vertex;
    let local = Graph::from_edges_lossy(members.len(), edges.iter().map(|&(u, v)| (index(u), index(v))));
    solve_lists(&local, lists)
}

/// Edges of `g` inside the sorted set `members`.
pub(crate) fn inner_edges(nbrs: impl Fn(Vertex) -> Vec<Vertex>, members: &[Vertex]) -> Vec<(Vertex, Vertex)> {
    let mut out = Vec::new();
    for &u in members {
        for w in nbrs(u) {
            if u < w && members.binary_search(&w).is_ok() {
                out.push((u, w));
            }
        }
    }
    out.sort_unstable();
    out
}
