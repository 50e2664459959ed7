//! List assignments, colourings and the colouring verifier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub type Colour = u32;

/// Per-vertex lists of distinct colours drawn from `0..universe`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ListAssignment {
    universe: u32,
    lists: Vec<Vec<Colour>>,
}

impl ListAssignment {
    /// Lists are sorted; duplicate or out-of-universe colours are rejected.
    /// Empty lists are allowed here; see [`ListAssignment::require_min_size`].
    pub fn new(universe: u32, lists: Vec<Vec<Colour>>) -> Result<Self> {
        let mut lists = lists;
        for (v, list) in lists.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(&c) = list.iter().find(|&&c| c >= universe) {
                return Err(Error::InvalidParameter(format!(
                    "vertex {v}: colour {c} outside universe {universe}"
                )));
            }
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!("vertex {v}: repeated colour")));
            }
        }
        Ok(ListAssignment { universe, lists })
    }

    /// Every vertex gets `0..k`.
    pub fn uniform(n: usize, k: u32) -> Self {
        ListAssignment {
            universe: k,
            lists: vec![(0..k).collect(); n],
        }
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, v: Vertex) -> &[Colour] {
        &self.lists[v as usize]
    }

    pub fn lists(&self) -> &[Vec<Colour>] {
        &self.lists
    }

    pub fn min_size(&self) -> usize {
        self.lists.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn require_min_size(&self, k: usize) -> Result<()> {
        match self.lists.iter().position(|l| l.len() < k) {
            Some(v) => Err(Error::ListTooShort {
                vertex: v as Vertex,
                size: self.lists[v].len(),
                required: k,
            }),
            None => Ok(()),
        }
    }

    /// Lists restricted to `set` (in order), reindexed `0..set.len()`.
    pub fn restrict(&self, set: &[Vertex]) -> ListAssignment {
        ListAssignment {
            universe: self.universe,
            lists: set.iter().map(|&v| self.lists[v as usize].clone()).collect(),
        }
    }
}

/// A partial or total map from vertices to colours.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Colouring {
    colours: Vec<Option<Colour>>,
}

impl Colouring {
    pub fn uncoloured(n: usize) -> Self {
        Colouring {
            colours: vec![None; n],
        }
    }

    pub fn from_total(colours: Vec<Colour>) -> Self {
        Colouring {
            colours: colours.into_iter().map(Some).collect(),
        }
    }

    pub fn from_partial(colours: Vec<Option<Colour>>) -> Self {
        Colouring { colours }
    }

    pub fn n(&self) -> usize {
        self.colours.len()
    }

    pub fn get(&self, v: Vertex) -> Option<Colour> {
        self.colours[v as usize]
    }

    pub fn set(&mut self, v: Vertex, c: Colour) {
        self.colours[v as usize] = Some(c);
    }

    pub fn is_total(&self) -> bool {
        self.colours.iter().all(Option::is_some)
    }

    pub fn as_slice(&self) -> &[Option<Colour>] {
        &self.colours
    }

    /// The colours of a total colouring; errors on the first gap.
    pub fn to_total(&self) -> Result<Vec<Colour>> {
        self.colours
            .iter()
            .enumerate()
            .map(|(v, c)| c.ok_or(Error::PartialColouring(v as Vertex)))
            .collect()
    }
}

/// Outcome of [`verify_colouring`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    EdgeConflict { u: Vertex, v: Vertex, colour: Colour },
    NotInList { vertex: Vertex, colour: Colour },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

/// Checks that `phi` is proper and, when lists are given, that every vertex
/// uses a colour from its list. Edges are scanned in canonical order before
/// lists.
pub fn verify_colouring(g: &Graph, phi: &Colouring, lists: Option<&ListAssignment>) -> Result<Verdict> {
    if phi.n() != g.n() {
        return Err(Error::InvalidParameter(format!(
            "colouring covers {} vertices, graph has {}",
            phi.n(),
            g.n()
        )));
    }
    let colours = phi.to_total()?;
    for (u, v) in g.edges() {
        if colours[u as usize] == colours[v as usize] {
            return Ok(Verdict::EdgeConflict {
                u,
                v,
                colour: colours[u as usize],
            });
        }
    }
    if let Some(l) = lists {
        if l.n() != g.n() {
            return Err(Error::InvalidParameter("list assignment size mismatch".into()));
        }
        for v in g.vertices() {
            let c = colours[v as usize];
            if l.list(v).binary_search(&c).is_err() {
                return Ok(Verdict::NotInList { vertex: v, colour: c });
            }
        }
    }
    Ok(Verdict::Ok)
}
