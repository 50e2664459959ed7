//! Minor containment, minor-freeness checks and width-2 tree decompositions.

mod free;
mod reduce;
mod search;
mod treedec;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

pub use free::{is_kt_minor_free, is_locally_minor_free, LocalFreeness, MinorFreeness};
pub use reduce::clique_minor;
pub use search::has_minor;
pub use treedec::{make_smooth, tree_decomposition_w2, validate_decomposition, TreeDecomposition};

use crate::graph::{induces_connected, Graph, Vertex};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Disjoint connected branch sets, one per pattern vertex, with a host edge
/// between the sets of every pattern edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub pattern: Graph,
    pub branch_sets: Vec<Vec<Vertex>>,
}

impl MinorModel {
    pub fn pattern_name(&self) -> String {
        let k = self.pattern.n();
        if self.pattern.m() == k * k.saturating_sub(1) / 2 {
            format!("K{k}")
        } else {
            format!("H{k}")
        }
    }
}

impl Serialize for MinorModel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("MinorModel", 2)?;
        st.serialize_field("pattern", &self.pattern_name())?;
        st.serialize_field("branch_sets", &self.branch_sets)?;
        st.end()
    }
}

/// Result of a budgeted minor search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorOutcome {
    Found(MinorModel),
    Absent,
    /// The node budget ran out; nothing is known.
    Exceeded,
}

impl MinorOutcome {
    pub fn model(&self) -> Option<&MinorModel> {
        match self {
            MinorOutcome::Found(m) => Some(m),
            _ => None,
        }
    }
}

/// Checks a model against its host without trusting the search that made it.
pub fn validate_model(host: &Graph, model: &MinorModel) -> Result<(), String> {
    let k = model.pattern.n();
    if model.branch_sets.len() != k {
        return Err(format!("{} branch sets for a pattern on {k} vertices", model.branch_sets.len()));
    }
    let mut owner = vec![usize::MAX; host.n()];
    for (i, set) in model.branch_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(format!("branch set {i} is empty"));
        }
        let mut sorted = set.clone();
        sorted.sort_unstable();
        for &v in &sorted {
            if v as usize >= host.n() {
                return Err(format!("branch set {i} names vertex {v} outside the host"));
            }
            if owner[v as usize] != usize::MAX {
                return Err(format!("vertex {v} is in branch sets {} and {i}", owner[v as usize]));
            }
            owner[v as usize] = i;
        }
        if !induces_connected(host, &sorted) {
            return Err(format!("branch set {i} is not connected"));
        }
    }
    for (i, j) in model.pattern.edges() {
        let touches = model.branch_sets[i as usize]
            .iter()
            .any(|&v| host.neighbours(v).iter().any(|&w| owner[w as usize] == j as usize));
        if !touches {
            return Err(format!("no host edge between branch sets {i} and {j}"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn validation_catches_each_defect() {
        let host = named::path(4);
        let pattern = named::complete(2);
        let ok = MinorModel {
            pattern: pattern.clone(),
            branch_sets: vec![vec![0, 1], vec![2, 3]],
        };
        assert!(validate_model(&host, &ok).is_ok());
        let overlap = MinorModel {
            pattern: pattern.clone(),
            branch_sets: vec![vec![0, 1], vec![1, 2]],
        };
        assert!(validate_model(&host, &overlap).is_err());
        let split = MinorModel {
            pattern: pattern.clone(),
            branch_sets: vec![vec![0, 2], vec![3]],
        };
        assert!(validate_model(&host, &split).is_err());
        let apart = MinorModel {
            pattern,
            branch_sets: vec![vec![0], vec![3]],
        };
        assert!(validate_model(&host, &apart).is_err());
    }

    #[test]
    fn json_shape() {
        let m = MinorModel {
            pattern: named::complete(3),
            branch_sets: vec![vec![0], vec![1], vec![2]],
        };
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"pattern":"K3","branch_sets":[[0],[1],[2]]}"#);
    }
}
