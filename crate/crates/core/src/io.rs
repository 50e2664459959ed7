//! JSON documents for graphs, list assignments and colourings.
//!
//! Graphs are written canonically: `{"n":N,"edges":[[u,v],...]}` with
//! `u < v` and edges sorted, so saving a loaded canonical document
//! reproduces it byte for byte.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::colouring::{Colour, Colouring, ListAssignment};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Provenance block attached to generated graphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetadata {
    pub family: String,
    pub seed: Option<u64>,
    /// `Some(t)` when the generator guarantees the graph has no `K_t` minor.
    pub certified_minor_free: Option<u32>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    metadata: Option<GraphMetadata>,
}

#[derive(Serialize, Deserialize)]
struct ListsDoc {
    universe: u32,
    lists: BTreeMap<String, Vec<Colour>>,
}

#[derive(Serialize, Deserialize)]
struct ColouringDoc {
    colors: BTreeMap<String, Colour>,
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    }
}

fn write_err(e: std::io::Error) -> Error {
    Error::Parse {
        location: "output".into(),
        message: e.to_string(),
    }
}

fn vertex_key(key: &str, n: usize, what: &str) -> Result<Vertex> {
    let v: Vertex = key.parse().map_err(|_| Error::Parse {
        location: format!("{what} key {key:?}"),
        message: "expected a vertex id".into(),
    })?;
    if v as usize >= n {
        return Err(Error::Parse {
            location: format!("{what} key {key:?}"),
            message: format!("vertex out of range for n = {n}"),
        });
    }
    Ok(v)
}

pub fn graph_from_str(s: &str) -> Result<(Graph, Option<GraphMetadata>)> {
    let doc: GraphDoc = serde_json::from_str(s).map_err(parse_err)?;
    let edges: Vec<(Vertex, Vertex)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
    let g = Graph::from_edges(doc.n, &edges).map_err(|e| match e {
        Error::InvalidEdge { index, u, v, reason } => Error::Parse {
            location: format!("edges[{index}]"),
            message: format!("({u},{v}): {reason}"),
        },
        Error::VertexOutOfRange { vertex, n } => Error::Parse {
            location: "edges".into(),
            message: format!("vertex {vertex} out of range for n = {n}"),
        },
        other => other,
    })?;
    Ok((g, doc.metadata))
}

pub fn read_graph(mut r: impl Read) -> Result<(Graph, Option<GraphMetadata>)> {
    let mut s = String::new();
    r.read_to_string(&mut s).map_err(write_err)?;
    graph_from_str(&s)
}

pub fn graph_to_string(g: &Graph, metadata: Option<&GraphMetadata>) -> String {
    let doc = GraphDoc {
        n: g.n(),
        edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        metadata: metadata.cloned(),
    };
    serde_json::to_string(&doc).expect("graph serialization cannot fail")
}

pub fn write_graph(mut w: impl Write, g: &Graph, metadata: Option<&GraphMetadata>) -> Result<()> {
    w.write_all(graph_to_string(g, metadata).as_bytes()).map_err(write_err)
}

/// Parses a list document for a graph on `n` vertices. Vertices missing from
/// the document get an empty list.
pub fn lists_from_str(s: &str, n: usize) -> Result<ListAssignment> {
    let doc: ListsDoc = serde_json::from_str(s).map_err(parse_err)?;
    let mut lists = vec![Vec::new(); n];
    for (key, list) in doc.lists {
        let v = vertex_key(&key, n, "lists")?;
        lists[v as usize] = list;
    }
    ListAssignment::new(doc.universe, lists).map_err(|e| Error::Parse {
        location: "lists".into(),
        message: e.to_string(),
    })
}

pub fn lists_to_string(l: &ListAssignment) -> String {
    let doc = ListsDoc {
        universe: l.universe(),
        lists: l
            .lists()
            .iter()
            .enumerate()
            .map(|(v, list)| (v.to_string(), list.clone()))
            .collect(),
    };
    serde_json::to_string(&doc).expect("list serialization cannot fail")
}

pub fn colouring_from_str(s: &str, n: usize) -> Result<Colouring> {
    let doc: ColouringDoc = serde_json::from_str(s).map_err(parse_err)?;
    let mut phi = Colouring::uncoloured(n);
    for (key, c) in doc.colors {
        let v = vertex_key(&key, n, "colors")?;
        phi.set(v, c);
    }
    Ok(phi)
}

/// Only coloured vertices are written.
pub fn colouring_to_string(phi: &Colouring) -> String {
    let doc = ColouringDoc {
        colors: phi
            .as_slice()
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| (v.to_string(), c)))
            .collect(),
    };
    serde_json::to_string(&doc).expect("colouring serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_document() {
        let (g, meta) = graph_from_str(r#"{"n":2,"edges":[[0,1]]}"#).unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.has_edge(0, 1));
        assert!(meta.is_none());
    }

    #[test]
    fn loop_is_a_located_parse_error() {
        match graph_from_str(r#"{"n":1,"edges":[[0,0]]}"#) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "edges[0]"),
            other => panic!("unexpected {other:?}"),
        }
        match graph_from_str(r#"{"n":3,"edges":[[0,1],[1,2],[1,0]]}"#) {
            Err(Error::Parse { location, message }) => {
                assert_eq!(location, "edges[2]");
                assert!(message.contains("duplicate"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(graph_from_str("{\"n\":2,"), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let text = r#"{"n":4,"edges":[[0,1],[0,3],[1,2],[2,3]]}"#;
        let (g, _) = graph_from_str(text).unwrap();
        assert_eq!(graph_to_string(&g, None), text);
        let meta = GraphMetadata {
            family: "v8".into(),
            seed: None,
            certified_minor_free: Some(5),
        };
        let with_meta = graph_to_string(&g, Some(&meta));
        let (g2, m2) = graph_from_str(&with_meta).unwrap();
        assert_eq!(g2, g);
        assert_eq!(m2, Some(meta));
    }

    #[test]
    fn lists_and_colourings_round_trip() {
        let l = ListAssignment::new(4, vec![vec![0, 1], vec![2, 3], vec![1]]).unwrap();
        let s = lists_to_string(&l);
        assert_eq!(lists_from_str(&s, 3).unwrap(), l);
        let phi = Colouring::from_total(vec![1, 3, 1]);
        assert_eq!(colouring_from_str(&colouring_to_string(&phi), 3).unwrap(), phi);
        assert!(colouring_from_str(r#"{"colors":{"7":0}}"#, 3).is_err());
    }
}
