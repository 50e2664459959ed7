use ktcol_core::graph::{ball, boundary_and_coboundary, is_deep, is_pocket};
use ktcol_core::io::{colouring_from_str, colouring_to_string, graph_from_str, graph_to_string, lists_from_str, lists_to_string};
use ktcol_core::rng::SplitMix64;
use ktcol_core::{verify_colouring, Colouring, Graph, ListAssignment, Verdict, Vertex, VertexSet};
use proptest::prelude::*;
use proptest::test_runner::FileFailurePersistence;

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..24).prop_flat_map(|n| {
        proptest::collection::vec((0..n as Vertex, 0..n as Vertex), 0..3 * n)
            .prop_map(move |pairs| Graph::from_edges_lossy(n, pairs.into_iter().filter(|(u, v)| u != v)))
    })
}

fn graph_and_subset() -> impl Strategy<Value = (Graph, Vec<Vertex>)> {
    graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), proptest::collection::vec(any::<bool>(), n))
            .prop_map(|(g, pick)| (g, pick.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as Vertex).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig {
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        ..ProptestConfig::default()
    })]

    #[test]
    fn balls_grow_to_the_component(g in graph(), seed in any::<u64>()) {
        let v = SplitMix64::new(seed).index(g.n()) as Vertex;
        let comp = g.components().into_iter().find(|c| c.contains(&v)).unwrap();
        let mut last = ball(&g, v, 0).unwrap();
        prop_assert_eq!(last.as_slice(), &[v]);
        for r in 1..=g.n() {
            let b = ball(&g, v, r).unwrap();
            prop_assert!(last.iter().all(|x| b.contains(x)));
            last = b;
        }
        prop_assert_eq!(last.into_vec(), comp);
    }

    #[test]
    fn boundary_sits_inside_and_coboundary_outside((g, s) in graph_and_subset()) {
        let set = VertexSet::of(&g, s.clone()).unwrap();
        let (b, cob) = boundary_and_coboundary(&g, &set).unwrap();
        prop_assert!(b.iter().all(|v| set.contains(v)));
        prop_assert!(cob.iter().all(|v| !set.contains(v)));
        let complement = VertexSet::of(&g, g.vertices().filter(|v| !set.contains(*v))).unwrap();
        let (cb, _) = boundary_and_coboundary(&g, &complement).unwrap();
        let expected: Vec<Vertex> = cb.iter().filter(|&v| g.neighbours(v).iter().any(|w| set.contains(*w))).collect();
        prop_assert_eq!(cob.into_vec(), expected);
        if !s.is_empty() {
            let deep = is_deep(&g, &set, 2).unwrap();
            let (_, cob) = boundary_and_coboundary(&g, &set).unwrap();
            prop_assert_eq!(deep, !cob.is_empty() && 2 * cob.len() <= s.len());
            let pocket = is_pocket(&g, &set, 4).unwrap();
            if pocket {
                prop_assert!(s.len() <= 4 && s.iter().all(|&v| g.degree(v) <= 4));
            }
        }
    }

    #[test]
    fn graph_documents_round_trip(g in graph()) {
        let text = graph_to_string(&g, None);
        let (back, meta) = graph_from_str(&text).unwrap();
        prop_assert!(meta.is_none());
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(graph_to_string(&back, None), text);
    }
}

/// Independent check: the first conflicting edge in sorted order, then the
/// first vertex outside its list.
fn scan(g: &Graph, colours: &[u32], lists: &ListAssignment) -> Verdict {
    let mut edges = Vec::new();
    for u in g.vertices() {
        for &v in g.neighbours(u) {
            if u < v {
                edges.push((u, v));
            }
        }
    }
    edges.sort();
    if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| colours[u as usize] == colours[v as usize]) {
        return Verdict::EdgeConflict {
            u,
            v,
            colour: colours[u as usize],
        };
    }
    for v in g.vertices() {
        if !lists.list(v).contains(&colours[v as usize]) {
            return Verdict::NotInList {
                vertex: v,
                colour: colours[v as usize],
            };
        }
    }
    Verdict::Ok
}

#[test]
fn verifier_matches_an_edge_scan() {
    let mut rng = SplitMix64::new(2024);
    let mut seen_ok = 0;
    for _ in 0..1000 {
        let n = 1 + rng.index(12);
        let mut pairs = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                if rng.chance(0.2) {
                    pairs.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &pairs).unwrap();
        let colours: Vec<u32> = (0..n).map(|_| rng.below(4) as u32).collect();
        let lists = ListAssignment::new(
            4,
            (0..n)
                .map(|_| {
                    let mut l: Vec<u32> = (0..4).filter(|_| rng.chance(0.7)).collect();
                    if l.is_empty() {
                        l.push(0);
                    }
                    l
                })
                .collect(),
        )
        .unwrap();
        let phi = Colouring::from_total(colours.clone());
        let verdict = verify_colouring(&g, &phi, Some(&lists)).unwrap();
        assert_eq!(verdict, scan(&g, &colours, &lists));
        seen_ok += verdict.is_ok() as usize;
    }
    assert!(seen_ok > 0);
}

#[test]
fn list_and_colouring_documents() {
    let lists = lists_from_str(r#"{"universe":3,"lists":{"0":[0,1],"1":[2]}}"#, 2).unwrap();
    assert_eq!(lists.list(1), &[2]);
    assert_eq!(lists_from_str(&lists_to_string(&lists), 2).unwrap(), lists);
    let phi = colouring_from_str(r#"{"colors":{"0":1,"1":2}}"#, 2).unwrap();
    assert_eq!(colouring_from_str(&colouring_to_string(&phi), 2).unwrap(), phi);
    assert!(colouring_from_str(r#"{"colors":{"5":1}}"#, 2).is_err());
    assert!(graph_from_str(r#"{"n":2,"edges":[[0,1],[1,0]]}"#).is_err());
}
