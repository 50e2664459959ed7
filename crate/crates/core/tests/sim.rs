use ktcol_core::generators::{random_lists, series_parallel_random};
use ktcol_core::graph::ball;
use ktcol_core::rng::SplitMix64;
use ktcol_core::sim::{gather_ball_program, run};
use ktcol_core::{distributed_list_colour, AlgoParams, Graph, Vertex};

fn random_graph(rng: &mut SplitMix64, n: usize, p: f64) -> Graph {
    let mut pairs = Vec::new();
    for u in 0..n as Vertex {
        for v in u + 1..n as Vertex {
            if rng.chance(p) {
                pairs.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &pairs).unwrap()
}

#[test]
fn gathered_views_are_balls() {
    let mut rng = SplitMix64::new(3);
    for _ in 0..30 {
        let n = 2 + rng.index(30);
        let g = random_graph(&mut rng, n, 0.12);
        for r in 1..=3u64 {
            let (views, trace) = run(&g, &gather_ball_program(r), 10).unwrap();
            assert_eq!(trace.rounds, r);
            for v in g.vertices() {
                let members = ball(&g, v, r as usize).unwrap().into_vec();
                let sub = g.induced(&members);
                assert_eq!(views[v as usize].vertices, members);
                assert_eq!(views[v as usize].edges.len(), sub.m());
            }
        }
    }
}

#[test]
fn outputs_ignore_the_graph_beyond_the_ball() {
    let mut rng = SplitMix64::new(12);
    for _ in 0..40 {
        let n = 8 + rng.index(20);
        let g = random_graph(&mut rng, n, 0.15);
        let r = 1 + rng.index(2);
        let v = rng.index(n) as Vertex;
        let near = ball(&g, v, r).unwrap();
        // edges with both ends at distance >= r from v are invisible to it
        let inner = ball(&g, v, r - 1).unwrap();
        let mut edges: Vec<(Vertex, Vertex)> = g
            .edges()
            .into_iter()
            .filter(|&(a, b)| inner.contains(a) || inner.contains(b) || rng.chance(0.5))
            .collect();
        for a in 0..n as Vertex {
            for b in a + 1..n as Vertex {
                if !near.contains(a) && !near.contains(b) && rng.chance(0.1) && !edges.contains(&(a, b)) {
                    edges.push((a, b));
                }
            }
        }
        let mutated = Graph::from_edges(n, &edges).unwrap();
        let (before, _) = run(&g, &gather_ball_program(r as u64), 10).unwrap();
        let (after, _) = run(&mutated, &gather_ball_program(r as u64), 10).unwrap();
        assert_eq!(before[v as usize].vertices, after[v as usize].vertices);
        let touches_inner = |e: &&(Vertex, Vertex)| inner.contains(e.0) || inner.contains(e.1);
        let old: Vec<_> = before[v as usize].edges.iter().filter(touches_inner).collect();
        let new: Vec<_> = after[v as usize].edges.iter().filter(touches_inner).collect();
        assert_eq!(old, new);
    }
}

#[test]
fn repeated_runs_give_identical_traces() {
    let g = series_parallel_random(400, 8).unwrap();
    let l = random_lists(&g, 4, 8, 8).unwrap();
    let p = AlgoParams::for_t(4).unwrap();
    let (c1, t1, r1) = distributed_list_colour(&g, &l, &p).unwrap();
    let (c2, t2, r2) = distributed_list_colour(&g, &l, &p).unwrap();
    assert_eq!(c1, c2);
    assert_eq!(r1, r2);
    assert_eq!(t1.to_json(), t2.to_json());
    let (_, g1) = run(&g, &gather_ball_program(3), 5).unwrap();
    let (_, g2) = run(&g, &gather_ball_program(3), 5).unwrap();
    assert_eq!(g1.to_json(), g2.to_json());
}
