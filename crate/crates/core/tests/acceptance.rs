//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::time::Instant;

use ktcol_core::deletability::*;
use ktcol_core::generators::*;
use ktcol_core::graph::named;
use ktcol_core::minors::*;
use ktcol_core::rng::SplitMix64;
use ktcol_core::{
    distributed_list_colour, sequential_reference_colour, verify_colouring, AlgoParams, Graph, ListAssignment,
    LevelRecord, Vertex, VertexSet,
};

/// Largest relative gap between a median and the fitted line.
const FIT_RESIDUAL: f64 = 0.15;
/// Upper bound on rounds(2^16) / rounds(2^10).
const ROUND_RATIO: f64 = 2.0;
const SCALING_TRIALS: u64 = 3;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

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

fn coloured(g: &Graph, l: &ListAssignment, t: usize) -> Result<(), String> {
    let p = AlgoParams::for_t(t).unwrap();
    let (c, _, _) = distributed_list_colour(g, l, &p).map_err(|e| e.to_string())?;
    match verify_colouring(g, &c, Some(l)) {
        Ok(v) if v.is_ok() => Ok(()),
        other => Err(format!("{other:?}")),
    }
}

fn correctness() -> Outcome {
    let mut rng = SplitMix64::new(1);
    let mut ok = 0;
    let mut failures = Vec::new();
    for i in 0..200 {
        let n = 100 + rng.index(4901);
        let g = series_parallel_random(n, i).unwrap();
        let l = random_lists(&g, 4, 8, i).unwrap();
        match coloured(&g, &l, 4) {
            Ok(()) => ok += 1,
            Err(e) => failures.push(format!("sp seed {i}: {e}")),
        }
    }
    let mut sizes = (usize::MAX, 0);
    for i in 0..100 {
        let target = 100 + rng.index(1901);
        let mut blocks = (target / 10).max(1);
        let mut g = wagner_composition_random(blocks, 12, 1000 + i).unwrap();
        // clique sums share up to three vertices, so the size per block varies
        while g.n() < 100 || g.n() > 2000 {
            blocks = if g.n() < 100 { blocks + 1 } else { blocks - 1 };
            g = wagner_composition_random(blocks, 12, 1000 + i).unwrap();
        }
        sizes = (sizes.0.min(g.n()), sizes.1.max(g.n()));
        let l = random_lists(&g, 5, 10, 1000 + i).unwrap();
        match coloured(&g, &l, 5) {
            Ok(()) => ok += 1,
            Err(e) => failures.push(format!("wagner seed {}: {e}", 1000 + i)),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{ok}/300 colourings verified (wagner sizes {}..{}){}",
            sizes.0,
            sizes.1,
            failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

fn median(mut xs: Vec<u64>) -> f64 {
    xs.sort_unstable();
    xs[xs.len() / 2] as f64
}

fn logarithmic_rounds() -> Outcome {
    let p = AlgoParams::for_t(4).unwrap();
    let mut points = Vec::new();
    for k in 10..=16u32 {
        let n = 1usize << k;
        let mut rounds = Vec::new();
        for trial in 0..SCALING_TRIALS {
            let seed = (k as u64) * 100 + trial;
            let g = series_parallel_random(n, seed).unwrap();
            let l = random_lists(&g, 4, 8, seed).unwrap();
            match distributed_list_colour(&g, &l, &p) {
                Ok((_, trace, _)) => rounds.push(trace.rounds),
                Err(e) => return outcome(false, format!("n = {n}, seed {seed}: {e}")),
            }
        }
        points.push((k as f64, median(rounds)));
    }
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let sxx: f64 = points.iter().map(|&(x, _)| x * x).sum();
    let sxy: f64 = points.iter().map(|&(x, y)| x * y).sum();
    let a = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let b = (sy - a * sx) / m;
    let worst = points.iter().map(|&(x, y)| ((a * x + b) - y).abs() / y).fold(0.0, f64::max);
    let ratio = points.last().unwrap().1 / points[0].1;
    let table: Vec<String> = points.iter().map(|&(x, y)| format!("2^{x}:{y}")).collect();
    outcome(
        worst < FIT_RESIDUAL && ratio <= ROUND_RATIO,
        format!(
            "median rounds [{}]; fit a = {a:.2}, b = {b:.1}; worst residual {:.1}% (< {:.0}%); ratio {ratio:.3} (<= {ROUND_RATIO})",
            table.join(" "),
            worst * 100.0,
            FIT_RESIDUAL * 100.0
        ),
    )
}

fn per_level_progress() -> Outcome {
    let p = AlgoParams::for_t(4).unwrap();
    assert_eq!(p.size_cap, 4);
    let floor = p.progress_floor();
    let mut worst = (f64::INFINITY, 0, 0);
    let mut below = Vec::new();
    let mut rng = SplitMix64::new(3);
    for seed in 0..100u64 {
        let n = 100 + rng.index(4901);
        let g = series_parallel_random(n, 5000 + seed).unwrap();
        let l = random_lists(&g, 4, 8, seed).unwrap();
        let records: Vec<LevelRecord> = match sequential_reference_colour(&g, &l, &p) {
            Ok((_, r)) => r,
            Err(e) => return outcome(false, format!("seed {}: {e}", 5000 + seed)),
        };
        for r in &records {
            if r.progress() < worst.0 {
                worst = (r.progress(), 5000 + seed, r.level);
            }
            if r.progress() < floor {
                below.push((5000 + seed, r.level));
            }
        }
    }
    outcome(
        below.is_empty(),
        format!(
            "minimum progress {:.3} (seed {}, level {}) against floor 1/(2*{}) = {floor:.4}; {} levels below",
            worst.0,
            worst.1,
            worst.2,
            p.cap,
            below.len()
        ),
    )
}

fn lower_bound_family() -> Outcome {
    let mut bad = Vec::new();
    for t in 3..=5 {
        for n in 2..=6 {
            let g = necklace(t, n).unwrap();
            let chi = chromatic_number_exact(&g, t as u32 + 1);
            let local = is_locally_minor_free(&g, t, n / 2, DEFAULT_BUDGET).unwrap();
            if chi != ChromaticOutcome::Exact(t as u32) || local != LocalFreeness::Free {
                bad.push(format!("t {t} n {n}: {chi:?} {local:?}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("15 necklaces checked; {} mismatches {:?}", bad.len(), bad))
}

/// Every `f`-list assignment of `h`, colours numbered in order of first
/// use, is colourable. Independent of the library's Hall-type reduction.
fn choosable_naive(h: &Graph, f: &[usize]) -> bool {
    fn colourable(h: &Graph, lists: &[Vec<u32>], v: usize, chosen: &mut Vec<u32>) -> bool {
        if v == lists.len() {
            return true;
        }
        for &c in &lists[v] {
            if h.neighbours(v as Vertex).iter().all(|&w| (w as usize) >= v || chosen[w as usize] != c) {
                chosen.push(c);
                if colourable(h, lists, v + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    fn subsets(from: &[u32], k: usize) -> Vec<Vec<u32>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..from.len() {
            for mut rest in subsets(&from[i + 1..], k - 1) {
                rest.insert(0, from[i]);
                out.push(rest);
            }
        }
        out
    }
    fn all(h: &Graph, f: &[usize], lists: &mut Vec<Vec<u32>>, used: u32) -> bool {
        let v = lists.len();
        if v == f.len() {
            return colourable(h, lists, 0, &mut Vec::new());
        }
        let old: Vec<u32> = (0..used).collect();
        for fresh in 0..=f[v] {
            for mut list in subsets(&old, f[v] - fresh) {
                list.extend(used..used + fresh as u32);
                lists.push(list);
                let ok = all(h, f, lists, used + fresh as u32);
                lists.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    all(h, f, &mut Vec::new(), 0)
}

fn canonical(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<(Vertex, Vertex)> {
    fn perms(n: usize) -> Vec<Vec<Vertex>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, (n - 1) as Vertex);
                out.push(q);
            }
        }
        out
    }
    perms(n)
        .into_iter()
        .map(|p| {
            let mut e: Vec<(Vertex, Vertex)> = edges
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (p[u as usize], p[v as usize]);
                    (a.min(b), a.max(b))
                })
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .unwrap()
}

fn choosability_agreement() -> Outcome {
    let mut classes = std::collections::BTreeSet::new();
    for n in 1..=5usize {
        let pairs: Vec<(Vertex, Vertex)> =
            (0..n as Vertex).flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v))).collect();
        for mask in 0u32..1 << pairs.len() {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            if Graph::from_edges(n, &edges).unwrap().is_connected() {
                classes.insert((n, canonical(n, &edges)));
            }
        }
    }
    let (mut budgets, mut sufficient, mut violations, mut naive_checked, mut naive_mismatch) = (0, 0, 0, 0, 0);
    for (n, edges) in &classes {
        let h = Graph::from_edges(*n, edges).unwrap();
        let degrees: Vec<usize> = h.vertices().map(|v| h.degree(v)).collect();
        let mut f = vec![1usize; *n];
        loop {
            budgets += 1;
            let fi: Vec<i64> = f.iter().map(|&x| x as i64).collect();
            let exact = choosable_exact(&h, &fi, DEFAULT_EXACT_CAP).unwrap() == ExactOutcome::Choosable;
            if choosable_sufficient(&h, &fi).is_some() {
                sufficient += 1;
                violations += !exact as usize;
            }
            if f.iter().sum::<usize>() <= 9 {
                naive_checked += 1;
                naive_mismatch += (choosable_naive(&h, &f) != exact) as usize;
            }
            let Some(i) = (0..*n).find(|&i| f[i] <= degrees[i]) else { break };
            f[i] += 1;
            f[..i].iter_mut().for_each(|x| *x = 1);
        }
    }
    let k4e = named::k4_minus_edge();
    // k4_minus_edge: vertices 0 and 3 are the non-adjacent pair
    let k4e_f = [2i64, 3, 3, 2];
    let k4e_ok = choosable_exact(&k4e, &k4e_f, DEFAULT_EXACT_CAP).unwrap() == ExactOutcome::Choosable
        && choosable_naive(&k4e, &[2, 3, 3, 2]);
    let c5_no = choosable_exact(&named::cycle(5), &[2; 5], DEFAULT_EXACT_CAP).unwrap() != ExactOutcome::Choosable
        && !choosable_naive(&named::cycle(5), &[2; 5]);
    outcome(
        violations == 0 && naive_mismatch == 0 && k4e_ok && c5_no,
        format!(
            "{} graphs, {budgets} budgets, {sufficient} sufficient yes, {violations} contradicted; naive oracle {naive_checked} checked, {naive_mismatch} mismatches; K4-e (2,3,3,2) {}; C5 f=2 {}",
            classes.len(),
            if k4e_ok { "choosable" } else { "WRONG" },
            if c5_no { "not choosable" } else { "WRONG" }
        ),
    )
}

fn random_subset(rng: &mut SplitMix64, n: usize, size: usize) -> Vec<Vertex> {
    let mut all: Vec<Vertex> = (0..n as Vertex).collect();
    for i in 0..size {
        let j = i + rng.index(n - i);
        all.swap(i, j);
    }
    all.truncate(size);
    all.sort_unstable();
    all
}

fn deletability_bounds() -> Outcome {
    let mut rng = SplitMix64::new(5);
    let (mut tree_ok, mut sp_ok) = (0, 0);
    let mut notes = Vec::new();
    for seed in 0..200 {
        let n = 2 + rng.index(60);
        let g = random_tree(n, seed).unwrap();
        let max_x = (0..=n).filter(|&x| n as i64 > 2 * (x as i64 - 1)).max().unwrap();
        let size = rng.index(max_x + 1);
        let x = VertexSet::of(&g, random_subset(&mut rng, n, size)).unwrap();
        match find_deletable_disjoint_from(&g, &x, 3, 1).unwrap() {
            Some(s) if s.len() == 1 && s.is_disjoint(&x) && g.degree(s.as_slice()[0]) <= 2 => tree_ok += 1,
            other => notes.push(format!("tree seed {seed}: {other:?}")),
        }
    }
    for seed in 0..200 {
        let n = 12 + rng.index(200);
        let g = series_parallel_random(n, seed).unwrap();
        let max_x = (n - 1) / 11;
        let size = rng.index(max_x + 1);
        let x = VertexSet::of(&g, random_subset(&mut rng, n, size)).unwrap();
        match find_deletable_disjoint_from(&g, &x, 4, 4).unwrap() {
            Some(s) if s.len() <= 4 && s.is_disjoint(&x) => {
                let members = s.as_slice();
                let f: Vec<usize> = members
                    .iter()
                    .map(|&v| {
                        let external = g.neighbours(v).iter().filter(|w| !s.contains(**w)).count();
                        4usize.saturating_sub(external)
                    })
                    .collect();
                if f.iter().all(|&x| x >= 1) && choosable_naive(&g.induced(members), &f) {
                    sp_ok += 1;
                } else {
                    notes.push(format!("sp seed {seed}: witness {members:?} fails the naive check"));
                }
            }
            other => notes.push(format!("sp seed {seed}: {other:?}")),
        }
    }
    outcome(
        notes.is_empty(),
        format!(
            "trees {tree_ok}/200 size-1 witnesses, series-parallel {sp_ok}/200 witnesses of size <= 4{}",
            notes.first().map(|n| format!("; first problem {n}")).unwrap_or_default()
        ),
    )
}

fn differential_equality() -> Outcome {
    let mut rng = SplitMix64::new(7);
    let mut equal = 0;
    let mut first = None;
    for i in 0..200u64 {
        let n = 50 + rng.index(1451);
        let seed = 7000 + i;
        let (g, t) = match i % 4 {
            0 | 1 => (series_parallel_random(n, seed).unwrap(), 4),
            2 => (wagner_composition_random((n / 10).max(1), 12, seed).unwrap(), 5),
            _ => (planar_triangulation_random(n, seed).unwrap(), 5),
        };
        let l = random_lists(&g, t, 2 * t as u32, seed).unwrap();
        let p = AlgoParams::for_t(t).unwrap();
        let same = match (distributed_list_colour(&g, &l, &p), sequential_reference_colour(&g, &l, &p)) {
            (Ok((c1, _, r1)), Ok((c2, r2))) => c1 == c2 && r1 == r2,
            _ => false,
        };
        if same {
            equal += 1;
        } else if first.is_none() {
            first = Some(seed);
        }
    }
    outcome(
        equal == 200,
        format!(
            "{equal}/200 instances with identical colourings and level records{}",
            first.map(|s| format!("; first difference at seed {s}")).unwrap_or_default()
        ),
    )
}

fn minor_detection() -> Outcome {
    let mut rng = SplitMix64::new(8);
    let mut disagreements = 0;
    for _ in 0..10_000 {
        let n = 1 + rng.index(9);
        let p = 0.1 + 0.6 * rng.below(1000) as f64 / 1000.0;
        let g = random_graph(&mut rng, n, p);
        for t in [3, 4] {
            let fast = is_kt_minor_free(&g, t, DEFAULT_BUDGET).unwrap();
            let search = has_minor(&g, &named::complete(t), DEFAULT_BUDGET).unwrap();
            let agree = match (fast, &search) {
                (MinorFreeness::Free, MinorOutcome::Absent) => true,
                (MinorFreeness::HasMinor, MinorOutcome::Found(m)) => validate_model(&g, m).is_ok(),
                _ => false,
            };
            disagreements += !agree as usize;
        }
    }
    let v8 = wagner_v8();
    let no_k5 = has_minor(&v8, &named::complete(5), DEFAULT_BUDGET).unwrap() == MinorOutcome::Absent;
    let k4 = matches!(has_minor(&v8, &named::complete(4), DEFAULT_BUDGET).unwrap(), MinorOutcome::Found(_));
    outcome(
        disagreements == 0 && no_k5 && k4,
        format!("10000 random graphs, {disagreements} disagreements; V8 K5-free {no_k5}, has K4 {k4}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("correctness of the distributed colouring", correctness),
        ("logarithmic rounds", logarithmic_rounds),
        ("per-level progress", per_level_progress),
        ("lower-bound family", lower_bound_family),
        ("deletability bounds", deletability_bounds),
        ("choosability oracle agreement", choosability_agreement),
        ("differential equality", differential_equality),
        ("minor detection", minor_detection),
    ];
    let start = Instant::now();
    let results: Vec<(Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|&(_, run)| {
                s.spawn(move || {
                    let t = Instant::now();
                    let o = run();
                    (o, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion panicked")).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (o, secs))) in criteria.iter().zip(&results).enumerate() {
        println!(
            "criterion {} {} {name}: {} [{secs:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += !o.pass as usize;
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
