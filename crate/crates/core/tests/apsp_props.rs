use clustered_apsp::apsp::{extract_long_paths, hitting_set, horizon_step, HorizonState};
use clustered_apsp::bench::{random_bit_matrix, random_digraph};
use clustered_apsp::mixed::Side;
use clustered_apsp::mst::{compile_traversal, exact_mst, MstMode};
use clustered_apsp::oracle::{bfs_closure, floyd_warshall_edge_classes, floyd_warshall_vertex_weighted};
use clustered_apsp::rng::SeedSplitter;
use clustered_apsp::{
    apsp, apsp_bounded_edge_classes, transitive_closure, ApspConfig, EdgeClassDigraph, SidePolicy,
    VertexWeightedDigraph,
};
use rand::Rng;

fn integer_weighted(n: usize, density: f64, seed: u64) -> VertexWeightedDigraph {
    let g = random_digraph(n, density, 10.0, seed);
    let w = g.weights().iter().map(|w| w.round()).collect();
    VertexWeightedDigraph::new(g.adjacency().clone(), w).unwrap()
}

fn plan_for(g: &VertexWeightedDigraph, side: Side) -> clustered_apsp::TraversalPlan {
    let rows = match side {
        Side::Right => g.adjacency().transpose(),
        Side::Left => g.adjacency().clone(),
    };
    compile_traversal(&exact_mst(&rows).unwrap(), &rows).unwrap()
}

#[test]
fn horizon_is_monotone_and_reaches_the_oracle() {
    for seed in 0..6u64 {
        let g = random_digraph(20, 0.12, 10.0, seed);
        let oracle = floyd_warshall_vertex_weighted(&g);
        for side in [Side::Right, Side::Left] {
            let plan = plan_for(&g, side);
            let mut state = HorizonState::initial(&g, side);
            while state.horizon() < g.n() - 1 {
                let next = horizon_step(&state, &g, &plan).unwrap();
                for v in 0..g.n() {
                    for u in 0..g.n() {
                        assert!(next.distances().get(v, u) <= state.distances().get(v, u));
                    }
                }
                state = next;
            }
            assert!(state.distances().first_mismatch(&oracle, 1e-9).is_none());
        }
    }
}

#[test]
fn long_paths_have_t_vertices() {
    for seed in 0..6u64 {
        let g = random_digraph(30, 0.08, 10.0, seed);
        for t in 2..6 {
            let plan = plan_for(&g, Side::Right);
            let mut state = HorizonState::initial(&g, Side::Right);
            while state.horizon() < t - 1 {
                state = horizon_step(&state, &g, &plan).unwrap();
            }
            let sets = extract_long_paths(&state, &g).unwrap();
            assert!(sets.iter().all(|s| s.len() == t));
            let b = hitting_set(&sets, g.n()).unwrap();
            assert!(b.hits_all(&sets));
        }
    }
}

#[test]
fn apsp_matches_floyd_warshall_for_every_side_and_horizon() {
    for seed in 0..12u64 {
        let n = [10usize, 33, 64][seed as usize % 3];
        let density = [0.05, 0.15, 0.4][seed as usize % 3];
        let g = random_digraph(n, density, 10.0, seed);
        let oracle = floyd_warshall_vertex_weighted(&g);
        for (side, t) in [
            (SidePolicy::Auto, None),
            (SidePolicy::Right, Some(3)),
            (SidePolicy::Left, Some(4)),
            (SidePolicy::Auto, Some(7)),
        ] {
            let cfg = ApspConfig {
                side,
                horizon: t,
                seed,
                ..ApspConfig::default()
            };
            let r = apsp(&g, &cfg).unwrap();
            if let Some((v, u, a, b)) = r.distances.first_mismatch(&oracle, 1e-9) {
                panic!("seed {seed} {side:?} t={t:?}: D[{v},{u}] = {a}, oracle {b}");
            }
        }
    }
}

#[test]
fn bridging_set_covers_every_long_shortest_path() {
    for seed in 0..10u64 {
        let n = 40 + (seed as usize % 3) * 12;
        let g = integer_weighted(n, 0.06, 900 + seed);
        let oracle = floyd_warshall_vertex_weighted(&g);
        let w = g.weights();
        for t in [3, 4, 6] {
            let cfg = ApspConfig {
                horizon: Some(t),
                mst: MstMode::Exact,
                ..ApspConfig::default()
            };
            let r = apsp(&g, &cfg).unwrap();
            let bounded = r.horizon.as_ref().unwrap().distances();
            // Endpoint-inclusive distance, so a bridge may coincide with an endpoint.
            let delta = |x: usize, y: usize| if x == y { w[x] } else { oracle.get(x, y) };
            for v in 0..n {
                for u in 0..n {
                    let exact = oracle.get(v, u);
                    if v == u || exact == f64::INFINITY || bounded.get(v, u) == exact {
                        continue;
                    }
                    let covered = r
                        .bridging
                        .vertices()
                        .iter()
                        .any(|&b| delta(v, b) + delta(b, u) - w[b] == exact);
                    assert!(covered, "seed {seed} t={t}: pair ({v},{u}) not bridged");
                }
            }
            assert!(r.distances.bit_eq(&oracle));
        }
    }
}

#[test]
fn closure_matches_bfs() {
    for seed in 0..12u64 {
        let n = [5usize, 50, 130][seed as usize % 3];
        let p = [0.01, 0.03, 0.2][seed as usize % 3];
        let b = random_bit_matrix(n, n, p, seed);
        assert_eq!(transitive_closure(&b, &ApspConfig::default()).unwrap(), bfs_closure(&b).unwrap());
    }
}

#[test]
fn edge_classes_match_extended_floyd_warshall() {
    for seed in 0..10u64 {
        let mut rng = SeedSplitter::new(seed).stream("classes");
        let n = 8 + (seed as usize * 5) % 40;
        let q = 1 + seed as usize % 3;
        let costs: Vec<f64> = (0..q).map(|_| rng.gen_range(0.0..5.0)).collect();
        let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in 0..n {
                if u != v && rng.gen_bool(0.1) {
                    edges.push((u, v, rng.gen_range(0..q)));
                }
            }
        }
        let g = EdgeClassDigraph::new(weights, costs, &edges).unwrap();
        let oracle = floyd_warshall_edge_classes(&g);
        for t in [None, Some(3)] {
            let cfg = ApspConfig {
                horizon: t,
                ..ApspConfig::default()
            };
            let r = apsp_bounded_edge_classes(&g, &cfg).unwrap();
            assert!(r.distances.first_mismatch(&oracle, 1e-9).is_none(), "seed {seed}");
        }
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let g = random_digraph(70, 0.1, 10.0, 77);
    let cfg = ApspConfig {
        horizon: Some(4),
        ..ApspConfig::default()
    };
    let one = clustered_apsp::par::with_threads(1, || apsp(&g, &cfg).unwrap());
    let many = clustered_apsp::par::with_threads(4, || apsp(&g, &cfg).unwrap());
    assert!(one.distances.bit_eq(&many.distances));
    assert_eq!(one.bridging, many.bridging);
    assert_eq!(one.stats, many.stats);
}

#[test]
fn self_loops_do_not_change_distances() {
    let g = random_digraph(25, 0.1, 10.0, 5);
    let mut looped = g.adjacency().clone();
    for v in 0..25 {
        looped.set(v, v, true);
    }
    let h = VertexWeightedDigraph::new(looped, g.weights().to_vec()).unwrap();
    let cfg = ApspConfig::default();
    let a = apsp(&g, &cfg).unwrap().distances;
    let b = apsp(&h, &cfg).unwrap().distances;
    assert!(a.first_mismatch(&b, 1e-12).is_none());
}
