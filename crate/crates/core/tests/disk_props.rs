use clustered_apsp::diskgraph::{
    build_disk_graph, density_check, generate_dense_points, row_tree_from_euclidean_mst, symmetric_difference_area,
};
use clustered_apsp::mst::{euclidean_mst, exact_mst};

#[test]
fn disk_adjacency_is_symmetric_without_loops() {
    for seed in 0..5u64 {
        let pts = generate_dense_points(300, 4, 0.08, seed).unwrap();
        let a = build_disk_graph(&pts).adjacency().clone();
        assert_eq!(a.transpose(), a);
        assert!((0..300).all(|v| !a.get(v, v)));
        for v in 0..300 {
            for u in 0..300 {
                let close = pts.points()[v].dist2(&pts.points()[u]) <= 0.08 * 0.08;
                assert_eq!(a.get(v, u), v != u && close);
            }
        }
    }
}

#[test]
fn generated_points_respect_density() {
    for (n, b) in [(100, 1), (500, 2), (1000, 4)] {
        let pts = generate_dense_points(n, b, 0.05, n as u64).unwrap();
        let profile = density_check(&pts);
        assert!(profile.max_per_cell <= b);
        assert_eq!(profile.histogram.iter().sum::<usize>(), profile.grid_side * profile.grid_side);
    }
}

#[test]
fn row_tree_uses_euclidean_topology() {
    let pts = generate_dense_points(150, 3, 0.1, 4).unwrap();
    let g = build_disk_graph(&pts);
    let row_tree = row_tree_from_euclidean_mst(&g, &pts).unwrap();
    let emst = euclidean_mst(pts.points()).unwrap();
    assert_eq!(row_tree.edges().len(), emst.edges().len());
    for (a, b) in row_tree.edges().iter().zip(emst.edges()) {
        assert_eq!((a.u, a.v), (b.u, b.v));
        assert_eq!(a.cost, g.adjacency().row_distance(a.u, a.v));
    }
    assert!(exact_mst(g.adjacency()).unwrap().cost() <= row_tree.cost());
}

#[test]
fn symmetric_difference_grows_with_distance() {
    for r in [0.05, 0.3, 1.0] {
        let mut prev = symmetric_difference_area(r, 0.0).unwrap();
        for i in 1..=200 {
            let d = 2.0 * r * i as f64 / 200.0;
            let cur = symmetric_difference_area(r, d).unwrap();
            assert!(cur > prev, "r={r}, d={d}");
            prev = cur;
        }
        let full = symmetric_difference_area(r, 2.0 * r).unwrap();
        assert!((full - 2.0 * std::f64::consts::PI * r * r).abs() <= 1e-12);
    }
    assert!(symmetric_difference_area(1.0, 2.5).is_err());
    assert!(symmetric_difference_area(0.0, 0.0).is_err());
}
