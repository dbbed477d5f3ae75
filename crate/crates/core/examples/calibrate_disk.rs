//! Measures the disk-graph ratios behind the frozen constants in
//! `tests/fixtures/disk_constants.json`:
//!
//! * `lambda`: Euclidean MST length / sqrt(n)
//! * `kappa`:  max over MST edges of ham(v,u) / (b·r·(dist·n + sqrt(n)))
//! * `mu`:     row-tree cost / (b·r·n^1.5)
//!
//! where `b` is the observed maximum points per grid cell. Calibration runs
//! on small instances; pass `--check` to also print the ratios at the sizes
//! the acceptance test asserts on.

use clustered_apsp::diskgraph::{build_disk_graph, density_check, generate_dense_points, row_tree_from_euclidean_mst};
use clustered_apsp::mst::euclidean_mst;

const MARGIN: f64 = 1.5;

#[derive(Default)]
struct Ratios {
    lambda: f64,
    kappa: f64,
    mu: f64,
}

fn measure(n: usize, r: f64, seed: u64) -> Ratios {
    let pts = generate_dense_points(n, 4, r, seed).unwrap();
    let b = density_check(&pts).max_per_cell as f64;
    let g = build_disk_graph(&pts);
    let emst = euclidean_mst(pts.points()).unwrap();
    let row_tree = row_tree_from_euclidean_mst(&g, &pts).unwrap();
    let nf = n as f64;
    let kappa = emst
        .edges()
        .iter()
        .zip(row_tree.edges())
        .map(|(e, h)| h.cost as f64 / (b * r * (e.cost * nf + nf.sqrt())))
        .fold(0.0, f64::max);
    Ratios {
        lambda: emst.cost() / nf.sqrt(),
        kappa,
        mu: row_tree.cost() as f64 / (b * r * nf.powf(1.5)),
    }
}

fn sweep(sizes: &[usize], seeds: std::ops::Range<u64>) -> Ratios {
    let mut worst = Ratios::default();
    for &n in sizes {
        for r in [0.05, 0.1] {
            for seed in seeds.clone() {
                let m = measure(n, r, seed);
                println!(
                    "n={n:5} r={r:.2} seed={seed:3}  lambda={:.4} kappa={:.4} mu={:.4}",
                    m.lambda, m.kappa, m.mu
                );
                worst.lambda = worst.lambda.max(m.lambda);
                worst.kappa = worst.kappa.max(m.kappa);
                worst.mu = worst.mu.max(m.mu);
            }
        }
    }
    worst
}

fn main() {
    let check = std::env::args().any(|a| a == "--check");
    let w = sweep(&[100, 150, 200], 0..20);
    println!(
        "{{\"lambda\": {:.3}, \"kappa\": {:.3}, \"mu\": {:.3}, \"margin\": {MARGIN}}}",
        w.lambda * MARGIN,
        w.kappa * MARGIN,
        w.mu * MARGIN
    );
    if check {
        let a = sweep(&[250, 500, 1000, 2000], 0..3);
        println!("acceptance-size maxima: lambda={:.4} kappa={:.4} mu={:.4}", a.lambda, a.kappa, a.mu);
    }
}
