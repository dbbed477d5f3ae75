use clustered_apsp::bench::random_bit_matrix;
use clustered_apsp::matrix::{diff_positions, hamming_distance};
use clustered_apsp::BitMatrix;

#[test]
fn diff_sizes_sum_to_distance_exhaustively() {
    for seed in 0..2 {
        let m = random_bit_matrix(128, 128, 0.5, seed);
        for a in 0..128 {
            for b in 0..128 {
                let (only_a, only_b) = diff_positions(m.row(a), m.row(b)).unwrap();
                let d = hamming_distance(m.row(a), m.row(b)).unwrap();
                assert_eq!(only_a.len() + only_b.len(), d, "rows {a}, {b}");
                assert!(only_a.iter().all(|&p| m.get(a, p) && !m.get(b, p)));
                assert!(only_b.iter().all(|&p| !m.get(a, p) && m.get(b, p)));
            }
        }
    }
}

#[test]
fn triangle_inequality_on_small_matrices() {
    for seed in 0..20 {
        let m = random_bit_matrix(12, 70, 0.3, 100 + seed);
        for a in 0..12 {
            for b in 0..12 {
                for c in 0..12 {
                    assert!(m.row_distance(a, c) <= m.row_distance(a, b) + m.row_distance(b, c));
                }
            }
        }
    }
}

#[test]
fn packed_popcount_matches_naive_loop() {
    // 1000 row pairs of widths that straddle word boundaries.
    let mut checked = 0;
    for (i, &width) in [1usize, 63, 64, 65, 130, 200, 257, 1000].iter().cycle().take(20).enumerate() {
        let m = random_bit_matrix(100, width, 0.5, 7 + i as u64);
        for a in 0..50 {
            let b = 50 + a;
            let naive = (0..width).filter(|&c| m.get(a, c) != m.get(b, c)).count();
            assert_eq!(m.row_distance(a, b), naive);
            checked += 1;
        }
    }
    assert_eq!(checked, 1000);
}

#[test]
fn mismatched_widths_are_rejected() {
    let a = BitMatrix::zeros(1, 5);
    let b = BitMatrix::zeros(1, 6);
    assert!(hamming_distance(a.row(0), b.row(0)).is_err());
    assert!(diff_positions(a.row(0), b.row(0)).is_err());
}

#[test]
fn transpose_and_union_keep_padding_clean() {
    let m = random_bit_matrix(70, 130, 0.5, 3);
    let t = m.transpose();
    assert!(t.padding_is_clean());
    assert_eq!(t.transpose(), m);
    let u = m.union(&BitMatrix::ones(70, 130)).unwrap();
    assert!(u.padding_is_clean());
    assert_eq!(u, BitMatrix::ones(70, 130));
}
