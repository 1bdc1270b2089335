mod common;

use std::f64::consts::PI;

use common::seeded;
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trap_core::eigensolver::{
    build_hamiltonian, dimensionless_quartic, lowest_eigenpairs, quartic_spectrum, sign_changes, solve_potential,
    Grid1D, SymmetricTridiagonal,
};

fn box_errors(points: usize, levels: usize) -> Vec<f64> {
    let grid = Grid1D::new(1.0, points).unwrap();
    let sol = solve_potential(vec![0.0; points], &grid, levels).unwrap();
    let width = 2.0;
    (0..levels)
        .map(|i| {
            let exact = ((i + 1) as f64 * PI / width).powi(2);
            (sol.eigenvalues[i] - exact).abs()
        })
        .collect()
}

#[test]
fn particle_in_a_box_converges_at_second_order() {
    let coarse = box_errors(101, 5);
    let mid = box_errors(201, 5);
    let fine = box_errors(401, 5);
    for i in 0..5 {
        let p1 = (coarse[i] / mid[i]).log2();
        let p2 = (mid[i] / fine[i]).log2();
        assert!((p1 - 2.0).abs() < 0.1, "level {i}: order {p1}");
        assert!((p2 - 2.0).abs() < 0.1, "level {i}: order {p2}");
    }
}

#[test]
fn harmonic_oscillator_levels() {
    let grid = Grid1D::new(8.0, 4001).unwrap();
    let sol = solve_potential(grid.sample(|z| z * z), &grid, 6).unwrap();
    for (n, e) in sol.eigenvalues.iter().enumerate() {
        assert!((e - (2 * n + 1) as f64).abs() < 1e-4, "level {n}: {e}");
    }
    assert!((sol.eigenvalues[1] - sol.eigenvalues[0] - 2.0).abs() < 1e-4);
    for (n, v) in sol.eigenvectors.iter().enumerate() {
        assert_eq!(sign_changes(v), n);
    }
}

#[allow(clippy::needless_range_loop)]
fn dense_check(potential: Vec<f64>, grid: &Grid1D, k: usize) {
    let h = grid.spacing();
    let ham = build_hamiltonian(&potential, grid).unwrap();
    let pairs = lowest_eigenpairs(&ham, k).unwrap();
    assert!(pairs.certified);

    let m = grid.n_points() - 2;
    let dense = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            2.0 / (h * h) + potential[i + 1]
        } else if i.abs_diff(j) == 1 {
            -1.0 / (h * h)
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(dense);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    for i in 0..k {
        let want = eig.eigenvalues[order[i]];
        let got = pairs.values[i];
        assert!(
            (got - want).abs() < 1e-9 * want.abs().max(1.0),
            "value {i}: {got} vs {want}"
        );
        let col = eig.eigenvectors.column(order[i]);
        let ours = &pairs.vectors[i][1..m + 1];
        let dot: f64 = ours.iter().zip(col.iter()).map(|(a, b)| a * b).sum::<f64>() * h.sqrt();
        let sign = dot.signum();
        for (a, b) in ours.iter().zip(col.iter()) {
            assert!((a * h.sqrt() - sign * b).abs() < 1e-6, "vector {i}");
        }
    }
}

#[test]
fn dense_diagonalization_matches_double_well() {
    let grid = Grid1D::new(1.5, 201).unwrap();
    dense_check(grid.sample(|z| dimensionless_quartic(z, 40.0)), &grid, 6);
}

#[test]
fn dense_diagonalization_matches_random_potential() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let grid = Grid1D::new(2.0, 201).unwrap();
    let potential: Vec<f64> = (0..201).map(|_| rng.gen_range(-50.0..50.0)).collect();
    dense_check(potential, &grid, 6);
}

proptest! {
    #![proptest_config(seeded(64, 0x5eed_0003))]

    #[test]
    fn sturm_counts_and_pairs_match_dense(
        diag in prop::collection::vec(-10.0..10.0f64, 3..40),
        seed in any::<u64>(),
    ) {
        let n = diag.len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let off: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let t = SymmetricTridiagonal::new(diag.clone(), off.clone()).unwrap();
        let dense = DMatrix::from_fn(n, n, |i, j| {
            if i == j { diag[i] } else if j == i + 1 { off[i] } else if i == j + 1 { off[j] } else { 0.0 }
        });
        let mut want = SymmetricEigen::new(dense).eigenvalues.as_slice().to_vec();
        want.sort_by(f64::total_cmp);
        let k = n.min(4);
        let (values, vectors, _) = t.lowest_eigenpairs(k).unwrap();
        for i in 0..k {
            prop_assert!((values[i] - want[i]).abs() < 1e-9 * want[i].abs().max(1.0));
            // Sturm count just below and above each eigenvalue.
            prop_assert!(t.sturm_count(want[i] - 1e-7) <= i);
            prop_assert!(t.sturm_count(want[i] + 1e-7) > i);
            let r = t.apply(&vectors[i]);
            let res: f64 = r.iter().zip(&vectors[i]).map(|(a, b)| (a - values[i] * b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(res < 1e-8, "residual {res}");
        }
        for i in 0..k {
            for j in 0..k {
                let d: f64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((d - want).abs() < 1e-8, "<{i}|{j}> = {d}");
            }
        }
    }

    #[test]
    fn quartic_spectrum_is_ascending_with_parity(eb in 20.0..400.0f64) {
        let grid = Grid1D::new(2.0, 801).unwrap();
        let sol = quartic_spectrum(eb, 4, &grid).unwrap();
        prop_assert!(sol.eigenvalues.windows(2).all(|w| w[0] < w[1]));
        let n = grid.n_points();
        for (i, v) in sol.eigenvectors.iter().enumerate() {
            let parity = if i % 2 == 0 { 1.0 } else { -1.0 };
            for j in 0..n {
                prop_assert!((v[j] - parity * v[n - 1 - j]).abs() < 1e-8);
            }
        }
    }
}

#[test]
fn dimensionless_quartic_landmarks() {
    for eb in [1.0, 157.48, 1e3] {
        assert_eq!(dimensionless_quartic(0.0, eb), 0.0);
        assert!((dimensionless_quartic(0.5, eb) + eb).abs() < 1e-12 * eb);
        assert!((dimensionless_quartic(-0.5, eb) + eb).abs() < 1e-12 * eb);
        let z = 0.5 / 2f64.sqrt();
        assert!((dimensionless_quartic(z, eb) + 0.75 * eb).abs() < 1e-12 * eb);
    }
}
