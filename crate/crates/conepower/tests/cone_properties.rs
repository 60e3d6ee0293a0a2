//! Property suite for the cone projections: the orthogonal-decomposition
//! identities, idempotence, non-expansiveness, optimality against a
//! brute-force quadratic-program oracle, and dual feasibility.

use conepower::cones::{isotonic_nondecreasing, Cone};
use conepower::linalg::{gaussian_vec, norm};
use conepower::rng::stream_rng;
use ndarray::Array1;
use proptest::prelude::*;

fn cone_suite(p: usize) -> Vec<Cone> {
    vec![
        Cone::monotone(p),
        Cone::nonneg_orthant(p),
        Cone::coord_subspace(p, (0..p).step_by(2)).unwrap(),
        Cone::full_space(p),
    ]
}

/// Exact monotone projection by exhaustive search over the 2^(p−1)
/// contiguous block partitions. The isotonic fit is a block-mean vector
/// with nondecreasing block values, so minimizing the distance over all
/// feasible block-mean vectors recovers it exactly.
fn monotone_projection_oracle(z: &[f64]) -> Vec<f64> {
    let p = z.len();
    assert!((1..=16).contains(&p), "oracle is exponential in p");
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0..(1u32 << (p - 1)) {
        // Bit i set = block boundary between i and i+1.
        let mut fitted = Vec::with_capacity(p);
        let mut start = 0;
        let mut feasible = true;
        let mut prev_mean = f64::NEG_INFINITY;
        for i in 0..p {
            let boundary = i + 1 == p || mask & (1 << i) != 0;
            if boundary {
                let block = &z[start..=i];
                let mean = block.iter().sum::<f64>() / block.len() as f64;
                if mean < prev_mean {
                    feasible = false;
                    break;
                }
                prev_mean = mean;
                fitted.extend(std::iter::repeat_n(mean, block.len()));
                start = i + 1;
            }
        }
        if !feasible {
            continue;
        }
        let dist: f64 = fitted
            .iter()
            .zip(z.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if best.as_ref().is_none_or(|(d, _)| dist < *d) {
            best = Some((dist, fitted));
        }
    }
    best.expect("unpartitioned vector is always feasible").1
}

#[test]
fn pava_matches_quadratic_program_oracle() {
    let mut rng = stream_rng(101, 0);
    for trial in 0..200 {
        let p = 1 + (trial % 12);
        let z = gaussian_vec(p, &mut rng).mapv(|x| 3.0 * x);
        let fast = isotonic_nondecreasing(z.as_slice().unwrap());
        let slow = monotone_projection_oracle(z.as_slice().unwrap());
        for (a, b) in fast.iter().zip(slow.iter()) {
            assert!(
                (a - b).abs() <= 1e-9,
                "mismatch at p={p}: {fast:?} vs {slow:?}"
            );
        }
    }
}

#[test]
fn moreau_decomposition_all_cone_kinds() {
    let p = 24;
    for (k, cone) in cone_suite(p).into_iter().enumerate() {
        let mut rng = stream_rng(102, k as u64);
        let mut dual_rng = stream_rng(103, k as u64);
        // Sample directions of K for the dual-feasibility check.
        let mut cone_dirs = Vec::new();
        while cone_dirs.len() < 100 {
            let g = gaussian_vec(p, &mut dual_rng);
            let proj = cone.project(&g).unwrap().point;
            let n = norm(&proj);
            if n > 1e-12 {
                cone_dirs.push(&proj / n);
            }
        }
        for _ in 0..1000 {
            let z = gaussian_vec(p, &mut rng).mapv(|x| 2.0 * x);
            let zn = norm(&z);
            let proj = cone.project(&z).unwrap();
            let recon = &proj.point + &proj.residual;
            assert!(norm(&(&recon - &z)) <= 1e-10 * zn.max(1.0));
            assert!(proj.point.dot(&proj.residual).abs() <= 1e-10 * zn * zn);
            assert!(cone.member(&proj.point, 1e-10));
            for w in &cone_dirs {
                assert!(
                    proj.residual.dot(w) <= 1e-9,
                    "residual escapes the polar cone"
                );
            }
        }
    }
}

#[test]
fn projection_optimality_against_feasible_directions() {
    let p = 12;
    for (k, cone) in cone_suite(p).into_iter().enumerate() {
        let mut rng = stream_rng(104, k as u64);
        for _ in 0..25 {
            let z = gaussian_vec(p, &mut rng);
            let point = cone.project(&z).unwrap().point;
            let scale = norm(&point);
            let base = norm(&(&z - &point));
            let mut found = 0;
            while found < 1000 {
                let g = gaussian_vec(p, &mut rng);
                let w = cone.project(&g).unwrap().point;
                let wn = norm(&w);
                if wn <= 1e-12 {
                    continue;
                }
                found += 1;
                let candidate = &w * (scale / wn);
                assert!(base <= norm(&(&z - &candidate)) + 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_idempotent(seed in 0u64..5000, kind in 0usize..4) {
        let p = 10;
        let cone = &cone_suite(p)[kind];
        let z = gaussian_vec(p, &mut stream_rng(105, seed));
        let once = cone.project(&z).unwrap().point;
        let twice = cone.project(&once).unwrap().point;
        for (a, b) in once.iter().zip(twice.iter()) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn projection_is_nonexpansive(seed in 0u64..5000, kind in 0usize..4) {
        let p = 10;
        let cone = &cone_suite(p)[kind];
        let mut rng = stream_rng(106, seed);
        let a = gaussian_vec(p, &mut rng);
        let b = gaussian_vec(p, &mut rng);
        let pa = cone.project(&a).unwrap().point;
        let pb = cone.project(&b).unwrap().point;
        prop_assert!(norm(&(&pa - &pb)) <= norm(&(&a - &b)) + 1e-12);
    }

    #[test]
    fn pava_output_is_monotone_and_mean_preserving(seed in 0u64..5000, p in 1usize..40) {
        let z = gaussian_vec(p, &mut stream_rng(107, seed));
        let fit = isotonic_nondecreasing(z.as_slice().unwrap());
        for w in fit.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-15);
        }
        let zs: f64 = z.sum();
        let fs: f64 = fit.iter().sum();
        prop_assert!((zs - fs).abs() <= 1e-9 * zs.abs().max(1.0));
    }
}

#[test]
fn degenerate_projection_examples() {
    let m = Cone::monotone(2);
    let fit = m.project(&Array1::from_vec(vec![1.0, -1.0])).unwrap();
    assert!(norm(&fit.point) <= 1e-15);
    assert!(m
        .projects_to_zero(&Array1::from_vec(vec![1.0, -1.0]))
        .unwrap());
}
