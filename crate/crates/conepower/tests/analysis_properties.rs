//! Properties of the bound evaluators: root structure and bracketing of
//! the threshold constants, agreement of the restricted-norm estimators
//! with oracles, Gaussian-width closed forms, and the trace identity
//! against a dense oracle.

use conepower::analysis::{
    cone_norm_grid, cone_norm_mc, constants, gauss_width_mc, kl_spiked, operator_norm,
    trace_identity, GAP_RATIO,
};
use conepower::cones::Cone;
use conepower::linalg::{gaussian_vec, normalize, SymMatrix};
use conepower::rng::stream_rng;
use ndarray::Array2;
use rand::Rng;

#[test]
fn constants_roots_and_brackets_on_admissible_triples() {
    let mut rng = stream_rng(301, 0);
    let mut checked = 0;
    while checked < 1000 {
        let mu: f64 = rng.gen_range(0.0..5.0);
        let nu: f64 = rng.gen_range(0.05..20.0);
        let lambda = mu + nu;
        let e: f64 = rng.gen_range(0.0..nu / GAP_RATIO);
        let Some((cm, c1)) = constants(nu, e).unwrap() else {
            continue;
        };
        checked += 1;
        // Both values solve ν·y² − (ν−e)·y + e = 0.
        for root in [cm, c1] {
            let residual = nu * root * root - (nu - e) * root + e;
            assert!(residual.abs() <= 1e-10, "residual {residual:.3e}");
        }
        assert!(cm < c1 + 1e-15);
        assert!(e / lambda <= cm + 1e-12, "lower bracket failed");
        assert!(
            cm <= GAP_RATIO * e / ((1.0 + 2f64.sqrt()) * nu) + 1e-12,
            "upper bracket failed"
        );
        assert!(c1 >= 1.0 / (1.0 + 2f64.sqrt()) - 1e-12);
    }
}

#[test]
fn mc_norm_matches_grid_oracle_in_low_dimension() {
    for seed in 0..12 {
        let mut rng = stream_rng(302, seed);
        let p = 2 + (seed as usize % 2);
        let g = gaussian_vec(p * p, &mut rng);
        let e = SymMatrix::from_fn(p, |i, j| g[i * p + j]);
        for cone in [Cone::monotone(p), Cone::nonneg_orthant(p)] {
            let grid = cone_norm_grid(&e, &cone, 1e-3).unwrap().value;
            let mc = cone_norm_mc(&e, &cone, 200, &mut rng).unwrap().value;
            assert!((grid - mc).abs() <= 1e-3, "grid {grid} vs mc {mc} (p={p})");
            let op = operator_norm(&e, 1e-12, 10_000);
            assert!(mc <= op + 1e-9);
            assert!(grid <= op + 1e-9);
        }
    }
}

/// `E‖g‖ = √2·Γ((p+1)/2)/Γ(p/2)` via the half-integer gamma recursion, so
/// the oracle shares no code with the estimator.
fn expected_gaussian_norm(p: usize) -> f64 {
    let gamma_half_int = |twice: usize| -> f64 {
        // Γ(twice/2) for twice ≥ 1.
        if twice.is_multiple_of(2) {
            (1..twice / 2).map(|k| k as f64).product::<f64>()
        } else {
            let mut acc = std::f64::consts::PI.sqrt();
            let mut x = 0.5;
            while (2.0 * x) < twice as f64 {
                acc *= x;
                x += 1.0;
            }
            acc
        }
    };
    2f64.sqrt() * gamma_half_int(p + 1) / gamma_half_int(p)
}

#[test]
fn full_space_width_matches_chi_mean() {
    for p in [1usize, 2, 5, 10] {
        let mut rng = stream_rng(303, p as u64);
        let est = gauss_width_mc(&Cone::full_space(p), 40_000, &mut rng).unwrap();
        let want = expected_gaussian_norm(p);
        assert!(
            (est.value - want).abs() <= 3.0 * est.std_error,
            "p={p}: {} vs {} (SE {})",
            est.value,
            want,
            est.std_error
        );
    }
}

#[test]
fn orthant_width_scales_as_sqrt_half_p() {
    let mut rng = stream_rng(304, 0);
    let est = gauss_width_mc(&Cone::nonneg_orthant(1000), 2000, &mut rng).unwrap();
    let want = (1000f64 / 2.0).sqrt();
    assert!(
        (est.value - want).abs() <= 0.03 * want,
        "{} vs {}",
        est.value,
        want
    );
}

#[test]
fn monotone_width_scales_as_sqrt_log_p() {
    let ps = [64usize, 256, 1024];
    let mut widths = Vec::new();
    for &p in &ps {
        let mut rng = stream_rng(305, p as u64);
        widths.push(
            gauss_width_mc(&Cone::monotone(p), 2000, &mut rng)
                .unwrap()
                .value,
        );
    }
    // Least-squares fit of w ≈ c·√(ln p); every point within 10% relative.
    let xs: Vec<f64> = ps.iter().map(|&p| (p as f64).ln().sqrt()).collect();
    let c = xs.iter().zip(&widths).map(|(x, w)| x * w).sum::<f64>()
        / xs.iter().map(|x| x * x).sum::<f64>();
    for (x, w) in xs.iter().zip(&widths) {
        let rel = (w - c * x).abs() / w;
        assert!(rel <= 0.10, "relative residual {rel} at width {w}");
    }
}

#[test]
fn trace_identity_matches_dense_oracle() {
    let mut rng = stream_rng(306, 0);
    for trial in 0..200 {
        let p = 2 + trial % 10;
        let v = normalize(&gaussian_vec(p, &mut rng)).unwrap();
        let w = normalize(&gaussian_vec(p, &mut rng)).unwrap();
        let k: f64 = rng.gen_range(-0.9..6.0);
        if k <= -1.0 + 1e-6 {
            continue;
        }
        // Dense oracle: Sherman-Morrison inverse, then a full matrix-product
        // trace.
        let mut inv = Array2::<f64>::eye(p);
        let mut m2 = Array2::<f64>::eye(p);
        for i in 0..p {
            for j in 0..p {
                inv[(i, j)] -= k / (k + 1.0) * w[i] * w[j];
                m2[(i, j)] += k * v[i] * v[j];
            }
        }
        let mut tr = 0.0;
        for i in 0..p {
            for j in 0..p {
                tr += inv[(i, j)] * m2[(j, i)];
            }
        }
        let closed = trace_identity(k, &v, &w).unwrap();
        assert!(
            (closed - tr).abs() <= 1e-10 * tr.abs().max(1.0),
            "{closed} vs {tr}"
        );
        // The spiked KL divergence is half the excess trace.
        if k > 0.0 {
            let kl = kl_spiked(k, &v, &w).unwrap();
            assert!((kl - (tr - p as f64) / 2.0).abs() <= 1e-10);
        }
    }
}
