//! Spiked covariance model: rows drawn from `N(0, I + ν·x̄x̄ᵀ)` with a unit
//! planted vector `x̄`, plus the planted-vector constructions used in the
//! simulation protocol.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::linalg::{gaussian_vec, sample_covariance, SymMatrix};
use crate::rng::SeededRng;

/// Parameters of one spiked-model draw.
#[derive(Debug, Clone)]
pub struct SpikedSpec {
    pub p: usize,
    pub n: usize,
    /// Signal strength ν > 0, the eigengap of the population matrix.
    pub nu: f64,
    /// Unit planted vector.
    pub xbar: Array1<f64>,
    pub seed: u64,
}

impl SpikedSpec {
    pub fn new(p: usize, n: usize, nu: f64, xbar: Array1<f64>, seed: u64) -> Result<Self> {
        if xbar.len() != p {
            return Err(Error::DimensionMismatch {
                expected: p,
                got: xbar.len(),
            });
        }
        check_unit(&xbar)?;
        if nu <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "nu must be positive, got {nu}"
            )));
        }
        if n == 0 {
            return Err(Error::EmptyData("need at least one sample"));
        }
        Ok(SpikedSpec {
            p,
            n,
            nu,
            xbar,
            seed,
        })
    }
}

/// One realized instance: the data, its sample covariance `A`, the
/// population matrix `Ā = I + ν·x̄x̄ᵀ` and the noise `E = A − Ā`.
#[derive(Debug, Clone)]
pub struct SpikedInstance {
    pub data: Array2<f64>,
    pub a_hat: SymMatrix,
    pub a_bar: SymMatrix,
    pub e: SymMatrix,
}

fn check_unit(v: &Array1<f64>) -> Result<()> {
    let deviation = (crate::linalg::norm(v) - 1.0).abs();
    if deviation > 1e-10 {
        return Err(Error::NonUnitVector { deviation });
    }
    Ok(())
}

/// The strictly increasing unit vector with entries proportional to their
/// index: `x̄ᵢ = i/√(Σⱼ j²)` for i = 1..p.
pub fn make_nonsparse_monotone(p: usize) -> Result<Array1<f64>> {
    if p == 0 {
        return Err(Error::EmptyData("dimension must be at least 1"));
    }
    let denom = ((1..=p).map(|j| (j * j) as f64).sum::<f64>()).sqrt();
    Ok(Array1::from_iter((1..=p).map(|i| i as f64 / denom)))
}

/// Number of leading zero coordinates in the sparse construction:
/// `max(0, ⌈p − 10·ln p⌉)`. Natural log; the tail of `p − zeros` entries
/// carries the signal.
pub fn sparse_support_split(p: usize) -> usize {
    let raw = (p as f64 - 10.0 * (p as f64).ln()).ceil();
    if raw <= 0.0 {
        0
    } else {
        (raw as usize).min(p)
    }
}

/// The sparse monotone unit vector: zero on the first `⌈p − 10·ln p⌉`
/// coordinates, constant positive on the rest, normalized to unit length.
pub fn make_sparse_monotone(p: usize) -> Result<Array1<f64>> {
    if p < 3 {
        return Err(Error::InvalidParameter(format!(
            "sparse construction needs p ≥ 3, got {p}"
        )));
    }
    let zeros = sparse_support_split(p);
    let support = p - zeros;
    if support == 0 {
        return Err(Error::EmptyData("sparse construction has empty support"));
    }
    let value = 1.0 / (support as f64).sqrt();
    let mut x = Array1::zeros(p);
    for i in zeros..p {
        x[i] = value;
    }
    Ok(x)
}

/// `Ā = I + ν·x̄x̄ᵀ`.
pub fn population_matrix(nu: f64, xbar: &Array1<f64>) -> Result<SymMatrix> {
    check_unit(xbar)?;
    let mut m = SymMatrix::identity(xbar.len());
    m.add_outer(nu, xbar)?;
    Ok(m)
}

/// Draws one spiked instance.
///
/// Each row is `g + (√(1+ν) − 1)(x̄ᵀg)·x̄` with `g ~ N(0, I)`, which has
/// covariance `I + ν·x̄x̄ᵀ` because `(I + (√(1+ν)−1)x̄x̄ᵀ)² = I + ν·x̄x̄ᵀ`.
/// This is O(np) per instance; no p×p matrix root is ever materialized.
pub fn sample_spiked(spec: &SpikedSpec) -> Result<SpikedInstance> {
    sample_spiked_with(spec, &mut crate::rng::stream_rng(spec.seed, 0))
}

/// As [`sample_spiked`] but drawing from a caller-supplied stream, used by
/// simulation grids that assign one stream per trial.
pub fn sample_spiked_with(spec: &SpikedSpec, rng: &mut SeededRng) -> Result<SpikedInstance> {
    let scale = (1.0 + spec.nu).sqrt() - 1.0;
    let mut data = Array2::zeros((spec.n, spec.p));
    for mut row in data.rows_mut() {
        let g = gaussian_vec(spec.p, rng);
        let along = scale * spec.xbar.dot(&g);
        for j in 0..spec.p {
            row[j] = g[j] + along * spec.xbar[j];
        }
    }
    let a_hat = sample_covariance(&data)?;
    let a_bar = population_matrix(spec.nu, &spec.xbar)?;
    let e = a_hat.sub(&a_bar)?;
    Ok(SpikedInstance {
        data,
        a_hat,
        a_bar,
        e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::Cone;
    use crate::linalg::norm;
    use ndarray::array;

    #[test]
    fn nonsparse_p3_is_1_2_3_over_sqrt14() {
        let x = make_nonsparse_monotone(3).unwrap();
        let denom = 14f64.sqrt();
        for (i, want) in [1.0, 2.0, 3.0].iter().enumerate() {
            assert!((x[i] - want / denom).abs() <= 1e-15);
        }
    }

    #[test]
    fn nonsparse_p1_is_unit() {
        assert_eq!(make_nonsparse_monotone(1).unwrap(), array![1.0]);
    }

    #[test]
    fn nonsparse_is_unit_and_strictly_increasing() {
        for p in [2, 7, 100, 999] {
            let x = make_nonsparse_monotone(p).unwrap();
            assert!((norm(&x) - 1.0).abs() <= 1e-12);
            assert!(x.windows(2).into_iter().all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn sparse_p100_support() {
        // ⌈100 − 10·ln 100⌉ = ⌈53.95⌉ = 54 leading zeros, 46 tail entries.
        let x = make_sparse_monotone(100).unwrap();
        assert_eq!(sparse_support_split(100), 54);
        let support = x.iter().filter(|&&v| v != 0.0).count();
        assert_eq!(support, 46);
        let value = 1.0 / 46f64.sqrt();
        for &v in x.iter().skip(54) {
            assert!((v - value).abs() <= 1e-15);
        }
    }

    #[test]
    fn sparse_p3_is_constant_vector() {
        // 3 − 10·ln 3 < 0, so the split clamps to zero and every entry is
        // 1/√3.
        let x = make_sparse_monotone(3).unwrap();
        for &v in x.iter() {
            assert!((v - 1.0 / 3f64.sqrt()).abs() <= 1e-15);
        }
    }

    #[test]
    fn sparse_rejects_tiny_p() {
        assert!(make_sparse_monotone(2).is_err());
    }

    #[test]
    fn both_constructions_live_in_the_monotone_cone() {
        for p in [3, 10, 250] {
            let cone = Cone::monotone(p);
            for x in [
                make_nonsparse_monotone(p).unwrap(),
                make_sparse_monotone(p).unwrap(),
            ] {
                assert!((norm(&x) - 1.0).abs() <= 1e-10);
                assert!(cone.member(&x, 0.0));
            }
        }
    }

    #[test]
    fn population_matrix_axis_spike() {
        let m = population_matrix(2.0, &array![1.0, 0.0]).unwrap();
        assert_eq!(m.as_array(), &array![[3.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn population_matrix_diagonal_spike() {
        let xbar = array![1.0, 1.0].mapv(|v| v / 2f64.sqrt());
        let m = population_matrix(2.0, &xbar).unwrap();
        for (i, j, want) in [(0, 0, 2.0), (0, 1, 1.0), (1, 0, 1.0), (1, 1, 2.0)] {
            assert!((m.get(i, j) - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn population_matrix_spectrum() {
        let xbar = make_nonsparse_monotone(6).unwrap();
        let m = population_matrix(1.75, &xbar).unwrap();
        let e = m.top_two_eigs(1e-11, 100_000).unwrap();
        assert!((e.lambda - 2.75).abs() <= 1e-8);
        assert!((e.mu - 1.0).abs() <= 1e-8);
        assert!((e.nu - 1.75).abs() <= 1e-8);
    }

    #[test]
    fn population_matrix_rejects_non_unit() {
        assert!(population_matrix(1.0, &array![1.0, 1.0]).is_err());
    }

    #[test]
    fn root_identity_holds_entrywise() {
        // (I + (√(1+ν)−1)·x̄x̄ᵀ)² = I + ν·x̄x̄ᵀ
        let nu = 2.7f64;
        let xbar = make_nonsparse_monotone(5).unwrap();
        let scale = (1.0 + nu).sqrt() - 1.0;
        let mut root = SymMatrix::identity(5);
        root.add_outer(scale, &xbar).unwrap();
        let squared = root.as_array().dot(root.as_array());
        let target = population_matrix(nu, &xbar).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert!((squared[(i, j)] - target.get(i, j)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_per_seed() {
        let spec = SpikedSpec::new(4, 6, 1.0, make_nonsparse_monotone(4).unwrap(), 99).unwrap();
        let a = sample_spiked(&spec).unwrap();
        let b = sample_spiked(&spec).unwrap();
        assert_eq!(a.data, b.data);
    }

    #[test]
    fn vanishing_spike_reduces_to_plain_gaussians() {
        let spec = SpikedSpec::new(6, 10, 1e-14, make_nonsparse_monotone(6).unwrap(), 8).unwrap();
        let inst = sample_spiked(&spec).unwrap();
        let mut rng = crate::rng::stream_rng(8, 0);
        for i in 0..10 {
            let g = gaussian_vec(6, &mut rng);
            for j in 0..6 {
                assert!((inst.data[(i, j)] - g[j]).abs() <= 1e-12);
            }
        }
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((inst.a_bar.get(i, j) - want).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn noise_is_exactly_a_minus_abar() {
        let spec = SpikedSpec::new(5, 40, 0.5, make_nonsparse_monotone(5).unwrap(), 3).unwrap();
        let inst = sample_spiked(&spec).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let want = inst.a_hat.get(i, j) - inst.a_bar.get(i, j);
                assert!((inst.e.get(i, j) - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn large_n_concentrates_on_population() {
        let spec =
            SpikedSpec::new(20, 200_000, 3.0, make_nonsparse_monotone(20).unwrap(), 12).unwrap();
        let inst = sample_spiked(&spec).unwrap();
        let max_dev = inst
            .e
            .as_array()
            .iter()
            .fold(0f64, |acc, &x| acc.max(x.abs()));
        assert!(max_dev <= 0.1, "max entrywise deviation {max_dev}");
    }

    #[test]
    fn million_sample_covariance_is_close() {
        let spec =
            SpikedSpec::new(5, 1_000_000, 2.0, make_nonsparse_monotone(5).unwrap(), 21).unwrap();
        let inst = sample_spiked(&spec).unwrap();
        let max_dev = inst
            .e
            .as_array()
            .iter()
            .fold(0f64, |acc, &x| acc.max(x.abs()));
        assert!(max_dev <= 0.01, "max entrywise deviation {max_dev}");
    }

    #[test]
    fn spec_validation() {
        let x = make_nonsparse_monotone(4).unwrap();
        assert!(SpikedSpec::new(4, 10, 0.0, x.clone(), 0).is_err());
        assert!(SpikedSpec::new(4, 0, 1.0, x.clone(), 0).is_err());
        assert!(SpikedSpec::new(5, 10, 1.0, x.clone(), 0).is_err());
        assert!(SpikedSpec::new(4, 10, 1.0, &x * 2.0, 0).is_err());
    }
}
