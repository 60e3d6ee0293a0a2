//! Dense symmetric matrices, sample covariance, top-two eigenpairs and
//! seeded Gaussian sampling.

use ndarray::{Array1, Array2};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Euclidean norm.
pub fn norm(v: &Array1<f64>) -> f64 {
    v.dot(v).sqrt()
}

/// `v / ‖v‖`. Returns `DegenerateProjection` when the norm underflows.
pub fn normalize(v: &Array1<f64>) -> Result<Array1<f64>> {
    let n = norm(v);
    if n <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateProjection);
    }
    Ok(v / n)
}

/// `p` iid standard normal entries drawn from `rng`.
pub fn gaussian_vec(p: usize, rng: &mut SeededRng) -> Array1<f64> {
    Array1::from_iter((0..p).map(|_| StandardNormal.sample(rng)))
}

/// Dense symmetric matrix with exactly equal mirror entries.
///
/// Symmetry is enforced on construction by averaging each entry with its
/// transpose, so `m[(i, j)] == m[(j, i)]` holds bitwise afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    data: Array2<f64>,
}

impl SymMatrix {
    /// Symmetrizes `a` as `(a + aᵀ)/2`. Errors when `a` is not square.
    pub fn from_array(a: Array2<f64>) -> Result<Self> {
        let (r, c) = a.dim();
        if r != c {
            return Err(Error::DimensionMismatch {
                expected: r,
                got: c,
            });
        }
        let mut data = a;
        for i in 0..r {
            for j in (i + 1)..r {
                let avg = 0.5 * (data[(i, j)] + data[(j, i)]);
                data[(i, j)] = avg;
                data[(j, i)] = avg;
            }
        }
        Ok(SymMatrix { data })
    }

    /// Builds from the entry generator `f(i, j)`, evaluated once per
    /// unordered pair with `i ≤ j`.
    pub fn from_fn(p: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Array2::zeros((p, p));
        for i in 0..p {
            for j in i..p {
                let v = f(i, j);
                data[(i, j)] = v;
                data[(j, i)] = v;
            }
        }
        SymMatrix { data }
    }

    pub fn identity(p: usize) -> Self {
        SymMatrix {
            data: Array2::eye(p),
        }
    }

    pub fn zeros(p: usize) -> Self {
        SymMatrix {
            data: Array2::zeros((p, p)),
        }
    }

    /// Diagonal matrix from `d`.
    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.data[(i, i)] = x;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_array(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    /// `m·v`.
    pub fn matvec(&self, v: &Array1<f64>) -> Result<Array1<f64>> {
        self.check_dim(v.len())?;
        Ok(self.data.dot(v))
    }

    /// `vᵀ m v`.
    pub fn quadratic_form(&self, v: &Array1<f64>) -> Result<f64> {
        self.check_dim(v.len())?;
        Ok(v.dot(&self.data.dot(v)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Row-sum (Gershgorin) upper bound on the largest eigenvalue.
    pub fn gershgorin_upper(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.data.row(i).iter().map(|x| x.abs()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Entrywise difference, preserving exact symmetry.
    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.check_dim(other.dim())?;
        Ok(SymMatrix {
            data: &self.data - &other.data,
        })
    }

    /// Adds `scale · vvᵀ` in place.
    pub fn add_outer(&mut self, scale: f64, v: &Array1<f64>) -> Result<()> {
        self.check_dim(v.len())?;
        let p = self.dim();
        for i in 0..p {
            for j in i..p {
                let upd = scale * v[i] * v[j];
                self.data[(i, j)] += upd;
                if i != j {
                    self.data[(j, i)] = self.data[(i, j)];
                }
            }
        }
        Ok(())
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }

    /// Top and second eigenpairs by power iteration with deflation.
    ///
    /// The top pair comes from plain power iteration started at a fixed
    /// internal Gaussian direction; the second eigenvalue is extracted from
    /// the deflated matrix `m − λ v₁v₁ᵀ`. Intended for positive
    /// semidefinite input; a degenerate gap (λ ≈ μ) slows convergence and
    /// is reported through [`EigPair::converged`] rather than an error.
    pub fn top_two_eigs(&self, tol: f64, max_iter: usize) -> Result<EigPair> {
        if tol <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "tol must be > 0, got {tol}"
            )));
        }
        let p = self.dim();
        if p == 0 {
            return Err(Error::EmptyData("matrix is 0×0"));
        }
        let (lambda, v1, conv1) = power_top(&self.data, tol, max_iter)?;
        if p == 1 {
            return Ok(EigPair {
                lambda,
                mu: 0.0,
                nu: lambda,
                v1,
                converged: conv1,
            });
        }
        let mut deflated = self.data.clone();
        for i in 0..p {
            for j in 0..p {
                deflated[(i, j)] -= lambda * v1[i] * v1[j];
            }
        }
        let (mu, _v2, conv2) = power_top(&deflated, tol, max_iter)?;
        Ok(EigPair {
            lambda,
            mu,
            nu: lambda - mu,
            v1,
            converged: conv1 && conv2,
        })
    }
}

/// Top eigenpair and eigengap of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct EigPair {
    /// Largest eigenvalue λ.
    pub lambda: f64,
    /// Second largest eigenvalue μ.
    pub mu: f64,
    /// Eigengap ν = λ − μ.
    pub nu: f64,
    /// Unit eigenvector of λ.
    pub v1: Array1<f64>,
    /// False when either power iteration hit its iteration cap before the
    /// eigenvalue estimate settled (typical for λ ≈ μ).
    pub converged: bool,
}

/// Default eigenvalue tolerance for [`SymMatrix::top_two_eigs`].
pub const EIG_TOL_DEFAULT: f64 = 1e-10;

/// Default iteration cap for [`SymMatrix::top_two_eigs`] at dimension `p`.
pub fn eig_max_iter_default(p: usize) -> usize {
    10 * p + 1000
}

// Fixed stream for eigensolver starts; any direction not orthogonal to the
// top eigenvector works, a Gaussian one avoids adversarial alignments.
const EIG_START_SEED: u64 = 0x51e5_0f7e;

fn power_top(a: &Array2<f64>, tol: f64, max_iter: usize) -> Result<(f64, Array1<f64>, bool)> {
    let p = a.nrows();
    let mut rng = crate::rng::stream_rng(EIG_START_SEED, p as u64);
    let mut v = normalize(&gaussian_vec(p, &mut rng))?;
    let mut rayleigh = v.dot(&a.dot(&v));
    for _ in 0..max_iter {
        let w = a.dot(&v);
        let n = norm(&w);
        if n <= f64::MIN_POSITIVE {
            // v is in the kernel; the associated eigenvalue is 0.
            return Ok((0.0, v, true));
        }
        let v_next = &w / n;
        let r_next = v_next.dot(&a.dot(&v_next));
        let residual = {
            let av = a.dot(&v_next);
            let mut s = 0.0;
            for i in 0..p {
                let d = av[i] - r_next * v_next[i];
                s += d * d;
            }
            s.sqrt()
        };
        v = v_next;
        let drift = (r_next - rayleigh).abs();
        rayleigh = r_next;
        if drift <= tol * rayleigh.abs().max(1.0) && residual <= tol * rayleigh.abs().max(1.0) {
            return Ok((rayleigh, v, true));
        }
    }
    Ok((rayleigh, v, false))
}

/// Sample covariance `(1/n)XᵀX` of the rows of `data` (no mean centering;
/// the generative model here is mean zero).
pub fn sample_covariance(data: &Array2<f64>) -> Result<SymMatrix> {
    covariance_impl(data, false)
}

/// Column-centered sample covariance `(1/n)X̃ᵀX̃`, for real data whose mean
/// is unknown.
pub fn sample_covariance_centered(data: &Array2<f64>) -> Result<SymMatrix> {
    covariance_impl(data, true)
}

fn covariance_impl(data: &Array2<f64>, center: bool) -> Result<SymMatrix> {
    let (n, _p) = data.dim();
    if n == 0 {
        return Err(Error::EmptyData("covariance of zero samples"));
    }
    let gram = if center {
        let means = data.mean_axis(ndarray::Axis(0)).expect("n >= 1");
        let centered = data - &means;
        centered.t().dot(&centered)
    } else {
        data.t().dot(data)
    };
    SymMatrix::from_array(gram / n as f64)
}

/// Full eigendecomposition by cyclic Jacobi rotations. Test oracle for
/// small matrices; refuses `p > 64`.
///
/// Returns eigenvalues in descending order with matching unit eigenvectors
/// as the columns of the second component.
pub fn jacobi_eigh(m: &SymMatrix) -> Result<(Vec<f64>, Array2<f64>)> {
    let p = m.dim();
    if p > 64 {
        return Err(Error::InvalidParameter(format!(
            "jacobi_eigh is a small-matrix oracle (p ≤ 64), got p = {p}"
        )));
    }
    let mut a = m.as_array().clone();
    let mut v: Array2<f64> = Array2::eye(p);
    let off = |a: &Array2<f64>| -> f64 {
        let mut s = 0.0;
        for i in 0..p {
            for j in (i + 1)..p {
                s += 2.0 * a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        if off(&a) <= 1e-14 * scale {
            break;
        }
        for i in 0..p {
            for j in (i + 1)..p {
                let apq = a[(i, j)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[(i, i)];
                let aqq = a[(j, j)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..p {
                    let aki = a[(k, i)];
                    let akj = a[(k, j)];
                    a[(k, i)] = c * aki - s * akj;
                    a[(k, j)] = s * aki + c * akj;
                }
                for k in 0..p {
                    let aik = a[(i, k)];
                    let ajk = a[(j, k)];
                    a[(i, k)] = c * aik - s * ajk;
                    a[(j, k)] = s * aik + c * ajk;
                }
                for k in 0..p {
                    let vki = v[(k, i)];
                    let vkj = v[(k, j)];
                    v[(k, i)] = c * vki - s * vkj;
                    v[(k, j)] = s * vki + c * vkj;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&x, &y| a[(y, y)].partial_cmp(&a[(x, x)]).unwrap());
    let eigvals: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut eigvecs = Array2::zeros((p, p));
    for (new, &old) in order.iter().enumerate() {
        for k in 0..p {
            eigvecs[(k, new)] = v[(k, old)];
        }
    }
    Ok((eigvals, eigvecs))
}
