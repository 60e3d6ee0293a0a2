//! Power-iteration estimators for the constrained principal eigenvector.
//!
//! `cone_power_iteration` repeats `v ← Π_K(Av)/‖Π_K(Av)‖` until successive
//! iterates differ by at most Δ. `cone_power_iteration_double` runs it from
//! a start vector and from the cone-feasible surrogate of its negation and
//! keeps the run with the larger quadratic form, which removes the need to
//! know the sign of the target vector. Ordinary and truncated power
//! iterations are provided as baselines, and `idealized_bruteforce`
//! maximizes the quadratic form over a spherical grid at desk scale.

use ndarray::Array1;

use crate::cones::{Cone, ZERO_PROJECTION_REL_TOL};
use crate::error::{Error, Result};
use crate::linalg::{norm, normalize, SymMatrix};

/// Iteration controls shared by all estimators.
#[derive(Debug, Clone)]
pub struct IterConfig {
    /// Stopping criterion Δ: iteration ends once `‖vₜ₊₁ − vₜ‖ ≤ Δ`.
    /// Must satisfy `0 < Δ < √2`.
    pub delta: f64,
    /// Hard safety cap on iterations. `None` derives a cap from the
    /// matrix (see [`default_max_iter`]).
    pub max_iter: Option<usize>,
    /// Start vector; normalized on entry. `None` uses the cone's default
    /// start `Π_K(1)/‖Π_K(1)‖` (or `1/√p` for unconstrained methods).
    pub v0: Option<Array1<f64>>,
}

impl Default for IterConfig {
    fn default() -> Self {
        IterConfig {
            delta: 1e-6,
            max_iter: None,
            v0: None,
        }
    }
}

impl IterConfig {
    pub fn with_delta(delta: f64) -> Self {
        IterConfig {
            delta,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < std::f64::consts::SQRT_2) {
            return Err(Error::InvalidParameter(format!(
                "stopping criterion must satisfy 0 < Δ < √2, got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

/// Why an estimator stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// `‖vₜ₊₁ − vₜ‖ ≤ Δ`.
    Converged,
    /// Hit the iteration cap first.
    MaxIter,
    /// The projected power step collapsed to (numerical) zero.
    DegenerateProjection,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxIter => "max_iter",
            StopReason::DegenerateProjection => "degenerate_projection",
        }
    }
}

/// Output of one estimator run.
#[derive(Debug, Clone)]
pub struct EstimateResult {
    /// Final unit vector.
    pub v: Array1<f64>,
    /// Number of power steps performed.
    pub iters: usize,
    /// `vₜᵀAvₜ` for t = 0, 1, ..., including the start vector.
    pub rayleigh_trace: Vec<f64>,
    pub stop_reason: StopReason,
}

impl EstimateResult {
    /// Final Rayleigh quotient `vᵀAv`.
    pub fn objective(&self) -> f64 {
        *self.rayleigh_trace.last().expect("trace never empty")
    }
}

/// Iteration cap `2·⌈log((λ̂+1)/max(v₀ᵀAv₀, 1e-12))/log(1+Δ²)⌉` clamped to
/// 10⁶, with λ̂ the Gershgorin upper bound on the top eigenvalue. The
/// log-ratio cap is guaranteed sufficient whenever `v₀ᵀAv₀ > 0`.
pub fn default_max_iter(a: &SymMatrix, r0: f64, delta: f64) -> usize {
    let lambda_hat = a.gershgorin_upper().max(0.0);
    let ratio = (lambda_hat + 1.0) / r0.max(1e-12);
    let denom = (delta * delta).ln_1p();
    let cap = 2.0 * (ratio.ln() / denom).ceil();
    if cap.is_finite() && cap > 0.0 {
        (cap as usize).min(1_000_000)
    } else {
        1_000_000
    }
}

/// Default start vector `Π_K(1)/‖Π_K(1)‖`.
pub fn default_start(cone: &Cone) -> Result<Array1<f64>> {
    let ones = Array1::ones(cone.dim());
    let proj = cone.project(&ones)?;
    normalize(&proj.point).map_err(|_| {
        Error::InvalidStart("projection of the all-ones vector onto the cone is zero".into())
    })
}

fn uniform_start(p: usize) -> Array1<f64> {
    Array1::from_elem(p, 1.0 / (p as f64).sqrt())
}

// Soft positive-semidefiniteness probe: 20 Gaussian directions from a fixed
// stream must give wᵀAw ≥ −1e-8·‖A‖_F. Full spectral validation would cost
// more than the estimator itself.
const PSD_PROBE_SEED: u64 = 0x9d5a_11fe;

fn soft_psd_check(a: &SymMatrix) -> Result<()> {
    let slack = 1e-8 * a.frobenius_norm();
    let mut rng = crate::rng::stream_rng(PSD_PROBE_SEED, a.dim() as u64);
    for _ in 0..20 {
        let w = crate::linalg::gaussian_vec(a.dim(), &mut rng);
        let q = a.quadratic_form(&normalize(&w)?)?;
        if q < -slack {
            return Err(Error::NotPositiveSemidefinite { witness: q });
        }
    }
    Ok(())
}

fn prepared_start(a: &SymMatrix, v0: Array1<f64>) -> Result<Array1<f64>> {
    if v0.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: v0.len(),
        });
    }
    normalize(&v0).map_err(|_| Error::InvalidStart("start vector has zero norm".into()))
}

/// Ordinary power iteration `vₜ₊₁ = Avₜ/‖Avₜ‖`.
pub fn power_iteration(a: &SymMatrix, cfg: &IterConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let v0 = prepared_start(a, cfg.v0.clone().unwrap_or_else(|| uniform_start(a.dim())))?;
    let r0 = a.quadratic_form(&v0)?;
    let max_iter = cfg
        .max_iter
        .unwrap_or_else(|| default_max_iter(a, r0, cfg.delta));
    let mut v = v0;
    let mut trace = vec![r0];
    for t in 0..max_iter {
        let w = a.matvec(&v)?;
        if norm(&w) <= ZERO_PROJECTION_REL_TOL {
            return Ok(EstimateResult {
                v,
                iters: t,
                rayleigh_trace: trace,
                stop_reason: StopReason::DegenerateProjection,
            });
        }
        let v_next = normalize(&w)?;
        trace.push(a.quadratic_form(&v_next)?);
        let diff = norm(&(&v_next - &v));
        v = v_next;
        if diff <= cfg.delta {
            return Ok(EstimateResult {
                v,
                iters: t + 1,
                rayleigh_trace: trace,
                stop_reason: StopReason::Converged,
            });
        }
    }
    Ok(EstimateResult {
        v,
        iters: max_iter,
        rayleigh_trace: trace,
        stop_reason: StopReason::MaxIter,
    })
}

/// Cone projected power iteration `vₜ₊₁ = Π_K(Avₜ)/‖Π_K(Avₜ)‖`.
///
/// Requires a softly-PSD matrix, a start in `K ∩ S^{p−1}` and
/// `v₀ᵀAv₀ > 0`; the latter makes the Rayleigh quotient strictly
/// increasing, which is what bounds the iteration count.
pub fn cone_power_iteration(
    a: &SymMatrix,
    cone: &Cone,
    cfg: &IterConfig,
) -> Result<EstimateResult> {
    cone_power_iteration_detailed(a, cone, cfg).map(|(res, _)| res)
}

/// As [`cone_power_iteration`], additionally returning every iterate
/// (including the start vector) so invariants can be re-checked externally.
pub fn cone_power_iteration_detailed(
    a: &SymMatrix,
    cone: &Cone,
    cfg: &IterConfig,
) -> Result<(EstimateResult, Vec<Array1<f64>>)> {
    cfg.validate()?;
    if cone.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: cone.dim(),
        });
    }
    soft_psd_check(a)?;
    let v0 = match cfg.v0.clone() {
        Some(v) => prepared_start(a, v)?,
        None => default_start(cone)?,
    };
    if !cone.member(&v0, 1e-8) {
        return Err(Error::InvalidStart(
            "start vector is not in the cone".into(),
        ));
    }
    let r0 = a.quadratic_form(&v0)?;
    if r0 <= 0.0 {
        return Err(Error::InvalidStart(format!(
            "v₀ᵀAv₀ = {r0:.3e} must be positive"
        )));
    }
    let max_iter = cfg
        .max_iter
        .unwrap_or_else(|| default_max_iter(a, r0, cfg.delta));

    let mut v = v0;
    let mut trace = vec![r0];
    let mut iterates = vec![v.clone()];
    for t in 0..max_iter {
        let w = a.matvec(&v)?;
        let proj = cone.project(&w)?;
        let proj_norm = norm(&proj.point);
        if proj_norm <= ZERO_PROJECTION_REL_TOL * norm(&w).max(1.0) {
            return Ok((
                EstimateResult {
                    v,
                    iters: t,
                    rayleigh_trace: trace,
                    stop_reason: StopReason::DegenerateProjection,
                },
                iterates,
            ));
        }
        let v_next = &proj.point / proj_norm;
        let r_next = a.quadratic_form(&v_next)?;
        // Moreau gives ‖Π_K Avₜ‖ = vₜ₊₁ᵀAvₜ, and Cauchy-Schwarz chains it
        // below the new Rayleigh quotient.
        debug_assert!({
            let cross = v_next.dot(&w);
            (proj_norm - cross).abs() <= 1e-10 * proj_norm.max(1.0)
                && cross <= r_next + 1e-10 * r_next.abs().max(1.0)
        });
        trace.push(r_next);
        iterates.push(v_next.clone());
        let diff = norm(&(&v_next - &v));
        v = v_next;
        if diff <= cfg.delta {
            return Ok((
                EstimateResult {
                    v,
                    iters: t + 1,
                    rayleigh_trace: trace,
                    stop_reason: StopReason::Converged,
                },
                iterates,
            ));
        }
    }
    Ok((
        EstimateResult {
            v,
            iters: max_iter,
            rayleigh_trace: trace,
            stop_reason: StopReason::MaxIter,
        },
        iterates,
    ))
}

/// Both branch runs of the double-start iteration, plus which one won.
#[derive(Debug, Clone)]
pub struct DoubleRunDetail {
    /// Run started at `v₀`; `None` when the start was infeasible or the
    /// projection collapsed.
    pub plus: Option<EstimateResult>,
    /// Run started at the cone-feasible surrogate of `−v₀`.
    pub minus: Option<EstimateResult>,
    /// True when the returned vector came from the minus branch.
    pub chose_minus: bool,
}

impl DoubleRunDetail {
    pub fn chosen(&self) -> &EstimateResult {
        if self.chose_minus {
            self.minus.as_ref().expect("minus branch chosen")
        } else {
            self.plus.as_ref().expect("plus branch chosen")
        }
    }
}

/// Double-start cone projected power iteration.
///
/// Runs [`cone_power_iteration`] from `v₀` and from the cone-feasible
/// surrogate of `−v₀` (its projection onto the cone, normalized; `−v₀`
/// itself may lie outside `K`). Returns the run with the larger final
/// quadratic form; an exact tie goes to the `v₀` run. A branch whose start
/// is infeasible or whose projection collapses is dropped; if both drop,
/// the degenerate-projection error is returned.
pub fn cone_power_iteration_double(
    a: &SymMatrix,
    cone: &Cone,
    cfg: &IterConfig,
) -> Result<EstimateResult> {
    cone_power_iteration_double_detailed(a, cone, cfg).map(|d| d.chosen().clone())
}

/// As [`cone_power_iteration_double`], keeping both branch runs.
pub fn cone_power_iteration_double_detailed(
    a: &SymMatrix,
    cone: &Cone,
    cfg: &IterConfig,
) -> Result<DoubleRunDetail> {
    cfg.validate()?;
    let v0 = match cfg.v0.clone() {
        Some(v) => prepared_start(a, v)?,
        None => default_start(cone)?,
    };

    let run_branch = |start: Array1<f64>| -> Result<Option<EstimateResult>> {
        let branch_cfg = IterConfig {
            v0: Some(start),
            ..cfg.clone()
        };
        match cone_power_iteration(a, cone, &branch_cfg) {
            Ok(res) if res.stop_reason == StopReason::DegenerateProjection => Ok(None),
            Ok(res) => Ok(Some(res)),
            Err(Error::InvalidStart(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };

    let plus = run_branch(v0.clone())?;
    let minus_start = {
        let neg = -&v0;
        let proj = cone.project(&neg)?;
        if norm(&proj.point) <= ZERO_PROJECTION_REL_TOL * norm(&neg).max(1.0) {
            None
        } else {
            Some(normalize(&proj.point)?)
        }
    };
    let minus = match minus_start {
        Some(start) => run_branch(start)?,
        None => None,
    };

    let chose_minus = match (&plus, &minus) {
        (Some(p), Some(m)) => m.objective() > p.objective() + 1e-12,
        (Some(_), None) => false,
        (None, Some(_)) => true,
        (None, None) => return Err(Error::DegenerateProjection),
    };
    Ok(DoubleRunDetail {
        plus,
        minus,
        chose_minus,
    })
}

/// Power iteration that keeps only the `k` largest-magnitude coordinates of
/// each power step (sparsity baseline).
pub fn truncated_power_iteration(
    a: &SymMatrix,
    k: usize,
    cfg: &IterConfig,
) -> Result<EstimateResult> {
    cfg.validate()?;
    let p = a.dim();
    if k == 0 || k > p {
        return Err(Error::InvalidParameter(format!(
            "cardinality k = {k} must be in 1..={p}"
        )));
    }
    let v0 = prepared_start(a, cfg.v0.clone().unwrap_or_else(|| uniform_start(p)))?;
    let r0 = a.quadratic_form(&v0)?;
    let max_iter = cfg
        .max_iter
        .unwrap_or_else(|| default_max_iter(a, r0, cfg.delta));
    let mut v = v0;
    let mut trace = vec![r0];
    let mut order: Vec<usize> = (0..p).collect();
    for t in 0..max_iter {
        let mut w = a.matvec(&v)?;
        if k < p {
            // Stable largest-|w| selection: magnitude descending, index
            // ascending on ties, so runs are reproducible.
            order.sort_by(|&i, &j| w[j].abs().partial_cmp(&w[i].abs()).unwrap().then(i.cmp(&j)));
            for &i in &order[k..] {
                w[i] = 0.0;
            }
        }
        if norm(&w) <= ZERO_PROJECTION_REL_TOL {
            return Ok(EstimateResult {
                v,
                iters: t,
                rayleigh_trace: trace,
                stop_reason: StopReason::DegenerateProjection,
            });
        }
        let v_next = normalize(&w)?;
        trace.push(a.quadratic_form(&v_next)?);
        let diff = norm(&(&v_next - &v));
        v = v_next;
        if diff <= cfg.delta {
            return Ok(EstimateResult {
                v,
                iters: t + 1,
                rayleigh_trace: trace,
                stop_reason: StopReason::Converged,
            });
        }
    }
    Ok(EstimateResult {
        v,
        iters: max_iter,
        rayleigh_trace: trace,
        stop_reason: StopReason::MaxIter,
    })
}

/// Brute-force maximizer of `uᵀAu` over `K ∩ S^{p−1}` on a spherical-angle
/// grid with the given step. Tractable only for `p ≤ 3`; ties keep the
/// first grid point found.
pub fn idealized_bruteforce(a: &SymMatrix, cone: &Cone, grid_step: f64) -> Result<Array1<f64>> {
    let p = a.dim();
    if cone.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: cone.dim(),
        });
    }
    if !(grid_step > 0.0 && grid_step < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "grid step {grid_step} must be in (0, 1)"
        )));
    }
    if p == 0 || p > 3 {
        return Err(Error::InvalidParameter(format!(
            "spherical grid search only supports 1 ≤ p ≤ 3, got {p}"
        )));
    }
    const MEMBER_TOL: f64 = 1e-12;
    let mut best: Option<(f64, Array1<f64>)> = None;
    let mut consider = |obj: f64, u: Array1<f64>| match &best {
        Some((b, _)) if obj <= *b => {}
        _ => best = Some((obj, u)),
    };
    match p {
        1 => {
            for s in [1.0, -1.0] {
                let u = Array1::from_vec(vec![s]);
                if cone.member(&u, MEMBER_TOL) {
                    consider(a.quadratic_form(&u)?, u);
                }
            }
        }
        2 => {
            let steps = (std::f64::consts::TAU / grid_step).ceil() as usize;
            let (a00, a01, a11) = (a.get(0, 0), a.get(0, 1), a.get(1, 1));
            for i in 0..steps {
                let theta = i as f64 * grid_step;
                let (s, c) = theta.sin_cos();
                let u = Array1::from_vec(vec![c, s]);
                if cone.member(&u, MEMBER_TOL) {
                    let obj = a00 * c * c + 2.0 * a01 * c * s + a11 * s * s;
                    consider(obj, u);
                }
            }
        }
        3 => {
            let polar_steps = (std::f64::consts::PI / grid_step).ceil() as usize + 1;
            let azim_steps = (std::f64::consts::TAU / grid_step).ceil() as usize;
            let azim: Vec<(f64, f64)> = (0..azim_steps)
                .map(|j| (j as f64 * grid_step).sin_cos())
                .collect();
            let (a00, a11, a22) = (a.get(0, 0), a.get(1, 1), a.get(2, 2));
            let (a01, a02, a12) = (a.get(0, 1), a.get(0, 2), a.get(1, 2));
            let monotone = matches!(cone, Cone::Monotone { .. });
            let orthant = matches!(cone, Cone::NonNegOrthant { .. });
            for i in 0..polar_steps {
                let theta = (i as f64 * grid_step).min(std::f64::consts::PI);
                let (st, ct) = theta.sin_cos();
                for &(sp, cp) in &azim {
                    let (x, y, z) = (st * cp, st * sp, ct);
                    // Hot loop: inline the two common membership tests.
                    let feasible = if monotone {
                        x <= y + MEMBER_TOL && y <= z + MEMBER_TOL
                    } else if orthant {
                        x >= -MEMBER_TOL && y >= -MEMBER_TOL && z >= -MEMBER_TOL
                    } else {
                        cone.member(&Array1::from_vec(vec![x, y, z]), MEMBER_TOL)
                    };
                    if feasible {
                        let obj = a00 * x * x
                            + a11 * y * y
                            + a22 * z * z
                            + 2.0 * (a01 * x * y + a02 * x * z + a12 * y * z);
                        consider(obj, Array1::from_vec(vec![x, y, z]));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    best.map(|(_, u)| u).ok_or(Error::EmptyGrid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::jacobi_eigh;
    use crate::rng::stream_rng;
    use ndarray::{array, Array2};

    fn unit(v: Array1<f64>) -> Array1<f64> {
        normalize(&v).unwrap()
    }

    #[test]
    fn power_iteration_finds_dominant_axis() {
        let a = SymMatrix::from_diag(&[3.0, 1.0]);
        let cfg = IterConfig {
            delta: 1e-8,
            v0: Some(unit(array![1.0, 1.0])),
            ..Default::default()
        };
        let res = power_iteration(&a, &cfg).unwrap();
        assert!(res.v[0].abs() > 1.0 - 1e-6);
        assert!(res.v[1].abs() < 1e-3);
        assert_eq!(res.stop_reason, StopReason::Converged);
    }

    #[test]
    fn power_iteration_identity_converges_immediately() {
        let a = SymMatrix::identity(3);
        let v0 = unit(array![0.3, -0.5, 0.8]);
        let cfg = IterConfig {
            delta: 1e-8,
            v0: Some(v0.clone()),
            ..Default::default()
        };
        let res = power_iteration(&a, &cfg).unwrap();
        assert_eq!(res.iters, 1);
        for i in 0..3 {
            assert!((res.v[i] - v0[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn power_iteration_matches_jacobi_eigenvector() {
        let mut rng = stream_rng(41, 0);
        let w = Array2::from_shape_fn((8, 8), |_| crate::linalg::gaussian_vec(1, &mut rng)[0]);
        let a = SymMatrix::from_array(w.t().dot(&w)).unwrap();
        let cfg = IterConfig {
            delta: 1e-10,
            max_iter: Some(500_000),
            ..Default::default()
        };
        let res = power_iteration(&a, &cfg).unwrap();
        let (_, vecs) = jacobi_eigh(&a).unwrap();
        let truth = Array1::from_iter((0..8).map(|i| vecs[(i, 0)]));
        let loss = crate::analysis::loss(&res.v, &truth).unwrap();
        assert!(loss <= 1e-5, "loss {loss}");
    }

    #[test]
    fn cone_iteration_respects_monotone_constraint() {
        let a = SymMatrix::from_diag(&[1.0, 2.0]);
        let cone = Cone::monotone(2);
        let cfg = IterConfig {
            delta: 1e-8,
            v0: Some(unit(array![1.0, 1.0])),
            ..Default::default()
        };
        let res = cone_power_iteration(&a, &cone, &cfg).unwrap();
        assert!((res.v[1] - 1.0).abs() <= 1e-6);
        assert!(res.v[0].abs() <= 1e-6);
    }

    #[test]
    fn cone_iteration_recovers_noiseless_spike() {
        let xbar = unit(array![1.0, 2.0, 3.0]);
        let mut a = SymMatrix::identity(3);
        a.add_outer(2.0, &xbar).unwrap();
        let cone = Cone::monotone(3);
        let cfg = IterConfig {
            delta: 1e-9,
            ..Default::default()
        };
        let res = cone_power_iteration(&a, &cone, &cfg).unwrap();
        let loss = crate::analysis::loss(&res.v, &xbar).unwrap();
        assert!(loss <= 1e-6, "loss {loss}");
        // Rayleigh trace must be nondecreasing on the way up.
        for w in res.rayleigh_trace.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn cone_iteration_rejects_infeasible_start() {
        let a = SymMatrix::identity(2);
        let cone = Cone::nonneg_orthant(2);
        let cfg = IterConfig {
            delta: 1e-6,
            v0: Some(unit(array![-1.0, -1.0])),
            ..Default::default()
        };
        assert!(matches!(
            cone_power_iteration(&a, &cone, &cfg),
            Err(Error::InvalidStart(_))
        ));
    }

    #[test]
    fn cone_iteration_rejects_clearly_indefinite_matrix() {
        let a = SymMatrix::from_diag(&[1.0, -5.0, 1.0, -4.0]);
        let cone = Cone::nonneg_orthant(4);
        let cfg = IterConfig::default();
        assert!(matches!(
            cone_power_iteration(&a, &cone, &cfg),
            Err(Error::NotPositiveSemidefinite { .. })
        ));
    }

    #[test]
    fn double_start_prefers_larger_objective() {
        let xbar = unit(array![1.0, 2.0, 3.0]);
        let mut a = SymMatrix::identity(3);
        a.add_outer(2.0, &xbar).unwrap();
        let cone = Cone::monotone(3);
        let cfg = IterConfig {
            delta: 1e-9,
            v0: Some(xbar.clone()),
            ..Default::default()
        };
        let res = cone_power_iteration_double(&a, &cone, &cfg).unwrap();
        let loss = crate::analysis::loss(&res.v, &xbar).unwrap();
        assert!(loss <= 1e-6);
        assert!((res.objective() - 3.0).abs() <= 1e-6);
    }

    #[test]
    fn double_start_tie_goes_to_plus_branch() {
        let a = SymMatrix::identity(3);
        let cone = Cone::monotone(3);
        let v0 = unit(array![-1.0, 0.0, 1.0]);
        let cfg = IterConfig {
            delta: 1e-8,
            v0: Some(v0.clone()),
            ..Default::default()
        };
        let res = cone_power_iteration_double(&a, &cone, &cfg).unwrap();
        // Identity matrix: both branches converge in one step with equal
        // objective 1; the plus branch (started at v0) must win the tie.
        for i in 0..3 {
            assert!((res.v[i] - v0[i]).abs() <= 1e-12);
        }
    }

    #[test]
    fn truncated_keeps_dominant_coordinate() {
        let a = SymMatrix::from_diag(&[3.0, 2.0, 1.0]);
        let cfg = IterConfig {
            delta: 1e-8,
            v0: Some(unit(array![1.0, 1.0, 1.0])),
            ..Default::default()
        };
        let res = truncated_power_iteration(&a, 1, &cfg).unwrap();
        assert!(res.v[0].abs() > 1.0 - 1e-9);
        assert_eq!(res.v[1], 0.0);
        assert_eq!(res.v[2], 0.0);
    }

    #[test]
    fn truncated_with_full_cardinality_equals_power_iteration() {
        let mut rng = stream_rng(43, 0);
        let w = Array2::from_shape_fn((6, 6), |_| crate::linalg::gaussian_vec(1, &mut rng)[0]);
        let a = SymMatrix::from_array(w.t().dot(&w)).unwrap();
        let v0 = unit(crate::linalg::gaussian_vec(6, &mut rng));
        let cfg = IterConfig {
            delta: 1e-8,
            v0: Some(v0),
            ..Default::default()
        };
        let full = truncated_power_iteration(&a, 6, &cfg).unwrap();
        let plain = power_iteration(&a, &cfg).unwrap();
        assert_eq!(full.iters, plain.iters);
        for i in 0..6 {
            assert_eq!(full.v[i], plain.v[i]);
        }
    }

    #[test]
    fn truncated_rejects_bad_cardinality() {
        let a = SymMatrix::identity(3);
        assert!(truncated_power_iteration(&a, 0, &IterConfig::default()).is_err());
        assert!(truncated_power_iteration(&a, 4, &IterConfig::default()).is_err());
    }

    #[test]
    fn bruteforce_axis_optimum() {
        let a = SymMatrix::from_diag(&[2.0, 1.0]);
        let cone = Cone::nonneg_orthant(2);
        let u = idealized_bruteforce(&a, &cone, 1e-3).unwrap();
        assert!((u[0] - 1.0).abs() <= 1e-3);
        assert!(u[1].abs() <= 2e-3);
    }

    #[test]
    fn bruteforce_degenerate_objective_returns_feasible_unit() {
        let a = SymMatrix::identity(2);
        let cone = Cone::monotone(2);
        let u = idealized_bruteforce(&a, &cone, 0.01).unwrap();
        assert!(cone.member(&u, 1e-9));
        assert!((norm(&u) - 1.0).abs() <= 1e-12);
        assert!((a.quadratic_form(&u).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn bruteforce_refinement_is_stable() {
        // Spiked instance with an interior optimum: refining the grid must
        // not move the objective by more than the coarse quadratic error.
        let mut rng = stream_rng(47, 0);
        let raw = crate::linalg::gaussian_vec(3, &mut rng).mapv(f64::abs);
        let mut sorted = raw.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let xbar = unit(Array1::from_vec(sorted));
        let mut a = SymMatrix::identity(3);
        a.add_outer(2.0, &xbar).unwrap();
        let cone = Cone::monotone(3);
        let coarse = idealized_bruteforce(&a, &cone, 5e-3).unwrap();
        let fine = idealized_bruteforce(&a, &cone, 5e-4).unwrap();
        let qc = a.quadratic_form(&coarse).unwrap();
        let qf = a.quadratic_form(&fine).unwrap();
        assert!((qc - qf).abs() <= 1e-4, "coarse {qc} vs fine {qf}");
    }

    #[test]
    fn bruteforce_empty_grid_errors() {
        // A coordinate subspace almost never contains exact grid points.
        let a = SymMatrix::identity(3);
        let cone = Cone::coord_subspace(3, [1]).unwrap();
        assert!(matches!(
            idealized_bruteforce(&a, &cone, 0.1),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn delta_bounds_are_enforced() {
        let a = SymMatrix::identity(2);
        for bad in [0.0, -1.0, 1.5] {
            let cfg = IterConfig {
                delta: bad,
                ..Default::default()
            };
            assert!(power_iteration(&a, &cfg).is_err());
        }
    }
}
