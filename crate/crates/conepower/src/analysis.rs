//! Evaluators for the theory surrounding the cone projected power
//! iteration: the sign-invariant loss, the threshold constants c₋₁/c₁, the
//! iteration cap, the error-bound formulas, Monte Carlo estimators for
//! cone-restricted operator norms and Gaussian widths, tangent-cone
//! projectors, the spiked-model trace/KL identities, and the monotone-cone
//! packing construction.

use ndarray::Array1;

use crate::cones::{Cone, Project};
use crate::error::{Error, Result};
use crate::estimators::{cone_power_iteration, default_start, IterConfig};
use crate::linalg::{gaussian_vec, norm, normalize, SymMatrix};
use crate::rng::SeededRng;

/// Sign-invariant estimation error `‖v − x̄‖ ∧ ‖v + x̄‖`.
pub fn loss(v: &Array1<f64>, xbar: &Array1<f64>) -> Result<f64> {
    if v.len() != xbar.len() {
        return Err(Error::DimensionMismatch {
            expected: xbar.len(),
            got: v.len(),
        });
    }
    Ok(norm(&(v - xbar)).min(norm(&(v + xbar))))
}

/// `(3 + 2√2)`, the eigengap-to-noise ratio above which the threshold
/// constants exist.
pub const GAP_RATIO: f64 = 3.0 + 2.0 * std::f64::consts::SQRT_2;

/// The two roots `c₋₁ ≤ c₁` of `ν·y² − (ν − ‖E‖_K)·y + ‖E‖_K = 0`.
///
/// `c₋₁` is the start-alignment threshold and `c₁` the level the alignment
/// is retained at. Defined when `ν ≥ (3 + 2√2)·‖E‖_K`; otherwise `None`
/// (below that ratio the real roots, when they exist at all, are negative
/// and meaningless as dot-product thresholds).
pub fn constants(nu: f64, norm_k: f64) -> Result<Option<(f64, f64)>> {
    if nu <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eigengap must be positive, got {nu}"
        )));
    }
    if norm_k < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "norm must be nonnegative, got {norm_k}"
        )));
    }
    if norm_k == 0.0 {
        return Ok(Some((0.0, 1.0)));
    }
    if nu < GAP_RATIO * norm_k {
        return Ok(None);
    }
    let b = nu - norm_k;
    let disc = (b * b - 4.0 * nu * norm_k).max(0.0);
    // Stable quadratic roots: divide the constant term by the large root's
    // numerator instead of subtracting nearly equal quantities.
    let q = 0.5 * (b + disc.sqrt());
    let c1 = q / nu;
    let c_minus1 = norm_k / q;
    Ok(Some((c_minus1, c1)))
}

/// Iteration cap `⌈log((λ + ‖E‖_K)/(v₀ᵀAv₀)) / log(1 + Δ²)⌉` for the cone
/// projected power iteration.
pub fn iteration_cap(lambda: f64, norm_k: f64, v0av0: f64, delta: f64) -> Result<u64> {
    if v0av0 <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "v₀ᵀAv₀ must be positive, got {v0av0}"
        )));
    }
    if delta <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Δ must be positive, got {delta}"
        )));
    }
    let ratio = (lambda + norm_k) / v0av0;
    if ratio <= 1.0 {
        return Ok(0);
    }
    let cap = (ratio.ln() / (delta * delta).ln_1p()).ceil();
    Ok(cap as u64)
}

/// Sign case of the idealized-estimator bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignCase {
    /// `vᵀx̄ ≥ 0`: bound `√(4‖E‖_K/ν) ∧ 8‖E‖_{T_K(x̄)}/ν`.
    Positive,
    /// `vᵀx̄ ≤ 0`: bound `√(4‖E‖_K/ν) ∧ 8‖E‖_K/ν`.
    Negative,
}

/// Idealized-estimator error bound for the given sign case. All inputs
/// positive.
pub fn idealized_error_bound(nu: f64, norm_k: f64, norm_tangent: f64, sign_case: SignCase) -> f64 {
    let sqrt_branch = (4.0 * norm_k / nu).sqrt();
    let linear_branch = match sign_case {
        SignCase::Positive => 8.0 * norm_tangent / nu,
        SignCase::Negative => 8.0 * norm_k / nu,
    };
    sqrt_branch.min(linear_branch)
}

/// Single-start iteration error bound
/// `√(8‖E‖_K/((c₀∧c₁)ν)) ∧ 41‖E‖_{T_K(x̄)}/((c₀∧c₁)ν)`. All inputs
/// positive.
pub fn single_start_error_bound(nu: f64, norm_k: f64, norm_tangent: f64, c0: f64, c1: f64) -> f64 {
    let c = c0.min(c1);
    let sqrt_branch = (8.0 * norm_k / (c * nu)).sqrt();
    let linear_branch = 41.0 * norm_tangent / (c * nu);
    sqrt_branch.min(linear_branch)
}

/// Double-start bad-initialization bounds `B₁` and `B₂`, in terms of the
/// error `‖v₊ − x̄‖` of the well-initialized run.
pub fn double_start_error_bounds(
    lambda: f64,
    nu: f64,
    norm_k: f64,
    norm_tangent: f64,
    vplus_err: f64,
) -> (f64, f64) {
    let b1 = (2.0 * lambda / nu).sqrt() * vplus_err + (4.0 * norm_k / nu).sqrt();
    let b2 = (8.0 * norm_k / nu).max(8.0 * norm_tangent / nu)
        + ((2.0 * lambda * vplus_err * vplus_err + 8.0 * vplus_err * norm_tangent) / nu).sqrt();
    (b1, b2)
}

/// Expected-noise-level rate under the spiked model:
/// `√(ν+1)·(w/√n ∨ w²/n) + (ν + 3 − 3√(ν+1))/√n`, with `w` the Gaussian
/// width of `K ∩ S^{p−1}`. Reported without absolute constants.
pub fn expected_noise_rate(nu: f64, width: f64, n: usize) -> f64 {
    let n = n as f64;
    let sqrt_n = n.sqrt();
    let w_term = (width / sqrt_n).max(width * width / n);
    ((nu + 1.0).sqrt()) * w_term + (nu + 3.0 - 3.0 * (nu + 1.0).sqrt()) / sqrt_n
}

/// How a cone-restricted norm value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMethod {
    /// Sampled pairs refined by alternating projected ascent; a lower
    /// estimate of the supremum.
    MonteCarloAscent,
    /// Exhaustive angular grid in the first argument, exact in the second;
    /// only feasible for p ≤ 3.
    GridOracle,
    /// Plain operator norm by power iteration, used when the constraint
    /// set is effectively the full space.
    OperatorPower,
}

impl NormMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormMethod::MonteCarloAscent => "mc_ascent",
            NormMethod::GridOracle => "grid_oracle",
            NormMethod::OperatorPower => "operator_power",
        }
    }
}

/// Estimate of `‖E‖_C = sup_{x,y ∈ C∩S^{p−1}} |xᵀEy|`.
#[derive(Debug, Clone)]
pub struct ConeNormEstimate {
    pub value: f64,
    pub trials: usize,
    pub method: NormMethod,
}

/// Estimate of the Gaussian width `w(K ∩ S^{p−1}) = E‖Π_K g‖`.
#[derive(Debug, Clone)]
pub struct GaussWidthEstimate {
    pub value: f64,
    pub std_error: f64,
    pub trials: usize,
}

fn sample_unit_in<P: Project + ?Sized>(
    set: &P,
    rng: &mut SeededRng,
    attempts: &mut usize,
    max_attempts: usize,
) -> Result<Array1<f64>> {
    loop {
        if *attempts >= max_attempts {
            return Err(Error::DegenerateProjection);
        }
        *attempts += 1;
        let g = gaussian_vec(set.ambient_dim(), rng);
        let proj = set.project_point(&g);
        let n = norm(&proj);
        if n > 1e-12 * norm(&g).max(1.0) {
            return Ok(&proj / n);
        }
    }
}

/// Monte Carlo lower estimate of the cone-restricted operator norm.
///
/// Samples `trials` pairs of cone unit vectors (projected Gaussians),
/// evaluates `|xᵀEy|` for every pair as well as both diagonal pairs, then
/// refines the best pair by alternating projected-ascent steps
/// `x ← ±Π_C(Ey)/‖·‖` until improvement drops below 1e-10.
pub fn cone_norm_mc<P: Project + ?Sized>(
    e: &SymMatrix,
    set: &P,
    trials: usize,
    rng: &mut SeededRng,
) -> Result<ConeNormEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    if e.dim() != set.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: e.dim(),
            got: set.ambient_dim(),
        });
    }
    let mut attempts = 0;
    let max_attempts = 100 * trials.max(16);

    let mut best_val = f64::NEG_INFINITY;
    let mut best_pair: Option<(Array1<f64>, Array1<f64>)> = None;
    for _ in 0..trials {
        let x = sample_unit_in(set, rng, &mut attempts, max_attempts)?;
        let y = sample_unit_in(set, rng, &mut attempts, max_attempts)?;
        let ey = e.matvec(&y)?;
        let ex = e.matvec(&x)?;
        for (val, pair) in [
            (x.dot(&ey).abs(), (x.clone(), y.clone())),
            (x.dot(&ex).abs(), (x.clone(), x.clone())),
            (y.dot(&ey).abs(), (y.clone(), y.clone())),
        ] {
            if val > best_val {
                best_val = val;
                best_pair = Some(pair);
            }
        }
    }
    let (mut x, mut y) = best_pair.expect("trials >= 1");

    // Alternating ascent: with one side fixed, the best other side is the
    // normalized projection of ±E(fixed side).
    let improve = |fixed_image: &Array1<f64>| -> Option<(f64, Array1<f64>)> {
        let mut out: Option<(f64, Array1<f64>)> = None;
        for sign in [1.0, -1.0] {
            let cand = set.project_point(&(fixed_image * sign));
            let n = norm(&cand);
            if n <= 1e-300 {
                continue;
            }
            let cand = &cand / n;
            let val = cand.dot(fixed_image).abs();
            if out.as_ref().is_none_or(|(v, _)| val > *v) {
                out = Some((val, cand));
            }
        }
        out
    };
    for _ in 0..500 {
        let ey = e.matvec(&y)?;
        if let Some((val, cand)) = improve(&ey) {
            if val > x.dot(&ey).abs() {
                x = cand;
            }
        }
        let ex = e.matvec(&x)?;
        if let Some((val, cand)) = improve(&ex) {
            if val > y.dot(&ex).abs() {
                y = cand;
            }
        }
        let val = y.dot(&e.matvec(&x)?).abs();
        if val <= best_val + 1e-10 {
            best_val = best_val.max(val);
            break;
        }
        best_val = val;
    }
    Ok(ConeNormEstimate {
        value: best_val.max(0.0),
        trials,
        method: NormMethod::MonteCarloAscent,
    })
}

/// Exhaustive angular-grid evaluation of the cone-restricted norm for
/// `p ≤ 3`: grid over the first argument, exact maximization over the
/// second (`sup_{y∈C∩S} |yᵀw| = ‖Π_C w‖ ∨ ‖Π_C(−w)‖`).
pub fn cone_norm_grid(e: &SymMatrix, cone: &Cone, grid_step: f64) -> Result<ConeNormEstimate> {
    let p = e.dim();
    if cone.dim() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: cone.dim(),
        });
    }
    if p == 0 || p > 3 {
        return Err(Error::InvalidParameter(format!(
            "grid oracle only supports 1 ≤ p ≤ 3, got {p}"
        )));
    }
    if !(grid_step > 0.0 && grid_step < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "grid step {grid_step} must be in (0, 1)"
        )));
    }
    const MEMBER_TOL: f64 = 1e-12;
    let mut best: f64 = f64::NEG_INFINITY;
    let mut evals = 0usize;
    let mut consider = |x: &Array1<f64>| -> Result<()> {
        if !cone.member(x, MEMBER_TOL) {
            return Ok(());
        }
        evals += 1;
        let w = e.matvec(x)?;
        let pos = norm(&cone.project(&w)?.point);
        let neg = norm(&cone.project(&(-&w))?.point);
        best = best.max(pos.max(neg));
        Ok(())
    };
    match p {
        1 => {
            consider(&Array1::from_vec(vec![1.0]))?;
            consider(&Array1::from_vec(vec![-1.0]))?;
        }
        2 => {
            let steps = (std::f64::consts::TAU / grid_step).ceil() as usize;
            for i in 0..steps {
                let (s, c) = (i as f64 * grid_step).sin_cos();
                consider(&Array1::from_vec(vec![c, s]))?;
            }
        }
        3 => {
            let polar_steps = (std::f64::consts::PI / grid_step).ceil() as usize + 1;
            let azim_steps = (std::f64::consts::TAU / grid_step).ceil() as usize;
            for i in 0..polar_steps {
                let theta = (i as f64 * grid_step).min(std::f64::consts::PI);
                let (st, ct) = theta.sin_cos();
                for j in 0..azim_steps {
                    let (sp, cp) = (j as f64 * grid_step).sin_cos();
                    consider(&Array1::from_vec(vec![st * cp, st * sp, ct]))?;
                }
            }
        }
        _ => unreachable!(),
    }
    if evals == 0 {
        return Err(Error::EmptyGrid);
    }
    Ok(ConeNormEstimate {
        value: best.max(0.0),
        trials: evals,
        method: NormMethod::GridOracle,
    })
}

// Fixed stream for the operator-norm start vector.
const OP_NORM_SEED: u64 = 0x0f0e_a7a1;

/// Operator norm of a symmetric matrix by power iteration on `E²` (the
/// square removes the sign ambiguity of an indefinite dominant eigenvalue).
pub fn operator_norm(e: &SymMatrix, tol: f64, max_iter: usize) -> f64 {
    let p = e.dim();
    let mut rng = crate::rng::stream_rng(OP_NORM_SEED, p as u64);
    let mut v = match normalize(&gaussian_vec(p, &mut rng)) {
        Ok(v) => v,
        Err(_) => return 0.0,
    };
    let mut est = 0.0f64;
    for _ in 0..max_iter {
        let w = e.as_array().dot(&v);
        let new_est = norm(&w);
        if new_est <= 1e-300 {
            return 0.0;
        }
        let u = e.as_array().dot(&w);
        let un = norm(&u);
        if un <= 1e-300 {
            return new_est;
        }
        v = &u / un;
        if (new_est - est).abs() <= tol * new_est.max(1.0) {
            return new_est;
        }
        est = new_est;
    }
    est
}

/// Monte Carlo mean of `‖Π_K g‖` over standard Gaussians, with its
/// standard error. For a convex cone this equals the Gaussian width of
/// `K ∩ S^{p−1}` whenever the projection is nonzero.
pub fn gauss_width_mc<P: Project + ?Sized>(
    set: &P,
    trials: usize,
    rng: &mut SeededRng,
) -> Result<GaussWidthEstimate> {
    if trials < 2 {
        return Err(Error::InvalidParameter(
            "need at least two trials for a standard error".into(),
        ));
    }
    let p = set.ambient_dim();
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..trials {
        let g = gaussian_vec(p, rng);
        let v = norm(&set.project_point(&g));
        sum += v;
        sum_sq += v * v;
    }
    let t = trials as f64;
    let mean = sum / t;
    let var = ((sum_sq - t * mean * mean) / (t - 1.0)).max(0.0);
    Ok(GaussWidthEstimate {
        value: mean,
        std_error: (var / t).sqrt(),
        trials,
    })
}

/// Exact projector onto the tangent cone `T_K(x̄) = cl{t(v − x̄) : v ∈ K, t ≥ 0}`.
#[derive(Debug, Clone)]
pub enum TangentCone {
    /// Monotone cone at piecewise-constant `x̄`: directions that are
    /// nondecreasing within each constant block of `x̄` (no constraint
    /// across blocks). Blocks are stored as half-open index ranges.
    MonotoneBlocks {
        p: usize,
        blocks: Vec<(usize, usize)>,
    },
    /// Orthant at `x̄`: coordinates where `x̄ᵢ = 0` must stay nonnegative.
    OrthantFace { p: usize, clamped: Vec<bool> },
    /// A coordinate subspace is its own tangent cone everywhere.
    Subspace(Cone),
    /// Tangent cone at an interior point.
    Full { p: usize },
}

/// Tolerance for deciding that two adjacent entries of `x̄` belong to the
/// same constant block (monotone cone) or that an entry is at the boundary
/// (orthant).
pub const TANGENT_TIE_TOL: f64 = 1e-9;

/// Builds the tangent-cone projector of `cone` at `xbar`.
pub fn tangent_cone(cone: &Cone, xbar: &Array1<f64>) -> Result<TangentCone> {
    if xbar.len() != cone.dim() {
        return Err(Error::DimensionMismatch {
            expected: cone.dim(),
            got: xbar.len(),
        });
    }
    if !cone.member(xbar, 1e-8) {
        return Err(Error::InvalidParameter("x̄ must belong to the cone".into()));
    }
    let p = cone.dim();
    Ok(match cone {
        Cone::Monotone { .. } => {
            let mut blocks = Vec::new();
            let mut start = 0;
            for i in 1..p {
                if (xbar[i] - xbar[i - 1]).abs() > TANGENT_TIE_TOL {
                    blocks.push((start, i));
                    start = i;
                }
            }
            blocks.push((start, p));
            if blocks.len() == p {
                TangentCone::Full { p }
            } else {
                TangentCone::MonotoneBlocks { p, blocks }
            }
        }
        Cone::NonNegOrthant { .. } => {
            let clamped: Vec<bool> = xbar.iter().map(|&x| x.abs() <= TANGENT_TIE_TOL).collect();
            if clamped.iter().any(|&c| c) {
                TangentCone::OrthantFace { p, clamped }
            } else {
                TangentCone::Full { p }
            }
        }
        Cone::CoordSubspace { .. } => TangentCone::Subspace(cone.clone()),
        Cone::FullSpace { .. } => TangentCone::Full { p },
    })
}

impl TangentCone {
    /// True when the tangent cone is all of `ℝᵖ`, in which case the
    /// restricted norm is just the operator norm.
    pub fn is_full_space(&self) -> bool {
        matches!(self, TangentCone::Full { .. })
    }
}

impl Project for TangentCone {
    fn ambient_dim(&self) -> usize {
        match self {
            TangentCone::MonotoneBlocks { p, .. }
            | TangentCone::OrthantFace { p, .. }
            | TangentCone::Full { p } => *p,
            TangentCone::Subspace(c) => c.dim(),
        }
    }

    fn project_point(&self, z: &Array1<f64>) -> Array1<f64> {
        match self {
            TangentCone::MonotoneBlocks { blocks, .. } => {
                let mut out = z.clone();
                let slice = z.as_slice().expect("contiguous");
                for &(s, e) in blocks {
                    if e - s >= 2 {
                        let fitted = crate::cones::isotonic_nondecreasing(&slice[s..e]);
                        for (k, val) in fitted.into_iter().enumerate() {
                            out[s + k] = val;
                        }
                    }
                }
                out
            }
            TangentCone::OrthantFace { clamped, .. } => {
                let mut out = z.clone();
                for (v, &c) in out.iter_mut().zip(clamped.iter()) {
                    if c {
                        *v = v.max(0.0);
                    }
                }
                out
            }
            TangentCone::Subspace(c) => c.project_point(z),
            TangentCone::Full { .. } => z.clone(),
        }
    }
}

// 1 − ⟨v,v'⟩², clamped: mathematically nonnegative for unit vectors, but a
// ulp of norm error can push the raw value below zero. Identical arrays
// give exactly zero.
fn alignment_gap(v: &Array1<f64>, vprime: &Array1<f64>) -> f64 {
    if v == vprime {
        return 0.0;
    }
    let dot = v.dot(vprime);
    (1.0 - dot * dot).max(0.0)
}

/// Closed-form `tr((I + k·v'v'ᵀ)⁻¹(I + k·vvᵀ)) = p + k²/(k+1)·(1 − ⟨v,v'⟩²)`
/// for unit `v`, `v'` and `k > −1`.
pub fn trace_identity(k: f64, v: &Array1<f64>, vprime: &Array1<f64>) -> Result<f64> {
    check_unit_pair(v, vprime)?;
    if k <= -1.0 {
        return Err(Error::InvalidParameter(format!(
            "k must exceed −1, got {k}"
        )));
    }
    Ok(v.len() as f64 + k * k / (k + 1.0) * alignment_gap(v, vprime))
}

/// Kullback-Leibler divergence between the spiked Gaussians `N(0, I+νvvᵀ)`
/// and `N(0, I+νv'v'ᵀ)`: `ν²/(2(ν+1))·(1 − ⟨v,v'⟩²)`.
pub fn kl_spiked(nu: f64, v: &Array1<f64>, vprime: &Array1<f64>) -> Result<f64> {
    check_unit_pair(v, vprime)?;
    if nu <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "nu must be positive, got {nu}"
        )));
    }
    Ok(nu * nu / (2.0 * (nu + 1.0)) * alignment_gap(v, vprime))
}

fn check_unit_pair(v: &Array1<f64>, vprime: &Array1<f64>) -> Result<()> {
    if v.len() != vprime.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            got: vprime.len(),
        });
    }
    for u in [v, vprime] {
        let deviation = (norm(u) - 1.0).abs();
        if deviation > 1e-8 {
            return Err(Error::NonUnitVector { deviation });
        }
    }
    Ok(())
}

/// The monotone three-piece unit vector with `i` leading zeros,
/// `p − 1 − i` equal middle entries `ε/√(p−1−i)`, and final entry
/// `√(1−ε²)`.
pub fn k2_vector(p: usize, eps: f64, i: usize) -> Result<Array1<f64>> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("need p ≥ 2, got {p}")));
    }
    if i > p - 2 {
        return Err(Error::IndexOutOfRange {
            index: i,
            limit: p - 1,
        });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be in (0, 1), got {eps}"
        )));
    }
    let middle = eps / ((p - 1 - i) as f64).sqrt();
    let mut a = Array1::zeros(p);
    for j in i..(p - 1) {
        a[j] = middle;
    }
    a[p - 1] = (1.0 - eps * eps).sqrt();
    Ok(a)
}

/// A packing of the three-piece family selected by the greedy index
/// recurrence `c₀ = 0`, `cₖ₊₁ = ⌈(p−1)/8 + 7cₖ/8⌉`, stopping once the next
/// index would exceed `p − 2`.
#[derive(Debug, Clone)]
pub struct PackingSet {
    pub eps: f64,
    pub indices: Vec<usize>,
    pub vectors: Vec<Array1<f64>>,
}

impl PackingSet {
    pub fn cardinality(&self) -> usize {
        self.indices.len()
    }
}

/// Builds the greedy packing for dimension `p ≥ 10` and `ε ∈ (0, 1)`.
pub fn k2_packing(p: usize, eps: f64) -> Result<PackingSet> {
    if p < 10 {
        return Err(Error::InvalidParameter(format!(
            "packing construction needs p ≥ 10, got {p}"
        )));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be in (0, 1), got {eps}"
        )));
    }
    let mut indices = vec![0usize];
    loop {
        let c = *indices.last().unwrap();
        // ⌈((p−1) + 7c)/8⌉ in integer arithmetic.
        let next = (p - 1 + 7 * c).div_ceil(8);
        if next > p - 2 {
            break;
        }
        indices.push(next);
    }
    let vectors = indices
        .iter()
        .map(|&i| k2_vector(p, eps, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(PackingSet {
        eps,
        indices,
        vectors,
    })
}

/// The cardinality bracket the greedy packing is proved to land in:
/// `log(p+7)/log(8/7) ± slack` with explicit lower and upper slack terms.
pub fn packing_cardinality_bracket(p: usize) -> (f64, f64) {
    let base = ((p as f64) + 7.0).ln() / (8f64 / 7.0).ln();
    let lower = base - (15.0f64 / 7.0 + 7.0).ln() / (8f64 / 7.0).ln() - 1.0;
    let upper = base + 9f64.ln() / (8f64 / 7.0).ln() + 1.0;
    (lower, upper)
}

/// Every theoretical quantity evaluated on one problem instance.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub lambda: f64,
    pub mu: f64,
    pub nu: f64,
    pub norm_k: f64,
    pub norm_k_method: NormMethod,
    pub norm_tangent: f64,
    pub norm_tangent_method: NormMethod,
    /// Alignment `v₀ᵀx̄` of the default start with the target.
    pub c0: f64,
    pub delta: f64,
    pub c_minus1: Option<f64>,
    pub c_1: Option<f64>,
    pub iteration_cap: u64,
    pub idealized_bound_pos: f64,
    pub idealized_bound_neg: f64,
    /// `None` when the threshold constants are undefined.
    pub single_start_error_bound: Option<f64>,
    /// `None` when the single-start run cannot be launched (`v₀ᵀAv₀ ≤ 0`).
    pub double_start_b1: Option<f64>,
    pub double_start_b2: Option<f64>,
    /// `None` when the sample count is unknown.
    pub expected_noise_rate: Option<f64>,
    /// Width estimate backing `expected_noise_rate`, when computed.
    pub width: Option<GaussWidthEstimate>,
}

/// Evaluates the full [`BoundReport`] for an observed matrix `a`, a claimed
/// target `x̄ ∈ K`, and a cone.
///
/// The population matrix is reconstructed as `μ·I + (λ−μ)·x̄x̄ᵀ` from the
/// top two eigenvalues of `a`, so the noise is `E = A − Ā`. Restricted
/// norms use the p ≤ 3 grid oracle when available and Monte Carlo ascent
/// otherwise; the tangent norm collapses to the plain operator norm when
/// the tangent cone is the full space.
pub fn evaluate_bounds(
    a: &SymMatrix,
    xbar: &Array1<f64>,
    cone: &Cone,
    delta: f64,
    n: Option<usize>,
    mc_trials: usize,
    seed: u64,
) -> Result<BoundReport> {
    let p = a.dim();
    if xbar.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            got: xbar.len(),
        });
    }
    let deviation = (norm(xbar) - 1.0).abs();
    if deviation > 1e-8 {
        return Err(Error::NonUnitVector { deviation });
    }
    let eig = a.top_two_eigs(
        crate::linalg::EIG_TOL_DEFAULT,
        crate::linalg::eig_max_iter_default(p),
    )?;
    let (lambda, mu, nu) = (eig.lambda, eig.mu, eig.nu);
    if nu <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "matrix has no positive eigengap (ν = {nu:.3e})"
        )));
    }

    // Ā := μI + (λ−μ)x̄x̄ᵀ reproduces the observed top two eigenvalues with
    // principal direction x̄.
    let mut abar = SymMatrix::from_array(SymMatrix::identity(p).as_array() * mu)?;
    abar.add_outer(nu, xbar)?;
    let e = a.sub(&abar)?;

    let (norm_k, norm_k_method) = if p <= 3 {
        let est = cone_norm_grid(&e, cone, 1e-3)?;
        (est.value, est.method)
    } else {
        let mut rng = crate::rng::stream_rng(seed, 1);
        let est = cone_norm_mc(&e, cone, mc_trials, &mut rng)?;
        (est.value, est.method)
    };

    let tangent = tangent_cone(cone, xbar)?;
    let (norm_tangent, norm_tangent_method) = if tangent.is_full_space() {
        (
            operator_norm(&e, 1e-10, 10 * p + 1000),
            NormMethod::OperatorPower,
        )
    } else {
        let mut rng = crate::rng::stream_rng(seed, 2);
        let est = cone_norm_mc(&e, &tangent, mc_trials, &mut rng)?;
        (est.value, est.method)
    };

    let v0 = default_start(cone)?;
    let c0 = v0.dot(xbar);
    let r0 = a.quadratic_form(&v0)?;

    let consts = constants(nu, norm_k)?;
    let (c_minus1, c_1) = match consts {
        Some((cm, c1)) => (Some(cm), Some(c1)),
        None => (None, None),
    };
    let single_start_bound = match (c_1, c0 > 0.0) {
        (Some(c1), true) => Some(single_start_error_bound(nu, norm_k, norm_tangent, c0, c1)),
        _ => None,
    };

    let cap = if r0 > 0.0 {
        iteration_cap(lambda, norm_k, r0, delta)?
    } else {
        0
    };

    let (double_start_b1, double_start_b2) = if r0 > 0.0 {
        let cfg = IterConfig {
            delta,
            v0: Some(v0.clone()),
            ..Default::default()
        };
        match cone_power_iteration(a, cone, &cfg) {
            Ok(run) => {
                let vplus_err = loss(&run.v, xbar)?;
                let (b1, b2) = double_start_error_bounds(lambda, nu, norm_k, norm_tangent, vplus_err);
                (Some(b1), Some(b2))
            }
            Err(Error::InvalidStart(_)) => (None, None),
            Err(err) => return Err(err),
        }
    } else {
        (None, None)
    };

    let (noise_rate, width) = match n {
        Some(n) => {
            let mut rng = crate::rng::stream_rng(seed, 3);
            let w = gauss_width_mc(cone, mc_trials.max(2), &mut rng)?;
            (Some(expected_noise_rate(nu, w.value, n)), Some(w))
        }
        None => (None, None),
    };

    Ok(BoundReport {
        lambda,
        mu,
        nu,
        norm_k,
        norm_k_method,
        norm_tangent,
        norm_tangent_method,
        c0,
        delta,
        c_minus1,
        c_1,
        iteration_cap: cap,
        idealized_bound_pos: idealized_error_bound(nu, norm_k, norm_tangent, SignCase::Positive),
        idealized_bound_neg: idealized_error_bound(nu, norm_k, norm_tangent, SignCase::Negative),
        single_start_error_bound: single_start_bound,
        double_start_b1,
        double_start_b2,
        expected_noise_rate: noise_rate,
        width,
    })
}
