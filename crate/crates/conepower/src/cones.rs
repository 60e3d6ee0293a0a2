//! Convex cones with exact Euclidean projections.
//!
//! Four cone families are supported: the monotone cone (nondecreasing
//! coordinates, projected by pool-adjacent-violators in linear time), the
//! non-negative orthant (clipping), coordinate subspaces (masking) and the
//! full space (identity). Every projection comes back as a [`Projection`]
//! carrying both the projected point and the residual, which lands in the
//! polar cone; the two reconstruct the input and are orthogonal.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use ndarray::Array1;

use crate::error::{Error, Result};

/// Euclidean projection together with its polar-cone residual.
#[derive(Debug, Clone)]
pub struct Projection {
    /// `Π_K z`.
    pub point: Array1<f64>,
    /// `z − Π_K z`, the projection of `z` onto the polar cone `K°`.
    pub residual: Array1<f64>,
}

/// Anything with an exact Euclidean projection onto a closed convex cone.
/// Implemented by [`Cone`] and by the tangent-cone projectors in the
/// analysis module.
pub trait Project {
    fn ambient_dim(&self) -> usize;
    fn project_point(&self, z: &Array1<f64>) -> Array1<f64>;
}

/// A convex cone in `ℝᵖ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cone {
    /// `{x : x₁ ≤ x₂ ≤ ... ≤ x_p}`. A nonincreasing variant is obtained by
    /// reversing coordinates, not by a separate kind.
    Monotone { p: usize },
    /// `{x : xᵢ ≥ 0}`.
    NonNegOrthant { p: usize },
    /// `{x : xⱼ = 0 for j ∉ dims}`, `dims` stored 0-based.
    CoordSubspace { p: usize, dims: BTreeSet<usize> },
    /// All of `ℝᵖ`.
    FullSpace { p: usize },
}

/// Relative threshold below which a projected vector counts as zero; the
/// iteration cannot renormalize past this point and must stop instead.
pub const ZERO_PROJECTION_REL_TOL: f64 = 1e-14;

/// Default absolute slack for membership checks; projections accumulate at
/// most O(p) rounding in doubles.
pub const MEMBER_TOL_DEFAULT: f64 = 1e-9;

impl Cone {
    pub fn monotone(p: usize) -> Self {
        Cone::Monotone { p }
    }

    pub fn nonneg_orthant(p: usize) -> Self {
        Cone::NonNegOrthant { p }
    }

    /// Coordinate subspace keeping the 0-based coordinates in `dims`.
    pub fn coord_subspace(p: usize, dims: impl IntoIterator<Item = usize>) -> Result<Self> {
        let dims: BTreeSet<usize> = dims.into_iter().collect();
        if dims.is_empty() {
            return Err(Error::InvalidParameter(
                "subspace needs at least one coordinate".into(),
            ));
        }
        if let Some(&max) = dims.iter().next_back() {
            if max >= p {
                return Err(Error::IndexOutOfRange {
                    index: max,
                    limit: p,
                });
            }
        }
        Ok(Cone::CoordSubspace { p, dims })
    }

    pub fn full_space(p: usize) -> Self {
        Cone::FullSpace { p }
    }

    pub fn dim(&self) -> usize {
        match self {
            Cone::Monotone { p }
            | Cone::NonNegOrthant { p }
            | Cone::CoordSubspace { p, .. }
            | Cone::FullSpace { p } => *p,
        }
    }

    /// Exact Euclidean projection of `z`.
    pub fn project(&self, z: &Array1<f64>) -> Result<Projection> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: z.len(),
            });
        }
        let point = match self {
            Cone::Monotone { .. } => {
                let fitted = isotonic_nondecreasing(z.as_slice().expect("contiguous"));
                Array1::from_vec(fitted)
            }
            Cone::NonNegOrthant { .. } => z.mapv(|x| x.max(0.0)),
            Cone::CoordSubspace { dims, .. } => {
                let mut out = z.clone();
                for (j, val) in out.iter_mut().enumerate() {
                    if !dims.contains(&j) {
                        *val = 0.0;
                    }
                }
                out
            }
            Cone::FullSpace { .. } => z.clone(),
        };
        let residual = z - &point;
        Ok(Projection { point, residual })
    }

    /// True iff every cone constraint holds within absolute slack `tol`.
    pub fn member(&self, v: &Array1<f64>, tol: f64) -> bool {
        if v.len() != self.dim() {
            return false;
        }
        match self {
            Cone::Monotone { .. } => v.windows(2).into_iter().all(|w| w[1] - w[0] >= -tol),
            Cone::NonNegOrthant { .. } => v.iter().all(|&x| x >= -tol),
            Cone::CoordSubspace { dims, .. } => v
                .iter()
                .enumerate()
                .all(|(j, &x)| dims.contains(&j) || x.abs() <= tol),
            Cone::FullSpace { .. } => true,
        }
    }

    /// True iff `Π_K z` is numerically zero relative to `z`, i.e. the power
    /// step `Π_K A v` has collapsed and cannot be normalized.
    pub fn projects_to_zero(&self, z: &Array1<f64>) -> Result<bool> {
        let proj = self.project(z)?;
        let zn = crate::linalg::norm(z);
        Ok(crate::linalg::norm(&proj.point) <= ZERO_PROJECTION_REL_TOL * zn.max(1.0))
    }
}

impl Project for Cone {
    fn ambient_dim(&self) -> usize {
        self.dim()
    }

    fn project_point(&self, z: &Array1<f64>) -> Array1<f64> {
        self.project(z).expect("dimension checked by caller").point
    }
}

/// Isotonic (monotone nondecreasing) least-squares fit by pool adjacent
/// violators, O(p). Ties are left as separate blocks; the projection is the
/// same either way.
pub fn isotonic_nondecreasing(z: &[f64]) -> Vec<f64> {
    let n = z.len();
    // Merged blocks as (sum, count); a block's value is sum/count.
    let mut sums: Vec<f64> = Vec::with_capacity(n);
    let mut counts: Vec<usize> = Vec::with_capacity(n);
    for &x in z {
        sums.push(x);
        counts.push(1);
        while sums.len() >= 2 {
            let last = sums.len() - 1;
            let prev_mean = sums[last - 1] / counts[last - 1] as f64;
            let last_mean = sums[last] / counts[last] as f64;
            if prev_mean > last_mean {
                let s = sums.pop().unwrap();
                let c = counts.pop().unwrap();
                sums[last - 1] += s;
                counts[last - 1] += c;
            } else {
                break;
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for (s, c) in sums.iter().zip(counts.iter()) {
        let mean = s / *c as f64;
        out.extend(std::iter::repeat_n(mean, *c));
    }
    out
}

/// Cone family named without an ambient dimension, as written on a command
/// line: `monotone`, `nonneg`, `subspace:1,2,5` (1-based coordinates) or
/// `full`. Instantiate with [`ConeSpec::build`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConeSpec {
    Monotone,
    NonNegOrthant,
    /// 1-based coordinate list as parsed.
    CoordSubspace(Vec<usize>),
    FullSpace,
}

impl ConeSpec {
    pub fn build(&self, p: usize) -> Result<Cone> {
        match self {
            ConeSpec::Monotone => Ok(Cone::monotone(p)),
            ConeSpec::NonNegOrthant => Ok(Cone::nonneg_orthant(p)),
            ConeSpec::CoordSubspace(dims) => {
                for &d in dims {
                    if d == 0 || d > p {
                        return Err(Error::IndexOutOfRange { index: d, limit: p });
                    }
                }
                Cone::coord_subspace(p, dims.iter().map(|d| d - 1))
            }
            ConeSpec::FullSpace => Ok(Cone::full_space(p)),
        }
    }
}

impl FromStr for ConeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monotone" => Ok(ConeSpec::Monotone),
            "nonneg" => Ok(ConeSpec::NonNegOrthant),
            "full" => Ok(ConeSpec::FullSpace),
            other => {
                if let Some(list) = other.strip_prefix("subspace:") {
                    let dims = list
                        .split(',')
                        .map(|tok| {
                            tok.trim().parse::<usize>().map_err(|_| {
                                Error::InvalidParameter(format!("bad subspace coordinate {tok:?}"))
                            })
                        })
                        .collect::<Result<Vec<usize>>>()?;
                    if dims.is_empty() {
                        return Err(Error::InvalidParameter(
                            "empty subspace coordinate list".into(),
                        ));
                    }
                    Ok(ConeSpec::CoordSubspace(dims))
                } else {
                    Err(Error::InvalidParameter(format!(
                        "unknown cone {other:?}; expected monotone, nonneg, subspace:i,j,..., or full"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for ConeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeSpec::Monotone => write!(f, "monotone"),
            ConeSpec::NonNegOrthant => write!(f, "nonneg"),
            ConeSpec::CoordSubspace(dims) => {
                let list: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
                write!(f, "subspace:{}", list.join(","))
            }
            ConeSpec::FullSpace => write!(f, "full"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn orthant_clips_negatives() {
        let cone = Cone::nonneg_orthant(3);
        let proj = cone.project(&array![1.0, -2.0, 3.0]).unwrap();
        assert_eq!(proj.point, array![1.0, 0.0, 3.0]);
        assert_eq!(proj.residual, array![0.0, -2.0, 0.0]);
    }

    #[test]
    fn monotone_pools_violators() {
        let cone = Cone::monotone(3);
        let proj = cone.project(&array![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(proj.point, array![2.0, 2.0, 2.0]);
    }

    #[test]
    fn monotone_keeps_sorted_input() {
        let cone = Cone::monotone(3);
        let proj = cone.project(&array![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(proj.point, array![1.0, 2.0, 3.0]);
    }

    #[test]
    fn full_space_is_identity() {
        let cone = Cone::full_space(4);
        let z = array![0.5, -1.5, 2.0, 0.0];
        let proj = cone.project(&z).unwrap();
        assert_eq!(proj.point, z);
        assert!(proj.residual.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn subspace_zeroes_excluded() {
        let cone = Cone::coord_subspace(4, [0, 2]).unwrap();
        let proj = cone.project(&array![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(proj.point, array![1.0, 0.0, 3.0, 0.0]);
    }

    #[test]
    fn membership_cases() {
        let m = Cone::monotone(3);
        assert!(m.member(&array![0.0, 0.0, 1.0], 0.0));
        assert!(!m.member(&array![1.0, 0.0, 2.0], 1e-9));
        let o = Cone::nonneg_orthant(2);
        assert!(o.member(&array![-1e-12, 1.0], 1e-9));
    }

    #[test]
    fn zero_projection_detection() {
        let o = Cone::nonneg_orthant(2);
        assert!(o.projects_to_zero(&array![-1.0, -1.0]).unwrap());
        assert!(!o.projects_to_zero(&array![1.0, -1.0]).unwrap());
        let m = Cone::monotone(2);
        assert!(m.projects_to_zero(&array![1.0, -1.0]).unwrap());
    }

    #[test]
    fn projection_dimension_mismatch() {
        let cone = Cone::monotone(3);
        assert!(cone.project(&array![1.0, 2.0]).is_err());
    }

    #[test]
    fn subspace_validation() {
        assert!(Cone::coord_subspace(3, []).is_err());
        assert!(Cone::coord_subspace(3, [3]).is_err());
        assert!(Cone::coord_subspace(3, [0, 2]).is_ok());
    }

    #[test]
    fn cone_spec_round_trip() {
        for s in ["monotone", "nonneg", "subspace:1,2,5", "full"] {
            let spec: ConeSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("icecream".parse::<ConeSpec>().is_err());
        assert!("subspace:".parse::<ConeSpec>().is_err());
        assert!("subspace:0".parse::<ConeSpec>().unwrap().build(4).is_err());
        let cone = "subspace:1,3"
            .parse::<ConeSpec>()
            .unwrap()
            .build(4)
            .unwrap();
        assert!(cone.member(&array![1.0, 0.0, 2.0, 0.0], 0.0));
    }

    #[test]
    fn isotonic_handles_ties_and_extremes() {
        assert_eq!(
            isotonic_nondecreasing(&[1.0, 1.0, 1.0]),
            vec![1.0, 1.0, 1.0]
        );
        assert_eq!(isotonic_nondecreasing(&[2.0, 1.0]), vec![1.5, 1.5]);
        assert_eq!(isotonic_nondecreasing(&[]), Vec::<f64>::new());
        let dec: Vec<f64> = (0..10).rev().map(|i| i as f64).collect();
        let fit = isotonic_nondecreasing(&dec);
        assert!(fit.iter().all(|&x| (x - 4.5).abs() < 1e-12));
    }
}
