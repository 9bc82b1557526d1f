use serde::{Deserialize, Serialize};

use super::linalg::{affine_dim, directions, rank};
use super::points::PointSet;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PyramidCertificate {
    /// Index of the apex in the point list.
    pub apex: usize,
    pub base: Vec<usize>,
}

/// First point (by index) outside the affine hull of all the others.
pub fn is_pyramid(s: &PointSet) -> Option<PyramidCertificate> {
    (0..s.len()).find_map(|v| pyramid_with_apex(s, v))
}

/// Certificate with apex `v` when `v` is outside the affine hull of the rest.
pub fn pyramid_with_apex(s: &PointSet, v: usize) -> Option<PyramidCertificate> {
    let pts = s.points();
    if pts.len() < 2 || v >= pts.len() {
        return None;
    }
    let d = affine_dim(pts)?;
    let base: Vec<usize> = (0..pts.len()).filter(|&i| i != v).collect();
    let rest: Vec<Vec<i64>> = base.iter().map(|&i| pts[i].clone()).collect();
    (d >= 1 && affine_dim(&rest) == Some(d - 1)).then_some(PyramidCertificate { apex: v, base })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCertificate {
    /// Coordinates of the first factor; the factor with the larger dimension.
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub factors: (PointSet, PointSet),
    pub dims: (usize, usize),
}

/// Searches coordinate bipartitions `(I, J)` with `S = proj_I(S) × proj_J(S)`
/// and `d > d₁ >= d₂ >= 1`, where `d₁ + d₂ = d` holds for every product.
pub fn is_decomposable(s: &PointSet) -> Option<DecompositionCertificate> {
    let n = s.dim();
    if n < 2 || s.is_empty() || n > 24 {
        return None;
    }
    let d = affine_dim(s.points())?;
    // coordinate 0 always goes to the first part so each split is seen once
    for mask in 0u32..(1 << (n - 1)) {
        let second: Vec<usize> = (1..n).filter(|&c| mask >> (c - 1) & 1 == 1).collect();
        if second.is_empty() {
            continue;
        }
        let first: Vec<usize> = (0..n).filter(|c| !second.contains(c)).collect();
        let a = s.project(&first);
        let b = s.project(&second);
        if a.len() * b.len() != s.len() {
            continue;
        }
        let (da, db) = (affine_dim(a.points()).unwrap(), affine_dim(b.points()).unwrap());
        debug_assert_eq!(da + db, d);
        if da == 0 || db == 0 {
            continue;
        }
        return Some(if da >= db {
            DecompositionCertificate { first, second, factors: (a, b), dims: (da, db) }
        } else {
            DecompositionCertificate { first: second, second: first, factors: (b, a), dims: (db, da) }
        });
    }
    None
}

/// Integer affine map `x ↦ M x + t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: Vec<Vec<i64>>,
    pub shift: Vec<i64>,
}

impl AffineMap {
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect(),
            shift: vec![0; n],
        }
    }

    pub fn apply(&self, p: &[i64]) -> Result<Vec<i64>> {
        self.matrix
            .iter()
            .zip(&self.shift)
            .map(|(row, &t)| {
                row.iter()
                    .zip(p)
                    .try_fold(t, |acc, (&m, &x)| acc.checked_add(m.checked_mul(x)?))
                    .ok_or(Error::Overflow("affine map"))
            })
            .collect()
    }
}

/// Image of `s` under `a`, which must be injective on the affine hull of `s`
/// (so it is an affine bijection onto the image's hull).
pub fn affine_reencode(s: &PointSet, a: &AffineMap) -> Result<PointSet> {
    if a.matrix.len() != a.shift.len() || a.matrix.iter().any(|r| r.len() != s.dim()) {
        return Err(Error::Invalid(format!(
            "map shape {}x{} does not fit points of dimension {}",
            a.matrix.len(),
            a.matrix.first().map_or(0, |r| r.len()),
            s.dim()
        )));
    }
    let image: Vec<Vec<i64>> = s.points().iter().map(|p| a.apply(p)).collect::<Result<_>>()?;
    let dirs = directions(s.points());
    let mapped: Vec<Vec<Rational>> = dirs
        .iter()
        .map(|v| {
            a.matrix
                .iter()
                .map(|row| row.iter().zip(v).map(|(&m, x)| Rational::from_integer(m.into()) * x).sum())
                .collect()
        })
        .collect();
    if rank(&mapped) != rank(&dirs) {
        return Err(Error::Precondition("affine map is not injective on the affine hull of the set".into()));
    }
    let out = PointSet::new(a.matrix.len(), image)
        .map_err(|_| Error::Precondition("affine map is not injective on the set".into()))?;
    debug_assert_eq!(is_pyramid(s).is_some(), is_pyramid(&out).is_some());
    Ok(out)
}
