//! Polygon constructors, ratio recovery from vertex data, and classification
//! by Fourier support.
//!
//! A polygon is affinely regular exactly when its DFT support (ignoring the
//! translation term `z_0`) lies in `{t, n-t}` for some `t` coprime to `n`,
//! and regular when the support is the single index `t`.

use std::collections::BTreeSet;

use num_integer::gcd;
use serde::Serialize;
use thiserror::Error;

use crate::cyclotomic::{dft, fourier_vector, ComplexPolygon, C64};
use crate::error::{Error, Result};

pub const SUPPORT_TOL: f64 = 1e-9;
pub const DISTINCT_TOL: f64 = 1e-9;

/// `Σ z_t v_t` over the given `(t, z_t)` pairs; repeated indices add up.
pub fn make_combination(n: usize, coeffs: &[(i64, C64)]) -> Result<ComplexPolygon> {
    if n < 4 {
        return Err(Error::TooFewVertices(n));
    }
    let mut acc = vec![C64::new(0.0, 0.0); n];
    for &(t, z) in coeffs {
        let v = fourier_vector(n, t)?;
        for (a, b) in acc.iter_mut().zip(v.vertices()) {
            *a += z * b;
        }
    }
    ComplexPolygon::new(acc)
}

/// Translates vertex `j` by `shifts[j mod t0]`.
pub fn residue_translation(
    polygon: &ComplexPolygon,
    t0: usize,
    shifts: &[C64],
) -> Result<ComplexPolygon> {
    if shifts.len() != t0 || t0 == 0 {
        return Err(Error::LengthMismatch {
            expected: t0,
            got: shifts.len(),
        });
    }
    let vertices = polygon
        .vertices()
        .iter()
        .enumerate()
        .map(|(j, &p)| p + shifts[j % t0])
        .collect();
    ComplexPolygon::new(vertices)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RatioRecoveryFailure {
    #[error("degenerate differences: every p[j+k] - p[j] is below tolerance")]
    DegenerateDifferences,
    #[error("ratio {w} leaves residual {residual:e} on some equation")]
    Inconsistent { w: C64, residual: f64 },
}

/// Recovers `w` from the equation with the largest `|p[j+k] - p[j]|` and
/// accepts it only if all `n` equations hold within `tol · scale`, where
/// `scale = diameter · (1 + |w|)`.
pub fn recover_ratio(
    polygon: &ComplexPolygon,
    m1: i64,
    m2: i64,
    k: i64,
    tol: f64,
) -> std::result::Result<C64, RatioRecoveryFailure> {
    let n = polygon.n() as i64;
    let diameter = polygon.diameter();
    let (best_j, best_den) = (0..n)
        .map(|j| (j, polygon.vertex(j + k) - polygon.vertex(j)))
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("polygon has vertices");
    if best_den.norm() <= tol * diameter || diameter == 0.0 {
        return Err(RatioRecoveryFailure::DegenerateDifferences);
    }
    let w = (polygon.vertex(best_j + m1) - polygon.vertex(best_j + m2)) / best_den;
    let residual = crate::recurrence::recurrence_residual(polygon, m1, m2, k, w);
    if residual > tol * diameter * (1.0 + w.norm()) {
        return Err(RatioRecoveryFailure::Inconsistent { w, residual });
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PolygonLabel {
    Regular(usize),
    AffinelyRegular(usize),
    ConstantDegenerate,
    Other(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonClass {
    pub label: PolygonLabel,
    /// Nonzero DFT indices, translation term excluded.
    pub support: Vec<usize>,
}

pub fn classify_polygon(polygon: &ComplexPolygon) -> PolygonClass {
    classify_polygon_with(polygon, SUPPORT_TOL)
}

pub fn classify_polygon_with(polygon: &ComplexPolygon, tol: f64) -> PolygonClass {
    let n = polygon.n();
    let z = dft(polygon);
    let overall = z.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let shape = z[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    if shape <= tol * overall || shape == 0.0 {
        return PolygonClass {
            label: PolygonLabel::ConstantDegenerate,
            support: Vec::new(),
        };
    }
    let support: Vec<usize> = (1..n).filter(|&t| z[t].norm() > tol * shape).collect();
    let label = match *support.as_slice() {
        [t] if gcd(t, n) == 1 => PolygonLabel::Regular(t),
        [t, s] if t + s == n && gcd(t, n) == 1 => PolygonLabel::AffinelyRegular(t),
        _ => PolygonLabel::Other(support.clone()),
    };
    PolygonClass { label, support }
}

/// Supports with exactly one or two mirrored coprime indices are the ones
/// invariant under real-affine maps.
pub fn is_affinely_regular_support(n: usize, support: &[usize]) -> bool {
    let set: BTreeSet<usize> = support.iter().copied().collect();
    match set.iter().next() {
        Some(&t) if gcd(t, n) == 1 => set.iter().all(|&s| s == t || s == n - t),
        _ => false,
    }
}
