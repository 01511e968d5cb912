//! Polytopes whose vertices are cycled by one isometry.
//!
//! The canonical family `Q(k_1, …, k_s)` places vertex `q_m` at
//! `√(2/d)·(cos 2k_1mπ/n, sin 2k_1mπ/n, …, cos 2k_smπ/n, sin 2k_smπ/n)`, and
//! for odd `d` appends the coordinate `√(1/d)·(−1)^m`. This is the isotropic
//! normalization, `Σ q_m q_mᵀ = (n/d)·Id`, so the Gram matrix of
//! `√(d/n)·q_m` is an orthogonal projector. For even `d` it is the familiar
//! `1/√s` scale; the uniform `1/√(s+1)` scale for odd `d` is available as
//! [`build_q_as_printed`] and is not isotropic.
//!
//! The checks here test the three equivalent characterizations of such
//! polytopes on arbitrary input: equal distance profiles, a cyclic isometry,
//! and similarity to some `Q`. Every check first centers the vertices at
//! their centroid and scales by the mean circumradius; tolerances are
//! absolute at that unit scale.
//!
//! Odd `d` needs even `n`, otherwise `(−1)^m` is not well-defined mod `n`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::cyclotomic::{circulant_spectrum, C64};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

const RANK_TOL: f64 = 1e-9;
// eigenvalues of an orthogonal map closer than this to the real axis count as ±1
const REAL_EIGEN_TOL: f64 = 1e-6;
// n·θ/2π must land this close to an integer
const FREQUENCY_ROUNDING_TOL: f64 = 1e-6;

/// An ordered list of `n` points in `ℝ^d` with a `d`-dimensional affine hull.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeVertices {
    d: usize,
    vertices: Vec<DVector<f64>>,
}

impl PolytopeVertices {
    pub fn new(d: usize, vertices: Vec<DVector<f64>>) -> Result<Self> {
        let n = vertices.len();
        if d < 2 {
            return Err(Error::InvalidPolytope(format!(
                "dimension must be at least 2, got {d}"
            )));
        }
        if n < 5 || n <= d {
            return Err(Error::InvalidPolytope(format!(
                "need n >= 5 and n > d, got n = {n}, d = {d}"
            )));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != d) {
            return Err(Error::InvalidPolytope(format!(
                "vertex of length {} in dimension {d}",
                v.len()
            )));
        }
        let polytope = Self { d, vertices };
        let rank = polytope.affine_rank();
        if rank != d {
            return Err(Error::InvalidPolytope(format!(
                "affine hull has dimension {rank}, expected {d}"
            )));
        }
        Ok(polytope)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    /// Vertex `j` with the index taken mod `n`.
    pub fn vertex(&self, j: i64) -> &DVector<f64> {
        &self.vertices[j.rem_euclid(self.n() as i64) as usize]
    }

    pub fn centroid(&self) -> DVector<f64> {
        let mut c = DVector::zeros(self.d);
        for v in &self.vertices {
            c += v;
        }
        c / self.n() as f64
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0_f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max((a - b).norm());
            }
        }
        best
    }

    /// Applies `x ↦ s·Rx + t` to every vertex.
    pub fn transformed(
        &self,
        rotation: &DMatrix<f64>,
        scale: f64,
        translation: &DVector<f64>,
    ) -> Result<Self> {
        Self::new(
            self.d,
            self.vertices
                .iter()
                .map(|v| scale * (rotation * v) + translation)
                .collect(),
        )
    }

    fn affine_rank(&self) -> usize {
        let centered = self.centered_matrix();
        let sv = centered.singular_values();
        let top = sv.max();
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > RANK_TOL * top).count()
    }

    fn centered_matrix(&self) -> DMatrix<f64> {
        let c = self.centroid();
        DMatrix::from_columns(&self.vertices.iter().map(|v| v - &c).collect::<Vec<_>>())
    }
}

/// Centered vertices scaled to mean circumradius 1.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub points: Vec<DVector<f64>>,
    pub centroid: DVector<f64>,
    pub radius: f64,
    /// `max_j | |p_j − c| / radius − 1 |`
    pub sphere_deviation: f64,
}

pub fn normalize(polytope: &PolytopeVertices) -> Normalized {
    let centroid = polytope.centroid();
    let centered: Vec<DVector<f64>> = polytope.vertices().iter().map(|v| v - &centroid).collect();
    let radius = centered.iter().map(|v| v.norm()).sum::<f64>() / centered.len() as f64;
    let points: Vec<DVector<f64>> = centered.into_iter().map(|v| v / radius).collect();
    let sphere_deviation = points
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    Normalized {
        points,
        centroid,
        radius,
        sphere_deviation,
    }
}

/// Integers `0 < k_1 < … < k_s < n/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySet {
    ks: Vec<usize>,
}

impl FrequencySet {
    pub fn new(ks: Vec<usize>, n: usize) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::InvalidFrequencies("empty set".into()));
        }
        if ks[0] == 0 {
            return Err(Error::InvalidFrequencies(
                "frequencies must be positive".into(),
            ));
        }
        if !ks.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidFrequencies(format!(
                "{ks:?} is not strictly increasing"
            )));
        }
        let top = *ks.last().unwrap();
        if 2 * top >= n {
            return Err(Error::InvalidFrequencies(format!(
                "{top} is not below n/2 = {}",
                n as f64 / 2.0
            )));
        }
        Ok(Self { ks })
    }

    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }
}

/// The vertices `q_0, …, q_{n−1}` of `Q(k_1, …, k_s)` in `ℝ^d`, all on the
/// unit sphere.
pub fn build_q(n: usize, d: usize, ks: &FrequencySet) -> Result<PolytopeVertices> {
    build(n, d, ks, QScale::Isotropic)
}

/// Odd `d` variant with every coordinate scaled by `1/√(s+1)`. Same as
/// [`build_q`] for even `d`.
pub fn build_q_as_printed(n: usize, d: usize, ks: &FrequencySet) -> Result<PolytopeVertices> {
    build(n, d, ks, QScale::Uniform)
}

#[derive(Clone, Copy)]
enum QScale {
    Isotropic,
    Uniform,
}

fn build(n: usize, d: usize, ks: &FrequencySet, scaling: QScale) -> Result<PolytopeVertices> {
    if d < 2 || n <= d || n < 5 {
        return Err(Error::InvalidPolytope(format!(
            "need d >= 2, n > d and n >= 5, got n = {n}, d = {d}"
        )));
    }
    let s = d / 2;
    if ks.len() != s {
        return Err(Error::InvalidFrequencies(format!(
            "dimension {d} needs {s} frequencies, got {}",
            ks.len()
        )));
    }
    if 2 * ks.ks().last().unwrap() >= n {
        return Err(Error::InvalidFrequencies(format!(
            "{:?} exceeds n/2 for n = {n}",
            ks.ks()
        )));
    }
    let odd = d % 2 == 1;
    if odd && n % 2 == 1 {
        return Err(Error::InvalidPolytope(format!(
            "odd dimension {d} needs an even vertex count, got {n}"
        )));
    }
    let (scale, last) = match scaling {
        QScale::Isotropic => (1.0 / (d as f64 / 2.0).sqrt(), 1.0 / (d as f64).sqrt()),
        QScale::Uniform => {
            let u = 1.0 / ((s + usize::from(odd)) as f64).sqrt();
            (u, u)
        }
    };
    let vertices = (0..n)
        .map(|m| {
            let mut q = DVector::zeros(d);
            for (i, &k) in ks.ks().iter().enumerate() {
                // reduce before scaling the angle
                let angle = 2.0 * PI * ((k * m) % n) as f64 / n as f64;
                q[2 * i] = scale * angle.cos();
                q[2 * i + 1] = scale * angle.sin();
            }
            if odd {
                q[d - 1] = if m % 2 == 0 { last } else { -last };
            }
            q
        })
        .collect();
    PolytopeVertices::new(d, vertices)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceRow {
    pub k: usize,
    pub mean: f64,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    pub rows: Vec<DistanceRow>,
    pub max_spread: f64,
    pub invariant: bool,
}

/// For each `k ∈ [1, ⌊n/2⌋]`, the mean of `|p_{j+k} − p_j|` over `j` and its
/// largest deviation. Invariant when every deviation is within
/// `tol · diameter`.
pub fn distance_profile(polytope: &PolytopeVertices, tol: f64) -> DistanceProfile {
    let n = polytope.n();
    let rows: Vec<DistanceRow> = (1..=n / 2)
        .map(|k| {
            let dists: Vec<f64> = (0..n)
                .map(|j| (polytope.vertex((j + k) as i64) - &polytope.vertices()[j]).norm())
                .collect();
            let mean = dists.iter().sum::<f64>() / n as f64;
            let max_deviation = dists.iter().map(|x| (x - mean).abs()).fold(0.0, f64::max);
            DistanceRow {
                k,
                mean,
                max_deviation,
            }
        })
        .collect();
    let max_spread = rows.iter().map(|r| r.max_deviation).fold(0.0, f64::max);
    DistanceProfile {
        invariant: max_spread <= tol * polytope.diameter(),
        rows,
        max_spread,
    }
}

/// An isometry `x ↦ Rx + t` with `φ(p_j) = p_{j+1}` for every `j`.
#[derive(Debug, Clone)]
pub struct CyclicIsometry {
    pub rotation: DMatrix<f64>,
    pub translation: DVector<f64>,
    /// Angles in `(0, π)` of the planar rotation blocks, ascending.
    pub block_angles: Vec<f64>,
    pub has_reflection_block: bool,
    /// Count of eigenvalues at `+1` and extra eigenvalues at `−1` beyond
    /// the single reflection block; zero for a polytope of the canonical
    /// form.
    pub irregular_real_eigenvalues: usize,
    /// `max_j |φ(p_j) − p_{j+1}|` at unit circumradius.
    pub residual: f64,
    pub orthogonality_defect: f64,
}

impl CyclicIsometry {
    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.rotation * x + &self.translation
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IsometryRejection {
    #[error("no {d} linearly independent centered vertices")]
    DegenerateFrame { d: usize },
    #[error("fitted map is not orthogonal (defect {defect:e})")]
    NotOrthogonal { defect: f64 },
    #[error("vertex {j} misses its image by {residual:e}")]
    VertexMismatch { j: usize, residual: f64 },
}

/// Greedy pivoted Gram-Schmidt: picks `d` indices whose vectors are as far
/// from each other's span as possible.
fn well_conditioned_frame(points: &[DVector<f64>], d: usize) -> Option<Vec<usize>> {
    let mut residuals: Vec<DVector<f64>> = points.to_vec();
    let mut chosen = Vec::with_capacity(d);
    for _ in 0..d {
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .filter(|(i, _)| !chosen.contains(i))
            .map(|(i, r)| (i, r.norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1))?;
        if norm <= RANK_TOL {
            return None;
        }
        let e = &residuals[best] / norm;
        for r in residuals.iter_mut() {
            let c = r.dot(&e);
            *r -= c * &e;
        }
        chosen.push(best);
    }
    Some(chosen)
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Fits the linear map sending a frame of centered vertices to their
/// successors, then checks it is orthogonal and moves every vertex to the
/// next one. A non-orthogonal fit is rejected rather than repaired.
pub fn cyclic_isometry(
    polytope: &PolytopeVertices,
    tol: f64,
) -> Result<CyclicIsometry, IsometryRejection> {
    let d = polytope.d();
    let n = polytope.n();
    let norm = normalize(polytope);
    let u = &norm.points;
    let frame = well_conditioned_frame(u, d).ok_or(IsometryRejection::DegenerateFrame { d })?;
    let src = DMatrix::from_columns(&frame.iter().map(|&j| u[j].clone()).collect::<Vec<_>>());
    let dst = DMatrix::from_columns(
        &frame
            .iter()
            .map(|&j| u[(j + 1) % n].clone())
            .collect::<Vec<_>>(),
    );
    let inv = src
        .try_inverse()
        .ok_or(IsometryRejection::DegenerateFrame { d })?;
    let rotation = dst * inv;

    let defect = max_abs(&(rotation.transpose() * &rotation - DMatrix::identity(d, d)));
    if defect > tol {
        return Err(IsometryRejection::NotOrthogonal { defect });
    }
    let mut residual = 0.0_f64;
    for j in 0..n {
        let r = (&rotation * &u[j] - &u[(j + 1) % n]).norm();
        if r > tol {
            return Err(IsometryRejection::VertexMismatch { j, residual: r });
        }
        residual = residual.max(r);
    }

    let mut block_angles = Vec::new();
    let mut minus_ones = 0;
    let mut plus_ones = 0;
    for ev in rotation.complex_eigenvalues().iter() {
        if ev.im > REAL_EIGEN_TOL {
            block_angles.push(ev.im.atan2(ev.re));
        } else if ev.im.abs() <= REAL_EIGEN_TOL {
            if ev.re < 0.0 {
                minus_ones += 1;
            } else {
                plus_ones += 1;
            }
        }
    }
    block_angles.sort_by(f64::total_cmp);
    let has_reflection_block = minus_ones % 2 == 1;
    let irregular_real_eigenvalues = plus_ones + minus_ones - usize::from(has_reflection_block);

    let translation = &norm.centroid - &rotation * &norm.centroid;
    Ok(CyclicIsometry {
        rotation,
        translation,
        block_angles,
        has_reflection_block,
        irregular_real_eigenvalues,
        residual,
        orthogonality_defect: defect,
    })
}

/// Diagnostics of `G_{jk} = ⟨p̄_j, p̄_k⟩` with `p̄ = √(d/n)·(p − c)/r`.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub gram: DMatrix<f64>,
    pub sphere_deviation: f64,
    pub on_sphere: bool,
    pub circulant_deviation: f64,
    pub is_circulant: bool,
    /// `max |(G² − G)_{jk}|`
    pub idempotency_residual: f64,
    pub trace: f64,
    /// Symmetric eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    pub near_zero: usize,
    pub near_one: usize,
    /// `μ_t = Σ_j G_{0j} ε^{jt}`, the eigenvalues read off the first row.
    pub mu: Vec<f64>,
    pub mu0_is_zero: bool,
    pub is_projector: bool,
}

impl GramReport {
    pub fn mu_half(&self) -> Option<f64> {
        let n = self.mu.len();
        n.is_multiple_of(2).then(|| self.mu[n / 2])
    }
}

pub fn gram_report(polytope: &PolytopeVertices, tol: f64) -> GramReport {
    let n = polytope.n();
    let d = polytope.d();
    let norm = normalize(polytope);
    let scale = (d as f64 / n as f64).sqrt();
    let pbar = DMatrix::from_columns(&norm.points.iter().map(|v| v * scale).collect::<Vec<_>>());
    let gram = pbar.transpose() * &pbar;

    let mut circulant_deviation = 0.0_f64;
    for j in 0..n {
        for k in 0..n {
            let expected = gram[(0, (k + n - j) % n)];
            circulant_deviation = circulant_deviation.max((gram[(j, k)] - expected).abs());
        }
    }
    let idempotency_residual = max_abs(&(&gram * &gram - &gram));
    let trace = gram.trace();
    let mut eigenvalues: Vec<f64> = gram
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    eigenvalues.sort_by(f64::total_cmp);
    let near_zero = eigenvalues.iter().filter(|e| e.abs() <= tol).count();
    let near_one = eigenvalues
        .iter()
        .filter(|e| (*e - 1.0).abs() <= tol)
        .count();

    let row: Vec<C64> = (0..n).map(|j| C64::new(gram[(0, j)], 0.0)).collect();
    let mu: Vec<f64> = circulant_spectrum(&row)
        .expect("n >= 5")
        .values()
        .iter()
        .map(|z| z.re)
        .collect();
    let mu0_is_zero = mu[0].abs() <= tol;
    let on_sphere = norm.sphere_deviation <= tol;
    let is_circulant = circulant_deviation <= tol;
    let is_projector = idempotency_residual <= tol && near_one == d && near_zero == n - d;

    GramReport {
        gram,
        sphere_deviation: norm.sphere_deviation,
        on_sphere,
        circulant_deviation,
        is_circulant,
        idempotency_residual,
        trace,
        eigenvalues,
        near_zero,
        near_one,
        mu,
        mu0_is_zero,
        is_projector,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JohnCondition {
    pub lambda: f64,
    /// `|Σ λ p_k|`
    pub residual_sum: f64,
    /// Frobenius norm of `Σ λ p_k p_kᵀ − Id`
    pub residual_identity: f64,
    pub holds: bool,
}

/// Checks the John conditions with uniform weights `λ = d/n` on the raw
/// vertices, which must already be centered on the unit sphere.
pub fn john_condition(polytope: &PolytopeVertices, tol: f64) -> JohnCondition {
    let d = polytope.d();
    let lambda = d as f64 / polytope.n() as f64;
    let mut sum = DVector::zeros(d);
    let mut moment = DMatrix::zeros(d, d);
    for p in polytope.vertices() {
        sum += lambda * p;
        moment += lambda * p * p.transpose();
    }
    let residual_sum = sum.norm();
    let residual_identity = (moment - DMatrix::identity(d, d)).norm();
    JohnCondition {
        lambda,
        residual_sum,
        residual_identity,
        holds: residual_sum < tol && residual_identity < tol,
    }
}

/// A similarity `p_j = scale · M q_j + c` onto a canonical `Q`.
#[derive(Debug, Clone)]
pub struct FrequencyRecovery {
    pub ks: FrequencySet,
    pub orthogonal: DMatrix<f64>,
    pub scale: f64,
    pub translation: DVector<f64>,
    /// `max_j |M q_j − (p_j − c)/scale|`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecoveryFailure {
    #[error("no cyclic isometry: {0}")]
    NoIsometry(IsometryRejection),
    #[error("isometry has {0} unexpected real eigenvalues")]
    BlockStructure(usize),
    #[error("block angle {theta} is not a multiple of 2π/n")]
    NonIntegerAngle { theta: f64 },
    #[error("{0}")]
    InvalidFrequencies(String),
    #[error("not similar to the canonical polytope (defect {defect:e})")]
    NotSimilar { defect: f64 },
    #[error("similarity misses a vertex by {residual:e}")]
    Residual { residual: f64 },
}

/// Reads the frequencies off the cyclic isometry, builds the matching `Q`,
/// and fits a similarity from `Q` onto the input on a frame before checking
/// every vertex.
pub fn recover_frequencies(
    polytope: &PolytopeVertices,
    tol: f64,
) -> Result<FrequencyRecovery, RecoveryFailure> {
    let n = polytope.n();
    let d = polytope.d();
    let iso = cyclic_isometry(polytope, tol).map_err(RecoveryFailure::NoIsometry)?;
    if iso.irregular_real_eigenvalues > 0 || iso.has_reflection_block != (d % 2 == 1) {
        return Err(RecoveryFailure::BlockStructure(
            iso.irregular_real_eigenvalues + usize::from(iso.has_reflection_block),
        ));
    }
    let mut ks = Vec::with_capacity(iso.block_angles.len());
    for &theta in &iso.block_angles {
        let x = n as f64 * theta / (2.0 * PI);
        if (x - x.round()).abs() > FREQUENCY_ROUNDING_TOL {
            return Err(RecoveryFailure::NonIntegerAngle { theta });
        }
        ks.push(x.round() as usize);
    }
    let ks =
        FrequencySet::new(ks, n).map_err(|e| RecoveryFailure::InvalidFrequencies(e.to_string()))?;
    let q = build_q(n, d, &ks).map_err(|e| RecoveryFailure::InvalidFrequencies(e.to_string()))?;

    let centroid = polytope.centroid();
    let centered: Vec<DVector<f64>> = polytope.vertices().iter().map(|v| v - &centroid).collect();
    let frame = well_conditioned_frame(q.vertices(), d).ok_or(RecoveryFailure::NoIsometry(
        IsometryRejection::DegenerateFrame { d },
    ))?;
    let src = DMatrix::from_columns(
        &frame
            .iter()
            .map(|&j| q.vertices()[j].clone())
            .collect::<Vec<_>>(),
    );
    let dst = DMatrix::from_columns(
        &frame
            .iter()
            .map(|&j| centered[j].clone())
            .collect::<Vec<_>>(),
    );
    let inv = src.try_inverse().ok_or(RecoveryFailure::NoIsometry(
        IsometryRejection::DegenerateFrame { d },
    ))?;
    let linear = dst * inv;

    let gram = linear.transpose() * &linear;
    let scale = (gram.trace() / d as f64).sqrt();
    let defect = max_abs(&(gram / (scale * scale) - DMatrix::identity(d, d)));
    if defect > tol {
        return Err(RecoveryFailure::NotSimilar { defect });
    }
    let orthogonal = linear / scale;
    let residual = q
        .vertices()
        .iter()
        .zip(&centered)
        .map(|(qj, pj)| (&orthogonal * qj - pj / scale).norm())
        .fold(0.0, f64::max);
    if residual > tol {
        return Err(RecoveryFailure::Residual { residual });
    }
    Ok(FrequencyRecovery {
        ks,
        orthogonal,
        scale,
        translation: centroid,
        residual,
    })
}

/// Two regular `k`-gons in the `(x_1, x_2)` and `(x_3, x_4)` planes,
/// visited alternately: `p_{2s} = q_s`, `p_{2s+1} = q'_s`.
pub fn interleaved_example(k: usize) -> Result<PolytopeVertices> {
    if k < 3 {
        return Err(Error::InvalidPolytope(format!(
            "interleaving needs k >= 3, got {k}"
        )));
    }
    let mut vertices = Vec::with_capacity(2 * k);
    for s in 0..k {
        let angle = 2.0 * PI * s as f64 / k as f64;
        let (sin, cos) = angle.sin_cos();
        vertices.push(DVector::from_vec(vec![cos, sin, 0.0, 0.0]));
        vertices.push(DVector::from_vec(vec![0.0, 0.0, cos, sin]));
    }
    PolytopeVertices::new(4, vertices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn fs(ks: &[usize], n: usize) -> FrequencySet {
        FrequencySet::new(ks.to_vec(), n).unwrap()
    }

    fn random_orthogonal(d: usize, rng: &mut StdRng) -> DMatrix<f64> {
        let a = DMatrix::from_fn(d, d, |_, _| rng.gen_range(-1.0..1.0));
        a.qr().q()
    }

    fn random_sphere_polytope(n: usize, d: usize, rng: &mut StdRng) -> PolytopeVertices {
        let vertices = (0..n)
            .map(|_| {
                let v = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
                v.normalize()
            })
            .collect();
        PolytopeVertices::new(d, vertices).unwrap()
    }

    const GRID: &[(usize, usize, &[usize])] = &[
        (5, 2, &[1]),
        (6, 2, &[1]),
        (7, 4, &[1, 2]),
        (9, 4, &[2, 4]),
        (8, 3, &[1]),
        (10, 5, &[2, 3]),
        (12, 6, &[1, 2, 5]),
        (11, 6, &[1, 3, 4]),
        (14, 7, &[2, 3, 6]),
    ];

    #[test]
    fn frequency_set_validation() {
        assert!(FrequencySet::new(vec![1, 2], 7).is_ok());
        assert!(FrequencySet::new(vec![2, 1], 7).is_err());
        assert!(FrequencySet::new(vec![1, 1], 7).is_err());
        assert!(FrequencySet::new(vec![0, 1], 7).is_err());
        assert!(FrequencySet::new(vec![1, 4], 8).is_err());
        assert!(FrequencySet::new(vec![], 8).is_err());
    }

    #[test]
    fn build_q_rejects_bad_parameters() {
        assert!(build_q(7, 4, &fs(&[1], 7)).is_err());
        assert!(build_q(9, 3, &fs(&[1], 9)).is_err());
        assert!(build_q(4, 2, &fs(&[1], 4)).is_err());
        assert!(build_q(5, 5, &fs(&[1, 2], 5)).is_err());
        assert!(build_q(6, 4, &fs(&[1, 3], 7)).is_err());
    }

    #[test]
    fn build_q_pentagon_is_regular() {
        let q = build_q(5, 2, &fs(&[1], 5)).unwrap();
        for (m, v) in q.vertices().iter().enumerate() {
            let a = 2.0 * PI * m as f64 / 5.0;
            assert!((v[0] - a.cos()).abs() < 1e-15 && (v[1] - a.sin()).abs() < 1e-15);
        }
    }

    #[test]
    fn build_q_odd_dimension_alternates() {
        let q = build_q(8, 3, &fs(&[1], 8)).unwrap();
        let printed = build_q_as_printed(8, 3, &fs(&[1], 8)).unwrap();
        for m in 0..8 {
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            assert!((q.vertices()[m][2] - sign / 3f64.sqrt()).abs() < 1e-15);
            assert!(
                (printed.vertices()[m][2] - sign * std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15
            );
            assert!((printed.vertices()[m].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn printed_odd_scaling_is_not_a_projector() {
        for (n, d, ks) in [(8, 3, vec![1]), (10, 5, vec![2, 3])] {
            let printed = build_q_as_printed(n, d, &fs(&ks, n)).unwrap();
            assert!(distance_profile(&printed, DEFAULT_TOL).invariant);
            assert!(cyclic_isometry(&printed, DEFAULT_TOL).is_ok());
            let g = gram_report(&printed, DEFAULT_TOL);
            assert!(g.idempotency_residual > 0.1, "{}", g.idempotency_residual);
            assert!(!john_condition(&printed, DEFAULT_TOL).holds);
        }
        let even = fs(&[1, 2], 7);
        assert_eq!(
            build_q_as_printed(7, 4, &even).unwrap(),
            build_q(7, 4, &even).unwrap()
        );
    }

    #[test]
    fn grid_vertices_on_unit_sphere_and_balanced() {
        for &(n, d, ks) in GRID {
            let q = build_q(n, d, &fs(ks, n)).unwrap();
            assert!(q.vertices().iter().all(|v| (v.norm() - 1.0).abs() < 1e-12));
            assert!(q.centroid().norm() < 1e-12, "({n},{d},{ks:?})");
        }
    }

    #[test]
    fn pentagon_distance_profile() {
        let q = build_q(5, 2, &fs(&[1], 5)).unwrap();
        let p = distance_profile(&q, DEFAULT_TOL);
        assert!(p.invariant);
        assert!((p.rows[0].mean - 1.175_570_504_584_946_2).abs() < 1e-12);
        assert!((p.rows[1].mean - 1.902_113_032_590_307).abs() < 1e-12);
    }

    #[test]
    fn perturbation_breaks_distance_profile() {
        let q = build_q(7, 4, &fs(&[1, 2], 7)).unwrap();
        assert!(distance_profile(&q, DEFAULT_TOL).max_spread < 1e-12);
        let mut vertices = q.vertices().to_vec();
        vertices[3][0] += 1e-3;
        let bent = PolytopeVertices::new(4, vertices).unwrap();
        assert!(!distance_profile(&bent, DEFAULT_TOL).invariant);
        assert!(cyclic_isometry(&bent, DEFAULT_TOL).is_err());
    }

    #[test]
    fn isometry_angles_match_frequencies() {
        for &(n, d, ks) in GRID {
            let q = build_q(n, d, &fs(ks, n)).unwrap();
            let iso = cyclic_isometry(&q, DEFAULT_TOL).unwrap();
            assert!(iso.residual < 1e-9);
            assert_eq!(iso.block_angles.len(), ks.len());
            for (theta, &k) in iso.block_angles.iter().zip(ks) {
                assert!(
                    (theta - 2.0 * PI * k as f64 / n as f64).abs() < 1e-9,
                    "({n},{d},{ks:?})"
                );
            }
            assert_eq!(iso.has_reflection_block, d % 2 == 1);
            assert_eq!(iso.irregular_real_eigenvalues, 0);
        }
    }

    #[test]
    fn isometry_has_order_n() {
        for &(n, d, ks) in GRID {
            let q = build_q(n, d, &fs(ks, n)).unwrap();
            let iso = cyclic_isometry(&q, DEFAULT_TOL).unwrap();
            let mut x = q.vertices()[0].clone();
            for _ in 0..n {
                x = iso.apply(&x);
            }
            assert!((x - &q.vertices()[0]).norm() < n as f64 * DEFAULT_TOL);
        }
    }

    #[test]
    fn isometry_carries_original_coordinates() {
        let mut rng = StdRng::seed_from_u64(7);
        let q = build_q(7, 4, &fs(&[1, 2], 7)).unwrap();
        let r = random_orthogonal(4, &mut rng);
        let t = DVector::from_vec(vec![1.0, -2.0, 0.5, 3.0]);
        let p = q.transformed(&r, 2.5, &t).unwrap();
        let iso = cyclic_isometry(&p, DEFAULT_TOL).unwrap();
        for j in 0..7 {
            assert!((iso.apply(p.vertex(j)) - p.vertex(j + 1)).norm() < 1e-9);
        }
    }

    #[test]
    fn gram_projector_on_grid() {
        for &(n, d, ks) in GRID {
            let q = build_q(n, d, &fs(ks, n)).unwrap();
            let g = gram_report(&q, DEFAULT_TOL);
            assert!(
                g.on_sphere && g.is_circulant && g.is_projector,
                "({n},{d},{ks:?})"
            );
            assert!(g.circulant_deviation < 1e-12);
            assert!(g.idempotency_residual < 1e-9);
            assert!((g.trace - d as f64).abs() < 1e-9);
            assert_eq!((g.near_one, g.near_zero), (d, n - d));
            assert!(g.mu0_is_zero);
            if let Some(half) = g.mu_half() {
                assert_eq!(half.abs() < 1e-9, d % 2 == 0, "({n},{d},{ks:?})");
            }
            for t in 1..n {
                assert_eq!(
                    (g.mu[t] - 1.0).abs() < 1e-9,
                    (g.mu[n - t] - 1.0).abs() < 1e-9
                );
            }
        }
    }

    #[test]
    fn gram_spectrum_agrees_with_circulant_eigenvalues() {
        let q = build_q(9, 4, &fs(&[2, 4], 9)).unwrap();
        let g = gram_report(&q, DEFAULT_TOL);
        let mut mu = g.mu.clone();
        mu.sort_by(f64::total_cmp);
        for (a, b) in mu.iter().zip(&g.eigenvalues) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((g.mu[2] - 1.0).abs() < 1e-12 && (g.mu[4] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hexagon_gram() {
        let g = gram_report(&build_q(6, 2, &fs(&[1], 6)).unwrap(), DEFAULT_TOL);
        assert!((g.trace - 2.0).abs() < 1e-12);
        assert_eq!(g.near_one, 2);
    }

    #[test]
    fn random_polytopes_fail_every_characterization() {
        let mut rng = StdRng::seed_from_u64(2024);
        for &(n, d) in &[(7, 4), (9, 3), (12, 5), (8, 2)] {
            let p = random_sphere_polytope(n, d, &mut rng);
            assert!(!distance_profile(&p, DEFAULT_TOL).invariant);
            assert!(cyclic_isometry(&p, DEFAULT_TOL).is_err());
            assert!(recover_frequencies(&p, DEFAULT_TOL).is_err());
            assert!(gram_report(&p, DEFAULT_TOL).idempotency_residual > 1e-3);
        }
    }

    #[test]
    fn john_condition_examples() {
        for (n, d, ks) in [(7, 4, vec![1, 2]), (10, 5, vec![2, 3])] {
            let j = john_condition(&build_q(n, d, &fs(&ks, n)).unwrap(), DEFAULT_TOL);
            assert!(j.holds && j.residual_sum < 1e-9 && j.residual_identity < 1e-9);
            assert_eq!(j.lambda, d as f64 / n as f64);
        }
        let pentagon = build_q(5, 2, &fs(&[1], 5)).unwrap();
        let shifted = pentagon
            .transformed(
                &DMatrix::identity(2, 2),
                1.0,
                &DVector::from_vec(vec![0.3, 0.0]),
            )
            .unwrap();
        assert!(!john_condition(&shifted, DEFAULT_TOL).holds);
    }

    #[test]
    fn recover_frequencies_roundtrip() {
        let mut rng = StdRng::seed_from_u64(11);
        for &(n, d, ks) in GRID {
            let q = build_q(n, d, &fs(ks, n)).unwrap();
            let direct = recover_frequencies(&q, DEFAULT_TOL).unwrap();
            assert_eq!(direct.ks.ks(), ks);
            let r = random_orthogonal(d, &mut rng);
            let t = DVector::from_fn(d, |_, _| rng.gen_range(-5.0..5.0));
            let moved = q.transformed(&r, 3.7, &t).unwrap();
            let rec = recover_frequencies(&moved, DEFAULT_TOL).unwrap();
            assert_eq!(rec.ks.ks(), ks);
            assert!(rec.residual < 1e-8);
            assert!((rec.scale - 3.7).abs() < 1e-9);
        }
    }

    #[test]
    fn unequal_block_radii_are_not_similar_to_q() {
        // cyclic isometry exists, distance profile is constant, yet no Q fits
        let n = 7;
        let vertices = (0..n)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / n as f64;
                DVector::from_vec(vec![
                    a.cos(),
                    a.sin(),
                    0.5 * (2.0 * a).cos(),
                    0.5 * (2.0 * a).sin(),
                ])
            })
            .collect();
        let p = PolytopeVertices::new(4, vertices).unwrap();
        assert!(distance_profile(&p, DEFAULT_TOL).invariant);
        assert!(cyclic_isometry(&p, DEFAULT_TOL).is_ok());
        assert!(!gram_report(&p, DEFAULT_TOL).is_projector);
        assert!(matches!(
            recover_frequencies(&p, DEFAULT_TOL),
            Err(RecoveryFailure::NotSimilar { .. }) | Err(RecoveryFailure::Residual { .. })
        ));
    }

    #[test]
    fn interleaved_examples_are_canonical() {
        for k in 3..=6 {
            let p = interleaved_example(k).unwrap();
            assert_eq!(p.n(), 2 * k);
            assert!(distance_profile(&p, DEFAULT_TOL).invariant);
            cyclic_isometry(&p, DEFAULT_TOL).unwrap();
            let rec = recover_frequencies(&p, DEFAULT_TOL).unwrap();
            assert_eq!(rec.ks.ks(), &[1, k - 1]);
            assert!(rec.residual < 1e-9);
        }
        assert!(interleaved_example(2).is_err());
    }

    #[test]
    fn polytope_validation() {
        let flat: Vec<DVector<f64>> = (0..6)
            .map(|j| DVector::from_vec(vec![j as f64, 2.0 * j as f64, 0.0]))
            .collect();
        assert!(PolytopeVertices::new(3, flat).is_err());
        let few: Vec<DVector<f64>> = (0..4)
            .map(|j| DVector::from_vec(vec![j as f64, 1.0]))
            .collect();
        assert!(PolytopeVertices::new(2, few).is_err());
    }

    fn grid_strategy() -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
        (2usize..=7, 0usize..12).prop_flat_map(|(d, extra)| {
            let s = d / 2;
            let base = (2 * s + 2).max(d + 1).max(5);
            let n = if d % 2 == 1 && (base + extra) % 2 == 1 {
                base + extra + 1
            } else {
                base + extra
            };
            let pool: Vec<usize> = (1..n.div_ceil(2)).collect();
            proptest::sample::subsequence(pool, s).prop_map(move |ks| (n, d, ks))
        })
    }

    proptest! {
        #[test]
        fn canonical_polytopes_satisfy_the_chain((n, d, ks) in grid_strategy()) {
            let q = build_q(n, d, &fs(&ks, n)).unwrap();
            prop_assert!(distance_profile(&q, DEFAULT_TOL).invariant);
            let rec = recover_frequencies(&q, DEFAULT_TOL).unwrap();
            prop_assert_eq!(rec.ks.ks(), ks.as_slice());
            let g = gram_report(&q, DEFAULT_TOL);
            prop_assert!(g.is_projector && g.mu0_is_zero);
            prop_assert!((g.trace - d as f64).abs() < 1e-9);
        }
    }
}
