//! Roots of unity, Fourier polygons and circulant spectra.
//!
//! Conventions used across the crate:
//! - `ε = exp(2πi/n)`, always evaluated from the reduced angle `2π (j mod n) / n`.
//! - The Fourier polygon `v_t` has vertex `j` equal to `ε^{jt}` for `j = 0..n`
//!   (leading entry 1, no `1/√n` factor), so `v_0` is the constant polygon.
//! - `dft` and `idft` are the exact pair for that basis:
//!   `P = Σ_t z_t v_t` and `z_t = (1/n) Σ_j p_j ε^{-jt}`.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative factor in the default "equals zero" test for spectra.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-9;

/// Returns `ε^j` for `ε = exp(2πi/n)`.
///
/// Quarter-turn multiples come back exact (`1`, `i`, `-1`, `-i`).
pub fn root_power(n: usize, j: i64) -> Result<C64> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    Ok(root_power_unchecked(n, j))
}

pub(crate) fn root_power_unchecked(n: usize, j: i64) -> C64 {
    let r = j.rem_euclid(n as i64) as usize;
    if (4 * r).is_multiple_of(n) {
        return match 4 * r / n {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    let angle = TAU * r as f64 / n as f64;
    C64::new(angle.cos(), angle.sin())
}

/// All `n` powers `ε^0 .. ε^{n-1}`; index with `(j * t) % n`.
pub(crate) fn root_table(n: usize) -> Vec<C64> {
    (0..n as i64).map(|j| root_power_unchecked(n, j)).collect()
}

/// An ordered `n`-tuple of points in the complex plane, indices mod `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPolygon {
    vertices: Vec<C64>,
}

impl ComplexPolygon {
    pub fn new(vertices: Vec<C64>) -> Result<Self> {
        if vertices.len() < 4 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        Ok(Self { vertices })
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[C64] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<C64> {
        self.vertices
    }

    /// Vertex `j`, with `j` taken mod `n`.
    pub fn vertex(&self, j: i64) -> C64 {
        self.vertices[j.rem_euclid(self.n() as i64) as usize]
    }

    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (a, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[a + 1..] {
                best = best.max((p - q).norm());
            }
        }
        best
    }

    pub fn min_pairwise_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (a, p) in self.vertices.iter().enumerate() {
            for q in &self.vertices[a + 1..] {
                best = best.min((p - q).norm());
            }
        }
        best
    }

    /// True when the closest pair of vertices is farther apart than
    /// `tol * diameter`. A single point repeated `n` times is never distinct.
    pub fn is_pairwise_distinct(&self, tol: f64) -> bool {
        let diameter = self.diameter();
        diameter > 0.0 && self.min_pairwise_distance() > tol * diameter
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&p| f(p)).collect(),
        }
    }
}

/// The Fourier polygon `v_t = (1, ε^t, ε^{2t}, …, ε^{(n-1)t})`.
pub fn fourier_vector(n: usize, t: i64) -> Result<ComplexPolygon> {
    if n < 4 {
        return Err(Error::TooFewVertices(n));
    }
    let vertices = (0..n as i64)
        .map(|j| root_power_unchecked(n, j * t.rem_euclid(n as i64)))
        .collect();
    Ok(ComplexPolygon { vertices })
}

/// Coefficients `z_t` with `P = Σ_t z_t v_t`.
pub fn dft(polygon: &ComplexPolygon) -> Vec<C64> {
    let n = polygon.n();
    let table = root_table(n);
    let scale = 1.0 / n as f64;
    (0..n)
        .map(|t| {
            let sum: C64 = polygon
                .vertices
                .iter()
                .enumerate()
                .map(|(j, &p)| p * table[(n - (j * t) % n) % n])
                .sum();
            sum * scale
        })
        .collect()
}

/// The polygon `Σ_t z_t v_t`.
pub fn idft(coefficients: &[C64]) -> Result<ComplexPolygon> {
    let n = coefficients.len();
    if n < 4 {
        return Err(Error::TooFewVertices(n));
    }
    let table = root_table(n);
    let vertices = (0..n)
        .map(|j| {
            coefficients
                .iter()
                .enumerate()
                .map(|(t, &z)| z * table[(j * t) % n])
                .sum()
        })
        .collect();
    Ok(ComplexPolygon { vertices })
}

/// Eigenvalues `μ_0 … μ_{n-1}` of a circulant matrix, indexed like the
/// Fourier polygons that carry them.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<C64>,
    row_mass: f64,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `Σ |c_j|` of the generating row; the natural scale for zero tests.
    pub fn row_mass(&self) -> f64 {
        self.row_mass
    }

    /// Indices `t` with `|μ_t| ≤ rel_tol · (1 + Σ|c_j|)`.
    pub fn zero_set(&self, rel_tol: f64) -> Vec<usize> {
        let bound = rel_tol * (1.0 + self.row_mass);
        self.values
            .iter()
            .enumerate()
            .filter(|(_, mu)| mu.norm() <= bound)
            .map(|(t, _)| t)
            .collect()
    }
}

/// `μ_t = Σ_j c_j ε^{jt}` for the circulant matrix with the given first row.
pub fn circulant_spectrum(first_row: &[C64]) -> Result<Spectrum> {
    let n = first_row.len();
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    let table = root_table(n);
    let values = (0..n)
        .map(|t| {
            first_row
                .iter()
                .enumerate()
                .map(|(j, &c)| c * table[(j * t) % n])
                .sum()
        })
        .collect();
    let row_mass = first_row.iter().map(|c| c.norm()).sum();
    Ok(Spectrum { values, row_mass })
}
