//! Shannon interpolation of Fourier transforms of functions on `J^m`.
//!
//! Transforms use `F̂(ξ) = ∫_{J^m} e^{-iξ·x} F(x) d^m x`. For a lattice
//! spectrum, `F̂(πn) = 2^m c_n`, and the transform of a single harmonic
//! `e^{iπk·x}` is `Π_j 2 sinc(ξ_j - πk_j)`. Hence every `F` on the cube has
//!
//! ```text
//! F̂(ξ) = Σ_{n ∈ Z^m} F̂(πn) K_m(ξ - πn) / 2^m,   K_m(ξ) = Π_j 2 sin(ξ_j)/ξ_j,
//! ```
//!
//! with sample lattice `πZ^m`. The series is finite for trigonometric
//! polynomials, so [`interpolate`] is exact (to rounding) once the stored
//! band covers the spectrum. [`hat_direct`] computes the transform straight
//! from grid samples by end-corrected midpoint quadrature and serves as the
//! independent reference.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::annihilator::sinc;
use crate::quadrature::{self, QuadratureRule};
use crate::spectrum::{GridFunction, LatticeSpectrum};
use crate::{par, Error, Result};

/// Samples `F̂(πn)` for lattice points with `|n_j| <= band`.
#[derive(Debug, Clone, PartialEq)]
pub struct HatSamples {
    dim: usize,
    band: usize,
    samples: BTreeMap<Vec<i64>, Complex64>,
}

impl HatSamples {
    /// `F̂(πn) = 2^m c_n` for every stored coefficient within `band`.
    pub fn from_spectrum(s: &LatticeSpectrum, band: usize) -> Self {
        let scale = 2f64.powi(s.dim() as i32);
        let samples = s
            .truncated(band)
            .iter()
            .map(|(k, c)| (k.clone(), c * scale))
            .collect();
        Self {
            dim: s.dim(),
            band,
            samples,
        }
    }

    /// Samples computed from a grid by [`hat_direct_many`] at every `πn`.
    pub fn from_grid(f: &GridFunction, band: usize) -> Self {
        let m = f.dim();
        let mut pts = Vec::new();
        crate::direction::for_each_box_point(m, band as i64, |n| pts.push(n.to_vec()));
        let xis: Vec<Vec<f64>> = pts
            .iter()
            .map(|n| n.iter().map(|&v| std::f64::consts::PI * v as f64).collect())
            .collect();
        let vals = hat_direct_many(f, &xis);
        Self {
            dim: m,
            band,
            samples: pts.into_iter().zip(vals).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn band(&self) -> usize {
        self.band
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Stored value at `πn` (zero when absent).
    pub fn get(&self, n: &[i64]) -> Complex64 {
        self.samples.get(n).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.samples.iter()
    }
}

/// `sin(πs)` with exact zeros at the integers.
pub fn sin_pi(s: f64) -> f64 {
    let r = s - 2.0 * (s / 2.0).round();
    if r == r.trunc() {
        return 0.0;
    }
    (std::f64::consts::PI * r).sin()
}

/// `sin(πs)/(πs)`: exactly 1 at 0 and exactly 0 at the other integers, so
/// the interpolation kernel is cardinal on the sample lattice to the bit.
pub fn sinc_pi(s: f64) -> f64 {
    let u = std::f64::consts::PI * s;
    if u.abs() < crate::annihilator::SERIES_SWITCH {
        sinc(u)
    } else {
        sin_pi(s) / u
    }
}

/// `K_m(ξ) = Π_j 2 sin(ξ_j)/ξ_j`, equal to `2^m` at the origin.
pub fn kernel(xi: &[f64]) -> f64 {
    xi.iter()
        .map(|&x| 2.0 * sinc_pi(x / std::f64::consts::PI))
        .product()
}

/// `∫_{J^m} e^{-iξ·x} F(x) d^m x` from grid samples.
///
/// Tensor quadrature with end-corrected midpoint weights: the integrand is
/// not periodic for off-lattice `ξ`, and plain midpoint sums would be limited
/// to `O(h²)` accuracy.
pub fn hat_direct(f: &GridFunction, xi: &[f64]) -> Complex64 {
    hat_direct_many(f, std::slice::from_ref(&xi.to_vec()))[0]
}

/// [`hat_direct`] at several frequencies, streaming the grid once.
pub fn hat_direct_many(f: &GridFunction, xis: &[Vec<f64>]) -> Vec<Complex64> {
    let weights: Vec<(Vec<f64>, Vec<f64>)> = f
        .shape()
        .iter()
        .map(|&n| (quadrature::nodes(n), quadrature::weights(n, QuadratureRule::CorrectedMidpoint)))
        .collect();
    let families: Vec<Vec<Vec<Complex64>>> = xis
        .iter()
        .map(|xi| {
            assert_eq!(xi.len(), f.dim(), "frequency dimension");
            weights
                .iter()
                .zip(xi)
                .map(|((nodes, w), &x)| {
                    nodes
                        .iter()
                        .zip(w)
                        .map(|(&node, &wt)| Complex64::from_polar(wt, -x * node))
                        .collect()
                })
                .collect()
        })
        .collect();
    quadrature::contract_all_many(f.values(), f.shape(), &families)
}

/// `Σ_n F̂(πn) K_m(ξ - πn) / 2^m` over the stored samples.
pub fn interpolate(h: &HatSamples, xi: &[f64]) -> Result<Complex64> {
    if xi.len() != h.dim {
        return Err(Error::DimensionMismatch {
            expected: h.dim,
            found: xi.len(),
        });
    }
    let scale = 2f64.powi(-(h.dim as i32));
    let reduced: Vec<f64> = xi.iter().map(|&x| x / std::f64::consts::PI).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, v) in &h.samples {
        let mut k = scale;
        for (&s, &nj) in reduced.iter().zip(n) {
            k *= 2.0 * sinc_pi(s - nj as f64);
        }
        acc += v * k;
    }
    Ok(acc)
}

/// Interpolates at many points, in order.
pub fn interpolate_many(h: &HatSamples, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
    par::map_slice(points, |xi| interpolate(h, xi))
        .into_iter()
        .collect()
}

/// `F̂(t·w)` for each `t`.
pub fn line_restriction(h: &HatSamples, w: &[f64], ts: &[f64]) -> Result<Vec<Complex64>> {
    if w.len() != h.dim {
        return Err(Error::DimensionMismatch {
            expected: h.dim,
            found: w.len(),
        });
    }
    if w.iter().all(|&v| v == 0.0) {
        return Err(Error::NotADirection);
    }
    par::map_slice(ts, |&t| {
        let xi: Vec<f64> = w.iter().map(|&v| t * v).collect();
        interpolate(h, &xi)
    })
    .into_iter()
    .collect()
}

/// Sampled values along a line and whether all of them are within `tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineCheck {
    pub values: Vec<Complex64>,
    pub max_abs: f64,
    pub vanishes: bool,
}

/// [`line_restriction`] with the numerical surrogate for "`F̂(tw) = 0` for all `t`".
pub fn line_vanishes(h: &HatSamples, w: &[f64], ts: &[f64], tol: f64) -> Result<LineCheck> {
    let values = line_restriction(h, w, ts)?;
    let max_abs = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(LineCheck {
        vanishes: max_abs <= tol,
        max_abs,
        values,
    })
}

/// Step used by [`line_derivatives_at_zero`].
pub const FD_STEP: f64 = 1e-3;

/// Central finite-difference derivatives `(d/dt)^k F̂(tw)` at `t = 0` for
/// `k = 0..=order` (`order <= 4`).
pub fn line_derivatives_at_zero(h: &HatSamples, w: &[f64], order: usize) -> Result<Vec<Complex64>> {
    if order > 4 {
        return Err(Error::invalid("finite-difference derivatives are provided up to order 4"));
    }
    let step = FD_STEP;
    let ts: Vec<f64> = (-2..=2).map(|i| i as f64 * step).collect();
    let v = line_restriction(h, w, &ts)?;
    let (m2, m1, z, p1, p2) = (v[0], v[1], v[2], v[3], v[4]);
    let all = [
        z,
        (p1 - m1) / (2.0 * step),
        (p1 - z * 2.0 + m1) / (step * step),
        (p2 - p1 * 2.0 + m1 * 2.0 - m2) / (2.0 * step.powi(3)),
        (p2 - p1 * 4.0 + z * 6.0 - m1 * 4.0 + m2) / step.powi(4),
    ];
    Ok(all[..=order].to_vec())
}
