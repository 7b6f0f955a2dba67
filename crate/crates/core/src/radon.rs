//! Binned Radon transform over hyperplane slices of `J^m`.
//!
//! For a unit vector `w`, `R_w F(t) = ∫_{y ⊥ w} F(tw + y) dσ(y)` integrates
//! `F` over the slice `{x : w·x = t}`. The discretisation deposits the mass
//! of each grid cell onto the two bin centres nearest to `w·x_cell`, with
//! linear weights, and divides by the bin width. `values[b]` is then `R_w F`
//! averaged against a hat of half-width `bin_width` centred at `t_b`. Bins
//! span exactly the range `[-‖w‖₁, ‖w‖₁]` of `w·x` on the cube.
//!
//! The deposit is a partition of unity: `Σ_b values[b]·bin_width` equals the
//! midpoint integral of `F` up to rounding, and so does the first moment
//! `Σ_b t_b·values[b]·bin_width` away from the two outermost half bins.

use num_complex::Complex64;

use crate::spectrum::GridFunction;
use crate::{par, Error, Result};

/// Slice integrals of a grid function along one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonProfile {
    /// Unit direction.
    pub w: Vec<f64>,
    /// Bin centres, increasing.
    pub ts: Vec<f64>,
    pub values: Vec<Complex64>,
    pub bin_width: f64,
}

impl RadonProfile {
    /// `Σ_b φ(t_b)·value_b·bin_width`, the discrete pairing with a test profile.
    pub fn pair_with(&self, phi: impl Fn(f64) -> f64) -> Complex64 {
        self.ts
            .iter()
            .zip(&self.values)
            .map(|(&t, v)| v * phi(t) * self.bin_width)
            .sum()
    }

    /// Total mass `Σ_b value_b·bin_width`.
    pub fn mass(&self) -> Complex64 {
        self.pair_with(|_| 1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Normalises `w` to unit Euclidean length.
pub fn unit(w: &[f64]) -> Result<Vec<f64>> {
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::NotADirection);
    }
    Ok(w.iter().map(|v| v / norm).collect())
}

/// Binned slice integrals of `f` along `w` (normalised internally).
pub fn radon_profile(f: &GridFunction, w: &[f64], nbins: usize) -> Result<RadonProfile> {
    if w.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: w.len(),
        });
    }
    if nbins < 4 {
        return Err(Error::invalid(format!("radon profile needs at least 4 bins, got {nbins}")));
    }
    let w = unit(w)?;
    let shape = f.shape();
    let reach: f64 = w.iter().map(|v| v.abs()).sum();
    let bin_width = 2.0 * reach / nbins as f64;
    let spacing = w
        .iter()
        .zip(shape)
        .map(|(v, &n)| v.abs() * 2.0 / n as f64)
        .fold(0.0, f64::max);
    if bin_width < spacing {
        return Err(Error::Undersampled { bin_width, spacing });
    }

    let m = shape.len();
    let axes: Vec<Vec<f64>> = (0..m).map(|j| f.axis_nodes(j)).collect();
    let cell = f.cell_volume();
    let values = f.values();
    let inner = shape[m - 1];
    let rows = values.len() / inner;
    let last: Vec<f64> = axes[m - 1].iter().map(|&x| w[m - 1] * x).collect();

    // Each cell's mass is shared linearly between the two nearest bin
    // centres, which keeps the zeroth and first moments exact and stops the
    // number of lattice lines per bin from showing up as ripple. One partial
    // histogram per row of the last axis, merged in row order.
    let partials = par::map_indices(rows, |r| {
        let mut rem = r;
        let mut offset = 0.0;
        for j in (0..m - 1).rev() {
            offset += w[j] * axes[j][rem % shape[j]];
            rem /= shape[j];
        }
        let pos = |s: f64| (s + reach) / bin_width - 0.5;
        let (a, b) = (pos(offset + last[0]), pos(offset + last[inner - 1]));
        let lo = (a.min(b).floor().max(0.0) as usize).min(nbins - 1);
        let hi = (a.max(b).floor().max(0.0) as usize + 1).min(nbins - 1);
        let mut hist = vec![Complex64::new(0.0, 0.0); hi - lo + 1];
        let row = &values[r * inner..(r + 1) * inner];
        for (v, &s_last) in row.iter().zip(&last) {
            let p = pos(offset + s_last);
            if p <= 0.0 {
                hist[0] += v;
            } else if p >= (nbins - 1) as f64 {
                hist[hi - lo] += v;
            } else {
                let b0 = p.floor();
                let frac = p - b0;
                let i = b0 as usize - lo;
                hist[i] += v * (1.0 - frac);
                hist[i + 1] += v * frac;
            }
        }
        (lo, hist)
    });
    let mut mass = vec![Complex64::new(0.0, 0.0); nbins];
    for (lo, hist) in partials {
        for (i, v) in hist.into_iter().enumerate() {
            mass[lo + i] += v;
        }
    }
    let ts = (0..nbins)
        .map(|b| -reach + (b as f64 + 0.5) * bin_width)
        .collect();
    let values = mass.into_iter().map(|v| v * (cell / bin_width)).collect();
    Ok(RadonProfile {
        w,
        ts,
        values,
        bin_width,
    })
}

/// Result of the Radon kernel test over a set of directions.
#[derive(Debug, Clone, PartialEq)]
pub struct RadonZeroReport {
    pub passed: bool,
    /// Largest `|profile value|` over all directions and bins.
    pub max_deviation: f64,
    /// Per-direction maxima, in input order.
    pub per_direction: Vec<f64>,
}

/// Whether all slice integrals along every direction vanish within `tol`.
pub fn radon_zero(f: &GridFunction, dirs: &[Vec<f64>], nbins: usize, tol: f64) -> Result<RadonZeroReport> {
    let per_direction = dirs
        .iter()
        .map(|w| radon_profile(f, w, nbins).map(|p| p.max_abs()))
        .collect::<Result<Vec<_>>>()?;
    let max_deviation = per_direction.iter().copied().fold(0.0, f64::max);
    Ok(RadonZeroReport {
        passed: max_deviation <= tol,
        max_deviation,
        per_direction,
    })
}
