//! Orthogonal projection onto ridge subspaces.
//!
//! For a direction class `w` the periodic ridge functions `φ(w·x)` with
//! `φ(s) = Σ_k a_k e^{iπks}` have spectra supported on the integer line
//! `Z·w`. Distinct classes meet only at the origin, so the spans for the
//! classes in a set `W` are orthogonal modulo constants, and projection onto
//! their closed span `H_W` is a split of the coefficients: those on
//! `⋃_{w∈W} Z·w` (origin included) are kept, the rest form the residual.
//!
//! # Relation to the Fourier-transform criterion
//!
//! A function `F` is orthogonal to every ridge function `φ(w·x)` with
//! arbitrary (not necessarily periodic) profile `φ` iff its Fourier
//! transform `F̂(ξ) = ∫_{J^m} e^{-iξ·x} F(x) d^m x` vanishes on the whole
//! line `ξ = tw`, `t ∈ R`. For a trigonometric polynomial
//! `F̂(ξ) = Σ_k c_k Π_j 2 sinc(ξ_j - πk_j)` is entire, so vanishing on the
//! line is equivalent to vanishing of all its `t`-derivatives at `t = 0`.
//! Evaluating at the lattice points `t = πn` gives `F̂(πnw) = 2^m c_{nw}`,
//! hence vanishing on `R·w` forces every coefficient on `Z·w` to vanish.
//!
//! The converse holds when `w` is a coordinate axis: all other factors of the
//! sinc product then vanish unless `k` lies on the axis. It does **not** hold
//! for other directions. `e^{iπ(x+2y)}` has no coefficient on `Z·(1,1)`, yet
//! `F̂(t(1,1)) = 4 sinc(t-π) sinc(t-2π)` is not identically zero. So
//! [`annihilates`] decides orthogonality to the periodic ridge span `H_W`
//! computed here, and coincides with the Radon / Fourier-line criteria
//! (see [`crate::radon`], [`crate::shannon`]) for coordinate directions and for
//! functions whose transform already vanishes on the lines.

use std::collections::{BTreeSet, HashSet};

use num_complex::Complex64;

use crate::direction::{canonicalize, DirectionClass, DirectionSet};
use crate::spectrum::{norm_sq, LatticeSpectrum, Measure};
use crate::Result;

/// `S = projected + residual` with `projected ∈ H_W` and `residual ⊥ H_W`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSplit {
    pub projected: LatticeSpectrum,
    pub residual: LatticeSpectrum,
    /// `‖residual‖²` under `measure`.
    pub distance_sq: f64,
    pub measure: Measure,
}

impl ProjectionSplit {
    pub fn distance(&self) -> f64 {
        self.distance_sq.sqrt()
    }
}

/// Membership test for `⋃_{w∈W} Z·w`, origin included.
struct LineIndex<'a> {
    classes: HashSet<&'a DirectionClass>,
}

impl<'a> LineIndex<'a> {
    fn new(w: &'a [DirectionClass]) -> Self {
        Self {
            classes: w.iter().collect(),
        }
    }

    fn contains(&self, k: &[i64]) -> bool {
        match canonicalize(k) {
            Ok(c) => self.classes.contains(&c),
            Err(_) => true,
        }
    }
}

/// Lattice points with `|k_j| <= band` lying on some line `Z·w`, plus the origin.
pub fn line_support(w: &DirectionSet, band: usize) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    out.insert(vec![0; w.dim()]);
    let band = band as i64;
    for d in w {
        let reach = d.as_slice().iter().map(|v| v.abs()).max().unwrap_or(1).max(1);
        let tmax = band / reach;
        for t in -tmax..=tmax {
            out.insert(d.scaled(t));
        }
    }
    out
}

/// Number of points in `[-band, band]^m` outside [`line_support`]: the
/// dimension of the residual space restricted to that band.
pub fn residual_dimension(w: &DirectionSet, band: usize) -> usize {
    let side = 2 * band + 1;
    side.pow(w.dim() as u32) - line_support(w, band).len()
}

/// Splits `s` into its component in `H_W` and the orthogonal residual.
///
/// The constant coefficient belongs to the projected part, since constants
/// are ridge functions along every direction.
pub fn project(s: &LatticeSpectrum, w: &DirectionSet, measure: Measure) -> Result<ProjectionSplit> {
    check_dims(s, w)?;
    let index = LineIndex::new(w.as_slice());
    let projected = s.filtered(|k| index.contains(k));
    let residual = s.filtered(|k| !index.contains(k));
    let distance_sq = norm_sq(&residual, measure);
    Ok(ProjectionSplit {
        projected,
        residual,
        distance_sq,
        measure,
    })
}

/// Distance² from `F` to `H_W` via `‖F‖² - ‖P_W F‖²`.
///
/// `total_norm_sq` is `‖F‖²` under `measure`, obtained independently (e.g. by
/// quadrature of samples). With a band-limited spectrum of `F` this avoids the
/// slow `O(1/K)` convergence of the residual tail when `F` is not smooth as a
/// periodic function: only the coefficients on the lines enter.
pub fn distance_sq_by_complement(
    total_norm_sq: f64,
    s: &LatticeSpectrum,
    w: &DirectionSet,
    measure: Measure,
) -> Result<f64> {
    let split = project(s, w, measure)?;
    Ok(total_norm_sq - norm_sq(&split.projected, measure))
}

/// Whether every coefficient of `s` on `⋃_{w∈W} Z·w` (origin included) is zero.
pub fn annihilates(s: &LatticeSpectrum, w: &DirectionSet) -> bool {
    let index = LineIndex::new(w.as_slice());
    s.iter().all(|(k, _)| !index.contains(k))
}

/// Coefficientwise product: the spectrum of the periodic convolution
/// `(F ∗ G)(x) = ∫ F(y) G(x - y) dλ_m(y)` with respect to the normalised
/// measure. Against plain `d^m y` the result is `2^m` times larger.
pub fn convolve(s: &LatticeSpectrum, s2: &LatticeSpectrum) -> Result<LatticeSpectrum> {
    s.check_dim(s2)?;
    let mut out = LatticeSpectrum::new(s.dim());
    let (small, large) = if s.len() <= s2.len() { (s, s2) } else { (s2, s) };
    for (k, c) in small.iter() {
        let d = large.get(k);
        if d != Complex64::new(0.0, 0.0) {
            out.insert(k.clone(), c * d);
        }
    }
    Ok(out)
}

fn check_dims(s: &LatticeSpectrum, w: &DirectionSet) -> Result<()> {
    if s.dim() != w.dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: w.dim(),
            found: s.dim(),
        });
    }
    Ok(())
}
