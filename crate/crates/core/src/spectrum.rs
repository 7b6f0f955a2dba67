//! Lattice Fourier series on `J^m = [-1, 1]^m`.
//!
//! A [`LatticeSpectrum`] stores finitely many coefficients `c_k`, `k ∈ Z^m`,
//! of `F(x) = Σ_k c_k e^{iπ k·x}`. The harmonics are orthonormal for the
//! normalised measure `λ_m = d^m x / 2^m`; [`Measure::Lebesgue`] multiplies
//! every inner product by `2^m`.
//!
//! A [`GridFunction`] holds samples at cell centres of a uniform tensor grid.
//! [`analyze_grid`] and [`synthesize_grid`] move between the two with
//! separable per-axis contractions. On an `n`-point axis the midpoint sums
//! reproduce harmonics with `|k - k'| < n` exactly, so round trips are exact
//! (to rounding) for spectra with band `K` when `n ≥ 2K + 2`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::direction::DirectionClass;
use crate::quadrature::{self, contract_axis, QuadratureRule};
use crate::{par, Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Reference measure for inner products on `J^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Measure {
    /// `d^m x / 2^m`, a probability measure; the harmonics are orthonormal.
    #[default]
    Normalized,
    /// Plain `d^m x`.
    Lebesgue,
}

impl Measure {
    /// Factor converting a normalised-measure integral to this measure.
    pub fn scale(self, dim: usize) -> f64 {
        match self {
            Measure::Normalized => 1.0,
            Measure::Lebesgue => 2f64.powi(dim as i32),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Measure::Normalized => "normalized",
            Measure::Lebesgue => "lebesgue",
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalized" => Ok(Measure::Normalized),
            "lebesgue" => Ok(Measure::Lebesgue),
            other => Err(Error::invalid(format!(
                "unknown measure '{other}' (expected normalized or lebesgue)"
            ))),
        }
    }
}

/// Sparse Fourier coefficients of a function on `J^m`.
///
/// Exact zeros are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LatticeSpectrum {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, Complex64>,
}

impl LatticeSpectrum {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// A single harmonic `c·e^{iπ k·x}`.
    pub fn harmonic(k: &[i64], c: Complex64) -> Self {
        let mut s = Self::new(k.len());
        s.insert(k.to_vec(), c);
        s
    }

    /// A constant function.
    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::harmonic(&vec![0; dim], c)
    }

    /// Collects `(k, c)` pairs, summing repeated lattice points.
    pub fn from_pairs<I>(dim: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, Complex64)>,
    {
        let mut s = Self::new(dim);
        for (k, c) in pairs {
            if k.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.len(),
                });
            }
            let prev = s.get(&k);
            s.insert(k, prev + c);
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sets `c_k`; a zero value removes the entry.
    ///
    /// # Panics
    /// If `k` has the wrong length.
    pub fn insert(&mut self, k: Vec<i64>, c: Complex64) {
        assert_eq!(k.len(), self.dim, "lattice point dimension");
        if c == ZERO {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn get(&self, k: &[i64]) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    /// Entries in lexicographic order of `k`.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &Complex64)> {
        self.coeffs.iter()
    }

    /// Largest `|k_j|` over the support (0 for an empty spectrum).
    pub fn band(&self) -> usize {
        self.coeffs
            .keys()
            .flat_map(|k| k.iter().map(|v| v.unsigned_abs() as usize))
            .max()
            .unwrap_or(0)
    }

    /// Drops coefficients with `|c_k| <= tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        Self {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| c.norm() > tol)
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }

    /// Keeps coefficients with every `|k_j| <= band`.
    pub fn truncated(&self, band: usize) -> Self {
        self.filtered(|k| k.iter().all(|v| v.unsigned_abs() as usize <= band))
    }

    /// Keeps coefficients whose lattice point satisfies `keep`.
    pub fn filtered(&self, mut keep: impl FnMut(&[i64]) -> bool) -> Self {
        Self {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), *c))
                .collect(),
        }
    }

    pub fn scaled(&self, a: Complex64) -> Self {
        let mut out = Self::new(self.dim);
        for (k, c) in &self.coeffs {
            out.insert(k.clone(), a * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            let v = out.get(k) + c;
            out.insert(k.clone(), v);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// Point evaluation of the trigonometric polynomial.
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let phase: f64 = k.iter().zip(x).map(|(&kj, &xj)| kj as f64 * xj).sum();
                c * Complex64::from_polar(1.0, std::f64::consts::PI * phase)
            })
            .sum()
    }

    /// Largest coefficient difference against `other` (support union).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m: f64 = 0.0;
        for (k, c) in &self.coeffs {
            m = m.max((c - other.get(k)).norm());
        }
        for (k, c) in &other.coeffs {
            if !self.coeffs.contains_key(k) {
                m = m.max(c.norm());
            }
        }
        m
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

/// Fourier coefficients `φ̂(n)` of a 2-periodic function `φ(s) = Σ φ̂(n) e^{iπns}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OneDSpectrum {
    coeffs: BTreeMap<i64, Complex64>,
}

impl OneDSpectrum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, Complex64)>>(pairs: I) -> Self {
        let mut s = Self::new();
        for (k, c) in pairs {
            let v = s.get(k) + c;
            s.insert(k, v);
        }
        s
    }

    /// Coefficients of `φ(s) = s` on `[-1, 1)`, `φ̂(k) = i(-1)^k/(πk)`,
    /// truncated to `|k| <= band`.
    pub fn sawtooth(band: usize) -> Self {
        let pairs = (1..=band as i64).flat_map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let c = Complex64::new(0.0, sign / (std::f64::consts::PI * k as f64));
            [(k, c), (-k, -c)]
        });
        Self::from_pairs(pairs)
    }

    pub fn insert(&mut self, k: i64, c: Complex64) {
        if c == ZERO {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, c);
        }
    }

    pub fn get(&self, k: i64) -> Complex64 {
        self.coeffs.get(&k).copied().unwrap_or(ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i64, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn band(&self) -> usize {
        self.coeffs
            .keys()
            .map(|k| k.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, s: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&k, c)| c * Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 * s))
            .sum()
    }
}

/// Spectrum of the ridge function `x ↦ φ(w·x)`: `c_{k·w} = φ̂(k)`.
pub fn ridge_synthesize(phi: &OneDSpectrum, w: &DirectionClass) -> LatticeSpectrum {
    let mut s = LatticeSpectrum::new(w.dim());
    for (&k, &c) in phi.iter() {
        s.insert(w.scaled(k), c);
    }
    s
}

/// Complex samples at the cell centres of a uniform grid on `J^m`, row-major
/// with the last axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    shape: Vec<usize>,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(shape: Vec<usize>, values: Vec<Complex64>) -> Result<Self> {
        validate_shape(&shape)?;
        let count: usize = shape.iter().product();
        if values.len() != count {
            return Err(Error::invalid(format!(
                "grid of shape {shape:?} needs {count} values, got {}",
                values.len()
            )));
        }
        Ok(Self { shape, values })
    }

    /// Samples `f` at every cell centre.
    pub fn from_fn<F>(shape: Vec<usize>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Sync + Send,
    {
        validate_shape(&shape)?;
        let axes: Vec<Vec<f64>> = shape.iter().map(|&n| quadrature::nodes(n)).collect();
        let inner = *shape.last().unwrap_or(&1);
        let rows: usize = shape.iter().product::<usize>() / inner;
        let m = shape.len();
        let chunks = par::map_indices(rows, |r| {
            let mut idx = vec![0usize; m];
            let mut rem = r;
            for j in (0..m - 1).rev() {
                idx[j] = rem % shape[j];
                rem /= shape[j];
            }
            let mut x: Vec<f64> = (0..m).map(|j| axes[j][idx[j]]).collect();
            (0..inner)
                .map(|i| {
                    x[m - 1] = axes[m - 1][i];
                    f(&x)
                })
                .collect::<Vec<_>>()
        });
        Ok(Self {
            shape,
            values: chunks.into_iter().flatten().collect(),
        })
    }

    /// Real samples `f(x)`.
    pub fn from_real_fn<F>(shape: Vec<usize>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        Self::from_fn(shape, |x| Complex64::new(f(x), 0.0))
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Volume of one grid cell.
    pub fn cell_volume(&self) -> f64 {
        self.shape.iter().map(|&n| 2.0 / n as f64).product()
    }

    /// Cell-centre coordinates along `axis`.
    pub fn axis_nodes(&self, axis: usize) -> Vec<f64> {
        quadrature::nodes(self.shape[axis])
    }

    /// Value at a multi-index.
    pub fn at(&self, idx: &[usize]) -> Complex64 {
        let flat = idx
            .iter()
            .zip(&self.shape)
            .fold(0usize, |acc, (&i, &n)| acc * n + i);
        self.values[flat]
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Pointwise real part as a new grid.
    pub fn real_part(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            values: self.values.iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
        }
    }

    /// `∫_{J^m} F d^m x` under the given per-axis rule.
    pub fn integral(&self, rule: QuadratureRule) -> Complex64 {
        let vecs: Vec<Vec<Complex64>> = self
            .shape
            .iter()
            .map(|&n| {
                quadrature::weights(n, rule)
                    .into_iter()
                    .map(|w| Complex64::new(w, 0.0))
                    .collect()
            })
            .collect();
        quadrature::contract_all(&self.values, &self.shape, &vecs)
    }

    /// `⟨F, G⟩ = ∫ F·conj(G)` under `measure`, by tensor quadrature.
    pub fn inner_product(&self, other: &Self, measure: Measure, rule: QuadratureRule) -> Result<Complex64> {
        if self.shape != other.shape {
            return Err(Error::invalid(format!(
                "grid shapes differ: {:?} vs {:?}",
                self.shape, other.shape
            )));
        }
        let prod = Self {
            shape: self.shape.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b.conj())
                .collect(),
        };
        let dim = self.dim();
        Ok(prod.integral(rule) * (measure.scale(dim) / 2f64.powi(dim as i32)))
    }

    /// `‖F‖²` under `measure`.
    pub fn norm_sq(&self, measure: Measure, rule: QuadratureRule) -> f64 {
        let sq = Self {
            shape: self.shape.clone(),
            values: self.values.iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect(),
        };
        let dim = self.dim();
        sq.integral(rule).re * measure.scale(dim) / 2f64.powi(dim as i32)
    }

    /// Largest pointwise difference against a grid of the same shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn validate_shape(shape: &[usize]) -> Result<()> {
    if shape.is_empty() {
        return Err(Error::invalid("grid needs at least one axis"));
    }
    if let Some(&n) = shape.iter().find(|&&n| n < 2) {
        return Err(Error::invalid(format!("every grid axis needs >= 2 samples, got {n}")));
    }
    Ok(())
}

/// Lattice coefficients `c_k ≈ 2^{-m} ∫ F e^{-iπk·x}` for all `|k_j| <= band`,
/// by tensor midpoint quadrature.
///
/// Each axis needs at least `2·band + 2` samples; coarser grids would fold
/// out-of-band harmonics onto the requested ones.
pub fn analyze_grid(f: &GridFunction, band: usize) -> Result<LatticeSpectrum> {
    let required = 2 * band + 2;
    for (axis, &n) in f.shape.iter().enumerate() {
        if n < required {
            return Err(Error::Aliasing {
                axis,
                samples: n,
                band,
                required,
            });
        }
    }
    let freqs: Vec<i64> = (-(band as i64)..=band as i64).collect();
    let mut data = f.values.clone();
    let mut shape = f.shape.clone();
    for axis in 0..f.dim() {
        let n = f.shape[axis];
        let xs = quadrature::nodes(n);
        let matrix: Vec<Vec<Complex64>> = freqs
            .iter()
            .map(|&k| {
                xs.iter()
                    .map(|&x| Complex64::from_polar(1.0 / n as f64, -std::f64::consts::PI * k as f64 * x))
                    .collect()
            })
            .collect();
        (data, shape) = contract_axis(&data, &shape, axis, &matrix);
    }
    let mut out = LatticeSpectrum::new(f.dim());
    let side = freqs.len();
    for (flat, c) in data.into_iter().enumerate() {
        let mut k = vec![0i64; shape.len()];
        let mut rem = flat;
        for j in (0..shape.len()).rev() {
            k[j] = freqs[rem % side];
            rem /= side;
        }
        out.insert(k, c);
    }
    Ok(out)
}

/// Evaluates `Σ c_k e^{iπk·x}` at the cell centres of a grid of `shape`.
pub fn synthesize_grid(s: &LatticeSpectrum, shape: &[usize]) -> Result<GridFunction> {
    validate_shape(shape)?;
    if shape.len() != s.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: shape.len(),
        });
    }
    let m = shape.len();
    let band = s.band();
    let side = 2 * band + 1;
    let dense_len = side.checked_pow(m as u32).unwrap_or(usize::MAX);
    // Dense separable synthesis pays off once the band box is not much larger
    // than the support; otherwise sum harmonics directly.
    if dense_len <= 8 * s.len().max(1) {
        let mut data = vec![ZERO; dense_len];
        for (k, c) in s.iter() {
            let flat = k
                .iter()
                .fold(0usize, |acc, &kj| acc * side + (kj + band as i64) as usize);
            data[flat] = *c;
        }
        let mut cur_shape = vec![side; m];
        for (axis, &n) in shape.iter().enumerate() {
            let xs = quadrature::nodes(n);
            let matrix: Vec<Vec<Complex64>> = xs
                .iter()
                .map(|&x| {
                    (-(band as i64)..=band as i64)
                        .map(|k| Complex64::from_polar(1.0, std::f64::consts::PI * k as f64 * x))
                        .collect()
                })
                .collect();
            (data, cur_shape) = contract_axis(&data, &cur_shape, axis, &matrix);
        }
        GridFunction::new(cur_shape, data)
    } else {
        synthesize_direct(s, shape)
    }
}

fn synthesize_direct(s: &LatticeSpectrum, shape: &[usize]) -> Result<GridFunction> {
    let m = shape.len();
    // Per-axis phase tables e^{iπ k x_i} for each distinct k on that axis.
    let terms: Vec<(&Vec<i64>, &Complex64)> = s.iter().collect();
    let tables: Vec<Vec<Vec<Complex64>>> = (0..m)
        .map(|j| {
            let xs = quadrature::nodes(shape[j]);
            terms
                .iter()
                .map(|(k, _)| {
                    xs.iter()
                        .map(|&x| Complex64::from_polar(1.0, std::f64::consts::PI * k[j] as f64 * x))
                        .collect()
                })
                .collect()
        })
        .collect();
    let inner = shape[m - 1];
    let rows: usize = shape.iter().product::<usize>() / inner;
    let mut values = vec![ZERO; rows * inner];
    par::for_each_chunk_mut(&mut values, inner, |r, dst| {
        let mut idx = vec![0usize; m];
        let mut rem = r;
        for j in (0..m - 1).rev() {
            idx[j] = rem % shape[j];
            rem /= shape[j];
        }
        for (t, (_, c)) in terms.iter().enumerate() {
            let mut pre = **c;
            for j in 0..m - 1 {
                pre *= tables[j][t][idx[j]];
            }
            for (d, e) in dst.iter_mut().zip(&tables[m - 1][t]) {
                *d += pre * e;
            }
        }
    });
    GridFunction::new(shape.to_vec(), values)
}

/// `⟨S, S2⟩ = Σ_k c_k conj(c2_k)` for the normalised measure, `2^m` times
/// that for Lebesgue measure.
pub fn inner_product(s: &LatticeSpectrum, s2: &LatticeSpectrum, measure: Measure) -> Result<Complex64> {
    s.check_dim(s2)?;
    let (small, large, conj_small) = if s.len() <= s2.len() {
        (s, s2, false)
    } else {
        (s2, s, true)
    };
    let mut acc = ZERO;
    for (k, c) in small.iter() {
        let d = large.get(k);
        acc += if conj_small { d * c.conj() } else { c * d.conj() };
    }
    Ok(acc * measure.scale(s.dim()))
}

/// `‖S‖²` under `measure` (Parseval).
pub fn norm_sq(s: &LatticeSpectrum, measure: Measure) -> f64 {
    s.iter().map(|(_, c)| c.norm_sqr()).sum::<f64>() * measure.scale(s.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direction::canonicalize;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent oracle: `(1/2)∫_{-1}^{1} x e^{-iπkx} dx` by composite
    /// Simpson's rule on a fine mesh.
    fn sawtooth_coeff_by_simpson(k: i64) -> Complex64 {
        let n = 20_000;
        let h = 2.0 / n as f64;
        let f = |x: f64| Complex64::from_polar(x, -PI * k as f64 * x);
        let mut acc = f(-1.0) + f(1.0);
        for i in 1..n {
            let x = -1.0 + i as f64 * h;
            acc += f(x) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * (h / 3.0) * 0.5
    }

    #[test]
    fn sawtooth_coefficients_match_quadrature() {
        let s = OneDSpectrum::sawtooth(6);
        for k in -6..=6i64 {
            let want = if k == 0 { ZERO } else { sawtooth_coeff_by_simpson(k) };
            assert!((s.get(k) - want).norm() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn ridge_synthesis_examples() {
        let w = canonicalize(&[1, 2]).unwrap();
        let phi = OneDSpectrum::from_pairs([(1, c(1.0, 0.0))]);
        let s = ridge_synthesize(&phi, &w);
        assert_eq!(s, LatticeSpectrum::harmonic(&[1, 2], c(1.0, 0.0)));

        let phi0 = OneDSpectrum::from_pairs([(0, c(2.5, -1.0))]);
        let s0 = ridge_synthesize(&phi0, &canonicalize(&[3, -1, 2]).unwrap());
        assert_eq!(s0, LatticeSpectrum::constant(3, c(2.5, -1.0)));
    }

    #[test]
    fn ridge_synthesis_of_sawtooth_recovers_x_in_the_interior() {
        let k = 200;
        let w = canonicalize(&[1, 0]).unwrap();
        let s = ridge_synthesize(&OneDSpectrum::sawtooth(k), &w);
        assert!(s.iter().all(|(p, _)| p[1] == 0));
        let g = synthesize_grid(&s, &[64, 4]).unwrap();
        let xs = g.axis_nodes(0);
        for (i, &x) in xs.iter().enumerate() {
            if x.abs() > 0.8 {
                continue;
            }
            // Gibbs error away from the seam decays like 1/(K·dist).
            assert!((g.at(&[i, 1]) - c(x, 0.0)).norm() < 0.02, "x={x}");
        }
    }

    #[test]
    fn ridge_support_is_on_the_line() {
        for v in [[1, 0], [1, 1], [2, -3], [0, 1]] {
            let w = canonicalize(&v).unwrap();
            let phi = OneDSpectrum::from_pairs((-5..=5).map(|k| (k, c(k as f64 + 0.5, 1.0))));
            let s = ridge_synthesize(&phi, &w);
            assert_eq!(s.len(), 11);
            for (k, _) in s.iter() {
                assert!(w.multiple_of(k).is_some());
            }
        }
    }

    #[test]
    fn analyze_single_harmonic() {
        let g = GridFunction::from_fn(vec![16, 16], |x| Complex64::from_polar(1.0, PI * (x[0] + x[1]))).unwrap();
        let s = analyze_grid(&g, 2).unwrap();
        for (k, v) in s.iter() {
            let want = if k == &vec![1, 1] { 1.0 } else { 0.0 };
            assert!((v - c(want, 0.0)).norm() < 1e-10, "k={k:?}");
        }
        assert!((s.get(&[1, 1]) - c(1.0, 0.0)).norm() < 1e-10);

        let one = GridFunction::from_real_fn(vec![8, 8], |_| 1.0).unwrap();
        let s1 = analyze_grid(&one, 3).unwrap().pruned(1e-12);
        assert_eq!(s1.len(), 1);
        assert!((s1.get(&[0, 0]) - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn analyze_xy_against_product_formula() {
        // Fine grid: midpoint error on the non-periodic integrand is O(h²).
        let g = GridFunction::from_real_fn(vec![2048, 2048], |x| x[0] * x[1]).unwrap();
        let s = analyze_grid(&g, 3).unwrap();
        for k in -3..=3i64 {
            for n in -3..=3i64 {
                let want = if k == 0 || n == 0 {
                    ZERO
                } else {
                    sawtooth_coeff_by_simpson(k) * sawtooth_coeff_by_simpson(n)
                };
                assert!((s.get(&[k, n]) - want).norm() < 1e-5, "({k},{n})");
                if k != 0 && n != 0 {
                    let closed = -(if (k + n) % 2 == 0 { 1.0 } else { -1.0 }) / (PI * PI * (k * n) as f64);
                    assert!((want - c(closed, 0.0)).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn analyze_rejects_coarse_grids() {
        let g = GridFunction::from_real_fn(vec![8, 5], |_| 1.0).unwrap();
        assert_eq!(
            analyze_grid(&g, 2),
            Err(Error::Aliasing {
                axis: 1,
                samples: 5,
                band: 2,
                required: 6
            })
        );
    }

    #[test]
    fn synthesize_examples() {
        let s = LatticeSpectrum::constant(2, c(3.0, 0.0));
        let g = synthesize_grid(&s, &[3, 4]).unwrap();
        assert!(g.values().iter().all(|v| (v - c(3.0, 0.0)).norm() < 1e-15));

        let s = LatticeSpectrum::from_pairs(2, [(vec![1, 0], c(1.0, 0.0)), (vec![0, 1], c(1.0, 0.0))]).unwrap();
        assert!((s.eval(&[0.0, 0.0]) - c(2.0, 0.0)).norm() < 1e-15);
        // Odd grids sample the origin.
        let g = synthesize_grid(&s, &[5, 5]).unwrap();
        assert!((g.at(&[2, 2]) - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dense_and_direct_synthesis_agree() {
        let s = LatticeSpectrum::from_pairs(
            2,
            [
                (vec![4, -3], c(0.5, 0.25)),
                (vec![-1, 0], c(-1.0, 2.0)),
                (vec![0, 4], c(0.0, 1.0)),
            ],
        )
        .unwrap();
        let shape = [12, 10];
        let a = synthesize_direct(&s, &shape).unwrap();
        let pointwise = GridFunction::from_fn(shape.to_vec(), |x| s.eval(x)).unwrap();
        assert!(a.max_abs_diff(&pointwise) < 1e-13);
        let dense = {
            let mut s2 = s.clone();
            for k in -4..=4i64 {
                for n in -4..=4i64 {
                    if s2.get(&[k, n]) == ZERO {
                        s2.insert(vec![k, n], c(1e-300, 0.0));
                    }
                }
            }
            synthesize_grid(&s2, &shape).unwrap()
        };
        assert!(dense.max_abs_diff(&pointwise) < 1e-13);
    }

    #[test]
    fn round_trip_within_band() {
        let s = LatticeSpectrum::from_pairs(
            3,
            [
                (vec![1, -2, 0], c(0.3, -0.1)),
                (vec![0, 0, 0], c(1.0, 0.0)),
                (vec![-2, 2, 1], c(0.0, 0.7)),
            ],
        )
        .unwrap();
        let g = synthesize_grid(&s, &[6, 6, 6]).unwrap();
        let back = analyze_grid(&g, 2).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-12);
    }

    #[test]
    fn inner_products_and_norms() {
        let a = LatticeSpectrum::harmonic(&[1, 2], c(1.0, 0.0));
        let b = LatticeSpectrum::harmonic(&[2, 1], c(1.0, 0.0));
        assert_eq!(inner_product(&a, &b, Measure::Normalized).unwrap(), ZERO);
        assert_eq!(inner_product(&a, &a, Measure::Normalized).unwrap(), c(1.0, 0.0));
        assert_eq!(inner_product(&a, &a, Measure::Lebesgue).unwrap(), c(4.0, 0.0));
        assert!(inner_product(&a, &LatticeSpectrum::new(3), Measure::Normalized).is_err());

        let k = LatticeSpectrum::constant(2, c(3.0, 4.0));
        assert_eq!(norm_sq(&k, Measure::Normalized), 25.0);

        // Inner product is conjugate-linear in the second slot.
        let s = LatticeSpectrum::harmonic(&[0, 1], c(0.0, 2.0));
        let t = LatticeSpectrum::harmonic(&[0, 1], c(1.0, 1.0));
        let ip = inner_product(&s, &t, Measure::Normalized).unwrap();
        assert_eq!(ip, c(0.0, 2.0) * c(1.0, -1.0));
        let ip2 = inner_product(&t, &s, Measure::Normalized).unwrap();
        assert_eq!(ip2, ip.conj());
    }

    #[test]
    fn xy_norm_converges_to_four_ninths() {
        let band = 400;
        let phi = OneDSpectrum::sawtooth(band);
        let mut s = LatticeSpectrum::new(2);
        for (&k, a) in phi.iter() {
            for (&n, b) in phi.iter() {
                s.insert(vec![k, n], a * b);
            }
        }
        let leb = norm_sq(&s, Measure::Lebesgue);
        let norm = norm_sq(&s, Measure::Normalized);
        // Exact truncated value: (Σ_{0<|k|<=K} 1/(π²k²))², a factor 4 for Lebesgue.
        let one_d: f64 = (1..=band).map(|k| 2.0 / (PI * PI * (k * k) as f64)).sum();
        assert!((norm - one_d * one_d).abs() < 1e-12 * norm);
        assert!((leb - 4.0 * one_d * one_d).abs() < 1e-12 * leb);
        // Tail of Σ 1/k² beyond K is ≈ 1/K, so the error is O(1/K).
        assert!((leb - 4.0 / 9.0).abs() < 1.5 / band as f64);
        assert!(leb < 4.0 / 9.0);
    }

    #[test]
    fn grid_quadrature_orthonormality() {
        let shape = vec![128, 128];
        let e = |k: [i64; 2]| {
            GridFunction::from_fn(shape.clone(), move |x| {
                Complex64::from_polar(1.0, PI * (k[0] as f64 * x[0] + k[1] as f64 * x[1]))
            })
            .unwrap()
        };
        let pts = [[0, 0], [1, 0], [4, -4], [-3, 2], [2, 2]];
        for a in pts {
            for b in pts {
                let ip = e(a).inner_product(&e(b), Measure::Normalized, QuadratureRule::Midpoint).unwrap();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((ip - c(want, 0.0)).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn parseval_bound_for_grid_analysis() {
        let s = LatticeSpectrum::from_pairs(
            2,
            [(vec![3, -1], c(1.0, 0.5)), (vec![0, 2], c(-0.25, 0.0)), (vec![6, 6], c(0.1, 0.1))],
        )
        .unwrap();
        let g = synthesize_grid(&s, &[32, 32]).unwrap();
        let energy = g.norm_sq(Measure::Normalized, QuadratureRule::Midpoint);
        let partial = norm_sq(&analyze_grid(&g, 3).unwrap(), Measure::Normalized);
        let full = norm_sq(&analyze_grid(&g, 15).unwrap(), Measure::Normalized);
        assert!(partial <= energy + 1e-12);
        assert!(partial < energy - 1e-3);
        assert!((full - energy).abs() < 1e-8);
    }

    #[test]
    fn analysis_and_synthesis_are_linear() {
        let f = GridFunction::from_real_fn(vec![16, 12], |x| (x[0] * 3.0).sin() + x[1]).unwrap();
        let g = GridFunction::from_real_fn(vec![16, 12], |x| x[0] * x[1] * x[1]).unwrap();
        let (a, b) = (c(2.0, -1.0), c(-0.5, 0.25));
        let combo = GridFunction::new(
            vec![16, 12],
            f.values().iter().zip(g.values()).map(|(u, v)| a * u + b * v).collect(),
        )
        .unwrap();
        let lhs = analyze_grid(&combo, 4).unwrap();
        let rhs = analyze_grid(&f, 4)
            .unwrap()
            .scaled(a)
            .add(&analyze_grid(&g, 4).unwrap().scaled(b))
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-13);

        let sa = LatticeSpectrum::harmonic(&[1, 1], c(1.0, 0.0));
        let sb = LatticeSpectrum::harmonic(&[0, -2], c(0.0, 1.0));
        let sum = synthesize_grid(&sa.scaled(a).add(&sb.scaled(b)).unwrap(), &[8, 8]).unwrap();
        let ga = synthesize_grid(&sa, &[8, 8]).unwrap();
        let gb = synthesize_grid(&sb, &[8, 8]).unwrap();
        let manual = GridFunction::new(
            vec![8, 8],
            ga.values().iter().zip(gb.values()).map(|(u, v)| a * u + b * v).collect(),
        )
        .unwrap();
        assert!(sum.max_abs_diff(&manual) < 1e-13);
    }

    #[test]
    fn grid_validation() {
        assert!(GridFunction::new(vec![1, 4], vec![ZERO; 4]).is_err());
        assert!(GridFunction::new(vec![2, 2], vec![ZERO; 3]).is_err());
        assert!(GridFunction::new(vec![], vec![]).is_err());
    }

    #[test]
    fn measure_parsing() {
        assert_eq!("lebesgue".parse::<Measure>().unwrap(), Measure::Lebesgue);
        assert!("counting".parse::<Measure>().is_err());
    }
}
