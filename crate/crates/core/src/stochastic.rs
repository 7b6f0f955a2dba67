//! Empirical composition and conditional-expectation operators.
//!
//! For a random variable `X` and a profile `φ`, composition `T_X φ = φ∘X`
//! is an isometry from `L²(μ_X)` into `L²(P)`; its adjoint is the
//! conditional expectation `T_X* F = E(F | X = ·)`. With a finite sample the
//! distribution `μ_X` is the empirical measure and `E(· | X)` is realised by
//! averaging over a partition of the `x`-axis into bins. That bin average is
//! an exact orthogonal projection in the empirical `L²`, which is what the
//! identities checked here rely on.
//!
//! Means are accumulated with a running-mean update (`m += (v - m)/k`), so a
//! bin holding identical values reproduces that value exactly and applying
//! the projection twice changes nothing, to the bit.

use num_complex::Complex64;

use crate::{par, Error, Result};

/// Paired observations `(X(ω_i), F(ω_i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    xs: Vec<f64>,
    fs: Vec<Complex64>,
}

impl EmpiricalSample {
    pub fn new(xs: Vec<f64>, fs: Vec<Complex64>) -> Result<Self> {
        if xs.is_empty() {
            return Err(Error::EmptySample);
        }
        if xs.len() != fs.len() {
            return Err(Error::invalid(format!(
                "{} x-values but {} f-values",
                xs.len(),
                fs.len()
            )));
        }
        if xs.iter().any(|x| !x.is_finite()) || fs.iter().any(|f| !f.re.is_finite() || !f.im.is_finite()) {
            return Err(Error::invalid("sample values must be finite"));
        }
        Ok(Self { xs, fs })
    }

    /// Real-valued observations.
    pub fn from_real(xs: Vec<f64>, fs: Vec<f64>) -> Result<Self> {
        Self::new(xs, fs.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn fs(&self) -> &[Complex64] {
        &self.fs
    }

    /// Same `xs`, new `fs`.
    pub fn with_values(&self, fs: Vec<Complex64>) -> Result<Self> {
        Self::new(self.xs.clone(), fs)
    }

    /// Empirical `E|F|² = (1/n) Σ |f_i|²`.
    pub fn norm_sq(&self) -> f64 {
        running_mean(self.fs.iter().map(|f| Complex64::new(f.norm_sqr(), 0.0))).re
    }

    /// Empirical `E(F)`.
    pub fn mean(&self) -> Complex64 {
        running_mean(self.fs.iter().copied())
    }
}

/// `∫ g dμ_X` for the empirical distribution of `xs`.
pub fn empirical_integral(xs: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    running_mean(xs.iter().map(|&x| Complex64::new(g(x), 0.0))).re
}

fn running_mean(values: impl Iterator<Item = Complex64>) -> Complex64 {
    let mut mean = Complex64::new(0.0, 0.0);
    for (k, v) in values.enumerate() {
        mean += (v - mean) / (k + 1) as f64;
    }
    mean
}

/// `T_X φ`: replaces each `f_i` by `φ(x_i)`.
pub fn compose<F>(phi: F, sample: &EmpiricalSample) -> Result<EmpiricalSample>
where
    F: Fn(f64) -> Complex64 + Sync + Send,
{
    let fs = par::map_slice(&sample.xs, |&x| phi(x));
    sample.with_values(fs)
}

/// How bin edges are placed on the `x`-axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Binning {
    /// Equal-width bins over `[min x, max x]`.
    #[default]
    EqualWidth,
    /// Edges at empirical quantiles; tied quantiles are merged, so fewer
    /// bins than requested can result.
    Quantile,
}

/// Bin-averaged conditional means of `F` given `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedConditional {
    /// Strictly increasing, `bins + 1` entries.
    pub edges: Vec<f64>,
    /// Mean of `F` per bin; `None` for empty bins.
    pub means: Vec<Option<Complex64>>,
    pub counts: Vec<usize>,
}

impl BinnedConditional {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }

    /// Bin containing `x`: half-open `[e_b, e_{b+1})`, last bin closed.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let n = self.bins();
        let (lo, hi) = (self.edges[0], self.edges[n]);
        if !(lo..=hi).contains(&x) {
            return None;
        }
        let b = self.edges.partition_point(|&e| e <= x);
        Some(b.saturating_sub(1).min(n - 1))
    }

    /// `E(F | X)(x)`: the mean of the bin containing `x`; `None` outside the
    /// range or in an empty bin.
    pub fn at(&self, x: f64) -> Option<Complex64> {
        self.bin_of(x).and_then(|b| self.means[b])
    }

    /// Evaluates the conditional mean at each sample point.
    ///
    /// Errors if some sample point falls outside the bins or into an empty one.
    pub fn apply(&self, sample: &EmpiricalSample) -> Result<Vec<Complex64>> {
        sample
            .xs
            .iter()
            .map(|&x| {
                self.at(x)
                    .ok_or_else(|| Error::invalid(format!("no conditional mean defined at x = {x}")))
            })
            .collect()
    }
}

/// Equal-width bin averages of `F` over `[min x, max x]`.
pub fn conditional_expectation(sample: &EmpiricalSample, nbins: usize) -> Result<BinnedConditional> {
    conditional_expectation_with(sample, nbins, Binning::EqualWidth)
}

/// Bin averages of `F` with the chosen edge placement.
pub fn conditional_expectation_with(
    sample: &EmpiricalSample,
    nbins: usize,
    binning: Binning,
) -> Result<BinnedConditional> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if nbins == 0 {
        return Err(Error::invalid("need at least one bin"));
    }
    let edges = match binning {
        Binning::EqualWidth => equal_width_edges(&sample.xs, nbins),
        Binning::Quantile => quantile_edges(&sample.xs, nbins),
    };
    Ok(average_on_edges(sample, edges))
}

/// Bin averages of `F` on caller-supplied strictly increasing edges.
pub fn conditional_expectation_on(sample: &EmpiricalSample, edges: Vec<f64>) -> Result<BinnedConditional> {
    if edges.len() < 2 || edges.windows(2).any(|e| !(e[0] < e[1])) {
        return Err(Error::invalid("bin edges must be strictly increasing with at least two entries"));
    }
    Ok(average_on_edges(sample, edges))
}

fn equal_width_edges(xs: &[f64], nbins: usize) -> Vec<f64> {
    let (mut lo, mut hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if lo == hi {
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / nbins as f64;
    let mut edges: Vec<f64> = (0..nbins).map(|b| lo + b as f64 * width).collect();
    edges.push(hi);
    edges
}

fn quantile_edges(xs: &[f64], nbins: usize) -> Vec<f64> {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut edges: Vec<f64> = (0..=nbins)
        .map(|b| sorted[((b * (n - 1)) as f64 / nbins as f64).round() as usize])
        .collect();
    edges.dedup();
    if edges.len() < 2 {
        let x = edges[0];
        edges = vec![x - 0.5, x + 0.5];
    }
    edges
}

fn average_on_edges(sample: &EmpiricalSample, edges: Vec<f64>) -> BinnedConditional {
    let nb = edges.len() - 1;
    let mut cond = BinnedConditional {
        edges,
        means: vec![None; nb],
        counts: vec![0; nb],
    };
    let mut acc = vec![Complex64::new(0.0, 0.0); nb];
    for (&x, &f) in sample.xs.iter().zip(&sample.fs) {
        if let Some(b) = cond.bin_of(x) {
            cond.counts[b] += 1;
            let delta = (f - acc[b]) / cond.counts[b] as f64;
            acc[b] += delta;
        }
    }
    for b in 0..nb {
        if cond.counts[b] > 0 {
            cond.means[b] = Some(acc[b]);
        }
    }
    cond
}

/// `|E((ψ∘X)·E(F|X)) - E((ψ∘X)·F)|` for a conditional built from `sample`.
///
/// Evaluated in centred form: within each bin `ψ` is split into its bin mean
/// plus a fluctuation, and the bin-mean part, whose contribution
/// `ψ̄_b Σ_{i∈b} (m_b - f_i)` vanishes identically, is dropped. What remains is
/// `(1/n) |Σ_i (ψ_i - ψ̄_{b(i)})(m_{b(i)} - f_i)|`, exactly zero for
/// bin-constant `ψ`.
pub fn adjointness_residual<P>(sample: &EmpiricalSample, psi: P, cond: &BinnedConditional) -> Result<f64>
where
    P: Fn(f64) -> Complex64 + Sync + Send,
{
    let bins = sample
        .xs
        .iter()
        .map(|&x| {
            cond.bin_of(x)
                .filter(|&b| cond.means[b].is_some())
                .ok_or_else(|| Error::invalid(format!("sample point x = {x} is outside the conditional's bins")))
        })
        .collect::<Result<Vec<usize>>>()?;
    let psis = par::map_slice(&sample.xs, |&x| psi(x));

    let nb = cond.bins();
    let mut psi_mean = vec![Complex64::new(0.0, 0.0); nb];
    let mut seen = vec![0usize; nb];
    for (&b, &p) in bins.iter().zip(&psis) {
        seen[b] += 1;
        let delta = (p - psi_mean[b]) / seen[b] as f64;
        psi_mean[b] += delta;
    }
    let mut total = Complex64::new(0.0, 0.0);
    for ((&b, &p), &f) in bins.iter().zip(&psis).zip(&sample.fs) {
        let fluct = p - psi_mean[b];
        if fluct != Complex64::new(0.0, 0.0) {
            total += fluct * (cond.means[b].unwrap_or_default() - f);
        }
    }
    Ok(total.norm() / sample.len() as f64)
}

/// Plain (uncentred) form of [`adjointness_residual`], for comparison.
pub fn adjointness_residual_direct<P>(sample: &EmpiricalSample, psi: P, cond: &BinnedConditional) -> Result<f64>
where
    P: Fn(f64) -> Complex64 + Sync + Send,
{
    let means = cond.apply(sample)?;
    let n = sample.len() as f64;
    let lhs: Complex64 = sample.xs.iter().zip(&means).map(|(&x, m)| psi(x) * m).sum::<Complex64>() / n;
    let rhs: Complex64 = sample.xs.iter().zip(&sample.fs).map(|(&x, f)| psi(x) * f).sum::<Complex64>() / n;
    Ok((lhs - rhs).norm())
}

/// Applies the empirical conditional expectation twice with the same bins and
/// returns `max_i |second_i - first_i|`, which is zero for a projection.
pub fn projection_identity_check(sample: &EmpiricalSample, nbins: usize) -> Result<f64> {
    let cond = conditional_expectation(sample, nbins)?;
    let first = sample.with_values(cond.apply(sample)?)?;
    let again = conditional_expectation_on(&first, cond.edges.clone())?;
    let second = again.apply(&first)?;
    Ok(first
        .fs
        .iter()
        .zip(&second)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}
