//! Explicit annihilators built in the Fourier ("hat") domain.
//!
//! The Haar-type ridge hat `ψ̂_z(ξ) = (cos(z·ξ) - 1)/(z·ξ)` vanishes on every
//! line `ξ = tw` with `z ⊥ w`. Convolution of originals is a pointwise
//! product of hats, so a product of such factors, one per direction, vanishes
//! on all of the lines at once: its original is orthogonal to every ridge
//! function along those directions.
//!
//! All verification happens on the hat side. A hat here is a product of
//! atoms; evaluation along a line `t ↦ hat(tw)` uses `z·(tw) = t(z·w)` so a
//! factor with `z·w = 0` in floating point is exactly zero on the line.
//! Grid realisations of these functions (via an inverse transform on a
//! truncated frequency box) are approximations whose truncation error is the
//! caller's to control.

use num_complex::Complex64;

use crate::spectrum::{LatticeSpectrum, OneDSpectrum};
use crate::{Error, Result};

/// Below this `|u|` the Haar hat is evaluated from its Taylor series.
pub const SERIES_SWITCH: f64 = 1e-4;

/// One factor of a [`HatFunction`].
#[derive(Debug, Clone, PartialEq)]
pub enum HatAtom {
    /// `(cos(z·ξ) - 1)/(z·ξ)`, zero where `z·ξ = 0`.
    HaarHat { z: Vec<f64> },
    /// `Π_j 2 sin(ξ_j)/ξ_j`, the transform of the indicator of `J^m`.
    SincBox,
    /// `sin(ξ_a)/ξ_a` on a single axis `a`.
    Sinc { axis: usize },
    /// `Σ_i weights_i · atoms_i(ξ)`.
    WeightedSum { weights: Vec<f64>, atoms: Vec<HatAtom> },
}

/// `(cos u - 1)/u` with the removable singularity filled in.
pub fn haar_profile(u: f64) -> f64 {
    if u.abs() < SERIES_SWITCH {
        let u2 = u * u;
        u * (-0.5 + u2 * (1.0 / 24.0 - u2 / 720.0))
    } else {
        // cos u - 1 = -2 sin²(u/2) avoids cancellation for moderate u.
        let s = (0.5 * u).sin();
        -2.0 * s * s / u
    }
}

/// `sin(u)/u` with value 1 at 0.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < SERIES_SWITCH {
        1.0 - u * u / 6.0
    } else {
        u.sin() / u
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl HatAtom {
    fn eval(&self, xi: &[f64]) -> f64 {
        match self {
            HatAtom::HaarHat { z } => haar_profile(dot(z, xi)),
            HatAtom::SincBox => xi.iter().map(|&x| 2.0 * sinc(x)).product(),
            HatAtom::Sinc { axis } => sinc(xi[*axis]),
            HatAtom::WeightedSum { weights, atoms } => {
                weights.iter().zip(atoms).map(|(w, a)| w * a.eval(xi)).sum()
            }
        }
    }

    fn eval_on_line(&self, w: &[f64], t: f64) -> f64 {
        match self {
            HatAtom::HaarHat { z } => haar_profile(t * dot(z, w)),
            HatAtom::SincBox => w.iter().map(|&x| 2.0 * sinc(t * x)).product(),
            HatAtom::Sinc { axis } => sinc(t * w[*axis]),
            HatAtom::WeightedSum { weights, atoms } => weights
                .iter()
                .zip(atoms)
                .map(|(c, a)| c * a.eval_on_line(w, t))
                .sum(),
        }
    }
}

/// A product of hat atoms on `R^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HatFunction {
    dim: usize,
    factors: Vec<HatAtom>,
}

impl HatFunction {
    /// Builds a hat from factors, checking every vector atom has length `dim`.
    pub fn new(dim: usize, factors: Vec<HatAtom>) -> Result<Self> {
        fn check(dim: usize, a: &HatAtom) -> Result<()> {
            match a {
                HatAtom::HaarHat { z } if z.len() != dim => Err(Error::DimensionMismatch {
                    expected: dim,
                    found: z.len(),
                }),
                HatAtom::Sinc { axis } if *axis >= dim => {
                    Err(Error::invalid(format!("sinc axis {axis} out of range for dimension {dim}")))
                }
                HatAtom::WeightedSum { weights, atoms } => {
                    if weights.len() != atoms.len() {
                        return Err(Error::invalid("weighted sum needs one weight per atom"));
                    }
                    atoms.iter().try_for_each(|a| check(dim, a))
                }
                _ => Ok(()),
            }
        }
        factors.iter().try_for_each(|a| check(dim, a))?;
        Ok(Self { dim, factors })
    }

    /// The indicator transform `Π_j 2 sinc(ξ_j)`.
    pub fn sinc_box(dim: usize) -> Self {
        Self {
            dim,
            factors: vec![HatAtom::SincBox],
        }
    }

    /// `sin(ξ_axis)/ξ_axis`.
    pub fn sinc(dim: usize, axis: usize) -> Result<Self> {
        Self::new(dim, vec![HatAtom::Sinc { axis }])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[HatAtom] {
        &self.factors
    }

    /// Pointwise product (convolution of originals).
    pub fn times(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Self { dim: self.dim, factors })
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        debug_assert_eq!(xi.len(), self.dim);
        self.factors.iter().map(|a| a.eval(xi)).product()
    }

    /// `hat(t·w)`, with each Haar factor evaluated as `ψ(t·(z·w))`.
    pub fn eval_on_line(&self, w: &[f64], t: f64) -> f64 {
        debug_assert_eq!(w.len(), self.dim);
        self.factors.iter().map(|a| a.eval_on_line(w, t)).product()
    }
}

/// `ψ̂_z(ξ) = (cos(z·ξ) - 1)/(z·ξ)`.
pub fn haar_hat(z: &[f64]) -> Result<HatFunction> {
    if z.iter().all(|&v| v == 0.0) {
        return Err(Error::NotADirection);
    }
    HatFunction::new(z.len(), vec![HatAtom::HaarHat { z: z.to_vec() }])
}

/// Product of hats; the original is the convolution of the originals.
pub fn convolve_hats(hats: &[HatFunction]) -> Result<HatFunction> {
    let (first, rest) = hats
        .split_first()
        .ok_or_else(|| Error::invalid("convolve_hats needs at least one hat"))?;
    rest.iter().try_fold(first.clone(), |acc, h| acc.times(h))
}

/// Average of Haar hats against the atomic measure `Σ_i weights_i δ_{z_i}`.
pub fn averaged_hat(zs: &[Vec<f64>], weights: &[f64]) -> Result<HatFunction> {
    let first = zs
        .first()
        .ok_or_else(|| Error::invalid("averaged_hat needs at least one atom"))?;
    if zs.len() != weights.len() {
        return Err(Error::invalid(format!(
            "{} atoms but {} weights",
            zs.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
        return Err(Error::invalid("weights must be finite and nonnegative"));
    }
    if weights.iter().all(|&w| w == 0.0) {
        return Err(Error::invalid("weights are all zero"));
    }
    let dim = first.len();
    let atoms = zs
        .iter()
        .map(|z| {
            if z.iter().all(|&v| v == 0.0) {
                Err(Error::NotADirection)
            } else {
                Ok(HatAtom::HaarHat { z: z.clone() })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    HatFunction::new(
        dim,
        vec![HatAtom::WeightedSum {
            weights: weights.to_vec(),
            atoms,
        }],
    )
}

/// An integer vector orthogonal to `w`: `w_i e_j - w_j e_i` for the first
/// nonzero coordinate `i` and the next axis `j`.
pub fn perpendicular(w: &[f64]) -> Result<Vec<f64>> {
    if w.len() < 2 {
        return Err(Error::invalid("no nonzero perpendicular exists in dimension 1"));
    }
    let i = w.iter().position(|&v| v != 0.0).ok_or(Error::NotADirection)?;
    let j = if i + 1 < w.len() { i + 1 } else { 0 };
    let mut z = vec![0.0; w.len()];
    z[j] = w[i];
    z[i] = -w[j];
    Ok(z)
}

/// Chebyshev points `8π cos((2i + 1)π / 2n)` on `[-8π, 8π]`.
pub fn chebyshev_ts(n: usize) -> Vec<f64> {
    let half = 8.0 * std::f64::consts::PI;
    (0..n)
        .map(|i| half * ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
        .collect()
}

/// Samples along one line, and the verdict of [`verify_annihilation`].
#[derive(Debug, Clone, PartialEq)]
pub struct AnnihilationReport {
    pub passed: bool,
    pub max_abs: f64,
    pub ts: Vec<f64>,
    /// `samples[d][i] = hat(ts[i]·W[d])`.
    pub samples: Vec<Vec<f64>>,
}

/// Samples `|hat(t·w)|` at Chebyshev points `t ∈ [-8π, 8π]` for each `w`.
pub fn verify_annihilation(
    hat: &HatFunction,
    dirs: &[Vec<f64>],
    t_samples: usize,
    tol: f64,
) -> Result<AnnihilationReport> {
    if t_samples < 16 {
        return Err(Error::invalid(format!("need at least 16 t-samples, got {t_samples}")));
    }
    if let Some(w) = dirs.iter().find(|w| w.len() != hat.dim()) {
        return Err(Error::DimensionMismatch {
            expected: hat.dim(),
            found: w.len(),
        });
    }
    let ts = chebyshev_ts(t_samples);
    let samples: Vec<Vec<f64>> = dirs
        .iter()
        .map(|w| ts.iter().map(|&t| hat.eval_on_line(w, t)).collect())
        .collect();
    let max_abs = samples
        .iter()
        .flatten()
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    Ok(AnnihilationReport {
        passed: max_abs <= tol,
        max_abs,
        ts,
        samples,
    })
}

/// Tensor-product spectrum `c_k = Π_j φ̂_j(k_j)` of odd one-variable factors.
///
/// Each factor must have zero mean and `φ̂(-k) = -φ̂(k)`; the product then has
/// no coefficient on any coordinate axis.
pub fn odd_product_spectrum(phis: &[OneDSpectrum]) -> Result<LatticeSpectrum> {
    if phis.is_empty() {
        return Err(Error::invalid("odd_product_spectrum needs at least one factor"));
    }
    for (j, phi) in phis.iter().enumerate() {
        if phi.get(0) != Complex64::new(0.0, 0.0) {
            return Err(Error::NotOdd(format!("factor {j} has nonzero mean coefficient")));
        }
        for (&k, c) in phi.iter() {
            let mirror = phi.get(-k);
            if (c + mirror).norm() > 1e-12 * c.norm().max(mirror.norm()) {
                return Err(Error::NotOdd(format!("factor {j}: coefficient {k} is not antisymmetric")));
            }
        }
    }
    let mut s = LatticeSpectrum::new(phis.len());
    let mut stack: Vec<(Vec<i64>, Complex64)> = vec![(Vec::new(), Complex64::new(1.0, 0.0))];
    for phi in phis {
        stack = stack
            .into_iter()
            .flat_map(|(k, c)| {
                phi.iter().map(move |(&kj, &cj)| {
                    let mut k2 = k.clone();
                    k2.push(kj);
                    (k2, c * cj)
                })
            })
            .collect();
    }
    for (k, c) in stack {
        s.insert(k, c);
    }
    Ok(s)
}

/// Samples `hat(πn)` for `|n_j| <= band` into a lattice spectrum with
/// `c_n = hat(πn)/2^m`.
///
/// For a hat that is the transform of a function supported in `J^m` this is
/// exactly its Fourier series on the cube; truncating to a finite band gives
/// a grid-realisable approximation.
pub fn lattice_samples(hat: &HatFunction, band: usize) -> LatticeSpectrum {
    let m = hat.dim();
    let mut s = LatticeSpectrum::new(m);
    let scale = 2f64.powi(-(m as i32));
    crate::direction::for_each_box_point(m, band as i64, |n| {
        let xi: Vec<f64> = n.iter().map(|&v| std::f64::consts::PI * v as f64).collect();
        s.insert(n.to_vec(), Complex64::new(hat.eval(&xi) * scale, 0.0));
    });
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direction::DirectionSet;
    use crate::projection::annihilates;
    use std::f64::consts::PI;

    #[test]
    fn haar_hat_examples() {
        let h = haar_hat(&[1.0, 0.0]).unwrap();
        assert!((h.eval(&[PI, 0.0]) + 2.0 / PI).abs() < 1e-15);
        assert_eq!(h.eval(&[0.0, 3.0]), 0.0);
        assert_eq!(haar_hat(&[0.0, 0.0]), Err(Error::NotADirection));
    }

    #[test]
    fn taylor_remainder_bound() {
        for i in 1..=400 {
            let u = 0.1 * i as f64 / 400.0;
            for u in [u, -u] {
                let two_terms = -u / 2.0 + u * u * u / 24.0;
                let rem = (haar_profile(u) - two_terms).abs();
                let slack = 4.0 * f64::EPSILON * haar_profile(u).abs();
                assert!(rem <= u.abs().powi(5) / 720.0 + slack, "u={u}");
            }
        }
    }

    #[test]
    fn profile_is_continuous_across_the_switch() {
        // Series and closed form agree at the switch point to rounding.
        let u = SERIES_SWITCH;
        let closed = -2.0 * (0.5 * u).sin().powi(2) / u;
        let series = u * (-0.5 + u * u * (1.0 / 24.0 - u * u / 720.0));
        assert_eq!(haar_profile(u), closed);
        assert!((series - closed).abs() <= 4.0 * f64::EPSILON * closed.abs());
        let below = u * (1.0 - 1e-12);
        assert_eq!(haar_profile(below), below * (-0.5 + below * below * (1.0 / 24.0 - below * below / 720.0)));
        assert!((1.0 - u * u / 6.0 - u.sin() / u).abs() <= f64::EPSILON);
    }

    #[test]
    fn sinc_box_limits() {
        let b = HatFunction::sinc_box(3);
        assert_eq!(b.eval(&[0.0, 0.0, 0.0]), 8.0);
        assert!(b.eval(&[PI, 0.0, 0.0]).abs() < 1e-15);
    }

    #[test]
    fn product_vanishes_where_a_factor_does() {
        let h = convolve_hats(&[haar_hat(&[0.0, 1.0]).unwrap(), haar_hat(&[1.0, 0.0]).unwrap()]).unwrap();
        for t in [-3.0, -0.5, 0.0, 1e-6, 2.0, 17.0] {
            assert_eq!(h.eval(&[t, 0.0]), 0.0);
            assert_eq!(h.eval(&[0.0, t]), 0.0);
        }
        let one = haar_hat(&[1.0, 2.0]).unwrap();
        assert_eq!(convolve_hats(std::slice::from_ref(&one)).unwrap(), one);
        assert!(convolve_hats(&[]).is_err());
        assert!(convolve_hats(&[one, haar_hat(&[1.0, 2.0, 3.0]).unwrap()]).is_err());
    }

    #[test]
    fn worked_two_factor_example() {
        // ψ_{w1} carries the Haar profile in ξ₂ and a box in x₁; ψ_{w2} the reverse.
        let f1 = haar_hat(&[0.0, 1.0]).unwrap().times(&HatFunction::sinc(2, 0).unwrap()).unwrap();
        let f2 = haar_hat(&[1.0, 0.0]).unwrap().times(&HatFunction::sinc(2, 1).unwrap()).unwrap();
        let h = convolve_hats(&[f1, f2]).unwrap();
        let display = |x1: f64, x2: f64| ((x2.cos() - 1.0) / x2) * (x1.sin() / x1) * ((x1.cos() - 1.0) / x1) * (x2.sin() / x2);
        for (x1, x2) in [(0.3, -1.7), (2.5, 4.0), (-6.1, 0.9)] {
            assert!((h.eval(&[x1, x2]) - display(x1, x2)).abs() < 1e-12);
        }
    }

    #[test]
    fn averaged_hat_examples() {
        let z = vec![1.0, -2.0];
        let a = averaged_hat(&[z.clone()], &[1.0]).unwrap();
        let h = haar_hat(&z).unwrap();
        for xi in [[0.3, 0.1], [2.0, -5.0]] {
            assert_eq!(a.eval(&xi), h.eval(&xi));
        }
        let b = averaged_hat(&[vec![0.0, 1.0], vec![0.0, 2.0]], &[1.0, 1.0]).unwrap();
        assert!((b.eval(&[0.0, PI]) + 2.0 / PI).abs() < 1e-15);
        // Atoms in the hyperplane ⊥ (1, 0) vanish on the line R(1, 0).
        for t in chebyshev_ts(32) {
            assert_eq!(b.eval_on_line(&[1.0, 0.0], t), 0.0);
        }
        assert!(averaged_hat(&[], &[]).is_err());
        assert!(averaged_hat(&[vec![1.0, 0.0]], &[0.0]).is_err());
        assert!(averaged_hat(&[vec![1.0, 0.0]], &[-1.0]).is_err());
        assert_eq!(averaged_hat(&[vec![0.0, 0.0]], &[1.0]), Err(Error::NotADirection));
    }

    #[test]
    fn verification_examples() {
        let w = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let h = convolve_hats(&[haar_hat(&[0.0, 1.0]).unwrap(), haar_hat(&[1.0, 0.0]).unwrap()]).unwrap();
        let r = verify_annihilation(&h, &w, 64, 1e-12).unwrap();
        assert!(r.passed);
        assert_eq!(r.max_abs, 0.0);
        assert_eq!(r.samples.len(), 2);

        let bad = haar_hat(&[1.0, 0.0]).unwrap();
        let r = verify_annihilation(&bad, &w[..1], 64, 1e-12).unwrap();
        assert!(!r.passed);
        assert!((bad.eval_on_line(&w[0], PI) + 2.0 / PI).abs() < 1e-15);

        assert!(verify_annihilation(&bad, &w, 8, 1e-12).is_err());
    }

    #[test]
    fn chebyshev_points_stay_in_range() {
        let ts = chebyshev_ts(64);
        assert_eq!(ts.len(), 64);
        assert!(ts.iter().all(|t| t.abs() < 8.0 * PI));
        assert!(ts.windows(2).all(|p| p[0] > p[1]));
    }

    #[test]
    fn perpendiculars_are_exact() {
        for w in [vec![1.0, 2.0], vec![0.0, 3.0, -1.0], vec![2.0, 0.0, 0.0], vec![0.0, 0.0, 5.0]] {
            let z = perpendicular(&w).unwrap();
            assert_eq!(dot(&z, &w), 0.0);
            assert!(z.iter().any(|&v| v != 0.0));
        }
        assert!(perpendicular(&[1.0]).is_err());
    }

    #[test]
    fn odd_products() {
        let saw = OneDSpectrum::sawtooth(8);
        let s = odd_product_spectrum(&[saw.clone(), saw.clone()]).unwrap();
        assert!(annihilates(&s, &DirectionSet::axes(2)));
        let pi2 = PI * PI;
        assert!((s.get(&[1, 2]) - Complex64::new(1.0 / (pi2 * 2.0), 0.0)).norm() < 1e-15);

        let cube = odd_product_spectrum(&[saw.clone(), OneDSpectrum::sawtooth(3), saw]).unwrap();
        assert!(cube.iter().all(|(k, _)| k.iter().all(|&v| v != 0)));
        assert!(annihilates(&cube, &DirectionSet::axes(3)));

        let with_mean = OneDSpectrum::from_pairs([(0, Complex64::new(1.0, 0.0))]);
        assert!(matches!(odd_product_spectrum(&[with_mean]), Err(Error::NotOdd(_))));
        let lopsided = OneDSpectrum::from_pairs([(1, Complex64::new(1.0, 0.0))]);
        assert!(matches!(odd_product_spectrum(&[lopsided]), Err(Error::NotOdd(_))));
    }

    #[test]
    fn lattice_samples_of_box_is_constant() {
        // Indicator of J^m has c_0 = 1 and nothing else.
        let s = lattice_samples(&HatFunction::sinc_box(2), 3).pruned(1e-15);
        assert_eq!(s.len(), 1);
        assert!((s.get(&[0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }
}
