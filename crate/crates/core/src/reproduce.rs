//! The worked examples as a pass/fail table.

use std::fmt;

use num_complex::Complex64;

use crate::annihilator::{convolve_hats, haar_hat, verify_annihilation, HatFunction};
use crate::direction::DirectionSet;
use crate::projection::{distance_sq_by_complement, project};
use crate::quadrature::QuadratureRule;
use crate::spectrum::{analyze_grid, inner_product, norm_sq, GridFunction, LatticeSpectrum, Measure};
use crate::Result;

/// One reproduced quantity.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: &'static str,
    pub value: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Row {
    fn new(name: &'static str, value: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            name,
            value,
            expected,
            tolerance,
            passed: (value - expected).abs() <= tolerance,
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<6} {:<48} value={:<24e} expected={:<12e} tol={:e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.expected,
            self.tolerance
        )
    }
}

/// Renders rows one per line.
pub fn table(rows: &[Row]) -> String {
    rows.iter().map(|r| format!("{r}\n")).collect()
}

/// `dist²(xy, H_{e1,e2})` under Lebesgue measure with a band-64 spectrum.
///
/// The squared norm comes from quadrature that is exact for cubics; the
/// spectrum supplies the part on the coordinate axes, which is zero.
pub fn xy_distance_sq(band: usize) -> Result<f64> {
    let n = 2 * band + 2;
    let f = GridFunction::from_real_fn(vec![n, n], |x| x[0] * x[1])?;
    let s = analyze_grid(&f, band)?.pruned(1e-15);
    let total = f.norm_sq(Measure::Lebesgue, QuadratureRule::CorrectedMidpoint);
    distance_sq_by_complement(total, &s, &DirectionSet::axes(2), Measure::Lebesgue)
}

/// `2e^{iπx} + 3e^{iπ(x+y)}`.
pub fn ab_example() -> LatticeSpectrum {
    LatticeSpectrum::from_pairs(
        2,
        [
            (vec![1, 0], Complex64::new(2.0, 0.0)),
            (vec![1, 1], Complex64::new(3.0, 0.0)),
        ],
    )
    .expect("dimensions agree")
}

/// Max `|⟨e_w, e_w'⟩|` over distinct `w, w' ∈ [-r, r]²`: spectral and on a grid.
pub fn harmonic_orthogonality(r: i64, grid: usize) -> Result<(f64, f64)> {
    let pts: Vec<Vec<i64>> = (-r..=r)
        .flat_map(|a| (-r..=r).map(move |b| vec![a, b]))
        .collect();
    let grids = pts
        .iter()
        .map(|k| {
            let k = [k[0] as f64, k[1] as f64];
            GridFunction::from_fn(vec![grid, grid], move |x| {
                Complex64::from_polar(1.0, std::f64::consts::PI * (k[0] * x[0] + k[1] * x[1]))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut spectral, mut quad) = (0.0f64, 0.0f64);
    for i in 0..pts.len() {
        for j in 0..pts.len() {
            if i == j {
                continue;
            }
            let a = LatticeSpectrum::harmonic(&pts[i], Complex64::new(1.0, 0.0));
            let b = LatticeSpectrum::harmonic(&pts[j], Complex64::new(1.0, 0.0));
            spectral = spectral.max(inner_product(&a, &b, Measure::Normalized)?.norm());
            let g = grids[i].inner_product(&grids[j], Measure::Normalized, QuadratureRule::Midpoint)?;
            quad = quad.max(g.norm());
        }
    }
    Ok((spectral, quad))
}

/// The two-factor hat of the closing example and its displayed closed form.
pub fn two_factor_hat() -> Result<HatFunction> {
    let f1 = haar_hat(&[0.0, 1.0])?.times(&HatFunction::sinc(2, 0)?)?;
    let f2 = haar_hat(&[1.0, 0.0])?.times(&HatFunction::sinc(2, 1)?)?;
    convolve_hats(&[f1, f2])
}

/// `((cos ξ₂ - 1)/ξ₂)(sin ξ₁/ξ₁)((cos ξ₁ - 1)/ξ₁)(sin ξ₂/ξ₂)`, evaluated literally.
pub fn two_factor_display(xi1: f64, xi2: f64) -> f64 {
    ((xi2.cos() - 1.0) / xi2) * (xi1.sin() / xi1) * ((xi1.cos() - 1.0) / xi1) * (xi2.sin() / xi2)
}

/// Runs every worked example.
pub fn run() -> Result<Vec<Row>> {
    let mut rows = Vec::new();

    rows.push(Row::new("xy distance^2 to axis ridges (lebesgue)", xy_distance_sq(64)?, 4.0 / 9.0, 1e-6));

    let ab = project(&ab_example(), &DirectionSet::axes(2), Measure::Normalized)?;
    rows.push(Row::new("A=2,B=3 distance to axis ridges", ab.distance(), 3.0, 0.0));
    rows.push(Row::new(
        "A=2,B=3 projected norm^2 (normalized)",
        norm_sq(&ab.projected, Measure::Normalized),
        4.0,
        0.0,
    ));

    let (spectral, quad) = harmonic_orthogonality(3, 128)?;
    rows.push(Row::new("harmonic orthogonality on [-3,3]^2, spectral", spectral, 0.0, 0.0));
    rows.push(Row::new("harmonic orthogonality on [-3,3]^2, 128^2 grid", quad, 0.0, 1e-8));

    let hat = two_factor_hat()?;
    let report = verify_annihilation(&hat, &[vec![1.0, 0.0], vec![0.0, 1.0]], 64, 0.0)?;
    rows.push(Row::new("two-factor hat on axis lines, max |value|", report.max_abs, 0.0, 0.0));
    let display_err = [(0.3, -1.7), (2.5, 4.0), (-6.1, 0.9), (1.1, 1.1), (-3.0, 7.5)]
        .iter()
        .map(|&(a, b)| (hat.eval(&[a, b]) - two_factor_display(a, b)).abs())
        .fold(0.0, f64::max);
    rows.push(Row::new("two-factor hat vs displayed formula", display_err, 0.0, 1e-12));

    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_rows_pass() {
        let rows = run().unwrap();
        assert!(rows.len() >= 6);
        for r in &rows {
            assert!(r.passed, "{r}");
        }
        let t = table(&rows);
        assert_eq!(t.lines().count(), rows.len());
        assert!(t.lines().all(|l| l.starts_with("PASS")));
    }

    #[test]
    fn failing_row_is_marked() {
        let r = Row::new("x", 1.0, 0.0, 0.5);
        assert!(!r.passed);
        assert!(r.to_string().starts_with("FAIL"));
    }
}
