//! Midpoint quadrature on `[-1, 1]` and tensor contractions over grids.
//!
//! Grids in this crate sample cell centres `x_i = -1 + (2i + 1)/n`. The plain
//! midpoint rule on those nodes is exact for the harmonics `e^{iπkx}` with
//! `|k| < n`, which is what lattice analysis needs. Integrands that are not
//! 2-periodic (Fourier transforms at off-lattice frequencies, polynomials)
//! lose accuracy at the interval ends; [`QuadratureRule::CorrectedMidpoint`]
//! replaces the first and last few weights with Gregory-type end corrections
//! derived from the midpoint Euler–Maclaurin expansion.

use num_complex::Complex64;

use crate::par;

/// Number of end nodes carrying corrected weights.
const END_NODES: usize = 6;

/// Per-axis weight rule for tensor quadrature on `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    /// Equal weights `h = 2/n`.
    #[default]
    Midpoint,
    /// Midpoint weights with sixth-order end corrections (falls back to the
    /// plain rule when `n < 2·6`).
    CorrectedMidpoint,
}

/// Cell-centre nodes of an `n`-point grid on `[-1, 1]`.
pub fn nodes(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| -1.0 + (2 * i + 1) as f64 / n as f64)
        .collect()
}

/// Weights for `n` cell-centre nodes under `rule`.
pub fn weights(n: usize, rule: QuadratureRule) -> Vec<f64> {
    let h = 2.0 / n as f64;
    let mut w = vec![h; n];
    if rule == QuadratureRule::CorrectedMidpoint && n >= 2 * END_NODES {
        for (i, a) in end_corrections().iter().enumerate() {
            w[i] += h * a;
            w[n - 1 - i] += h * a;
        }
    }
    w
}

/// Relative weight corrections `a_i` for the first `END_NODES` nodes.
///
/// Matching the Taylor expansion of `Σ a_i h f(a + (i + ½)h)` about the end
/// point against the midpoint error terms `B_{2k}(½) h^{2k} f^{(2k-1)}(a) / (2k)!`
/// gives the linear system `Σ_i a_i (i + ½)^r / r! = c_r`, with `c_r` the
/// Bernoulli coefficient for odd `r` and zero for even `r`.
fn end_corrections() -> [f64; END_NODES] {
    // B_2(1/2) = -1/12, B_4(1/2) = 7/240, B_6(1/2) = -31/1344
    let bern_half = [-1.0 / 12.0, 7.0 / 240.0, -31.0 / 1344.0];
    let mut a = [[0.0f64; END_NODES + 1]; END_NODES];
    let mut fact = 1.0;
    for (r, row) in a.iter_mut().enumerate() {
        if r > 0 {
            fact *= r as f64;
        }
        for (i, cell) in row.iter_mut().take(END_NODES).enumerate() {
            *cell = (i as f64 + 0.5).powi(r as i32) / fact;
        }
        row[END_NODES] = if r % 2 == 1 {
            bern_half[r / 2] / (fact * (r + 1) as f64)
        } else {
            0.0
        };
    }
    solve_dense(a)
}

/// Gaussian elimination with partial pivoting on an augmented square system.
fn solve_dense<const N: usize, const M: usize>(mut a: [[f64; M]; N]) -> [f64; N] {
    for col in 0..N {
        let piv = (col..N)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap_or(col);
        a.swap(col, piv);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for k in col..M {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let mut s = a[row][N];
        for k in row + 1..N {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    x
}

/// Contracts one axis of a row-major tensor with a dense matrix.
///
/// `data` has shape `shape`; the result replaces `shape[axis]` by
/// `matrix.len()` with `out[.., r, ..] = Σ_i matrix[r][i] · data[.., i, ..]`.
pub(crate) fn contract_axis(
    data: &[Complex64],
    shape: &[usize],
    axis: usize,
    matrix: &[Vec<Complex64>],
) -> (Vec<Complex64>, Vec<usize>) {
    let n = shape[axis];
    let outer: usize = shape[..axis].iter().product();
    let inner: usize = shape[axis + 1..].iter().product();
    let rows = matrix.len();
    let mut out = vec![Complex64::new(0.0, 0.0); outer * rows * inner];
    if !out.is_empty() {
        par::for_each_chunk_mut(&mut out, inner, |q, dst| {
            let (o, r) = (q / rows, q % rows);
            let m = &matrix[r];
            let base = o * n * inner;
            for (i, &coef) in m.iter().enumerate().take(n) {
                if coef == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = &data[base + i * inner..base + (i + 1) * inner];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += coef * s;
                }
            }
        });
    }
    let mut new_shape = shape.to_vec();
    new_shape[axis] = rows;
    (out, new_shape)
}

/// `Σ_x data(x) Π_j vectors[j][x_j]`, contracting the last axis first.
pub(crate) fn contract_all(data: &[Complex64], shape: &[usize], vectors: &[Vec<Complex64>]) -> Complex64 {
    contract_all_many(data, shape, std::slice::from_ref(&vectors.to_vec()))[0]
}

/// [`contract_all`] for several vector families at once.
///
/// Each contiguous row of the last axis is read once and reduced against
/// every family while it is in cache, so the cost of streaming `data` is
/// paid once rather than per family.
pub(crate) fn contract_all_many(
    data: &[Complex64],
    shape: &[usize],
    families: &[Vec<Vec<Complex64>>],
) -> Vec<Complex64> {
    let m = shape.len();
    if m == 0 {
        return vec![data.first().copied().unwrap_or_default(); families.len()];
    }
    debug_assert!(families.iter().all(|v| v.len() == m));
    let last = shape[m - 1];
    let rows = data.len() / last.max(1);
    let nf = families.len();
    // reduced[r * nf + f]: row r against family f's last-axis vector.
    let reduced: Vec<Vec<Complex64>> = par::map_indices(rows, |r| {
        let row = &data[r * last..(r + 1) * last];
        families
            .iter()
            .map(|fam| {
                let (mut re, mut im) = (0.0, 0.0);
                for (x, c) in row.iter().zip(&fam[m - 1]) {
                    re += x.re * c.re - x.im * c.im;
                    im += x.re * c.im + x.im * c.re;
                }
                Complex64::new(re, im)
            })
            .collect()
    });
    (0..nf)
        .map(|f| {
            let mut cur: Vec<Complex64> = reduced.iter().map(|row| row[f]).collect();
            let mut cur_shape = shape[..m - 1].to_vec();
            for axis in (0..m - 1).rev() {
                let (next, s) = contract_axis(&cur, &cur_shape, axis, std::slice::from_ref(&families[f][axis]));
                cur = next;
                cur_shape = s;
            }
            cur[0]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(n: usize, rule: QuadratureRule, f: impl Fn(f64) -> f64) -> f64 {
        nodes(n)
            .iter()
            .zip(weights(n, rule))
            .map(|(&x, w)| w * f(x))
            .sum()
    }

    #[test]
    fn nodes_are_cell_centres() {
        assert_eq!(nodes(2), vec![-0.5, 0.5]);
        assert_eq!(nodes(4), vec![-0.75, -0.25, 0.25, 0.75]);
    }

    #[test]
    fn corrected_rule_is_exact_for_low_degree_polynomials() {
        for n in [12, 16, 33, 64] {
            for q in 0..=5 {
                let exact = if q % 2 == 0 { 2.0 / (q as f64 + 1.0) } else { 0.0 };
                let got = integrate(n, QuadratureRule::CorrectedMidpoint, |x| x.powi(q));
                assert!((got - exact).abs() < 1e-13, "n={n} q={q}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn plain_midpoint_error_matches_leading_term() {
        // ∫ x² = 2/3, midpoint error is -(h²/24)(f'(1) - f'(-1)) = -h²/6.
        let n = 100;
        let h = 2.0 / n as f64;
        let got = integrate(n, QuadratureRule::Midpoint, |x| x * x);
        assert!((got - (2.0 / 3.0 - h * h / 6.0)).abs() < 1e-14);
    }

    #[test]
    fn corrected_rule_converges_on_oscillatory_integrand() {
        // ∫_{-1}^{1} cos(a x) dx = 2 sin(a)/a
        let a = 7.3f64;
        let exact = 2.0 * a.sin() / a;
        let err = |n| (integrate(n, QuadratureRule::CorrectedMidpoint, |x| (a * x).cos()) - exact).abs();
        let plain = (integrate(128, QuadratureRule::Midpoint, |x| (a * x).cos()) - exact).abs();
        assert!(err(128) < 1e-8);
        assert!(err(128) < 1e-4 * plain);
        // At least sixth order: halving h gains a factor of 64.
        assert!(err(64) / err(128) > 64.0);
    }

    #[test]
    fn small_grids_fall_back_to_midpoint() {
        assert_eq!(weights(8, QuadratureRule::CorrectedMidpoint), vec![0.25; 8]);
    }

    #[test]
    fn contract_all_matches_naive_sum() {
        let shape = [3usize, 4, 2];
        let data: Vec<Complex64> = (0..24)
            .map(|i| Complex64::new(i as f64 * 0.5 - 3.0, (i % 5) as f64))
            .collect();
        let vecs: Vec<Vec<Complex64>> = shape
            .iter()
            .enumerate()
            .map(|(a, &n)| (0..n).map(|i| Complex64::new(1.0 + a as f64, i as f64 * 0.25)).collect())
            .collect();
        let mut naive = Complex64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..4 {
                for k in 0..2 {
                    naive += data[(i * 4 + j) * 2 + k] * vecs[0][i] * vecs[1][j] * vecs[2][k];
                }
            }
        }
        let got = contract_all(&data, &shape, &vecs);
        assert!((got - naive).norm() < 1e-10);
    }
}
