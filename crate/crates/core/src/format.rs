//! Plain-text file formats.
//!
//! All formats are line oriented. Blank lines and lines whose first
//! non-space character is `#` are ignored, except for the `# dim m` header of
//! a spectrum file. Parse errors carry 1-based line numbers.
//!
//! * Direction sets: one integer vector per line, space separated.
//! * Spectra: `k_1 … k_m re im` per nonzero coefficient, preceded by an
//!   optional `# dim m` line (required when the spectrum is empty). The
//!   coefficients are those of `e^{iπ k·x}` on `[-1,1]^m`; the Fourier
//!   transform `∫ e^{-iξ·x} F(x) dx` at `ξ = πk` equals `2^m` times them.
//! * Grids: a header `m n_1 … n_m`, then `n_1⋯n_m` lines `re im` in
//!   row-major order (last axis fastest) at the cell centres
//!   `x = -1 + (2i+1)/n`.
//! * Samples: CSV `x,re,im`, `im` optional. A header line `x,re,im` or
//!   `x,re` is allowed.
//! * Points: one point per line, coordinates separated by spaces or commas.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! emitted file parses back to an equal value.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::spectrum::{GridFunction, LatticeSpectrum};
use crate::stochastic::EmpiricalSample;
use crate::{Error, Result};

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_int(line: usize, tok: &str) -> Result<i64> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected an integer, found {tok:?}")))
}

fn parse_float(line: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| Error::parse(line, format!("expected a number, found {tok:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(line, format!("non-finite value {tok:?}")))
    }
}

/// Parses a direction-set file into raw integer vectors, in file order.
///
/// All vectors must have the same length and be nonzero. Canonicalisation
/// is left to the caller.
pub fn parse_directions(text: &str) -> Result<Vec<Vec<i64>>> {
    let mut out: Vec<Vec<i64>> = Vec::new();
    for (ln, l) in data_lines(text) {
        let v = l.split_whitespace().map(|t| parse_int(ln, t)).collect::<Result<Vec<_>>>()?;
        if let Some(first) = out.first() {
            if first.len() != v.len() {
                return Err(Error::parse(
                    ln,
                    format!("expected {} coordinates, found {}", first.len(), v.len()),
                ));
            }
        }
        if v.iter().all(|&x| x == 0) {
            return Err(Error::parse(ln, "the zero vector is not a direction"));
        }
        out.push(v);
    }
    Ok(out)
}

pub fn write_directions<V: AsRef<[i64]>>(dirs: &[V]) -> String {
    let mut s = String::new();
    for d in dirs {
        let line: Vec<String> = d.as_ref().iter().map(i64::to_string).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}

/// Parses a spectrum file. Repeated lattice points are summed.
pub fn parse_spectrum(text: &str) -> Result<LatticeSpectrum> {
    let mut dim: Option<usize> = None;
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let l = raw.trim();
        if let Some(rest) = l.strip_prefix('#') {
            let mut toks = rest.split_whitespace();
            if toks.next() == Some("dim") {
                let d = toks
                    .next()
                    .ok_or_else(|| Error::parse(ln, "missing value after `# dim`"))?;
                let d = parse_int(ln, d)?;
                if d < 1 {
                    return Err(Error::parse(ln, "dimension must be at least 1"));
                }
                if dim.is_some_and(|old| old != d as usize) {
                    return Err(Error::parse(ln, "conflicting dimension header"));
                }
                dim = Some(d as usize);
            }
            continue;
        }
        if l.is_empty() {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(Error::parse(ln, "expected `k_1 … k_m re im`"));
        }
        let m = toks.len() - 2;
        match dim {
            None => dim = Some(m),
            Some(d) if d != m => {
                return Err(Error::parse(ln, format!("expected {d} lattice coordinates, found {m}")));
            }
            _ => {}
        }
        let k = toks[..m].iter().map(|t| parse_int(ln, t)).collect::<Result<Vec<_>>>()?;
        let c = Complex64::new(parse_float(ln, toks[m])?, parse_float(ln, toks[m + 1])?);
        pairs.push((k, c));
    }
    let dim = dim.ok_or_else(|| Error::parse(0, "empty spectrum file without a `# dim` header"))?;
    LatticeSpectrum::from_pairs(dim, pairs)
}

pub fn write_spectrum(s: &LatticeSpectrum) -> String {
    let mut out = format!("# dim {}\n", s.dim());
    for (k, c) in s.iter() {
        for v in k {
            let _ = write!(out, "{v} ");
        }
        let _ = writeln!(out, "{} {}", c.re, c.im);
    }
    out
}

/// Parses a grid file.
pub fn parse_grid(text: &str) -> Result<GridFunction> {
    let mut lines = data_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty grid file"))?;
    let head = header
        .split_whitespace()
        .map(|t| parse_int(hl, t))
        .collect::<Result<Vec<_>>>()?;
    let m = *head.first().ok_or_else(|| Error::parse(hl, "missing header"))?;
    if m < 1 || head.len() != m as usize + 1 {
        return Err(Error::parse(hl, "header must be `m n_1 … n_m`"));
    }
    if head[1..].iter().any(|&n| n < 1) {
        return Err(Error::parse(hl, "grid sizes must be positive"));
    }
    let shape: Vec<usize> = head[1..].iter().map(|&n| n as usize).collect();
    let total: usize = shape.iter().product();
    let mut values = Vec::with_capacity(total);
    let mut last = hl;
    for (ln, l) in lines {
        last = ln;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(ln, "expected `re im`"));
        }
        if values.len() == total {
            return Err(Error::parse(ln, format!("more than {total} values")));
        }
        values.push(Complex64::new(parse_float(ln, toks[0])?, parse_float(ln, toks[1])?));
    }
    if values.len() != total {
        return Err(Error::parse(last, format!("expected {total} values, found {}", values.len())));
    }
    GridFunction::new(shape, values)
}

pub fn write_grid(g: &GridFunction) -> String {
    let mut out = g.dim().to_string();
    for n in g.shape() {
        let _ = write!(out, " {n}");
    }
    out.push('\n');
    for v in g.values() {
        let _ = writeln!(out, "{} {}", v.re, v.im);
    }
    out
}

/// Parses a sample CSV.
pub fn parse_samples(text: &str) -> Result<EmpiricalSample> {
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    for (ln, l) in data_lines(text) {
        let toks: Vec<&str> = l.split(',').map(str::trim).collect();
        if xs.is_empty() && fs.is_empty() && (toks == ["x", "re", "im"] || toks == ["x", "re"]) {
            continue;
        }
        if !(2..=3).contains(&toks.len()) {
            return Err(Error::parse(ln, "expected `x,re` or `x,re,im`"));
        }
        xs.push(parse_float(ln, toks[0])?);
        let im = match toks.get(2) {
            Some(t) => parse_float(ln, t)?,
            None => 0.0,
        };
        fs.push(Complex64::new(parse_float(ln, toks[1])?, im));
    }
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    EmpiricalSample::new(xs, fs)
}

pub fn write_samples(s: &EmpiricalSample) -> String {
    let mut out = String::from("x,re,im\n");
    for (x, f) in s.xs().iter().zip(s.fs()) {
        let _ = writeln!(out, "{x},{},{}", f.re, f.im);
    }
    out
}

/// Parses query points of the given dimension.
pub fn parse_points(text: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
    data_lines(text)
        .map(|(ln, l)| {
            let p = l
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| parse_float(ln, t))
                .collect::<Result<Vec<_>>>()?;
            if p.len() != dim {
                return Err(Error::parse(ln, format!("expected {dim} coordinates, found {}", p.len())));
            }
            Ok(p)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn directions_parse_with_comments() {
        let d = parse_directions("# axes\n1 0\n\n  0 1\n4 -6 # not allowed here\n");
        assert_eq!(d, Err(Error::parse(5, "expected an integer, found \"#\"")));
        let d = parse_directions("# axes\n1 0\n\n  0 1\n4 -6\n").unwrap();
        assert_eq!(d, vec![vec![1, 0], vec![0, 1], vec![4, -6]]);
        assert_eq!(parse_directions(&write_directions(&d)).unwrap(), d);
    }

    #[test]
    fn direction_errors_are_line_numbered() {
        assert_eq!(
            parse_directions("1 0\n1 2 3\n"),
            Err(Error::parse(2, "expected 2 coordinates, found 3"))
        );
        assert!(matches!(parse_directions("1 0\n0 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_directions("1 x\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn spectrum_file() {
        let s = parse_spectrum("# dim 2\n1 0 2 0\n# comment\n1 1 3 0\n1 0 0.5 -1\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.get(&[1, 0]), Complex64::new(2.5, -1.0));
        assert_eq!(parse_spectrum(&write_spectrum(&s)).unwrap(), s);
        // Dimension inferred without header.
        assert_eq!(parse_spectrum("0 0 1 0\n").unwrap().dim(), 2);
        let empty = parse_spectrum("# dim 3\n").unwrap();
        assert_eq!((empty.dim(), empty.len()), (3, 0));
        assert_eq!(parse_spectrum(&write_spectrum(&empty)).unwrap(), empty);
    }

    #[test]
    fn spectrum_errors() {
        assert!(matches!(parse_spectrum(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_spectrum("# dim 2\n1 0 0 1\n1 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_spectrum("1 0 0 1\n1 0 2 0 1\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_spectrum("1 0 nan 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_spectrum("# dim 0\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn grid_file() {
        let g = GridFunction::from_fn(vec![3, 2], |x| Complex64::new(x[0], x[1] * 0.1)).unwrap();
        let text = write_grid(&g);
        assert!(text.starts_with("2 3 2\n"));
        assert_eq!(parse_grid(&text).unwrap(), g);
        assert!(matches!(parse_grid("2 2 2\n1 0\n1 0\n1 0\n"), Err(Error::Parse { line: 4, .. })));
        assert!(matches!(parse_grid("1 1\n1 0\n2 0\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(parse_grid("2 4\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn samples_file() {
        let s = parse_samples("x,re,im\n0.5,1\n-0.25,2,3\n").unwrap();
        assert_eq!(s.xs(), &[0.5, -0.25]);
        assert_eq!(s.fs(), &[Complex64::new(1.0, 0.0), Complex64::new(2.0, 3.0)]);
        assert_eq!(parse_samples(&write_samples(&s)).unwrap(), s);
        assert!(matches!(parse_samples("1,2\n3\n"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_samples("x,re\n"), Err(Error::EmptySample));
    }

    #[test]
    fn points_file() {
        let p = parse_points("1, 2\n# c\n-3.5 4e-1\n", 2).unwrap();
        assert_eq!(p, vec![vec![1.0, 2.0], vec![-3.5, 0.4]]);
        assert!(matches!(parse_points("1 2 3\n", 2), Err(Error::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn spectrum_round_trip(
            entries in prop::collection::vec(
                (prop::collection::vec(-20i64..=20, 3), -1e6f64..1e6, any::<f64>().prop_filter("finite", |v| v.is_finite())),
                0..30,
            )
        ) {
            let s = LatticeSpectrum::from_pairs(3, entries.into_iter().map(|(k, re, im)| (k, Complex64::new(re, im)))).unwrap();
            prop_assert_eq!(parse_spectrum(&write_spectrum(&s)).unwrap(), s);
        }

        #[test]
        fn grid_round_trip(n0 in 2usize..6, n1 in 2usize..6, seed in any::<u64>()) {
            let g = GridFunction::from_fn(vec![n0, n1], |x| {
                Complex64::new((x[0] * seed as f64).sin(), x[1].exp() / 3.0)
            }).unwrap();
            prop_assert_eq!(parse_grid(&write_grid(&g)).unwrap(), g);
        }
    }
}
