//! Rational projective direction classes.
//!
//! Two nonzero vectors are equivalent when one is a nonzero multiple of the
//! other. Every class containing a lattice point has a unique primitive
//! representative (coordinates with gcd 1) whose first nonzero coordinate is
//! positive; [`DirectionClass`] always stores that representative, so class
//! equivalence is plain equality.
//!
//! A set of classes is *complete* when the integer lines `Z·w` cover
//! `Z^m \ {0}` and meet only at the origin. Completeness is checked on the
//! finite box `[-N, N]^m`; the full lattice condition cannot be enumerated.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_integer::Integer;

use crate::{par, Error, Result};

/// Default box radius for completeness checks.
pub const DEFAULT_BOX_RADIUS: i64 = 8;

/// Canonical primitive integer representative of a projective class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectionClass(Vec<i64>);

impl DirectionClass {
    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }

    /// The representative as a real vector (not normalised).
    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&v| v as f64).collect()
    }

    /// `t·w` for an integer multiplier `t`.
    pub fn scaled(&self, t: i64) -> Vec<i64> {
        self.0.iter().map(|&v| v * t).collect()
    }

    /// Returns `Some(t)` when `k = t·w` for an integer `t`.
    pub fn multiple_of(&self, k: &[i64]) -> Option<i64> {
        if k.len() != self.0.len() {
            return None;
        }
        let pivot = self.0.iter().position(|&v| v != 0)?;
        let (q, r) = k[pivot].div_rem(&self.0[pivot]);
        if r != 0 {
            return None;
        }
        self.0
            .iter()
            .zip(k)
            .all(|(&w, &kv)| w * q == kv)
            .then_some(q)
    }
}

impl AsRef<[i64]> for DirectionClass {
    fn as_ref(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for DirectionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// gcd of the absolute values; the gcd of a vector with one nonzero entry is
/// that entry's absolute value.
pub fn gcd_of(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, &x| acc.gcd(&x))
}

/// Reduces a nonzero integer vector to its canonical class representative.
pub fn canonicalize(v: &[i64]) -> Result<DirectionClass> {
    let g = gcd_of(v);
    if g == 0 {
        return Err(Error::NotADirection);
    }
    let sign = if v.iter().find(|&&x| x != 0).copied().unwrap_or(0) < 0 {
        -1
    } else {
        1
    };
    Ok(DirectionClass(v.iter().map(|&x| sign * x / g).collect()))
}

/// Whether two nonzero integer vectors span the same line.
pub fn equivalent(v: &[i64], v2: &[i64]) -> Result<bool> {
    if v.len() != v2.len() {
        return Err(Error::DimensionMismatch {
            expected: v.len(),
            found: v2.len(),
        });
    }
    Ok(canonicalize(v)? == canonicalize(v2)?)
}

/// An ordered collection of pairwise distinct direction classes of one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionSet {
    dim: usize,
    dirs: Vec<DirectionClass>,
}

impl DirectionSet {
    /// Builds a set, rejecting mixed dimensions and repeated classes.
    pub fn new(dim: usize, dirs: Vec<DirectionClass>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(dirs.len());
        for d in &dirs {
            if d.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: d.dim(),
                });
            }
            if !seen.insert(d) {
                return Err(Error::invalid(format!("direction ({d}) listed twice")));
            }
        }
        Ok(Self { dim, dirs })
    }

    /// Canonicalises raw integer vectors, merging equivalent ones.
    pub fn from_vectors<V: AsRef<[i64]>>(dim: usize, vectors: &[V]) -> Result<Self> {
        let mut dirs = Vec::with_capacity(vectors.len());
        let mut seen = HashSet::new();
        for v in vectors {
            let v = v.as_ref();
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let c = canonicalize(v)?;
            if seen.insert(c.clone()) {
                dirs.push(c);
            }
        }
        Ok(Self { dim, dirs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DirectionClass> {
        self.dirs.iter()
    }

    pub fn as_slice(&self) -> &[DirectionClass] {
        &self.dirs
    }

    /// The coordinate axes `e_1, …, e_m`.
    pub fn axes(dim: usize) -> Self {
        let dirs = (0..dim)
            .rev()
            .map(|j| {
                let mut v = vec![0; dim];
                v[j] = 1;
                DirectionClass(v)
            })
            .collect();
        Self { dim, dirs }
    }

    /// Whether the nonzero lattice point `k` lies on some line `Z·w`.
    /// The origin lies on every line.
    pub fn covers(&self, k: &[i64]) -> bool {
        match canonicalize(k) {
            Ok(c) => self.dirs.contains(&c),
            Err(_) => true,
        }
    }
}

impl<'a> IntoIterator for &'a DirectionSet {
    type Item = &'a DirectionClass;
    type IntoIter = std::slice::Iter<'a, DirectionClass>;
    fn into_iter(self) -> Self::IntoIter {
        self.dirs.iter()
    }
}

impl std::ops::Deref for DirectionSet {
    type Target = [DirectionClass];
    fn deref(&self) -> &[DirectionClass] {
        &self.dirs
    }
}

/// Calls `f` on every point of `[-n, n]^m` in lexicographic order.
pub(crate) fn for_each_box_point(m: usize, n: i64, mut f: impl FnMut(&[i64])) {
    if m == 0 {
        return;
    }
    let mut k = vec![-n; m];
    loop {
        f(&k);
        let mut axis = m;
        loop {
            if axis == 0 {
                return;
            }
            axis -= 1;
            if k[axis] < n {
                k[axis] += 1;
                break;
            }
            k[axis] = -n;
        }
    }
}

/// All classes whose canonical representative lies in `[-n, n]^m`, in
/// lexicographic order.
pub fn enumerate_primitive(m: usize, n: i64) -> Result<DirectionSet> {
    if m == 0 || n < 1 {
        return Err(Error::invalid(format!(
            "enumerate_primitive needs m >= 1 and N >= 1 (got m={m}, N={n})"
        )));
    }
    // Canonical representatives have a nonnegative first coordinate; split the
    // scan on it and concatenate in order.
    let slabs = par::map_indices((n + 1) as usize, |lead| {
        let lead = lead as i64;
        let mut out = Vec::new();
        let mut tail_visit = |tail: &[i64]| {
            let mut v = Vec::with_capacity(m);
            v.push(lead);
            v.extend_from_slice(tail);
            if is_canonical_primitive(&v) {
                out.push(DirectionClass(v));
            }
        };
        if m == 1 {
            tail_visit(&[]);
        } else {
            for_each_box_point(m - 1, n, &mut tail_visit);
        }
        out
    });
    let dirs = slabs.into_iter().flatten().collect();
    DirectionSet::new(m, dirs)
}

fn is_canonical_primitive(v: &[i64]) -> bool {
    gcd_of(v) == 1 && v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Outcome of a box-restricted completeness check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletenessReport {
    pub complete_on_box: bool,
    /// Nonzero box points on no line `Z·w`.
    pub uncovered: Vec<Vec<i64>>,
    /// `(point, w, w')` for each pair of listed classes whose lines share the point.
    pub overlaps: Vec<(Vec<i64>, DirectionClass, DirectionClass)>,
    pub box_radius: i64,
}

/// Checks that every nonzero point of `[-n, n]^m` lies on exactly one line
/// `Z·w` for `w` in `dirs`.
///
/// `dirs` is a plain slice so that caller-built lists with repeated classes
/// can be checked; those repeats are what `overlaps` reports.
pub fn is_complete(dirs: &[DirectionClass], n: i64) -> Result<CompletenessReport> {
    let first = dirs
        .first()
        .ok_or_else(|| Error::invalid("completeness check needs a nonempty direction set"))?;
    if n < 1 {
        return Err(Error::invalid(format!("box radius must be >= 1, got {n}")));
    }
    let m = first.dim();
    let mut by_class: HashMap<&DirectionClass, Vec<usize>> = HashMap::new();
    for (i, d) in dirs.iter().enumerate() {
        if d.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: d.dim(),
            });
        }
        by_class.entry(d).or_default().push(i);
    }

    let mut uncovered = Vec::new();
    let mut overlaps = Vec::new();
    for_each_box_point(m, n, |k| {
        let Ok(c) = canonicalize(k) else {
            return;
        };
        match by_class.get(&c).map(Vec::as_slice) {
            None | Some([]) => uncovered.push(k.to_vec()),
            Some([_]) => {}
            Some(hits) => {
                for (a, &i) in hits.iter().enumerate() {
                    for &j in &hits[a + 1..] {
                        overlaps.push((k.to_vec(), dirs[i].clone(), dirs[j].clone()));
                    }
                }
            }
        }
    });
    Ok(CompletenessReport {
        complete_on_box: uncovered.is_empty() && overlaps.is_empty(),
        uncovered,
        overlaps,
        box_radius: n,
    })
}

/// A direction set that is complete on `[-n, n]^m`.
pub fn generate_complete(m: usize, n: i64) -> Result<DirectionSet> {
    enumerate_primitive(m, n)
}
