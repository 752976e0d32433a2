//! Surfaces with boundary, their standard curves and arcs, and homology pairings.
//!
//! An orientable surface `Σ_{g,b+1}` carries the curves `a_i, b_i` (a symplectic
//! basis with `<a_i, b_i> = +1`), the chain curves `t_i ~ a_{i+1} - a_i`, the
//! boundary curves `∂_0, …, ∂_b`, arcs `r_j` from `∂_0` to `∂_j`, and the curves
//! `u_j = a_g # ∂_j`, which meet only `b_g` and `r_j`.
//!
//! A non-orientable surface `S_{n,b+1}` carries the one-sided crosscap cores
//! `a_1, …, a_n`, the two-sided sums `a_i + a_j` and `a_i + a_j + a_k + a_l`,
//! boundary curves, arcs, and the connected sums `(a_i + a_j) # ∂_k`.
//!
//! An arc `r_j` meets a closed class `x` in `λ_j(x) - λ_0(x)` points (counted
//! with sign on orientable surfaces, mod 2 otherwise).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub orientable: bool,
    /// Genus `g` for orientable surfaces, number of crosscaps `n` otherwise.
    pub genus: usize,
    /// Number of boundary components `b + 1`.
    pub boundaries: usize,
}

impl SurfaceSpec {
    pub fn orientable(genus: usize, boundaries: usize) -> Result<Self> {
        SurfaceSpec {
            orientable: true,
            genus,
            boundaries,
        }
        .validated()
    }

    pub fn non_orientable(genus: usize, boundaries: usize) -> Result<Self> {
        SurfaceSpec {
            orientable: false,
            genus,
            boundaries,
        }
        .validated()
    }

    pub fn validated(self) -> Result<Self> {
        if self.boundaries == 0 {
            return Err(Error::InvalidSurface(
                "surfaces must have at least one boundary component".into(),
            ));
        }
        if !self.orientable && self.genus == 0 {
            return Err(Error::InvalidSurface(
                "a non-orientable surface needs at least one crosscap".into(),
            ));
        }
        Ok(self)
    }

    /// Number of arcs `b`.
    pub fn arcs(&self) -> usize {
        self.boundaries - 1
    }

    /// Number of coordinates of a structure: `2g + b` or `n + b`.
    pub fn coordinate_len(&self) -> usize {
        if self.orientable {
            2 * self.genus + self.arcs()
        } else {
            self.genus + self.arcs()
        }
    }

    /// The curves and arcs whose q-values are the coordinates, in coordinate order.
    pub fn coordinate_curves(&self) -> Vec<NamedCurve> {
        let mut out = Vec::with_capacity(self.coordinate_len());
        for i in 1..=self.genus {
            out.push(NamedCurve::A(i));
            if self.orientable {
                out.push(NamedCurve::B(i));
            }
        }
        out.extend((1..=self.arcs()).map(NamedCurve::Arc));
        out
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientable {
            write!(f, "Σ_{{{},{}}}", self.genus, self.boundaries)
        } else {
            write!(f, "S_{{{},{}}}", self.genus, self.boundaries)
        }
    }
}

/// A curve or arc from the standard catalog. Handle and crosscap indices are
/// 1-based, boundary indices 0-based, matching `a_1, …` and `∂_0, …, ∂_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NamedCurve {
    A(usize),
    B(usize),
    T(usize),
    Boundary(usize),
    Arc(usize),
    U(usize),
    Pair(usize, usize),
    Quad([usize; 4]),
    PairBoundary { i: usize, j: usize, boundary: usize },
}

impl NamedCurve {
    pub fn is_arc(&self) -> bool {
        matches!(self, NamedCurve::Arc(_))
    }

    pub fn is_valid_on(&self, s: &SurfaceSpec) -> bool {
        let (g, b) = (s.genus, s.arcs());
        let crosscap = |i: usize| i >= 1 && i <= g;
        match *self {
            NamedCurve::A(i) => crosscap(i),
            NamedCurve::B(i) => s.orientable && crosscap(i),
            NamedCurve::T(i) => s.orientable && i >= 1 && i < g,
            NamedCurve::Boundary(j) => j <= b,
            NamedCurve::Arc(j) => j >= 1 && j <= b,
            NamedCurve::U(j) => s.orientable && g >= 1 && j >= 1 && j <= b,
            NamedCurve::Pair(i, j) => !s.orientable && crosscap(i) && i < j && j <= g,
            NamedCurve::Quad(q) => !s.orientable && crosscap(q[0]) && q.windows(2).all(|w| w[0] < w[1]) && q[3] <= g,
            NamedCurve::PairBoundary { i, j, boundary } => {
                !s.orientable && crosscap(i) && i < j && j <= g && boundary >= 1 && boundary <= b
            }
        }
    }

    pub fn check_on(&self, s: &SurfaceSpec) -> Result<()> {
        if self.is_valid_on(s) {
            Ok(())
        } else {
            Err(Error::InvalidCurve {
                curve: self.to_string(),
                surface: s.to_string(),
            })
        }
    }
}

impl fmt::Display for NamedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedCurve::A(i) => write!(f, "a{i}"),
            NamedCurve::B(i) => write!(f, "b{i}"),
            NamedCurve::T(i) => write!(f, "t{i}"),
            NamedCurve::Boundary(j) => write!(f, "d{j}"),
            NamedCurve::Arc(j) => write!(f, "r{j}"),
            NamedCurve::U(j) => write!(f, "u{j}"),
            NamedCurve::Pair(i, j) => write!(f, "a{i}+a{j}"),
            NamedCurve::Quad([i, j, k, l]) => write!(f, "a{i}+a{j}+a{k}+a{l}"),
            NamedCurve::PairBoundary { i, j, boundary } => write!(f, "a{i}+a{j}#d{boundary}"),
        }
    }
}

impl FromStr for NamedCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown curve name {s:?}"));
        let index = |t: &str, prefix: char| -> Result<usize> {
            t.strip_prefix(prefix).and_then(|n| n.parse().ok()).ok_or_else(bad)
        };
        let s = s.trim();
        let (sum, boundary) = match s.split_once('#') {
            Some((sum, d)) => (sum, Some(index(d, 'd')?)),
            None => (s, None),
        };
        if sum.contains('+') {
            let parts = sum.split('+').map(|t| index(t, 'a')).collect::<Result<Vec<_>>>()?;
            return match (parts.as_slice(), boundary) {
                (&[i, j], None) => Ok(NamedCurve::Pair(i, j)),
                (&[i, j], Some(boundary)) => Ok(NamedCurve::PairBoundary { i, j, boundary }),
                (&[i, j, k, l], None) => Ok(NamedCurve::Quad([i, j, k, l])),
                _ => Err(bad()),
            };
        }
        if boundary.is_some() {
            return Err(bad());
        }
        let kind = sum.chars().next().ok_or_else(bad)?;
        let i = index(sum, kind)?;
        match kind {
            'a' => Ok(NamedCurve::A(i)),
            'b' => Ok(NamedCurve::B(i)),
            't' => Ok(NamedCurve::T(i)),
            'd' => Ok(NamedCurve::Boundary(i)),
            'r' => Ok(NamedCurve::Arc(i)),
            'u' => Ok(NamedCurve::U(i)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for NamedCurve {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NamedCurve {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every named curve and arc on `s`, in a fixed order.
pub fn catalog(s: &SurfaceSpec) -> Vec<NamedCurve> {
    let (g, b) = (s.genus, s.arcs());
    let mut out = Vec::new();
    if s.orientable {
        for i in 1..=g {
            out.push(NamedCurve::A(i));
            out.push(NamedCurve::B(i));
        }
        out.extend((1..g).map(NamedCurve::T));
        out.extend((0..=b).map(NamedCurve::Boundary));
        out.extend((1..=b).map(NamedCurve::Arc));
        if g >= 1 {
            out.extend((1..=b).map(NamedCurve::U));
        }
    } else {
        out.extend((1..=g).map(NamedCurve::A));
        let pairs: Vec<(usize, usize)> = (1..=g).flat_map(|i| (i + 1..=g).map(move |j| (i, j))).collect();
        out.extend(pairs.iter().map(|&(i, j)| NamedCurve::Pair(i, j)));
        for i in 1..=g {
            for j in i + 1..=g {
                for k in j + 1..=g {
                    for l in k + 1..=g {
                        out.push(NamedCurve::Quad([i, j, k, l]));
                    }
                }
            }
        }
        out.extend((0..=b).map(NamedCurve::Boundary));
        out.extend((1..=b).map(NamedCurve::Arc));
        for boundary in 1..=b {
            out.extend(pairs.iter().map(|&(i, j)| NamedCurve::PairBoundary { i, j, boundary }));
        }
    }
    out
}

/// The catalog curves a Dehn twist can be performed along.
pub fn twist_generators(s: &SurfaceSpec) -> Vec<NamedCurve> {
    catalog(s)
        .into_iter()
        .filter(|c| !c.is_arc())
        .filter(|c| two_sided(&homology_class(c, s), s))
        .collect()
}

/// Homology data of a closed curve, or a marker for one of the standard arcs.
///
/// Orientable classes use `X`, `Y` (length `g`); non-orientable ones use `A`
/// (length `n`). `lambda` has one entry per boundary component.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CurveClass {
    #[serde(rename = "X", default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<i64>,
    #[serde(rename = "Y", default, skip_serializing_if = "Vec::is_empty")]
    pub y: Vec<i64>,
    #[serde(rename = "A", default, skip_serializing_if = "Vec::is_empty")]
    pub a: Vec<i64>,
    pub lambda: Vec<i64>,
    /// `Some(j)` when this is the arc `r_j`; all other coefficients are then zero.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<usize>,
}

impl CurveClass {
    pub fn zero(s: &SurfaceSpec) -> Self {
        if s.orientable {
            CurveClass {
                x: vec![0; s.genus],
                y: vec![0; s.genus],
                a: Vec::new(),
                lambda: vec![0; s.boundaries],
                arc: None,
            }
        } else {
            CurveClass {
                x: Vec::new(),
                y: Vec::new(),
                a: vec![0; s.genus],
                lambda: vec![0; s.boundaries],
                arc: None,
            }
        }
    }

    pub fn orientable(x: Vec<i64>, y: Vec<i64>, lambda: Vec<i64>) -> Self {
        CurveClass {
            x,
            y,
            a: Vec::new(),
            lambda,
            arc: None,
        }
    }

    pub fn non_orientable(a: Vec<i64>, lambda: Vec<i64>) -> Self {
        CurveClass {
            x: Vec::new(),
            y: Vec::new(),
            a,
            lambda,
            arc: None,
        }
    }

    pub fn is_arc(&self) -> bool {
        self.arc.is_some()
    }

    pub fn check_dims(&self, s: &SurfaceSpec) -> Result<()> {
        if s.orientable {
            expect_len("X", s.genus, &self.x)?;
            expect_len("Y", s.genus, &self.y)?;
            expect_len("A", 0, &self.a)?;
        } else {
            expect_len("A", s.genus, &self.a)?;
            expect_len("X", 0, &self.x)?;
            expect_len("Y", 0, &self.y)?;
        }
        expect_len("lambda", s.boundaries, &self.lambda)?;
        if let Some(j) = self.arc {
            if j == 0 || j > s.arcs() {
                return Err(Error::InvalidCurve {
                    curve: format!("r{j}"),
                    surface: s.to_string(),
                });
            }
            let closed_part = self.x.iter().chain(&self.y).chain(&self.a).chain(&self.lambda);
            if closed_part.into_iter().any(|&c| c != 0) {
                return Err(Error::Parse("an arc class carries no closed-curve coefficients".into()));
            }
        }
        Ok(())
    }

    /// Coefficient-wise sum of two closed classes.
    pub fn plus(&self, other: &CurveClass) -> CurveClass {
        let add = |u: &[i64], v: &[i64]| u.iter().zip(v).map(|(p, q)| p + q).collect();
        CurveClass {
            x: add(&self.x, &other.x),
            y: add(&self.y, &other.y),
            a: add(&self.a, &other.a),
            lambda: add(&self.lambda, &other.lambda),
            arc: None,
        }
    }
}

fn expect_len(what: &'static str, expected: usize, v: &[i64]) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::dim(what, expected, v.len()))
    }
}

/// Homology class of a catalog curve. Panics if `c` is not valid on `s`;
/// use [`NamedCurve::check_on`] first for untrusted input.
pub fn homology_class(c: &NamedCurve, s: &SurfaceSpec) -> CurveClass {
    assert!(c.is_valid_on(s), "{c} is not a curve on {s}");
    let mut class = CurveClass::zero(s);
    match *c {
        NamedCurve::A(i) if s.orientable => class.x[i - 1] = 1,
        NamedCurve::A(i) => class.a[i - 1] = 1,
        NamedCurve::B(i) => class.y[i - 1] = 1,
        NamedCurve::T(i) => {
            class.x[i - 1] = -1;
            class.x[i] = 1;
        }
        NamedCurve::Boundary(j) => class.lambda[j] = 1,
        NamedCurve::Arc(j) => class.arc = Some(j),
        NamedCurve::U(j) => {
            class.x[s.genus - 1] = 1;
            class.lambda[j] = 1;
        }
        NamedCurve::Pair(i, j) => {
            class.a[i - 1] = 1;
            class.a[j - 1] = 1;
        }
        NamedCurve::Quad(q) => {
            for i in q {
                class.a[i - 1] = 1;
            }
        }
        NamedCurve::PairBoundary { i, j, boundary } => {
            class.a[i - 1] = 1;
            class.a[j - 1] = 1;
            class.lambda[boundary] = 1;
        }
    }
    class
}

/// Algebraic intersection number. Exact on orientable surfaces, mod 2 (in
/// `{0, 1}`) on non-orientable ones. Boundary classes pair trivially with
/// closed classes.
pub fn intersect(x: &CurveClass, y: &CurveClass, s: &SurfaceSpec) -> i64 {
    let raw = match (x.arc, y.arc) {
        (Some(_), Some(_)) => 0,
        (None, Some(j)) => x.lambda[j] - x.lambda[0],
        (Some(j), None) => -(y.lambda[j] - y.lambda[0]),
        (None, None) if s.orientable => {
            x.x.iter()
                .zip(&x.y)
                .zip(y.x.iter().zip(&y.y))
                .map(|((xx, xy), (yx, yy))| xx * yy - xy * yx)
                .sum()
        }
        (None, None) => x.a.iter().zip(&y.a).map(|(p, q)| p * q).sum(),
    };
    if s.orientable {
        raw
    } else {
        raw.rem_euclid(2)
    }
}

/// `<c, y>` for each coordinate curve `y` of `s` (see [`SurfaceSpec::coordinate_curves`]).
pub fn coordinate_pairings(c: &CurveClass, s: &SurfaceSpec) -> Vec<i64> {
    let mut out = Vec::with_capacity(s.coordinate_len());
    if c.is_arc() {
        // arcs pair with no closed coordinate curve and with no other arc
        out.resize(s.coordinate_len(), 0);
        return out;
    }
    if s.orientable {
        for i in 0..s.genus {
            out.push(-c.y[i]);
            out.push(c.x[i]);
        }
    } else {
        out.extend(c.a.iter().map(|a| a.rem_euclid(2)));
    }
    for j in 1..=s.arcs() {
        let p = c.lambda[j] - c.lambda[0];
        out.push(if s.orientable { p } else { p.rem_euclid(2) });
    }
    out
}

/// Whether a twist along a curve in this class is defined: `Σ A_i ≡ 0 (mod 2)`
/// on a non-orientable surface, always on an orientable one.
pub fn two_sided(x: &CurveClass, s: &SurfaceSpec) -> bool {
    if s.orientable || x.is_arc() {
        return true;
    }
    x.a.iter().sum::<i64>().rem_euclid(2) == 0
}
