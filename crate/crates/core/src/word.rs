//! Words in Dehn twists: the certificate format for orbit membership.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{CurveClass, NamedCurve};

/// The curve of a twist letter: a catalog curve, or an arbitrary class whose
/// realizability by a simple closed curve the caller vouches for, together
/// with its q-value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TwistCurve {
    Named(NamedCurve),
    Formal {
        class: CurveClass,
        #[serde(default)]
        q: Option<i64>,
    },
}

impl From<NamedCurve> for TwistCurve {
    fn from(c: NamedCurve) -> Self {
        TwistCurve::Named(c)
    }
}

impl fmt::Display for TwistCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistCurve::Named(c) => write!(f, "{c}"),
            TwistCurve::Formal { class, q } => {
                write!(f, "<{}", serde_json::to_string(class).map_err(|_| fmt::Error)?)?;
                match q {
                    Some(q) => write!(f, ", q={q}>"),
                    None => write!(f, ">"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub curve: TwistCurve,
    pub exponent: i64,
}

/// A word read left to right: the first letter is applied first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwistWord {
    letters: Vec<Letter>,
}

impl TwistWord {
    pub fn new() -> Self {
        TwistWord::default()
    }

    /// Appends `curve^exponent`, merging with the last letter when it twists
    /// along the same curve. Zero exponents are dropped.
    pub fn push(&mut self, curve: impl Into<TwistCurve>, exponent: i64) {
        let curve = curve.into();
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.curve == curve {
                last.exponent += exponent;
                if last.exponent == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter { curve, exponent });
    }

    /// Appends without merging, so the word records exactly what was applied.
    pub fn push_raw(&mut self, curve: impl Into<TwistCurve>, exponent: i64) {
        self.letters.push(Letter {
            curve: curve.into(),
            exponent,
        });
    }

    pub fn extend(&mut self, other: &TwistWord) {
        for l in &other.letters {
            self.push(l.curve.clone(), l.exponent);
        }
    }

    pub fn then(mut self, other: &TwistWord) -> TwistWord {
        self.extend(other);
        self
    }

    pub fn inverse(&self) -> TwistWord {
        let mut out = TwistWord::new();
        for l in self.letters.iter().rev() {
            out.push(l.curve.clone(), -l.exponent);
        }
        out
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Sum of absolute exponents.
    pub fn twist_count(&self) -> u64 {
        self.letters.iter().map(|l| l.exponent.unsigned_abs()).sum()
    }
}

impl FromIterator<(NamedCurve, i64)> for TwistWord {
    fn from_iter<I: IntoIterator<Item = (NamedCurve, i64)>>(iter: I) -> Self {
        let mut w = TwistWord::new();
        for (c, e) in iter {
            w.push_raw(c, e);
        }
        w
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            match l.exponent {
                1 => write!(f, "{}", l.curve)?,
                e => write!(f, "{}^{}", l.curve, e)?,
            }
        }
        Ok(())
    }
}

/// Parses `a1^2 b1^-1 t1` (letters separated by whitespace or commas).
/// Only catalog curves can be written this way.
impl FromStr for TwistWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut w = TwistWord::new();
        for tok in s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let (name, exp) = match tok.split_once('^') {
                Some((name, e)) => (
                    name,
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            w.push_raw(name.parse::<NamedCurve>()?, exp);
        }
        Ok(w)
    }
}
