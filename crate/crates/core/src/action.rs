//! Twists compiled to affine maps on coordinate vectors.
//!
//! Every twist along a catalog curve `c` acts on coordinates by
//! `y_k ↦ y_k + e · <c, y_k> · (q(c) - q_disc)`, and on all structures
//! considered here `q(c)` is an affine function of the coordinates once the
//! boundary condition is fixed. Precomputing the weights lets the orbit
//! engine and the normal-form reducers apply a generator without rebuilding
//! homology classes.

use std::collections::HashMap;

use crate::surface::{NamedCurve, SurfaceSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearTwist {
    pub curve: NamedCurve,
    /// `q(c) - q_disc = weights · coords + offset`.
    pub weights: Vec<i64>,
    pub offset: i64,
    /// `<c, y_k>` for each coordinate curve.
    pub pairing: Vec<i64>,
    /// Modulus of the coordinate ring; 0 for the integers.
    pub modulus: i64,
    /// True when the increment is 2-torsion, so only the parity of the exponent matters.
    pub involutive: bool,
}

impl LinearTwist {
    #[inline]
    fn reduce(&self, x: i64) -> i64 {
        if self.modulus == 0 {
            x
        } else {
            x.rem_euclid(self.modulus)
        }
    }

    /// The increment factor `q(c) - q_disc`, reduced.
    #[inline]
    pub fn factor(&self, coords: &[i64]) -> i64 {
        let mut acc = self.offset;
        for (w, c) in self.weights.iter().zip(coords) {
            acc += w * c;
        }
        self.reduce(acc)
    }

    #[inline]
    pub fn apply(&self, coords: &mut [i64], exponent: i64) {
        let e = if self.involutive {
            exponent.rem_euclid(2)
        } else {
            exponent
        };
        let f = self.reduce(e * self.factor(coords));
        if f == 0 {
            return;
        }
        for (c, p) in coords.iter_mut().zip(&self.pairing) {
            if *p != 0 {
                *c = self.reduce(*c + p * f);
            }
        }
    }

    /// Whether the twist moves no coordinate for any input.
    pub fn is_trivial(&self) -> bool {
        self.pairing.iter().all(|&p| self.reduce(p) == 0)
    }
}

/// Compiled twists for one `(coefficients, surface, δ)`, looked up by curve.
#[derive(Debug, Clone)]
pub struct TwistTable {
    surface: SurfaceSpec,
    delta: Vec<i64>,
    twists: Vec<LinearTwist>,
    index: HashMap<NamedCurve, usize>,
}

impl TwistTable {
    pub fn new(surface: SurfaceSpec, delta: Vec<i64>, twists: Vec<LinearTwist>) -> Self {
        let index = twists.iter().enumerate().map(|(k, t)| (t.curve, k)).collect();
        TwistTable {
            surface,
            delta,
            twists,
            index,
        }
    }

    pub fn get(&self, c: &NamedCurve) -> Option<&LinearTwist> {
        self.index.get(c).map(|&k| &self.twists[k])
    }

    pub fn twists(&self) -> &[LinearTwist] {
        &self.twists
    }

    /// Whether the table was compiled for this surface and boundary condition.
    pub fn fits(&self, surface: &SurfaceSpec, delta: &[i64]) -> bool {
        self.surface == *surface && self.delta == delta
    }
}
