//! θ_r-structures on orientable surfaces `Σ_{g,b+1}` (framings when `r = 0`).
//!
//! A structure is recorded by its coordinates `(A_1, B_1, …, A_g, B_g, R_1, …, R_b)`,
//! the q-values of the standard curves `a_i, b_i` and arcs `r_j`, together with
//! the boundary condition `δ = (δ_0, …, δ_b)`, the q-values of the boundary
//! curves. The mapping class group acts through the twist formula
//! `q'(y) = q(y) + <c, y> (q(c) + 1)`.

use serde::{Deserialize, Serialize};

use crate::action::{LinearTwist, TwistTable};
use crate::error::{Error, Result};
use crate::ring::CoeffRing;
use crate::surface::{coordinate_pairings, homology_class, twist_generators, CurveClass, NamedCurve, SurfaceSpec};
use crate::word::{TwistCurve, TwistWord};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ThetaStructure {
    pub ring: CoeffRing,
    pub surface: SurfaceSpec,
    pub coords: Vec<i64>,
    pub delta: Vec<i64>,
}

/// A canonical representative together with a word carrying the input to it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm<S> {
    pub representative: S,
    pub word: TwistWord,
    /// True when representatives are known to be in bijection with orbits
    /// for these parameters.
    pub complete: bool,
}

impl ThetaStructure {
    /// Builds a structure, reducing every entry to its canonical representative.
    pub fn new(ring: CoeffRing, surface: SurfaceSpec, coords: Vec<i64>, delta: Vec<i64>) -> Result<Self> {
        let surface = surface.validated()?;
        if !surface.orientable {
            return Err(Error::InvalidSurface(
                "θ_r-structures live on orientable surfaces".into(),
            ));
        }
        if coords.len() != surface.coordinate_len() {
            return Err(Error::dim("coords", surface.coordinate_len(), coords.len()));
        }
        if delta.len() != surface.boundaries {
            return Err(Error::dim("delta", surface.boundaries, delta.len()));
        }
        Ok(ThetaStructure {
            ring,
            surface,
            coords: coords.into_iter().map(|c| ring.canon(c)).collect(),
            delta: delta.into_iter().map(|d| ring.canon(d)).collect(),
        })
    }

    /// Re-checks the invariants of a value that did not come through [`new`](Self::new),
    /// e.g. one read from JSON.
    pub fn canonicalized(self) -> Result<Self> {
        ThetaStructure::new(self.ring, self.surface, self.coords, self.delta)
    }

    pub fn genus(&self) -> usize {
        self.surface.genus
    }

    /// `q(a_i)`, 1-based.
    pub fn a(&self, i: usize) -> i64 {
        self.coords[2 * (i - 1)]
    }

    /// `q(b_i)`, 1-based.
    pub fn b(&self, i: usize) -> i64 {
        self.coords[2 * (i - 1) + 1]
    }

    /// `q(r_j)`, 1-based.
    pub fn r(&self, j: usize) -> i64 {
        self.coords[2 * self.genus() + j - 1]
    }

    /// Whether `Σ δ_j ≡ 0 (mod 2)` when `r` is even (always true for odd `r`).
    ///
    /// Every non-empty set of structures satisfies this, and it is exactly what
    /// keeps the generalised Arf invariant constant under twists along curves
    /// parallel to the boundary.
    pub fn delta_admissible(ring: CoeffRing, delta: &[i64]) -> bool {
        !ring.is_even() || delta.iter().sum::<i64>().rem_euclid(2) == 0
    }

    /// q-value of a class represented by a simple closed curve or a standard arc:
    /// `Σ (X_i A_i + Y_i B_i + X_i Y_i) + Σ λ_j δ_j`.
    pub fn q_eval(&self, x: &CurveClass) -> Result<i64> {
        x.check_dims(&self.surface)?;
        if let Some(j) = x.arc {
            return Ok(self.r(j));
        }
        let mut q = 0i64;
        for i in 1..=self.genus() {
            let (xi, yi) = (x.x[i - 1], x.y[i - 1]);
            q += xi * self.a(i) + yi * self.b(i) + xi * yi;
        }
        for (l, d) in x.lambda.iter().zip(&self.delta) {
            q += l * d;
        }
        Ok(self.ring.canon(q))
    }

    pub fn q_named(&self, c: &NamedCurve) -> Result<i64> {
        c.check_on(&self.surface)?;
        self.q_eval(&homology_class(c, &self.surface))
    }

    /// Resolves a twist curve to its class and q-value on `self`.
    fn resolve(&self, c: &TwistCurve) -> Result<(CurveClass, i64)> {
        match c {
            TwistCurve::Named(n) => {
                n.check_on(&self.surface)?;
                if n.is_arc() {
                    return Err(Error::ArcTwist(n.to_string()));
                }
                let class = homology_class(n, &self.surface);
                let q = self.q_eval(&class)?;
                Ok((class, q))
            }
            TwistCurve::Formal { class, q } => {
                class.check_dims(&self.surface)?;
                if class.is_arc() {
                    return Err(Error::ArcTwist("formal arc".into()));
                }
                let q = q.ok_or(Error::MissingQValue)?;
                Ok((class.clone(), self.ring.canon(q)))
            }
        }
    }

    /// `τ_c^e`: every coordinate curve `y` gets `q(y) + e <c, y> (q(c) + 1)`; `δ` is unchanged.
    pub fn twist(&self, c: &TwistCurve, e: i64) -> Result<ThetaStructure> {
        let (class, q) = self.resolve(c)?;
        let step = self.ring.mul(e, self.ring.add(q, 1));
        let mut out = self.clone();
        for (y, p) in out.coords.iter_mut().zip(coordinate_pairings(&class, &self.surface)) {
            if p != 0 {
                *y = self.ring.add(*y, self.ring.mul(p, step));
            }
        }
        Ok(out)
    }

    pub fn twist_named(&self, c: NamedCurve, e: i64) -> Result<ThetaStructure> {
        self.twist(&TwistCurve::Named(c), e)
    }

    /// Applies the letters left to right.
    pub fn apply_word(&self, w: &TwistWord) -> Result<ThetaStructure> {
        let mut cur = self.clone();
        for l in w.letters() {
            cur = cur.twist(&l.curve, l.exponent)?;
        }
        Ok(cur)
    }

    /// [`apply_word`](Self::apply_word), looking catalog letters up in `table`.
    pub fn apply_word_with(&self, w: &TwistWord, table: &TwistTable) -> Result<ThetaStructure> {
        assert!(
            table.fits(&self.surface, &self.delta),
            "twist table compiled for another surface or boundary"
        );
        let mut cur = self.clone();
        for l in w.letters() {
            match &l.curve {
                TwistCurve::Named(c) if table.get(c).is_some() => {
                    table.get(c).expect("checked").apply(&mut cur.coords, l.exponent)
                }
                other => cur = cur.twist(other, l.exponent)?,
            }
        }
        Ok(cur)
    }

    /// Compiled catalog twists for this structure's `(r, Σ, δ)`.
    pub fn twist_table(&self) -> TwistTable {
        TwistTable::new(
            self.surface,
            self.delta.clone(),
            Self::compiled_generators(self.ring, &self.surface, &self.delta),
        )
    }

    /// Generalised Arf invariant `Σ A_i B_i + Σ R_j δ_j (mod 2)`, for even `r`
    /// (including framings, through `Z -> Z/2`).
    pub fn arf(&self) -> Result<i64> {
        if !self.ring.is_even() {
            return Err(Error::OddModulus(self.ring.modulus()));
        }
        Ok(arf_of(self.genus(), &self.coords, &self.delta))
    }

    /// `G(A_i, B_i)` for every handle.
    pub fn g_invariants(&self) -> Vec<i64> {
        (1..=self.genus())
            .map(|i| g_invariant(self.ring, self.a(i), self.b(i)))
            .collect()
    }

    /// Coordinate-wise reduction to `Z/r'`.
    pub fn reduce_mod(&self, target: CoeffRing) -> Result<ThetaStructure> {
        if target.is_integers() || !self.ring.divides_into(target) {
            return Err(Error::NotDivisor {
                divisor: target.modulus(),
                modulus: self.ring.modulus(),
            });
        }
        ThetaStructure::new(target, self.surface, self.coords.clone(), self.delta.clone())
    }

    /// Translation by a class `gvec` of `H^1(Σ, ∂Σ; Z/r)` written in coordinates.
    pub fn torsor_shift(&self, gvec: &[i64]) -> Result<ThetaStructure> {
        if gvec.len() != self.coords.len() {
            return Err(Error::dim("gvec", self.coords.len(), gvec.len()));
        }
        let mut out = self.clone();
        for (c, g) in out.coords.iter_mut().zip(gvec) {
            *c = self.ring.add(*c, *g);
        }
        Ok(out)
    }

    /// Catalog twists compiled for fixed `(r, Σ, δ)`.
    pub fn compiled_generators(ring: CoeffRing, surface: &SurfaceSpec, delta: &[i64]) -> Vec<LinearTwist> {
        twist_generators(surface)
            .into_iter()
            .map(|c| {
                let class = homology_class(&c, surface);
                let mut weights = Vec::with_capacity(surface.coordinate_len());
                for i in 0..surface.genus {
                    weights.push(class.x[i]);
                    weights.push(class.y[i]);
                }
                weights.resize(surface.coordinate_len(), 0);
                let quadratic: i64 = class.x.iter().zip(&class.y).map(|(x, y)| x * y).sum();
                let boundary: i64 = class.lambda.iter().zip(delta).map(|(l, d)| l * d).sum();
                LinearTwist {
                    curve: c,
                    weights,
                    offset: quadratic + boundary + 1,
                    pairing: coordinate_pairings(&class, surface),
                    modulus: ring.modulus() as i64,
                    involutive: false,
                }
            })
            .collect()
    }

    /// Canonical representative of the orbit, with a certificate word.
    ///
    /// The reduction runs in four phases: each handle `(A_i, B_i)` is brought to
    /// `(-1, G(A_i, B_i))` with `τ_{a_i}, τ_{b_i}`; the `t_i` twists sweep the
    /// handle values into the last handle; `τ_{u_j}^k τ_{∂_j}^{-k}` clears each
    /// `R_j`; and for `g >= 2` the move
    /// `τ_{t_{g-1}}^2 τ_{b_{g-1}} τ_{a_{g-1}}^2 τ_{b_{g-1}}`, which adds 2 to the
    /// last `B`, brings it to 0 (odd `r`) or to its parity (even `r`, framings).
    pub fn normal_form(&self) -> Result<NormalForm<ThetaStructure>> {
        self.normal_form_with(&self.twist_table())
    }

    /// [`normal_form`](Self::normal_form) with a precompiled table from [`twist_table`](Self::twist_table).
    pub fn normal_form_with(&self, table: &TwistTable) -> Result<NormalForm<ThetaStructure>> {
        let g = self.genus();
        if g == 0 {
            return Err(Error::GenusZero);
        }
        assert!(
            table.fits(&self.surface, &self.delta),
            "twist table compiled for another surface or boundary"
        );
        let ring = self.ring;
        let mut red = Reducer {
            cur: self.clone(),
            word: TwistWord::new(),
            table,
        };

        for i in 1..=g {
            red.reduce_handle(i);
        }
        for i in 1..g {
            let k = red.cur.b(i);
            red.step(NamedCurve::T(i), k);
        }
        for j in 1..=self.surface.arcs() {
            let k = red.cur.r(j);
            red.step(NamedCurve::U(j), k);
            red.step(NamedCurve::Boundary(j), -k);
        }
        if g >= 2 {
            let n = red.cur.b(g);
            let target = if ring.is_even() { n.rem_euclid(2) } else { 0 };
            let moves = match ring.modulus() {
                0 => (target - n) / 2,
                m if m % 2 == 1 => ring.mul(-n, m.div_ceil(2) as i64),
                _ => ring.canon(target - n) / 2,
            };
            red.shift_last_by_two(moves);
        }
        debug_assert!(red.is_reduced());
        Ok(NormalForm {
            representative: red.cur,
            word: red.word,
            complete: g >= 2 || self.surface.boundaries == 1,
        })
    }
}

/// `Σ A_i B_i + Σ R_j δ_j (mod 2)` on raw coordinates.
pub fn arf_of(genus: usize, coords: &[i64], delta: &[i64]) -> i64 {
    let mut s = 0i64;
    for i in 0..genus {
        s += coords[2 * i].rem_euclid(2) * coords[2 * i + 1].rem_euclid(2);
    }
    for (r, d) in coords[2 * genus..].iter().zip(&delta[1..]) {
        s += r.rem_euclid(2) * d.rem_euclid(2);
    }
    s % 2
}

/// `G(A, B) = gcd(A + 1, B + 1) - 1`, the invariant of `(A, B)` under `τ_a, τ_b`.
pub fn g_invariant(ring: CoeffRing, a: i64, b: i64) -> i64 {
    ring.sub(ring.gcd_canon(ring.add(a, 1), ring.add(b, 1)), 1)
}

struct Reducer<'a> {
    cur: ThetaStructure,
    word: TwistWord,
    table: &'a TwistTable,
}

impl Reducer<'_> {
    fn step(&mut self, c: NamedCurve, e: i64) {
        if e == 0 {
            return;
        }
        self.table
            .get(&c)
            .expect("the reduction only twists along catalog curves")
            .apply(&mut self.cur.coords, e);
        self.word.push(c, e);
    }

    /// Euclid on `(x, y) = (A_i + 1, B_i + 1)` using `τ_{a_i}^k : y += k x` and
    /// `τ_{b_i}^k : x -= k y`, ending at `(0, d)` with `d` the canonical gcd.
    fn reduce_handle(&mut self, i: usize) {
        let ring = self.cur.ring;
        let m = ring.modulus() as i64;
        let x = ring.add(self.cur.a(i), 1);
        let y = ring.add(self.cur.b(i), 1);
        let (_, g) = self.euclid(i, x, y);
        if m > 0 && g != 0 && g % m != ring.gcd_canon(g, 0) {
            // lift the zero x-coordinate to m and run Euclid against the modulus
            self.euclid(i, m, g);
        }
        if m == 0 && self.cur.b(i) + 1 < 0 {
            // (0, y) -> (0, -y)
            self.step(NamedCurve::B(i), -1);
            self.step(NamedCurve::A(i), -2);
            self.step(NamedCurve::B(i), -1);
        }
    }

    /// Runs Euclid on integer lifts `(x, y)` of the handle values and returns
    /// the final lifts `(0, g)`. For finite rings the lifts stay in `[0, m]`, so
    /// integer and modular arithmetic agree along the way.
    fn euclid(&mut self, i: usize, mut x: i64, mut y: i64) -> (i64, i64) {
        while x != 0 && y != 0 {
            if x.abs() >= y.abs() {
                let k = x / y;
                self.step(NamedCurve::B(i), k);
                x -= k * y;
            } else {
                let k = y / x;
                self.step(NamedCurve::A(i), -k);
                y -= k * x;
            }
        }
        if y == 0 && x != 0 {
            self.step(NamedCurve::A(i), 1);
            self.step(NamedCurve::B(i), 1);
            y = x;
            x = 0;
        }
        (x, y)
    }

    /// Adds `2 * times` to the last `B` (negative `times` subtracts).
    fn shift_last_by_two(&mut self, times: i64) {
        let h = self.cur.genus() - 1;
        let seq = [
            (NamedCurve::T(h), 2),
            (NamedCurve::B(h), 1),
            (NamedCurve::A(h), 2),
            (NamedCurve::B(h), 1),
        ];
        for _ in 0..times.unsigned_abs() {
            if times > 0 {
                for (c, e) in seq {
                    self.step(c, e);
                }
            } else {
                for (c, e) in seq.iter().rev() {
                    self.step(*c, -e);
                }
            }
        }
    }

    fn is_reduced(&self) -> bool {
        let s = &self.cur;
        let minus_one = s.ring.minus_one();
        (1..=s.genus()).all(|i| s.a(i) == minus_one)
            && (1..s.genus()).all(|i| s.b(i) == 0)
            && (1..=s.surface.arcs()).all(|j| s.r(j) == 0)
    }
}
