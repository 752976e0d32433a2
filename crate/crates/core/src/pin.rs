//! Pin⁺ and Pin⁻ structures on non-orientable surfaces `S_{n,b+1}`.
//!
//! Coordinates are `(q(a_1), …, q(a_n), q(r_1), …, q(r_b))`: entries of `Z/2`
//! for Pin⁺, and for Pin⁻ entries of `Z/4` with `q(a_i) ∈ {1, 3}` and
//! `q(r_j) ∈ {0, 2}`. Twists act by `q'(x) = q(x) + <c, x> (q(c) - Mon(D²))`
//! with `Mon(D²) = 1` (Pin⁺) or `2` (Pin⁻).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::{LinearTwist, TwistTable};
use crate::error::{Error, Result};
use crate::rspin::NormalForm;
use crate::surface::{
    coordinate_pairings, homology_class, twist_generators, two_sided, CurveClass, NamedCurve, SurfaceSpec,
};
use crate::word::{TwistCurve, TwistWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PinSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl PinSign {
    /// Modulus of the coordinates: 2 for Pin⁺, 4 for Pin⁻.
    pub fn modulus(self) -> i64 {
        match self {
            PinSign::Plus => 2,
            PinSign::Minus => 4,
        }
    }

    /// `Mon(D²)`, the q-value subtracted in the twist formula.
    pub fn disc_value(self) -> i64 {
        match self {
            PinSign::Plus => 1,
            PinSign::Minus => 2,
        }
    }

    /// Modulus of the invariant `A`.
    pub fn invariant_modulus(self) -> i64 {
        self.modulus()
    }
}

impl fmt::Display for PinSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PinSign::Plus => write!(f, "Pin+"),
            PinSign::Minus => write!(f, "Pin-"),
        }
    }
}

/// The first constraint a Pin coordinate record fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotNonOrientable,
    /// Pin⁻ `q(a_i)` outside `{1, 3}` (1-based index).
    CrosscapValue {
        index: usize,
        value: i64,
    },
    /// Pin⁻ `q(r_j)` outside `{0, 2}` (1-based index).
    ArcValue {
        index: usize,
        value: i64,
    },
    /// Pin⁻ `δ_j` outside `{0, 2}` (0-based index).
    BoundaryValue {
        index: usize,
        value: i64,
    },
    /// `Σ δ_j` is not the value forced by the surface.
    BoundarySum {
        sum: i64,
        expected: i64,
        modulus: i64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotNonOrientable => write!(f, "Pin structures are modelled on non-orientable surfaces"),
            Violation::CrosscapValue { index, value } => {
                write!(f, "q(a{index}) = {value}, expected 1 or 3")
            }
            Violation::ArcValue { index, value } => write!(f, "q(r{index}) = {value}, expected 0 or 2"),
            Violation::BoundaryValue { index, value } => write!(f, "delta{index} = {value}, expected 0 or 2"),
            Violation::BoundarySum { sum, expected, modulus } => {
                write!(f, "sum of delta is {sum} mod {modulus}, expected {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PinStructure {
    pub sign: PinSign,
    pub surface: SurfaceSpec,
    pub coords: Vec<i64>,
    pub delta: Vec<i64>,
}

impl PinStructure {
    /// Builds and validates a structure; entries are reduced mod 2 or 4 first.
    pub fn new(sign: PinSign, surface: SurfaceSpec, coords: Vec<i64>, delta: Vec<i64>) -> Result<Self> {
        let s = PinStructure::from_parts(sign, surface, coords, delta)?;
        s.validate().map_err(Error::InvalidStructure)?;
        Ok(s)
    }

    /// Checks dimensions and reduces entries, without the range and boundary checks.
    pub fn from_parts(sign: PinSign, surface: SurfaceSpec, coords: Vec<i64>, delta: Vec<i64>) -> Result<Self> {
        let surface = surface.validated()?;
        if coords.len() != surface.coordinate_len() {
            return Err(Error::dim("coords", surface.coordinate_len(), coords.len()));
        }
        if delta.len() != surface.boundaries {
            return Err(Error::dim("delta", surface.boundaries, delta.len()));
        }
        let m = sign.modulus();
        Ok(PinStructure {
            sign,
            surface,
            coords: coords.into_iter().map(|c| c.rem_euclid(m)).collect(),
            delta: delta.into_iter().map(|d| d.rem_euclid(m)).collect(),
        })
    }

    pub fn canonicalized(self) -> Result<Self> {
        PinStructure::new(self.sign, self.surface, self.coords, self.delta)
    }

    /// Number of crosscaps `n`.
    pub fn crosscaps(&self) -> usize {
        self.surface.genus
    }

    /// `q(a_i)`, 1-based.
    pub fn a(&self, i: usize) -> i64 {
        self.coords[i - 1]
    }

    /// `q(r_j)`, 1-based.
    pub fn r(&self, j: usize) -> i64 {
        self.coords[self.crosscaps() + j - 1]
    }

    /// The boundary sum every structure on `S_{n,b+1}` satisfies: `n mod 2` for Pin⁺, `0 mod 4` for Pin⁻.
    pub fn expected_boundary_sum(sign: PinSign, crosscaps: usize) -> i64 {
        match sign {
            PinSign::Plus => (crosscaps % 2) as i64,
            PinSign::Minus => 0,
        }
    }

    /// Whether `δ` is a possible boundary condition on a surface with `crosscaps` crosscaps.
    pub fn delta_valid(sign: PinSign, crosscaps: usize, delta: &[i64]) -> bool {
        let m = sign.modulus();
        (sign == PinSign::Plus || delta.iter().all(|d| d.rem_euclid(2) == 0))
            && delta.iter().sum::<i64>().rem_euclid(m) == Self::expected_boundary_sum(sign, crosscaps)
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.surface.orientable {
            return Err(Violation::NotNonOrientable);
        }
        let n = self.crosscaps();
        if self.sign == PinSign::Minus {
            for i in 1..=n {
                if self.a(i) % 2 != 1 {
                    return Err(Violation::CrosscapValue {
                        index: i,
                        value: self.a(i),
                    });
                }
            }
            for j in 1..=self.surface.arcs() {
                if self.r(j) % 2 != 0 {
                    return Err(Violation::ArcValue {
                        index: j,
                        value: self.r(j),
                    });
                }
            }
            for (index, &value) in self.delta.iter().enumerate() {
                if value % 2 != 0 {
                    return Err(Violation::BoundaryValue { index, value });
                }
            }
        }
        let m = self.sign.modulus();
        let sum = self.delta.iter().sum::<i64>().rem_euclid(m);
        let expected = Self::expected_boundary_sum(self.sign, n);
        if sum != expected {
            return Err(Violation::BoundarySum {
                sum,
                expected,
                modulus: m,
            });
        }
        Ok(())
    }

    /// q-value of a class. Pin⁺ reads the `A` coefficients mod 4 and evaluates
    /// `Σ (k_i q(a_i) + k_i(k_i - 1)/2) + Σ λ_j δ_j (mod 2)`; Pin⁻ reads them mod 2
    /// and evaluates `Σ k_i q(a_i) + Σ λ_j δ_j (mod 4)`.
    pub fn q_eval(&self, x: &CurveClass) -> Result<i64> {
        x.check_dims(&self.surface)?;
        if let Some(j) = x.arc {
            return Ok(self.r(j));
        }
        let n = self.crosscaps();
        let mut q = 0i64;
        match self.sign {
            PinSign::Plus => {
                for i in 1..=n {
                    let k = x.a[i - 1].rem_euclid(4);
                    q += k * self.a(i) + k * (k - 1) / 2;
                }
                for (l, d) in x.lambda.iter().zip(&self.delta) {
                    q += l.rem_euclid(2) * d;
                }
                Ok(q.rem_euclid(2))
            }
            PinSign::Minus => {
                for i in 1..=n {
                    q += x.a[i - 1].rem_euclid(2) * self.a(i);
                }
                for (l, d) in x.lambda.iter().zip(&self.delta) {
                    q += l.rem_euclid(2) * d;
                }
                Ok(q.rem_euclid(4))
            }
        }
    }

    pub fn q_named(&self, c: &NamedCurve) -> Result<i64> {
        c.check_on(&self.surface)?;
        self.q_eval(&homology_class(c, &self.surface))
    }

    fn resolve(&self, c: &TwistCurve) -> Result<(CurveClass, i64)> {
        let (class, q) = match c {
            TwistCurve::Named(n) => {
                n.check_on(&self.surface)?;
                if n.is_arc() {
                    return Err(Error::ArcTwist(n.to_string()));
                }
                let class = homology_class(n, &self.surface);
                if !two_sided(&class, &self.surface) {
                    return Err(Error::OneSided(n.to_string()));
                }
                let q = self.q_eval(&class)?;
                (class, q)
            }
            TwistCurve::Formal { class, q } => {
                class.check_dims(&self.surface)?;
                if class.is_arc() {
                    return Err(Error::ArcTwist("formal arc".into()));
                }
                if !two_sided(class, &self.surface) {
                    return Err(Error::OneSided(c.to_string()));
                }
                let q = q.ok_or(Error::MissingQValue)?.rem_euclid(self.sign.modulus());
                if self.sign == PinSign::Minus && q % 2 != 0 {
                    return Err(Error::OneSided(format!("{c}: odd q-value")));
                }
                (class.clone(), q)
            }
        };
        Ok((class, q))
    }

    /// `τ_c^e`. The increment is 2-torsion, so only the parity of `e` matters.
    pub fn twist(&self, c: &TwistCurve, e: i64) -> Result<PinStructure> {
        let (class, q) = self.resolve(c)?;
        let m = self.sign.modulus();
        let step = (e.rem_euclid(2) * (q - self.sign.disc_value())).rem_euclid(m);
        let mut out = self.clone();
        if step != 0 {
            for (y, p) in out.coords.iter_mut().zip(coordinate_pairings(&class, &self.surface)) {
                *y = (*y + p * step).rem_euclid(m);
            }
        }
        Ok(out)
    }

    pub fn twist_named(&self, c: NamedCurve, e: i64) -> Result<PinStructure> {
        self.twist(&TwistCurve::Named(c), e)
    }

    pub fn apply_word(&self, w: &TwistWord) -> Result<PinStructure> {
        let mut cur = self.clone();
        for l in w.letters() {
            cur = cur.twist(&l.curve, l.exponent)?;
        }
        Ok(cur)
    }

    /// [`apply_word`](Self::apply_word), looking catalog letters up in `table`.
    pub fn apply_word_with(&self, w: &TwistWord, table: &TwistTable) -> Result<PinStructure> {
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

    pub fn twist_table(&self) -> TwistTable {
        TwistTable::new(
            self.surface,
            self.delta.clone(),
            Self::compiled_generators(self.sign, &self.surface, &self.delta),
        )
    }

    /// Crosscap slides fix every homology class, hence every q-value.
    pub fn crosscap_slide(&self) -> PinStructure {
        self.clone()
    }

    /// `A⁺ = Σ q(a_i) (mod 2)`, or `A⁻ = #{q(a_i) = 1} - Σ δ_j q(r_j)/2 (mod 4)`.
    pub fn invariant_a(&self) -> Result<i64> {
        self.validate().map_err(Error::InvalidStructure)?;
        Ok(invariant_a_of(self.sign, self.crosscaps(), &self.coords, &self.delta))
    }

    /// Translation by `g ∈ H¹(F, ∂F; Z/2)`: adds `g · Mon(D²)` to each coordinate.
    pub fn torsor_shift(&self, gvec: &[i64]) -> Result<PinStructure> {
        if gvec.len() != self.coords.len() {
            return Err(Error::dim("gvec", self.coords.len(), gvec.len()));
        }
        let m = self.sign.modulus();
        let unit = self.sign.disc_value();
        let mut out = self.clone();
        for (c, g) in out.coords.iter_mut().zip(gvec) {
            *c = (*c + unit * g.rem_euclid(2)).rem_euclid(m);
        }
        Ok(out)
    }

    /// `A(g · ξ)` predicted from `A(ξ)` by the torsor formulas.
    pub fn torsor_effect_on_a(&self, gvec: &[i64]) -> Result<i64> {
        if gvec.len() != self.coords.len() {
            return Err(Error::dim("gvec", self.coords.len(), gvec.len()));
        }
        let a = self.invariant_a()?;
        let n = self.crosscaps();
        let g: Vec<i64> = gvec.iter().map(|x| x.rem_euclid(2)).collect();
        Ok(match self.sign {
            PinSign::Plus => (a + g[..n].iter().sum::<i64>()).rem_euclid(2),
            PinSign::Minus => {
                let mut v = a;
                for i in 1..=n {
                    v += g[i - 1] * (self.a(i) - 2);
                }
                for j in 1..=self.surface.arcs() {
                    v -= self.delta[j] * g[n + j - 1];
                }
                v.rem_euclid(4)
            }
        })
    }

    /// Catalog twists compiled for fixed `(sign, surface, δ)`.
    pub fn compiled_generators(sign: PinSign, surface: &SurfaceSpec, delta: &[i64]) -> Vec<LinearTwist> {
        let n = surface.genus;
        twist_generators(surface)
            .into_iter()
            .map(|c| {
                let class = homology_class(&c, surface);
                let mut weights = class.a.clone();
                weights.resize(surface.coordinate_len(), 0);
                let boundary: i64 = class.lambda.iter().zip(delta).map(|(l, d)| l * d).sum();
                debug_assert_eq!(weights.len(), n + surface.arcs());
                LinearTwist {
                    curve: c,
                    weights,
                    offset: boundary - sign.disc_value(),
                    pairing: coordinate_pairings(&class, surface),
                    modulus: sign.modulus(),
                    involutive: true,
                }
            })
            .collect()
    }

    /// Canonical representative with a certificate word.
    ///
    /// Pin⁺: `(0, 1, 0, …, 0)` when `A = 1` and `(0, 1, 1, 0, …, 0)` when `A = 0`.
    /// Pin⁻: all `R_j = 0` and the crosscap values sorted as `(1, …, 1, 3, …, 3)`
    /// with at most three 3s, since `(3, 3, 3, 3)` is replaced by `(1, 1, 1, 1)`.
    /// Both are only guaranteed canonical for `n >= 3`; below that the result
    /// is the form reachable by the same moves and `complete` is false.
    pub fn normal_form(&self) -> Result<NormalForm<PinStructure>> {
        self.validate().map_err(Error::InvalidStructure)?;
        let mut red = PinReducer {
            cur: self.clone(),
            word: TwistWord::new(),
        };
        match self.sign {
            PinSign::Plus => red.reduce_plus(),
            PinSign::Minus => red.reduce_minus(),
        }
        Ok(NormalForm {
            representative: red.cur,
            word: red.word,
            complete: self.crosscaps() >= 3,
        })
    }
}

/// The invariant `A` on raw coordinates (assumed valid).
pub fn invariant_a_of(sign: PinSign, n: usize, coords: &[i64], delta: &[i64]) -> i64 {
    match sign {
        PinSign::Plus => coords[..n].iter().sum::<i64>().rem_euclid(2),
        PinSign::Minus => {
            let ones = coords[..n].iter().filter(|&&a| a.rem_euclid(4) == 1).count() as i64;
            let arcs: i64 = coords[n..]
                .iter()
                .zip(&delta[1..])
                .map(|(r, d)| d * (r.rem_euclid(4) / 2))
                .sum();
            (ones - arcs).rem_euclid(4)
        }
    }
}

struct PinReducer {
    cur: PinStructure,
    word: TwistWord,
}

impl PinReducer {
    fn step(&mut self, c: NamedCurve) {
        self.cur = self
            .cur
            .twist_named(c, 1)
            .expect("two-sided catalog curves are valid on their own surface");
        self.word.push_raw(c, 1);
    }

    fn n(&self) -> usize {
        self.cur.crosscaps()
    }

    fn pair(i: usize, j: usize) -> NamedCurve {
        NamedCurve::Pair(i.min(j), i.max(j))
    }

    /// Clears every `R_j`, twisting along `∂_j` or along `(a_p + a_q) # ∂_j`
    /// for a pair on which that curve has the right q-value.
    fn clear_arcs(&mut self) {
        let (sign, n) = (self.cur.sign, self.n());
        for j in 1..=self.cur.surface.arcs() {
            if self.cur.r(j) == 0 {
                continue;
            }
            if self.cur.delta[j] == 0 {
                self.step(NamedCurve::Boundary(j));
                continue;
            }
            // Pin⁺ needs q(a_p) != q(a_q), Pin⁻ needs q(a_p) = q(a_q).
            let wanted = |x: i64, y: i64| match sign {
                PinSign::Plus => x != y,
                PinSign::Minus => x == y,
            };
            let find = |s: &PinStructure| {
                (1..=n)
                    .flat_map(|p| (p + 1..=n).map(move |q| (p, q)))
                    .find(|&(p, q)| wanted(s.a(p), s.a(q)))
            };
            let mut found = find(&self.cur);
            if found.is_none() && sign == PinSign::Plus && n >= 3 {
                self.step(NamedCurve::Pair(1, 2));
                found = find(&self.cur);
            }
            if let Some((i, q)) = found {
                self.step(NamedCurve::PairBoundary { i, j: q, boundary: j });
            }
        }
    }

    fn reduce_plus(&mut self) {
        self.clear_arcs();
        let n = self.n();
        let ones = |s: &PinStructure| (1..=n).filter(|&i| s.a(i) == 1).collect::<Vec<_>>();
        loop {
            let o = ones(&self.cur);
            if o.len() < 2 {
                break;
            }
            self.step(Self::pair(o[0], o[1]));
        }
        match ones(&self.cur).first() {
            Some(&s) if s != 2 && n >= 3 => {
                let q = (1..=n).find(|&q| q != s && q != 2).expect("n >= 3");
                self.step(Self::pair(2, q));
                self.step(Self::pair(s, q));
            }
            None if n >= 3 => self.step(Self::pair(2, 3)),
            _ => {}
        }
    }

    fn reduce_minus(&mut self) {
        self.clear_arcs();
        let n = self.n();
        self.sort_ones_first();
        loop {
            let threes: Vec<usize> = (1..=n).filter(|&i| self.cur.a(i) == 3).collect();
            if threes.len() < 4 {
                break;
            }
            self.step(NamedCurve::Quad([threes[0], threes[1], threes[2], threes[3]]));
        }
        self.sort_ones_first();
    }

    /// Selection sort with `τ_{a_i + a_j}`, which swaps `q(a_i)` and `q(a_j)` in Pin⁻.
    fn sort_ones_first(&mut self) {
        let n = self.n();
        let mut next = 1;
        for i in 1..=n {
            if self.cur.a(i) == 1 {
                if i != next {
                    self.step(Self::pair(next, i));
                }
                next += 1;
            }
        }
    }
}
