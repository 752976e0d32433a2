//! Gluing structured surfaces: the explicit pants gluing on coordinates, the
//! additivity laws for the invariants, genus-one surjectivity, and the
//! diagonal fillers of commutative squares.
//!
//! A structured cobordism orders its boundary with the outgoing components
//! first. Boundary conditions are matched by equality of `δ` entries.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbit::partition;
use crate::pin::PinSign;
use crate::ring::CoeffRing;
use crate::rspin::{arf_of, ThetaStructure};
use crate::structure::{CoordinateSpace, Structure, StructureKind};
use crate::surface::SurfaceSpec;

/// A pair of pants `Σ_{0,3}` with arcs `r_1: ∂_0 → ∂_1`, `r_2: ∂_0 → ∂_2`.
/// It is glued to another surface along `∂_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pants {
    pub r1: i64,
    pub r2: i64,
    pub delta: [i64; 3],
}

impl Pants {
    pub fn structure(&self, ring: CoeffRing) -> Result<ThetaStructure> {
        ThetaStructure::new(
            ring,
            SurfaceSpec::orientable(0, 3)?,
            vec![self.r1, self.r2],
            self.delta.to_vec(),
        )
    }

    /// `R_1 δ_1 + R_2 δ_2 mod 2`.
    pub fn arf(&self) -> i64 {
        arf_of(0, &[self.r1, self.r2], &self.delta)
    }
}

/// Glues `pants` along its last boundary to boundary `attach` of `xi`.
///
/// The result lives on `Σ_{g,b+1}`: its first boundary is the pants' `∂_0`,
/// the untouched boundaries of `xi` keep their order, and the pants' `∂_1`
/// comes last. Old arcs pick up `R_2 + 1`, the new arc is `R_1`.
pub fn glue_pants(xi: &ThetaStructure, pants: &Pants, attach: usize) -> Result<ThetaStructure> {
    if xi.genus() == 0 {
        return Err(Error::GenusZero);
    }
    if attach != 0 {
        return Err(Error::UnsupportedGluing(format!(
            "pants attach to the first boundary only (got boundary {attach})"
        )));
    }
    let ring = xi.ring;
    if ring.canon(pants.delta[2]) != xi.delta[attach] {
        return Err(Error::DeltaMismatch(format!(
            "pants leg has δ = {}, boundary {attach} has δ = {}",
            ring.canon(pants.delta[2]),
            xi.delta[attach]
        )));
    }
    let g = xi.genus();
    let b = xi.surface.boundaries;
    let mut coords = xi.coords[..2 * g].to_vec();
    coords.extend(xi.coords[2 * g..].iter().map(|&r| ring.add(r, pants.r2 + 1)));
    coords.push(pants.r1);
    let mut delta = Vec::with_capacity(b + 1);
    delta.push(pants.delta[0]);
    delta.extend_from_slice(&xi.delta[1..]);
    delta.push(pants.delta[1]);
    ThetaStructure::new(ring, SurfaceSpec::orientable(g, b + 1)?, coords, delta)
}

/// A structure together with a partition of its boundary into outgoing and
/// incoming components, every outgoing index below every incoming one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredCobordism {
    pub structure: Structure,
    pub outgoing: Vec<usize>,
    pub incoming: Vec<usize>,
}

impl StructuredCobordism {
    pub fn new(structure: Structure, outgoing: Vec<usize>, incoming: Vec<usize>) -> Result<Self> {
        let c = StructuredCobordism {
            structure,
            outgoing,
            incoming,
        };
        c.validate()?;
        Ok(c)
    }

    /// The boundary split at `k`: `0..k` outgoing, the rest incoming.
    pub fn split(structure: Structure, k: usize) -> Result<Self> {
        let b = structure.surface().boundaries;
        StructuredCobordism::new(structure, (0..k.min(b)).collect(), (k.min(b)..b).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let b = self.structure.surface().boundaries;
        let order: Vec<usize> = self.outgoing.iter().chain(&self.incoming).copied().collect();
        if order != (0..b).collect::<Vec<_>>() {
            return Err(Error::UnsupportedGluing(format!(
                "outgoing {:?} and incoming {:?} must list 0..{b} in order, outgoing first",
                self.outgoing, self.incoming
            )));
        }
        Ok(())
    }

    pub fn invariant(&self) -> Result<i64> {
        self.structure.invariant()?.ok_or_else(|| match self.structure.kind() {
            StructureKind::Theta { r } => Error::OddModulus(r),
            StructureKind::Pin { .. } => unreachable!("Pin structures always carry A"),
        })
    }
}

/// The glued surface's type and invariant, which determine its orbit
/// whenever `complete` holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitClassDescriptor {
    #[serde(flatten)]
    pub kind: StructureKind,
    pub surface: SurfaceSpec,
    pub invariant: i64,
    /// Genus at least 2 (θ_r) or at least 3 crosscaps (Pin).
    pub complete: bool,
}

/// The additivity law: the invariant of a single-boundary gluing of
/// structures with invariants `left` and `right` along a boundary with `δ = d`.
pub fn glued_invariant(kind: StructureKind, left: i64, right: i64, d: i64) -> i64 {
    match kind {
        StructureKind::Theta { .. } => (left + right + d).rem_euclid(2),
        StructureKind::Pin { sign: PinSign::Plus } => (left + right).rem_euclid(2),
        StructureKind::Pin { sign: PinSign::Minus } => (left + right + d).rem_euclid(4),
    }
}

/// Glues the outgoing boundary `lo` of `l` to the incoming boundary `ri` of
/// `rt` and predicts the orbit class of the result from the invariants alone.
pub fn glue_pi0(
    l: &StructuredCobordism,
    rt: &StructuredCobordism,
    matching: &[(usize, usize)],
) -> Result<OrbitClassDescriptor> {
    l.validate()?;
    rt.validate()?;
    let &[(lo, ri)] = matching else {
        return Err(Error::UnsupportedGluing(format!(
            "only single-boundary gluings are supported, got {} pairs",
            matching.len()
        )));
    };
    if !l.outgoing.contains(&lo) {
        return Err(Error::UnsupportedGluing(format!("boundary {lo} is not outgoing")));
    }
    if !rt.incoming.contains(&ri) {
        return Err(Error::UnsupportedGluing(format!("boundary {ri} is not incoming")));
    }
    let kind = l.structure.kind();
    if rt.structure.kind() != kind {
        return Err(Error::UnsupportedGluing(format!(
            "cannot glue {kind} to {}",
            rt.structure.kind()
        )));
    }
    if let StructureKind::Pin { .. } = kind {
        for (c, side) in [(l, "left"), (rt, "right")] {
            if c.structure.surface().boundaries != 2 || c.outgoing != [0] || c.incoming != [1] {
                return Err(Error::UnsupportedGluing(format!(
                    "Pin gluing needs S_(n,1+1) cobordisms; the {side} one is not"
                )));
            }
        }
    }
    let d = l.structure.delta()[lo];
    if rt.structure.delta()[ri] != d {
        return Err(Error::DeltaMismatch(format!(
            "outgoing boundary has δ = {d}, incoming boundary has δ = {}",
            rt.structure.delta()[ri]
        )));
    }
    let (sl, sr) = (l.structure.surface(), rt.structure.surface());
    let (surface, complete) = match kind {
        StructureKind::Theta { r } => {
            if r % 2 == 1 {
                return Err(Error::OddModulus(r));
            }
            let s = SurfaceSpec::orientable(sl.genus + sr.genus, sl.boundaries + sr.boundaries - 2)?;
            (s, s.genus >= 2)
        }
        StructureKind::Pin { .. } => {
            let s = SurfaceSpec::non_orientable(sl.genus + sr.genus, 2)?;
            (s, s.genus >= 3)
        }
    };
    let invariant = glued_invariant(kind, l.invariant()?, rt.invariant()?, d);
    Ok(OrbitClassDescriptor {
        kind,
        surface,
        invariant,
        complete,
    })
}

/// One target class hit by a gluing, with the source and pants producing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityWitness {
    /// Least coordinate vector of the target class.
    pub target: Vec<i64>,
    /// Least coordinate vector of the source class.
    pub source: Vec<i64>,
    pub pants: (i64, i64),
    pub glued: Vec<i64>,
    /// Normal form of the glued structure.
    pub reduced: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityReport {
    pub r: u64,
    pub source: SurfaceSpec,
    pub target: SurfaceSpec,
    pub delta: Vec<i64>,
    pub delta_target: Vec<i64>,
    pub source_classes: usize,
    pub target_classes: usize,
    pub surjective: bool,
    pub witnesses: Vec<SurjectivityWitness>,
    /// Representatives of target classes nothing glues onto.
    pub missing: Vec<Vec<i64>>,
}

/// Checks that gluing pants onto `θ_r(Σ_{1,b}; δ)` reaches every orbit of
/// `θ_r(Σ_{1,b+1}; δ′)`, where `δ′` keeps `δ_1, …, δ_{b-1}` in place.
pub fn check_surjectivity_genus1(
    r: u64,
    b: usize,
    delta: &[i64],
    delta_target: &[i64],
    budget: u128,
) -> Result<SurjectivityReport> {
    let ring = CoeffRing::new(r);
    if r == 0 {
        return Err(Error::InfiniteSet);
    }
    let source = SurfaceSpec::orientable(1, b)?;
    let target = SurfaceSpec::orientable(1, b + 1)?;
    if delta.len() != b {
        return Err(Error::dim("delta", b, delta.len()));
    }
    if delta_target.len() != b + 1 {
        return Err(Error::dim("delta_target", b + 1, delta_target.len()));
    }
    let delta: Vec<i64> = delta.iter().map(|&d| ring.canon(d)).collect();
    let delta_target: Vec<i64> = delta_target.iter().map(|&d| ring.canon(d)).collect();
    if delta[1..] != delta_target[1..b] {
        return Err(Error::DeltaMismatch(format!(
            "the boundaries kept from {delta:?} must reappear in {delta_target:?}"
        )));
    }
    let kind = StructureKind::Theta { r };
    let src = partition(CoordinateSpace::new(kind, source, delta.clone())?, budget)?;
    let tgt = partition(CoordinateSpace::new(kind, target, delta_target.clone())?, budget)?;
    let pants_delta = [delta_target[0], delta_target[b], delta[0]];
    let reps: Vec<ThetaStructure> = src
        .representatives
        .iter()
        .map(|&i| ThetaStructure::new(ring, source, src.space.coords_of(i), delta.clone()))
        .collect::<Result<_>>()?;

    let m = r as i64;
    let hits: Vec<(u32, usize, i64, i64, Vec<i64>)> = (0..m * m)
        .into_par_iter()
        .map(|k| {
            let pants = Pants {
                r1: k / m,
                r2: k % m,
                delta: pants_delta,
            };
            reps.iter()
                .enumerate()
                .map(|(s, xi)| {
                    let glued = glue_pants(xi, &pants, 0)?;
                    Ok((tgt.label(&glued.coords), s, pants.r1, pants.r2, glued.coords))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    // first hit per target orbit: source index, pants values, glued coordinates
    type Hit = (usize, i64, i64, Vec<i64>);
    let mut first: Vec<Option<Hit>> = vec![None; tgt.orbit_count()];
    for (label, s, r1, r2, glued) in hits {
        let slot = &mut first[label as usize];
        if slot.is_none() {
            *slot = Some((s, r1, r2, glued));
        }
    }
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    for (label, hit) in first.into_iter().enumerate() {
        let target_rep = tgt.space.coords_of(tgt.representatives[label]);
        match hit {
            Some((s, r1, r2, glued)) => {
                let reduced = ThetaStructure::new(ring, target, glued.clone(), delta_target.clone())?
                    .normal_form()?
                    .representative
                    .coords;
                witnesses.push(SurjectivityWitness {
                    target: target_rep,
                    source: reps[s].coords.clone(),
                    pants: (r1, r2),
                    glued,
                    reduced,
                });
            }
            None => missing.push(target_rep),
        }
    }
    Ok(SurjectivityReport {
        r,
        source,
        target,
        delta,
        delta_target,
        source_classes: src.orbit_count(),
        target_classes: tgt.orbit_count(),
        surjective: missing.is_empty(),
        witnesses,
        missing,
    })
}

/// A commutative square `L ∘ T ≅ B ∘ Rt` of invariants, with the boundary
/// conditions `δ_B` and `δ_D` entering the additivity law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalSquare {
    #[serde(flatten)]
    pub kind: StructureKind,
    pub t: i64,
    pub l: i64,
    pub b: i64,
    pub rt: i64,
    pub delta_b: i64,
    pub delta_d: i64,
}

impl DiagonalSquare {
    fn modulus(&self) -> i64 {
        match self.kind {
            StructureKind::Pin { sign: PinSign::Minus } => 4,
            _ => 2,
        }
    }

    /// Weight of the boundary term in the additivity law.
    fn boundary_weight(&self) -> i64 {
        match self.kind {
            StructureKind::Pin { sign: PinSign::Plus } => 0,
            _ => 1,
        }
    }

    /// `A(Rt) + A(B) + δ_B - A(L) - A(T) - δ_D`, reduced; zero for a square
    /// that can commute.
    pub fn defect(&self) -> i64 {
        let c = self.boundary_weight();
        (self.rt + self.b + c * self.delta_b - self.l - self.t - c * self.delta_d).rem_euclid(self.modulus())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalSolution {
    pub delta_invariant: i64,
    /// `A(Δ ∘ T) = A(Rt)`.
    pub upper_triangle: bool,
    /// `A(B ∘ Δ) = A(L)`.
    pub lower_triangle: bool,
}

/// The invariant of a diagonal `Δ` with `Δ ∘ T ≅ Rt` and `B ∘ Δ ≅ L`:
/// `A(Δ) = A(Rt) - A(T) - δ_D`, the boundary term dropped for Pin⁺.
pub fn solve_diagonal(sq: &DiagonalSquare) -> Result<DiagonalSolution> {
    if let StructureKind::Theta { r } = sq.kind {
        if r % 2 == 1 {
            return Err(Error::OddModulus(r));
        }
    }
    let defect = sq.defect();
    if defect != 0 {
        return Err(Error::IncompatibleSquare(format!(
            "A(Rt) + A(B) + δ_B - A(L) - A(T) - δ_D = {defect}"
        )));
    }
    let m = sq.modulus();
    let c = sq.boundary_weight();
    let delta_invariant = (sq.rt - sq.t - c * sq.delta_d).rem_euclid(m);
    let upper_triangle = (delta_invariant + sq.t + c * sq.delta_d - sq.rt).rem_euclid(m) == 0;
    let lower_triangle = (delta_invariant + sq.b + c * sq.delta_b - sq.l).rem_euclid(m) == 0;
    if !(upper_triangle && lower_triangle) {
        return Err(Error::IncompatibleSquare("diagonal fails a triangle".into()));
    }
    Ok(DiagonalSolution {
        delta_invariant,
        upper_triangle,
        lower_triangle,
    })
}

/// Invariant values realized by `Pin±` structures on `S_{n,1+1}` for one `δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityRow {
    pub sign: PinSign,
    pub crosscaps: usize,
    pub delta: Vec<i64>,
    pub realized: Vec<i64>,
    pub all_values: bool,
}

/// Enumerates `S_{n,1+1}` for every valid `δ` and records which values of `A` occur.
pub fn pin_realizability(sign: PinSign, crosscaps: usize) -> Result<Vec<RealizabilityRow>> {
    let surface = SurfaceSpec::non_orientable(crosscaps, 2)?;
    let kind = StructureKind::Pin { sign };
    crate::orbit::all_deltas(kind, &surface)
        .into_iter()
        .map(|delta| {
            let space = CoordinateSpace::new(kind, surface, delta.clone())?;
            let mut seen = vec![false; sign.invariant_modulus() as usize];
            for i in 0..space.size() {
                if let Some(a) = space.invariant(&space.coords_of(i)) {
                    seen[a as usize] = true;
                }
            }
            let realized: Vec<i64> = (0..seen.len() as i64).filter(|&a| seen[a as usize]).collect();
            Ok(RealizabilityRow {
                sign,
                crosscaps,
                all_values: realized.len() == seen.len(),
                delta,
                realized,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::{admissible_deltas, DEFAULT_BUDGET};
    use crate::pin::PinStructure;

    fn theta(r: u64, g: usize, b: usize, coords: Vec<i64>, delta: Vec<i64>) -> ThetaStructure {
        ThetaStructure::new(CoeffRing::new(r), SurfaceSpec::orientable(g, b).unwrap(), coords, delta).unwrap()
    }

    fn pin_with(sign: PinSign, n: usize, delta: Vec<i64>, a: i64) -> Structure {
        let s = SurfaceSpec::non_orientable(n, 2).unwrap();
        let space = CoordinateSpace::new(StructureKind::Pin { sign }, s, delta.clone()).unwrap();
        let coords = (0..space.size())
            .map(|i| space.coords_of(i))
            .find(|c| space.invariant(c) == Some(a))
            .unwrap();
        Structure::Pin(PinStructure::new(sign, s, coords, delta).unwrap())
    }

    #[test]
    fn pants_formula() {
        let xi = theta(5, 1, 3, vec![-1, 2, 0, 0], vec![1, 2, 2]);
        let pants = Pants {
            r1: 3,
            r2: 1,
            delta: [4, 0, 1],
        };
        let glued = glue_pants(&xi, &pants, 0).unwrap();
        assert_eq!(glued.coords, vec![4, 2, 2, 2, 3]);
        assert_eq!(glued.delta, vec![4, 2, 2, 0]);
        assert_eq!(glued.surface, SurfaceSpec::orientable(1, 4).unwrap());

        let flat = Pants {
            r1: 0,
            r2: -1,
            delta: [4, 0, 1],
        };
        assert_eq!(glue_pants(&xi, &flat, 0).unwrap().coords, vec![4, 2, 0, 0, 0]);
    }

    #[test]
    fn pants_errors() {
        let xi = theta(4, 1, 2, vec![0, 0, 0], vec![1, 1]);
        let bad = Pants {
            r1: 0,
            r2: 0,
            delta: [0, 0, 2],
        };
        assert!(matches!(glue_pants(&xi, &bad, 0), Err(Error::DeltaMismatch(_))));
        assert!(matches!(glue_pants(&xi, &bad, 1), Err(Error::UnsupportedGluing(_))));
        let disc = theta(4, 0, 2, vec![0], vec![1, 1]);
        assert!(matches!(glue_pants(&disc, &bad, 0), Err(Error::GenusZero)));
    }

    #[test]
    fn glued_pants_reduce_to_the_shifted_handle() {
        // (-1, X + (R_2+1) Σ δ_i + R_1 δ', 0, …, 0) lies in the orbit of the glued structure.
        let r = 6;
        let ring = CoeffRing::new(r);
        for x in 0..r as i64 {
            for (r1, r2) in [(0, 0), (1, 2), (5, 3), (2, 5)] {
                let xi = theta(r, 1, 3, vec![-1, x, 0, 0], vec![1, 2, 3]);
                let pants = Pants {
                    r1,
                    r2,
                    delta: [4, 1, 1],
                };
                let glued = glue_pants(&xi, &pants, 0).unwrap();
                let y = ring.canon(x + (r2 + 1) * (2 + 3) + r1);
                let space =
                    CoordinateSpace::new(StructureKind::Theta { r }, glued.surface, glued.delta.clone()).unwrap();
                let orbits = partition(space, DEFAULT_BUDGET).unwrap();
                assert_eq!(
                    orbits.label(&glued.coords),
                    orbits.label(&[-1i64, y, 0, 0, 0].map(|c| ring.canon(c))),
                    "x={x} pants=({r1},{r2})"
                );
            }
        }
    }

    #[test]
    fn pants_arf_matches_additivity() {
        for r in [2u64, 4] {
            let s = SurfaceSpec::orientable(1, 2).unwrap();
            for delta in admissible_deltas(r, &s) {
                let space = CoordinateSpace::new(StructureKind::Theta { r }, s, delta.clone()).unwrap();
                for i in 0..space.size() {
                    let xi = theta(r, 1, 2, space.coords_of(i), delta.clone());
                    for d0 in 0..r as i64 {
                        let d1 = (delta[0] - d0).rem_euclid(2);
                        let pants = Pants {
                            r1: 1,
                            r2: 1,
                            delta: [d0, d1, delta[0]],
                        };
                        let glued = glue_pants(&xi, &pants, 0).unwrap();
                        let want =
                            glued_invariant(StructureKind::Theta { r }, xi.arf().unwrap(), pants.arf(), delta[0]);
                        assert_eq!(glued.arf().unwrap(), want);
                    }
                }
            }
        }
    }

    #[test]
    fn theta_tori_glue() {
        let l = theta(2, 1, 2, vec![0, 0, 0], vec![0, 0]);
        let rt = theta(2, 1, 2, vec![1, 1, 0], vec![0, 0]);
        assert_eq!((l.arf().unwrap(), rt.arf().unwrap()), (0, 1));
        let l = StructuredCobordism::split(Structure::Theta(l), 1).unwrap();
        let rt = StructuredCobordism::split(Structure::Theta(rt), 1).unwrap();
        let d = glue_pi0(&l, &rt, &[(0, 1)]).unwrap();
        assert_eq!(d.invariant, 1);
        assert_eq!(d.surface, SurfaceSpec::orientable(2, 2).unwrap());
        assert!(d.complete);
    }

    #[test]
    fn pin_glue_examples() {
        let plus = |delta: Vec<i64>, a| StructuredCobordism::split(pin_with(PinSign::Plus, 3, delta, a), 1).unwrap();
        let d = glue_pi0(&plus(vec![1, 0], 1), &plus(vec![0, 1], 1), &[(0, 1)]).unwrap();
        assert_eq!(d.invariant, 0);
        assert_eq!(d.surface, SurfaceSpec::non_orientable(6, 2).unwrap());

        let l = StructuredCobordism::split(pin_with(PinSign::Minus, 3, vec![2, 2], 1), 1).unwrap();
        let rt = StructuredCobordism::split(pin_with(PinSign::Minus, 3, vec![2, 2], 2), 1).unwrap();
        assert_eq!(glue_pi0(&l, &rt, &[(0, 1)]).unwrap().invariant, 1);
    }

    #[test]
    fn glue_pi0_errors() {
        let t = |delta: Vec<i64>| {
            StructuredCobordism::split(Structure::Theta(theta(2, 1, 2, vec![0, 0, 0], delta)), 1).unwrap()
        };
        assert!(matches!(
            glue_pi0(&t(vec![1, 1]), &t(vec![0, 0]), &[(0, 1)]),
            Err(Error::DeltaMismatch(_))
        ));
        assert!(matches!(
            glue_pi0(&t(vec![0, 0]), &t(vec![0, 0]), &[(0, 1), (0, 1)]),
            Err(Error::UnsupportedGluing(_))
        ));
        assert!(matches!(
            glue_pi0(&t(vec![0, 0]), &t(vec![0, 0]), &[(1, 1)]),
            Err(Error::UnsupportedGluing(_))
        ));
        let odd = StructuredCobordism::split(Structure::Theta(theta(3, 1, 2, vec![0, 0, 0], vec![0, 0])), 1).unwrap();
        assert!(matches!(glue_pi0(&odd, &odd, &[(0, 1)]), Err(Error::OddModulus(3))));
        let three = Structure::Pin(
            PinStructure::new(
                PinSign::Plus,
                SurfaceSpec::non_orientable(3, 3).unwrap(),
                vec![0; 5],
                vec![1, 0, 0],
            )
            .unwrap(),
        );
        let three = StructuredCobordism::split(three, 1).unwrap();
        let plus = StructuredCobordism::split(pin_with(PinSign::Plus, 3, vec![1, 0], 0), 1).unwrap();
        assert!(matches!(
            glue_pi0(&plus, &three, &[(0, 1)]),
            Err(Error::UnsupportedGluing(_))
        ));
        assert!(StructuredCobordism::new(plus.structure.clone(), vec![1], vec![0]).is_err());
    }

    #[test]
    fn additivity_is_associative() {
        for kind in [
            StructureKind::Theta { r: 2 },
            StructureKind::Pin { sign: PinSign::Plus },
            StructureKind::Pin { sign: PinSign::Minus },
        ] {
            let m = if kind == (StructureKind::Pin { sign: PinSign::Minus }) {
                4
            } else {
                2
            };
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        for d1 in [0, 2] {
                            for d2 in [0, 2] {
                                let left = glued_invariant(kind, glued_invariant(kind, a, b, d1), c, d2);
                                let right = glued_invariant(kind, a, glued_invariant(kind, b, c, d2), d1);
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn surjectivity_small_cases() {
        let rep = check_surjectivity_genus1(1, 1, &[0], &[0, 0], DEFAULT_BUDGET).unwrap();
        assert!(rep.surjective);
        assert_eq!(rep.target_classes, 1);
        for (d, dt) in [(vec![0], vec![1, 1]), (vec![2], vec![0, 2])] {
            let rep = check_surjectivity_genus1(4, 1, &d, &dt, DEFAULT_BUDGET).unwrap();
            assert!(rep.surjective, "{rep:?}");
            assert_eq!(rep.witnesses.len(), rep.target_classes);
        }
        assert!(matches!(
            check_surjectivity_genus1(4, 2, &[0, 1], &[0, 2, 1], DEFAULT_BUDGET),
            Err(Error::DeltaMismatch(_))
        ));
        assert!(check_surjectivity_genus1(6, 2, &[0, 0], &[0, 0, 0], 10)
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn diagonal_examples() {
        let sq = |t, l, b, rt, delta_b, delta_d| DiagonalSquare {
            kind: StructureKind::Theta { r: 2 },
            t,
            l,
            b,
            rt,
            delta_b,
            delta_d,
        };
        assert_eq!(solve_diagonal(&sq(0, 0, 0, 0, 0, 0)).unwrap().delta_invariant, 0);
        let s = solve_diagonal(&sq(0, 1, 0, 1, 0, 0)).unwrap();
        assert_eq!(s.delta_invariant, 1);
        assert!(s.upper_triangle && s.lower_triangle);
        assert!(matches!(
            solve_diagonal(&sq(0, 0, 0, 1, 0, 0)),
            Err(Error::IncompatibleSquare(_))
        ));
        let pin = DiagonalSquare {
            kind: StructureKind::Pin { sign: PinSign::Plus },
            t: 1,
            l: 0,
            b: 1,
            rt: 0,
            delta_b: 1,
            delta_d: 0,
        };
        assert_eq!(solve_diagonal(&pin).unwrap().delta_invariant, 1);
    }

    #[test]
    fn pin_minus_needs_three_crosscaps() {
        let two = pin_realizability(PinSign::Minus, 2).unwrap();
        assert!(two.iter().any(|row| !row.all_values));
        assert!(pin_realizability(PinSign::Minus, 3)
            .unwrap()
            .iter()
            .all(|row| row.all_values));
        for n in [2, 3] {
            assert!(pin_realizability(PinSign::Plus, n)
                .unwrap()
                .iter()
                .all(|row| row.all_values));
        }
    }
}
