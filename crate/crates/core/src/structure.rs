//! A single interface over θ_r- and Pin-structures, and the dense encoding of
//! their finite coordinate sets used by orbit enumeration.

use serde::{Deserialize, Serialize};

use crate::action::{LinearTwist, TwistTable};
use crate::error::{Error, Result};
use crate::pin::{invariant_a_of, PinSign, PinStructure};
use crate::ring::CoeffRing;
use crate::rspin::{arf_of, NormalForm, ThetaStructure};
use crate::surface::SurfaceSpec;
use crate::word::TwistWord;

/// Which family of structures a coordinate vector describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum StructureKind {
    /// θ_r-structures; `r = 0` are framings.
    #[serde(rename = "rspin")]
    Theta { r: u64 },
    #[serde(rename = "pin")]
    Pin { sign: PinSign },
}

impl StructureKind {
    pub fn ring(self) -> Option<CoeffRing> {
        match self {
            StructureKind::Theta { r } => Some(CoeffRing::new(r)),
            StructureKind::Pin { .. } => None,
        }
    }

    /// Whether the kind carries a complete invariant in the stable range
    /// (`arf` for even `r`, `A` for Pin).
    pub fn has_invariant(self) -> bool {
        match self {
            StructureKind::Theta { r } => r % 2 == 0,
            StructureKind::Pin { .. } => true,
        }
    }

    pub fn invariant_name(self) -> &'static str {
        match self {
            StructureKind::Theta { .. } => "arf",
            StructureKind::Pin { sign: PinSign::Plus } => "A+",
            StructureKind::Pin { sign: PinSign::Minus } => "A-",
        }
    }

    /// Invariant of raw coordinates; `None` when the kind has none.
    pub fn invariant(self, surface: &SurfaceSpec, coords: &[i64], delta: &[i64]) -> Option<i64> {
        match self {
            StructureKind::Theta { r } if r % 2 == 0 => Some(arf_of(surface.genus, coords, delta)),
            StructureKind::Theta { .. } => None,
            StructureKind::Pin { sign } => Some(invariant_a_of(sign, surface.genus, coords, delta)),
        }
    }

    /// Orbit count predicted by the classification theorems, when they apply.
    pub fn predicted_orbits(self, surface: &SurfaceSpec, delta: &[i64]) -> Option<usize> {
        match self {
            StructureKind::Theta { r } => {
                let ring = CoeffRing::new(r);
                if r == 0 || surface.genus < 2 || !ThetaStructure::delta_admissible(ring, delta) {
                    None
                } else if r % 2 == 1 {
                    Some(1)
                } else {
                    Some(2)
                }
            }
            StructureKind::Pin { sign } => (surface.genus >= 3).then_some(match sign {
                PinSign::Plus => 2,
                PinSign::Minus => 4,
            }),
        }
    }

    /// Compiled catalog twists for fixed `(surface, δ)`.
    pub fn generators(self, surface: &SurfaceSpec, delta: &[i64]) -> Vec<LinearTwist> {
        match self {
            StructureKind::Theta { r } => ThetaStructure::compiled_generators(CoeffRing::new(r), surface, delta),
            StructureKind::Pin { sign } => PinStructure::compiled_generators(sign, surface, delta),
        }
    }

    /// Exponents worth applying: one when every twist is an involution on coordinates.
    pub fn exponents(self) -> &'static [i64] {
        match self {
            StructureKind::Theta { r } if r > 2 => &[1, -1],
            _ => &[1],
        }
    }
}

impl std::fmt::Display for StructureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StructureKind::Theta { r: 0 } => write!(f, "framed"),
            StructureKind::Theta { r } => write!(f, "rspin(r={r})"),
            StructureKind::Pin { sign } => write!(f, "{sign}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Structure {
    Theta(ThetaStructure),
    Pin(PinStructure),
}

impl Structure {
    pub fn build(kind: StructureKind, surface: SurfaceSpec, coords: Vec<i64>, delta: Vec<i64>) -> Result<Structure> {
        Ok(match kind {
            StructureKind::Theta { r } => {
                Structure::Theta(ThetaStructure::new(CoeffRing::new(r), surface, coords, delta)?)
            }
            StructureKind::Pin { sign } => Structure::Pin(PinStructure::new(sign, surface, coords, delta)?),
        })
    }

    pub fn kind(&self) -> StructureKind {
        match self {
            Structure::Theta(t) => StructureKind::Theta { r: t.ring.modulus() },
            Structure::Pin(p) => StructureKind::Pin { sign: p.sign },
        }
    }

    pub fn surface(&self) -> &SurfaceSpec {
        match self {
            Structure::Theta(t) => &t.surface,
            Structure::Pin(p) => &p.surface,
        }
    }

    pub fn coords(&self) -> &[i64] {
        match self {
            Structure::Theta(t) => &t.coords,
            Structure::Pin(p) => &p.coords,
        }
    }

    pub fn delta(&self) -> &[i64] {
        match self {
            Structure::Theta(t) => &t.delta,
            Structure::Pin(p) => &p.delta,
        }
    }

    /// The kind's invariant (`arf` for even `r`, `A` for Pin).
    pub fn invariant(&self) -> Result<Option<i64>> {
        match self {
            Structure::Theta(t) if t.ring.is_even() => t.arf().map(Some),
            Structure::Theta(_) => Ok(None),
            Structure::Pin(p) => p.invariant_a().map(Some),
        }
    }

    pub fn apply_word(&self, w: &TwistWord) -> Result<Structure> {
        Ok(match self {
            Structure::Theta(t) => Structure::Theta(t.apply_word(w)?),
            Structure::Pin(p) => Structure::Pin(p.apply_word(w)?),
        })
    }

    pub fn twist_table(&self) -> TwistTable {
        match self {
            Structure::Theta(t) => t.twist_table(),
            Structure::Pin(p) => p.twist_table(),
        }
    }

    pub fn apply_word_with(&self, w: &TwistWord, table: &TwistTable) -> Result<Structure> {
        Ok(match self {
            Structure::Theta(t) => Structure::Theta(t.apply_word_with(w, table)?),
            Structure::Pin(p) => Structure::Pin(p.apply_word_with(w, table)?),
        })
    }

    pub fn normal_form(&self) -> Result<NormalForm<Structure>> {
        self.normal_form_with(&self.twist_table())
    }

    pub fn normal_form_with(&self, table: &TwistTable) -> Result<NormalForm<Structure>> {
        Ok(match self {
            Structure::Theta(t) => {
                let nf = t.normal_form_with(table)?;
                NormalForm {
                    representative: Structure::Theta(nf.representative),
                    word: nf.word,
                    complete: nf.complete,
                }
            }
            Structure::Pin(p) => {
                let nf = p.normal_form()?;
                NormalForm {
                    representative: Structure::Pin(nf.representative),
                    word: nf.word,
                    complete: nf.complete,
                }
            }
        })
    }
}

/// Mixed-radix encoding of a finite coordinate set. Index order is the
/// lexicographic order of coordinate vectors, first coordinate most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateSpace {
    pub kind: StructureKind,
    pub surface: SurfaceSpec,
    pub delta: Vec<i64>,
    radix: u64,
    size: u64,
    len: usize,
}

impl CoordinateSpace {
    pub fn twist_table(&self) -> TwistTable {
        TwistTable::new(
            self.surface,
            self.delta.clone(),
            self.kind.generators(&self.surface, &self.delta),
        )
    }

    /// Rejects framings (infinite set) and invalid boundary conditions.
    pub fn new(kind: StructureKind, surface: SurfaceSpec, delta: Vec<i64>) -> Result<CoordinateSpace> {
        let surface = surface.validated()?;
        if delta.len() != surface.boundaries {
            return Err(Error::dim("delta", surface.boundaries, delta.len()));
        }
        let (radix, delta) = match kind {
            StructureKind::Theta { r: 0 } => return Err(Error::InfiniteSet),
            StructureKind::Theta { r } => {
                if !surface.orientable {
                    return Err(Error::InvalidSurface(
                        "θ_r-structures live on orientable surfaces".into(),
                    ));
                }
                (r, delta.iter().map(|d| d.rem_euclid(r as i64)).collect())
            }
            StructureKind::Pin { sign } => {
                let probe = PinStructure::from_parts(sign, surface, reference_coords(sign, &surface), delta)?;
                probe.validate().map_err(Error::InvalidStructure)?;
                (2, probe.delta)
            }
        };
        let len = surface.coordinate_len();
        let size = radix.checked_pow(len as u32).ok_or(Error::BudgetExceeded {
            needed: u128::MAX,
            budget: u64::MAX as u128,
        })?;
        Ok(CoordinateSpace {
            kind,
            surface,
            delta,
            radix,
            size,
            len,
        })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn coordinate_len(&self) -> usize {
        self.len
    }

    fn halved(&self) -> bool {
        matches!(self.kind, StructureKind::Pin { sign: PinSign::Minus })
    }

    pub fn encode(&self, coords: &[i64]) -> u64 {
        let shift = self.halved() as u32;
        coords
            .iter()
            .fold(0u64, |acc, &v| acc * self.radix + ((v as u64) >> shift))
    }

    pub fn decode(&self, mut index: u64, out: &mut [i64]) {
        let n = self.surface.genus;
        for k in (0..self.len).rev() {
            let d = (index % self.radix) as i64;
            index /= self.radix;
            out[k] = if !self.halved() {
                d
            } else if k < n {
                1 + 2 * d
            } else {
                2 * d
            };
        }
    }

    pub fn coords_of(&self, index: u64) -> Vec<i64> {
        let mut v = vec![0; self.len];
        self.decode(index, &mut v);
        v
    }

    pub fn structure(&self, index: u64) -> Structure {
        Structure::build(self.kind, self.surface, self.coords_of(index), self.delta.clone())
            .expect("decoded coordinates are valid")
    }

    pub fn invariant(&self, coords: &[i64]) -> Option<i64> {
        self.kind.invariant(&self.surface, coords, &self.delta)
    }
}

fn reference_coords(sign: PinSign, s: &SurfaceSpec) -> Vec<i64> {
    let mut v = vec![0; s.coordinate_len()];
    if sign == PinSign::Minus {
        v[..s.genus].fill(1);
    }
    v
}
