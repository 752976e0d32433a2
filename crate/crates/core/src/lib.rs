//! Framed, r-Spin and Pin± structures on surfaces with boundary, modelled as
//! finite coordinate sets acted on by Dehn twists.
//!
//! The crate computes the twist action in closed form, the generalised Arf
//! invariants, normal forms with replayable twist-word certificates, orbit
//! partitions by exhaustive search, and the gluing laws for the invariants.

pub mod action;
pub mod error;
pub mod gluing;
pub mod orbit;
pub mod pin;
pub mod ring;
pub mod rspin;
pub mod structure;
pub mod suite;
pub mod surface;
pub mod word;

pub use error::{Error, Result};
pub use orbit::{enumerate, same_orbit, OrbitRelation, OrbitReport};
pub use pin::{PinSign, PinStructure, Violation};
pub use ring::CoeffRing;
pub use rspin::{NormalForm, ThetaStructure};
pub use structure::{CoordinateSpace, Structure, StructureKind};
pub use surface::{CurveClass, NamedCurve, SurfaceSpec};
pub use word::{Letter, TwistCurve, TwistWord};
