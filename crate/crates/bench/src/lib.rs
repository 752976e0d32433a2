//! Fixtures shared by the benchmarks: surfaces whose orbit sets are large
//! enough to time but small enough to enumerate in well under a second.

use spinorbit::{PinSign, StructureKind, SurfaceSpec};

/// A named enumeration case.
pub struct Case {
    pub name: &'static str,
    pub kind: StructureKind,
    pub surface: SurfaceSpec,
    pub delta: Vec<i64>,
}

pub fn orbit_cases() -> Vec<Case> {
    let theta = |r| StructureKind::Theta { r };
    let pin = |sign| StructureKind::Pin { sign };
    vec![
        Case {
            name: "rspin r=4 S_{2,1}",
            kind: theta(4),
            surface: SurfaceSpec::orientable(2, 1).unwrap(),
            delta: vec![0],
        },
        Case {
            name: "rspin r=6 S_{2,2}",
            kind: theta(6),
            surface: SurfaceSpec::orientable(2, 2).unwrap(),
            delta: vec![0, 0],
        },
        Case {
            name: "rspin r=2 S_{4,1}",
            kind: theta(2),
            surface: SurfaceSpec::orientable(4, 1).unwrap(),
            delta: vec![0],
        },
        Case {
            name: "pin+ N_{5,2}",
            kind: pin(PinSign::Plus),
            surface: SurfaceSpec::non_orientable(5, 2).unwrap(),
            delta: vec![1, 0],
        },
        Case {
            name: "pin- N_{5,1}",
            kind: pin(PinSign::Minus),
            surface: SurfaceSpec::non_orientable(5, 1).unwrap(),
            delta: vec![0],
        },
    ]
}
