//! Brute-force orbit enumeration under the catalog twists, and checks of the
//! classification theorems against it.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::LinearTwist;
use crate::error::{Error, Result};
use crate::pin::{PinSign, PinStructure};
use crate::ring::CoeffRing;
use crate::rspin::g_invariant;
use crate::structure::{CoordinateSpace, Structure, StructureKind};
use crate::surface::{NamedCurve, SurfaceSpec};
use crate::word::TwistWord;

/// Default cap on `|coordinate set| × |generators| × |exponents|`.
pub const DEFAULT_BUDGET: u128 = 1 << 32;

const UNSEEN: u32 = u32::MAX;

/// The orbit partition of a coordinate set.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    pub space: CoordinateSpace,
    /// Orbit id of every index; ids are assigned in increasing order of the
    /// least index in each orbit.
    pub labels: Vec<u32>,
    /// Least index of each orbit.
    pub representatives: Vec<u64>,
    pub sizes: Vec<u64>,
    pub invariants: Vec<Option<i64>>,
    /// Points whose invariant differs from that of their orbit's representative.
    pub invariant_violations: u64,
    pub generators: Vec<NamedCurve>,
}

impl OrbitPartition {
    pub fn orbit_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn label(&self, coords: &[i64]) -> u32 {
        self.labels[self.space.encode(coords) as usize]
    }

    /// Whether no two orbits share an invariant value.
    pub fn invariants_distinct(&self) -> bool {
        let values: BTreeSet<Option<i64>> = self.invariants.iter().copied().collect();
        values.len() == self.invariants.len()
    }
}

/// Work estimate used against the budget.
pub fn work_estimate(space: &CoordinateSpace) -> u128 {
    let gens = space.kind.generators(&space.surface, &space.delta).len();
    space.size() as u128 * gens as u128 * space.kind.exponents().len() as u128
}

pub fn partition(space: CoordinateSpace, budget: u128) -> Result<OrbitPartition> {
    let gens = space.kind.generators(&space.surface, &space.delta);
    partition_with(space, &gens, budget)
}

/// BFS from every unvisited index in increasing order, using `gens` with
/// every exponent in [`StructureKind::exponents`].
pub fn partition_with(space: CoordinateSpace, gens: &[LinearTwist], budget: u128) -> Result<OrbitPartition> {
    let exps = space.kind.exponents();
    let needed = space.size() as u128 * gens.len() as u128 * exps.len() as u128;
    if needed > budget || space.size() >= UNSEEN as u64 {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let size = space.size() as usize;
    let len = space.coordinate_len();
    let mut labels = vec![UNSEEN; size];
    let mut representatives = Vec::new();
    let mut sizes = Vec::new();
    let mut invariants = Vec::new();
    let mut violations = 0u64;
    let mut queue: Vec<u32> = Vec::new();
    let mut cur = vec![0i64; len];
    let mut next = vec![0i64; len];

    for start in 0..size {
        if labels[start] != UNSEEN {
            continue;
        }
        let id = representatives.len() as u32;
        labels[start] = id;
        space.decode(start as u64, &mut cur);
        let inv = space.invariant(&cur);
        queue.clear();
        queue.push(start as u32);
        let mut head = 0;
        while head < queue.len() {
            let i = queue[head];
            head += 1;
            space.decode(i as u64, &mut cur);
            if inv.is_some() && space.invariant(&cur) != inv {
                violations += 1;
            }
            for g in gens {
                for &e in exps {
                    next.copy_from_slice(&cur);
                    g.apply(&mut next, e);
                    let j = space.encode(&next) as usize;
                    if labels[j] == UNSEEN {
                        labels[j] = id;
                        queue.push(j as u32);
                    }
                }
            }
        }
        representatives.push(start as u64);
        sizes.push(queue.len() as u64);
        invariants.push(inv);
    }

    Ok(OrbitPartition {
        space,
        labels,
        representatives,
        sizes,
        invariants,
        invariant_violations: violations,
        generators: gens.iter().map(|g| g.curve).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub representative: Vec<i64>,
    pub size: u64,
    pub invariant: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    #[serde(flatten)]
    pub kind: StructureKind,
    pub surface: SurfaceSpec,
    pub delta: Vec<i64>,
    pub size: u64,
    pub orbit_count: usize,
    pub orbits: Vec<OrbitSummary>,
    pub generator_set: Vec<NamedCurve>,
    pub invariant_name: Option<String>,
    pub invariant_violations: u64,
    pub wall_time_ms: f64,
}

impl OrbitReport {
    /// One row per orbit: representative (space separated), size, invariant.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let invariant = self.invariant_name.as_deref().unwrap_or("invariant");
        let io = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["representative", "size", invariant]).map_err(io)?;
        for o in &self.orbits {
            let rep = o
                .representative
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(" ");
            let inv = o.invariant.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([rep, o.size.to_string(), inv]).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Orbits of the structures of `kind` on `surface` with boundary condition `delta`.
pub fn enumerate(kind: StructureKind, surface: SurfaceSpec, delta: Vec<i64>, budget: u128) -> Result<OrbitReport> {
    let start = Instant::now();
    let space = CoordinateSpace::new(kind, surface, delta)?;
    let p = partition(space, budget)?;
    let orbits = (0..p.orbit_count())
        .map(|k| OrbitSummary {
            representative: p.space.coords_of(p.representatives[k]),
            size: p.sizes[k],
            invariant: p.invariants[k],
        })
        .collect();
    Ok(OrbitReport {
        kind,
        surface: p.space.surface,
        delta: p.space.delta.clone(),
        size: p.space.size(),
        orbit_count: p.orbit_count(),
        orbits,
        generator_set: p.generators.clone(),
        invariant_name: kind.has_invariant().then(|| kind.invariant_name().to_string()),
        invariant_violations: p.invariant_violations,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Outcome of comparing two structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum OrbitRelation {
    /// A word carrying the first structure to the second.
    Same { word: TwistWord },
    /// An invariant taking different values on the two.
    Separated { invariant: String, left: i64, right: i64 },
    /// Normal forms differ but the classification does not cover these parameters.
    Undetermined { reason: String },
}

/// Decides whether `x` and `y` lie in one orbit, with a certificate either way
/// whenever the classification covers the parameters.
pub fn same_orbit(x: &Structure, y: &Structure) -> Result<OrbitRelation> {
    if x.kind() != y.kind() {
        return Err(Error::Parse(format!("cannot compare {} with {}", x.kind(), y.kind())));
    }
    if x.surface() != y.surface() {
        return Err(Error::InvalidSurface(format!("{} vs {}", x.surface(), y.surface())));
    }
    if x.delta() != y.delta() {
        return Err(Error::DeltaMismatch(format!("{:?} vs {:?}", x.delta(), y.delta())));
    }
    let nx = x.normal_form()?;
    let ny = y.normal_form()?;
    if nx.representative == ny.representative {
        return Ok(OrbitRelation::Same {
            word: nx.word.then(&ny.word.inverse()),
        });
    }
    if let (Some(l), Some(r)) = (x.invariant()?, y.invariant()?) {
        if l != r {
            return Ok(OrbitRelation::Separated {
                invariant: x.kind().invariant_name().into(),
                left: l,
                right: r,
            });
        }
    }
    if let (Structure::Theta(a), Structure::Theta(b)) = (x, y) {
        if a.genus() == 1 && a.surface.boundaries == 1 {
            // τ_{a_1}, τ_{b_1} generate, and they preserve G
            return Ok(OrbitRelation::Separated {
                invariant: "G".into(),
                left: g_invariant(a.ring, a.a(1), a.b(1)),
                right: g_invariant(b.ring, b.a(1), b.b(1)),
            });
        }
    }
    Ok(OrbitRelation::Undetermined {
        reason: format!(
            "normal forms differ and no complete invariant is known for {} on {}",
            x.kind(),
            x.surface()
        ),
    })
}

/// Every boundary condition worth enumerating: all of `(Z/r)^B` for θ_r,
/// the valid ones for Pin.
pub fn all_deltas(kind: StructureKind, surface: &SurfaceSpec) -> Vec<Vec<i64>> {
    let b = surface.boundaries;
    let (radix, scale) = match kind {
        StructureKind::Theta { r } => (r, 1),
        StructureKind::Pin { sign: PinSign::Plus } => (2, 1),
        StructureKind::Pin { sign: PinSign::Minus } => (2, 2),
    };
    let total = radix.pow(b as u32);
    (0..total)
        .map(|mut i| {
            let mut d = vec![0i64; b];
            for k in (0..b).rev() {
                d[k] = (i % radix) as i64 * scale;
                i /= radix;
            }
            d
        })
        .filter(|d| match kind {
            StructureKind::Theta { .. } => true,
            StructureKind::Pin { sign } => PinStructure::delta_valid(sign, surface.genus, d),
        })
        .collect()
}

/// Boundary conditions on which the θ_r classification is claimed.
pub fn admissible_deltas(r: u64, surface: &SurfaceSpec) -> Vec<Vec<i64>> {
    all_deltas(StructureKind::Theta { r }, surface)
        .into_iter()
        .filter(|d| crate::rspin::ThetaStructure::delta_admissible(CoeffRing::new(r), d))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCase {
    #[serde(flatten)]
    pub kind: StructureKind,
    pub surface: SurfaceSpec,
    pub delta: Vec<i64>,
}

/// Result of checking normal forms against a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NormalFormCheck {
    pub checked: u64,
    /// Certificates that do not replay to their representative.
    pub replay_failures: u64,
    /// Representatives outside the orbit of their input.
    pub orbit_mismatches: u64,
    /// Orbits with more than one distinct representative.
    pub split_orbits: u64,
    pub bijective: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremRow {
    #[serde(flatten)]
    pub case: TheoremCase,
    pub size: u64,
    pub orbit_count: usize,
    pub orbit_sizes: Vec<u64>,
    pub invariants: Vec<Option<i64>>,
    pub predicted: Option<usize>,
    pub invariant_violations: u64,
    pub invariants_distinct: bool,
    pub normal_forms: Option<NormalFormCheck>,
    /// `None` when the parameters are outside the theorems' hypotheses.
    pub pass: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub rows: Vec<TheoremRow>,
    pub claimed: usize,
    pub passed: usize,
    pub failed: usize,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub budget: u128,
    pub check_normal_forms: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            budget: DEFAULT_BUDGET,
            check_normal_forms: true,
        }
    }
}

/// Normal form of every point, replayed and compared with the partition.
pub fn check_normal_forms(p: &OrbitPartition) -> NormalFormCheck {
    let size = p.space.size();
    let table = p.space.twist_table();
    let results: Vec<(u64, bool, bool)> = (0..size)
        .into_par_iter()
        .map(|i| {
            let s = p.space.structure(i);
            let nf = s
                .normal_form_with(&table)
                .expect("finite structures with genus >= 1 reduce");
            let replay_ok = s
                .apply_word_with(&nf.word, &table)
                .map(|t| t == nf.representative)
                .unwrap_or(false);
            let rep = p.space.encode(nf.representative.coords());
            let same = p.labels[rep as usize] == p.labels[i as usize];
            (rep, replay_ok, same)
        })
        .collect();
    let mut rep_of = vec![None; p.orbit_count()];
    let mut check = NormalFormCheck {
        checked: size,
        ..Default::default()
    };
    let mut split = BTreeSet::new();
    for (i, (rep, replay_ok, same)) in results.into_iter().enumerate() {
        check.replay_failures += u64::from(!replay_ok);
        check.orbit_mismatches += u64::from(!same);
        let label = p.labels[i] as usize;
        match rep_of[label] {
            None => rep_of[label] = Some(rep),
            Some(r) if r != rep => {
                split.insert(label);
            }
            _ => {}
        }
    }
    check.split_orbits = split.len() as u64;
    check.bijective = check.replay_failures == 0 && check.orbit_mismatches == 0 && check.split_orbits == 0;
    check
}

/// Enumerates each case and compares with the predicted orbit counts.
pub fn verify_theorems(cases: &[TheoremCase], opts: VerifyOptions) -> TheoremReport {
    let rows: Vec<TheoremRow> = cases.par_iter().map(|c| verify_case(c, opts)).collect();
    let claimed = rows.iter().filter(|r| r.pass.is_some()).count();
    let passed = rows.iter().filter(|r| r.pass == Some(true)).count();
    let failed = rows.iter().filter(|r| r.pass == Some(false)).count();
    TheoremReport {
        rows,
        claimed,
        passed,
        failed,
    }
}

fn verify_case(c: &TheoremCase, opts: VerifyOptions) -> TheoremRow {
    let predicted = c.kind.predicted_orbits(&c.surface, &c.delta);
    let mut row = TheoremRow {
        case: c.clone(),
        size: 0,
        orbit_count: 0,
        orbit_sizes: Vec::new(),
        invariants: Vec::new(),
        predicted,
        invariant_violations: 0,
        invariants_distinct: false,
        normal_forms: None,
        pass: None,
        error: None,
    };
    let p = match CoordinateSpace::new(c.kind, c.surface, c.delta.clone()).and_then(|s| partition(s, opts.budget)) {
        Ok(p) => p,
        Err(e) => {
            row.error = Some(e.to_string());
            row.pass = predicted.map(|_| false);
            return row;
        }
    };
    row.size = p.space.size();
    row.orbit_count = p.orbit_count();
    row.orbit_sizes = p.sizes.clone();
    row.invariants = p.invariants.clone();
    row.invariant_violations = p.invariant_violations;
    row.invariants_distinct = p.invariants_distinct();
    let nf_applies = match c.kind {
        StructureKind::Theta { .. } => c.surface.genus >= 1,
        StructureKind::Pin { .. } => true,
    };
    if opts.check_normal_forms && nf_applies {
        row.normal_forms = Some(check_normal_forms(&p));
    }
    row.pass = predicted.map(|n| {
        row.orbit_count == n
            && row.invariant_violations == 0
            && (!c.kind.has_invariant() || row.invariants_distinct)
            && row.normal_forms.is_none_or(|nf| nf.bijective)
    });
    row
}

/// θ_r cases over every combination, with all admissible boundary conditions.
pub fn theta_cases(rs: &[u64], genera: &[usize], boundaries: &[usize]) -> Vec<TheoremCase> {
    let mut out = Vec::new();
    for &r in rs {
        for &g in genera {
            for &b in boundaries {
                let surface = SurfaceSpec::orientable(g, b).expect("boundaries >= 1");
                for delta in admissible_deltas(r, &surface) {
                    out.push(TheoremCase {
                        kind: StructureKind::Theta { r },
                        surface,
                        delta,
                    });
                }
            }
        }
    }
    out
}

/// Pin⁺ and Pin⁻ cases over every combination, with all valid boundary conditions.
pub fn pin_cases(crosscaps: &[usize], boundaries: &[usize]) -> Vec<TheoremCase> {
    let mut out = Vec::new();
    for sign in [PinSign::Plus, PinSign::Minus] {
        for &n in crosscaps {
            for &b in boundaries {
                let surface = SurfaceSpec::non_orientable(n, b).expect("n, boundaries >= 1");
                let kind = StructureKind::Pin { sign };
                for delta in all_deltas(kind, &surface) {
                    out.push(TheoremCase { kind, surface, delta });
                }
            }
        }
    }
    out
}
