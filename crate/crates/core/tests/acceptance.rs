//! End-to-end reproduction of the classification and gluing results.
//!
//! Every check compares library output against an oracle written here:
//! invariants are recomputed from their defining formulas, gluing
//! predictions from the additivity laws, quadratic refinements by brute
//! force over bracketings, and the census by enumerating quadratic forms.
//! Prints one PASS/FAIL line per criterion and exits non-zero on failure.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spinorbit::gluing::{
    check_surjectivity_genus1, glue_pants, glue_pi0, pin_realizability, solve_diagonal, DiagonalSquare, Pants,
    StructuredCobordism,
};
use spinorbit::orbit::{partition, OrbitPartition, DEFAULT_BUDGET};
use spinorbit::surface::twist_generators;
use spinorbit::{
    CoeffRing, CoordinateSpace, CurveClass, Error, PinSign, PinStructure, Structure, StructureKind, SurfaceSpec,
    ThetaStructure, TwistWord,
};

const THETA_BOX_LIMIT: Duration = Duration::from_secs(60);
const PIN_BOX_LIMIT: Duration = Duration::from_secs(10);
const GLUING_LIMIT: Duration = Duration::from_secs(5);
const RANDOM_WORDS: usize = 10_000;
const RANDOM_SQUARES: usize = 1_000;

fn arf(genus: usize, coords: &[i64], delta: &[i64]) -> i64 {
    let handles: i64 = (0..genus).map(|i| coords[2 * i] * coords[2 * i + 1]).sum();
    let arcs: i64 = coords[2 * genus..].iter().zip(&delta[1..]).map(|(r, d)| r * d).sum();
    (handles + arcs).rem_euclid(2)
}

fn pin_a(sign: PinSign, n: usize, coords: &[i64], delta: &[i64]) -> i64 {
    match sign {
        PinSign::Plus => coords[..n].iter().sum::<i64>().rem_euclid(2),
        PinSign::Minus => {
            let ones = coords[..n].iter().filter(|&&a| a == 1).count() as i64;
            let arcs: i64 = coords[n..].iter().zip(&delta[1..]).map(|(&r, &d)| d * (r / 2)).sum();
            (ones - arcs).rem_euclid(4)
        }
    }
}

fn oracle_invariant(kind: StructureKind, s: &SurfaceSpec, coords: &[i64], delta: &[i64]) -> Option<i64> {
    match kind {
        StructureKind::Theta { r } if r % 2 == 0 => Some(arf(s.genus, coords, delta)),
        StructureKind::Theta { .. } => None,
        StructureKind::Pin { sign } => Some(pin_a(sign, s.genus, coords, delta)),
    }
}

/// Every `δ ∈ (Z/r)^B` with even sum when `r` is even.
fn theta_deltas(r: u64, boundaries: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..boundaries {
        out = out
            .into_iter()
            .flat_map(|d: Vec<i64>| {
                (0..r as i64).map(move |x| {
                    let mut e = d.clone();
                    e.push(x);
                    e
                })
            })
            .collect();
    }
    out.retain(|d| r % 2 == 1 || d.iter().sum::<i64>() % 2 == 0);
    out
}

/// Pin⁺: `δ_j ∈ {0,1}` with `Σ δ ≡ n (mod 2)`; Pin⁻: `δ_j ∈ {0,2}` with `Σ δ ≡ 0 (mod 4)`.
fn pin_deltas(sign: PinSign, n: usize, boundaries: usize) -> Vec<Vec<i64>> {
    let step = if sign == PinSign::Plus { 1 } else { 2 };
    (0..1u32 << boundaries)
        .map(|m| {
            (0..boundaries)
                .map(|j| step * i64::from(m >> j & 1))
                .collect::<Vec<i64>>()
        })
        .filter(|d| {
            let s: i64 = d.iter().sum();
            match sign {
                PinSign::Plus => (s - n as i64).rem_euclid(2) == 0,
                PinSign::Minus => s % 4 == 0,
            }
        })
        .collect()
}

struct Case {
    kind: StructureKind,
    surface: SurfaceSpec,
    delta: Vec<i64>,
    partition: OrbitPartition,
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

/// Orbit counts and invariant separation, timed over the enumeration only.
fn orbit_box(cases: &[Case], expected: impl Fn(&Case) -> usize, enumeration: Duration, limit: Duration) -> Outcome {
    let mut bad = Vec::new();
    for c in cases {
        let p = &c.partition;
        let invs: Vec<Option<i64>> = p
            .representatives
            .iter()
            .map(|&i| oracle_invariant(c.kind, &c.surface, &p.space.coords_of(i), &c.delta))
            .collect();
        let distinct = invs.iter().collect::<BTreeSet<_>>().len() == invs.len();
        let has_inv = invs.iter().all(Option::is_some);
        if p.orbit_count() != expected(c) || (has_inv && !distinct) {
            bad.push(format!(
                "{} {} δ={:?}: {} orbits",
                c.kind,
                c.surface,
                c.delta,
                p.orbit_count()
            ));
        }
    }
    let pass = bad.is_empty() && enumeration < limit;
    let detail = if bad.is_empty() {
        format!(
            "{} cases in {:.1} s (limit {} s)",
            cases.len(),
            enumeration.as_secs_f64(),
            limit.as_secs()
        )
    } else {
        bad.join("; ")
    };
    Outcome::new(pass, detail)
}

fn enumerate_cases(list: Vec<(StructureKind, SurfaceSpec, Vec<i64>)>) -> (Vec<Case>, Duration) {
    let start = Instant::now();
    let cases = list
        .into_iter()
        .map(|(kind, surface, delta)| {
            let space = CoordinateSpace::new(kind, surface, delta.clone()).expect("valid case");
            Case {
                kind,
                surface,
                delta,
                partition: partition(space, DEFAULT_BUDGET).expect("within budget"),
            }
        })
        .collect();
    (cases, start.elapsed())
}

/// Each compiled generator applied to every point, the invariant recomputed.
fn exhaustive_invariance(cases: &[Case]) -> (u64, u64) {
    let mut checked = 0;
    let mut violations = 0;
    for c in cases {
        let space = &c.partition.space;
        let gens = c.kind.generators(&c.surface, &c.delta);
        let mut x = vec![0; space.coordinate_len()];
        let mut y = x.clone();
        for i in 0..space.size() {
            space.decode(i, &mut x);
            let before = oracle_invariant(c.kind, &c.surface, &x, &c.delta);
            if before.is_none() {
                break;
            }
            for g in &gens {
                for e in [1, -1] {
                    y.copy_from_slice(&x);
                    g.apply(&mut y, e);
                    checked += 1;
                    violations += u64::from(oracle_invariant(c.kind, &c.surface, &y, &c.delta) != before);
                }
            }
        }
    }
    (checked, violations)
}

/// Random words in the catalog twists, applied through the uncompiled path.
fn random_word_invariance(rng: &mut ChaCha8Rng) -> (u64, u64) {
    let mut violations = 0;
    let mut done = 0;
    while done < RANDOM_WORDS {
        let genus = rng.gen_range(1..=5);
        let boundaries = rng.gen_range(1..=3);
        let (kind, surface, delta) = match rng.gen_range(0..5) {
            k @ 0..=2 => {
                let r = 2 * (k + 1);
                let s = SurfaceSpec::orientable(genus, boundaries).unwrap();
                let d = theta_deltas(r, boundaries).choose(rng).unwrap().clone();
                (StructureKind::Theta { r }, s, d)
            }
            k => {
                let sign = if k == 3 { PinSign::Plus } else { PinSign::Minus };
                let s = SurfaceSpec::non_orientable(genus, boundaries).unwrap();
                let d = pin_deltas(sign, genus, boundaries).choose(rng).unwrap().clone();
                (StructureKind::Pin { sign }, s, d)
            }
        };
        let gens = twist_generators(&surface);
        if gens.is_empty() {
            continue;
        }
        let coords: Vec<i64> = match kind {
            StructureKind::Theta { r } => (0..surface.coordinate_len())
                .map(|_| rng.gen_range(0..r as i64))
                .collect(),
            StructureKind::Pin { sign: PinSign::Plus } => {
                (0..surface.coordinate_len()).map(|_| rng.gen_range(0..2)).collect()
            }
            StructureKind::Pin { sign: PinSign::Minus } => (0..surface.coordinate_len())
                .map(|k| {
                    if k < genus {
                        1 + 2 * rng.gen_range(0..2)
                    } else {
                        2 * rng.gen_range(0..2)
                    }
                })
                .collect(),
        };
        let x = Structure::build(kind, surface, coords, delta.clone()).unwrap();
        let mut w = TwistWord::new();
        for _ in 0..rng.gen_range(1..=20) {
            w.push(*gens.choose(rng).unwrap(), *[-1i64, 1].choose(rng).unwrap());
        }
        let y = x.apply_word(&w).unwrap();
        let before = oracle_invariant(kind, &surface, x.coords(), &delta);
        let after = oracle_invariant(kind, &surface, y.coords(), &delta);
        violations += u64::from(before != after || y.invariant().unwrap() != after);
        done += 1;
    }
    (done as u64, violations)
}

fn invariance(theta: &[Case], pin: &[Case], rng: &mut ChaCha8Rng) -> Outcome {
    let (c1, v1) = exhaustive_invariance(theta);
    let (c2, v2) = exhaustive_invariance(pin);
    let (c3, v3) = random_word_invariance(rng);
    Outcome::new(
        v1 + v2 + v3 == 0 && c3 == RANDOM_WORDS as u64,
        format!(
            "{} twists exhaustively, {c3} random words; {} violations",
            c1 + c2,
            v1 + v2 + v3
        ),
    )
}

fn normal_forms(cases: &[&Case]) -> Outcome {
    let mut checked = 0u64;
    let mut failures = Vec::new();
    for c in cases {
        let p = &c.partition;
        let table = p.space.twist_table();
        let mut rep_of: BTreeMap<u32, Vec<i64>> = BTreeMap::new();
        let mut bad = 0u64;
        for i in 0..p.space.size() {
            let x = p.space.structure(i);
            let nf = x.normal_form_with(&table).unwrap();
            let replayed = x.apply_word_with(&nf.word, &table).unwrap();
            let rep = nf.representative.coords().to_vec();
            let label = p.labels[i as usize];
            bad += u64::from(replayed != nf.representative || p.label(&rep) != label);
            if rep_of.entry(label).or_insert_with(|| rep.clone()) != &rep {
                bad += 1;
            }
            checked += 1;
        }
        let distinct: BTreeSet<&Vec<i64>> = rep_of.values().collect();
        if bad > 0 || distinct.len() != p.orbit_count() {
            failures.push(format!("{} {} δ={:?}: {bad}", c.kind, c.surface, c.delta));
        }
    }
    Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{checked} certificates replayed, representatives biject with orbits")
        } else {
            failures.join("; ")
        },
    )
}

fn gluing_additivity() -> Outcome {
    let start = Instant::now();
    let mut checked = 0u64;
    let mut bad = 0u64;
    for r in [2u64, 4] {
        let ring = CoeffRing::new(r);
        for g in [1usize, 2] {
            for b in [1usize, 2] {
                let s = SurfaceSpec::orientable(g, b).unwrap();
                for delta in theta_deltas(r, b) {
                    let space = CoordinateSpace::new(StructureKind::Theta { r }, s, delta.clone()).unwrap();
                    for i in 0..space.size() {
                        let coords = space.coords_of(i);
                        let xi = ThetaStructure::new(ring, s, coords.clone(), delta.clone()).unwrap();
                        let left = StructuredCobordism::split(Structure::Theta(xi.clone()), 1).unwrap();
                        for pd in 0..(r * r) as i64 {
                            let pants_delta = [pd / r as i64, pd % r as i64, delta[0]];
                            if pants_delta.iter().sum::<i64>() % 2 != 0 {
                                continue;
                            }
                            for r1 in 0..r as i64 {
                                for r2 in 0..r as i64 {
                                    let pants = Pants {
                                        r1,
                                        r2,
                                        delta: pants_delta,
                                    };
                                    let glued = glue_pants(&xi, &pants, 0).unwrap();
                                    let mut want = coords[..2 * g].to_vec();
                                    want.extend(coords[2 * g..].iter().map(|&x| (x + r2 + 1).rem_euclid(r as i64)));
                                    want.push(r1);
                                    let predicted = (arf(g, &coords, &delta)
                                        + r1 * pants_delta[1]
                                        + r2 * pants_delta[2]
                                        + delta[0])
                                        .rem_euclid(2);
                                    let right =
                                        StructuredCobordism::split(Structure::Theta(pants.structure(ring).unwrap()), 2)
                                            .unwrap();
                                    let pi0 = glue_pi0(&left, &right, &[(0, 2)]).unwrap();
                                    checked += 1;
                                    bad += u64::from(
                                        glued.coords != want
                                            || arf(g, &glued.coords, &glued.delta) != predicted
                                            || pi0.invariant != predicted
                                            || pi0.surface != glued.surface,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        bad == 0 && elapsed < GLUING_LIMIT,
        format!(
            "{checked} pants gluings, {bad} mismatches, {:.2} s (limit {} s)",
            elapsed.as_secs_f64(),
            GLUING_LIMIT.as_secs()
        ),
    )
}

fn surjectivity() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for r in 1..=6u64 {
        let ring = CoeffRing::new(r);
        for b in [1usize, 2] {
            let all = |k: usize| -> Vec<Vec<i64>> {
                let mut out = vec![vec![]];
                for _ in 0..k {
                    out = out
                        .into_iter()
                        .flat_map(|d: Vec<i64>| {
                            (0..r as i64).map(move |x| {
                                let mut e = d.clone();
                                e.push(x);
                                e
                            })
                        })
                        .collect();
                }
                out
            };
            for delta in all(b) {
                for dt in all(b + 1) {
                    if delta[1..] != dt[1..b] {
                        continue;
                    }
                    checked += 1;
                    let rep = check_surjectivity_genus1(r, b, &delta, &dt, DEFAULT_BUDGET).unwrap();
                    let target = SurfaceSpec::orientable(1, b + 1).unwrap();
                    let p = partition(
                        CoordinateSpace::new(StructureKind::Theta { r }, target, dt.clone()).unwrap(),
                        DEFAULT_BUDGET,
                    )
                    .unwrap();
                    let mut hit = BTreeSet::new();
                    let mut witnesses_ok = true;
                    for w in &rep.witnesses {
                        let xi = ThetaStructure::new(
                            ring,
                            SurfaceSpec::orientable(1, b).unwrap(),
                            w.source.clone(),
                            delta.clone(),
                        )
                        .unwrap();
                        let pants = Pants {
                            r1: w.pants.0,
                            r2: w.pants.1,
                            delta: [dt[0], dt[b], delta[0]],
                        };
                        let glued = glue_pants(&xi, &pants, 0).unwrap();
                        witnesses_ok &= glued.coords == w.glued && p.label(&w.glued) == p.label(&w.target);
                        hit.insert(p.label(&w.glued));
                    }
                    if !(rep.surjective && witnesses_ok && hit.len() == p.orbit_count()) {
                        bad.push(format!("r={r} δ={delta:?} δ′={dt:?}"));
                    }
                }
            }
        }
    }
    Outcome::new(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{checked} boundary-condition pairs, every target orbit witnessed")
        } else {
            bad.join("; ")
        },
    )
}

fn diagonals(rng: &mut ChaCha8Rng) -> Outcome {
    let mut bad = 0;
    for _ in 0..RANDOM_SQUARES {
        // Additivity: θ and Pin⁻ add the boundary value, Pin⁺ does not.
        let (kind, m, weight, ds): (StructureKind, i64, i64, &[i64]) = match rng.gen_range(0..3) {
            0 => (
                StructureKind::Theta {
                    r: 2 * rng.gen_range(1..=3),
                },
                2,
                1,
                &[0, 1, 2, 3],
            ),
            1 => (StructureKind::Pin { sign: PinSign::Plus }, 2, 0, &[0, 1]),
            _ => (StructureKind::Pin { sign: PinSign::Minus }, 4, 1, &[0, 2]),
        };
        let glue = |x: i64, y: i64, d: i64| (x + y + weight * d).rem_euclid(m);
        let (t, l, b) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
        let (delta_b, delta_d) = (*ds.choose(rng).unwrap(), *ds.choose(rng).unwrap());
        // L ∘ T ≅ B ∘ Rt
        let rt = (glue(l, t, delta_d) - b - weight * delta_b).rem_euclid(m);
        let sq = DiagonalSquare {
            kind,
            t,
            l,
            b,
            rt,
            delta_b,
            delta_d,
        };
        match solve_diagonal(&sq) {
            Ok(sol) => {
                let d = sol.delta_invariant;
                bad += u32::from(glue(d, t, delta_d) != rt || glue(d, b, delta_b) != l);
            }
            Err(_) => bad += 1,
        }
        let off = DiagonalSquare {
            rt: (rt + rng.gen_range(1..m)).rem_euclid(m),
            ..sq
        };
        bad += u32::from(!matches!(solve_diagonal(&off), Err(Error::IncompatibleSquare(_))));
    }

    let mut realizability = Vec::new();
    let mut expected_pattern = true;
    for (sign, n) in [
        (PinSign::Plus, 2),
        (PinSign::Plus, 3),
        (PinSign::Minus, 2),
        (PinSign::Minus, 3),
    ] {
        let s = SurfaceSpec::non_orientable(n, 2).unwrap();
        let rows = pin_realizability(sign, n).unwrap();
        let mut every = true;
        for delta in pin_deltas(sign, n, 2) {
            let space = CoordinateSpace::new(StructureKind::Pin { sign }, s, delta.clone()).unwrap();
            let seen: BTreeSet<i64> = (0..space.size())
                .map(|i| pin_a(sign, n, &space.coords_of(i), &delta))
                .collect();
            let row = rows.iter().find(|r| r.delta == delta);
            if row.map(|r| r.realized.iter().copied().collect::<BTreeSet<_>>()) != Some(seen.clone()) {
                expected_pattern = false;
            }
            every &= seen.len() as i64 == sign.invariant_modulus();
        }
        let want_every = !(sign == PinSign::Minus && n == 2);
        expected_pattern &= every == want_every;
        realizability.push(format!(
            "{sign} S_({n},1+1): {}",
            if every { "all A" } else { "not all A" }
        ));
    }
    Outcome::new(
        bad == 0 && expected_pattern,
        format!("{RANDOM_SQUARES} squares, {bad} failures; {}", realizability.join(", ")),
    )
}

/// Values of `q` over every bracketing and every order of the given
/// distinct atoms, by recursion over subsets.
fn subset_values(
    mask: usize,
    atoms: &[(i64, Vec<i64>)],
    pair: &dyn Fn(&[i64], &[i64]) -> i64,
    m: i64,
    memo: &mut BTreeMap<usize, BTreeSet<i64>>,
) -> BTreeSet<i64> {
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let mut out = BTreeSet::new();
    if mask.count_ones() == 1 {
        out.insert(atoms[mask.trailing_zeros() as usize].0.rem_euclid(m));
    } else {
        let class = |sub: usize| -> Vec<i64> {
            let dim = atoms[0].1.len();
            let mut v = vec![0; dim];
            for (k, (_, c)) in atoms.iter().enumerate() {
                if sub >> k & 1 == 1 {
                    for d in 0..dim {
                        v[d] += c[d];
                    }
                }
            }
            v
        };
        let mut sub = (mask - 1) & mask;
        while sub > 0 {
            let rest = mask ^ sub;
            let cross = pair(&class(sub), &class(rest));
            for u in subset_values(sub, atoms, pair, m, memo) {
                for v in subset_values(rest, atoms, pair, m, memo) {
                    out.insert((u + v + cross).rem_euclid(m));
                }
            }
            sub = (sub - 1) & mask;
        }
    }
    memo.insert(mask, out.clone());
    out
}

/// Values over every bracketing of a fixed sequence, by recursion over intervals.
fn interval_values(atoms: &[(i64, Vec<i64>)], pair: &dyn Fn(&[i64], &[i64]) -> i64, m: i64) -> BTreeSet<i64> {
    let k = atoms.len();
    if k == 0 {
        return BTreeSet::from([0]);
    }
    let dim = atoms[0].1.len();
    let sum = |i: usize, j: usize| -> Vec<i64> { (0..dim).map(|d| atoms[i..j].iter().map(|a| a.1[d]).sum()).collect() };
    let mut table: Vec<Vec<BTreeSet<i64>>> = vec![vec![BTreeSet::new(); k + 1]; k + 1];
    for i in 0..k {
        table[i][i + 1].insert(atoms[i].0.rem_euclid(m));
    }
    for len in 2..=k {
        for i in 0..=k - len {
            let j = i + len;
            let mut out = BTreeSet::new();
            for s in i + 1..j {
                let cross = pair(&sum(i, s), &sum(s, j));
                for u in &table[i][s] {
                    for v in &table[s][j] {
                        out.insert((u + v + cross).rem_euclid(m));
                    }
                }
            }
            table[i][j] = out;
        }
    }
    table[0][k].clone()
}

fn quadratic_oracle(rng: &mut ChaCha8Rng) -> Outcome {
    let mut checked = 0u64;
    let mut bad = 0u64;
    // θ_2: each class with 0/1 coefficients is a set of distinct basis curves.
    for g in 0..=3usize {
        for nb in 1..=(7 - 2 * g) {
            let s = SurfaceSpec::orientable(g, nb).unwrap();
            let dim = 2 * g + nb;
            let pair = move |u: &[i64], v: &[i64]| -> i64 {
                (0..g).map(|i| u[2 * i] * v[2 * i + 1] + u[2 * i + 1] * v[2 * i]).sum()
            };
            for delta in theta_deltas(2, nb) {
                let len = s.coordinate_len();
                let picks: Vec<u64> = if len <= 3 {
                    (0..1u64 << len).collect()
                } else {
                    (0..8).map(|_| rng.gen_range(0..1u64 << len)).collect()
                };
                for pick in picks {
                    let coords: Vec<i64> = (0..len).map(|k| (pick >> k & 1) as i64).collect();
                    let xi = ThetaStructure::new(CoeffRing::new(2), s, coords.clone(), delta.clone()).unwrap();
                    let basis_q: Vec<i64> = coords[..2 * g].iter().copied().chain(delta.iter().copied()).collect();
                    for mask in 0usize..1 << dim {
                        let atoms: Vec<(i64, Vec<i64>)> = (0..dim)
                            .filter(|&k| mask >> k & 1 == 1)
                            .map(|k| {
                                let mut v = vec![0; dim];
                                v[k] = 1;
                                (basis_q[k], v)
                            })
                            .collect();
                        let values = if atoms.is_empty() {
                            BTreeSet::from([0])
                        } else {
                            subset_values((1 << atoms.len()) - 1, &atoms, &pair, 2, &mut BTreeMap::new())
                        };
                        let bit = |k: usize| (mask >> k & 1) as i64;
                        let class = CurveClass::orientable(
                            (0..g).map(|i| bit(2 * i)).collect(),
                            (0..g).map(|i| bit(2 * i + 1)).collect(),
                            (0..nb).map(|j| bit(2 * g + j)).collect(),
                        );
                        let lifted = CurveClass::orientable(
                            class.x.iter().map(|x| x + 2 * rng.gen_range(-2..=2)).collect(),
                            class.y.iter().map(|y| y + 2 * rng.gen_range(-2..=2)).collect(),
                            class.lambda.iter().map(|l| l + 2 * rng.gen_range(-2..=2)).collect(),
                        );
                        let q = xi.q_eval(&class).unwrap();
                        checked += 1;
                        bad += u64::from(values != BTreeSet::from([q]) || xi.q_eval(&lifted).unwrap() != q);
                    }
                }
            }
        }
    }
    // Pin±: crosscap coefficients with repetition, every bracketing in two orders.
    for sign in [PinSign::Plus, PinSign::Minus] {
        let (m, period, weight) = if sign == PinSign::Plus { (2, 4, 1) } else { (4, 2, 2) };
        for n in 1..=6usize {
            for nb in 1..=(7 - n) {
                let s = SurfaceSpec::non_orientable(n, nb).unwrap();
                let dim = n + nb;
                let pair = move |u: &[i64], v: &[i64]| -> i64 { weight * (0..n).map(|i| u[i] * v[i]).sum::<i64>() };
                for delta in pin_deltas(sign, n, nb) {
                    let space = CoordinateSpace::new(StructureKind::Pin { sign }, s, delta.clone()).unwrap();
                    let coords = space.coords_of(rng.gen_range(0..space.size()));
                    let xi = PinStructure::new(sign, s, coords.clone(), delta.clone()).unwrap();
                    let radix: Vec<i64> = (0..dim).map(|d| if d < n { period } else { 2 }).collect();
                    let total: i64 = radix.iter().product();
                    for mut index in 0..total {
                        let mut coeff = vec![0i64; dim];
                        for d in 0..dim {
                            coeff[d] = index % radix[d];
                            index /= radix[d];
                        }
                        let mut atoms = Vec::new();
                        for (d, &c) in coeff.iter().enumerate() {
                            let q = if d < n { coords[d] } else { delta[d - n] };
                            let mut v = vec![0; dim];
                            v[d] = 1;
                            for _ in 0..c {
                                atoms.push((q, v.clone()));
                            }
                        }
                        let mut values = interval_values(&atoms, &pair, m);
                        atoms.reverse();
                        values.extend(interval_values(&atoms, &pair, m));
                        let class = CurveClass::non_orientable(coeff[..n].to_vec(), coeff[n..].to_vec());
                        let lifted = CurveClass::non_orientable(
                            coeff[..n].iter().map(|k| k + period * rng.gen_range(-1..=1)).collect(),
                            coeff[n..].iter().map(|l| l + 2 * rng.gen_range(-1..=1)).collect(),
                        );
                        let q = xi.q_eval(&class).unwrap();
                        checked += 1;
                        bad += u64::from(values != BTreeSet::from([q]) || xi.q_eval(&lifted).unwrap() != q);
                    }
                }
            }
        }
    }
    Outcome::new(bad == 0, format!("{checked} classes, {bad} disagreements"))
}

/// Counts quadratic refinements of the symplectic form on `(Z/2)^{2g}` by
/// Arf value, the Arf value being the value `q` takes most often.
fn census(g: usize) -> (u64, u64) {
    let n = 2 * g;
    let dot = |x: u32, y: u32| -> u32 {
        (0..g)
            .map(|i| ((x >> (2 * i) & 1) * (y >> (2 * i + 1) & 1)) ^ ((x >> (2 * i + 1) & 1) * (y >> (2 * i) & 1)))
            .fold(0, |a, b| a ^ b)
    };
    let mut counts = (0, 0);
    for values in 0u32..1 << n {
        let q = |x: u32| -> u32 {
            let linear = (x & values).count_ones() & 1;
            let quadratic = (0..g)
                .map(|i| (x >> (2 * i) & 1) & (x >> (2 * i + 1) & 1))
                .fold(0, |a, b| a ^ b);
            linear ^ quadratic
        };
        for x in 0..1u32 << n {
            for y in 0..1u32 << n {
                assert_eq!(q(x ^ y), q(x) ^ q(y) ^ dot(x, y), "not a quadratic refinement");
            }
        }
        let ones = (0..1u32 << n).filter(|&x| q(x) == 1).count();
        if 2 * ones > 1 << n {
            counts.1 += 1;
        } else {
            counts.0 += 1;
        }
    }
    counts
}

fn classical_census() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for g in [2usize, 3] {
        let (even, odd) = census(g);
        let closed = (
            (1u64 << (2 * g - 1)) + (1 << (g - 1)),
            (1u64 << (2 * g - 1)) - (1 << (g - 1)),
        );
        let s = SurfaceSpec::orientable(g, 1).unwrap();
        let p = partition(
            CoordinateSpace::new(StructureKind::Theta { r: 2 }, s, vec![0]).unwrap(),
            DEFAULT_BUDGET,
        )
        .unwrap();
        let mut by_arf = BTreeMap::new();
        for (&rep, &size) in p.representatives.iter().zip(&p.sizes) {
            *by_arf.entry(arf(g, &p.space.coords_of(rep), &[0])).or_insert(0u64) += size;
        }
        let bfs = (
            by_arf.get(&0).copied().unwrap_or(0),
            by_arf.get(&1).copied().unwrap_or(0),
        );
        ok &= p.orbit_count() == 2 && bfs == (even, odd) && (even, odd) == closed;
        detail.push(format!("g={g}: census {even}/{odd}, orbits {}/{}", bfs.0, bfs.1));
    }
    Outcome::new(ok, detail.join("; "))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(20_26_10_15);
    let mut results: Vec<(u8, &str, Outcome)> = Vec::new();

    let mut theta_list = Vec::new();
    for r in 1..=6u64 {
        for g in [2usize, 3] {
            for b in [1usize, 2] {
                for d in theta_deltas(r, b) {
                    theta_list.push((StructureKind::Theta { r }, SurfaceSpec::orientable(g, b).unwrap(), d));
                }
            }
        }
    }
    let mut pin_list = Vec::new();
    for sign in [PinSign::Plus, PinSign::Minus] {
        for n in [3usize, 4, 5] {
            for b in [1usize, 2] {
                for d in pin_deltas(sign, n, b) {
                    pin_list.push((
                        StructureKind::Pin { sign },
                        SurfaceSpec::non_orientable(n, b).unwrap(),
                        d,
                    ));
                }
            }
        }
    }
    let (theta, theta_time) = enumerate_cases(theta_list);
    let (pin, pin_time) = enumerate_cases(pin_list);

    results.push((
        1,
        "theta_r orbit counts",
        orbit_box(
            &theta,
            |c| match c.kind {
                StructureKind::Theta { r } if r % 2 == 1 => 1,
                _ => 2,
            },
            theta_time,
            THETA_BOX_LIMIT,
        ),
    ));
    results.push((
        2,
        "Pin orbit counts",
        orbit_box(
            &pin,
            |c| match c.kind {
                StructureKind::Pin { sign: PinSign::Plus } => 2,
                _ => 4,
            },
            pin_time,
            PIN_BOX_LIMIT,
        ),
    ));
    results.push((3, "invariance suites", invariance(&theta, &pin, &mut rng)));
    let all: Vec<&Case> = theta.iter().chain(&pin).collect();
    results.push((4, "normal-form soundness", normal_forms(&all)));
    results.push((5, "gluing additivity", gluing_additivity()));
    results.push((6, "genus-1 surjectivity", surjectivity()));
    results.push((7, "diagonal solvability", diagonals(&mut rng)));
    results.push((8, "quadratic-refinement oracle", quadratic_oracle(&mut rng)));
    results.push((9, "classical Arf census", classical_census()));

    let mut failed = 0;
    for (id, name, outcome) in &results {
        println!(
            "{} criterion {id} ({name}): {}",
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail
        );
        failed += usize::from(!outcome.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
