//! The reproduction matrix: orbit counts, invariance, normal forms, gluing,
//! surjectivity, diagonals, quadratic refinements and the classical census,
//! each reduced to a pass/fail line.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::{
    check_surjectivity_genus1, glue_pants, glue_pi0, glued_invariant, pin_realizability, solve_diagonal,
    DiagonalSquare, Pants, StructuredCobordism,
};
use crate::orbit::{
    admissible_deltas, all_deltas, partition, pin_cases, theta_cases, verify_theorems, TheoremReport, VerifyOptions,
    DEFAULT_BUDGET,
};
use crate::pin::{PinSign, PinStructure};
use crate::ring::CoeffRing;
use crate::rspin::ThetaStructure;
use crate::structure::{CoordinateSpace, Structure, StructureKind};
use crate::surface::{twist_generators, CurveClass, SurfaceSpec};
use crate::word::TwistWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub budget: u128,
    pub random_words: usize,
    pub random_squares: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            budget: DEFAULT_BUDGET,
            random_words: 10_000,
            random_squares: 1_000,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub pass: bool,
    pub checked: u64,
    pub failures: u64,
    pub detail: String,
    pub wall_time_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub criteria: Vec<CriterionResult>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        for c in &self.criteria {
            out.push_str(&format!(
                "{} {:>2}  {:<28} checked={:<9} failures={:<4} {:>7} ms  {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.name,
                c.checked,
                c.failures,
                c.wall_time_ms,
                c.detail
            ));
        }
        out
    }
}

struct Timer(Instant);

impl Timer {
    fn start() -> Self {
        Timer(Instant::now())
    }

    fn finish(self, id: u8, name: &str, checked: u64, failures: u64, detail: String) -> CriterionResult {
        CriterionResult {
            id,
            name: name.into(),
            pass: failures == 0 && checked > 0,
            checked,
            failures,
            detail,
            wall_time_ms: self.0.elapsed().as_millis(),
        }
    }
}

/// Runs every criterion in order.
pub fn run(opts: &SuiteOptions) -> SuiteReport {
    let mut criteria = Vec::new();
    let timer = Timer::start();
    let theta = verify_theorems(
        &theta_cases(&[1, 2, 3, 4, 5, 6], &[2, 3], &[1, 2]),
        VerifyOptions {
            budget: opts.budget,
            check_normal_forms: true,
        },
    );
    let pin = verify_theorems(
        &pin_cases(&[3, 4, 5], &[1, 2]),
        VerifyOptions {
            budget: opts.budget,
            check_normal_forms: true,
        },
    );
    let shared_ms = timer.0.elapsed().as_millis();
    criteria.push(orbit_counts(1, "theta orbit counts", &theta, shared_ms));
    criteria.push(orbit_counts(2, "pin orbit counts", &pin, shared_ms));
    criteria.push(invariance(&theta, &pin, opts));
    criteria.push(normal_forms(&theta, &pin, shared_ms));
    criteria.push(gluing_additivity(opts.budget));
    criteria.push(genus_one_surjectivity(opts.budget));
    criteria.push(diagonals(opts));
    criteria.push(quadratic_refinements(opts.seed));
    criteria.push(census(opts.budget));
    let pass = criteria.iter().all(|c| c.pass);
    SuiteReport { criteria, pass }
}

fn orbit_counts(id: u8, name: &str, report: &TheoremReport, elapsed_ms: u128) -> CriterionResult {
    let failures = report
        .rows
        .iter()
        .filter(|r| {
            r.pass != Some(true)
                || r.invariant_violations != 0
                || (r.case.kind.has_invariant() && !r.invariants_distinct)
                || r.orbit_count != r.predicted.unwrap_or(usize::MAX)
        })
        .count() as u64;
    CriterionResult {
        id,
        name: name.into(),
        pass: failures == 0 && !report.rows.is_empty(),
        checked: report.rows.len() as u64,
        failures,
        detail: format!("{} cases, {} passed", report.rows.len(), report.passed),
        wall_time_ms: elapsed_ms,
    }
}

fn invariance(theta: &TheoremReport, pin: &TheoremReport, opts: &SuiteOptions) -> CriterionResult {
    let timer = Timer::start();
    let exhaustive: u64 = theta
        .rows
        .iter()
        .chain(&pin.rows)
        .filter(|r| r.case.kind.has_invariant())
        .map(|r| r.invariant_violations)
        .sum();
    let points: u64 = theta.rows.iter().chain(&pin.rows).map(|r| r.size).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut random_failures = 0u64;
    for _ in 0..opts.random_words {
        let ok = random_word_preserves_invariant(&mut rng).unwrap_or(false);
        random_failures += u64::from(!ok);
    }
    timer.finish(
        3,
        "invariance under twists",
        points + opts.random_words as u64,
        exhaustive + random_failures,
        format!("{exhaustive} exhaustive and {random_failures} random-word violations"),
    )
}

/// A random even-r θ or Pin structure with genus at most 5, twisted by a random word.
fn random_word_preserves_invariant(rng: &mut ChaCha8Rng) -> Result<bool> {
    let kinds = [
        StructureKind::Theta { r: 2 },
        StructureKind::Theta { r: 4 },
        StructureKind::Theta { r: 6 },
        StructureKind::Pin { sign: PinSign::Plus },
        StructureKind::Pin { sign: PinSign::Minus },
    ];
    loop {
        let kind = *kinds.choose(rng).expect("non-empty");
        let genus = rng.gen_range(1..=5);
        let boundaries = rng.gen_range(1..=3);
        let surface = match kind {
            StructureKind::Theta { .. } => SurfaceSpec::orientable(genus, boundaries)?,
            StructureKind::Pin { .. } => SurfaceSpec::non_orientable(genus, boundaries)?,
        };
        let gens = twist_generators(&surface);
        if gens.is_empty() {
            continue;
        }
        let deltas: Vec<Vec<i64>> = match kind {
            StructureKind::Theta { r } => admissible_deltas(r, &surface),
            StructureKind::Pin { .. } => all_deltas(kind, &surface),
        };
        let delta = deltas.choose(rng).expect("some boundary condition is valid").clone();
        let space = CoordinateSpace::new(kind, surface, delta)?;
        let x = space.structure(rng.gen_range(0..space.size()));
        let mut w = TwistWord::new();
        for _ in 0..rng.gen_range(1..=16) {
            let e = *[-2, -1, 1, 2].choose(rng).expect("non-empty");
            w.push(*gens.choose(rng).expect("non-empty"), e);
        }
        let y = x.apply_word(&w)?;
        return Ok(x.invariant()? == y.invariant()?);
    }
}

fn normal_forms(theta: &TheoremReport, pin: &TheoremReport, elapsed_ms: u128) -> CriterionResult {
    let mut checked = 0;
    let mut failures = 0;
    let mut replay = 0;
    for row in theta.rows.iter().chain(&pin.rows) {
        match row.normal_forms {
            Some(nf) => {
                checked += nf.checked;
                replay += nf.replay_failures;
                failures += nf.replay_failures + nf.orbit_mismatches + nf.split_orbits;
            }
            None => failures += 1,
        }
    }
    CriterionResult {
        id: 4,
        name: "normal form soundness".into(),
        pass: failures == 0 && checked > 0,
        checked,
        failures,
        detail: format!("{replay} certificates failed to replay"),
        wall_time_ms: elapsed_ms,
    }
}

fn gluing_additivity(budget: u128) -> CriterionResult {
    let timer = Timer::start();
    let mut checked = 0u64;
    let mut failures = 0u64;
    let result: Result<()> = (|| {
        for r in [2u64, 4] {
            let ring = CoeffRing::new(r);
            let kind = StructureKind::Theta { r };
            for g in [1, 2] {
                for b in [1, 2] {
                    let surface = SurfaceSpec::orientable(g, b)?;
                    for delta in admissible_deltas(r, &surface) {
                        let space = CoordinateSpace::new(kind, surface, delta.clone())?;
                        if space.size() as u128 > budget {
                            return Err(Error::BudgetExceeded {
                                needed: space.size() as u128,
                                budget,
                            });
                        }
                        for i in 0..space.size() {
                            let xi = ThetaStructure::new(ring, surface, space.coords_of(i), delta.clone())?;
                            let left = StructuredCobordism::split(Structure::Theta(xi.clone()), 1)?;
                            for d0 in 0..r as i64 {
                                for d1 in 0..r as i64 {
                                    if (d0 + d1 + delta[0]) % 2 != 0 {
                                        continue;
                                    }
                                    for r1 in 0..r as i64 {
                                        for r2 in 0..r as i64 {
                                            let pants = Pants {
                                                r1,
                                                r2,
                                                delta: [d0, d1, delta[0]],
                                            };
                                            let glued = glue_pants(&xi, &pants, 0)?;
                                            let right = StructuredCobordism::split(
                                                Structure::Theta(pants.structure(ring)?),
                                                2,
                                            )?;
                                            let predicted = glue_pi0(&left, &right, &[(0, 2)])?;
                                            checked += 1;
                                            if predicted.invariant != glued.arf()? || predicted.surface != glued.surface
                                            {
                                                failures += 1;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    let detail = match result {
        Ok(()) => format!("{checked} pants gluings"),
        Err(e) => {
            failures += 1;
            e.to_string()
        }
    };
    timer.finish(5, "gluing additivity", checked, failures, detail)
}

fn genus_one_surjectivity(budget: u128) -> CriterionResult {
    let timer = Timer::start();
    let mut checked = 0u64;
    let mut failures = 0u64;
    let mut first_failure = None;
    for r in 1..=6u64 {
        let kind = StructureKind::Theta { r };
        for b in [1usize, 2] {
            let source = SurfaceSpec::orientable(1, b).expect("valid");
            let target = SurfaceSpec::orientable(1, b + 1).expect("valid");
            for delta in all_deltas(kind, &source) {
                for delta_target in all_deltas(kind, &target) {
                    if delta[1..] != delta_target[1..b] {
                        continue;
                    }
                    checked += 1;
                    match check_surjectivity_genus1(r, b, &delta, &delta_target, budget) {
                        Ok(rep) if rep.surjective => {}
                        Ok(_) | Err(_) => {
                            failures += 1;
                            first_failure.get_or_insert(format!("r={r} δ={delta:?} δ′={delta_target:?}"));
                        }
                    }
                }
            }
        }
    }
    let detail = first_failure.unwrap_or_else(|| format!("{checked} boundary-condition pairs surjective"));
    timer.finish(6, "genus-one surjectivity", checked, failures, detail)
}

fn diagonals(opts: &SuiteOptions) -> CriterionResult {
    let timer = Timer::start();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xd1a9);
    let mut checked = 0u64;
    let mut failures = 0u64;
    for _ in 0..opts.random_squares {
        let sq = random_square(&mut rng);
        checked += 1;
        let ok = match solve_diagonal(&sq) {
            Ok(s) => {
                glued_invariant(sq.kind, s.delta_invariant, sq.t, sq.delta_d) == glued_invariant(sq.kind, sq.rt, 0, 0)
                    && glued_invariant(sq.kind, s.delta_invariant, sq.b, sq.delta_b)
                        == glued_invariant(sq.kind, sq.l, 0, 0)
            }
            Err(_) => false,
        };
        failures += u64::from(!ok);
        let broken = DiagonalSquare { rt: sq.rt + 1, ..sq };
        checked += 1;
        failures += u64::from(!matches!(solve_diagonal(&broken), Err(Error::IncompatibleSquare(_))));
    }

    let mut realizable = Vec::new();
    for (sign, n, expect_all) in [
        (PinSign::Plus, 2, true),
        (PinSign::Plus, 3, true),
        (PinSign::Minus, 2, false),
        (PinSign::Minus, 3, true),
    ] {
        checked += 1;
        match pin_realizability(sign, n) {
            Ok(rows) => {
                let all = rows.iter().all(|r| r.all_values);
                failures += u64::from(all != expect_all);
                realizable.push(format!("{sign} n={n}: {}", if all { "all" } else { "partial" }));
            }
            Err(_) => failures += 1,
        }
    }
    timer.finish(7, "diagonal solvability", checked, failures, realizable.join(", "))
}

/// A compatible square: three invariants at random, the fourth forced.
pub fn random_square(rng: &mut impl Rng) -> DiagonalSquare {
    let (kind, m, ds): (StructureKind, i64, &[i64]) = match rng.gen_range(0..4) {
        0 => (StructureKind::Theta { r: 2 }, 2, &[0, 1]),
        1 => (StructureKind::Theta { r: 4 }, 2, &[0, 1, 2, 3]),
        2 => (StructureKind::Pin { sign: PinSign::Plus }, 2, &[0, 1]),
        _ => (StructureKind::Pin { sign: PinSign::Minus }, 4, &[0, 2]),
    };
    let mut sq = DiagonalSquare {
        kind,
        t: rng.gen_range(0..m),
        l: rng.gen_range(0..m),
        b: rng.gen_range(0..m),
        rt: 0,
        delta_b: *ds.choose(rng).expect("non-empty"),
        delta_d: *ds.choose(rng).expect("non-empty"),
    };
    let defect = sq.defect();
    sq.rt = (sq.rt - defect).rem_euclid(m);
    sq
}

fn quadratic_refinements(seed: u64) -> CriterionResult {
    let timer = Timer::start();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9a);
    let mut checked = 0u64;
    let mut failures = 0u64;
    let result: Result<()> = (|| {
        for g in 0..=3usize {
            for b in 1..=(7 - 2 * g) {
                let surface = SurfaceSpec::orientable(g, b)?;
                let kind = StructureKind::Theta { r: 2 };
                for delta in admissible_deltas(2, &surface) {
                    let space = CoordinateSpace::new(kind, surface, delta.clone())?;
                    for idx in sample_indices(space.size(), 8, &mut rng) {
                        let xi = ThetaStructure::new(CoeffRing::new(2), surface, space.coords_of(idx), delta.clone())?;
                        let (c, f) = theta_bracket_check(&xi, &mut rng)?;
                        checked += c;
                        failures += f;
                    }
                }
            }
        }
        for sign in [PinSign::Plus, PinSign::Minus] {
            let kind = StructureKind::Pin { sign };
            for n in 1..=6usize {
                for b in 1..=(7 - n) {
                    let surface = SurfaceSpec::non_orientable(n, b)?;
                    for delta in all_deltas(kind, &surface) {
                        let space = CoordinateSpace::new(kind, surface, delta.clone())?;
                        for idx in sample_indices(space.size(), 2, &mut rng) {
                            let xi = PinStructure::new(sign, surface, space.coords_of(idx), delta.clone())?;
                            let (c, f) = pin_bracket_check(&xi, &mut rng)?;
                            checked += c;
                            failures += f;
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    let detail = match result {
        Ok(()) => "every bracketing agrees".to_string(),
        Err(e) => {
            failures += 1;
            e.to_string()
        }
    };
    timer.finish(8, "quadratic refinement oracle", checked, failures, detail)
}

fn sample_indices(size: u64, k: usize, rng: &mut impl Rng) -> Vec<u64> {
    if size <= k as u64 {
        (0..size).collect()
    } else {
        (0..k).map(|_| rng.gen_range(0..size)).collect()
    }
}

/// A class written as a sequence of basis curves, each with its q-value.
struct Atom {
    q: i64,
    basis: usize,
    sign: i64,
}

/// All values of iterated `q(x + y) = q(x) + q(y) + pair(x, y)` over every
/// bracketing of `atoms`, as a bitmask over `Z/m`.
fn bracket_values(atoms: &[Atom], dim: usize, m: i64, pair: &dyn Fn(&[i64], &[i64]) -> i64) -> u64 {
    let k = atoms.len();
    if k == 0 {
        return 1;
    }
    let mut prefix = vec![vec![0i64; dim]; k + 1];
    for (i, a) in atoms.iter().enumerate() {
        prefix[i + 1] = prefix[i].clone();
        prefix[i + 1][a.basis] += a.sign;
    }
    let (mut left, mut right) = (vec![0i64; dim], vec![0i64; dim]);
    let mut vals = vec![vec![0u64; k + 1]; k + 1];
    for (i, a) in atoms.iter().enumerate() {
        vals[i][i + 1] = 1 << a.q.rem_euclid(m);
    }
    for len in 2..=k {
        for i in 0..=k - len {
            let j = i + len;
            let mut acc = 0u64;
            for s in i + 1..j {
                for d in 0..dim {
                    left[d] = prefix[s][d] - prefix[i][d];
                    right[d] = prefix[j][d] - prefix[s][d];
                }
                let cross = pair(&left, &right);
                for u in 0..m {
                    if vals[i][s] >> u & 1 == 0 {
                        continue;
                    }
                    for v in 0..m {
                        if vals[s][j] >> v & 1 == 1 {
                            acc |= 1 << (u + v + cross).rem_euclid(m);
                        }
                    }
                }
            }
            vals[i][j] = acc;
        }
    }
    vals[0][k]
}

fn check_orders(
    atoms: &mut [Atom],
    dim: usize,
    m: i64,
    want: i64,
    pair: &dyn Fn(&[i64], &[i64]) -> i64,
    rng: &mut impl Rng,
) -> bool {
    let mut ok = bracket_values(atoms, dim, m, pair) == 1 << want;
    atoms.reverse();
    ok &= bracket_values(atoms, dim, m, pair) == 1 << want;
    atoms.shuffle(rng);
    ok &= bracket_values(atoms, dim, m, pair) == 1 << want;
    ok
}

/// Every class with coefficients in `{0, 1}`, lifted by random multiples of 2.
fn theta_bracket_check(xi: &ThetaStructure, rng: &mut impl Rng) -> Result<(u64, u64)> {
    let g = xi.genus();
    let nb = xi.surface.boundaries;
    let dim = 2 * g + nb;
    let pair = move |u: &[i64], v: &[i64]| -> i64 { (0..g).map(|i| u[i] * v[g + i] - u[g + i] * v[i]).sum() };
    let mut checked = 0;
    let mut failures = 0;
    for mask in 0u64..1 << dim {
        let coeffs: Vec<i64> = (0..dim)
            .map(|d| (mask >> d & 1) as i64 + 2 * rng.gen_range(-1..=1))
            .collect();
        let class = CurveClass::orientable(
            coeffs[..g].to_vec(),
            coeffs[g..2 * g].to_vec(),
            coeffs[2 * g..].to_vec(),
        );
        let want = xi.q_eval(&class)?;
        let mut atoms = Vec::new();
        for (d, &c) in coeffs.iter().enumerate() {
            let q = if d < g {
                xi.a(d + 1)
            } else if d < 2 * g {
                xi.b(d - g + 1)
            } else {
                xi.delta[d - 2 * g]
            };
            for _ in 0..c.abs() {
                atoms.push(Atom {
                    q: q * c.signum(),
                    basis: d,
                    sign: c.signum(),
                });
            }
        }
        checked += 1;
        failures += u64::from(!check_orders(&mut atoms, dim, 2, want, &pair, rng));
    }
    Ok((checked, failures))
}

/// Every class with crosscap coefficients mod 4 (Pin⁺) or mod 2 (Pin⁻) and
/// boundary coefficients mod 2, lifted by one extra period at random.
fn pin_bracket_check(xi: &PinStructure, rng: &mut impl Rng) -> Result<(u64, u64)> {
    let n = xi.crosscaps();
    let nb = xi.surface.boundaries;
    let dim = n + nb;
    let (m, period, weight) = match xi.sign {
        PinSign::Plus => (2, 4, 1),
        PinSign::Minus => (4, 2, 2),
    };
    let pair = move |u: &[i64], v: &[i64]| -> i64 { weight * (0..n).map(|i| u[i] * v[i]).sum::<i64>() };
    let radices: Vec<i64> = (0..dim).map(|d| if d < n { period } else { 2 }).collect();
    let total: i64 = radices.iter().product();
    let mut checked = 0;
    let mut failures = 0;
    for mut index in 0..total {
        let mut coeffs = vec![0i64; dim];
        for d in (0..dim).rev() {
            coeffs[d] = index % radices[d];
            index /= radices[d];
        }
        let lifted: Vec<i64> = coeffs
            .iter()
            .zip(&radices)
            .map(|(&c, &p)| c + p * i64::from(rng.gen_bool(0.25)))
            .collect();
        let class = CurveClass::non_orientable(lifted[..n].to_vec(), lifted[n..].to_vec());
        let want = xi.q_eval(&class)?;
        let mut atoms = Vec::new();
        for (d, &c) in lifted.iter().enumerate() {
            let q = if d < n { xi.a(d + 1) } else { xi.delta[d - n] };
            for _ in 0..c {
                atoms.push(Atom { q, basis: d, sign: 1 });
            }
        }
        checked += 1;
        failures += u64::from(!check_orders(&mut atoms, dim, m, want, &pair, rng));
    }
    Ok((checked, failures))
}

/// Quadratic refinements of the standard symplectic form on `(Z/2)^{2g}`,
/// counted by Arf value, with the Arf value taken as the majority value.
pub fn quadratic_form_census(g: usize) -> (u64, u64) {
    let dim = 2 * g;
    let omega = |x: usize, y: usize| -> u32 {
        (0..g)
            .map(|i| ((x >> (2 * i) & 1) * (y >> (2 * i + 1) & 1) + (x >> (2 * i + 1) & 1) * (y >> (2 * i) & 1)) as u32)
            .sum::<u32>()
            & 1
    };
    let mut counts = (0u64, 0u64);
    for basis_values in 0usize..1 << dim {
        let mut q = vec![0u32; 1 << dim];
        for x in 1usize..1 << dim {
            let low = x & x.wrapping_neg();
            let rest = x ^ low;
            let e = low.trailing_zeros() as usize;
            q[x] = (q[rest] + (basis_values >> e & 1) as u32 + omega(low, rest)) & 1;
        }
        let ones = q.iter().filter(|&&v| v == 1).count();
        if ones * 2 > q.len() {
            counts.1 += 1;
        } else {
            counts.0 += 1;
        }
    }
    counts
}

fn census(budget: u128) -> CriterionResult {
    let timer = Timer::start();
    let mut failures = 0;
    let mut detail = Vec::new();
    for g in [2usize, 3] {
        let (even, odd) = quadratic_form_census(g);
        let closed = (
            (1u64 << (2 * g - 1)) + (1 << (g - 1)),
            (1u64 << (2 * g - 1)) - (1 << (g - 1)),
        );
        let surface = SurfaceSpec::orientable(g, 1).expect("valid");
        let orbits =
            CoordinateSpace::new(StructureKind::Theta { r: 2 }, surface, vec![0]).and_then(|s| partition(s, budget));
        let by_arf = orbits.map(|p| {
            let mut sizes = (0, 0);
            for (size, inv) in p.sizes.iter().zip(&p.invariants) {
                match inv {
                    Some(0) => sizes.0 += size,
                    _ => sizes.1 += size,
                }
            }
            (p.orbit_count(), sizes)
        });
        let ok = matches!(by_arf, Ok((2, sizes)) if sizes == (even, odd)) && (even, odd) == closed;
        failures += u64::from(!ok);
        detail.push(format!("g={g}: {even}/{odd}"));
    }
    timer.finish(9, "quadratic form census", 2, failures, detail.join(", "))
}
