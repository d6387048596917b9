//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p crystal-cli --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use crystal_core::datum::{holds_at, CheckKind};
use crystal_core::graded::DEFAULT_MAX_ELEMENTS;
use crystal_core::linalg::{find_projection, Matrix, RowVector};
use crystal_core::localization::regular_inclusion_failures;
use crystal_core::{
    averaging_projection, check_a_linear, check_inverse_identities, corruption_survey, examples,
    fuzz, is_regular_in_a, is_semiprime_finite, ore_witness, torsion_profile, validate_datum,
    AutomorphismSpec, BaseRing, CrystalDatum, Error, GradedElement, GradedRing, Group, RingValue,
    SemilinearModule, SubmoduleProjection,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn load(name: &str) -> CrystalDatum {
    let text = std::fs::read_to_string(fixture(name)).expect("fixture readable");
    CrystalDatum::from_json(&serde_json::from_str(&text).expect("fixture is JSON"))
        .expect("fixture parses")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const FIXTURES: [&str; 6] = [
    "gaussian.json",
    "quaternion.json",
    "skew-conjugation.json",
    "z4-alpha2.json",
    "f2c2.json",
    "f3c2.json",
];

fn criterion1() -> Outcome {
    let mut slowest = Duration::ZERO;
    for name in FIXTURES {
        let d = load(name);
        let start = Instant::now();
        let r = validate_datum(&d);
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(r.pre_crystalline_consistent, || {
            format!("{name} rejected: {:?}", r.failed().next())
        })?;
        let n = d.order();
        let c = r.check(CheckKind::Cocycle);
        ensure(c.instances == n * n * n, || {
            format!(
                "{name}: {} cocycle instances, want {}",
                c.instances,
                n * n * n
            )
        })?;
        ensure(took < Duration::from_secs(1), || {
            format!("{name} took {took:?}")
        })?;
    }
    Ok(format!(
        "6 fixtures validate, all |G|^3 triples checked, slowest {slowest:?}"
    ))
}

fn criterion2() -> Outcome {
    let mut exhaustive = 0usize;
    for name in FIXTURES {
        let d = load(name);
        let a = GradedRing::new(d.clone()).map_err(|e| e.to_string())?;
        match a.size() {
            Some(size) => {
                ensure(size <= 256, || format!("{name}: |A| = {size}"))?;
                let all = a
                    .elements(DEFAULT_MAX_ELEMENTS)
                    .map_err(|e| e.to_string())?;
                for x in &all {
                    for y in &all {
                        let xy = a.mul(x, y);
                        for z in &all {
                            ensure(a.mul(&xy, z) == a.mul(x, &a.mul(y, z)), || {
                                format!("{name}: ({x:?})({y:?})({z:?})")
                            })?;
                            exhaustive += 1;
                        }
                    }
                }
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(2024);
                for _ in 0..1000 {
                    let x = a.random_element(&mut rng, 50);
                    let y = a.random_element(&mut rng, 50);
                    let z = a.random_element(&mut rng, 50);
                    ensure(
                        a.mul(&a.mul(&x, &y), &z) == a.mul(&x, &a.mul(&y, &z)),
                        || format!("{name}: random triple fails"),
                    )?;
                }
            }
        }
    }
    Ok(format!("{exhaustive} exhaustive triples on finite fixtures, 1000 random triples on each infinite one"))
}

fn criterion3() -> Outcome {
    let q = load("quaternion.json");
    let s = corruption_survey(&q, 3, 100);
    ensure(s.trials == 100, || "wrong trial count".into())?;
    for e in s.entries.iter().filter(|e| e.rejected) {
        let bad = q
            .with_alpha(e.g, e.h, e.value.clone())
            .map_err(|e| e.to_string())?;
        let r = validate_datum(&bad);
        for c in r.failed() {
            let w = c.witness.as_ref().ok_or("failed check without witness")?;
            ensure(!holds_at(&bad, c.kind, w), || {
                format!("witness {w} does not replay")
            })?;
            ensure(holds_at(&q, c.kind, w), || {
                format!("witness {w} also fails on the original")
            })?;
        }
    }
    ensure(s.rejected >= 95, || {
        format!("only {} of 100 corruptions rejected", s.rejected)
    })?;
    ensure(s.reverified == s.rejected, || {
        format!("{} of {} witnesses re-verify", s.reverified, s.rejected)
    })?;
    Ok(format!(
        "{} of 100 corruptions rejected, every witness re-verifies",
        s.rejected
    ))
}

fn criterion4() -> Outcome {
    let mut total = 0;
    for name in ["gaussian.json", "quaternion.json", "skew-conjugation.json"] {
        let d = load(name);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut samples = d.probe_values();
        samples.push(d.ring().from_i64(-1));
        for _ in 0..10 {
            let x = d.ring().random_value(&mut rng, 25);
            if !d.ring().is_zero(&x) {
                samples.push(x);
            }
        }
        let r = check_inverse_identities(&d, &samples).map_err(|e| e.to_string())?;
        for o in &r.outcomes {
            ensure(o.passed(), || {
                format!("{name}: {} fails at {:?}", o.identity.name(), o.witness)
            })?;
            total += o.instances;
        }
    }
    Ok(format!(
        "all four inverse identities hold on {total} instances over the fraction field"
    ))
}

/// Rank of a list of vectors over F_p, by elimination on plain integers.
fn rank_mod_p(rows: &[RowVector], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| match x {
                    RingValue::Modular(v) => *v,
                    other => panic!("not a residue: {other:?}"),
                })
                .collect()
        })
        .collect();
    let width = m.first().map_or(0, Vec::len);
    let inv = |a: u64| (1..p).find(|b| a * b % p == 1).expect("nonzero residue");
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let s = inv(m[rank][col]);
        for v in m[rank].iter_mut() {
            *v = *v * s % p;
        }
        let pivot_row = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p * p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_matrix(ring: &BaseRing, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_rows(
        (0..n)
            .map(|_| (0..n).map(|_| ring.random_value(rng, 0)).collect())
            .collect(),
    )
    .unwrap()
}

fn random_invertible(ring: &BaseRing, n: usize, rng: &mut ChaCha8Rng) -> (Matrix, Matrix) {
    loop {
        let s = random_matrix(ring, n, rng);
        if let Some(inv) = s.inverse(ring) {
            return (s, inv);
        }
    }
}

/// A^k for a cyclic-family datum with trivial σ, written in a random basis.
fn random_module(rng: &mut ChaCha8Rng) -> (SemilinearModule, u64) {
    loop {
        let p = if rng.random_bool(0.5) { 3 } else { 5 };
        let n = rng.random_range(2..=4usize);
        if (n as u64).is_multiple_of(p) {
            continue;
        }
        let k = if n == 2 && rng.random_bool(0.5) { 2 } else { 1 };
        let ring = BaseRing::modular(p).unwrap();
        let c = ring.from_i64(rng.random_range(1..p as i64));
        let d = fuzz::cyclic_datum(
            &ring,
            &Group::cyclic(n).unwrap(),
            AutomorphismSpec::Identity,
            &c,
        )
        .unwrap();
        let regular = SemilinearModule::regular(d.clone()).unwrap();
        let rank = n * k;
        let (s, s_inv) = random_invertible(&ring, rank, rng);
        let actions = (0..n)
            .map(|g| {
                let u = regular.action(g);
                let block = Matrix::from_fn(rank, rank, |i, j| {
                    if i / n == j / n {
                        u.get(i % n, j % n).clone()
                    } else {
                        ring.zero()
                    }
                });
                s_inv.mul(&ring, &block).mul(&ring, &s)
            })
            .collect();
        return (SemilinearModule::new(d, actions).unwrap(), p);
    }
}

fn criterion5() -> Outcome {
    let d = load("f3c2.json");
    let ring = d.ring().clone();
    let m = SemilinearModule::regular(d).map_err(|e| e.to_string())?;
    let lit = |rows: &[[i64; 2]]| {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ring.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    };
    let p = SubmoduleProjection::new(&ring, lit(&[[0, 0], [1, 1]])).map_err(|e| e.to_string())?;
    ensure(!check_a_linear(&m, p.matrix()).unwrap().a_linear, || {
        "P should not be A-linear".into()
    })?;
    let lambda = averaging_projection(&m, &p).map_err(|e| e.to_string())?;
    ensure(lambda == lit(&[[2, 2], [2, 2]]), || {
        format!("Λ = {lambda:?}")
    })?;
    ensure(lambda.is_idempotent(&ring), || "Λ not idempotent".into())?;
    let n_vec = vec![ring.one(), ring.one()];
    ensure(
        crystal_core::linalg::vec_mul(&ring, &n_vec, &lambda) == n_vec,
        || "Λ moves 1+u".into(),
    )?;
    ensure(check_a_linear(&m, &lambda).unwrap().a_linear, || {
        "Λ not A-linear".into()
    })?;

    let f2 = load("f2c2.json");
    let m2 = SemilinearModule::regular(f2.clone()).map_err(|e| e.to_string())?;
    let p2 = SubmoduleProjection::new(f2.ring(), Matrix::identity(f2.ring(), 2)).unwrap();
    match averaging_projection(&m2, &p2) {
        Err(e @ Error::OrderNotInvertible(2)) => {
            ensure(e.to_string().contains("not invertible"), || e.to_string())?
        }
        other => {
            return Err(format!(
                "F2[C2] should fail with |G| not invertible, got {other:?}"
            ))
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut nonlinear, mut proper) = (0, 0);
    for trial in 0..20 {
        let (m, p) = random_module(&mut rng);
        ensure(m.validate().passed(), || {
            format!("trial {trial}: module invalid")
        })?;
        let ring = m.coefficients().clone();
        let rank = m.rank();
        let order = m.graded_ring().order();
        let v: RowVector = (0..rank).map(|_| ring.random_value(&mut rng, 0)).collect();
        let basis: Vec<RowVector> = (0..order).map(|g| m.act(g, &v)).collect();
        let proj = find_projection(&ring, &basis, rank)
            .map_err(|e| e.to_string())?
            .ok_or("no projection")?;
        // Random complement: P + (I - P)·Y·P projects onto the same image.
        let y = random_matrix(&ring, rank, &mut rng);
        let minus_one = ring.from_i64(-1);
        let i_minus_p = Matrix::identity(&ring, rank).add(&ring, &proj.scale(&ring, &minus_one));
        let proj = proj.add(&ring, &i_minus_p.mul(&ring, &y).mul(&ring, &proj));
        let sp =
            SubmoduleProjection::new(&ring, proj).map_err(|e| format!("trial {trial}: {e}"))?;
        nonlinear += usize::from(!check_a_linear(&m, sp.matrix()).unwrap().a_linear);
        let lambda = averaging_projection(&m, &sp).map_err(|e| format!("trial {trial}: {e}"))?;
        // (a) idempotent
        ensure(lambda.mul(&ring, &lambda) == lambda, || {
            format!("trial {trial}: (a)")
        })?;
        // (b) identity on N
        for b in &basis {
            ensure(
                crystal_core::linalg::vec_mul(&ring, b, &lambda) == *b,
                || format!("trial {trial}: (b)"),
            )?;
        }
        // (c) commutes with every U_g (σ is trivial here)
        for g in 0..order {
            let u = m.action(g);
            ensure(u.mul(&ring, &lambda) == lambda.mul(&ring, u), || {
                format!("trial {trial}: (c) at g={g}")
            })?;
        }
        // (d) image(Λ) = N
        let rows = lambda.to_rows();
        let rn = rank_mod_p(&basis, p);
        let rl = rank_mod_p(&rows, p);
        let both: Vec<RowVector> = basis.iter().chain(&rows).cloned().collect();
        ensure(rn == rl && rank_mod_p(&both, p) == rn, || {
            format!("trial {trial}: (d) ranks {rn} {rl}")
        })?;
        proper += usize::from(rn > 0 && rn < rank);
    }
    Ok(format!(
        "F3[C2] gives [[2,2],[2,2]]; F2[C2] refused; 20 random modules satisfy (a)-(d) \
         ({proper} proper nonzero submodules, {nonlinear} non-A-linear inputs)"
    ))
}

fn criterion6() -> Outcome {
    let mut slowest = Duration::ZERO;
    for p in [2u64, 3, 5] {
        for q in [2usize, 3, 4] {
            let d = examples::group_algebra(p, q);
            let start = Instant::now();
            let v = is_semiprime_finite(&d).map_err(|e| e.to_string())?;
            let took = start.elapsed();
            slowest = slowest.max(took);
            ensure(took < Duration::from_secs(5), || {
                format!("F{p}[C{q}] took {took:?}")
            })?;
            ensure(v.semiprime == !(q as u64).is_multiple_of(p), || {
                format!("F{p}[C{q}]: semiprime = {}", v.semiprime)
            })?;
            if let Some(x) = &v.witness {
                let a = GradedRing::new(d.clone()).unwrap();
                ensure(!x.is_zero(), || "zero witness".into())?;
                for y in a.elements(DEFAULT_MAX_ELEMENTS).unwrap() {
                    ensure(a.mul(&a.mul(x, &y), x).is_zero(), || {
                        format!("F{p}[C{q}]: witness fails")
                    })?;
                }
            }
        }
    }
    Ok(format!(
        "verdict = (p does not divide q) for all 9 algebras, slowest {slowest:?}"
    ))
}

fn criterion7() -> Outcome {
    for name in ["f3c2.json", "z4-alpha2.json", "pair-swap.json"] {
        let d = load(name);
        let bad = regular_inclusion_failures(&d).map_err(|e| e.to_string())?;
        ensure(bad.is_empty(), || {
            format!("{name}: regular in R but not in A: {bad:?}")
        })?;
    }
    let d = load("z4-alpha2.json");
    let a = GradedRing::new(d.clone()).unwrap();
    let v = is_regular_in_a(&d, &RingValue::Modular(2)).map_err(|e| e.to_string())?;
    let expected: GradedElement = a.monomial(RingValue::Modular(2), 1);
    ensure(!v.regular, || "2 should be a zero divisor in A".into())?;
    ensure(v.witness.as_ref() == Some(&expected), || {
        format!("witness {:?}", v.witness)
    })?;
    Ok("reg R within reg A on Z/3, Z/4, F2xF2; Z/4 gives 2 with witness 2·u_g".into())
}

fn criterion8() -> Outcome {
    let mut checked = 0;
    for name in ["gaussian.json", "skew-conjugation.json"] {
        let d = load(name);
        let a = GradedRing::new(d.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let r = a.random_element(&mut rng, 20);
            let s = loop {
                let s = d.ring().random_value(&mut rng, 20);
                if !d.ring().is_zero(&s) {
                    break s;
                }
            };
            let w = ore_witness(&d, &r, &s).map_err(|e| e.to_string())?;
            ensure(
                a.mul(&a.scalar(w.s_prime.clone()), &r) == a.mul(&w.r_prime, &a.scalar(s)),
                || format!("{name}: equation fails"),
            )?;
            checked += 1;
        }
    }
    let d = load("skew-conjugation.json");
    let a = GradedRing::new(d.clone()).unwrap();
    let ring = d.ring();
    let omega = ring.omega().unwrap();
    let r = a.monomial(omega.clone(), 1);
    let s = ring.add(&ring.one(), &omega);
    let w = ore_witness(&d, &r, &s).map_err(|e| e.to_string())?;
    let expected_r = a.monomial(ring.sub(&omega, &ring.one()), 1);
    ensure(
        w.r_prime == expected_r && w.s_prime == ring.from_i64(2),
        || format!("hand case gave {w:?}"),
    )?;
    Ok(format!(
        "{checked} seeded pairs verify; ω·u_g, 1+ω gives ((ω-1)·u_g, 2)"
    ))
}

fn criterion9() -> Outcome {
    let p = torsion_profile(&load("z4-alpha2.json")).map_err(|e| e.to_string())?;
    ensure(!p.condition3.passed && !p.condition4.passed, || {
        "conditions 3-4 should fail".into()
    })?;
    ensure(p.condition5.passed && p.condition6.passed, || {
        "conditions 5-6 should pass".into()
    })?;
    ensure(!p.agreement, || "agreement should be false".into())?;
    Ok("Z/4 with α = 2 reports agreement = false (3-4 fail, 5-6 pass)".into())
}

fn criterion10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_crystal");
    let f = |n: &str| fixture(n).to_string_lossy().into_owned();
    let runs: Vec<Vec<String>> = vec![
        vec!["validate".into(), f("quaternion.json")],
        vec!["torsion".into(), f("z4-alpha2.json")],
        vec![
            "mul".into(),
            f("gaussian.json"),
            "[[1,1]]".into(),
            "[[1,1]]".into(),
        ],
        vec!["inverse".into(), f("gaussian.json"), "1".into()],
        vec!["lemma14".into(), f("skew-conjugation.json")],
        vec![
            "ore".into(),
            f("skew-conjugation.json"),
            "[[1,[0,1]]]".into(),
            "[1,1]".into(),
        ],
        vec![
            "maschke".into(),
            f("f3c2.json"),
            f("f3c2-regular.module.json"),
            "[[1,1]]".into(),
            "--projection".into(),
            "[[0,0],[1,1]]".into(),
        ],
        vec!["semiprime".into(), f("f2c2.json")],
        vec![
            "fuzz".into(),
            f("z4-alpha2.json"),
            "--seed".into(),
            "7".into(),
            "--trials".into(),
            "200".into(),
        ],
        vec![
            "fuzz".into(),
            f("pair-swap.json"),
            "--family".into(),
            "skew".into(),
            "--seed".into(),
            "2".into(),
        ],
    ];
    for args in &runs {
        let mut outputs = Vec::new();
        for _ in 0..3 {
            let out = Command::new(bin)
                .args(args)
                .arg("--json")
                .output()
                .map_err(|e| e.to_string())?;
            ensure(out.status.code() == Some(0), || {
                format!("{args:?} exited {:?}", out.status.code())
            })?;
            outputs.push(out.stdout);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
            format!("{args:?} output differs between runs")
        })?;
        serde_json::from_slice::<serde_json::Value>(&outputs[0])
            .map_err(|e| format!("{args:?}: {e}"))?;
    }
    Ok(format!(
        "{} commands x 3 runs produce byte-identical JSON",
        runs.len()
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("cocycle soundness", criterion1),
        ("associativity from the cocycle", criterion2),
        ("mutation detection", criterion3),
        ("inverse identities", criterion4),
        ("Maschke splitting", criterion5),
        ("semiprime group algebras", criterion6),
        ("regular elements stay regular", criterion7),
        ("Ore witnesses", criterion8),
        ("torsion profile honesty", criterion9),
        ("determinism", criterion10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
