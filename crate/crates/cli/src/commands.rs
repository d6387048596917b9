use std::path::Path;

use crystal_core::datum::TorsionWitness;
use crystal_core::graded::IdentityWitness;
use crystal_core::linalg::{in_span, Matrix, RowVector};
use crystal_core::maschke::parse_submodule;
use crystal_core::semiprime::{is_semiprime_capped, kills_sandwich, nilpotent_witness_capped};
use crystal_core::{
    averaging_projection, basis_inverse, check_a_linear, check_inverse_identities, fuzz_data,
    ore_witness, right_ore_witness, split_submodule, torsion_profile, validate_datum, BaseRing,
    Family, FuzzConfig, GradedRing, SemilinearModule, SubmoduleProjection, Witness,
};
use serde_json::{json, Value};

use crate::report::{Check, Report};
use crate::{
    json_arg, load_datum, read_json_file, Cli, CliError, CliResult, Command, FamilyArg, LoadedDatum,
};

pub(crate) fn run(cli: &Cli, report: &mut Report) -> CliResult<()> {
    match &cli.command {
        Command::Validate { datum } => validate(report, datum),
        Command::Torsion { datum } => torsion(report, datum),
        Command::Mul { datum, x, y } => mul(report, datum, x, y),
        Command::Inverse { datum, g } => inverse(report, datum, *g),
        Command::Lemma14 { datum, samples } => lemma14(report, datum, samples),
        Command::Ore { datum, r, s, right } => ore(report, datum, r, s, *right),
        Command::Maschke {
            datum,
            module,
            submodule,
            projection,
        } => maschke(report, datum, module, submodule, projection.as_deref()),
        Command::Semiprime { datum } => semiprime(report, datum, cli.max_size),
        Command::Fuzz { datum, family } => fuzz(report, datum, *family, cli.seed, cli.trials),
    }
}

fn open(report: &mut Report, path: &Path) -> CliResult<LoadedDatum> {
    let loaded = load_datum(path)?;
    report.fingerprint = Some(loaded.fingerprint.clone());
    Ok(loaded)
}

fn witness_json(ring: &BaseRing, w: &Witness) -> Value {
    match w {
        Witness::Element { g } => json!({"g": g}),
        Witness::Pair { g, h } => json!({"g": g, "h": h}),
        Witness::Triple { g, h, t } => json!({"g": g, "h": h, "t": t}),
        Witness::PairValue { g, h, r } => json!({"g": g, "h": h, "r": ring.to_literal(r)}),
    }
}

fn validate(report: &mut Report, path: &Path) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let r = validate_datum(&d);
    for c in &r.checks {
        report.check(
            Check::new(c.kind.name(), c.passed())
                .witness(c.witness.as_ref().map(|w| witness_json(d.ring(), w)))
                .counts(c.instances, c.failures),
        );
    }
    report.check(
        Check::new("alpha_regular", r.irregular_alpha.is_none())
            .witness(r.irregular_alpha.map(|(g, h)| json!({"g": g, "h": h}))),
    );
    report.summary(
        "checks_passed",
        r.checks.iter().filter(|c| c.passed()).count(),
    );
    report.summary(
        "checks_failed",
        r.checks.iter().filter(|c| !c.passed()).count(),
    );
    report.summary("pre_crystalline", r.pre_crystalline_consistent);
    report.summary("crystalline", r.crystalline);
    report.summary("sigma_multiplicative", r.centrally_consistent);
    report.summary("ring", d.ring().to_string());
    report.summary("group_order", d.order());
    Ok(())
}

fn torsion_witness(ring: &BaseRing, w: &TorsionWitness) -> Value {
    match w.h {
        Some(h) => json!({"g": w.g, "h": h, "r": ring.to_literal(&w.r)}),
        None => json!({"g": w.g, "r": ring.to_literal(&w.r)}),
    }
}

fn torsion(report: &mut Report, path: &Path) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let p = torsion_profile(&d)?;
    let conditions = [
        ("condition3_alpha_inverse_pair_regular", &p.condition3),
        ("condition4_alpha_regular", &p.condition4),
        ("condition5_sigma_injective", &p.condition5),
        ("condition6_sigma_bijective", &p.condition6),
    ];
    for (name, c) in conditions {
        report.check(
            Check::new(name, c.passed)
                .witness(c.witness.as_ref().map(|w| torsion_witness(d.ring(), w))),
        );
    }
    report.summary("agreement", p.agreement);
    report.summary(
        "conditions_passed",
        conditions.iter().filter(|(_, c)| c.passed).count(),
    );
    Ok(())
}

fn mul(report: &mut Report, path: &Path, x: &str, y: &str) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let a = GradedRing::new(d)?;
    let x = a.parse_element(&json_arg(x)?)?;
    let y = a.parse_element(&json_arg(y)?)?;
    let p = a.try_mul(&x, &y)?;
    let lit = a.element_literal(&p);
    report.verdict = Some(format!(
        "product {}",
        serde_json::to_string(&lit).expect("literal")
    ));
    report.result("product", lit);
    report.summary("support_size", p.support().count());
    Ok(())
}

fn inverse(report: &mut Report, path: &Path, g: usize) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let (a, v) = basis_inverse(&d, g)?;
    let u = a.basis(g);
    let one = a.one();
    report.check(Check::new("left_inverse", a.mul(&v, &u) == one));
    report.check(Check::new("right_inverse", a.mul(&u, &v) == one));
    let lit = a.element_literal(&v);
    report.verdict = Some(format!(
        "inverse of u_{g}: {}",
        serde_json::to_string(&lit).expect("literal")
    ));
    report.result("inverse", lit);
    report.summary("coefficients", a.coefficients().to_string());
    report.summary("lifted_to_fraction_field", a.coefficients() != d.ring());
    Ok(())
}

fn identity_witness(ring: &BaseRing, w: &IdentityWitness) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("g".into(), w.g.into());
    if let Some(h) = w.h {
        m.insert("h".into(), h.into());
    }
    if let Some(x) = &w.x {
        m.insert("x".into(), ring.to_literal(x));
    }
    Value::Object(m)
}

fn lemma14(report: &mut Report, path: &Path, samples: &[String]) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let mut probes = d.probe_values();
    for s in samples {
        let v = d.ring().parse_literal(&json_arg(s)?)?;
        if !probes.contains(&v) {
            probes.push(v);
        }
    }
    let r = check_inverse_identities(&d, &probes)?;
    let lifted = d.ring().fraction_field()?;
    for o in &r.outcomes {
        report.check(
            Check::new(o.identity.name(), o.passed())
                .witness(o.witness.as_ref().map(|w| identity_witness(&lifted, w)))
                .counts(o.instances, o.failures),
        );
    }
    report.summary("all_passed", r.all_passed());
    report.summary("samples", probes.len());
    report.summary("evaluated_over", lifted.to_string());
    Ok(())
}

fn ore(report: &mut Report, path: &Path, r: &str, s: &str, right: bool) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let a = GradedRing::new(d.clone())?;
    let r = a.parse_element(&json_arg(r)?)?;
    let s = d.ring().parse_literal(&json_arg(s)?)?;
    let w = if right {
        right_ore_witness(&d, &r, &s)?
    } else {
        ore_witness(&d, &r, &s)?
    };
    let (lhs, rhs) = if right {
        (
            a.mul(&r, &a.scalar(w.s_prime.clone())),
            a.mul(&a.scalar(s.clone()), &w.r_prime),
        )
    } else {
        (
            a.mul(&a.scalar(w.s_prime.clone()), &r),
            a.mul(&w.r_prime, &a.scalar(s.clone())),
        )
    };
    let name = if right {
        "right_ore_equation"
    } else {
        "left_ore_equation"
    };
    report.check(Check::new(name, lhs == rhs));
    report.result("r_prime", a.element_literal(&w.r_prime));
    report.result("s_prime", d.ring().to_literal(&w.s_prime));
    report.summary("side", if right { "right" } else { "left" });
    Ok(())
}

fn matrix_json(ring: &BaseRing, m: &Matrix) -> Value {
    m.to_json(ring)
}

fn spans_equal(ring: &BaseRing, a: &[RowVector], b: &[RowVector]) -> CliResult<bool> {
    for v in a {
        if !in_span(ring, v, b)? {
            return Ok(false);
        }
    }
    for v in b {
        if !in_span(ring, v, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn maschke(
    report: &mut Report,
    path: &Path,
    module: &Path,
    submodule: &str,
    projection: Option<&str>,
) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let m = SemilinearModule::from_json(d, &read_json_file(module)?)?;
    let ring = m.coefficients().clone();
    let mr = m.validate();
    report.check(Check::new("module_identity_action", mr.identity_action));
    report.check(
        Check::new("module_compatibility", mr.compatibility_failures == 0).witness(
            mr.compatibility_witness
                .map(|(g, h)| json!({"g": g, "h": h})),
        ),
    );
    report.check(
        Check::new("module_actions_invertible", mr.singular_action.is_none())
            .witness(mr.singular_action.map(|g| json!({"g": g}))),
    );
    let basis = parse_submodule(&ring, &json_arg(submodule)?)?;
    if basis.iter().any(|b| b.len() != m.rank()) {
        return Err(CliError::Input(format!(
            "submodule vectors must have length {}",
            m.rank()
        )));
    }

    let lambda = match projection {
        Some(p) => {
            let p = SubmoduleProjection::new(&ring, Matrix::from_json(&ring, &json_arg(p)?)?)?;
            if p.matrix().rows() != m.rank() {
                return Err(CliError::Input(format!(
                    "projection must be {0}x{0}",
                    m.rank()
                )));
            }
            if !spans_equal(&ring, &p.image_spanning_set(), &basis)? {
                return Err(CliError::Input(
                    "projection image differs from the submodule".into(),
                ));
            }
            let lin = check_a_linear(&m, p.matrix())?;
            report.check(
                Check::new("input_projection_a_linear", lin.a_linear)
                    .witness(lin.witness.map(|(g, i)| json!({"g": g, "basis_vector": i}))),
            );
            averaging_projection(&m, &p)?
        }
        None => split_submodule(&m, &basis)?.into_matrix(),
    };

    let rows = lambda.to_rows();
    report.check(Check::new("lambda_idempotent", lambda.is_idempotent(&ring)));
    report.check(Check::new(
        "lambda_identity_on_submodule",
        basis
            .iter()
            .all(|b| crystal_core::linalg::vec_mul(&ring, b, &lambda) == *b),
    ));
    let lin = check_a_linear(&m, &lambda)?;
    report.check(
        Check::new("lambda_a_linear", lin.a_linear)
            .witness(lin.witness.map(|(g, i)| json!({"g": g, "basis_vector": i}))),
    );
    report.check(Check::new(
        "lambda_image_is_submodule",
        spans_equal(&ring, &rows, &basis)?,
    ));
    report.result("lambda", matrix_json(&ring, &lambda));
    report.verdict = Some(format!(
        "lambda {}",
        serde_json::to_string(&matrix_json(&ring, &lambda)).expect("literal")
    ));
    report.summary("rank", m.rank());
    report.summary("submodule_generators", basis.len());
    Ok(())
}

fn semiprime(report: &mut Report, path: &Path, max_size: u128) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let v = is_semiprime_capped(&d, max_size)?;
    let a = GradedRing::new(d.clone())?;
    let witness_lit = v.witness.as_ref().map(|w| a.element_literal(w));
    if let Some(w) = &v.witness {
        report.check(
            Check::new("witness_kills_sandwich", kills_sandwich(&a, w)?)
                .witness(witness_lit.clone()),
        );
    }
    let nil = nilpotent_witness_capped(&d, max_size)?;
    report.check(
        Check::new("no_nonzero_nilpotents", nil.is_none())
            .witness(nil.as_ref().map(|x| a.element_literal(x))),
    );
    report.summary("semiprime", v.semiprime);
    report.summary("method", v.method);
    report.summary("characteristic_coprime", v.characteristic_coprime);
    report.summary("size", a.size().map(|s| s.to_string()).unwrap_or_default());
    if let Some(w) = witness_lit.clone() {
        report.result("witness", w);
    }
    report.verdict = Some(match witness_lit {
        Some(w) => format!(
            "semiprime: false, witness {}",
            serde_json::to_string(&w).expect("literal")
        ),
        None => "semiprime: true".into(),
    });
    Ok(())
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Cyclic => "cyclic",
        Family::Skew => "skew",
        Family::Mixed => "mixed",
    }
}

fn fuzz(
    report: &mut Report,
    path: &Path,
    family: FamilyArg,
    seed: u64,
    trials: usize,
) -> CliResult<()> {
    let d = open(report, path)?.datum;
    let family = match family {
        FamilyArg::Cyclic => Family::Cyclic,
        FamilyArg::Skew => Family::Skew,
        FamilyArg::Mixed => Family::Mixed,
    };
    let cfg = FuzzConfig {
        ring: d.ring().clone(),
        group: d.group().clone(),
        trials,
        family,
    };
    let s = fuzz_data(seed, &cfg)?;
    let first_failure = s
        .details
        .iter()
        .find(|t| !t.passed)
        .map(|t| json!({"trial": t.index}));
    report.check(Check::new("all_trials_validate", s.passed == s.trials).witness(first_failure));
    let mismatch = s
        .details
        .iter()
        .find(|t| t.torsion_agreement == Some(false))
        .map(|t| json!({"trial": t.index, "c": t.c.as_ref().map(|c| d.ring().to_literal(c))}));
    report.summary("trials", s.trials);
    report.summary("passed", s.passed);
    report.summary("cocycle_failures", s.cocycle_failures);
    report.summary("commutation_failures", s.commutation_failures);
    report.summary("torsion_mismatches", s.torsion_mismatches);
    report.summary("seed", seed);
    report.summary("family", family_name(family));
    if let Some(m) = mismatch {
        report.result("first_torsion_mismatch", m);
    }
    report.result(
        "trials",
        s.details
            .iter()
            .map(|t| {
                json!({
                    "index": t.index,
                    "family": family_name(t.family),
                    "c": t.c.as_ref().map(|c| d.ring().to_literal(c)),
                    "sigma": t.sigma.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
                    "passed": t.passed,
                    "torsion_agreement": t.torsion_agreement,
                })
            })
            .collect::<Vec<_>>(),
    );
    Ok(())
}
