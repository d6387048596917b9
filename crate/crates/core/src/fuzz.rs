//! Structured random data for property testing the datum checks.
//!
//! Random α tables essentially never satisfy the cocycle law, so trials are
//! drawn from two families that satisfy it by construction:
//!
//! * cyclic: G = ⟨g⟩ of order n, σ_{g^i} = τ^i for an automorphism τ with
//!   τ^n = id, and α(g^i, g^j) = c^⌊(i+j)/n⌋ for a τ-fixed c (so u_g^n = c);
//! * skew: α ≡ 1 and σ a homomorphism from G into the automorphisms of R.
//!
//! Each trial is re-validated from scratch, so a bug in either the family
//! construction or the validator shows up as a failure count.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::datum::{torsion_profile, validate_datum, CheckKind, CrystalDatum};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::ring::{AutomorphismSpec, BaseRing, RingValue};

pub const MAX_FUZZ_GROUP_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cyclic,
    Skew,
    /// Alternates between the supported families trial by trial.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub ring: BaseRing,
    pub group: Group,
    pub trials: usize,
    pub family: Family,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzTrial {
    pub index: usize,
    pub family: Family,
    /// u_g^n for cyclic trials.
    pub c: Option<RingValue>,
    pub sigma: Vec<AutomorphismSpec>,
    pub passed: bool,
    pub cocycle_failed: bool,
    pub commutation_failed: bool,
    /// `None` when the trial did not validate.
    pub torsion_agreement: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzSummary {
    pub trials: usize,
    pub passed: usize,
    pub cocycle_failures: usize,
    pub commutation_failures: usize,
    pub torsion_mismatches: usize,
    pub details: Vec<FuzzTrial>,
}

/// Builds the cyclic-family datum for generator power `c` and twist `tau`.
pub fn cyclic_datum(
    ring: &BaseRing,
    group: &Group,
    tau: AutomorphismSpec,
    c: &RingValue,
) -> Result<CrystalDatum> {
    let n = group.order();
    let gen = group
        .cyclic_generator()
        .ok_or_else(|| Error::Unsupported("cyclic family needs a cyclic group".into()))?;
    if !(n as u64).is_multiple_of(tau.order()) {
        return Err(Error::Unsupported(format!(
            "{tau:?} does not have order dividing {n}"
        )));
    }
    if ring.apply(tau, c) != *c {
        return Err(Error::Unsupported(format!("{c} is not fixed by {tau:?}")));
    }
    let mut exponent = vec![0usize; n];
    for i in 0..n {
        exponent[group.power(gen, i)] = i;
    }
    let tau_pow = |i: usize| {
        if i % 2 == 1 {
            tau
        } else {
            AutomorphismSpec::Identity
        }
    };
    CrystalDatum::from_fn(
        ring.clone(),
        group.clone(),
        |g| tau_pow(exponent[g]),
        |g, h| ring.pow(c, ((exponent[g] + exponent[h]) / n) as u64),
    )
}

/// All homomorphisms G → {id, τ}, trivial one first.
pub fn sign_homomorphisms(group: &Group) -> Vec<Vec<bool>> {
    let n = group.order();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << (n - 1)) {
        let s: Vec<bool> = (0..n)
            .map(|g| g > 0 && (mask >> (g - 1)) & 1 == 1)
            .collect();
        let hom = (0..n).all(|g| (0..n).all(|h| s[group.mul(g, h)] == (s[g] ^ s[h])));
        if hom {
            out.push(s);
        }
    }
    out
}

fn skew_datum(
    ring: &BaseRing,
    group: &Group,
    tau: AutomorphismSpec,
    sign: &[bool],
) -> Result<CrystalDatum> {
    CrystalDatum::from_fn(
        ring.clone(),
        group.clone(),
        |g| {
            if sign[g] {
                tau
            } else {
                AutomorphismSpec::Identity
            }
        },
        |_, _| ring.one(),
    )
}

fn nontrivial_automorphism(ring: &BaseRing) -> Option<AutomorphismSpec> {
    ring.automorphisms()
        .into_iter()
        .find(|a| *a != AutomorphismSpec::Identity)
}

fn run_trial(
    cfg: &FuzzConfig,
    elements: &[RingValue],
    seed: u64,
    index: usize,
    family: Family,
) -> Result<FuzzTrial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let ring = &cfg.ring;
    let (datum, c) = match family {
        Family::Cyclic => {
            let n = cfg.group.order();
            let taus: Vec<_> = ring
                .automorphisms()
                .into_iter()
                .filter(|t| (n as u64).is_multiple_of(t.order()))
                .collect();
            let tau = *taus.choose(&mut rng).expect("identity always qualifies");
            let fixed: Vec<_> = elements
                .iter()
                .filter(|x| ring.apply(tau, x) == **x)
                .collect();
            let c = (*fixed.choose(&mut rng).expect("0 is fixed")).clone();
            (cyclic_datum(ring, &cfg.group, tau, &c)?, Some(c))
        }
        Family::Skew => {
            let tau = nontrivial_automorphism(ring).ok_or_else(|| {
                Error::Unsupported(format!("skew family needs an automorphism of {ring}"))
            })?;
            let homs = sign_homomorphisms(&cfg.group);
            let sign = homs.choose(&mut rng).expect("trivial homomorphism");
            (skew_datum(ring, &cfg.group, tau, sign)?, None)
        }
        Family::Mixed => unreachable!("resolved before dispatch"),
    };
    let report = validate_datum(&datum);
    let passed = report.pre_crystalline_consistent;
    let torsion_agreement = if passed {
        Some(torsion_profile(&datum)?.agreement)
    } else {
        None
    };
    Ok(FuzzTrial {
        index,
        family,
        c,
        sigma: datum.sigmas().to_vec(),
        passed,
        cocycle_failed: !report.check(CheckKind::Cocycle).passed(),
        commutation_failed: !report.check(CheckKind::TwistedCommutation).passed(),
        torsion_agreement,
    })
}

/// Runs `cfg.trials` independent trials. The result depends only on `seed`
/// and `cfg`; trials run in parallel on per-trial streams.
pub fn fuzz_data(seed: u64, cfg: &FuzzConfig) -> Result<FuzzSummary> {
    let elements = cfg.ring.enumerate()?;
    if cfg.group.order() > MAX_FUZZ_GROUP_ORDER {
        return Err(Error::SizeCap {
            what: "fuzz group order",
            size: cfg.group.order() as u128,
            limit: MAX_FUZZ_GROUP_ORDER as u128,
        });
    }
    let cyclic_ok = cfg.group.cyclic_generator().is_some();
    let skew_ok = nontrivial_automorphism(&cfg.ring).is_some();
    let families: Vec<Family> = match cfg.family {
        Family::Cyclic if !cyclic_ok => {
            return Err(Error::Unsupported(
                "cyclic family needs a cyclic group".into(),
            ))
        }
        Family::Skew if !skew_ok => {
            return Err(Error::Unsupported(format!(
                "skew family needs an automorphism of {}",
                cfg.ring
            )))
        }
        Family::Mixed => {
            let mut f = Vec::new();
            if cyclic_ok {
                f.push(Family::Cyclic);
            }
            if skew_ok {
                f.push(Family::Skew);
            }
            if f.is_empty() {
                return Err(Error::Unsupported(format!(
                    "no fuzz family applies to {} with this group",
                    cfg.ring
                )));
            }
            f
        }
        other => vec![other],
    };

    let details = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, &elements, seed, i, families[i % families.len()]))
        .collect::<Result<Vec<_>>>()?;

    Ok(FuzzSummary {
        trials: cfg.trials,
        passed: details.iter().filter(|t| t.passed).count(),
        cocycle_failures: details.iter().filter(|t| t.cocycle_failed).count(),
        commutation_failures: details.iter().filter(|t| t.commutation_failed).count(),
        torsion_mismatches: details
            .iter()
            .filter(|t| t.torsion_agreement == Some(false))
            .count(),
        details,
    })
}
