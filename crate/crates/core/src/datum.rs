//! The twisting datum (R, G, σ, α) of a crystalline graded ring and its validation.
//!
//! A datum says how the basis elements `u_g` of `A = ⊕ R u_g` commute past
//! coefficients (`u_g r = σ_g(r) u_g`) and multiply among themselves
//! (`u_g u_h = α(g,h) u_{gh}`). [`validate_datum`] checks every consequence
//! of associativity that can be stated on the datum alone; failures are
//! report entries with a concrete witness, never errors.

use std::collections::HashSet;
use std::fmt;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::Group;
use crate::ring::{AutomorphismSpec, BaseRing, RingValue};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalDatum {
    ring: BaseRing,
    group: Group,
    sigma: Vec<AutomorphismSpec>,
    alpha: Vec<Vec<RingValue>>,
    samples: Vec<RingValue>,
}

impl CrystalDatum {
    /// Builds a datum after checking shapes only. Mathematical consistency is
    /// the job of [`validate_datum`].
    pub fn new(
        ring: BaseRing,
        group: Group,
        sigma: Vec<AutomorphismSpec>,
        alpha: Vec<Vec<RingValue>>,
    ) -> Result<Self> {
        let n = group.order();
        if sigma.len() != n {
            return Err(Error::Shape(format!(
                "sigma has {} entries, group order is {n}",
                sigma.len()
            )));
        }
        if alpha.len() != n || alpha.iter().any(|row| row.len() != n) {
            return Err(Error::Shape(format!("alpha must be {n}x{n}")));
        }
        for (g, s) in sigma.iter().enumerate() {
            if !ring.supports(*s) {
                return Err(Error::IncompatibleAutomorphism {
                    spec: format!("{s:?} (sigma[{g}])"),
                    ring: ring.to_string(),
                });
            }
        }
        for v in alpha.iter().flatten() {
            ring.contains(v)?;
        }
        Ok(CrystalDatum {
            ring,
            group,
            sigma,
            alpha,
            samples: Vec::new(),
        })
    }

    /// Builds a datum from closures over group indices.
    pub fn from_fn(
        ring: BaseRing,
        group: Group,
        sigma: impl Fn(usize) -> AutomorphismSpec,
        alpha: impl Fn(usize, usize) -> RingValue,
    ) -> Result<Self> {
        let n = group.order();
        let s = (0..n).map(&sigma).collect();
        let a = (0..n)
            .map(|g| (0..n).map(|h| alpha(g, h)).collect())
            .collect();
        CrystalDatum::new(ring, group, s, a)
    }

    /// The group ring R[G]: σ trivial, α ≡ 1.
    pub fn group_algebra(ring: BaseRing, group: Group) -> Result<Self> {
        let one = ring.one();
        CrystalDatum::from_fn(
            ring,
            group,
            |_| AutomorphismSpec::Identity,
            |_, _| one.clone(),
        )
    }

    /// Extra coefficients used to probe the twisted-commutation law on infinite rings.
    pub fn with_samples(mut self, samples: Vec<RingValue>) -> Result<Self> {
        for s in &samples {
            self.ring.contains(s)?;
        }
        self.samples = samples;
        Ok(self)
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn sigma(&self, g: usize) -> AutomorphismSpec {
        self.sigma[g]
    }

    pub fn sigmas(&self) -> &[AutomorphismSpec] {
        &self.sigma
    }

    pub fn alpha(&self, g: usize, h: usize) -> &RingValue {
        &self.alpha[g][h]
    }

    pub fn alpha_table(&self) -> &[Vec<RingValue>] {
        &self.alpha
    }

    pub fn samples(&self) -> &[RingValue] {
        &self.samples
    }

    /// σ_g(r)
    pub fn act(&self, g: usize, r: &RingValue) -> RingValue {
        self.ring.apply(self.sigma[g], r)
    }

    /// σ_g⁻¹(r)
    pub fn act_inv(&self, g: usize, r: &RingValue) -> RingValue {
        self.ring.apply(self.sigma[g].inverse(), r)
    }

    /// Copy of this datum with a single α entry replaced.
    pub fn with_alpha(&self, g: usize, h: usize, value: RingValue) -> Result<Self> {
        self.group.check_index(g)?;
        self.group.check_index(h)?;
        self.ring.contains(&value)?;
        let mut d = self.clone();
        d.alpha[g][h] = value;
        Ok(d)
    }

    /// Same σ and α over a different (containing) coefficient ring.
    pub(crate) fn with_ring(&self, ring: BaseRing) -> Result<Self> {
        let alpha = self
            .alpha
            .iter()
            .map(|row| row.iter().map(|v| ring.lift(v)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let samples = self
            .samples
            .iter()
            .map(|v| ring.lift(v))
            .collect::<Result<Vec<_>>>()?;
        CrystalDatum::new(ring, self.group.clone(), self.sigma.clone(), alpha)?
            .with_samples(samples)
    }

    /// Coefficients on which the twisted-commutation law is checked: every
    /// element of a finite ring; generators plus declared samples otherwise.
    pub fn probe_values(&self) -> Vec<RingValue> {
        if let Ok(all) = self.ring.enumerate() {
            return all;
        }
        let mut out = self.ring.generators();
        for s in &self.samples {
            if !out.contains(s) {
                out.push(s.clone());
            }
        }
        out
    }

    /// Parses a datum document `{"ring":…, "group":…, "sigma":[…], "alpha":[[…]]}`
    /// with an optional `"samples":[…]` list of coefficient literals.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("datum needs field {k:?}")))
        };
        let ring = BaseRing::from_json(field("ring")?)?;
        let group = Group::from_json(field("group")?)?;
        let sigma = field("sigma")?
            .as_array()
            .ok_or_else(|| Error::Parse("\"sigma\" must be a list".into()))?
            .iter()
            .map(AutomorphismSpec::from_json)
            .collect::<Result<Vec<_>>>()?;
        let alpha = field("alpha")?
            .as_array()
            .ok_or_else(|| Error::Parse("\"alpha\" must be a list of rows".into()))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| Error::Parse("alpha rows must be lists".into()))?
                    .iter()
                    .map(|x| ring.parse_literal(x))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let samples = match v.get("samples") {
            None => Vec::new(),
            Some(s) => s
                .as_array()
                .ok_or_else(|| Error::Parse("\"samples\" must be a list".into()))?
                .iter()
                .map(|x| ring.parse_literal(x))
                .collect::<Result<Vec<_>>>()?,
        };
        CrystalDatum::new(ring, group, sigma, alpha)?.with_samples(samples)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "ring": self.ring.to_json(),
            "group": {"type": "table", "table": self.group.table()},
            "sigma": self.sigma.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
            "alpha": self.alpha.iter()
                .map(|row| row.iter().map(|x| self.ring.to_literal(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        });
        if !self.samples.is_empty() {
            v["samples"] = self
                .samples
                .iter()
                .map(|x| self.ring.to_literal(x))
                .collect();
        }
        v
    }
}

// ---- validation --------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckKind {
    /// σ_e = id
    SigmaIdentity,
    /// α(g,e) = α(e,g) = 1
    Normalization,
    /// α(g,g⁻¹) = σ_g(α(g⁻¹,g))
    InverseSymmetry,
    /// α(g,h)α(gh,t) = σ_g(α(h,t))α(g,ht)
    Cocycle,
    /// σ_g(σ_h(r))α(g,h) = α(g,h)σ_{gh}(r)
    TwistedCommutation,
}

impl CheckKind {
    pub const ALL: [CheckKind; 5] = [
        CheckKind::SigmaIdentity,
        CheckKind::Normalization,
        CheckKind::InverseSymmetry,
        CheckKind::Cocycle,
        CheckKind::TwistedCommutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::SigmaIdentity => "sigma_identity",
            CheckKind::Normalization => "normalization",
            CheckKind::InverseSymmetry => "inverse_symmetry",
            CheckKind::Cocycle => "cocycle",
            CheckKind::TwistedCommutation => "twisted_commutation",
        }
    }
}

/// Where a check failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Element { g: usize },
    Pair { g: usize, h: usize },
    Triple { g: usize, h: usize, t: usize },
    PairValue { g: usize, h: usize, r: RingValue },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Element { g } => write!(f, "g={g}"),
            Witness::Pair { g, h } => write!(f, "(g,h)=({g},{h})"),
            Witness::Triple { g, h, t } => write!(f, "(g,h,t)=({g},{h},{t})"),
            Witness::PairValue { g, h, r } => write!(f, "(g,h)=({g},{h}), r={r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub kind: CheckKind,
    /// Number of instances checked.
    pub instances: usize,
    /// Number of instances that failed.
    pub failures: usize,
    /// The first failing instance in iteration order.
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
    /// All checks pass.
    pub pre_crystalline_consistent: bool,
    /// σ_{gh} = σ_g∘σ_h for all pairs.
    pub centrally_consistent: bool,
    /// Pre-crystalline and every α value regular.
    pub crystalline: bool,
    /// First α(g,h) that is a zero divisor, if any.
    pub irregular_alpha: Option<(usize, usize)>,
}

impl ValidationReport {
    pub fn check(&self, kind: CheckKind) -> &CheckOutcome {
        self.checks
            .iter()
            .find(|c| c.kind == kind)
            .expect("every kind is evaluated")
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

/// Evaluates one instance of a check. `true` means the identity holds there.
pub fn holds_at(d: &CrystalDatum, kind: CheckKind, w: &Witness) -> bool {
    let r = &d.ring;
    let gr = &d.group;
    match (kind, w) {
        (CheckKind::SigmaIdentity, Witness::Element { g }) => {
            *g != 0 || d.sigma[0] == AutomorphismSpec::Identity
        }
        (CheckKind::Normalization, Witness::Element { g }) => {
            let one = r.one();
            d.alpha[*g][0] == one && d.alpha[0][*g] == one
        }
        (CheckKind::InverseSymmetry, Witness::Element { g }) => {
            let gi = gr.inverse(*g);
            d.alpha[*g][gi] == d.act(*g, &d.alpha[gi][*g])
        }
        (CheckKind::Cocycle, Witness::Triple { g, h, t }) => {
            let (g, h, t) = (*g, *h, *t);
            let lhs = r.mul(&d.alpha[g][h], &d.alpha[gr.mul(g, h)][t]);
            let rhs = r.mul(&d.act(g, &d.alpha[h][t]), &d.alpha[g][gr.mul(h, t)]);
            lhs == rhs
        }
        (CheckKind::TwistedCommutation, Witness::PairValue { g, h, r: x }) => {
            let (g, h) = (*g, *h);
            let a = &d.alpha[g][h];
            let lhs = r.mul(&d.act(g, &d.act(h, x)), a);
            let rhs = r.mul(a, &d.act(gr.mul(g, h), x));
            lhs == rhs
        }
        _ => panic!("witness {w:?} does not fit check {kind:?}"),
    }
}

/// True iff the recorded failure reproduces on `d`.
pub fn reverify(d: &CrystalDatum, kind: CheckKind, w: &Witness) -> bool {
    !holds_at(d, kind, w)
}

fn instances(d: &CrystalDatum, kind: CheckKind) -> Vec<Witness> {
    let n = d.order();
    match kind {
        CheckKind::SigmaIdentity => vec![Witness::Element { g: 0 }],
        CheckKind::Normalization | CheckKind::InverseSymmetry => {
            (0..n).map(|g| Witness::Element { g }).collect()
        }
        CheckKind::Cocycle => (0..n)
            .flat_map(|g| {
                (0..n).flat_map(move |h| (0..n).map(move |t| Witness::Triple { g, h, t }))
            })
            .collect(),
        CheckKind::TwistedCommutation => {
            let probes = d.probe_values();
            let mut out = Vec::with_capacity(n * n * probes.len());
            for g in 0..n {
                for h in 0..n {
                    for x in &probes {
                        out.push(Witness::PairValue { g, h, r: x.clone() });
                    }
                }
            }
            out
        }
    }
}

fn run_check(d: &CrystalDatum, kind: CheckKind) -> CheckOutcome {
    let all = instances(d, kind);
    let mut failures = 0;
    let mut witness = None;
    for w in &all {
        if !holds_at(d, kind, w) {
            failures += 1;
            witness.get_or_insert_with(|| w.clone());
        }
    }
    CheckOutcome {
        kind,
        instances: all.len(),
        failures,
        witness,
    }
}

/// Runs every datum-level check. Deterministic: instances are visited in
/// index order and the first failure becomes the witness.
pub fn validate_datum(d: &CrystalDatum) -> ValidationReport {
    let checks: Vec<CheckOutcome> = CheckKind::ALL.iter().map(|&k| run_check(d, k)).collect();
    let pre = checks.iter().all(CheckOutcome::passed);
    let n = d.order();
    let centrally = (0..n).all(|g| {
        (0..n).all(|h| d.sigma[g].compose(d.sigma[h]) == Some(d.sigma[d.group.mul(g, h)]))
    });
    let irregular_alpha = (0..n)
        .flat_map(|g| (0..n).map(move |h| (g, h)))
        .find(|&(g, h)| !d.ring.is_regular(&d.alpha[g][h]));
    ValidationReport {
        checks,
        pre_crystalline_consistent: pre,
        centrally_consistent: centrally,
        crystalline: pre && irregular_alpha.is_none(),
        irregular_alpha,
    }
}

// ---- torsion profile ------------------------------------------------------

/// A coefficient `r ≠ 0` killed by the map named in the condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionWitness {
    pub g: usize,
    pub h: Option<usize>,
    pub r: RingValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionStatus {
    pub passed: bool,
    pub witness: Option<TorsionWitness>,
}

impl ConditionStatus {
    fn from_witness(witness: Option<TorsionWitness>) -> Self {
        ConditionStatus {
            passed: witness.is_none(),
            witness,
        }
    }
}

/// The four checkable torsion-freeness conditions, each decided on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionProfile {
    /// α(g,g⁻¹)r = 0 ⇒ r = 0
    pub condition3: ConditionStatus,
    /// α(g,h)r = 0 ⇒ r = 0
    pub condition4: ConditionStatus,
    /// u_g r = 0 ⇒ r = 0, i.e. σ_g injective
    pub condition5: ConditionStatus,
    /// every σ_g bijective
    pub condition6: ConditionStatus,
    /// All four conditions have the same status.
    pub agreement: bool,
}

/// A nonzero `r` with `σ_g(r) = 0`, or a generator on which `σ_g⁻¹∘σ_g` is not the identity.
fn sigma_kernel_witness(d: &CrystalDatum, g: usize) -> Option<RingValue> {
    let ring = &d.ring;
    match ring.enumerate() {
        Ok(all) => all
            .into_iter()
            .find(|x| !ring.is_zero(x) && ring.is_zero(&d.act(g, x))),
        Err(_) => d
            .probe_values()
            .into_iter()
            .find(|x| d.act_inv(g, &d.act(g, x)) != *x),
    }
}

fn sigma_bijective_witness(d: &CrystalDatum, g: usize) -> Option<RingValue> {
    let ring = &d.ring;
    match ring.enumerate() {
        Ok(all) => {
            let image: HashSet<RingValue> = all.iter().map(|x| d.act(g, x)).collect();
            if image.len() == all.len() {
                None
            } else {
                all.into_iter().find(|x| !image.contains(x))
            }
        }
        Err(_) => d
            .probe_values()
            .into_iter()
            .find(|x| d.act_inv(g, &d.act(g, x)) != *x || d.act(g, &d.act_inv(g, x)) != *x),
    }
}

/// Decides conditions (3)–(6) independently and reports whether they agree.
///
/// Requires the datum to pass the pre-crystalline checks. Every supported
/// ring is finite or a domain, so each condition is decidable.
pub fn torsion_profile(d: &CrystalDatum) -> Result<TorsionProfile> {
    let report = validate_datum(d);
    if !report.pre_crystalline_consistent {
        let failed: Vec<_> = report.failed().map(|c| c.kind.name()).collect();
        return Err(Error::NotPreCrystalline(failed.join(", ")));
    }
    let ring = &d.ring;
    let n = d.order();

    let c3 = (0..n).find_map(|g| {
        let gi = d.group.inverse(g);
        ring.zero_divisor_partner(&d.alpha[g][gi])
            .map(|r| TorsionWitness { g, h: Some(gi), r })
    });
    let c4 = (0..n)
        .flat_map(|g| (0..n).map(move |h| (g, h)))
        .find_map(|(g, h)| {
            ring.zero_divisor_partner(&d.alpha[g][h])
                .map(|r| TorsionWitness { g, h: Some(h), r })
        });
    let c5 =
        (0..n).find_map(|g| sigma_kernel_witness(d, g).map(|r| TorsionWitness { g, h: None, r }));
    let c6 = (0..n)
        .find_map(|g| sigma_bijective_witness(d, g).map(|r| TorsionWitness { g, h: None, r }));

    let condition3 = ConditionStatus::from_witness(c3);
    let condition4 = ConditionStatus::from_witness(c4);
    let condition5 = ConditionStatus::from_witness(c5);
    let condition6 = ConditionStatus::from_witness(c6);
    let s = condition3.passed;
    let agreement = condition4.passed == s && condition5.passed == s && condition6.passed == s;
    Ok(TorsionProfile {
        condition3,
        condition4,
        condition5,
        condition6,
        agreement,
    })
}

// ---- corruption survey ----------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptedEntry {
    pub g: usize,
    pub h: usize,
    pub value: RingValue,
    pub rejected: bool,
    /// Every failing check's witness reproduced on the corrupted datum.
    pub witnesses_reverified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionSurvey {
    pub trials: usize,
    pub rejected: usize,
    pub reverified: usize,
    pub entries: Vec<CorruptedEntry>,
}

/// Replaces one random α entry at a time with a different ring value and
/// records whether [`validate_datum`] rejects the result.
pub fn corruption_survey(d: &CrystalDatum, seed: u64, trials: usize) -> CorruptionSurvey {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = d.order();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|g| (0..n).map(move |h| (g, h))).collect();
    let finite = d.ring.enumerate().ok();
    let mut entries = Vec::with_capacity(trials);
    for _ in 0..trials {
        let &(g, h) = cells.choose(&mut rng).expect("group is nonempty");
        let current = &d.alpha[g][h];
        let value = match &finite {
            Some(all) if all.len() > 1 => {
                let others: Vec<_> = all.iter().filter(|x| *x != current).collect();
                (*others.choose(&mut rng).unwrap()).clone()
            }
            _ => loop {
                let v = d.ring.random_value(&mut rng, 5);
                if v != *current {
                    break v;
                }
            },
        };
        let corrupted = d
            .with_alpha(g, h, value.clone())
            .expect("value from the ring");
        let report = validate_datum(&corrupted);
        let rejected = !report.pre_crystalline_consistent;
        let witnesses_reverified = report.failed().all(|c| {
            c.witness
                .as_ref()
                .is_some_and(|w| reverify(&corrupted, c.kind, w))
        });
        entries.push(CorruptedEntry {
            g,
            h,
            value,
            rejected,
            witnesses_reverified,
        });
    }
    CorruptionSurvey {
        trials,
        rejected: entries.iter().filter(|e| e.rejected).count(),
        reverified: entries
            .iter()
            .filter(|e| e.rejected && e.witnesses_reverified)
            .count(),
        entries,
    }
}
