//! Arithmetic in the graded ring A = ⊕_g R u_g.
//!
//! Elements are sparse maps from group index to nonzero coefficient, so two
//! elements are equal exactly when their maps are. The product of monomials is
//! `(a u_g)(b u_h) = a σ_g(b) α(g,h) u_{gh}`.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::Value;

use crate::datum::{validate_datum, CrystalDatum, ValidationReport};
use crate::error::{Error, Result};
use crate::ring::{BaseRing, RingValue};

/// Enumerating A is refused above this many elements unless the caller raises it.
pub const DEFAULT_MAX_ELEMENTS: u128 = 4096;

/// `Σ a_g u_g` with every stored `a_g` nonzero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GradedElement {
    terms: BTreeMap<usize, RingValue>,
}

impl GradedElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(g, a_g)` for the nonzero components, in index order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &RingValue)> {
        self.terms.iter().map(|(g, a)| (*g, a))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn coefficient(&self, g: usize) -> Option<&RingValue> {
        self.terms.get(&g)
    }
}

/// A validated datum viewed as the ring it defines.
#[derive(Debug, Clone)]
pub struct GradedRing {
    datum: CrystalDatum,
    report: ValidationReport,
}

impl GradedRing {
    /// Fails unless the datum passes every pre-crystalline check; products
    /// are only associative when it does.
    pub fn new(datum: CrystalDatum) -> Result<Self> {
        let report = validate_datum(&datum);
        if !report.pre_crystalline_consistent {
            let failed: Vec<_> = report
                .failed()
                .map(|c| match &c.witness {
                    Some(w) => format!("{} at {w}", c.kind.name()),
                    None => c.kind.name().to_string(),
                })
                .collect();
            return Err(Error::NotPreCrystalline(failed.join("; ")));
        }
        Ok(GradedRing { datum, report })
    }

    pub fn datum(&self) -> &CrystalDatum {
        &self.datum
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn coefficients(&self) -> &BaseRing {
        self.datum.ring()
    }

    pub fn order(&self) -> usize {
        self.datum.order()
    }

    /// Builds `Σ a_g u_g`, summing repeated indices and dropping zeros.
    pub fn element<I>(&self, terms: I) -> Result<GradedElement>
    where
        I: IntoIterator<Item = (usize, RingValue)>,
    {
        let ring = self.coefficients();
        let mut out = GradedElement::zero();
        for (g, a) in terms {
            self.datum.group().check_index(g)?;
            ring.contains(&a)?;
            self.add_term(&mut out, g, &a);
        }
        Ok(out)
    }

    fn add_term(&self, x: &mut GradedElement, g: usize, a: &RingValue) {
        let ring = self.coefficients();
        if ring.is_zero(a) {
            return;
        }
        let sum = match x.terms.get(&g) {
            Some(b) => ring.add(b, a),
            None => a.clone(),
        };
        if ring.is_zero(&sum) {
            x.terms.remove(&g);
        } else {
            x.terms.insert(g, sum);
        }
    }

    /// `a·u_g`
    pub fn monomial(&self, a: RingValue, g: usize) -> GradedElement {
        let mut x = GradedElement::zero();
        self.add_term(&mut x, g, &a);
        x
    }

    /// `1·u_g`
    pub fn basis(&self, g: usize) -> GradedElement {
        self.monomial(self.coefficients().one(), g)
    }

    /// `r·u_e`
    pub fn scalar(&self, r: RingValue) -> GradedElement {
        self.monomial(r, 0)
    }

    pub fn one(&self) -> GradedElement {
        self.basis(0)
    }

    /// Checks that `x` could have come from this ring.
    pub fn check_element(&self, x: &GradedElement) -> Result<()> {
        let ring = self.coefficients();
        for (g, a) in x.terms() {
            if g >= self.order() {
                return Err(Error::DatumMismatch(format!(
                    "index {g} outside group of order {}",
                    self.order()
                )));
            }
            ring.contains(a)
                .map_err(|e| Error::DatumMismatch(e.to_string()))?;
            if ring.is_zero(a) {
                return Err(Error::DatumMismatch(format!(
                    "stored zero coefficient at {g}"
                )));
            }
        }
        Ok(())
    }

    pub fn add(&self, x: &GradedElement, y: &GradedElement) -> GradedElement {
        let mut out = x.clone();
        for (g, b) in y.terms() {
            self.add_term(&mut out, g, b);
        }
        out
    }

    pub fn neg(&self, x: &GradedElement) -> GradedElement {
        let ring = self.coefficients();
        GradedElement {
            terms: x.terms.iter().map(|(g, a)| (*g, ring.neg(a))).collect(),
        }
    }

    pub fn sub(&self, x: &GradedElement, y: &GradedElement) -> GradedElement {
        self.add(x, &self.neg(y))
    }

    /// Product in A. Inputs are assumed to belong to this ring; see [`GradedRing::try_mul`].
    pub fn mul(&self, x: &GradedElement, y: &GradedElement) -> GradedElement {
        let ring = self.coefficients();
        let d = &self.datum;
        let mut out = GradedElement::zero();
        for (g, a) in x.terms() {
            for (h, b) in y.terms() {
                let c = ring.mul(&ring.mul(a, &d.act(g, b)), d.alpha(g, h));
                self.add_term(&mut out, d.group().mul(g, h), &c);
            }
        }
        out
    }

    pub fn try_add(&self, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.add(x, y))
    }

    pub fn try_mul(&self, x: &GradedElement, y: &GradedElement) -> Result<GradedElement> {
        self.check_element(x)?;
        self.check_element(y)?;
        Ok(self.mul(x, y))
    }

    /// Coefficient of `u_g` in `x`.
    pub fn homogeneous_component(&self, x: &GradedElement, g: usize) -> Result<RingValue> {
        self.datum.group().check_index(g)?;
        Ok(x.coefficient(g)
            .cloned()
            .unwrap_or_else(|| self.coefficients().zero()))
    }

    pub fn pow(&self, x: &GradedElement, mut k: u64) -> GradedElement {
        let mut base = x.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }

    /// |A| = |R|^|G| for finite R.
    pub fn size(&self) -> Option<u128> {
        let r = self.coefficients().size()?;
        r.checked_pow(self.order() as u32)
    }

    fn checked_size(&self, limit: u128) -> Result<u128> {
        let size = self
            .size()
            .ok_or_else(|| Error::InfiniteRing(self.coefficients().to_string()))?;
        if size > limit {
            return Err(Error::SizeCap {
                what: "|A|",
                size,
                limit,
            });
        }
        Ok(size)
    }

    /// Every element of a finite A, ordered lexicographically by the
    /// coefficient vector (a_0, a_1, …) with a_0 most significant and
    /// coefficients in [`BaseRing::enumerate`] order.
    pub fn elements(&self, limit: u128) -> Result<Vec<GradedElement>> {
        let size = self.checked_size(limit)?;
        let values = self.coefficients().enumerate()?;
        let n = self.order();
        let k = values.len();
        let mut digits = vec![0usize; n];
        let mut out = Vec::with_capacity(size as usize);
        for _ in 0..size {
            let mut x = GradedElement::zero();
            for (g, &i) in digits.iter().enumerate() {
                self.add_term(&mut x, g, &values[i]);
            }
            out.push(x);
            for pos in (0..n).rev() {
                digits[pos] += 1;
                if digits[pos] < k {
                    break;
                }
                digits[pos] = 0;
            }
        }
        Ok(out)
    }

    /// Nonzero elements of a finite A, simplest first: by support size, then
    /// support (as an index list) lexicographically, then coefficients in
    /// enumeration order.
    pub fn nonzero_elements_by_support(&self, limit: u128) -> Result<Vec<GradedElement>> {
        let size = self.checked_size(limit)?;
        let nonzero: Vec<RingValue> = self
            .coefficients()
            .enumerate()?
            .into_iter()
            .filter(|v| !self.coefficients().is_zero(v))
            .collect();
        let n = self.order();
        let mut supports: Vec<Vec<usize>> = (1u64..(1u64 << n))
            .map(|mask| (0..n).filter(|g| (mask >> g) & 1 == 1).collect())
            .collect();
        supports.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut out = Vec::with_capacity(size as usize);
        for support in supports {
            let mut digits = vec![0usize; support.len()];
            'odometer: loop {
                let terms = support
                    .iter()
                    .zip(&digits)
                    .map(|(&g, &i)| (g, nonzero[i].clone()))
                    .collect();
                out.push(GradedElement { terms });
                for pos in (0..digits.len()).rev() {
                    digits[pos] += 1;
                    if digits[pos] < nonzero.len() {
                        continue 'odometer;
                    }
                    digits[pos] = 0;
                }
                break;
            }
        }
        Ok(out)
    }

    pub fn random_element<G: Rng + ?Sized>(&self, rng: &mut G, bound: i64) -> GradedElement {
        let mut x = GradedElement::zero();
        for g in 0..self.order() {
            let a = self.coefficients().random_value(rng, bound);
            self.add_term(&mut x, g, &a);
        }
        x
    }

    /// Multiplicative inverse of `u_g` inside this ring, `α(g⁻¹,g)⁻¹ u_{g⁻¹}`.
    ///
    /// Requires α(g⁻¹,g) to be a unit of the coefficient ring; lift to the
    /// fraction field first otherwise (see [`basis_inverse`]).
    pub fn basis_inverse(&self, g: usize) -> Result<GradedElement> {
        self.datum.group().check_index(g)?;
        let gi = self.datum.group().inverse(g);
        let a = self.datum.alpha(gi, g);
        let c = self.coefficients().try_invert(a).ok_or_else(|| {
            Error::Unsupported(format!(
                "α({gi},{g}) = {a} is not a unit in {}",
                self.coefficients()
            ))
        })?;
        let v = self.monomial(c, gi);
        let u = self.basis(g);
        if self.mul(&u, &v) != self.one() || self.mul(&v, &u) != self.one() {
            return Err(Error::Internal(format!(
                "basis inverse of u_{g} failed to verify"
            )));
        }
        Ok(v)
    }

    /// Decodes `[[g, literal], …]`.
    pub fn parse_element(&self, v: &Value) -> Result<GradedElement> {
        let items = v.as_array().ok_or_else(|| {
            Error::Parse(format!(
                "graded element must be a list of [g, value], got {v}"
            ))
        })?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let pair = item
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse(format!("expected [g, value], got {item}")))?;
            let g = pair[0].as_u64().ok_or_else(|| {
                Error::Parse(format!("group index must be an integer, got {}", pair[0]))
            })?;
            terms.push((g as usize, self.coefficients().parse_literal(&pair[1])?));
        }
        self.element(terms)
    }

    pub fn element_literal(&self, x: &GradedElement) -> Value {
        Value::Array(
            x.terms()
                .map(|(g, a)| Value::Array(vec![Value::from(g), self.coefficients().to_literal(a)]))
                .collect(),
        )
    }
}

/// Inverse of `u_g`, computed over R when α(g⁻¹,g) is a unit there and over
/// the fraction field of a domain R otherwise. Returns the ring it lives in.
pub fn basis_inverse(d: &CrystalDatum, g: usize) -> Result<(GradedRing, GradedElement)> {
    let report = validate_datum(d);
    if !report.crystalline {
        return Err(Error::NotCrystalline(match report.irregular_alpha {
            Some((a, b)) => format!("α({a},{b}) is a zero divisor"),
            None => "pre-crystalline checks fail".into(),
        }));
    }
    d.group().check_index(g)?;
    let gi = d.group().inverse(g);
    let ring = if d.ring().try_invert(d.alpha(gi, g)).is_some() {
        GradedRing::new(d.clone())?
    } else {
        GradedRing::new(crate::localization::to_fraction_field(d)?.into_datum())?
    };
    let v = ring.basis_inverse(g)?;
    Ok((ring, v))
}

// ---- inverse identities ------------------------------------------------------

/// One of the identities relating σ, α and the inverses of the u_g.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseIdentity {
    /// u_g⁻¹ = u_{g⁻¹} α(g,g⁻¹)⁻¹ = α(g⁻¹,g)⁻¹ u_{g⁻¹}
    BasisInverse,
    /// σ_g⁻¹(x) u_g⁻¹ = u_g⁻¹ x
    InverseCommutation,
    /// σ_{hg}⁻¹(α(h,g)) = σ_g⁻¹(σ_h⁻¹(α(h,g)))
    TwistedInverse,
    /// σ_g⁻¹(α(g,g⁻¹h)) = α(g⁻¹,h)⁻¹ σ_g⁻¹(α(g,g⁻¹))
    ShiftedCocycle,
}

impl InverseIdentity {
    pub fn name(self) -> &'static str {
        match self {
            InverseIdentity::BasisInverse => "basis_inverse",
            InverseIdentity::InverseCommutation => "inverse_commutation",
            InverseIdentity::TwistedInverse => "twisted_inverse",
            InverseIdentity::ShiftedCocycle => "shifted_cocycle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityWitness {
    pub g: usize,
    pub h: Option<usize>,
    pub x: Option<RingValue>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityOutcome {
    pub identity: InverseIdentity,
    pub instances: usize,
    pub failures: usize,
    pub witness: Option<IdentityWitness>,
}

impl IdentityOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseIdentityReport {
    pub outcomes: Vec<IdentityOutcome>,
}

impl InverseIdentityReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(IdentityOutcome::passed)
    }

    pub fn outcome(&self, id: InverseIdentity) -> &IdentityOutcome {
        self.outcomes
            .iter()
            .find(|o| o.identity == id)
            .expect("all identities evaluated")
    }
}

struct Tally {
    identity: InverseIdentity,
    instances: usize,
    failures: usize,
    witness: Option<IdentityWitness>,
}

impl Tally {
    fn new(identity: InverseIdentity) -> Self {
        Tally {
            identity,
            instances: 0,
            failures: 0,
            witness: None,
        }
    }

    fn record(&mut self, ok: bool, w: impl FnOnce() -> IdentityWitness) {
        self.instances += 1;
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(w());
            }
        }
    }

    fn finish(self) -> IdentityOutcome {
        IdentityOutcome {
            identity: self.identity,
            instances: self.instances,
            failures: self.failures,
            witness: self.witness,
        }
    }
}

/// Evaluates both sides of each inverse identity over the fraction field,
/// for every g, h in G and every sample coefficient x.
pub fn check_inverse_identities(
    d: &CrystalDatum,
    samples: &[RingValue],
) -> Result<InverseIdentityReport> {
    if !d.ring().is_domain() {
        return Err(Error::NotDomain(d.ring().to_string()));
    }
    let report = validate_datum(d);
    if !report.crystalline {
        return Err(Error::NotCrystalline(format!(
            "{:?}",
            report.irregular_alpha
        )));
    }
    for s in samples {
        d.ring().contains(s)?;
    }
    let local = crate::localization::to_fraction_field(d)?;
    let a = GradedRing::new(local.into_datum())?;
    let k = a.coefficients().clone();
    let kd = a.datum();
    let group = kd.group();
    let n = a.order();
    let samples: Vec<RingValue> = samples.iter().map(|s| k.lift(s)).collect::<Result<_>>()?;
    let inv = |x: &RingValue| {
        k.try_invert(x)
            .ok_or_else(|| Error::Internal(format!("{x} not invertible in {k}")))
    };

    let inverses: Vec<GradedElement> = (0..n).map(|g| a.basis_inverse(g)).collect::<Result<_>>()?;

    let mut t1 = Tally::new(InverseIdentity::BasisInverse);
    for (g, expected) in inverses.iter().enumerate() {
        let gi = group.inverse(g);
        let right_form = a.mul(&a.basis(gi), &a.scalar(inv(kd.alpha(g, gi))?));
        let left_form = a.monomial(inv(kd.alpha(gi, g))?, gi);
        let u = a.basis(g);
        let ok = right_form == left_form
            && a.mul(&u, &left_form) == a.one()
            && a.mul(&left_form, &u) == a.one()
            && left_form == *expected;
        t1.record(ok, || IdentityWitness {
            g,
            h: None,
            x: None,
        });
    }

    let mut t2 = Tally::new(InverseIdentity::InverseCommutation);
    for (g, ug_inv) in inverses.iter().enumerate() {
        for x in &samples {
            let lhs = a.mul(&a.scalar(kd.act_inv(g, x)), ug_inv);
            let rhs = a.mul(ug_inv, &a.scalar(x.clone()));
            t2.record(lhs == rhs, || IdentityWitness {
                g,
                h: None,
                x: Some(x.clone()),
            });
        }
    }

    let mut t3 = Tally::new(InverseIdentity::TwistedInverse);
    for h in 0..n {
        for g in 0..n {
            let v = kd.alpha(h, g);
            let lhs = kd.act_inv(group.mul(h, g), v);
            let rhs = kd.act_inv(g, &kd.act_inv(h, v));
            t3.record(lhs == rhs, || IdentityWitness {
                g,
                h: Some(h),
                x: None,
            });
        }
    }

    let mut t4 = Tally::new(InverseIdentity::ShiftedCocycle);
    for g in 0..n {
        let gi = group.inverse(g);
        for h in 0..n {
            let lhs = kd.act_inv(g, kd.alpha(g, group.mul(gi, h)));
            let rhs = k.mul(&inv(kd.alpha(gi, h))?, &kd.act_inv(g, kd.alpha(g, gi)));
            t4.record(lhs == rhs, || IdentityWitness {
                g,
                h: Some(h),
                x: None,
            });
        }
    }

    Ok(InverseIdentityReport {
        outcomes: vec![t1.finish(), t2.finish(), t3.finish(), t4.finish()],
    })
}
