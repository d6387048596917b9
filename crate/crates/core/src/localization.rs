//! Passing from R to its field of fractions, and the Ore condition for the
//! regular elements of R inside A.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::datum::{validate_datum, CrystalDatum};
use crate::error::{Error, Result};
use crate::graded::{GradedElement, GradedRing, DEFAULT_MAX_ELEMENTS};
use crate::ring::{BaseRing, RingValue};

/// A datum whose coefficient ring has been replaced by its field of fractions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedDatum {
    original: CrystalDatum,
    lifted: CrystalDatum,
}

impl LocalizedDatum {
    pub fn original(&self) -> &CrystalDatum {
        &self.original
    }

    pub fn datum(&self) -> &CrystalDatum {
        &self.lifted
    }

    pub fn into_datum(self) -> CrystalDatum {
        self.lifted
    }

    /// Image of a coefficient of the original ring.
    pub fn embed(&self, v: &RingValue) -> Result<RingValue> {
        self.original.ring().contains(v)?;
        self.lifted.ring().lift(v)
    }

    /// Image of an element of the original graded ring.
    pub fn embed_element(&self, x: &GradedElement) -> Result<GradedElement> {
        let k = GradedRing::new(self.lifted.clone())?;
        let terms = x
            .terms()
            .map(|(g, a)| Ok((g, self.embed(a)?)))
            .collect::<Result<Vec<_>>>()?;
        k.element(terms)
    }
}

/// Lifts σ and α unchanged to Frac(R): ℤ → ℚ, ℤ[ω] → ℚ(ω).
pub fn to_fraction_field(d: &CrystalDatum) -> Result<LocalizedDatum> {
    if !d.ring().is_domain() {
        return Err(Error::NotDomain(d.ring().to_string()));
    }
    let k = d.ring().fraction_field()?;
    Ok(LocalizedDatum {
        original: d.clone(),
        lifted: d.with_ring(k)?,
    })
}

/// A nonzero common left multiple: some `s` with `s ∈ R·s_i` for every i.
///
/// ℤ gives the least common multiple, ℚ the rational lcm
/// (lcm of numerators over gcd of denominators), ℤ[ω] the product.
pub fn common_multiple(ring: &BaseRing, s: &[RingValue]) -> Result<RingValue> {
    if s.is_empty() {
        return Err(Error::ZeroInput("common multiple of an empty list".into()));
    }
    if !ring.is_domain() || ring.is_finite() {
        return Err(Error::NotDomain(format!(
            "{ring} (common multiples need an infinite domain)"
        )));
    }
    for x in s {
        ring.contains(x)?;
        if ring.is_zero(x) {
            return Err(Error::ZeroInput("common multiple of zero".into()));
        }
    }
    let m = match ring {
        BaseRing::Integer => {
            let l = s.iter().fold(BigInt::one(), |acc, x| match x {
                RingValue::Integer(v) => acc.lcm(v),
                _ => unreachable!("checked above"),
            });
            RingValue::Integer(l)
        }
        BaseRing::Rational => {
            let (num, den) = s
                .iter()
                .fold((BigInt::one(), BigInt::from(0)), |(n, d), x| match x {
                    RingValue::Rational(q) => (n.lcm(q.numer()), d.gcd(q.denom())),
                    _ => unreachable!("checked above"),
                });
            RingValue::Rational(BigRational::new(num, den))
        }
        _ => ring.product(s),
    };
    for x in s {
        if ring.divide_exact(&m, x).is_none() {
            return Err(Error::Internal(format!("{m} is not a multiple of {x}")));
        }
    }
    Ok(m)
}

/// Output of [`ore_witness`]: `s'·r = r'·s` (left) or `r·s' = s·r'` (right).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OreWitness {
    pub r_prime: GradedElement,
    pub s_prime: RingValue,
}

fn ore_ring(d: &CrystalDatum, r: &GradedElement, s: &RingValue) -> Result<GradedRing> {
    if !d.ring().is_domain() {
        return Err(Error::NotDomain(d.ring().to_string()));
    }
    let a = GradedRing::new(d.clone())?;
    a.check_element(r)?;
    d.ring().contains(s)?;
    if d.ring().is_zero(s) {
        return Err(Error::ZeroInput("Ore denominator s".into()));
    }
    Ok(a)
}

/// Left Ore witness: `s' = Π_g σ_g(s)` and `r' = Σ b_g u_g` with
/// `b_g = a_g·Π_{h≠g} σ_h(s)`, so that `b_g σ_g(s) = s' a_g`.
/// The equation `s'·r = r'·s` is checked before returning.
pub fn ore_witness(d: &CrystalDatum, r: &GradedElement, s: &RingValue) -> Result<OreWitness> {
    let a = ore_ring(d, r, s)?;
    let ring = d.ring();
    let n = d.order();
    let conjugates: Vec<RingValue> = (0..n).map(|g| d.act(g, s)).collect();
    let s_prime = ring.product(&conjugates);
    let r_prime = a.element(r.terms().map(|(g, a_g)| {
        let others = conjugates
            .iter()
            .enumerate()
            .filter(|(h, _)| *h != g)
            .map(|(_, c)| c);
        (g, ring.mul(a_g, &ring.product(others)))
    }))?;
    let lhs = a.mul(&a.scalar(s_prime.clone()), r);
    let rhs = a.mul(&r_prime, &a.scalar(s.clone()));
    if lhs != rhs {
        return Err(Error::Internal("left Ore witness failed to verify".into()));
    }
    Ok(OreWitness { r_prime, s_prime })
}

/// Right Ore witness, mirrored: `s' = Π_h σ_h⁻¹(s)` and
/// `b_g = a_g·Π_{h≠g} σ_g(σ_h⁻¹(s))`, so that `r·s' = s·r'`.
pub fn right_ore_witness(d: &CrystalDatum, r: &GradedElement, s: &RingValue) -> Result<OreWitness> {
    let a = ore_ring(d, r, s)?;
    let ring = d.ring();
    let n = d.order();
    let pulled: Vec<RingValue> = (0..n).map(|h| d.act_inv(h, s)).collect();
    let s_prime = ring.product(&pulled);
    let r_prime = a.element(r.terms().map(|(g, a_g)| {
        let others = pulled
            .iter()
            .enumerate()
            .filter(|(h, _)| *h != g)
            .map(|(_, c)| d.act(g, c));
        let others: Vec<_> = others.collect();
        (g, ring.mul(a_g, &ring.product(&others)))
    }))?;
    let lhs = a.mul(r, &a.scalar(s_prime.clone()));
    let rhs = a.mul(&a.scalar(s.clone()), &r_prime);
    if lhs != rhs {
        return Err(Error::Internal("right Ore witness failed to verify".into()));
    }
    Ok(OreWitness { r_prime, s_prime })
}

/// Whether `a ∈ R` is a non-zero-divisor of A, with a nonzero `x` such that
/// `a·x = 0` or `x·a = 0` when it is not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub regular: bool,
    pub witness: Option<GradedElement>,
}

/// Finite A is searched exhaustively in [`GradedRing::elements`] order; over a
/// domain, `a` is regular in A iff `a ≠ 0` (A is free over R and σ_g injective).
pub fn is_regular_in_a(d: &CrystalDatum, a: &RingValue) -> Result<RegularityVerdict> {
    is_regular_in_a_capped(d, a, DEFAULT_MAX_ELEMENTS)
}

pub fn is_regular_in_a_capped(
    d: &CrystalDatum,
    a: &RingValue,
    limit: u128,
) -> Result<RegularityVerdict> {
    let ring = GradedRing::new(d.clone())?;
    d.ring().contains(a)?;
    let scalar = ring.scalar(a.clone());
    if d.ring().is_finite() {
        let witness = ring
            .elements(limit)?
            .into_iter()
            .filter(|x| !x.is_zero())
            .find(|x| ring.mul(&scalar, x).is_zero() || ring.mul(x, &scalar).is_zero());
        Ok(RegularityVerdict {
            regular: witness.is_none(),
            witness,
        })
    } else if d.ring().is_domain() {
        let witness = d.ring().is_zero(a).then(|| ring.one());
        Ok(RegularityVerdict {
            regular: witness.is_none(),
            witness,
        })
    } else {
        Err(Error::Unsupported(format!(
            "regularity in A over {} is undecidable",
            d.ring()
        )))
    }
}

/// Checks the inclusion reg R ⊆ reg A over every element of a finite ring.
/// Returns the ring-regular elements that fail to be A-regular.
pub fn regular_inclusion_failures(d: &CrystalDatum) -> Result<Vec<RingValue>> {
    let report = validate_datum(d);
    if !report.pre_crystalline_consistent {
        return Err(Error::NotPreCrystalline("datum".into()));
    }
    let mut bad = Vec::new();
    for a in d.ring().enumerate()? {
        if d.ring().is_regular(&a) && !is_regular_in_a(d, &a)?.regular {
            bad.push(a);
        }
    }
    Ok(bad)
}
