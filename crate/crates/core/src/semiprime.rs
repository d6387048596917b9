//! Exhaustive semiprimeness tests for finite graded rings.
//!
//! A is semiprime iff it has no nonzero nilpotent ideal, iff `x·A·x = 0`
//! forces `x = 0`. Since `a ↦ x·a·x` is additive, it is enough to test `a`
//! on the monomials `r·u_g` with r running over additive generators of R.

use crate::datum::CrystalDatum;
use crate::error::{Error, Result};
use crate::graded::{GradedElement, GradedRing, DEFAULT_MAX_ELEMENTS};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiprimeVerdict {
    pub semiprime: bool,
    /// Nonzero x with `x·A·x = 0`; present iff not semiprime.
    pub witness: Option<GradedElement>,
    pub method: &'static str,
    /// char R does not divide |G|.
    pub characteristic_coprime: bool,
}

fn finite_ring(d: &CrystalDatum, limit: u128) -> Result<GradedRing> {
    let a = GradedRing::new(d.clone())?;
    let size = a
        .size()
        .ok_or_else(|| Error::InfiniteRing(d.ring().to_string()))?;
    if size > limit {
        return Err(Error::SizeCap {
            what: "|A|",
            size,
            limit,
        });
    }
    Ok(a)
}

/// Monomials `r·u_g` whose additive span is A.
fn additive_spanning_set(a: &GradedRing) -> Result<Vec<GradedElement>> {
    let gens = a.coefficients().additive_generators()?;
    Ok((0..a.order())
        .flat_map(|g| gens.iter().map(move |r| (g, r)))
        .map(|(g, r)| a.monomial(r.clone(), g))
        .collect())
}

/// True iff `x·a·x = 0` for every a in A.
pub fn kills_sandwich(a: &GradedRing, x: &GradedElement) -> Result<bool> {
    let span = additive_spanning_set(a)?;
    Ok(span.iter().all(|m| a.mul(&a.mul(x, m), x).is_zero()))
}

/// Whether char R divides |G| (0 never counts as dividing).
pub fn characteristic_coprime(d: &CrystalDatum) -> bool {
    let c = d.ring().characteristic();
    c == 0 || !(d.order() as u64).is_multiple_of(c)
}

pub fn is_semiprime_finite(d: &CrystalDatum) -> Result<SemiprimeVerdict> {
    is_semiprime_capped(d, DEFAULT_MAX_ELEMENTS)
}

/// Exhaustive verdict; candidates are visited simplest first
/// (see [`GradedRing::nonzero_elements_by_support`]).
pub fn is_semiprime_capped(d: &CrystalDatum, limit: u128) -> Result<SemiprimeVerdict> {
    let a = finite_ring(d, limit)?;
    let span = additive_spanning_set(&a)?;
    let witness = a
        .nonzero_elements_by_support(limit)?
        .into_iter()
        .find(|x| span.iter().all(|m| a.mul(&a.mul(x, m), x).is_zero()));
    Ok(SemiprimeVerdict {
        semiprime: witness.is_none(),
        witness,
        method: "exhaustive",
        characteristic_coprime: characteristic_coprime(d),
    })
}

/// True iff `x^k = 0` for some k.
///
/// In a ring of N elements the nilpotency index is at most N, so it suffices
/// to square until the exponent passes N.
pub fn is_nilpotent(a: &GradedRing, x: &GradedElement, size: u128) -> bool {
    let mut p = x.clone();
    let mut exp: u128 = 1;
    loop {
        if p.is_zero() {
            return true;
        }
        if exp >= size {
            return false;
        }
        p = a.mul(&p, &p);
        exp *= 2;
    }
}

pub fn nilpotent_witness(d: &CrystalDatum) -> Result<Option<GradedElement>> {
    nilpotent_witness_capped(d, DEFAULT_MAX_ELEMENTS)
}

/// The first nonzero nilpotent element in simplest-first order.
pub fn nilpotent_witness_capped(d: &CrystalDatum, limit: u128) -> Result<Option<GradedElement>> {
    let a = finite_ring(d, limit)?;
    let size = a.size().expect("finite");
    Ok(a.nonzero_elements_by_support(limit)?
        .into_iter()
        .find(|x| is_nilpotent(&a, x, size)))
}
