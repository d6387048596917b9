//! Exact commutative coefficient rings.
//!
//! A [`BaseRing`] is a descriptor; values are plain [`RingValue`]s and all
//! arithmetic goes through the descriptor so that residues are reduced with
//! the right modulus. Every value has exactly one representation, so `==` on
//! `RingValue` is equality in the ring.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::Value;

use crate::error::{Error, Result};

/// Coefficients allowed for the `a + bω` components of a quadratic ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuadraticBase {
    Integer,
    Rational,
}

/// Descriptor of a commutative coefficient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integer,
    Rational,
    /// ℤ/nℤ with n ≥ 2.
    Modular(u64),
    /// ℤ[ω] or ℚ(ω) with ω² = d, d square-free and not 0 or 1.
    Quadratic {
        d: i64,
        base: QuadraticBase,
    },
    /// F_p × F_p with componentwise operations.
    PairProduct(u64),
}

/// An element of some [`BaseRing`], always in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingValue {
    Integer(BigInt),
    Rational(BigRational),
    Modular(u64),
    /// `a + bω`; both components are integers when the base is ℤ.
    Quadratic(BigRational, BigRational),
    Pair(u64, u64),
}

/// The ring automorphisms a datum may use for σ_g.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AutomorphismSpec {
    Identity,
    /// a + bω ↦ a − bω
    QuadraticConjugation,
    /// (x, y) ↦ (y, x)
    PairSwap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
}

fn is_square_free(d: i64) -> bool {
    let n = d.unsigned_abs();
    if n == 0 {
        return false;
    }
    let mut k: u64 = 2;
    while k.saturating_mul(k) <= n {
        if n.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl BaseRing {
    pub fn modular(n: u64) -> Result<Self> {
        let ring = BaseRing::Modular(n);
        ring.check()?;
        Ok(ring)
    }

    pub fn quadratic(d: i64, base: QuadraticBase) -> Result<Self> {
        let ring = BaseRing::Quadratic { d, base };
        ring.check()?;
        Ok(ring)
    }

    pub fn pair_product(p: u64) -> Result<Self> {
        let ring = BaseRing::PairProduct(p);
        ring.check()?;
        Ok(ring)
    }

    /// Validates the descriptor's parameters.
    pub fn check(&self) -> Result<()> {
        match *self {
            BaseRing::Modular(n) if n < 2 => Err(Error::InvalidRing(format!(
                "modulus must be at least 2, got {n}"
            ))),
            BaseRing::Modular(n) if n > u32::MAX as u64 => {
                Err(Error::InvalidRing(format!("modulus {n} too large")))
            }
            BaseRing::Quadratic { d, .. } if d == 0 || d == 1 || !is_square_free(d) => Err(
                Error::InvalidRing(format!("d = {d} must be square-free and not 0 or 1")),
            ),
            BaseRing::PairProduct(p) if !is_prime(p) || p > u32::MAX as u64 => Err(
                Error::InvalidRing(format!("pair product needs a prime, got {p}")),
            ),
            _ => Ok(()),
        }
    }

    /// n for ℤ/n, p for F_p × F_p, 0 for the characteristic-zero rings.
    pub fn characteristic(&self) -> u64 {
        match *self {
            BaseRing::Modular(n) => n,
            BaseRing::PairProduct(p) => p,
            _ => 0,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseRing::Modular(_) | BaseRing::PairProduct(_))
    }

    /// Number of elements, for finite rings.
    pub fn size(&self) -> Option<u128> {
        match *self {
            BaseRing::Modular(n) => Some(n as u128),
            BaseRing::PairProduct(p) => Some((p as u128) * (p as u128)),
            _ => None,
        }
    }

    pub fn is_domain(&self) -> bool {
        match *self {
            BaseRing::Integer | BaseRing::Rational | BaseRing::Quadratic { .. } => true,
            BaseRing::Modular(n) => is_prime(n),
            BaseRing::PairProduct(_) => false,
        }
    }

    pub fn is_field(&self) -> bool {
        match *self {
            BaseRing::Rational => true,
            BaseRing::Quadratic { base, .. } => base == QuadraticBase::Rational,
            BaseRing::Modular(n) => is_prime(n),
            _ => false,
        }
    }

    pub fn zero(&self) -> RingValue {
        self.from_i64(0)
    }

    pub fn one(&self) -> RingValue {
        self.from_i64(1)
    }

    /// Image of an integer under the unique ring map ℤ → R.
    pub fn from_i64(&self, k: i64) -> RingValue {
        match *self {
            BaseRing::Integer => RingValue::Integer(BigInt::from(k)),
            BaseRing::Rational => RingValue::Rational(rat(k)),
            BaseRing::Modular(n) => RingValue::Modular(k.rem_euclid(n as i64) as u64),
            BaseRing::Quadratic { .. } => RingValue::Quadratic(rat(k), rat(0)),
            BaseRing::PairProduct(p) => {
                let r = k.rem_euclid(p as i64) as u64;
                RingValue::Pair(r, r)
            }
        }
    }

    /// The distinguished square root ω of d. Only for quadratic rings.
    pub fn omega(&self) -> Option<RingValue> {
        match self {
            BaseRing::Quadratic { .. } => Some(RingValue::Quadratic(rat(0), rat(1))),
            _ => None,
        }
    }

    /// Checks that `v` is a canonical element of this ring.
    pub fn contains(&self, v: &RingValue) -> Result<()> {
        let ok = match (self, v) {
            (BaseRing::Integer, RingValue::Integer(_)) => true,
            (BaseRing::Rational, RingValue::Rational(q)) => q.denom().is_positive(),
            (BaseRing::Modular(n), RingValue::Modular(a)) => a < n,
            (BaseRing::Quadratic { base, .. }, RingValue::Quadratic(a, b)) => {
                *base == QuadraticBase::Rational || (a.is_integer() && b.is_integer())
            }
            (BaseRing::PairProduct(p), RingValue::Pair(x, y)) => x < p && y < p,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::KindMismatch {
                ring: self.to_string(),
                value: v.to_string(),
            })
        }
    }

    fn mismatch(&self, a: &RingValue, b: &RingValue) -> ! {
        panic!("ring value kind mismatch in {self}: {a} vs {b}")
    }

    /// Checked arithmetic entry point. `b` is required for add and mul and ignored for neg.
    pub fn arith(&self, op: ArithOp, a: &RingValue, b: Option<&RingValue>) -> Result<RingValue> {
        self.contains(a)?;
        let need_b = || b.ok_or_else(|| Error::Parse(format!("{op:?} needs a second operand")));
        match op {
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Add => {
                let b = need_b()?;
                self.contains(b)?;
                Ok(self.add(a, b))
            }
            ArithOp::Mul => {
                let b = need_b()?;
                self.contains(b)?;
                Ok(self.mul(a, b))
            }
        }
    }

    /// Sum of two elements. Panics if either value is not of this ring's kind.
    pub fn add(&self, a: &RingValue, b: &RingValue) -> RingValue {
        use RingValue as V;
        match (self, a, b) {
            (BaseRing::Integer, V::Integer(x), V::Integer(y)) => V::Integer(x + y),
            (BaseRing::Rational, V::Rational(x), V::Rational(y)) => V::Rational(x + y),
            (BaseRing::Modular(n), V::Modular(x), V::Modular(y)) => V::Modular((x + y) % n),
            (BaseRing::Quadratic { .. }, V::Quadratic(a1, b1), V::Quadratic(a2, b2)) => {
                V::Quadratic(a1 + a2, b1 + b2)
            }
            (BaseRing::PairProduct(p), V::Pair(x1, y1), V::Pair(x2, y2)) => {
                V::Pair((x1 + x2) % p, (y1 + y2) % p)
            }
            _ => self.mismatch(a, b),
        }
    }

    /// Product of two elements. Panics if either value is not of this ring's kind.
    pub fn mul(&self, a: &RingValue, b: &RingValue) -> RingValue {
        use RingValue as V;
        let mulmod = |x: u64, y: u64, n: u64| ((x as u128 * y as u128) % n as u128) as u64;
        match (self, a, b) {
            (BaseRing::Integer, V::Integer(x), V::Integer(y)) => V::Integer(x * y),
            (BaseRing::Rational, V::Rational(x), V::Rational(y)) => V::Rational(x * y),
            (BaseRing::Modular(n), V::Modular(x), V::Modular(y)) => V::Modular(mulmod(*x, *y, *n)),
            (BaseRing::Quadratic { d, .. }, V::Quadratic(a1, b1), V::Quadratic(a2, b2)) => {
                let d = rat(*d);
                V::Quadratic(a1 * a2 + d * b1 * b2, a1 * b2 + b1 * a2)
            }
            (BaseRing::PairProduct(p), V::Pair(x1, y1), V::Pair(x2, y2)) => {
                V::Pair(mulmod(*x1, *x2, *p), mulmod(*y1, *y2, *p))
            }
            _ => self.mismatch(a, b),
        }
    }

    pub fn neg(&self, a: &RingValue) -> RingValue {
        use RingValue as V;
        match (self, a) {
            (BaseRing::Integer, V::Integer(x)) => V::Integer(-x),
            (BaseRing::Rational, V::Rational(x)) => V::Rational(-x),
            (BaseRing::Modular(n), V::Modular(x)) => V::Modular((n - x) % n),
            (BaseRing::Quadratic { .. }, V::Quadratic(x, y)) => V::Quadratic(-x, -y),
            (BaseRing::PairProduct(p), V::Pair(x, y)) => V::Pair((p - x) % p, (p - y) % p),
            _ => self.mismatch(a, a),
        }
    }

    pub fn sub(&self, a: &RingValue, b: &RingValue) -> RingValue {
        self.add(a, &self.neg(b))
    }

    pub fn is_zero(&self, a: &RingValue) -> bool {
        match a {
            RingValue::Integer(x) => x.is_zero(),
            RingValue::Rational(x) => x.is_zero(),
            RingValue::Modular(x) => *x == 0,
            RingValue::Quadratic(x, y) => x.is_zero() && y.is_zero(),
            RingValue::Pair(x, y) => *x == 0 && *y == 0,
        }
    }

    /// Product of a sequence, 1 for the empty sequence.
    pub fn product<'a, I: IntoIterator<Item = &'a RingValue>>(&self, items: I) -> RingValue {
        items
            .into_iter()
            .fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, a: &RingValue, mut k: u64) -> RingValue {
        let mut base = a.clone();
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

    /// A nonzero `x` with `a·x = 0`, if one exists.
    ///
    /// Finite rings are searched exhaustively in enumeration order; the infinite
    /// rings are domains, so only `a = 0` has a partner (namely 1).
    pub fn zero_divisor_partner(&self, a: &RingValue) -> Option<RingValue> {
        if self.is_finite() {
            let elements = self.enumerate().expect("finite ring enumerates");
            elements
                .into_iter()
                .find(|x| !self.is_zero(x) && self.is_zero(&self.mul(a, x)))
        } else if self.is_zero(a) {
            Some(self.one())
        } else {
            None
        }
    }

    /// True iff `a` is a non-zero-divisor.
    pub fn is_regular(&self, a: &RingValue) -> bool {
        self.zero_divisor_partner(a).is_none()
    }

    /// Multiplicative inverse inside this ring, if it exists.
    pub fn try_invert(&self, a: &RingValue) -> Option<RingValue> {
        use RingValue as V;
        match (self, a) {
            (BaseRing::Integer, V::Integer(x)) => {
                if x.is_one() || (-x).is_one() {
                    Some(V::Integer(x.clone()))
                } else {
                    None
                }
            }
            (BaseRing::Rational, V::Rational(x)) => (!x.is_zero()).then(|| V::Rational(x.recip())),
            (BaseRing::Modular(n), V::Modular(x)) => {
                let e = BigInt::from(*x).extended_gcd(&BigInt::from(*n));
                e.gcd
                    .is_one()
                    .then(|| V::Modular(e.x.mod_floor(&BigInt::from(*n)).to_u64().unwrap()))
            }
            (BaseRing::Quadratic { d, base }, V::Quadratic(x, y)) => {
                let norm = x * x - rat(*d) * y * y;
                if norm.is_zero() {
                    return None;
                }
                let inv = V::Quadratic(x / &norm, -y / &norm);
                match base {
                    QuadraticBase::Rational => Some(inv),
                    QuadraticBase::Integer => self.contains(&inv).is_ok().then_some(inv),
                }
            }
            (BaseRing::PairProduct(p), V::Pair(x, y)) => {
                let m = BaseRing::Modular(*p);
                match (m.try_invert(&V::Modular(*x)), m.try_invert(&V::Modular(*y))) {
                    (Some(V::Modular(ix)), Some(V::Modular(iy))) => Some(V::Pair(ix, iy)),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// Some `c` with `b·c = a`, if `a` lies in the principal ideal `R·b`.
    ///
    /// Only the domains answer this exactly; finite rings fall back to search.
    pub fn divide_exact(&self, a: &RingValue, b: &RingValue) -> Option<RingValue> {
        use RingValue as V;
        match (self, a, b) {
            (BaseRing::Integer, V::Integer(x), V::Integer(y)) => {
                if y.is_zero() {
                    return x.is_zero().then(|| V::Integer(BigInt::zero()));
                }
                let (q, r) = x.div_rem(y);
                r.is_zero().then_some(V::Integer(q))
            }
            (BaseRing::Quadratic { .. } | BaseRing::Rational, _, _) => {
                if self.is_zero(b) {
                    return self.is_zero(a).then(|| self.zero());
                }
                let frac = self.fraction_field().ok()?;
                let inv = frac.try_invert(&frac.lift(b).ok()?)?;
                let c = frac.mul(&frac.lift(a).ok()?, &inv);
                self.contains(&c).is_ok().then_some(c)
            }
            _ => self
                .enumerate()
                .ok()?
                .into_iter()
                .find(|c| self.mul(b, c) == *a),
        }
    }

    /// Whether `spec` denotes an automorphism of this ring.
    pub fn supports(&self, spec: AutomorphismSpec) -> bool {
        match spec {
            AutomorphismSpec::Identity => true,
            AutomorphismSpec::QuadraticConjugation => matches!(self, BaseRing::Quadratic { .. }),
            AutomorphismSpec::PairSwap => matches!(self, BaseRing::PairProduct(_)),
        }
    }

    /// The automorphisms available on this ring, identity first.
    pub fn automorphisms(&self) -> Vec<AutomorphismSpec> {
        [
            AutomorphismSpec::Identity,
            AutomorphismSpec::QuadraticConjugation,
            AutomorphismSpec::PairSwap,
        ]
        .into_iter()
        .filter(|s| self.supports(*s))
        .collect()
    }

    pub fn apply_automorphism(&self, spec: AutomorphismSpec, a: &RingValue) -> Result<RingValue> {
        if !self.supports(spec) {
            return Err(Error::IncompatibleAutomorphism {
                spec: format!("{spec:?}"),
                ring: self.to_string(),
            });
        }
        self.contains(a)?;
        Ok(self.apply(spec, a))
    }

    /// Unchecked automorphism application; callers have validated `spec` and `a`.
    pub fn apply(&self, spec: AutomorphismSpec, a: &RingValue) -> RingValue {
        match (spec, a) {
            (AutomorphismSpec::Identity, _) => a.clone(),
            (AutomorphismSpec::QuadraticConjugation, RingValue::Quadratic(x, y)) => {
                RingValue::Quadratic(x.clone(), -y)
            }
            (AutomorphismSpec::PairSwap, RingValue::Pair(x, y)) => RingValue::Pair(*y, *x),
            _ => panic!("automorphism {spec:?} applied to {a} in {self}"),
        }
    }

    /// All elements in a fixed order: residues ascending, pairs lexicographically.
    pub fn enumerate(&self) -> Result<Vec<RingValue>> {
        match *self {
            BaseRing::Modular(n) => Ok((0..n).map(RingValue::Modular).collect()),
            BaseRing::PairProduct(p) => Ok((0..p)
                .flat_map(|x| (0..p).map(move |y| RingValue::Pair(x, y)))
                .collect()),
            _ => Err(Error::InfiniteRing(self.to_string())),
        }
    }

    /// A generating set of the additive group of a finite ring.
    pub fn additive_generators(&self) -> Result<Vec<RingValue>> {
        match *self {
            BaseRing::Modular(_) => Ok(vec![RingValue::Modular(1)]),
            BaseRing::PairProduct(_) => Ok(vec![RingValue::Pair(1, 0), RingValue::Pair(0, 1)]),
            _ => Err(Error::InfiniteRing(self.to_string())),
        }
    }

    /// Ring generators used to probe identities that cannot be checked on
    /// every element: a ring morphism is determined by its values on these.
    pub fn generators(&self) -> Vec<RingValue> {
        let mut g = vec![self.one()];
        g.extend(self.omega());
        g
    }

    /// The field of fractions of a domain.
    pub fn fraction_field(&self) -> Result<BaseRing> {
        match *self {
            BaseRing::Integer | BaseRing::Rational => Ok(BaseRing::Rational),
            BaseRing::Quadratic { d, .. } => Ok(BaseRing::Quadratic {
                d,
                base: QuadraticBase::Rational,
            }),
            BaseRing::Modular(n) if is_prime(n) => Ok(self.clone()),
            _ => Err(Error::NotDomain(self.to_string())),
        }
    }

    /// Embeds a value of a subring (ℤ ⊂ ℚ, ℤ[ω] ⊂ ℚ(ω)) into this ring.
    pub fn lift(&self, v: &RingValue) -> Result<RingValue> {
        let lifted = match (self, v) {
            (BaseRing::Rational, RingValue::Integer(x)) => {
                RingValue::Rational(BigRational::from_integer(x.clone()))
            }
            _ => v.clone(),
        };
        self.contains(&lifted)?;
        Ok(lifted)
    }

    /// A pseudo-random element. Finite rings sample uniformly; the infinite
    /// ones draw integer parts from `[-bound, bound]` and denominators from `[1, bound]`.
    pub fn random_value<G: Rng + ?Sized>(&self, rng: &mut G, bound: i64) -> RingValue {
        let bound = bound.max(1);
        let int = |rng: &mut G| rng.random_range(-bound..=bound);
        match *self {
            BaseRing::Integer => RingValue::Integer(BigInt::from(int(rng))),
            BaseRing::Rational => RingValue::Rational(BigRational::new(
                BigInt::from(int(rng)),
                BigInt::from(rng.random_range(1..=bound)),
            )),
            BaseRing::Modular(n) => RingValue::Modular(rng.random_range(0..n)),
            BaseRing::Quadratic { base, .. } => {
                let part = |rng: &mut G| match base {
                    QuadraticBase::Integer => rat(int(rng)),
                    QuadraticBase::Rational => BigRational::new(
                        BigInt::from(int(rng)),
                        BigInt::from(rng.random_range(1..=bound)),
                    ),
                };
                let a = part(rng);
                RingValue::Quadratic(a, part(rng))
            }
            BaseRing::PairProduct(p) => {
                RingValue::Pair(rng.random_range(0..p), rng.random_range(0..p))
            }
        }
    }
}

impl AutomorphismSpec {
    /// Inverse automorphism. Every supported spec is an involution.
    pub fn inverse(self) -> Self {
        self
    }

    /// Order of the automorphism as a group element.
    pub fn order(self) -> u64 {
        match self {
            AutomorphismSpec::Identity => 1,
            _ => 2,
        }
    }

    /// `self ∘ other`, or `None` when the two cannot act on a common ring.
    pub fn compose(self, other: Self) -> Option<Self> {
        use AutomorphismSpec::*;
        match (self, other) {
            (Identity, x) | (x, Identity) => Some(x),
            (x, y) if x == y => Some(Identity),
            _ => None,
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integer => write!(f, "Z"),
            BaseRing::Rational => write!(f, "Q"),
            BaseRing::Modular(n) => write!(f, "Z/{n}"),
            BaseRing::Quadratic {
                d,
                base: QuadraticBase::Integer,
            } => write!(f, "Z[sqrt({d})]"),
            BaseRing::Quadratic {
                d,
                base: QuadraticBase::Rational,
            } => write!(f, "Q(sqrt({d}))"),
            BaseRing::PairProduct(p) => write!(f, "F{p}xF{p}"),
        }
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingValue::Integer(x) => write!(f, "{x}"),
            RingValue::Rational(x) => write!(f, "{x}"),
            RingValue::Modular(x) => write!(f, "{x}"),
            RingValue::Quadratic(a, b) => write!(f, "{a}+{b}w"),
            RingValue::Pair(x, y) => write!(f, "({x},{y})"),
        }
    }
}

// ---- literal encoding -------------------------------------------------------

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::Parse(format!("expected an integer, got {n}")))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("expected a decimal integer, got {s:?}"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Array(items) if items.len() == 2 => {
            let num = parse_int(&items[0])?;
            let den = parse_int(&items[1])?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            Ok(BigRational::new(num, den))
        }
        _ => Ok(BigRational::from_integer(parse_int(v)?)),
    }
}

fn int_literal(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(i) => Value::from(i),
        None => Value::from(x.to_string()),
    }
}

fn rational_literal(q: &BigRational, force_pair: bool) -> Value {
    if q.is_integer() && !force_pair {
        int_literal(q.numer())
    } else {
        Value::Array(vec![int_literal(q.numer()), int_literal(q.denom())])
    }
}

fn residue(x: &BigInt, n: u64) -> u64 {
    x.mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue fits")
}

impl BaseRing {
    /// Decodes a JSON literal: integers as numbers or decimal strings,
    /// rationals as `[num, den]`, residues as integers (reduced),
    /// quadratic values as `[a, b]`, pair values as `[x, y]`.
    pub fn parse_literal(&self, v: &Value) -> Result<RingValue> {
        let value = match self {
            BaseRing::Integer => RingValue::Integer(parse_int(v)?),
            BaseRing::Rational => RingValue::Rational(parse_rational(v)?),
            BaseRing::Modular(n) => RingValue::Modular(residue(&parse_int(v)?, *n)),
            BaseRing::Quadratic { .. } => match v {
                Value::Array(items) if items.len() == 2 => {
                    RingValue::Quadratic(parse_rational(&items[0])?, parse_rational(&items[1])?)
                }
                _ => RingValue::Quadratic(parse_rational(v)?, BigRational::zero()),
            },
            BaseRing::PairProduct(p) => match v {
                Value::Array(items) if items.len() == 2 => RingValue::Pair(
                    residue(&parse_int(&items[0])?, *p),
                    residue(&parse_int(&items[1])?, *p),
                ),
                _ => self.from_i64(
                    parse_int(v)?
                        .mod_floor(&BigInt::from(*p))
                        .to_i64()
                        .expect("residue fits"),
                ),
            },
        };
        self.contains(&value)?;
        Ok(value)
    }

    /// Encodes a value as a JSON literal; inverse of [`BaseRing::parse_literal`].
    pub fn to_literal(&self, v: &RingValue) -> Value {
        match v {
            RingValue::Integer(x) => int_literal(x),
            RingValue::Rational(q) => rational_literal(q, true),
            RingValue::Modular(x) => Value::from(*x),
            RingValue::Quadratic(a, b) => {
                Value::Array(vec![rational_literal(a, false), rational_literal(b, false)])
            }
            RingValue::Pair(x, y) => Value::Array(vec![Value::from(*x), Value::from(*y)]),
        }
    }

    /// Parses the ring descriptor object used in datum files, e.g.
    /// `{"type":"modular","modulus":4}`.
    pub fn from_json(v: &Value) -> Result<BaseRing> {
        let kind = v
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("ring needs a \"type\" field".into()))?;
        let uint = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("ring {kind:?} needs integer field {key:?}")))
        };
        let ring = match kind {
            "integer" => BaseRing::Integer,
            "rational" => BaseRing::Rational,
            "modular" => BaseRing::Modular(uint("modulus")?),
            "pair_product" => BaseRing::PairProduct(uint("p")?),
            "quadratic" => {
                let d = v.get("d").and_then(Value::as_i64).ok_or_else(|| {
                    Error::Parse("quadratic ring needs integer field \"d\"".into())
                })?;
                let base = match v.get("base").and_then(Value::as_str).unwrap_or("integer") {
                    "integer" => QuadraticBase::Integer,
                    "rational" => QuadraticBase::Rational,
                    other => return Err(Error::Parse(format!("unknown quadratic base {other:?}"))),
                };
                BaseRing::Quadratic { d, base }
            }
            other => return Err(Error::Parse(format!("unknown ring type {other:?}"))),
        };
        ring.check()?;
        Ok(ring)
    }

    pub fn to_json(&self) -> Value {
        match *self {
            BaseRing::Integer => serde_json::json!({"type": "integer"}),
            BaseRing::Rational => serde_json::json!({"type": "rational"}),
            BaseRing::Modular(n) => serde_json::json!({"type": "modular", "modulus": n}),
            BaseRing::PairProduct(p) => serde_json::json!({"type": "pair_product", "p": p}),
            BaseRing::Quadratic { d, base } => serde_json::json!({
                "type": "quadratic",
                "d": d,
                "base": match base { QuadraticBase::Integer => "integer", QuadraticBase::Rational => "rational" },
            }),
        }
    }
}

impl AutomorphismSpec {
    pub fn from_json(v: &Value) -> Result<Self> {
        match v.as_str() {
            Some("identity") => Ok(AutomorphismSpec::Identity),
            Some("conjugation") => Ok(AutomorphismSpec::QuadraticConjugation),
            Some("swap") => Ok(AutomorphismSpec::PairSwap),
            _ => Err(Error::Parse(format!(
                "automorphism must be \"identity\", \"conjugation\" or \"swap\", got {v}"
            ))),
        }
    }

    pub fn to_json(self) -> Value {
        Value::from(match self {
            AutomorphismSpec::Identity => "identity",
            AutomorphismSpec::QuadraticConjugation => "conjugation",
            AutomorphismSpec::PairSwap => "swap",
        })
    }
}
