//! Small named data used throughout the tests, benches and bundled fixtures.

use crate::datum::CrystalDatum;
use crate::group::Group;
use crate::ring::{AutomorphismSpec, BaseRing, QuadraticBase};

fn c2() -> Group {
    Group::cyclic(2).expect("C2")
}

fn klein() -> Group {
    c2().product(&c2()).expect("C2 x C2")
}

/// ℤ[i] as ℤ ◊ C₂ with u_g² = −1.
pub fn gaussian() -> CrystalDatum {
    let r = BaseRing::Integer;
    CrystalDatum::from_fn(
        r.clone(),
        c2(),
        |_| AutomorphismSpec::Identity,
        |g, h| r.from_i64(if g == 1 && h == 1 { -1 } else { 1 }),
    )
    .expect("gaussian datum")
}

/// ℤ[√2] as ℤ ◊ C₂ with u_g² = 2.
pub fn zsqrt2() -> CrystalDatum {
    let r = BaseRing::Integer;
    CrystalDatum::from_fn(
        r.clone(),
        c2(),
        |_| AutomorphismSpec::Identity,
        |g, h| r.from_i64(if g == 1 && h == 1 { 2 } else { 1 }),
    )
    .expect("zsqrt2 datum")
}

/// Lipschitz quaternions over ℤ graded by the Klein four-group:
/// u₁ = i, u₂ = j, u₃ = k.
pub fn quaternion() -> CrystalDatum {
    let r = BaseRing::Integer;
    // i·i = -1, i·j = k, i·k = -j, j·i = -k, j·j = -1, j·k = i, k·i = j, k·j = -i, k·k = -1
    const SIGNS: [[i64; 4]; 4] = [[1, 1, 1, 1], [1, -1, 1, -1], [1, -1, -1, 1], [1, 1, -1, -1]];
    CrystalDatum::from_fn(
        r.clone(),
        klein(),
        |_| AutomorphismSpec::Identity,
        |g, h| r.from_i64(SIGNS[g][h]),
    )
    .expect("quaternion datum")
}

/// ℤ[i] ◊ C₂ with u_g acting by complex conjugation and u_g² = 1.
pub fn skew_conjugation() -> CrystalDatum {
    let r = BaseRing::quadratic(-1, QuadraticBase::Integer).expect("Z[i]");
    CrystalDatum::from_fn(
        r.clone(),
        c2(),
        |g| {
            if g == 1 {
                AutomorphismSpec::QuadraticConjugation
            } else {
                AutomorphismSpec::Identity
            }
        },
        |_, _| r.one(),
    )
    .expect("skew datum")
}

/// ℤ/4 ◊ C₂ with u_g² = 2.
pub fn z4_alpha2() -> CrystalDatum {
    let r = BaseRing::modular(4).expect("Z/4");
    CrystalDatum::from_fn(
        r.clone(),
        c2(),
        |_| AutomorphismSpec::Identity,
        |g, h| r.from_i64(if g == 1 && h == 1 { 2 } else { 1 }),
    )
    .expect("z4 datum")
}

/// Group algebra F_p[C_q].
pub fn group_algebra(p: u64, q: usize) -> CrystalDatum {
    let r = BaseRing::modular(p).expect("F_p");
    CrystalDatum::group_algebra(r, Group::cyclic(q).expect("C_q")).expect("group algebra")
}

pub fn f2c2() -> CrystalDatum {
    group_algebra(2, 2)
}

pub fn f3c2() -> CrystalDatum {
    group_algebra(3, 2)
}

/// (F₂ × F₂) ◊ C₂ with u_g swapping the factors and u_g² = 1.
pub fn pair_swap() -> CrystalDatum {
    let r = BaseRing::pair_product(2).expect("F2 x F2");
    CrystalDatum::from_fn(
        r.clone(),
        c2(),
        |g| {
            if g == 1 {
                AutomorphismSpec::PairSwap
            } else {
                AutomorphismSpec::Identity
            }
        },
        |_, _| r.one(),
    )
    .expect("pair swap datum")
}
