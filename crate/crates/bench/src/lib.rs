//! Inputs shared by the benchmarks.

use crystal_core::{examples, BaseRing, CrystalDatum, GradedElement, GradedRing, Group};

/// The group algebra F_p[C_n] together with every one of its elements.
pub fn finite_algebra(p: u64, n: usize) -> (GradedRing, Vec<GradedElement>) {
    let ring = GradedRing::new(examples::group_algebra(p, n)).expect("group algebra validates");
    let all = ring.elements(u128::MAX).expect("small algebra");
    (ring, all)
}

/// A dense element of the quaternion order with coefficients `seed, seed+1, …`.
pub fn dense_quaternion(seed: i64) -> (GradedRing, GradedElement) {
    let d = examples::quaternion();
    let ring = GradedRing::new(d.clone()).expect("quaternions validate");
    let x = ring
        .element((0..4).map(|g| (g, d.ring().from_i64(seed + g as i64))))
        .expect("valid element");
    (ring, x)
}

/// Group algebra of a cyclic group of order `n` over Z/m, for validation timing.
pub fn cyclic_group_algebra(m: u64, n: usize) -> CrystalDatum {
    let r = BaseRing::modular(m).expect("modulus");
    CrystalDatum::group_algebra(r, Group::cyclic(n).expect("order")).expect("datum")
}
