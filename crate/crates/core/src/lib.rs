//! Exact computation with crystalline graded rings `A = ⊕_{g∈G} R u_g`.
//!
//! The coefficient ring R is one of a handful of exact commutative rings
//! ([`BaseRing`]), G is a finite group given by its Cayley table ([`Group`]),
//! and the multiplication of A is fixed by a [`CrystalDatum`]: automorphisms
//! σ_g with `u_g r = σ_g(r) u_g` and a two-cocycle α with `u_g u_h = α(g,h) u_{gh}`.
//!
//! ```
//! use crystal_core::{examples, GradedRing};
//!
//! let a = GradedRing::new(examples::gaussian()).unwrap();
//! let i = a.basis(1);
//! assert_eq!(a.mul(&i, &i), a.neg(&a.one()));
//! ```

pub mod datum;
pub mod error;
pub mod examples;
pub mod fuzz;
pub mod graded;
pub mod group;
pub mod linalg;
pub mod localization;
pub mod maschke;
pub mod ring;
pub mod semiprime;

pub use datum::{
    corruption_survey, reverify, torsion_profile, validate_datum, CheckKind, CheckOutcome,
    CrystalDatum, TorsionProfile, ValidationReport, Witness,
};
pub use error::{Error, Result};
pub use fuzz::{fuzz_data, Family, FuzzConfig, FuzzSummary};
pub use graded::{
    basis_inverse, check_inverse_identities, GradedElement, GradedRing, InverseIdentity,
    InverseIdentityReport,
};
pub use group::{Group, GroupSpec};
pub use linalg::Matrix;
pub use localization::{
    common_multiple, is_regular_in_a, ore_witness, right_ore_witness, to_fraction_field,
    LocalizedDatum, OreWitness, RegularityVerdict,
};
pub use maschke::{
    averaging_projection, check_a_linear, split_submodule, LinearityVerdict, ModuleReport,
    SemilinearModule, SubmoduleProjection,
};
pub use ring::{ArithOp, AutomorphismSpec, BaseRing, QuadraticBase, RingValue};
pub use semiprime::{is_nilpotent, is_semiprime_finite, nilpotent_witness, SemiprimeVerdict};
