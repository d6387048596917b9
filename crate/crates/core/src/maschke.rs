//! Finite-rank right A-modules and the averaging projection.
//!
//! A module of rank m is R^m (row vectors) together with one m×m matrix U_g per
//! group element. The basis element u_g acts semilinearly:
//!
//! ```text
//! φ_g(v) = σ_g⁻¹(v) · U_g
//! ```
//!
//! which encodes `(Σ e_i v_i)·u_g = Σ e_i u_g σ_g⁻¹(v_i)`. Given an R-linear
//! idempotent P onto an A-submodule N, averaging P over the group
//!
//! ```text
//! λ(v) = |G|⁻¹ Σ_g φ_g⁻¹(P(φ_g(v)))
//! ```
//!
//! yields an A-linear idempotent onto the same N, so N is an A-direct summand
//! whenever it is an R-direct summand and |G| is invertible.

use serde_json::Value;

use crate::datum::{validate_datum, CrystalDatum};
use crate::error::{Error, Result};
use crate::graded::{GradedElement, GradedRing};
use crate::linalg::{find_projection, in_span, parse_row, unit_vector, vec_mul, Matrix, RowVector};
use crate::ring::{BaseRing, RingValue};

pub const MAX_MODULE_GROUP_ORDER: usize = 8;
pub const MAX_MODULE_RANK: usize = 6;

#[derive(Debug, Clone)]
pub struct SemilinearModule {
    ring: GradedRing,
    rank: usize,
    actions: Vec<Matrix>,
}

/// Result of [`SemilinearModule::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleReport {
    pub identity_action: bool,
    /// First (g, h) where `σ_h⁻¹(U_g)·U_h ≠ σ_{gh}⁻¹(α(g,h))·U_{gh}`.
    pub compatibility_witness: Option<(usize, usize)>,
    pub compatibility_failures: usize,
    /// First g whose U_g is not invertible over R.
    pub singular_action: Option<usize>,
}

impl ModuleReport {
    pub fn passed(&self) -> bool {
        self.identity_action && self.compatibility_failures == 0 && self.singular_action.is_none()
    }
}

fn module_ring(datum: CrystalDatum) -> Result<GradedRing> {
    let n = datum.order();
    if n > MAX_MODULE_GROUP_ORDER {
        return Err(Error::SizeCap {
            what: "module group order",
            size: n as u128,
            limit: MAX_MODULE_GROUP_ORDER as u128,
        });
    }
    let report = validate_datum(&datum);
    if !report.crystalline {
        return Err(Error::NotCrystalline(
            "modules need a crystalline datum".into(),
        ));
    }
    if !report.centrally_consistent {
        return Err(Error::InvalidModule("σ must satisfy σ_gh = σ_g∘σ_h".into()));
    }
    let ring = datum.ring();
    for g in 0..n {
        for h in 0..n {
            if ring.try_invert(datum.alpha(g, h)).is_none() {
                return Err(Error::InvalidModule(format!("α({g},{h}) is not a unit")));
            }
        }
    }
    GradedRing::new(datum)
}

impl SemilinearModule {
    /// Checks shapes and the datum requirements; the module axioms themselves
    /// are checked by [`SemilinearModule::validate`].
    pub fn new(datum: CrystalDatum, actions: Vec<Matrix>) -> Result<Self> {
        let ring = module_ring(datum)?;
        let n = ring.order();
        if actions.len() != n {
            return Err(Error::Shape(format!(
                "{} action matrices for a group of order {n}",
                actions.len()
            )));
        }
        let rank = actions[0].rows();
        if rank > MAX_MODULE_RANK {
            return Err(Error::SizeCap {
                what: "module rank",
                size: rank as u128,
                limit: MAX_MODULE_RANK as u128,
            });
        }
        for (g, u) in actions.iter().enumerate() {
            if u.rows() != rank || u.cols() != rank {
                return Err(Error::Shape(format!("U_{g} must be {rank}x{rank}")));
            }
            u.check_ring(ring.coefficients())?;
        }
        Ok(SemilinearModule {
            ring,
            rank,
            actions,
        })
    }

    /// A as a right module over itself, on the basis u_0, …, u_{n-1}.
    ///
    /// Coordinates are taken on the right: `Σ u_k v_k`. Row k of U_g holds
    /// `σ_{kg}⁻¹(α(k,g))` in column kg, from `u_k u_g = u_{kg} σ_{kg}⁻¹(α(k,g))`.
    pub fn regular(datum: CrystalDatum) -> Result<Self> {
        let n = datum.order();
        let r = datum.ring().clone();
        let actions = (0..n)
            .map(|g| {
                Matrix::from_fn(n, n, |k, col| {
                    let kg = datum.group().mul(k, g);
                    if col == kg {
                        datum.act_inv(kg, datum.alpha(k, g))
                    } else {
                        r.zero()
                    }
                })
            })
            .collect();
        SemilinearModule::new(datum, actions)
    }

    pub fn graded_ring(&self) -> &GradedRing {
        &self.ring
    }

    pub fn coefficients(&self) -> &BaseRing {
        self.ring.coefficients()
    }

    pub fn datum(&self) -> &CrystalDatum {
        self.ring.datum()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &Matrix {
        &self.actions[g]
    }

    fn sigma_inv_vec(&self, g: usize, v: &[RingValue]) -> RowVector {
        v.iter().map(|x| self.datum().act_inv(g, x)).collect()
    }

    /// `v·u_g`
    pub fn act(&self, g: usize, v: &[RingValue]) -> RowVector {
        vec_mul(
            self.coefficients(),
            &self.sigma_inv_vec(g, v),
            &self.actions[g],
        )
    }

    /// `v·r` for a coefficient r.
    pub fn scale(&self, v: &[RingValue], r: &RingValue) -> RowVector {
        v.iter().map(|x| self.coefficients().mul(x, r)).collect()
    }

    /// `v·x` for an arbitrary element `x = Σ a_g u_g`, as `Σ (v·a_g)·u_g`.
    pub fn act_element(&self, v: &[RingValue], x: &GradedElement) -> RowVector {
        let ring = self.coefficients();
        x.terms().fold(vec![ring.zero(); self.rank], |acc, (g, a)| {
            let w = self.act(g, &self.scale(v, a));
            acc.iter().zip(&w).map(|(p, q)| ring.add(p, q)).collect()
        })
    }

    /// Right coordinates of an element of A in the regular module.
    pub fn regular_coordinates(&self, x: &GradedElement) -> RowVector {
        (0..self.ring.order())
            .map(|k| match x.coefficient(k) {
                Some(a) => self.datum().act_inv(k, a),
                None => self.coefficients().zero(),
            })
            .collect()
    }

    pub fn validate(&self) -> ModuleReport {
        let ring = self.coefficients();
        let d = self.datum();
        let n = self.ring.order();
        let identity_action = self.actions[0] == Matrix::identity(ring, self.rank);
        let mut compatibility_failures = 0;
        let mut compatibility_witness = None;
        for g in 0..n {
            for h in 0..n {
                let gh = d.group().mul(g, h);
                let lhs = self.actions[g]
                    .map(|x| d.act_inv(h, x))
                    .mul(ring, &self.actions[h]);
                let rhs = self.actions[gh].scale(ring, &d.act_inv(gh, d.alpha(g, h)));
                if lhs != rhs {
                    compatibility_failures += 1;
                    compatibility_witness.get_or_insert((g, h));
                }
            }
        }
        let singular_action = (0..n).find(|&g| self.actions[g].inverse(ring).is_none());
        ModuleReport {
            identity_action,
            compatibility_witness,
            compatibility_failures,
            singular_action,
        }
    }

    fn require_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.passed() {
            return Ok(());
        }
        let reason = if !report.identity_action {
            "U_e is not the identity".to_string()
        } else if let Some(g) = report.singular_action {
            format!("U_{g} is not invertible")
        } else {
            format!("compatibility fails at {:?}", report.compatibility_witness)
        };
        Err(Error::InvalidModule(reason))
    }

    fn order_inverse(&self) -> Result<RingValue> {
        let n = self.ring.order();
        let ring = self.coefficients();
        ring.try_invert(&ring.from_i64(n as i64))
            .ok_or(Error::OrderNotInvertible(n))
    }

    /// First g for which `φ_g` does not map the row space of `rows` into the
    /// R-span of `rows`.
    pub fn unstable_under(&self, rows: &[RowVector]) -> Result<Option<usize>> {
        for g in 0..self.ring.order() {
            for b in rows {
                if !in_span(self.coefficients(), &self.act(g, b), rows)? {
                    return Ok(Some(g));
                }
            }
        }
        Ok(None)
    }

    /// Parses `{"rank": m, "actions": {"g": [[…]], …}}`. A missing entry for
    /// the identity defaults to the identity matrix.
    pub fn from_json(datum: CrystalDatum, v: &Value) -> Result<Self> {
        let ring = datum.ring().clone();
        let rank = v
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("module needs integer \"rank\"".into()))?
            as usize;
        let actions = v
            .get("actions")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("module needs an \"actions\" object".into()))?;
        let n = datum.order();
        let mut mats: Vec<Option<Matrix>> = vec![None; n];
        for (key, m) in actions {
            let g: usize = key
                .parse()
                .map_err(|_| Error::Parse(format!("action key {key:?} is not a group index")))?;
            datum.group().check_index(g)?;
            mats[g] = Some(Matrix::from_json(&ring, m)?);
        }
        if mats[0].is_none() {
            mats[0] = Some(Matrix::identity(&ring, rank));
        }
        let actions = mats
            .into_iter()
            .enumerate()
            .map(|(g, m)| {
                m.ok_or_else(|| Error::Parse(format!("missing action for group element {g}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if actions.iter().any(|m| m.rows() != rank || m.cols() != rank) {
            return Err(Error::Shape(format!(
                "action matrices must be {rank}x{rank}"
            )));
        }
        SemilinearModule::new(datum, actions)
    }

    pub fn to_json(&self) -> Value {
        let actions: serde_json::Map<String, Value> = self
            .actions
            .iter()
            .enumerate()
            .map(|(g, m)| (g.to_string(), m.to_json(self.coefficients())))
            .collect();
        serde_json::json!({"rank": self.rank, "actions": actions})
    }
}

/// Parses a submodule given as a list of row-vector literals.
pub fn parse_submodule(ring: &BaseRing, v: &Value) -> Result<Vec<RowVector>> {
    v.as_array()
        .ok_or_else(|| Error::Parse("submodule must be a list of row vectors".into()))?
        .iter()
        .map(|r| parse_row(ring, r))
        .collect()
}

/// An R-linear idempotent `v ↦ v·P`; its image is the submodule N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleProjection {
    matrix: Matrix,
}

impl SubmoduleProjection {
    pub fn new(ring: &BaseRing, matrix: Matrix) -> Result<Self> {
        matrix.check_ring(ring)?;
        if !matrix.is_idempotent(ring) {
            return Err(Error::NotIdempotent);
        }
        Ok(SubmoduleProjection { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Rows of P; they span the image.
    pub fn image_spanning_set(&self) -> Vec<RowVector> {
        self.matrix.to_rows()
    }
}

/// `|G|⁻¹ Σ_g σ_g(U_g P U_g⁻¹)`, the matrix of `v ↦ |G|⁻¹ Σ_g φ_g⁻¹(P(φ_g(v)))`.
///
/// Fails if |G| is not a unit, the module is invalid, or the image of P is
/// not A-stable. The result is checked to be an A-linear idempotent that
/// fixes the image of P.
pub fn averaging_projection(m: &SemilinearModule, p: &SubmoduleProjection) -> Result<Matrix> {
    let inv_order = m.order_inverse()?;
    m.require_valid()?;
    let ring = m.coefficients();
    let pm = p.matrix();
    if pm.rows() != m.rank() {
        return Err(Error::Shape(format!(
            "projection is {}x{}, module rank {}",
            pm.rows(),
            pm.cols(),
            m.rank()
        )));
    }
    for g in 0..m.graded_ring().order() {
        for b in p.image_spanning_set() {
            let moved = m.act(g, &b);
            if vec_mul(ring, &moved, pm) != moved {
                return Err(Error::NotStable(g));
            }
        }
    }

    let d = m.datum();
    let mut sum = Matrix::zeros(ring, m.rank(), m.rank());
    for g in 0..m.graded_ring().order() {
        let u = m.action(g);
        let u_inv = u
            .inverse(ring)
            .ok_or_else(|| Error::Internal(format!("U_{g} lost invertibility")))?;
        let conj = u.mul(ring, pm).mul(ring, &u_inv).map(|x| d.act(g, x));
        sum = sum.add(ring, &conj);
    }
    let lambda = sum.scale(ring, &inv_order);

    if !lambda.is_idempotent(ring) {
        return Err(Error::Internal(
            "averaged projection is not idempotent".into(),
        ));
    }
    for b in p.image_spanning_set() {
        if vec_mul(ring, &b, &lambda) != b {
            return Err(Error::Internal(
                "averaged projection moves the submodule".into(),
            ));
        }
    }
    if !check_a_linear(m, &lambda)?.a_linear {
        return Err(Error::Internal(
            "averaged projection is not A-linear".into(),
        ));
    }
    Ok(lambda)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearityVerdict {
    pub a_linear: bool,
    /// (g, i): `T(φ_g(e_i)) ≠ φ_g(T(e_i))`.
    pub witness: Option<(usize, usize)>,
}

/// Whether `v ↦ v·T` commutes with every φ_g, checked on the standard basis.
/// Both sides are σ_g⁻¹-semilinear, so agreement on a basis is enough.
pub fn check_a_linear(m: &SemilinearModule, t: &Matrix) -> Result<LinearityVerdict> {
    if t.rows() != m.rank() || t.cols() != m.rank() {
        return Err(Error::Shape(format!("expected a {0}x{0} matrix", m.rank())));
    }
    t.check_ring(m.coefficients())?;
    let ring = m.coefficients();
    for g in 0..m.graded_ring().order() {
        for i in 0..m.rank() {
            let e = unit_vector(ring, m.rank(), i);
            let lhs = vec_mul(ring, &m.act(g, &e), t);
            let rhs = m.act(g, &vec_mul(ring, &e, t));
            if lhs != rhs {
                return Ok(LinearityVerdict {
                    a_linear: false,
                    witness: Some((g, i)),
                });
            }
        }
    }
    Ok(LinearityVerdict {
        a_linear: true,
        witness: None,
    })
}

/// An A-linear idempotent with image exactly the R-span of `basis`.
///
/// Finds some R-linear projection onto N (elimination over fields, exhaustive
/// search over other finite rings) and averages it.
pub fn split_submodule(m: &SemilinearModule, basis: &[RowVector]) -> Result<SubmoduleProjection> {
    m.order_inverse()?;
    m.require_valid()?;
    let ring = m.coefficients();
    for b in basis {
        if b.len() != m.rank() {
            return Err(Error::Shape(format!(
                "submodule vector of length {}, rank {}",
                b.len(),
                m.rank()
            )));
        }
        b.iter().try_for_each(|x| ring.contains(x))?;
    }
    if let Some(g) = m.unstable_under(basis)? {
        return Err(Error::NotStable(g));
    }
    let p = find_projection(ring, basis, m.rank())?.ok_or(Error::NoProjection)?;
    let p = SubmoduleProjection::new(ring, p)?;
    let lambda = averaging_projection(m, &p)?;
    SubmoduleProjection::new(ring, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn mat(ring: &BaseRing, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ring.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn f3_module() -> SemilinearModule {
        let f3 = BaseRing::modular(3).unwrap();
        SemilinearModule::new(
            examples::f3c2(),
            vec![Matrix::identity(&f3, 2), mat(&f3, &[&[0, 1], &[1, 0]])],
        )
        .unwrap()
    }

    #[test]
    fn validate_module_examples() {
        assert!(f3_module().validate().passed());

        let f3 = BaseRing::modular(3).unwrap();
        let bad = SemilinearModule::new(
            examples::f3c2(),
            vec![Matrix::identity(&f3, 2), mat(&f3, &[&[0, 1], &[0, 1]])],
        )
        .unwrap();
        let r = bad.validate();
        assert_eq!(r.singular_action, Some(1));
        assert!(!r.passed());

        let z = BaseRing::Integer;
        let g = SemilinearModule::new(
            examples::gaussian(),
            vec![Matrix::identity(&z, 2), mat(&z, &[&[0, 1], &[-1, 0]])],
        )
        .unwrap();
        let r = g.validate();
        assert!(r.passed(), "{r:?}");
        assert_eq!(
            g.action(1),
            SemilinearModule::regular(examples::gaussian())
                .unwrap()
                .action(1)
        );
    }

    #[test]
    fn regular_module_matches_right_multiplication() {
        for d in [
            examples::gaussian(),
            examples::quaternion(),
            examples::skew_conjugation(),
            examples::f3c2(),
            examples::pair_swap(),
        ] {
            let m = SemilinearModule::regular(d.clone()).unwrap();
            assert!(m.validate().passed(), "{:?}", d.ring());
            let a = m.graded_ring();
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
            for _ in 0..20 {
                let x = a.random_element(&mut rng, 4);
                let y = a.random_element(&mut rng, 4);
                let moved = m.act_element(&m.regular_coordinates(&x), &y);
                assert_eq!(moved, m.regular_coordinates(&a.mul(&x, &y)));
            }
        }
    }

    #[test]
    fn averaging_examples() {
        let m = f3_module();
        let f3 = m.coefficients().clone();
        let p = SubmoduleProjection::new(&f3, mat(&f3, &[&[0, 0], &[1, 1]])).unwrap();
        assert_eq!(
            averaging_projection(&m, &p).unwrap(),
            mat(&f3, &[&[2, 2], &[2, 2]])
        );

        let id = SubmoduleProjection::new(&f3, Matrix::identity(&f3, 2)).unwrap();
        assert_eq!(
            averaging_projection(&m, &id).unwrap(),
            Matrix::identity(&f3, 2)
        );

        let f2 = BaseRing::modular(2).unwrap();
        let m2 = SemilinearModule::regular(examples::f2c2()).unwrap();
        let p2 = SubmoduleProjection::new(&f2, mat(&f2, &[&[0, 0], &[1, 1]])).unwrap();
        let err = averaging_projection(&m2, &p2).unwrap_err();
        assert_eq!(err, Error::OrderNotInvertible(2));
        assert!(err.to_string().contains("|G| = 2 not invertible"));
    }

    #[test]
    fn averaging_rejects_bad_projections() {
        let m = f3_module();
        let f3 = m.coefficients().clone();
        assert_eq!(
            SubmoduleProjection::new(&f3, mat(&f3, &[&[1, 1], &[1, 1]])),
            Err(Error::NotIdempotent)
        );
        // span{1} is not stable under u.
        let p = SubmoduleProjection::new(&f3, mat(&f3, &[&[1, 0], &[0, 0]])).unwrap();
        assert_eq!(averaging_projection(&m, &p), Err(Error::NotStable(1)));
    }

    #[test]
    fn a_linearity_examples() {
        let m = f3_module();
        let f3 = m.coefficients().clone();
        assert!(
            check_a_linear(&m, &mat(&f3, &[&[2, 2], &[2, 2]]))
                .unwrap()
                .a_linear
        );
        let v = check_a_linear(&m, &mat(&f3, &[&[0, 0], &[1, 1]])).unwrap();
        assert!(!v.a_linear);
        assert_eq!(v.witness, Some((1, 0)));
        assert!(
            check_a_linear(&m, &Matrix::identity(&f3, 2))
                .unwrap()
                .a_linear
        );
        assert!(check_a_linear(&m, &Matrix::identity(&f3, 3)).is_err());
    }

    #[test]
    fn split_examples() {
        let m = f3_module();
        let f3 = m.coefficients().clone();
        let n = vec![vec![f3.one(), f3.one()]];
        assert_eq!(
            split_submodule(&m, &n).unwrap().matrix(),
            &mat(&f3, &[&[2, 2], &[2, 2]])
        );
        assert_eq!(
            split_submodule(&m, &[]).unwrap().matrix(),
            &Matrix::zeros(&f3, 2, 2)
        );
        assert_eq!(
            split_submodule(&m, &[vec![f3.one(), f3.zero()]]),
            Err(Error::NotStable(1))
        );

        let m2 = SemilinearModule::regular(examples::f2c2()).unwrap();
        let f2 = m2.coefficients().clone();
        assert_eq!(
            split_submodule(&m2, &[vec![f2.one(), f2.one()]]),
            Err(Error::OrderNotInvertible(2))
        );
    }

    #[test]
    fn a_linear_projection_is_fixed_by_averaging() {
        let m = f3_module();
        let f3 = m.coefficients().clone();
        let lam = mat(&f3, &[&[2, 2], &[2, 2]]);
        let p = SubmoduleProjection::new(&f3, lam.clone()).unwrap();
        assert_eq!(averaging_projection(&m, &p).unwrap(), lam);
    }

    #[test]
    fn skew_module_over_pair_product() {
        let m = SemilinearModule::regular(examples::pair_swap()).unwrap();
        let r = m.coefficients().clone();
        // |G| = 2 = 0 in F2 x F2
        let n = vec![vec![r.one(), r.one()]];
        assert_eq!(split_submodule(&m, &n), Err(Error::OrderNotInvertible(2)));
    }

    #[test]
    fn json_round_trip() {
        let m = SemilinearModule::regular(examples::skew_conjugation()).unwrap();
        let back = SemilinearModule::from_json(examples::skew_conjugation(), &m.to_json()).unwrap();
        assert_eq!(back.action(1), m.action(1));
        let bad = serde_json::json!({"rank": 2, "actions": {"0": [[1,0],[0,1]]}});
        assert!(SemilinearModule::from_json(examples::skew_conjugation(), &bad).is_err());
    }
}
