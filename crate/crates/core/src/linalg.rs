//! Dense matrices over a [`BaseRing`], row-vector convention (`v ↦ v·M`).
//!
//! Determinants use cofactor expansion, so they work over any commutative
//! ring; sizes here never exceed 6.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::ring::{BaseRing, RingValue};

/// Exhaustive searches over coefficient tuples stop at this many candidates.
pub const SEARCH_LIMIT: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<RingValue>,
}

pub type RowVector = Vec<RingValue>;

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<RingValue>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> RingValue) -> Matrix {
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Matrix { rows, cols, data }
    }

    pub fn zeros(ring: &BaseRing, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| ring.zero())
    }

    pub fn identity(ring: &BaseRing, n: usize) -> Matrix {
        Matrix::from_fn(n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RingValue {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> RowVector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<RowVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    /// Applies `f` to every entry (e.g. an automorphism).
    pub fn map(&self, f: impl Fn(&RingValue) -> RingValue) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn check_ring(&self, ring: &BaseRing) -> Result<()> {
        self.data.iter().try_for_each(|x| ring.contains(x))
    }

    pub fn mul(&self, ring: &BaseRing, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shapes do not chain");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(ring.zero(), |acc, k| {
                ring.add(&acc, &ring.mul(self.get(i, k), other.get(k, j)))
            })
        })
    }

    pub fn add(&self, ring: &BaseRing, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, ring: &BaseRing, c: &RingValue) -> Matrix {
        self.map(|x| ring.mul(c, x))
    }

    pub fn is_zero(&self, ring: &BaseRing) -> bool {
        self.data.iter().all(|x| ring.is_zero(x))
    }

    pub fn is_idempotent(&self, ring: &BaseRing) -> bool {
        self.is_square() && self.mul(ring, self) == *self
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Matrix {
        let rows = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| j != skip_col)
                    .map(|j| self.get(i, j).clone())
                    .collect()
            })
            .collect();
        Matrix::from_rows(rows).expect("minor of a rectangular matrix")
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det(&self, ring: &BaseRing) -> RingValue {
        assert!(self.is_square(), "determinant of a non-square matrix");
        match self.rows {
            0 => ring.one(),
            1 => self.get(0, 0).clone(),
            n => (0..n).fold(ring.zero(), |acc, j| {
                let entry = self.get(0, j);
                if ring.is_zero(entry) {
                    return acc;
                }
                let term = ring.mul(entry, &self.minor(0, j).det(ring));
                if j % 2 == 0 {
                    ring.add(&acc, &term)
                } else {
                    ring.sub(&acc, &term)
                }
            }),
        }
    }

    /// Inverse via the adjugate; `None` unless the determinant is a unit.
    pub fn inverse(&self, ring: &BaseRing) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let det_inv = ring.try_invert(&self.det(ring))?;
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        if n == 1 {
            return Some(Matrix::from_fn(1, 1, |_, _| det_inv.clone()));
        }
        Some(Matrix::from_fn(n, n, |i, j| {
            let c = self.minor(j, i).det(ring);
            let c = if (i + j) % 2 == 0 { c } else { ring.neg(&c) };
            ring.mul(&det_inv, &c)
        }))
    }

    pub fn from_json(ring: &BaseRing, v: &Value) -> Result<Matrix> {
        let rows = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("matrix must be a list of rows, got {v}")))?
            .iter()
            .map(|row| parse_row(ring, row))
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(rows)
    }

    pub fn to_json(&self, ring: &BaseRing) -> Value {
        Value::Array(
            self.to_rows()
                .iter()
                .map(|r| row_literal(ring, r))
                .collect(),
        )
    }
}

pub fn parse_row(ring: &BaseRing, v: &Value) -> Result<RowVector> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("row vector must be a list, got {v}")))?
        .iter()
        .map(|x| ring.parse_literal(x))
        .collect()
}

pub fn row_literal(ring: &BaseRing, v: &[RingValue]) -> Value {
    Value::Array(v.iter().map(|x| ring.to_literal(x)).collect())
}

/// `v·M`
pub fn vec_mul(ring: &BaseRing, v: &[RingValue], m: &Matrix) -> RowVector {
    assert_eq!(v.len(), m.rows(), "vector length does not match matrix");
    (0..m.cols())
        .map(|j| {
            v.iter().enumerate().fold(ring.zero(), |acc, (k, x)| {
                ring.add(&acc, &ring.mul(x, m.get(k, j)))
            })
        })
        .collect()
}

pub fn unit_vector(ring: &BaseRing, n: usize, i: usize) -> RowVector {
    (0..n)
        .map(|j| if i == j { ring.one() } else { ring.zero() })
        .collect()
}

fn vec_add(ring: &BaseRing, a: &[RingValue], b: &[RingValue]) -> RowVector {
    a.iter().zip(b).map(|(x, y)| ring.add(x, y)).collect()
}

fn vec_scale(ring: &BaseRing, c: &RingValue, a: &[RingValue]) -> RowVector {
    a.iter().map(|x| ring.mul(c, x)).collect()
}

/// Row echelon form over a field: the nonzero reduced rows and their pivot columns.
fn rref(ring: &BaseRing, rows: &[RowVector], width: usize) -> (Vec<RowVector>, Vec<usize>) {
    let mut m: Vec<RowVector> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !ring.is_zero(&m[i][col])) else {
            continue;
        };
        m.swap(r, p);
        let inv = ring
            .try_invert(&m[r][col])
            .expect("field element is invertible");
        m[r] = vec_scale(ring, &inv, &m[r]);
        for i in 0..m.len() {
            if i != r && !ring.is_zero(&m[i][col]) {
                let f = ring.neg(&m[i][col]);
                let shifted = vec_scale(ring, &f, &m[r]);
                m[i] = vec_add(ring, &m[i], &shifted);
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

fn tuples(size: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (size as u128).pow(len as u32);
    (0..total).map(move |mut idx| {
        let mut digits = vec![0; len];
        for d in digits.iter_mut().rev() {
            *d = (idx % size as u128) as usize;
            idx /= size as u128;
        }
        digits
    })
}

fn search_budget(ring: &BaseRing, len: usize) -> Result<Vec<RingValue>> {
    let values = ring.enumerate()?;
    let size = (values.len() as u128)
        .checked_pow(len as u32)
        .unwrap_or(u128::MAX);
    if size > SEARCH_LIMIT {
        return Err(Error::SizeCap {
            what: "coefficient search",
            size,
            limit: SEARCH_LIMIT,
        });
    }
    Ok(values)
}

/// Whether `v` lies in the R-span of `basis`.
///
/// Fields use elimination; other finite rings are searched exhaustively.
pub fn in_span(ring: &BaseRing, v: &[RingValue], basis: &[RowVector]) -> Result<bool> {
    if v.iter().all(|x| ring.is_zero(x)) {
        return Ok(true);
    }
    if basis.is_empty() {
        return Ok(false);
    }
    let width = v.len();
    if ring.is_field() {
        let (b, _) = rref(ring, basis, width);
        let mut with_v = b.clone();
        with_v.push(v.to_vec());
        let (bv, _) = rref(ring, &with_v, width);
        return Ok(bv.len() == b.len());
    }
    if !ring.is_finite() {
        return Err(Error::Unsupported(format!("span membership over {ring}")));
    }
    let values = search_budget(ring, basis.len())?;
    Ok(tuples(values.len(), basis.len()).any(|c| {
        let combo = c
            .iter()
            .zip(basis)
            .fold(vec![ring.zero(); width], |acc, (&i, b)| {
                vec_add(ring, &acc, &vec_scale(ring, &values[i], b))
            });
        combo == v
    }))
}

/// An idempotent `P` whose image (row space of `v ↦ v·P`) is exactly the
/// R-span of `basis`, if one exists.
pub fn find_projection(
    ring: &BaseRing,
    basis: &[RowVector],
    width: usize,
) -> Result<Option<Matrix>> {
    let nonzero: Vec<RowVector> = basis
        .iter()
        .filter(|b| b.iter().any(|x| !ring.is_zero(x)))
        .cloned()
        .collect();
    if nonzero.is_empty() {
        return Ok(Some(Matrix::zeros(ring, width, width)));
    }
    if ring.is_field() {
        let (b, pivots) = rref(ring, &nonzero, width);
        let k = b.len();
        let mut q_rows = b;
        for j in (0..width).filter(|j| !pivots.contains(j)) {
            q_rows.push(unit_vector(ring, width, j));
        }
        let q = Matrix::from_rows(q_rows)?;
        let q_inv = q
            .inverse(ring)
            .ok_or_else(|| Error::Internal("completed basis is singular".into()))?;
        let diag = Matrix::from_fn(width, width, |i, j| {
            if i == j && i < k {
                ring.one()
            } else {
                ring.zero()
            }
        });
        return Ok(Some(q_inv.mul(ring, &diag).mul(ring, &q)));
    }
    if !ring.is_finite() {
        return Err(Error::Unsupported(format!("projection search over {ring}")));
    }
    // P = C·B with C ranging over all width × k coefficient matrices.
    let k = nonzero.len();
    let values = search_budget(ring, width * k)?;
    let b = Matrix::from_rows(nonzero.clone())?;
    for c in tuples(values.len(), width * k) {
        let cm = Matrix::from_fn(width, k, |i, j| values[c[i * k + j]].clone());
        let p = cm.mul(ring, &b);
        if p.is_idempotent(ring) && nonzero.iter().all(|row| vec_mul(ring, row, &p) == *row) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(ring: &BaseRing, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| ring.from_i64(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn det_and_inverse_over_integers() {
        let z = BaseRing::Integer;
        let a = m(&z, &[&[2, 1, 0], &[1, 1, 0], &[0, 0, -1]]);
        assert_eq!(a.det(&z), z.from_i64(-1));
        let inv = a.inverse(&z).unwrap();
        assert_eq!(a.mul(&z, &inv), Matrix::identity(&z, 3));
        assert!(m(&z, &[&[2, 0], &[0, 1]]).inverse(&z).is_none());
    }

    #[test]
    fn inverse_over_z4_uses_unit_determinant() {
        let r = BaseRing::modular(4).unwrap();
        let a = m(&r, &[&[1, 2], &[2, 1]]);
        assert_eq!(a.det(&r), r.from_i64(1));
        let inv = a.inverse(&r).unwrap();
        assert_eq!(inv.mul(&r, &a), Matrix::identity(&r, 2));
        assert!(m(&r, &[&[2, 0], &[0, 1]]).inverse(&r).is_none());
    }

    #[test]
    fn projection_over_a_field() {
        let f3 = BaseRing::modular(3).unwrap();
        let basis = vec![vec![f3.one(), f3.one()]];
        let p = find_projection(&f3, &basis, 2).unwrap().unwrap();
        assert_eq!(p, m(&f3, &[&[1, 1], &[0, 0]]));
        assert!(p.is_idempotent(&f3));
    }

    #[test]
    fn projection_search_over_z4() {
        let r = BaseRing::modular(4).unwrap();
        // span{(2, 0)} = {0, (2,0)} is not a direct summand of (Z/4)^2.
        assert_eq!(
            find_projection(&r, &[vec![r.from_i64(2), r.zero()]], 2).unwrap(),
            None
        );
        let p = find_projection(&r, &[vec![r.from_i64(1), r.from_i64(3)]], 2)
            .unwrap()
            .unwrap();
        assert!(p.is_idempotent(&r));
        let row = vec![r.from_i64(1), r.from_i64(3)];
        assert_eq!(vec_mul(&r, &row, &p), row);
    }

    #[test]
    fn span_membership() {
        let f5 = BaseRing::modular(5).unwrap();
        let basis = vec![vec![f5.from_i64(1), f5.from_i64(2), f5.zero()]];
        assert!(in_span(&f5, &[f5.from_i64(3), f5.from_i64(1), f5.zero()], &basis).unwrap());
        assert!(!in_span(&f5, &[f5.from_i64(3), f5.from_i64(2), f5.zero()], &basis).unwrap());
        let pp = BaseRing::pair_product(2).unwrap();
        let b = vec![vec![RingValue::Pair(1, 0), RingValue::Pair(0, 1)]];
        assert!(in_span(&pp, &[RingValue::Pair(1, 0), RingValue::Pair(0, 0)], &b).unwrap());
        assert!(!in_span(&pp, &[RingValue::Pair(0, 1), RingValue::Pair(0, 0)], &b).unwrap());
    }
}
