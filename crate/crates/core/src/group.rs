//! Finite groups given by validated Cayley tables.

use serde_json::Value;

use crate::error::{Error, Result};

/// Exhaustive validation is cubic in the order; larger tables are refused.
pub const MAX_GROUP_ORDER: usize = 64;

/// A finite group on `0..order` with identity 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Group {
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
}

/// How to build a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Table(Vec<Vec<usize>>),
}

impl Group {
    pub fn build(spec: &GroupSpec) -> Result<Group> {
        match spec {
            GroupSpec::Cyclic(n) => Group::cyclic(*n),
            GroupSpec::Product(a, b) => Ok(Group::build(a)?.product(&Group::build(b)?)?),
            GroupSpec::Table(t) => Group::from_table(t.clone()),
        }
    }

    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group needs order >= 1".into()));
        }
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        Group::from_table(table)
    }

    /// Direct product; `(i, j)` is stored at index `i * other.order() + j`.
    pub fn product(&self, other: &Group) -> Result<Group> {
        let (n, m) = (self.order(), other.order());
        let mut table = vec![vec![0; n * m]; n * m];
        for (x, row) in table.iter_mut().enumerate() {
            for (y, cell) in row.iter_mut().enumerate() {
                let a = self.mul(x / m, y / m);
                let b = other.mul(x % m, y % m);
                *cell = a * m + b;
            }
        }
        Group::from_table(table)
    }

    /// Validates an explicit table. If the identity is not at index 0 the
    /// table is relabelled by swapping it there.
    pub fn from_table(mut table: Vec<Vec<usize>>) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::SizeCap {
                what: "group order",
                size: n as u128,
                limit: MAX_GROUP_ORDER as u128,
            });
        }
        if let Some(i) = table.iter().position(|row| row.len() != n) {
            return Err(Error::InvalidGroup(format!(
                "table is not square (row {i})"
            )));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidGroup("table entry out of range".into()));
        }

        let identity = (0..n)
            .find(|&e| (0..n).all(|j| table[e][j] == j && table[j][e] == j))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        if identity != 0 {
            table = relabel_swap(&table, 0, identity);
        }

        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                seen_row[table[i][j]] = true;
                seen_col[table[j][i]] = true;
            }
            if seen_row.contains(&false) || seen_col.contains(&false) {
                return Err(Error::InvalidGroup(format!(
                    "not a Latin square (element {i})"
                )));
            }
        }

        if let Some((a, b, c)) = associativity_violation(&table) {
            return Err(Error::InvalidGroup(format!(
                "not associative: ({a}*{b})*{c} != {a}*({b}*{c})"
            )));
        }

        let inverses = (0..n)
            .map(|i| {
                (0..n)
                    .find(|&j| table[i][j] == 0 && table[j][i] == 0)
                    .ok_or_else(|| Error::InvalidGroup(format!("element {i} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Group { table, inverses })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Table lookup. Panics on out-of-range indices; see [`Group::try_mul`].
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn try_mul(&self, i: usize, j: usize) -> Result<usize> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.mul(i, j))
    }

    pub fn try_inverse(&self, i: usize) -> Result<usize> {
        self.check_index(i)?;
        Ok(self.inverse(i))
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.order() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                order: self.order(),
            })
        }
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|i| self.elements().all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Order of the element `i`.
    pub fn element_order(&self, i: usize) -> usize {
        let mut k = 1;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            k += 1;
        }
        k
    }

    /// An element generating the whole group, if the group is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        self.elements()
            .find(|&g| self.element_order(g) == self.order())
    }

    /// `g^k` for `k >= 0`.
    pub fn power(&self, g: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, g))
    }

    /// Parses `{"type":"cyclic","order":n}`, `{"type":"product","factors":[...]}`
    /// or `{"type":"table","table":[[...]]}`.
    pub fn from_json(v: &Value) -> Result<Group> {
        Group::build(&GroupSpec::from_json(v)?)
    }
}

impl GroupSpec {
    pub fn from_json(v: &Value) -> Result<GroupSpec> {
        let kind = v
            .get("type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("group needs a \"type\" field".into()))?;
        match kind {
            "cyclic" => {
                let n = v
                    .get("order")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("cyclic group needs integer \"order\"".into()))?;
                Ok(GroupSpec::Cyclic(n as usize))
            }
            "product" => {
                let factors = v
                    .get("factors")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("product group needs a \"factors\" list".into()))?;
                let mut specs = factors.iter().map(GroupSpec::from_json);
                let first = specs.next().ok_or_else(|| {
                    Error::Parse("product group needs at least one factor".into())
                })??;
                specs.try_fold(first, |acc, next| {
                    Ok(GroupSpec::Product(Box::new(acc), Box::new(next?)))
                })
            }
            "table" => {
                let rows = v
                    .get("table")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::Parse("table group needs a \"table\" array".into()))?;
                let table = rows
                    .iter()
                    .map(|row| {
                        row.as_array()
                            .ok_or_else(|| Error::Parse("table rows must be arrays".into()))?
                            .iter()
                            .map(|x| {
                                x.as_u64().map(|x| x as usize).ok_or_else(|| {
                                    Error::Parse(
                                        "table entries must be non-negative integers".into(),
                                    )
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupSpec::Table(table))
            }
            other => Err(Error::Parse(format!("unknown group type {other:?}"))),
        }
    }
}

fn relabel_swap(table: &[Vec<usize>], a: usize, b: usize) -> Vec<Vec<usize>> {
    let swap = |x: usize| {
        if x == a {
            b
        } else if x == b {
            a
        } else {
            x
        }
    };
    let n = table.len();
    (0..n)
        .map(|i| (0..n).map(|j| swap(table[swap(i)][swap(j)])).collect())
        .collect()
}

fn associativity_violation(table: &[Vec<usize>]) -> Option<(usize, usize, usize)> {
    let n = table.len();
    for a in 0..n {
        for b in 0..n {
            let ab = table[a][b];
            for c in 0..n {
                if table[ab][c] != table[a][table[b][c]] {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}
