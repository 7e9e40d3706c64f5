//! Sparse square matrices over the Laurent ring, acting on row vectors.

use crate::laurent::LaurentPoly;
use rayon::prelude::*;

/// Sparse row vector, sorted by index, without zero entries.
pub type SparseVec = Vec<(usize, LaurentPoly)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    n: usize,
    rows: Vec<SparseVec>,
}

fn normalize(mut v: Vec<(usize, LaurentPoly)>) -> SparseVec {
    v.sort_by_key(|(i, _)| *i);
    let mut out: SparseVec = Vec::with_capacity(v.len());
    for (i, p) in v {
        match out.last_mut() {
            Some((j, q)) if *j == i => q.add_assign_ref(&p),
            _ => out.push((i, p)),
        }
    }
    out.retain(|(_, p)| !p.is_zero());
    out
}

/// `Σ c_i · rows_i` of a matrix, i.e. `v·M`.
pub fn vec_mul(v: &SparseVec, m: &SparseMatrix) -> SparseVec {
    let mut acc: Vec<(usize, LaurentPoly)> = Vec::new();
    for (i, c) in v {
        for (j, p) in &m.rows[*i] {
            acc.push((*j, if c.is_one() { p.clone() } else { c * p }));
        }
    }
    normalize(acc)
}

/// Unit vector `e_i`.
pub fn unit(i: usize) -> SparseVec {
    vec![(i, LaurentPoly::one())]
}

impl SparseMatrix {
    /// Rows are normalized on construction.
    pub fn from_rows(rows: Vec<Vec<(usize, LaurentPoly)>>) -> SparseMatrix {
        let n = rows.len();
        let rows: Vec<SparseVec> = rows.into_iter().map(normalize).collect();
        debug_assert!(rows.iter().flatten().all(|(j, _)| *j < n));
        SparseMatrix { n, rows }
    }

    pub fn identity(n: usize) -> SparseMatrix {
        SparseMatrix { n, rows: (0..n).map(unit).collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> LaurentPoly {
        match self.rows[i].binary_search_by_key(&j, |(k, _)| *k) {
            Ok(p) => self.rows[i][p].1.clone(),
            Err(_) => LaurentPoly::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.n, other.n);
        let rows = self.rows.par_iter().map(|r| vec_mul(r, other)).collect();
        SparseMatrix { n: self.n, rows }
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| normalize(a.iter().chain(b).cloned().collect()))
            .collect();
        SparseMatrix { n: self.n, rows }
    }

    pub fn scale(&self, c: &LaurentPoly) -> SparseMatrix {
        let rows = self.rows.iter().map(|r| normalize(r.iter().map(|(j, p)| (*j, p * c)).collect())).collect();
        SparseMatrix { n: self.n, rows }
    }

    pub fn pow(&self, k: usize) -> SparseMatrix {
        let mut acc = SparseMatrix::identity(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, r)| r.len() == 1 && r[0].0 == i && r[0].1.is_one())
    }

    /// Column `j` as a sparse vector.
    pub fn column(&self, j: usize) -> SparseVec {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            if let Ok(p) = r.binary_search_by_key(&j, |(k, _)| *k) {
                out.push((i, r[p].1.clone()));
            }
        }
        out
    }

    /// `M·v` for a column vector `v`.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| {
                let s = sparse_dot(r, v);
                (!s.is_zero()).then_some((i, s))
            })
            .collect()
    }
}

/// `Σ a_i b_i` over the common indices of two sparse vectors.
pub fn sparse_dot(a: &SparseVec, b: &SparseVec) -> LaurentPoly {
    let (mut i, mut j) = (0, 0);
    let mut pairs = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                pairs.push((&a[i].1, &b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    LaurentPoly::dot(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(entries: &[&[i64]]) -> SparseMatrix {
        SparseMatrix::from_rows(
            entries
                .iter()
                .map(|r| r.iter().enumerate().map(|(j, &c)| (j, LaurentPoly::constant(c))).collect())
                .collect(),
        )
    }

    #[test]
    fn products() {
        let a = m(&[&[1, 2], &[0, 1]]);
        let b = m(&[&[1, -2], &[0, 1]]);
        assert!(a.mul(&b).is_identity());
        assert_eq!(a.pow(3), m(&[&[1, 6], &[0, 1]]));
        assert_eq!(vec_mul(&unit(0), &a), vec![(0, LaurentPoly::one()), (1, LaurentPoly::constant(2))]);
        assert_eq!(a.mul_vec(&unit(1)), a.column(1));
        assert_eq!(a.add(&b), m(&[&[2, 0], &[0, 2]]));
        assert_eq!(a.get(0, 1), LaurentPoly::constant(2));
        assert_eq!(a.nnz(), 3);
    }
}
