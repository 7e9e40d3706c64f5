//! Matrix models of the generic Hecke algebras.
//!
//! The algebra is built as a left module over the parabolic subalgebra
//! `H'` generated by `g0`, with module basis `z^k x`. Expanding each
//! `H'`-coefficient in the powers `T^q` gives the `R`-basis
//! `z^k g0^q x`, indexed `k·l + q·|X| + x` with `l = e·|X|`, and matrices
//! acting on row vectors: the image of a word `w1 … wn` is
//! `e_0·M_{w1}·…·M_{wn}`.

mod cache;
mod hpoly;
mod matrix;
mod table;

pub use cache::{cache_hash, cache_path, read_cache, write_cache};
pub use hpoly::{HPoly, Parabolic};
pub use matrix::{sparse_dot, unit, vec_mul, SparseMatrix, SparseVec};
pub use table::{Combo, HeckeTable, Rule, TableError};

use crate::catalog::{CatalogError, GroupSpec, CENTER_LETTER};
use crate::group::{Letter, Word};
use crate::laurent::VarSpec;
use serde::Serialize;
use std::collections::HashMap;

#[derive(Debug, thiserror::Error)]
pub enum HeckeError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("letter `{0}` has no matrix")]
    UnknownLetter(char),
    #[error("matrix cache: {0}")]
    Cache(String),
}

impl From<crate::laurent::LaurentError> for HeckeError {
    fn from(e: crate::laurent::LaurentError) -> Self {
        HeckeError::Catalog(e.into())
    }
}

/// Outcome of one defining relation checked on the matrices.
#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub name: String,
    pub pass: bool,
}

pub struct HeckeAlgebra {
    pub spec: &'static GroupSpec,
    pub vars: VarSpec,
    pub dim: usize,
    /// `|Z|`, the order of the central letter.
    pub m: usize,
    /// `l = e·|X|`, the size of one `z`-layer of the basis.
    pub layer: usize,
    table: Option<HeckeTable>,
    par: Parabolic,
    tree_words: Vec<Word>,
    mats: HashMap<Letter, SparseMatrix>,
}

impl HeckeAlgebra {
    /// Builds the coset table, saturates it and derives all matrices.
    pub fn build(spec: &'static GroupSpec) -> Result<HeckeAlgebra, HeckeError> {
        let table = HeckeTable::build(spec)?;
        let mut gens = HashMap::new();
        for g in &spec.generators {
            for inv in [false, true] {
                let l = Letter { name: g.name, inv };
                gens.insert(l, generator_matrix(&table, l)?);
            }
        }
        let mut alg = Self::from_generator_matrices(spec, gens)?;
        alg.table = Some(table);
        Ok(alg)
    }

    /// Assembles the algebra from the matrices of the group generators and
    /// their inverses, deriving central and redundant letters as products.
    pub fn from_generator_matrices(
        spec: &'static GroupSpec,
        gens: HashMap<Letter, SparseMatrix>,
    ) -> Result<HeckeAlgebra, HeckeError> {
        let vars = spec.var_spec()?;
        let nx = spec.coset_words.len();
        let e = spec.parabolic_order();
        let m = spec.center.order;
        let par = Parabolic::new(spec.hecke_coefficients(spec.parabolic)?);
        let mut alg = HeckeAlgebra {
            spec,
            vars,
            dim: m * e * nx,
            m,
            layer: e * nx,
            table: None,
            par,
            tree_words: spec.tree_words(),
            mats: gens,
        };
        for g in spec.generator_names() {
            for inv in [false, true] {
                let l = Letter { name: g, inv };
                let mat = alg.mats.get(&l).ok_or(HeckeError::UnknownLetter(g))?;
                if mat.dim() != alg.dim {
                    return Err(HeckeError::Cache(format!("matrix {l:?} has dimension {}", mat.dim())));
                }
            }
        }
        let mut derived: Vec<char> = spec.redundant.iter().map(|r| r.name).collect();
        derived.push(CENTER_LETTER);
        for c in derived {
            let w = spec.expand(&Word(vec![Letter::new(c)]));
            let fwd = alg.word_matrix(&w)?;
            let back = alg.word_matrix(&w.inverse())?;
            alg.mats.insert(Letter::new(c), fwd);
            alg.mats.insert(Letter::new(c).inverse(), back);
        }
        Ok(alg)
    }

    pub fn table(&self) -> Option<&HeckeTable> {
        self.table.as_ref()
    }

    pub fn parabolic(&self) -> &Parabolic {
        &self.par
    }

    pub fn nx(&self) -> usize {
        self.tree_words.len()
    }

    pub fn matrix(&self, l: Letter) -> Result<&SparseMatrix, HeckeError> {
        self.mats.get(&l).ok_or(HeckeError::UnknownLetter(l.name))
    }

    /// The generator matrices (group generators and their inverses).
    pub fn generator_matrices(&self) -> Vec<(Letter, &SparseMatrix)> {
        let mut out = Vec::new();
        for g in self.spec.generator_names() {
            for inv in [false, true] {
                let l = Letter { name: g, inv };
                out.push((l, &self.mats[&l]));
            }
        }
        out
    }

    /// Replaces one matrix; used to check that corrupted models are rejected.
    pub fn replace_matrix(&mut self, l: Letter, m: SparseMatrix) {
        self.mats.insert(l, m);
    }

    pub fn word_matrix(&self, w: &Word) -> Result<SparseMatrix, HeckeError> {
        let mut acc = SparseMatrix::identity(self.dim);
        for l in w.letters() {
            acc = acc.mul(self.matrix(*l)?);
        }
        Ok(acc)
    }

    /// `v·M_w`.
    pub fn act(&self, v: &SparseVec, w: &Word) -> Result<SparseVec, HeckeError> {
        let mut cur = v.clone();
        for l in w.letters() {
            cur = vec_mul(&cur, self.matrix(*l)?);
        }
        Ok(cur)
    }

    /// Coordinates of the image of `w` in the basis.
    pub fn express(&self, w: &Word) -> Result<SparseVec, HeckeError> {
        self.act(&unit(0), w)
    }

    pub fn basis_index(&self, k: usize, q: usize, x: usize) -> usize {
        k * self.layer + q * self.nx() + x
    }

    /// `(k, q, x)` of a basis index.
    pub fn basis_parts(&self, i: usize) -> (usize, usize, usize) {
        let nx = self.nx();
        (i / self.layer, (i % self.layer) / nx, i % nx)
    }

    /// The word `z^k g0^q x` of basis element `i`.
    pub fn basis_word(&self, i: usize) -> Word {
        let (k, q, x) = self.basis_parts(i);
        let z = Word(vec![Letter::new(CENTER_LETTER); k]);
        let g = Word(vec![Letter::new(self.spec.parabolic); q]);
        z.concat(&g).concat(&self.tree_words[x])
    }

    /// The defining relations of the algebra evaluated on the matrices,
    /// plus the check that every basis word expresses to its unit vector.
    pub fn check_relations(&self) -> Result<Vec<RelationCheck>, HeckeError> {
        let mut out = Vec::new();
        let n = self.dim;
        for g in &self.spec.generators {
            let l = Letter::new(g.name);
            let mg = self.matrix(l)?;
            let a = self.spec.hecke_coefficients(g.name)?;
            let mut powers = vec![SparseMatrix::identity(n)];
            for _ in 0..g.order {
                let next = powers.last().expect("nonempty").mul(mg);
                powers.push(next);
            }
            let mut rhs = SparseMatrix::from_rows(vec![Vec::new(); n]);
            for (k, c) in a.iter().enumerate() {
                rhs = rhs.add(&powers[k].scale(c));
            }
            out.push(RelationCheck { name: format!("hecke {}", g.name), pass: powers[g.order] == rhs });
            let inv = self.matrix(l.inverse())?;
            out.push(RelationCheck {
                name: format!("inverse {}", g.name),
                pass: mg.mul(inv).is_identity() && inv.mul(mg).is_identity(),
            });
        }
        for (l, r) in &self.spec.braid_relations {
            let pass = self.word_matrix(&self.spec.expand(l))? == self.word_matrix(&self.spec.expand(r))?;
            out.push(RelationCheck { name: format!("braid {l} = {r}"), pass });
        }
        for (l, r) in &self.spec.hints {
            let pass = self.word_matrix(&self.spec.expand(l))? == self.word_matrix(&self.spec.expand(r))?;
            out.push(RelationCheck { name: format!("hint {l} = {r}"), pass });
        }
        let mz = self.matrix(Letter::new(CENTER_LETTER))?;
        for g in self.spec.generator_names() {
            let mg = self.matrix(Letter::new(g))?;
            out.push(RelationCheck { name: format!("central z {g}"), pass: mz.mul(mg) == mg.mul(mz) });
        }
        let basis_ok = (0..n).all(|i| self.express(&self.basis_word(i)).map(|v| v == unit(i)).unwrap_or(false));
        out.push(RelationCheck { name: "basis words".into(), pass: basis_ok });
        if let Some(t) = &self.table {
            out.push(RelationCheck { name: "table agrees with matrices".into(), pass: self.table_consistent(t)? });
        }
        Ok(out)
    }

    /// Every filled cell of the table, including central and redundant
    /// columns, agrees with the action of the matrices on `z^k x`.
    fn table_consistent(&self, t: &HeckeTable) -> Result<bool, HeckeError> {
        for row in 0..t.rows() {
            let (k, x) = (row / t.nx, row % t.nx);
            let v = unit(self.basis_index(k, 0, x));
            for &l in t.letters() {
                let Some(cell) = t.cell(row, l) else { continue };
                if vec_mul(&v, self.matrix(l)?) != combo_to_vec(self, cell, 0) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Coordinates of `T^q · Σ h_j b_j`.
fn combo_to_vec(alg: &HeckeAlgebra, combo: &Combo, q: usize) -> SparseVec {
    let tq = alg.par.power(q);
    let nx = alg.nx();
    let mut out = Vec::new();
    for (r, h) in combo {
        let h = alg.par.mul(&tq, h);
        let (k, x) = (r / nx, r % nx);
        for (q2, c) in h.0.into_iter().enumerate() {
            if !c.is_zero() {
                out.push((alg.basis_index(k, q2, x), c));
            }
        }
    }
    out.sort_by_key(|(i, _)| *i);
    out
}

fn generator_matrix(t: &HeckeTable, l: Letter) -> Result<SparseMatrix, HeckeError> {
    let nx = t.nx;
    let e = t.par.order();
    let layer = e * nx;
    let n = t.m * layer;
    let powers: Vec<HPoly> = (0..e).map(|q| t.par.power(q)).collect();
    let mut rows = vec![Vec::new(); n];
    for row in 0..t.rows() {
        let (k, x) = (row / nx, row % nx);
        let cell = t.cell(row, l).ok_or_else(|| TableError::Stalled { missing: vec![format!("row {row} letter {l:?}")] })?;
        for (q, tq) in powers.iter().enumerate() {
            let i = k * layer + q * nx + x;
            for (r, h) in cell {
                let h = t.par.mul(tq, h);
                let (k2, x2) = (r / nx, r % nx);
                for (q2, c) in h.0.into_iter().enumerate() {
                    if !c.is_zero() {
                        rows[i].push((k2 * layer + q2 * nx + x2, c));
                    }
                }
            }
        }
    }
    Ok(SparseMatrix::from_rows(rows))
}

#[cfg(test)]
mod tests;
