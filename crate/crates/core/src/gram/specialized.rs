//! Block structure of the maximal group's Gram matrix after specializing its
//! parameters to those of a normal subgroup `G_j` of index `ℓ`.
//!
//! Every basis element of the maximal group lies in one coset `z^α G_j`
//! (`0 ≤ α < ℓ`). Under the specialization, `τ` vanishes on products of
//! elements from classes `α, α'` unless `ℓ` divides `α + α'`, and on the
//! class-0 elements it restricts to the Gram matrix of `G_j`.

use super::{tau_column, GramBlocks};
use crate::catalog::{CatalogError, RealizedGroup, CENTER_LETTER};
use crate::group::{Letter, Word};
use crate::hecke::{sparse_dot, HeckeAlgebra, HeckeError, SparseVec};
use crate::laurent::LaurentPoly;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum SpecializedError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error("specialization is not defined on {0}")]
    Undefined(String),
    #[error("{0} is not a subgroup of index {1} split by powers of z")]
    NotSplit(String, usize),
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecializedReport {
    pub group: String,
    pub maximal: String,
    pub index: usize,
    /// Vanishing of the specialized entries between classes `α, α'` with
    /// `α + α' ≢ 0 (mod ℓ)`.
    pub zero_pattern: bool,
    /// First offending pair of basis indices of the maximal group.
    pub first_violation: Option<(usize, usize)>,
    /// The specialized trace on products of the subgroup's basis words
    /// equals the subgroup's Gram matrix.
    pub leading_block: bool,
    /// How many of the subgroup's basis words specialize to a single basis
    /// element of the maximal group.
    pub embedded_basis: usize,
    pub basis_size: usize,
    pub pass: bool,
}

fn ambient_word(alg: &HeckeAlgebra, w: &Word) -> Word {
    let spec = alg.spec;
    let mut out = Vec::new();
    for l in spec.expand(w).letters() {
        let g = spec.generator(l.name).expect("expanded words use group generators");
        let a = if l.inv { g.ambient.inverse() } else { g.ambient.clone() };
        out.extend_from_slice(a.letters());
    }
    Word(out)
}

fn specialize(p: &LaurentPoly, theta: &[LaurentPoly]) -> Result<LaurentPoly, SpecializedError> {
    p.substitute(theta).ok_or_else(|| SpecializedError::Undefined(format!("{p:?}")))
}

fn specialize_vec(v: &SparseVec, theta: &[LaurentPoly]) -> Result<SparseVec, SpecializedError> {
    let mut out = Vec::new();
    for (i, c) in v {
        let s = specialize(c, theta)?;
        if !s.is_zero() {
            out.push((*i, s));
        }
    }
    Ok(out)
}

/// `theta[v]` is the image of the maximal group's variable `v` in the ring of
/// the subgroup.
pub fn specialized_block_check(
    sub: &HeckeAlgebra,
    sub_gram: &GramBlocks,
    max: &HeckeAlgebra,
    max_gram: &GramBlocks,
    theta: &[LaurentPoly],
) -> Result<SpecializedReport, SpecializedError> {
    let ell = sub.spec.index;
    let big = RealizedGroup::new(max.spec, 10)?;
    let g = &big.group;
    let gens: Vec<usize> =
        sub.spec.generators.iter().map(|x| g.eval(&x.ambient)).collect::<Result<_, _>>().map_err(CatalogError::from)?;
    let mut in_sub = vec![false; g.order()];
    for e in g.closure(&gens) {
        in_sub[e] = true;
    }
    let z = big.eval(&Word(vec![Letter::new(CENTER_LETTER)]))?;
    let zinv = g.inverse(z);
    let class = |e: usize| -> Option<usize> {
        let mut cur = e;
        for alpha in 0..ell {
            if in_sub[cur] {
                return Some(alpha);
            }
            cur = g.mul(zinv, cur);
        }
        None
    };
    let n = max.dim;
    let mut classes = Vec::with_capacity(n);
    for b in 0..n {
        let e = big.eval(&max.basis_word(b))?;
        classes.push(class(e).ok_or_else(|| SpecializedError::NotSplit(sub.spec.id.clone(), ell))?);
    }

    // θ of every distinct block entry, computed once
    let theta_blocks: Vec<Vec<Vec<LaurentPoly>>> = max_gram
        .blocks
        .par_iter()
        .map(|b| b.iter().map(|r| r.iter().map(|e| specialize(e, theta)).collect::<Result<Vec<_>, _>>()).collect())
        .collect::<Result<_, _>>()?;
    let mut first_violation = None;
    'outer: for r in 0..n {
        for c in 0..n {
            if (classes[r] + classes[c]) % ell == 0 {
                continue;
            }
            let (k1, i1) = (r / max_gram.l, r % max_gram.l);
            let (k2, i2) = (c / max_gram.l, c % max_gram.l);
            if !theta_blocks[k1 + k2][i1][i2].is_zero() {
                first_violation = Some((r, c));
                break 'outer;
            }
        }
    }

    let words: Vec<Word> = (0..sub.dim).map(|i| ambient_word(sub, &sub.basis_word(i))).collect();
    let vecs: Vec<SparseVec> = words.par_iter().map(|w| max.express(w)).collect::<Result<_, _>>()?;
    let cols: Vec<SparseVec> = words.par_iter().map(|w| tau_column(max, w)).collect::<Result<_, _>>()?;
    let mut embedded_basis = 0;
    for v in &vecs {
        let s = specialize_vec(v, theta)?;
        if s.len() == 1 && s[0].1.is_one() {
            embedded_basis += 1;
        }
    }
    let leading_block = (0..sub.dim)
        .into_par_iter()
        .map(|i| -> Result<bool, SpecializedError> {
            for j in 0..sub.dim {
                let t = sparse_dot(&vecs[i], &cols[j]);
                if specialize(&t, theta)? != *sub_gram.entry(i, j) {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<Vec<bool>, _>>()?
        .into_iter()
        .all(|b| b);
    let zero_pattern = first_violation.is_none();
    Ok(SpecializedReport {
        group: sub.spec.id.clone(),
        maximal: max.spec.id.clone(),
        index: ell,
        zero_pattern,
        first_violation,
        leading_block,
        embedded_basis,
        basis_size: sub.dim,
        pass: zero_pattern && leading_block,
    })
}
