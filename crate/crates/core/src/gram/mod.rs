//! The Gram matrix `A = (τ(b b'))` of the canonical linear form on the
//! z-basis, computed blockwise.
//!
//! With `l = e·|X|` elements `y_1 = 1, …, y_l` in one z-layer and `m = |Z|`,
//! the entry of `A` at `(z^{k1} y_{i1}, z^{k2} y_{i2})` is
//! `τ(z^{k1+k2} y_{i1} y_{i2})`, so `A` is block Hankel with blocks
//! `A^0 … A^{2m-2}`. The first `m` blocks come from the matrices directly;
//! the rest follow from `z^m y_i = Σ ζ^p_{iq} z^p y_q` as
//! `A^{α+m} = Σ_p Z^p A^{α+p}`.

mod det;
mod specialized;

pub use det::{
    determinant_exact, determinant_mod_p, modular_check, trials_for_bound, DegreeBound, DetError, ModularVerdict,
    MonomialProbe,
};
pub use specialized::{specialized_block_check, SpecializedError, SpecializedReport};

use crate::hecke::{HeckeAlgebra, HeckeError, SparseVec};
use crate::group::{Letter, Word};
use crate::catalog::CENTER_LETTER;
use crate::laurent::LaurentPoly;
use rayon::prelude::*;

/// Dense `l×l` block.
pub type Block = Vec<Vec<LaurentPoly>>;

/// `τ` reads the coordinate of the basis element `1`.
pub fn tau(v: &SparseVec) -> LaurentPoly {
    match v.first() {
        Some((0, c)) => c.clone(),
        _ => LaurentPoly::zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramBlocks {
    pub l: usize,
    pub m: usize,
    /// `A^0 … A^{2m-2}`.
    pub blocks: Vec<Block>,
}

/// `Z^0 … Z^{m-1}` with `(Z^p)_{iq} = ζ^p_{iq}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMatrix {
    pub l: usize,
    pub m: usize,
    pub blocks: Vec<Block>,
}

fn zero_block(l: usize) -> Block {
    vec![vec![LaurentPoly::zero(); l]; l]
}

/// Column 0 of `M_w`: entry `a` is `τ(b_a · w)`.
pub(crate) fn tau_column(alg: &HeckeAlgebra, w: &Word) -> Result<SparseVec, HeckeError> {
    let mut c = crate::hecke::unit(0);
    for l in w.letters().iter().rev() {
        c = alg.matrix(*l)?.mul_vec(&c);
    }
    Ok(c)
}

/// `A^0 … A^{m-1}` from the matrices: `(A^k)_{i1 i2} = τ(z^k y_{i1} · y_{i2})`.
pub fn base_blocks(alg: &HeckeAlgebra) -> Result<Vec<Block>, HeckeError> {
    let (l, m) = (alg.layer, alg.m);
    let cols: Vec<SparseVec> = (0..l).into_par_iter().map(|i| tau_column(alg, &alg.basis_word(i))).collect::<Result<_, _>>()?;
    let mut blocks = vec![zero_block(l); m];
    for (i2, c) in cols.iter().enumerate() {
        for (a, v) in c {
            let (k, i1) = (a / l, a % l);
            blocks[k][i1][i2] = v.clone();
        }
    }
    Ok(blocks)
}

/// Rows `z^m y_i = (z^{m-1} y_i)·z` split by z-power.
pub fn z_matrix(alg: &HeckeAlgebra) -> Result<ZMatrix, HeckeError> {
    let (l, m) = (alg.layer, alg.m);
    let mz = alg.matrix(Letter::new(CENTER_LETTER))?;
    let mut blocks = vec![zero_block(l); m];
    for i in 0..l {
        for (a, v) in mz.row((m - 1) * l + i) {
            blocks[a / l][i][a % l] = v.clone();
        }
    }
    Ok(ZMatrix { l, m, blocks })
}

impl ZMatrix {
    /// `express(z^m y_i)` rebuilt from the ζ coefficients.
    pub fn row_vector(&self, i: usize) -> SparseVec {
        let mut out = Vec::new();
        for (p, b) in self.blocks.iter().enumerate() {
            for (q, c) in b[i].iter().enumerate() {
                if !c.is_zero() {
                    out.push((p * self.l + q, c.clone()));
                }
            }
        }
        out
    }

    /// Checks `Σ ζ^p_{iq} z^p y_q = express(z^m y_i)` for every `i`.
    pub fn reconstructs(&self, alg: &HeckeAlgebra) -> Result<bool, HeckeError> {
        for i in 0..self.l {
            let w = Word(vec![Letter::new(CENTER_LETTER); self.m]).concat(&alg.basis_word(i));
            if alg.express(&w)? != self.row_vector(i) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `Σ_p Z^p · A^{α+p}` from the `m` consecutive blocks `A^α … A^{α+m-1}`.
pub fn recurse_block(z: &ZMatrix, known: &[Block]) -> Block {
    assert_eq!(known.len(), z.m, "recursion needs m consecutive blocks");
    let l = z.l;
    (0..l)
        .into_par_iter()
        .map(|i1| {
            (0..l)
                .map(|i2| {
                    let pairs = (0..z.m).flat_map(|p| {
                        let zp = &z.blocks[p][i1];
                        let a = &known[p];
                        (0..l).filter(move |&q| !zp[q].is_zero()).map(move |q| (&zp[q], &a[q][i2]))
                    });
                    LaurentPoly::dot(pairs)
                })
                .collect()
        })
        .collect()
}

/// The base blocks and the ζ coefficients: everything the recursion needs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramRecurrence {
    pub l: usize,
    pub m: usize,
    /// `A^0 … A^{m-1}`.
    pub base: Vec<Block>,
    pub z: ZMatrix,
}

pub fn gram_recurrence(alg: &HeckeAlgebra) -> Result<GramRecurrence, HeckeError> {
    Ok(GramRecurrence { l: alg.layer, m: alg.m, base: base_blocks(alg)?, z: z_matrix(alg)? })
}

impl GramRecurrence {
    /// Runs the recursion over the Laurent ring. With a budget on the total
    /// number of terms held, stops before the first block that would exceed
    /// it, so the result may hold fewer than `2m-1` blocks. The size of the
    /// next block is predicted from the growth of the last two, so a block
    /// that will not fit is usually not computed at all.
    pub fn exact_blocks(&self, max_terms: Option<usize>) -> GramBlocks {
        let size = |b: &Block| b.iter().flatten().map(LaurentPoly::len).sum::<usize>();
        let mut blocks = self.base.clone();
        let mut sizes: Vec<usize> = blocks.iter().map(size).collect();
        let mut total: usize = sizes.iter().sum();
        for alpha in 0..self.m.saturating_sub(1) {
            if let Some(cap) = max_terms {
                let last = sizes.last().copied().unwrap_or(0);
                let prev = sizes.len().checked_sub(2).map_or(last, |i| sizes[i]).max(1);
                let predicted = (last as f64 * last as f64 / prev as f64) as usize;
                if total + predicted.max(last) > cap {
                    break;
                }
            }
            let next = recurse_block(&self.z, &blocks[alpha..alpha + self.m]);
            let n = size(&next);
            if max_terms.is_some_and(|cap| total + n > cap) {
                break;
            }
            total += n;
            sizes.push(n);
            blocks.push(next);
        }
        GramBlocks { l: self.l, m: self.m, blocks }
    }
}

/// All `2m-1` blocks: base blocks, then the recursion for `α = 0 … m-2`.
pub fn gram_blocks(alg: &HeckeAlgebra) -> Result<GramBlocks, HeckeError> {
    Ok(gram_recurrence(alg)?.exact_blocks(None))
}

/// `A^k` entry by entry through the matrices, without the recursion.
pub fn naive_block(alg: &HeckeAlgebra, k: usize) -> Result<Block, HeckeError> {
    let (l, m) = (alg.layer, alg.m);
    let mz = alg.matrix(Letter::new(CENTER_LETTER))?;
    let words: Vec<_> = (0..l).map(|i| alg.basis_word(i)).collect();
    (0..l)
        .into_par_iter()
        .map(|i1| {
            let v = if k < m {
                crate::hecke::unit(k * l + i1)
            } else {
                let mut v = crate::hecke::unit((m - 1) * l + i1);
                for _ in 0..(k - m + 1) {
                    v = crate::hecke::vec_mul(&v, mz);
                }
                v
            };
            words.iter().map(|w| Ok(tau(&alg.act(&v, w)?))).collect()
        })
        .collect()
}

impl GramBlocks {
    /// First `(k, i, j)` with `(A^k)_{ij} != (A^k)_{ji}`.
    pub fn first_asymmetry(&self) -> Option<(usize, usize, usize)> {
        for (k, b) in self.blocks.iter().enumerate() {
            for i in 0..self.l {
                for j in (i + 1)..self.l {
                    if b[i][j] != b[j][i] {
                        return Some((k, i, j));
                    }
                }
            }
        }
        None
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    /// Whether all `2m-1` blocks are present.
    pub fn is_complete(&self) -> bool {
        self.blocks.len() == 2 * self.m - 1
    }

    pub fn dim(&self) -> usize {
        self.l * self.m
    }

    /// Entry of the full matrix at basis indices `(r, c)`.
    pub fn entry(&self, r: usize, c: usize) -> &LaurentPoly {
        let (k1, i1) = (r / self.l, r % self.l);
        let (k2, i2) = (c / self.l, c % self.l);
        &self.blocks[k1 + k2][i1][i2]
    }

    /// The full `|W|×|W|` matrix. Needs every block.
    pub fn assemble(&self) -> Vec<Vec<LaurentPoly>> {
        let n = self.dim();
        (0..n).map(|r| (0..n).map(|c| self.entry(r, c).clone()).collect()).collect()
    }
}

#[cfg(test)]
mod tests;
