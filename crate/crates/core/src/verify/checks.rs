//! The trace and conjecture checks that run on a built algebra.

use crate::catalog::{CatalogError, RealizedGroup, CENTER_LETTER};
use crate::gram::tau;
use crate::group::{FiniteGroup, Letter, Word};
use crate::hecke::{vec_mul, HeckeAlgebra, HeckeError, SparseVec};
use crate::laurent::LaurentPoly;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct TraceIdentity {
    pub pass: bool,
    /// Number of values `τ(z^k (y_i g - g y_i))` compared with zero.
    pub checked: usize,
    /// First layer index and generator with a nonzero value.
    pub first_failure: Option<(usize, String)>,
}

/// Proves `τ(xy) = τ(yx)` for all `x, y`, hence symmetry of every Gram
/// block, without expanding the blocks.
///
/// By linearity and induction on word length it suffices that
/// `τ(b g) = τ(g b)` for every basis element `b = z^k y_i` and generator
/// `g`. As `z` is central this is `τ(z^k (y_i g - g y_i)) = 0` for
/// `0 ≤ k < m`, which only involves short products. Centrality of `M_z`
/// is part of the relations check.
pub fn trace_identity(alg: &HeckeAlgebra) -> Result<TraceIdentity, HeckeError> {
    let gens: Vec<Letter> = alg.spec.generator_names().into_iter().map(Letter::new).collect();
    let mz = alg.matrix(Letter::new(CENTER_LETTER))?;
    let pairs: Vec<(usize, Letter)> = (0..alg.layer).flat_map(|i| gens.iter().map(move |g| (i, *g))).collect();
    let failures: Vec<Option<(usize, String)>> = pairs
        .par_iter()
        .map(|&(i, g)| -> Result<Option<(usize, String)>, HeckeError> {
            let y = alg.basis_word(i);
            let gw = Word(vec![g]);
            let mut d = vec_sub(&alg.express(&y.concat(&gw))?, &alg.express(&gw.concat(&y))?);
            for k in 0..alg.m {
                if k > 0 {
                    d = vec_mul(&d, mz);
                }
                if !tau(&d).is_zero() {
                    return Ok(Some((i, g.to_string())));
                }
            }
            Ok(None)
        })
        .collect::<Result<_, _>>()?;
    let first_failure = failures.into_iter().flatten().next();
    Ok(TraceIdentity { pass: first_failure.is_none(), checked: pairs.len() * alg.m, first_failure })
}

/// `a - b` for sparse vectors sorted by index.
fn vec_sub(a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out: std::collections::BTreeMap<usize, LaurentPoly> = a.iter().cloned().collect();
    for (i, v) in b {
        let e = out.entry(*i).or_insert_with(LaurentPoly::zero);
        *e = &*e - v;
    }
    out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

#[derive(Clone, Debug)]
pub struct Condition3 {
    pub pass: bool,
    /// `τ(z^m)`, which must not vanish.
    pub tau_pi: LaurentPoly,
    /// Number of pairs `(k, i)` required to vanish.
    pub checked: usize,
    /// First `(k, i)` with `τ(y_i^{-1} z^{m-k}) != 0`.
    pub first_nonzero: Option<(usize, usize)>,
}

/// `τ(y_i^{-1} z^{m-k}) = 0` for `0 ≤ k < m` and every layer element `y_i`,
/// except `(k, i) = (0, 0)` where the value `τ(z^m)` must be nonzero.
pub fn condition3_check(alg: &HeckeAlgebra) -> Result<Condition3, HeckeError> {
    let ys: Vec<Word> = (0..alg.layer).map(|i| alg.basis_word(i)).collect();
    condition3_for_words(alg, &ys)
}

/// The vanishing criterion for an arbitrary list of words in place of the
/// layer basis; `ys[0]` plays the role of `1`.
pub fn condition3_for_words(alg: &HeckeAlgebra, ys: &[Word]) -> Result<Condition3, HeckeError> {
    let m = alg.m;
    let mz = alg.matrix(Letter::new(CENTER_LETTER))?;
    let rows: Vec<Vec<LaurentPoly>> = ys
        .par_iter()
        .map(|y| -> Result<Vec<LaurentPoly>, HeckeError> {
            // after j multiplications by z the value belongs to k = m - j
            let mut v: SparseVec = alg.express(&y.inverse())?;
            let mut by_k = vec![LaurentPoly::zero(); m];
            for j in 1..=m {
                v = vec_mul(&v, mz);
                by_k[m - j] = tau(&v);
            }
            Ok(by_k)
        })
        .collect::<Result<_, _>>()?;
    let tau_pi = rows.first().map(|r| r[0].clone()).unwrap_or_else(LaurentPoly::zero);
    let mut first_nonzero = None;
    'scan: for k in 0..m {
        for (i, r) in rows.iter().enumerate() {
            if (k, i) != (0, 0) && !r[k].is_zero() {
                first_nonzero = Some((k, i));
                break 'scan;
            }
        }
    }
    Ok(Condition3 {
        pass: first_nonzero.is_none() && !tau_pi.is_zero(),
        tau_pi,
        checked: m * ys.len() - 1,
        first_nonzero,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Lifting {
    pub pass: bool,
    pub identity_present: bool,
    /// Number of distinct group elements hit by the words.
    pub distinct: usize,
    pub words: usize,
    pub group_order: usize,
}

/// The basis words, evaluated to `images` in `g`, form a section of the
/// group: they hit every element exactly once and one of them is `1`.
pub fn lifting_check(g: &FiniteGroup, images: &[usize]) -> Lifting {
    let mut seen = vec![false; g.order()];
    let mut distinct = 0;
    for &e in images {
        if e < seen.len() && !seen[e] {
            seen[e] = true;
            distinct += 1;
        }
    }
    // element 0 is the identity
    let identity_present = seen.first().copied().unwrap_or(false);
    Lifting {
        pass: identity_present && distinct == g.order() && images.len() == g.order(),
        identity_present,
        distinct,
        words: images.len(),
        group_order: g.order(),
    }
}

/// Images of the basis words of `alg` in the realized group.
pub fn basis_images(alg: &HeckeAlgebra, group: &RealizedGroup) -> Result<Vec<usize>, CatalogError> {
    (0..alg.dim).map(|i| group.eval(&alg.basis_word(i))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceSample {
    pub pass: bool,
    pub pairs: usize,
    pub max_len: usize,
    pub seed: u64,
    pub first_failure: Option<(String, String)>,
}

/// A word of length at most `max_len` in the group generators and their
/// inverses.
pub fn random_word<R: Rng>(gens: &[char], max_len: usize, rng: &mut R) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word(
        (0..len)
            .map(|_| Letter { name: gens[rng.gen_range(0..gens.len())], inv: rng.gen_bool(0.5) })
            .collect(),
    )
}

/// `τ(w1·w2) = τ(w2·w1)` on `pairs` random pairs of words.
pub fn trace_sampling(alg: &HeckeAlgebra, pairs: usize, max_len: usize, seed: u64) -> Result<TraceSample, HeckeError> {
    let gens = alg.spec.generator_names();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<(Word, Word)> =
        (0..pairs).map(|_| (random_word(&gens, max_len, &mut rng), random_word(&gens, max_len, &mut rng))).collect();
    let agree: Vec<bool> = words
        .par_iter()
        .map(|(a, b)| -> Result<bool, HeckeError> {
            Ok(tau(&alg.express(&a.concat(b))?) == tau(&alg.express(&b.concat(a))?))
        })
        .collect::<Result<_, _>>()?;
    let first_failure = agree.iter().position(|ok| !ok).map(|i| (words[i].0.to_string(), words[i].1.to_string()));
    Ok(TraceSample { pass: first_failure.is_none(), pairs, max_len, seed, first_failure })
}
