//! Determinants of the Gram matrix: exact fraction-free elimination over the
//! Laurent ring, and randomized evaluation over a prime field.

use super::{Block, GramRecurrence};
use crate::laurent::{mod_inv, mod_pow, mul_mod, FieldPoint, LaurentError, LaurentPoly, VarSpec, MAX_VARS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetError {
    #[error("intermediate entry exceeded {0} terms; use the modular check")]
    ResourceCap(usize),
    #[error("inexact division during elimination")]
    Inexact,
    #[error("degree bound {bound} is not below the field size {prime}")]
    BoundTooLarge { bound: u64, prime: u64 },
    #[error("invalid prime {0}")]
    BadPrime(u64),
    #[error(transparent)]
    Laurent(#[from] crate::laurent::LaurentError),
}

/// Bareiss elimination. `max_terms` caps the size of any intermediate entry.
pub fn determinant_exact(mut a: Vec<Vec<LaurentPoly>>, max_terms: usize) -> Result<LaurentPoly, DetError> {
    let n = a.len();
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let mut negate = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            // the sparsest nonzero pivot keeps intermediate entries small
            let Some(r) = (k + 1..n).filter(|&r| !a[r][k].is_zero()).min_by_key(|&r| a[r][k].len()) else {
                return Ok(LaurentPoly::zero());
            };
            a.swap(k, r);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        rest.par_iter_mut().try_for_each(|row| -> Result<(), DetError> {
            let lead = row[k].clone();
            for j in k + 1..n {
                let num = &(&row[j] * pivot) - &(&lead * &pivot_row[j]);
                let v = if prev.is_one() { num } else { num.div_exact(&prev).ok_or(DetError::Inexact)? };
                if v.len() > max_terms {
                    return Err(DetError::ResourceCap(max_terms));
                }
                row[j] = v;
            }
            row[k] = LaurentPoly::zero();
            Ok(())
        })?;
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

/// Gaussian elimination over `F_p`.
pub fn determinant_mod_p(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for k in 0..n {
        let Some(r) = (k..n).find(|&r| a[r][k] != 0) else { return 0 };
        if r != k {
            a.swap(k, r);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[k][k], p);
        let inv = mod_inv(a[k][k], p).expect("nonzero pivot in a prime field");
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot = &top[k];
        rest.par_iter_mut().for_each(|row| {
            if row[k] == 0 {
                return;
            }
            let f = mul_mod(row[k], inv, p);
            for j in k..n {
                if pivot[j] != 0 {
                    row[j] = (row[j] + p - mul_mod(f, pivot[j], p)) % p;
                }
            }
        });
    }
    det
}

/// Per-row bounds of one block: the largest total degree and the lowest
/// exponent of each variable over the row's entries; `None` for zero rows.
type RowBound = Option<(i64, [i64; MAX_VARS])>;

fn entry_bound(p: &LaurentPoly, nvars: usize) -> RowBound {
    let r = p.exponent_range()?;
    let mut lo = [0i64; MAX_VARS];
    for v in 0..nvars {
        lo[v] = r.min[v] as i64;
    }
    Some((r.max_total as i64, lo))
}

fn merge(a: RowBound, b: RowBound) -> RowBound {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some((h1, l1)), Some((h2, l2))) => {
            let mut lo = l1;
            for v in 0..MAX_VARS {
                lo[v] = lo[v].min(l2[v]);
            }
            Some((h1.max(h2), lo))
        }
    }
}

fn product_bound(a: RowBound, b: RowBound) -> RowBound {
    let ((h1, l1), (h2, l2)) = (a?, b?);
    let mut lo = l1;
    for v in 0..MAX_VARS {
        lo[v] += l2[v];
    }
    Some((h1 + h2, lo))
}

/// Row bounds of all `2m-1` blocks, propagated through the recursion so
/// the high blocks never have to be expanded over the Laurent ring.
fn block_row_bounds(rec: &GramRecurrence, nvars: usize) -> Vec<Vec<RowBound>> {
    let (l, m) = (rec.l, rec.m);
    let mut rows: Vec<Vec<RowBound>> = rec
        .base
        .iter()
        .map(|b| b.iter().map(|row| row.iter().fold(None, |acc, e| merge(acc, entry_bound(e, nvars)))).collect())
        .collect();
    for alpha in 0..m.saturating_sub(1) {
        let next = (0..l)
            .map(|i| {
                let mut acc = None;
                for p in 0..m {
                    for q in 0..l {
                        let zb = entry_bound(&rec.z.blocks[p][i][q], nvars);
                        acc = merge(acc, product_bound(zb, rows[alpha + p][q]));
                    }
                }
                acc
            })
            .collect();
        rows.push(next);
    }
    rows
}

/// Total-degree bound for `M·(det A - expected)`, where the monomial `M`
/// clears every negative exponent that can occur.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub degree: u64,
    /// Per variable, the lowest exponent that can occur.
    pub shift: Vec<i64>,
}

impl DegreeBound {
    pub fn compute(rec: &GramRecurrence, expected: &LaurentPoly, nvars: usize) -> DegreeBound {
        let rows = block_row_bounds(rec, nvars);
        let mut lo_sum = [0i64; MAX_VARS];
        let mut hi_sum = 0i64;
        for k1 in 0..rec.m {
            for i in 0..rec.l {
                let bound = (0..rec.m).fold(None, |acc, k2| merge(acc, rows[k1 + k2][i]));
                // a zero row makes the determinant vanish and any bound works
                let Some((hi, lo)) = bound else { continue };
                for v in 0..nvars {
                    lo_sum[v] += lo[v];
                }
                hi_sum += hi;
            }
        }
        let (exp_total, exp_lo) = match entry_bound(expected, nvars) {
            Some((h, lo)) => (h, lo),
            None => (0, [0; MAX_VARS]),
        };
        let shift: Vec<i64> = (0..nvars).map(|v| lo_sum[v].min(exp_lo[v])).collect();
        let degree = hi_sum.max(exp_total) - shift.iter().sum::<i64>();
        DegreeBound { degree: degree.max(1) as u64, shift }
    }
}

/// Smallest number of trials (at least 5) with `(D/(p-1))^t < 2^-100`.
pub fn trials_for_bound(degree: u64, prime: u64) -> Result<usize, DetError> {
    if degree >= prime - 1 {
        return Err(DetError::BoundTooLarge { bound: degree, prime });
    }
    let bits = ((prime - 1) as f64 / degree as f64).log2();
    Ok(((100.0 / bits).ceil() as usize).max(5))
}

/// The determinant read off as `constant · Π v^{e_v}` by rescaling one
/// variable at a time at a fixed point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonomialProbe {
    pub names: Vec<String>,
    pub exponents: Vec<i64>,
    /// The constant as a residue; `p-1` stands for `-1`.
    pub constant: u64,
    pub prime: u64,
    /// The fitted monomial also matches the determinant at every other point.
    pub consistent: bool,
}

impl MonomialProbe {
    pub fn is_signed_unit(&self) -> bool {
        self.consistent && (self.constant == 1 || self.constant == self.prime - 1)
    }
}

impl std::fmt::Display for MonomialProbe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mono: Vec<String> = self
            .names
            .iter()
            .zip(&self.exponents)
            .filter(|(_, e)| **e != 0)
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        let c = match self.constant {
            1 => String::new(),
            c if c == self.prime - 1 => "-".into(),
            c => format!("{c}*"),
        };
        match (mono.is_empty(), c.as_str()) {
            (true, "") => write!(f, "1"),
            (true, "-") => write!(f, "-1"),
            (true, _) => write!(f, "{}", self.constant),
            _ => write!(f, "{c}{}", mono.join("*")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularVerdict {
    pub pass: bool,
    pub trials: usize,
    pub prime: u64,
    pub seed: u64,
    pub degree_bound: u64,
    /// `log2` of the cumulative false-accept bound `(D/(p-1))^trials`.
    pub log2_error_bound: f64,
    /// Every block was symmetric at every point.
    pub symmetric: bool,
    /// Per trial: the point, `det A` and the expected value there.
    pub evaluations: Vec<(Vec<u64>, u64, u64)>,
    pub probe: Option<MonomialProbe>,
}

/// Residues of every monomial power needed, cached per variable.
struct PowerTable {
    p: u64,
    min: Vec<i32>,
    powers: Vec<Vec<u64>>,
}

impl PowerTable {
    fn new(pt: &FieldPoint, vars: &VarSpec, min: &[i32], max: &[i32]) -> Result<Self, DetError> {
        let p = pt.prime;
        let mut powers = Vec::new();
        for v in 0..vars.len() {
            let x = pt.values[v];
            let base = if min[v] < 0 {
                let inv = mod_inv(x, p).ok_or_else(|| LaurentError::ZeroAtInvertible(vars.names()[v].clone()))?;
                mod_pow(inv, (-min[v]) as u64, p)
            } else {
                mod_pow(x, min[v] as u64, p)
            };
            let mut row = Vec::with_capacity((max[v] - min[v] + 1).max(1) as usize);
            let mut cur = base;
            for _ in min[v]..=max[v] {
                row.push(cur);
                cur = mul_mod(cur, x, p);
            }
            powers.push(row);
        }
        Ok(PowerTable { p, min: min.to_vec(), powers })
    }

    fn eval(&self, poly: &LaurentPoly) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (m, c) in poly.terms() {
            let mut t = c.rem_euclid_u64(p);
            for (v, row) in self.powers.iter().enumerate() {
                let e = m.exponent(v);
                if e != 0 || self.min[v] > 0 {
                    t = mul_mod(t, row[(e - self.min[v]) as usize], p);
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }

    fn eval_block(&self, b: &Block) -> Vec<Vec<u64>> {
        b.iter().map(|row| row.iter().map(|e| self.eval(e)).collect()).collect()
    }
}

type ModBlock = Vec<Vec<u64>>;

/// All `2m-1` blocks at one point: base blocks and ζ evaluated, the
/// recursion run in `F_p`.
fn blocks_mod_p(rec: &GramRecurrence, table: &PowerTable) -> Vec<ModBlock> {
    let (l, m, p) = (rec.l, rec.m, table.p);
    let z: Vec<ModBlock> = rec.z.blocks.iter().map(|b| table.eval_block(b)).collect();
    let mut blocks: Vec<ModBlock> = rec.base.par_iter().map(|b| table.eval_block(b)).collect();
    for alpha in 0..m.saturating_sub(1) {
        let next: ModBlock = (0..l)
            .into_par_iter()
            .map(|i1| {
                let mut row = vec![0u64; l];
                for (pz, zb) in z.iter().enumerate() {
                    let a = &blocks[alpha + pz];
                    for (q, &c) in zb[i1].iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for (r, &x) in row.iter_mut().zip(&a[q]) {
                            *r = (*r + mul_mod(c, x, p)) % p;
                        }
                    }
                }
                row
            })
            .collect();
        blocks.push(next);
    }
    blocks
}

fn assemble_mod_p(blocks: &[ModBlock], l: usize, m: usize) -> Vec<Vec<u64>> {
    let n = l * m;
    (0..n).map(|r| (0..n).map(|c| blocks[r / l + c / l][r % l][c % l]).collect()).collect()
}

fn symmetric_mod_p(blocks: &[ModBlock]) -> bool {
    blocks.iter().all(|b| (0..b.len()).all(|i| (0..i).all(|j| b[i][j] == b[j][i])))
}

/// Exponent ranges of every variable over the base blocks, ζ and `expected`.
fn exponent_window(rec: &GramRecurrence, expected: &LaurentPoly, nvars: usize) -> (Vec<i32>, Vec<i32>) {
    let mut min = vec![0i32; nvars];
    let mut max = vec![0i32; nvars];
    let entries = rec.base.iter().chain(&rec.z.blocks).flatten().flatten().chain(std::iter::once(expected));
    for p in entries {
        if let Some(r) = p.exponent_range() {
            for v in 0..nvars {
                min[v] = min[v].min(r.min[v]);
                max[v] = max[v].max(r.max[v]);
            }
        }
    }
    (min, max)
}

struct Evaluator<'a> {
    rec: &'a GramRecurrence,
    vars: &'a VarSpec,
    min: Vec<i32>,
    max: Vec<i32>,
}

impl Evaluator<'_> {
    /// `(det A, expected, blocks symmetric)` at one point.
    fn at(&self, pt: &FieldPoint, expected: &LaurentPoly) -> Result<(u64, u64, bool), DetError> {
        let table = PowerTable::new(pt, self.vars, &self.min, &self.max)?;
        let blocks = blocks_mod_p(self.rec, &table);
        let d = determinant_mod_p(assemble_mod_p(&blocks, self.rec.l, self.rec.m), pt.prime);
        Ok((d, table.eval(expected), symmetric_mod_p(&blocks)))
    }
}

fn signed_pow(x: u64, e: i64, p: u64) -> Option<u64> {
    if e >= 0 {
        Some(mod_pow(x, e as u64, p))
    } else {
        Some(mod_pow(mod_inv(x, p)?, e.unsigned_abs(), p))
    }
}

/// Fits `det A = κ·Π v^{e_v}` with `|e_v| ≤ bound` at the first point and
/// tests the fit on the remaining evaluations.
fn probe_monomial(
    ev: &Evaluator<'_>,
    expected: &LaurentPoly,
    evaluations: &[(Vec<u64>, u64, u64)],
    bound: u64,
    prime: u64,
) -> Result<Option<MonomialProbe>, DetError> {
    let Some((first, d0, _)) = evaluations.first() else { return Ok(None) };
    if *d0 == 0 {
        return Ok(None);
    }
    let bound = bound as i64;
    // a scale factor whose powers in the window are distinct
    let Some(g) = (2..64u64).find(|&g| {
        let mut cur = 1u64;
        (1..=2 * bound).all(|_| {
            cur = mul_mod(cur, g, prime);
            cur != 1
        })
    }) else {
        return Ok(None);
    };
    let d0_inv = mod_inv(*d0, prime).expect("nonzero");
    let mut exponents = Vec::with_capacity(first.len());
    for v in 0..first.len() {
        let mut values = first.clone();
        values[v] = mul_mod(values[v], g, prime);
        let (d1, _, _) = ev.at(&FieldPoint { prime, values }, expected)?;
        let ratio = mul_mod(d1, d0_inv, prime);
        let mut cur = signed_pow(g, -bound, prime).expect("g is nonzero");
        let mut found = None;
        for e in -bound..=bound {
            if cur == ratio {
                found = Some(e);
                break;
            }
            cur = mul_mod(cur, g, prime);
        }
        let Some(e) = found else { return Ok(None) };
        exponents.push(e);
    }
    let mono = |values: &[u64]| -> Option<u64> {
        values.iter().zip(&exponents).try_fold(1u64, |acc, (&x, &e)| Some(mul_mod(acc, signed_pow(x, e, prime)?, prime)))
    };
    let Some(m0) = mono(first) else { return Ok(None) };
    let constant = mul_mod(*d0, mod_inv(m0, prime).expect("monomial at a point with nonzero values"), prime);
    let consistent = evaluations[1..]
        .iter()
        .all(|(pt, d, _)| mono(pt).map(|m| mul_mod(constant, m, prime) == *d).unwrap_or(false));
    Ok(Some(MonomialProbe { names: ev.vars.names().to_vec(), exponents, constant, prime, consistent }))
}

/// Checks `det A = expected` at random points of `F_p`, running the
/// recursion in the field. With `trials` unset, the count is chosen so the
/// cumulative error bound is below `2^-100`. Also records whether every
/// block is symmetric at the points and, when `probe` is set, fits the
/// determinant to a monomial.
pub fn modular_check(
    rec: &GramRecurrence,
    vars: &VarSpec,
    expected: &LaurentPoly,
    trials: Option<usize>,
    seed: u64,
    prime: u64,
    probe: bool,
) -> Result<ModularVerdict, DetError> {
    if prime < 3 || prime >= 1 << 62 || !is_prime(prime) {
        return Err(DetError::BadPrime(prime));
    }
    let bound = DegreeBound::compute(rec, expected, vars.len());
    let needed = trials_for_bound(bound.degree, prime)?;
    let trials = trials.unwrap_or(needed).max(1);
    let (min, max) = exponent_window(rec, expected, vars.len());
    let ev = Evaluator { rec, vars, min, max };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<FieldPoint> = (0..trials).map(|_| FieldPoint::random(vars, prime, &mut rng)).collect();
    let mut evaluations = Vec::new();
    let mut symmetric = true;
    for pt in points {
        let (d, want, sym) = ev.at(&pt, expected)?;
        symmetric &= sym;
        evaluations.push((pt.values, d, want));
    }
    let pass = evaluations.iter().all(|(_, d, w)| d == w);
    let probe = if probe { probe_monomial(&ev, expected, &evaluations, bound.degree, prime)? } else { None };
    let per_trial = (bound.degree as f64 / (prime - 1) as f64).log2();
    Ok(ModularVerdict {
        pass,
        trials,
        prime,
        seed,
        degree_bound: bound.degree,
        log2_error_bound: per_trial * trials as f64,
        symmetric,
        evaluations,
        probe,
    })
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for b in BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for b in BASES {
        let mut x = mod_pow(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> LaurentPoly {
        LaurentPoly::constant(v)
    }

    #[test]
    fn small_exact() {
        assert_eq!(determinant_exact(vec![vec![c(7)]], 100).unwrap(), c(7));
        assert_eq!(determinant_exact(vec![], 100).unwrap(), c(1));
        let m = vec![vec![c(0), c(1)], vec![c(1), c(0)]];
        assert_eq!(determinant_exact(m, 100).unwrap(), c(-1));
        let m = vec![vec![c(2), c(3), c(1)], vec![c(4), c(1), c(5)], vec![c(0), c(2), c(7)]];
        assert_eq!(determinant_exact(m.clone(), 100).unwrap(), c(-82));
        let mp = vec![vec![2, 3, 1], vec![4, 1, 5], vec![0, 2, 7]];
        assert_eq!(determinant_mod_p(mp, 101), (101 - 82) as u64);
    }

    #[test]
    fn symbolic_exact() {
        let vs = VarSpec::new([("a0", true), ("a1", false)]).unwrap();
        let a0 = vs.var("a0").unwrap();
        let a1 = vs.var("a1").unwrap();
        // [[a1, a0], [a0, 0]] has determinant -a0^2
        let m = vec![vec![a1.clone(), a0.clone()], vec![a0.clone(), LaurentPoly::zero()]];
        assert_eq!(determinant_exact(m, 100).unwrap(), -&a0.pow(2));
    }

    #[test]
    fn trial_counts() {
        assert_eq!(trials_for_bound(1, 2_147_483_647).unwrap(), 5);
        assert!(trials_for_bound(100_000, 2_147_483_647).unwrap() >= 7);
        assert!(trials_for_bound(200, 101).is_err());
        assert!(is_prime(2_147_483_647) && !is_prime(2_147_483_649));
    }
}
