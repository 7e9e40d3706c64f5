//! The coset table of the Hecke algebra as a left module over its
//! parabolic subalgebra `H'`.
//!
//! Rows are the module generators `b = z^k x` (`k < m`, `x` a coset
//! representative). A cell `(b, L)` holds `b·L` as an `H'`-combination of
//! rows. Cells start from the spanning tree, the shifts by `z`, the action
//! of the parabolic generator on the rows `z^k` and free cancellation
//! between the spelled coset words, and are completed by
//! a deterministic fixpoint over four rules:
//!
//! * `Hecke`: `g^{-1}` as a polynomial in `g`, and `g` as one in `g^{-1}`;
//! * `Relator`: `L = P^{-1} Q^{-1}` for each rotation `P L Q` of a defining
//!   relator, with central letters moved to either end;
//! * `Linear`: `c·L = h·b + Σ h_j b_j` with `h` a unit of `H'` and the
//!   `b_j·L^{-1}` known determines `b·L^{-1}`;
//! * `Hint`: catalog identities, consulted only once the others stall.

use super::hpoly::{HPoly, Parabolic};
use crate::catalog::{GroupSpec, CENTER_LETTER};
use crate::group::{Letter, Word};
use crate::laurent::LaurentPoly;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// `Σ h_j b_j`, sorted by row, without zero coefficients.
pub type Combo = Vec<(usize, HPoly)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Seed,
    Hecke,
    Relator,
    Linear,
    Hint,
}

/// `L = Σ c_i · W_i` with scalar coefficients and words given as columns.
#[derive(Clone, Debug)]
struct Identity {
    terms: Vec<(LaurentPoly, Vec<usize>)>,
    rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("saturation stalled with {} unknown cells, first: {}", missing.len(), missing.iter().take(8).cloned().collect::<Vec<_>>().join(", "))]
    Stalled { missing: Vec<String> },
    #[error("letter `{0}` has no column")]
    UnknownLetter(char),
}

pub struct HeckeTable {
    pub par: Parabolic,
    /// Number of coset representatives.
    pub nx: usize,
    /// Order of the central letter.
    pub m: usize,
    letters: Vec<Letter>,
    col_index: HashMap<Letter, usize>,
    /// Number of leading columns (group generators and inverses) that must
    /// be complete.
    nbase: usize,
    cells: Vec<Vec<Option<Combo>>>,
    rules: Vec<Vec<Option<Rule>>>,
}

impl HeckeTable {
    pub fn rows(&self) -> usize {
        self.m * self.nx
    }

    pub fn row(&self, k: usize, x: usize) -> usize {
        k * self.nx + x
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn column(&self, l: Letter) -> Result<usize, TableError> {
        self.col_index.get(&l).copied().ok_or(TableError::UnknownLetter(l.name))
    }

    pub fn cell(&self, row: usize, l: Letter) -> Option<&Combo> {
        let c = self.col_index.get(&l)?;
        self.cells[row][*c].as_ref()
    }

    /// Number of filled cells per rule, over the required columns.
    pub fn rule_counts(&self) -> BTreeMap<Rule, usize> {
        let mut out = BTreeMap::new();
        for r in &self.rules {
            for x in r[..self.nbase].iter().flatten() {
                *out.entry(*x).or_insert(0) += 1;
            }
        }
        out
    }

    fn describe(&self, row: usize, col: usize) -> String {
        let (k, x) = (row / self.nx, row % self.nx);
        format!("(z^{k} x{}).{}", x + 1, Word(vec![self.letters[col]]))
    }

    fn unit_combo(&self, row: usize) -> Combo {
        vec![(row, self.par.one())]
    }

    fn apply(&self, combo: &Combo, col: usize) -> Option<Combo> {
        let mut acc: BTreeMap<usize, HPoly> = BTreeMap::new();
        for (r, h) in combo {
            let cell = self.cells[*r][col].as_ref()?;
            for (r2, h2) in cell {
                let p = self.par.mul(h, h2);
                match acc.get_mut(r2) {
                    Some(a) => a.add_assign(&p),
                    None => {
                        acc.insert(*r2, p);
                    }
                }
            }
        }
        Some(acc.into_iter().filter(|(_, h)| !h.is_zero()).collect())
    }

    fn apply_word(&self, row: usize, word: &[usize]) -> Option<Combo> {
        // fail fast on the first cell
        if let Some(&c) = word.first() {
            self.cells[row][c].as_ref()?;
        }
        let mut cur = self.unit_combo(row);
        for &c in word {
            cur = self.apply(&cur, c)?;
        }
        Some(cur)
    }

    fn evaluate(&self, row: usize, id: &Identity) -> Option<Combo> {
        let mut acc: BTreeMap<usize, HPoly> = BTreeMap::new();
        for (c, w) in &id.terms {
            for (r, h) in self.apply_word(row, w)? {
                let h = h.scale(c);
                match acc.get_mut(&r) {
                    Some(a) => a.add_assign(&h),
                    None => {
                        acc.insert(r, h);
                    }
                }
            }
        }
        Some(acc.into_iter().filter(|(_, h)| !h.is_zero()).collect())
    }

    fn set(&mut self, row: usize, col: usize, v: Combo, rule: Rule) {
        self.cells[row][col] = Some(v);
        self.rules[row][col] = Some(rule);
    }

    /// `h^{-1}` when `h = c·T^j` with `c` a unit monomial and `j < e`.
    fn invert_unit(&self, h: &HPoly) -> Option<HPoly> {
        let nz: Vec<usize> = (0..h.0.len()).filter(|&j| !h.0[j].is_zero()).collect();
        if nz.len() != 1 {
            return None;
        }
        let j = nz[0];
        let c_inv = h.0[j].monomial_inverse()?;
        let mut t = self.par.one();
        for _ in 0..j {
            t = self.par.mul(&t, self.par.t_inv());
        }
        Some(t.scale(&c_inv))
    }

    fn inverse_col(&self, col: usize) -> usize {
        self.col_index[&self.letters[col].inverse()]
    }

    fn missing(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for row in 0..self.rows() {
            for col in 0..self.nbase {
                if self.cells[row][col].is_none() {
                    out.push((row, col));
                }
            }
        }
        out
    }
}

/// Columns: group generators with inverses, then `z`, then redundant letters.
fn column_letters(spec: &GroupSpec) -> Vec<Letter> {
    let mut names = spec.generator_names();
    names.push(CENTER_LETTER);
    names.extend(spec.redundant.iter().map(|r| r.name));
    let mut out = Vec::new();
    for c in names {
        out.push(Letter { name: c, inv: false });
        out.push(Letter { name: c, inv: true });
    }
    out
}

/// Cyclic words equal to the identity in the braid group.
fn relators(spec: &GroupSpec) -> Vec<Word> {
    let z = Word(vec![Letter::new(CENTER_LETTER)]);
    let mut out = Vec::new();
    for (l, r) in &spec.braid_relations {
        out.push(l.concat(&r.inverse()));
    }
    for r in &spec.redundant {
        out.push(Word(vec![Letter::new(r.name).inverse()]).concat(&r.word));
    }
    out.push(z.inverse().concat(&spec.center.word));
    let expanded = spec.expand(&spec.center.word);
    if expanded != spec.center.word {
        out.push(z.inverse().concat(&expanded));
    }
    for g in spec.generator_names() {
        let g = Word(vec![Letter::new(g)]);
        out.push(z.concat(&g).concat(&z.inverse()).concat(&g.inverse()));
    }
    out
}

/// `w` with its central letters gathered at the front or at the end.
fn move_center(w: &Word, front: bool) -> Word {
    let k: i64 = w
        .letters()
        .iter()
        .filter(|l| l.name == CENTER_LETTER)
        .map(|l| if l.inv { -1 } else { 1 })
        .sum();
    let rest: Vec<Letter> = w.letters().iter().copied().filter(|l| l.name != CENTER_LETTER).collect();
    let zl = Letter { name: CENTER_LETTER, inv: k < 0 };
    let zs = vec![zl; k.unsigned_abs() as usize];
    let letters = if front { [zs, rest].concat() } else { [rest, zs].concat() };
    Word(letters).reduced()
}

/// Identities `L = W` from every rotation of every relator, in both
/// orientations, with the variants obtained by moving central letters.
fn relator_identities(rels: &[Word]) -> Vec<(Letter, Word)> {
    let mut out: Vec<(Letter, Word)> = Vec::new();
    let mut push = |l: Letter, w: Word| {
        for v in [w.reduced(), move_center(&w, true), move_center(&w, false)] {
            if !out.iter().any(|(l2, w2)| *l2 == l && *w2 == v) {
                out.push((l, v));
            }
        }
    };
    for r in rels {
        let n = r.len();
        for i in 0..n {
            let l = r.letters()[i];
            let rest: Vec<Letter> = r.letters()[i + 1..].iter().chain(&r.letters()[..i]).copied().collect();
            let rest = Word(rest);
            push(l, rest.inverse());
            push(l.inverse(), rest);
        }
    }
    out
}

struct Saturation {
    identities: Vec<Vec<Identity>>,
    hints: Vec<Vec<Identity>>,
}

impl HeckeTable {
    fn cols_of(&self, w: &Word) -> Result<Vec<usize>, TableError> {
        w.letters().iter().map(|l| self.column(*l)).collect()
    }

    /// Builds and saturates the table for a catalog group.
    pub fn build(spec: &GroupSpec) -> Result<HeckeTable, super::HeckeError> {
        let coeffs = spec.hecke_coefficients(spec.parabolic)?;
        let par = Parabolic::new(coeffs);
        let letters = column_letters(spec);
        let col_index: HashMap<Letter, usize> = letters.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let nx = spec.coset_words.len();
        let m = spec.center.order;
        let nbase = 2 * spec.generators.len();
        let ncols = letters.len();
        let mut t = HeckeTable {
            par,
            nx,
            m,
            letters,
            col_index,
            nbase,
            cells: vec![vec![None; ncols]; m * nx],
            rules: vec![vec![None; ncols]; m * nx],
        };
        t.seed(spec)?;
        let sat = t.identities(spec)?;
        t.saturate(&sat)?;
        Ok(t)
    }

    fn seed(&mut self, spec: &GroupSpec) -> Result<(), TableError> {
        for k in 0..self.m {
            for e in &spec.tree {
                let l = e.label.letters();
                debug_assert_eq!(l.len(), 1, "tree labels are single letters");
                let c = self.column(l[0])?;
                let ci = self.inverse_col(c);
                let (a, b) = (self.row(k, e.from), self.row(k, e.to));
                let ua = self.unit_combo(a);
                let ub = self.unit_combo(b);
                self.set(a, c, ub, Rule::Seed);
                self.set(b, ci, ua, Rule::Seed);
            }
        }
        self.seed_reductions(spec);
        let zc = self.column(Letter::new(CENTER_LETTER))?;
        let zi = self.inverse_col(zc);
        for k in 0..self.m - 1 {
            for x in 0..self.nx {
                let (a, b) = (self.row(k, x), self.row(k + 1, x));
                let ua = self.unit_combo(a);
                let ub = self.unit_combo(b);
                self.set(a, zc, ub, Rule::Seed);
                self.set(b, zi, ua, Rule::Seed);
            }
        }
        let gc = self.column(Letter::new(spec.parabolic))?;
        let gi = self.inverse_col(gc);
        for k in 0..self.m {
            let r = self.row(k, 0);
            let t = vec![(r, self.par.t())];
            let ti = vec![(r, self.par.t_inv().clone())];
            self.set(r, gc, t, Rule::Seed);
            self.set(r, gi, ti, Rule::Seed);
        }
        Ok(())
    }

    /// `x·L = T^q·x'` whenever the expansion of `w_x L` freely reduces to
    /// that of `g0^q w_x'`, for `|q| < e`.
    fn seed_reductions(&mut self, spec: &GroupSpec) {
        let words: Vec<Word> = spec.tree_words().iter().map(|w| spec.expand(w).reduced()).collect();
        let e = self.par.order() as i64;
        let g0 = Letter::new(spec.parabolic);
        let mut prefixed = Vec::new();
        for q in (1 - e)..e {
            let l = if q < 0 { g0.inverse() } else { g0 };
            let h = if q < 0 {
                let mut t = self.par.one();
                for _ in 0..(-q) {
                    t = self.par.mul(&t, self.par.t_inv());
                }
                t
            } else {
                self.par.power(q as usize)
            };
            for (x2, w) in words.iter().enumerate() {
                let pw = Word(vec![l; q.unsigned_abs() as usize]).concat(w).reduced();
                prefixed.push((pw, x2, h.clone()));
            }
        }
        for x in 0..self.nx {
            for col in 0..self.letters.len() {
                let l = self.letters[col];
                if l.name == CENTER_LETTER {
                    continue;
                }
                let w = spec.expand(&words[x].concat(&Word(vec![l]))).reduced();
                if let Some((_, x2, h)) = prefixed.iter().find(|(pw, _, _)| *pw == w) {
                    for k in 0..self.m {
                        let (a, b) = (self.row(k, x), self.row(k, *x2));
                        if self.cells[a][col].is_none() {
                            self.set(a, col, vec![(b, h.clone())], Rule::Seed);
                        }
                    }
                }
            }
        }
    }

    fn identities(&self, spec: &GroupSpec) -> Result<Saturation, super::HeckeError> {
        let ncols = self.letters.len();
        let mut identities: Vec<Vec<Identity>> = vec![Vec::new(); ncols];
        for g in &spec.generators {
            let a = spec.hecke_coefficients(g.name)?;
            let e = a.len();
            let a0_inv = a[0].monomial_inverse().expect("unit constant coefficient");
            let gc = self.column(Letter::new(g.name))?;
            let gi = self.inverse_col(gc);
            // g^{-1} = a0^{-1} g^{e-1} - Σ_{k≥1} a0^{-1} a_k g^{k-1}
            let mut inv_terms = vec![(a0_inv.clone(), vec![gc; e - 1])];
            for k in (1..e).rev() {
                inv_terms.push((-&(&a0_inv * &a[k]), vec![gc; k - 1]));
            }
            identities[gi].push(Identity { terms: inv_terms, rule: Rule::Hecke });
            // g = Σ_k a_k g^{k-e+1}
            let mut terms = Vec::new();
            for k in (0..e).rev() {
                if !a[k].is_zero() {
                    terms.push((a[k].clone(), vec![gi; e - 1 - k]));
                }
            }
            identities[gc].push(Identity { terms, rule: Rule::Hecke });
        }
        for (l, w) in relator_identities(&relators(spec)) {
            let c = self.column(l)?;
            identities[c].push(Identity { terms: vec![(LaurentPoly::one(), self.cols_of(&w)?)], rule: Rule::Relator });
        }
        let mut hint_rels = Vec::new();
        for (l, r) in &spec.hints {
            hint_rels.push(l.concat(&r.inverse()));
        }
        let mut hints: Vec<Vec<Identity>> = vec![Vec::new(); ncols];
        for (l, w) in relator_identities(&hint_rels) {
            let c = self.column(l)?;
            hints[c].push(Identity { terms: vec![(LaurentPoly::one(), self.cols_of(&w)?)], rule: Rule::Hint });
        }
        Ok(Saturation { identities, hints })
    }

    fn complete(&self) -> bool {
        self.cells.iter().all(|r| r[..self.nbase].iter().all(Option::is_some))
    }

    fn saturate(&mut self, sat: &Saturation) -> Result<(), TableError> {
        let ncols = self.letters.len();
        let mut use_hints = false;
        loop {
            let mut changed = false;
            for row in 0..self.rows() {
                for col in 0..ncols {
                    if self.cells[row][col].is_some() {
                        continue;
                    }
                    let mut found = None;
                    for id in &sat.identities[col] {
                        if let Some(v) = self.evaluate(row, id) {
                            found = Some((v, id.rule));
                            break;
                        }
                    }
                    if found.is_none() && use_hints {
                        for id in &sat.hints[col] {
                            if let Some(v) = self.evaluate(row, id) {
                                found = Some((v, id.rule));
                                break;
                            }
                        }
                    }
                    if let Some((v, rule)) = found {
                        self.set(row, col, v, rule);
                        changed = true;
                    }
                }
            }
            changed |= self.transfer_inverses();
            if self.complete() {
                return Ok(());
            }
            if !changed {
                if use_hints || sat.hints.iter().all(Vec::is_empty) {
                    let missing = self.missing().into_iter().map(|(r, c)| self.describe(r, c)).collect();
                    return Err(TableError::Stalled { missing });
                }
                use_hints = true;
            }
        }
    }

    /// `c·L = h·b + Σ h_j b_j` with `h` a unit of `H'` and every
    /// `b_j·L^{-1}` known gives `b·L^{-1} = h^{-1}(c - Σ h_j b_j·L^{-1})`.
    fn transfer_inverses(&mut self) -> bool {
        let mut changed = false;
        let ncols = self.letters.len();
        for row in 0..self.rows() {
            for col in 0..ncols {
                let ci = self.inverse_col(col);
                let Some(cell) = &self.cells[row][col] else { continue };
                let unknown: Vec<usize> =
                    (0..cell.len()).filter(|&i| self.cells[cell[i].0][ci].is_none()).collect();
                if unknown.len() != 1 {
                    continue;
                }
                let (target, h) = (cell[unknown[0]].0, &cell[unknown[0]].1);
                let Some(hi) = self.invert_unit(h) else { continue };
                let rest: Combo = cell.iter().filter(|(r, _)| *r != target).cloned().collect();
                let Some(known) = self.apply(&rest, ci) else { continue };
                let mut acc: BTreeMap<usize, HPoly> = BTreeMap::new();
                acc.insert(row, self.par.one());
                for (r, h2) in known {
                    acc.entry(r).or_insert_with(|| self.par.zero()).add_assign(&h2.neg());
                }
                let v: Combo = acc
                    .into_iter()
                    .map(|(r, h2)| (r, self.par.mul(&hi, &h2)))
                    .filter(|(_, h2)| !h2.is_zero())
                    .collect();
                self.set(target, ci, v, Rule::Linear);
                changed = true;
            }
        }
        changed
    }
}
