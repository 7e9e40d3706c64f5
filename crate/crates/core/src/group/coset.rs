//! Todd–Coxeter coset enumeration (HLT strategy) over the trivial subgroup.

use super::word::{Letter, Word};
use super::GroupError;

const NONE: usize = usize::MAX;

/// Generators and relators; every relator is a word equal to the identity.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: Vec<char>,
    pub relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: &[char], relators: &[&str]) -> Result<Self, GroupError> {
        let relators = relators
            .iter()
            .map(|r| Word::parse(r).map_err(GroupError::from))
            .collect::<Result<Vec<_>, _>>()?;
        let p = Presentation { generators: generators.to_vec(), relators };
        for r in &p.relators {
            for l in r.letters() {
                p.column(*l)?;
            }
        }
        Ok(p)
    }

    /// Relator list extended by `lhs rhs^-1` for each equation.
    pub fn with_equations(mut self, eqs: &[(Word, Word)]) -> Result<Self, GroupError> {
        for (l, r) in eqs {
            let w = l.concat(&r.inverse());
            for x in w.letters() {
                self.column(*x)?;
            }
            self.relators.push(w);
        }
        Ok(self)
    }

    pub(crate) fn column(&self, l: Letter) -> Result<usize, GroupError> {
        let g = self
            .generators
            .iter()
            .position(|&c| c == l.name)
            .ok_or(GroupError::UnknownGenerator(l.name))?;
        Ok(2 * g + usize::from(l.inv))
    }
}

/// Completed coset table: `table[c][col]` with columns `2g` (generator `g`)
/// and `2g+1` (its inverse). Coset 0 is the subgroup itself.
pub struct CosetTable {
    pub ncols: usize,
    pub table: Vec<Vec<usize>>,
}

struct Enumerator {
    ncols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    cap: usize,
}

#[inline]
fn inv_col(x: usize) -> usize {
    x ^ 1
}

impl Enumerator {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), GroupError> {
        let n = self.table.len();
        if n >= self.cap {
            return Err(GroupError::CosetLimit(self.cap));
        }
        self.table.push(vec![NONE; self.ncols]);
        self.parent.push(n);
        self.table[c][x] = n;
        self.table[n][inv_col(x)] = c;
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let e = queue[i];
            i += 1;
            for x in 0..self.ncols {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                if self.table[f][inv_col(x)] == e {
                    self.table[f][inv_col(x)] = NONE;
                }
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t, &mut queue);
                } else if self.table[f1][inv_col(x)] != NONE {
                    let t = self.table[f1][inv_col(x)];
                    self.merge(e1, t, &mut queue);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][inv_col(x)] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), GroupError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][inv_col(w[j as usize])] != NONE {
                b = self.table[b][inv_col(w[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][inv_col(w[i])] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// Enumerates the cosets of the trivial subgroup, failing once more than
/// `cap` cosets have been defined.
pub fn enumerate_cosets(pres: &Presentation, cap: usize) -> Result<CosetTable, GroupError> {
    let ncols = 2 * pres.generators.len();
    let rels: Vec<Vec<usize>> = pres
        .relators
        .iter()
        .map(|r| r.letters().iter().map(|l| pres.column(*l)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let mut en = Enumerator { ncols, table: vec![vec![NONE; ncols]], parent: vec![0], cap: cap.max(1) };
    let mut c = 0;
    while c < en.table.len() {
        for r in &rels {
            if en.parent[c] != c {
                break;
            }
            en.scan_and_fill(c, r)?;
        }
        if en.parent[c] == c {
            for x in 0..ncols {
                if en.parent[c] != c {
                    break;
                }
                if en.table[c][x] == NONE {
                    en.define(c, x)?;
                }
            }
        }
        c += 1;
    }
    // compact the live cosets, keeping their relative order
    let live: Vec<usize> = (0..en.table.len()).filter(|&c| en.parent[c] == c).collect();
    let mut index = vec![NONE; en.table.len()];
    for (k, &c) in live.iter().enumerate() {
        index[c] = k;
    }
    let mut table = Vec::with_capacity(live.len());
    for &c in &live {
        let row: Vec<usize> = en.table[c].clone();
        table.push(row.into_iter().map(|t| index[en.rep(t)]).collect());
    }
    Ok(CosetTable { ncols, table })
}
