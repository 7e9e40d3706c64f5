use super::coset::{enumerate_cosets, Presentation};
use super::word::{Letter, Word};
use super::GroupError;
use std::collections::VecDeque;

/// A finite group stored through its multiplication table.
///
/// Element 0 is the identity. Element `j` acts on `{0, …, n-1}` by
/// `i ↦ i·j`, which is the right regular permutation representation.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    generators: Vec<char>,
    gen_elems: Vec<usize>,
    mul: Vec<u32>,
    inv: Vec<usize>,
    n: usize,
}

impl FiniteGroup {
    /// Realizes the group defined by `pres` by coset enumeration, with the
    /// coset cap `cap`.
    pub fn enumerate(pres: &Presentation, cap: usize) -> Result<FiniteGroup, GroupError> {
        let ct = enumerate_cosets(pres, cap)?;
        let n = ct.table.len();
        let gen_perms: Vec<Vec<usize>> =
            (0..pres.generators.len()).map(|g| (0..n).map(|c| ct.table[c][2 * g]).collect()).collect();
        // coset c is the element reached from 0 along its breadth-first word,
        // so c·j is the image of c under the permutation of j's word.
        let words = bfs_words(n, &gen_perms);
        let mut mul = vec![0u32; n * n];
        let mut perm: Vec<usize> = (0..n).collect();
        for (j, w) in words.iter().enumerate() {
            perm.iter_mut().enumerate().for_each(|(i, p)| *p = i);
            for &g in w {
                for p in perm.iter_mut() {
                    *p = gen_perms[g][*p];
                }
            }
            for i in 0..n {
                mul[i * n + j] = perm[i] as u32;
            }
        }
        let gen_elems = (0..pres.generators.len()).map(|g| ct.table[0][2 * g]).collect();
        let grp = FiniteGroup::from_table(pres.generators.clone(), gen_elems, mul, n);
        for r in &pres.relators {
            if grp.eval(r)? != 0 {
                return Err(GroupError::RelatorFails(r.to_string()));
            }
        }
        Ok(grp)
    }

    fn from_table(generators: Vec<char>, gen_elems: Vec<usize>, mul: Vec<u32>, n: usize) -> FiniteGroup {
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b;
                    break;
                }
            }
        }
        FiniteGroup { generators, gen_elems, mul, inv, n }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[char] {
        &self.generators
    }

    pub fn generator(&self, name: char) -> Option<usize> {
        self.generators.iter().position(|&c| c == name).map(|i| self.gen_elems[i])
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Right regular permutation of element `a`: `i ↦ i·a`.
    pub fn permutation(&self, a: usize) -> Vec<usize> {
        (0..self.n).map(|i| self.mul(i, a)).collect()
    }

    /// Evaluates a word in the group generators.
    pub fn eval(&self, w: &Word) -> Result<usize, GroupError> {
        self.eval_with(w, &|_| None)
    }

    /// Evaluates a word whose letters are group generators or extra symbols
    /// resolved by `extra`.
    pub fn eval_with(&self, w: &Word, extra: &dyn Fn(char) -> Option<usize>) -> Result<usize, GroupError> {
        let mut acc = 0;
        for l in w.letters() {
            acc = self.mul(acc, self.letter(*l, extra)?);
        }
        Ok(acc)
    }

    fn letter(&self, l: Letter, extra: &dyn Fn(char) -> Option<usize>) -> Result<usize, GroupError> {
        let g = self
            .generator(l.name)
            .or_else(|| extra(l.name))
            .ok_or(GroupError::UnknownGenerator(l.name))?;
        Ok(if l.inv { self.inverse(g) } else { g })
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&a| self.gen_elems.iter().all(|&g| self.mul(a, g) == self.mul(g, a)))
            .collect()
    }

    /// Sorted element list of the subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for &g in gens {
                let b = self.mul(a, g);
                if !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        (0..self.n).filter(|&a| seen[a]).collect()
    }

    /// The subgroup generated by the named elements, as a group in its own
    /// right with those names as generators.
    pub fn subgroup(&self, gens: &[(char, usize)]) -> FiniteGroup {
        let ids: Vec<usize> = gens.iter().map(|g| g.1).collect();
        let elems = self.closure(&ids);
        let m = elems.len();
        let mut index = vec![usize::MAX; self.n];
        for (k, &e) in elems.iter().enumerate() {
            index[e] = k;
        }
        let mut mul = vec![0u32; m * m];
        for (i, &a) in elems.iter().enumerate() {
            for (j, &b) in elems.iter().enumerate() {
                mul[i * m + j] = index[self.mul(a, b)] as u32;
            }
        }
        let names = gens.iter().map(|g| g.0).collect();
        let gen_elems = ids.iter().map(|&g| index[g]).collect();
        FiniteGroup::from_table(names, gen_elems, mul, m)
    }

    /// Checks closure, identity, inverses and associativity on all triples
    /// (intended for small groups).
    pub fn is_group(&self) -> bool {
        let n = self.n;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a || self.mul(a, self.inv[a]) != 0 {
                return false;
            }
            let mut row = vec![false; n];
            for b in 0..n {
                let c = self.mul(a, b);
                if c >= n || row[c] {
                    return false;
                }
                row[c] = true;
            }
        }
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }
}

fn bfs_words(n: usize, gen_perms: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut words: Vec<Option<Vec<usize>>> = vec![None; n];
    words[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0usize]);
    while let Some(c) = queue.pop_front() {
        for (g, p) in gen_perms.iter().enumerate() {
            let d = p[c];
            if words[d].is_none() {
                let mut w = words[c].clone().unwrap();
                w.push(g);
                words[d] = Some(w);
                queue.push_back(d);
            }
        }
    }
    words.into_iter().map(|w| w.expect("coset table is connected")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        let p = Presentation::new(&['s', 't'], &["s^2", "t^2", "s t s t^-1 s^-1 t^-1"]).unwrap();
        FiniteGroup::enumerate(&p, 100).unwrap()
    }

    #[test]
    fn symmetric_group() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert!(g.is_group());
        assert_eq!(g.center(), vec![0]);
        let st = g.eval(&Word::parse("s t").unwrap()).unwrap();
        assert_eq!(g.element_order(st), 3);
        assert_eq!(g.closure(&[st]).len(), 3);
    }

    #[test]
    fn subgroup_reindexing() {
        let g = s3();
        let st = g.eval(&Word::parse("s t").unwrap()).unwrap();
        let h = g.subgroup(&[('r', st)]);
        assert_eq!(h.order(), 3);
        assert!(h.is_group());
        assert_eq!(h.eval(&Word::parse("r^3").unwrap()).unwrap(), 0);
        assert_eq!(h.center().len(), 3);
    }

    #[test]
    fn trivial_group_has_trivial_center() {
        let p = Presentation::new(&['a'], &["a"]).unwrap();
        let g = FiniteGroup::enumerate(&p, 10).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.center(), vec![0]);
    }

    #[test]
    fn permutations_compose() {
        let g = s3();
        for a in 0..6 {
            for b in 0..6 {
                let pa = g.permutation(a);
                let pb = g.permutation(b);
                let pab = g.permutation(g.mul(a, b));
                assert!((0..6).all(|i| pab[i] == pb[pa[i]]));
            }
        }
    }
}
