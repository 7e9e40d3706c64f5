use super::int::Int;
use super::monomial::{Monomial, MAX_EXP, MAX_VARS, MIN_EXP};
use std::ops::{Add, Mul, Neg, Sub};

/// A Laurent polynomial with integer coefficients.
///
/// Terms are kept sorted by ascending monomial with no zero coefficients, so
/// structural equality is ring equality. The polynomial does not record which
/// ring it lives in; [`super::VarSpec`] validates polynomials against a ring.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, Int)>,
}

/// Per-variable exponent range of a nonzero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentRange {
    pub min: [i32; MAX_VARS],
    pub max: [i32; MAX_VARS],
    pub max_total: i32,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Int::ONE)
    }

    pub fn constant(c: impl Into<Int>) -> Self {
        Self::term(Monomial::ONE, c.into())
    }

    pub fn term(m: Monomial, c: Int) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(m, c)] }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(mut terms: Vec<(Monomial, Int)>) -> Self {
        terms.sort_unstable_by_key(|t| t.0);
        LaurentPoly { terms: combine_sorted(terms) }
    }

    pub fn terms(&self) -> &[(Monomial, Int)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The single term, when the polynomial has exactly one.
    pub fn as_term(&self) -> Option<(Monomial, &Int)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((*m, c)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Int)> {
        self.terms.last()
    }

    pub fn trailing(&self) -> Option<&(Monomial, Int)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: Monomial) -> Int {
        match self.terms.binary_search_by_key(&m, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn exponent_range(&self) -> Option<ExponentRange> {
        let mut it = self.terms.iter();
        let first = it.next()?.0;
        let mut r = ExponentRange {
            min: first.exponents(),
            max: first.exponents(),
            max_total: first.total_degree(),
        };
        for (m, _) in it {
            let e = m.exponents();
            for v in 0..MAX_VARS {
                r.min[v] = r.min[v].min(e[v]);
                r.max[v] = r.max[v].max(e[v]);
            }
            r.max_total = r.max_total.max(e.iter().sum());
        }
        Some(r)
    }

    pub fn scale(&self, c: &Int) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, d)| (*m, d.mul_ref(c))).collect(),
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Self {
        let mut out = Vec::with_capacity(self.terms.len());
        for (n, c) in &self.terms {
            let p = n.checked_mul(m).unwrap_or_else(|| overflow_panic());
            out.push((p, c.clone()));
        }
        LaurentPoly { terms: out }
    }

    pub fn add_assign_ref(&mut self, other: &LaurentPoly) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = other.clone();
            return;
        }
        *self = &*self + other;
    }

    /// Fused sum of products: partial products are buffered and combined by
    /// sorting, compacting whenever the buffer doubles past its last
    /// combined size.
    pub fn dot<'a, I>(pairs: I) -> LaurentPoly
    where
        I: IntoIterator<Item = (&'a LaurentPoly, &'a LaurentPoly)>,
    {
        const MIN_COMPACT: usize = 1 << 16;
        let mut buf: Vec<(Monomial, Int)> = Vec::new();
        let mut limit = MIN_COMPACT;
        for (p, q) in pairs {
            if p.is_zero() || q.is_zero() {
                continue;
            }
            check_product_range(p, q);
            buf.reserve(p.terms.len() * q.terms.len());
            for (m1, c1) in &p.terms {
                for (m2, c2) in &q.terms {
                    buf.push((m1.mul_unchecked(*m2), c1.mul_ref(c2)));
                }
            }
            if buf.len() > limit {
                buf.sort_unstable_by_key(|t| t.0);
                buf = combine_sorted(buf);
                limit = (2 * buf.len()).max(MIN_COMPACT);
            }
        }
        LaurentPoly::from_terms(buf)
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a unit monomial `±m`; `None` for anything else.
    pub fn monomial_inverse(&self) -> Option<LaurentPoly> {
        let (m, c) = self.as_term()?;
        if !(c.is_one() || c.is_minus_one()) {
            return None;
        }
        let inv = Monomial::ONE.checked_div(m)?;
        Some(LaurentPoly::term(inv, c.clone()))
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    ///
    /// Lex order on exponent vectors is a group order, so the leading term of a
    /// product is the product of leading terms. Per-variable degrees are also
    /// additive, so every quotient term lies in a finite exponent box, which
    /// bounds the division loop.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let (dl_m, dl_c) = d.leading().cloned()?;
        if d.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                out.push((m.checked_div(dl_m)?, c.div_exact(&dl_c)?));
            }
            return Some(LaurentPoly { terms: out });
        }
        let (sr, dr) = (self.exponent_range()?, d.exponent_range()?);
        let mut lo = [0i32; MAX_VARS];
        let mut hi = [0i32; MAX_VARS];
        for v in 0..MAX_VARS {
            lo[v] = sr.min[v] - dr.min[v];
            hi[v] = sr.max[v] - dr.max[v];
            if lo[v] > hi[v] {
                return None;
            }
        }
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, Int)> = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            let qm = rm.checked_div(dl_m)?;
            let e = qm.exponents();
            if (0..MAX_VARS).any(|v| e[v] < lo[v] || e[v] > hi[v]) {
                return None;
            }
            let qc = rc.div_exact(&dl_c)?;
            let t = LaurentPoly::term(qm, qc.clone());
            rem = &rem - &(&t * d);
            quot.push((qm, qc));
        }
        quot.reverse();
        Some(LaurentPoly { terms: quot })
    }

    /// Substitutes `images[v]` for variable `v`. Negative exponents need a unit
    /// monomial image; otherwise `None`.
    pub fn substitute(&self, images: &[LaurentPoly]) -> Option<LaurentPoly> {
        let mut inverses: Vec<Option<LaurentPoly>> = vec![None; images.len()];
        let mut acc = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut t = LaurentPoly::constant(c.clone());
            for v in 0..MAX_VARS {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                let img = images.get(v)?;
                let f = if e > 0 {
                    img.pow(e as u32)
                } else {
                    if inverses[v].is_none() {
                        inverses[v] = Some(img.monomial_inverse()?);
                    }
                    inverses[v].as_ref().unwrap().pow((-e) as u32)
                };
                t = &t * &f;
                if t.is_zero() {
                    break;
                }
            }
            acc.push(t);
        }
        let mut out = LaurentPoly::zero();
        for t in acc {
            out.add_assign_ref(&t);
        }
        Some(out)
    }

    /// Largest coefficient bit length (0 for the zero polynomial).
    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c.bits()).max().unwrap_or(0)
    }
}

fn overflow_panic() -> ! {
    panic!("Laurent monomial exponent left the supported range [{MIN_EXP}, {MAX_EXP}]")
}

#[inline]
fn check_product_range(p: &LaurentPoly, q: &LaurentPoly) {
    // Single-term operands are the common case in table arithmetic.
    if p.terms.len() == 1 && q.terms.len() == 1 {
        if p.terms[0].0.checked_mul(q.terms[0].0).is_none() {
            overflow_panic();
        }
        return;
    }
    let (Some(a), Some(b)) = (p.exponent_range(), q.exponent_range()) else {
        return;
    };
    for v in 0..MAX_VARS {
        if a.max[v] + b.max[v] > MAX_EXP || a.min[v] + b.min[v] < MIN_EXP {
            overflow_panic();
        }
    }
}

fn combine_sorted(terms: Vec<(Monomial, Int)>) -> Vec<(Monomial, Int)> {
    let mut out: Vec<(Monomial, Int)> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == m => last.1.add_assign_ref(&c),
            _ => {
                if let Some(last) = out.last() {
                    if last.1.is_zero() {
                        out.pop();
                    }
                }
                out.push((m, c));
            }
        }
    }
    if let Some(last) = out.last() {
        if last.1.is_zero() {
            out.pop();
        }
    }
    // the input length can exceed the result many times over
    if out.capacity() > out.len() + out.len() / 4 {
        out.shrink_to_fit();
    }
    out
}

fn merge(a: &LaurentPoly, b: &LaurentPoly, negate_b: bool) -> LaurentPoly {
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() && j < b.terms.len() {
        let (ma, ca) = &a.terms[i];
        let (mb, cb) = &b.terms[j];
        if ma < mb {
            out.push((*ma, ca.clone()));
            i += 1;
        } else if mb < ma {
            out.push((*mb, if negate_b { -cb } else { cb.clone() }));
            j += 1;
        } else {
            let c = if negate_b { ca.sub_ref(cb) } else { ca.add_ref(cb) };
            if !c.is_zero() {
                out.push((*ma, c));
            }
            i += 1;
            j += 1;
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    for (m, c) in &b.terms[j..] {
        out.push((*m, if negate_b { -c } else { c.clone() }));
    }
    LaurentPoly { terms: out }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(self, rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(self, rhs, true)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if self.terms.len() == 1 && rhs.terms.len() == 1 {
            let (m1, c1) = &self.terms[0];
            let (m2, c2) = &rhs.terms[0];
            let m = m1.checked_mul(*m2).unwrap_or_else(|| overflow_panic());
            return LaurentPoly::term(m, c1.mul_ref(c2));
        }
        LaurentPoly::dot([(self, rhs)])
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl std::fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries(self.terms.iter().map(|(m, c)| (c.to_string(), m.exponents())))
            .finish()
    }
}
