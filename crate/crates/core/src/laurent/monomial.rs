//! Packed exponent vectors.
//!
//! Up to [`MAX_VARS`] signed exponents are stored in one `u128`, each in a
//! 14-bit field with a bias of 2^13. Variable 0 occupies the most significant
//! field, so comparing the packed integers is lexicographic comparison of the
//! exponent vectors, and adding two packed values (minus one bias pattern)
//! adds the exponent vectors as long as no field leaves its range.

use std::fmt;

pub const MAX_VARS: usize = 9;
const FIELD_BITS: u32 = 14;
const BIAS: i32 = 1 << (FIELD_BITS - 1);
const FIELD_MASK: u128 = (1u128 << FIELD_BITS) - 1;

pub const MAX_EXP: i32 = BIAS - 1;
pub const MIN_EXP: i32 = -BIAS;

const fn bias_pattern() -> u128 {
    let mut acc = 0u128;
    let mut i = 0;
    while i < MAX_VARS {
        acc |= (BIAS as u128) << (FIELD_BITS * (MAX_VARS - 1 - i) as u32);
        i += 1;
    }
    acc
}

const ONE_BITS: u128 = bias_pattern();

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(u128);

#[inline]
fn shift(var: usize) -> u32 {
    FIELD_BITS * (MAX_VARS - 1 - var) as u32
}

impl Monomial {
    pub const ONE: Monomial = Monomial(ONE_BITS);

    /// Builds a monomial from an exponent slice of length at most `MAX_VARS`.
    pub fn from_exponents(exps: &[i32]) -> Option<Monomial> {
        if exps.len() > MAX_VARS {
            return None;
        }
        let mut bits = ONE_BITS;
        for (i, &e) in exps.iter().enumerate() {
            if !(MIN_EXP..=MAX_EXP).contains(&e) {
                return None;
            }
            let field = (e + BIAS) as u128;
            bits &= !(FIELD_MASK << shift(i));
            bits |= field << shift(i);
        }
        Some(Monomial(bits))
    }

    pub fn var(index: usize, exp: i32) -> Option<Monomial> {
        let mut exps = [0i32; MAX_VARS];
        *exps.get_mut(index)? = exp;
        Monomial::from_exponents(&exps)
    }

    #[inline]
    pub fn exponent(self, var: usize) -> i32 {
        (((self.0 >> shift(var)) & FIELD_MASK) as i32) - BIAS
    }

    pub fn exponents(self) -> [i32; MAX_VARS] {
        let mut out = [0; MAX_VARS];
        for (i, e) in out.iter_mut().enumerate() {
            *e = self.exponent(i);
        }
        out
    }

    pub fn is_one(self) -> bool {
        self.0 == ONE_BITS
    }

    pub fn total_degree(self) -> i32 {
        (0..MAX_VARS).map(|i| self.exponent(i)).sum()
    }

    /// Product without range checks. Callers guarantee the exponent sums stay
    /// inside `[MIN_EXP, MAX_EXP]`; see [`Monomial::checked_mul`].
    #[inline]
    pub fn mul_unchecked(self, other: Monomial) -> Monomial {
        Monomial(self.0.wrapping_add(other.0).wrapping_sub(ONE_BITS))
    }

    pub fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        let mut exps = [0i32; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exponent(i) + other.exponent(i);
        }
        Monomial::from_exponents(&exps)
    }

    pub fn checked_div(self, other: Monomial) -> Option<Monomial> {
        let mut exps = [0i32; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exponent(i) - other.exponent(i);
        }
        Monomial::from_exponents(&exps)
    }

    pub fn checked_pow(self, n: i32) -> Option<Monomial> {
        let mut exps = [0i32; MAX_VARS];
        for (i, e) in exps.iter_mut().enumerate() {
            *e = self.exponent(i).checked_mul(n)?;
        }
        Monomial::from_exponents(&exps)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({:?})", self.exponents())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_roundtrip_and_order() {
        let a = Monomial::from_exponents(&[1, -3, 0, 7]).unwrap();
        assert_eq!(a.exponents()[..4], [1, -3, 0, 7]);
        let b = Monomial::from_exponents(&[1, -2]).unwrap();
        assert!(a < b, "lex order compares the second exponent");
        let c = Monomial::from_exponents(&[0, 100]).unwrap();
        assert!(c < a);
    }

    #[test]
    fn unchecked_product_adds_exponents() {
        let a = Monomial::from_exponents(&[2, -5, 0, 0, 0, 0, 0, 0, 3]).unwrap();
        let b = Monomial::from_exponents(&[-2, 1, 4, 0, 0, 0, 0, 0, -9]).unwrap();
        let p = a.mul_unchecked(b);
        assert_eq!(p.exponents(), [0, -4, 4, 0, 0, 0, 0, 0, -6]);
        assert_eq!(Some(p), a.checked_mul(b));
        assert!(Monomial::var(0, MAX_EXP).unwrap().checked_mul(Monomial::var(0, 1).unwrap()).is_none());
    }
}
