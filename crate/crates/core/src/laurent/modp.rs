//! Prime-field helpers for Schwartz–Zippel style identity tests.

use super::{LaurentError, LaurentPoly, VarSpec};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// The Mersenne prime 2^31 - 1, used for every modular check unless overridden.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

pub fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Inverse via the extended Euclidean algorithm; `None` when `gcd(a, p) != 1`.
pub fn mod_inv(a: u64, p: u64) -> Option<u64> {
    let (mut old_r, mut r) = ((a % p) as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(p as i128) as u64)
}

/// An assignment of residues mod `prime` to every variable of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldPoint {
    pub prime: u64,
    pub values: Vec<u64>,
}

impl FieldPoint {
    pub fn new(spec: &VarSpec, prime: u64, values: Vec<u64>) -> Result<Self, LaurentError> {
        if values.len() != spec.len() {
            return Err(LaurentError::MissingAssignment(
                spec.names().get(values.len()).cloned().unwrap_or_default(),
            ));
        }
        let values: Vec<u64> = values.into_iter().map(|v| v % prime).collect();
        for (i, v) in values.iter().enumerate() {
            if spec.is_invertible(i) && *v == 0 {
                return Err(LaurentError::ZeroAtInvertible(spec.names()[i].clone()));
            }
        }
        Ok(FieldPoint { prime, values })
    }

    /// Uniform point with every coordinate nonzero.
    pub fn random<R: Rng>(spec: &VarSpec, prime: u64, rng: &mut R) -> Self {
        let values = (0..spec.len()).map(|_| rng.gen_range(1..prime)).collect();
        FieldPoint { prime, values }
    }
}

impl VarSpec {
    /// Image of `p` under the homomorphism sending each variable to its residue.
    pub fn evaluate(&self, p: &LaurentPoly, pt: &FieldPoint) -> Result<u64, LaurentError> {
        if pt.values.len() != self.len() {
            return Err(LaurentError::MissingAssignment(
                self.names().get(pt.values.len()).cloned().unwrap_or_default(),
            ));
        }
        let q = pt.prime;
        let mut inv = Vec::with_capacity(self.len());
        for (i, &v) in pt.values.iter().enumerate() {
            if self.is_invertible(i) {
                if v % q == 0 {
                    return Err(LaurentError::ZeroAtInvertible(self.names()[i].clone()));
                }
                inv.push(mod_inv(v, q));
            } else {
                inv.push(None);
            }
        }
        let mut acc = 0u64;
        for (m, c) in p.terms() {
            let mut t = c.rem_euclid_u64(q);
            for (i, &v) in pt.values.iter().enumerate() {
                let e = m.exponent(i);
                if e > 0 {
                    t = mul_mod(t, mod_pow(v, e as u64, q), q);
                } else if e < 0 {
                    let iv = inv[i].ok_or_else(|| LaurentError::NotInvertible(self.names()[i].clone()))?;
                    t = mul_mod(t, mod_pow(iv, (-e) as u64, q), q);
                }
            }
            acc = (acc + t) % q;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_oracle() {
        assert_eq!(mod_inv(5, 101), Some(81));
        assert_eq!(5 * 81 % 101, 1);
        assert_eq!(mod_inv(0, 101), None);
        assert_eq!(mod_inv(6, 9), None);
        for a in 1..200u64 {
            let i = mod_inv(a, DEFAULT_PRIME).unwrap();
            assert_eq!(mul_mod(a, i, DEFAULT_PRIME), 1);
        }
    }

    #[test]
    fn fermat() {
        assert_eq!(mod_pow(3, DEFAULT_PRIME - 1, DEFAULT_PRIME), 1);
        assert_eq!(mod_pow(2, 10, 1_000_003), 1024);
    }
}
