//! Elements of the parabolic subalgebra `H' = R[T] / (T^e - Σ a_k T^k)`.

use crate::laurent::LaurentPoly;

/// Coefficients of `1, T, …, T^{e-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HPoly(pub Vec<LaurentPoly>);

impl HPoly {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.0[0].is_one() && self.0[1..].iter().all(LaurentPoly::is_zero)
    }

    pub fn add_assign(&mut self, other: &HPoly) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            a.add_assign_ref(b);
        }
    }

    pub fn scale(&self, c: &LaurentPoly) -> HPoly {
        HPoly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> HPoly {
        HPoly(self.0.iter().map(|a| -a).collect())
    }
}

/// Arithmetic context for the subalgebra generated by one generator of
/// order `e`.
#[derive(Clone, Debug)]
pub struct Parabolic {
    e: usize,
    coeffs: Vec<LaurentPoly>,
    /// Reduced forms of `T^e, …, T^{2e-2}`.
    high_powers: Vec<HPoly>,
    t_inv: HPoly,
}

impl Parabolic {
    /// `coeffs = [a_0, …, a_{e-1}]` with `T^e = Σ a_k T^k`; `a_0` must be a
    /// unit monomial.
    pub fn new(coeffs: Vec<LaurentPoly>) -> Parabolic {
        let e = coeffs.len();
        assert!(e >= 2, "parabolic generator of order < 2");
        let a0_inv = coeffs[0].monomial_inverse().expect("constant Hecke coefficient is a unit");
        let mut p = Parabolic { e, coeffs: coeffs.clone(), high_powers: Vec::new(), t_inv: HPoly(Vec::new()) };
        // T^e, then T^{n+1} = T·T^n reduced
        let mut cur = HPoly(coeffs.clone());
        for _ in e..(2 * e - 1) {
            p.high_powers.push(cur.clone());
            cur = p.shift(&cur);
        }
        // T^{-1} = a0^{-1} (T^{e-1} - a_{e-1} T^{e-2} - … - a_1)
        let mut inv = vec![LaurentPoly::zero(); e];
        inv[e - 1] = a0_inv.clone();
        for k in 1..e {
            inv[k - 1] = -&(&a0_inv * &coeffs[k]);
        }
        p.t_inv = HPoly(inv);
        p
    }

    pub fn order(&self) -> usize {
        self.e
    }

    pub fn coefficients(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn zero(&self) -> HPoly {
        HPoly(vec![LaurentPoly::zero(); self.e])
    }

    pub fn one(&self) -> HPoly {
        self.scalar(LaurentPoly::one())
    }

    pub fn scalar(&self, c: LaurentPoly) -> HPoly {
        let mut v = vec![LaurentPoly::zero(); self.e];
        v[0] = c;
        HPoly(v)
    }

    pub fn t(&self) -> HPoly {
        self.power(1)
    }

    pub fn t_inv(&self) -> &HPoly {
        &self.t_inv
    }

    /// `T^k` for `k ≥ 0`.
    pub fn power(&self, k: usize) -> HPoly {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.shift(&acc);
        }
        acc
    }

    /// Multiplication by `T`.
    fn shift(&self, h: &HPoly) -> HPoly {
        let e = self.e;
        let top = &h.0[e - 1];
        let mut out = Vec::with_capacity(e);
        out.push(&self.coeffs[0] * top);
        for k in 1..e {
            let mut c = h.0[k - 1].clone();
            if !top.is_zero() {
                c.add_assign_ref(&(&self.coeffs[k] * top));
            }
            out.push(c);
        }
        HPoly(out)
    }

    pub fn mul(&self, a: &HPoly, b: &HPoly) -> HPoly {
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        let e = self.e;
        let mut conv = Vec::with_capacity(2 * e - 1);
        for n in 0..(2 * e - 1) {
            let lo = n.saturating_sub(e - 1);
            let hi = n.min(e - 1);
            conv.push(LaurentPoly::dot((lo..=hi).map(|i| (&a.0[i], &b.0[n - i]))));
        }
        let mut out: Vec<LaurentPoly> = Vec::with_capacity(e);
        for p in 0..e {
            let mut pairs: Vec<(&LaurentPoly, &LaurentPoly)> = vec![(&conv[p], &ONE)];
            for n in e..(2 * e - 1) {
                pairs.push((&conv[n], &self.high_powers[n - e].0[p]));
            }
            out.push(LaurentPoly::dot(pairs));
        }
        HPoly(out)
    }
}

static ONE: std::sync::LazyLock<LaurentPoly> = std::sync::LazyLock::new(LaurentPoly::one);
