use super::{LaurentError, LaurentPoly};

/// Coefficients `[a_0, …, a_{e-1}]` of `T^e = Σ a_k T^k` when the relation is
/// `(T - u_1)…(T - u_e) = 0`, i.e. `a_{e-k} = (-1)^{k-1} e_k(u)`.
pub fn coefficients_from_eigenvalues(us: &[LaurentPoly]) -> Result<Vec<LaurentPoly>, LaurentError> {
    let e = us.len();
    if !(2..=4).contains(&e) {
        return Err(LaurentError::UnsupportedOrder(e));
    }
    // elementary symmetric polynomials by the usual product recursion
    let mut elem = vec![LaurentPoly::one()];
    for u in us {
        let mut next = vec![LaurentPoly::zero(); elem.len() + 1];
        for (k, ek) in elem.iter().enumerate() {
            next[k].add_assign_ref(ek);
            next[k + 1].add_assign_ref(&(ek * u));
        }
        elem = next;
    }
    Ok((0..e)
        .map(|j| {
            let k = e - j;
            if k % 2 == 1 {
                elem[k].clone()
            } else {
                -&elem[k]
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::super::VarSpec;
    use super::*;

    #[test]
    fn quadratic_and_cubic() {
        let r = VarSpec::new([("u1", true), ("u2", true), ("u3", true)]).unwrap();
        let u: Vec<_> = ["u1", "u2", "u3"].iter().map(|n| r.var(n).unwrap()).collect();
        let a = coefficients_from_eigenvalues(&u[..2]).unwrap();
        assert_eq!(a[0], r.parse("-u1*u2").unwrap());
        assert_eq!(a[1], r.parse("u1 + u2").unwrap());
        let a = coefficients_from_eigenvalues(&u).unwrap();
        assert_eq!(a[0], r.parse("u1*u2*u3").unwrap());
        assert_eq!(a[1], r.parse("-u1*u2 - u1*u3 - u2*u3").unwrap());
        assert_eq!(a[2], r.parse("u1 + u2 + u3").unwrap());
        assert!(coefficients_from_eigenvalues(&u[..1]).is_err());
    }

    #[test]
    fn eigenvalues_are_roots() {
        let r = VarSpec::new([("u1", true), ("u2", true), ("u3", true), ("u4", true)]).unwrap();
        let u: Vec<_> = ["u1", "u2", "u3", "u4"].iter().map(|n| r.var(n).unwrap()).collect();
        let a = coefficients_from_eigenvalues(&u).unwrap();
        for x in &u {
            let mut rhs = LaurentPoly::zero();
            for (k, ak) in a.iter().enumerate() {
                rhs.add_assign_ref(&(ak * &x.pow(k as u32)));
            }
            assert_eq!(x.pow(4), rhs);
        }
    }
}
