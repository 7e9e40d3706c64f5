use super::*;
use crate::catalog::spec;
use crate::laurent::LaurentPoly;
use std::collections::BTreeMap;

fn g6() -> HeckeAlgebra {
    HeckeAlgebra::build(spec("G6").unwrap()).unwrap()
}

fn p(alg: &HeckeAlgebra, s: &str) -> LaurentPoly {
    alg.vars.parse(s).unwrap()
}

fn l(s: &str) -> Letter {
    Word::parse(s).unwrap().letters()[0]
}

/// A table cell as a map from row to its nonzero coefficient.
fn cell_map(t: &HeckeTable, row: usize, letter: Letter) -> BTreeMap<usize, HPoly> {
    t.cell(row, letter).expect("filled cell").iter().filter(|(_, h)| !h.is_zero()).cloned().collect()
}

#[test]
fn g6_tree_and_hecke_entries() {
    let alg = g6();
    let t = alg.table().unwrap();
    let par = alg.parabolic();
    // b_1.s = b_2
    assert_eq!(cell_map(t, 0, l("s")), BTreeMap::from([(1, par.one())]));
    // b_1.s^-1 = a0^-1 b_2 - a0^-1 a1 b_1
    let expected = BTreeMap::from([(0, par.scalar(p(&alg, "-a0^-1*a1"))), (1, par.scalar(p(&alg, "a0^-1")))]);
    assert_eq!(cell_map(t, 0, l("s^-1")), expected);
    // b_2.u = b_3
    assert_eq!(cell_map(t, 1, l("u")), BTreeMap::from([(2, par.one())]));
}

#[test]
fn g6_saturated_entry() {
    let alg = g6();
    let t = alg.table().unwrap();
    let par = alg.parabolic();
    // b_4.u = a0^-1 u^-1 b_6 - a0^-1 a1 u^-1 b_5, with b_5 = z, b_6 = z s
    let tinv = par.t_inv().clone();
    let expected = BTreeMap::from([
        (t.row(1, 0), par.mul(&par.scalar(p(&alg, "-a0^-1*a1")), &tinv)),
        (t.row(1, 1), par.mul(&par.scalar(p(&alg, "a0^-1")), &tinv)),
    ]);
    assert_eq!(cell_map(t, 3, l("u")), expected);
}

#[test]
fn every_generator_column_is_full() {
    let alg = g6();
    let t = alg.table().unwrap();
    for g in alg.spec.generator_names() {
        for letter in [Letter::new(g), Letter::new(g).inverse()] {
            assert!((0..t.rows()).all(|r| t.cell(r, letter).is_some()), "{letter} column incomplete");
        }
    }
}

#[test]
fn quadratic_relation_in_coordinates() {
    let alg = g6();
    let ss = alg.express(&Word::parse("s s").unwrap()).unwrap();
    let s = alg.express(&Word::parse("s").unwrap()).unwrap();
    assert_eq!(s, unit(alg.basis_index(0, 0, 1)));
    assert_eq!(ss, vec![(0, p(&alg, "a0")), (alg.basis_index(0, 0, 1), p(&alg, "a1"))]);
}

#[test]
fn express_of_empty_word_and_basis_words() {
    let alg = g6();
    assert_eq!(alg.express(&Word::empty()).unwrap(), unit(0));
    for i in 0..alg.dim {
        assert_eq!(alg.express(&alg.basis_word(i)).unwrap(), unit(i), "basis element {i}");
        let (k, q, x) = alg.basis_parts(i);
        assert_eq!(alg.basis_index(k, q, x), i);
    }
}

#[test]
fn parabolic_absorption_and_sparse_rows() {
    let alg = g6();
    // 1·u is the basis element u
    let mu = alg.matrix(l("u")).unwrap();
    assert_eq!(mu.row(0), &unit(alg.basis_index(0, 1, 0)));
    // b_1.s = b_2: a single unit entry
    let ms = alg.matrix(l("s")).unwrap();
    assert_eq!(ms.row(0), &unit(alg.basis_index(0, 0, 1)));
}

#[test]
fn central_matrix_inverse_pair_and_deformation() {
    let alg = g6();
    let mz = alg.matrix(Letter::new('z')).unwrap();
    let mzi = alg.matrix(Letter::new('z').inverse()).unwrap();
    assert!(mzi.mul(mz).is_identity() && mz.mul(mzi).is_identity());
    // z^m is the image of π, not the identity
    let zm = mz.pow(alg.m);
    assert!(!zm.is_identity());
    assert_eq!(zm.row(0), &alg.express(&Word::parse("z").unwrap().pow(alg.m)).unwrap());
}

#[test]
fn relations_hold_for_g6_and_g7() {
    for id in ["G6", "G7"] {
        let alg = HeckeAlgebra::build(spec(id).unwrap()).unwrap();
        let checks = alg.check_relations().unwrap();
        assert!(checks.iter().all(|c| c.pass), "{id}: {:?}", checks.iter().find(|c| !c.pass));
    }
}

#[test]
fn corrupted_matrix_is_rejected() {
    let mut alg = g6();
    let ms = alg.matrix(l("s")).unwrap();
    let mut rows: Vec<Vec<(usize, LaurentPoly)>> = ms.rows().to_vec();
    // zero one entry of a row with several terms
    let r = rows.iter().position(|row| row.len() > 1).unwrap();
    rows[r].remove(0);
    alg.replace_matrix(l("s"), SparseMatrix::from_rows(rows));
    let checks = alg.check_relations().unwrap();
    assert!(checks.iter().any(|c| !c.pass));
}

#[test]
fn cache_roundtrip() {
    let alg = g6();
    let text = write_cache(&alg);
    let back = read_cache(alg.spec, &text).unwrap();
    for (letter, m) in alg.generator_matrices() {
        assert_eq!(back.matrix(letter).unwrap(), m);
    }
    assert_eq!(back.matrix(Letter::new('z')).unwrap(), alg.matrix(Letter::new('z')).unwrap());
    assert!(back.check_relations().unwrap().iter().all(|c| c.pass));
    // a cache for another record is refused
    assert!(read_cache(spec("G4").unwrap(), &text).is_err());
    assert!(read_cache(alg.spec, &text.replace("end\n", "")).is_err());
}

mod properties {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn shared() -> &'static HeckeAlgebra {
        static ALG: OnceLock<HeckeAlgebra> = OnceLock::new();
        ALG.get_or_init(g6)
    }

    fn word() -> impl Strategy<Value = Word> {
        proptest::collection::vec((prop_oneof![Just('s'), Just('u')], any::<bool>()), 0..=12)
            .prop_map(|ls| Word(ls.into_iter().map(|(name, inv)| Letter { name, inv }).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn inverse_coherence(w in word(), g in prop_oneof![Just('s'), Just('u')]) {
            let alg = shared();
            let v = alg.express(&w).unwrap();
            let back = vec_mul(&vec_mul(&v, alg.matrix(Letter::new(g)).unwrap()), alg.matrix(Letter::new(g).inverse()).unwrap());
            prop_assert_eq!(back, v);
        }

        #[test]
        fn free_cancellation(w in word()) {
            let alg = shared();
            let v = alg.express(&w.concat(&w.inverse())).unwrap();
            prop_assert_eq!(v, unit(0));
        }
    }
}
