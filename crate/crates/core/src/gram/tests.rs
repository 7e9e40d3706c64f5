use super::*;
use crate::catalog::spec;
use crate::laurent::{FieldPoint, DEFAULT_PRIME};

fn build(id: &str) -> HeckeAlgebra {
    HeckeAlgebra::build(spec(id).unwrap()).unwrap()
}

#[test]
fn base_block_identity_row() {
    let alg = build("G6");
    let base = base_blocks(&alg).unwrap();
    assert!(base[0][0][0].is_one());
    for i in 1..alg.layer {
        assert!(base[0][0][i].is_zero() && base[0][i][0].is_zero(), "τ(y_{i}) must vanish");
    }
    assert_eq!(base.len(), alg.m);
}

#[test]
fn tau_reads_the_identity_coordinate() {
    let alg = build("G6");
    assert!(tau(&crate::hecke::unit(0)).is_one());
    assert!(tau(&crate::hecke::unit(3)).is_zero());
    let ss = alg.express(&Word::parse("s s").unwrap()).unwrap();
    assert_eq!(tau(&ss), alg.vars.parse("a0").unwrap());
}

#[test]
fn z_matrix_reconstructs_z_to_the_m() {
    let alg = build("G6");
    let z = z_matrix(&alg).unwrap();
    assert!(z.reconstructs(&alg).unwrap());
    let zm = Word(vec![Letter::new(CENTER_LETTER); alg.m]);
    assert_eq!(z.row_vector(0), alg.express(&zm).unwrap());
}

#[test]
fn recursion_matches_naive_blocks() {
    for id in ["G4", "G6"] {
        let alg = build(id);
        let g = gram_blocks(&alg).unwrap();
        assert!(g.is_complete());
        for k in 0..g.blocks.len() {
            assert_eq!(g.blocks[k], naive_block(&alg, k).unwrap(), "{id} block {k}");
        }
    }
}

#[test]
fn degenerate_z_copies_the_first_block() {
    let l = 2;
    let c = |v: i64| LaurentPoly::constant(v);
    let identity = vec![vec![c(1), c(0)], vec![c(0), c(1)]];
    let zero = vec![vec![c(0); 2]; 2];
    let z = ZMatrix { l, m: 2, blocks: vec![identity, zero] };
    let a0 = vec![vec![c(1), c(2)], vec![c(2), c(5)]];
    let a1 = vec![vec![c(7), c(0)], vec![c(0), c(3)]];
    assert_eq!(recurse_block(&z, &[a0.clone(), a1]), a0);
}

#[test]
fn symmetry_and_its_perturbation() {
    let alg = build("G4");
    let mut g = gram_blocks(&alg).unwrap();
    assert!(g.is_symmetric());
    let full = g.assemble();
    for (r, row) in full.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            assert_eq!(e, &full[c][r]);
        }
    }
    let (k, i, j) = (1, 0, 1);
    g.blocks[k][i][j] = &g.blocks[k][i][j] + &LaurentPoly::one();
    assert_eq!(g.first_asymmetry(), Some((k, i, j)));
}

#[test]
fn budget_truncates_the_recursion() {
    let alg = build("G6");
    let rec = gram_recurrence(&alg).unwrap();
    let full = rec.exact_blocks(None);
    assert!(full.is_complete());
    let cut = rec.exact_blocks(Some(0));
    assert_eq!(cut.blocks.len(), alg.m);
    assert!(!cut.is_complete());
    assert_eq!(cut.blocks[..], full.blocks[..alg.m]);
}

#[test]
fn exact_determinants() {
    for (id, want) in [("G4", "-c0^96"), ("G12", "-a0^576")] {
        let alg = build(id);
        let g = gram_blocks(&alg).unwrap();
        let det = determinant_exact(g.assemble(), 1_000_000).unwrap();
        assert_eq!(det, alg.vars.parse(want).unwrap(), "{id}");
        assert_eq!(det, alg.spec.expected_determinant().unwrap());
        let bound = DegreeBound::compute(&gram_recurrence(&alg).unwrap(), &det, alg.vars.len());
        let deg = det.exponent_range().unwrap().max_total as i64;
        assert!(deg - bound.shift.iter().sum::<i64>() <= bound.degree as i64);
    }
}

#[test]
fn modular_path_agrees_with_exact_blocks() {
    let alg = build("G6");
    let rec = gram_recurrence(&alg).unwrap();
    let exact = rec.exact_blocks(None).assemble();
    let expected = alg.spec.expected_determinant().unwrap();
    let v = modular_check(&rec, &alg.vars, &expected, Some(3), 7, DEFAULT_PRIME, false).unwrap();
    assert!(v.pass && v.symmetric);
    for (values, det, want) in &v.evaluations {
        let pt = FieldPoint::new(&alg.vars, DEFAULT_PRIME, values.clone()).unwrap();
        let m: Vec<Vec<u64>> =
            exact.iter().map(|r| r.iter().map(|e| alg.vars.evaluate(e, &pt).unwrap()).collect()).collect();
        assert_eq!(determinant_mod_p(m, DEFAULT_PRIME), *det);
        assert_eq!(alg.vars.evaluate(&expected, &pt).unwrap(), *want);
    }
}

#[test]
fn modular_check_and_probe() {
    let alg = build("G9");
    let rec = gram_recurrence(&alg).unwrap();
    let expected = alg.vars.parse("a0^2240*c0^1248").unwrap();
    let v = modular_check(&rec, &alg.vars, &expected, None, 1, DEFAULT_PRIME, true).unwrap();
    assert!(v.pass && v.trials >= 5 && v.log2_error_bound < -100.0);
    let probe = v.probe.unwrap();
    assert!(probe.is_signed_unit());
    assert_eq!(probe.to_string(), "a0^2240*c0^1248");
    let wrong = alg.vars.parse("a0^2241*c0^1248").unwrap();
    let v = modular_check(&rec, &alg.vars, &wrong, Some(1), 1, DEFAULT_PRIME, false).unwrap();
    assert!(!v.pass);
}

#[test]
fn modular_check_rejects_bad_primes() {
    let alg = build("G4");
    let rec = gram_recurrence(&alg).unwrap();
    let e = alg.spec.expected_determinant().unwrap();
    assert!(matches!(modular_check(&rec, &alg.vars, &e, None, 1, 2_147_483_649, false), Err(DetError::BadPrime(_))));
    assert!(matches!(modular_check(&rec, &alg.vars, &e, None, 1, 101, false), Err(DetError::BoundTooLarge { .. })));
}

#[test]
fn specialized_blocks_of_g4_in_g7() {
    let g7 = build("G7");
    let g7_gram = gram_blocks(&g7).unwrap();
    let g4 = build("G4");
    let g4_gram = gram_blocks(&g4).unwrap();
    let theta: Vec<LaurentPoly> = g4.spec.theta_images().unwrap().into_iter().map(|(_, p)| p).collect();
    let r = specialized_block_check(&g4, &g4_gram, &g7, &g7_gram, &theta).unwrap();
    assert!(r.pass && r.zero_pattern && r.leading_block);
    assert_eq!(r.index, 6);
    // a1 sent to 1 instead of 0
    let names = g7.vars.names();
    let mut bad = theta.clone();
    bad[names.iter().position(|n| n == "a1").unwrap()] = LaurentPoly::one();
    let r = specialized_block_check(&g4, &g4_gram, &g7, &g7_gram, &bad).unwrap();
    assert!(!r.pass);
}
