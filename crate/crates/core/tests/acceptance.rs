//! Runs the full default pipeline on all twelve groups and prints one
//! PASS/FAIL line per acceptance criterion.
//!
//! A failing criterion is reported, not turned into a test failure; set
//! `ACCEPTANCE_STRICT=1` to get a nonzero exit status instead.

use hecke_trace::catalog::{self, RealizedGroup};
use hecke_trace::gram::{self, gram_blocks, gram_recurrence, modular_check, naive_block};
use hecke_trace::group::Letter;
use hecke_trace::hecke::{HeckeAlgebra, SparseMatrix};
use hecke_trace::laurent::{LaurentPoly, DEFAULT_PRIME};
use hecke_trace::verify::{basis_images, lifting_check, run_group, GroupReport, RunConfig};
use serde_json::Value;
use std::time::Instant;

const ORDERS: [(&str, usize, usize); 12] = [
    ("G4", 24, 2),
    ("G5", 72, 6),
    ("G6", 48, 4),
    ("G7", 144, 12),
    ("G8", 96, 4),
    ("G9", 192, 8),
    ("G10", 288, 12),
    ("G11", 576, 24),
    ("G12", 48, 2),
    ("G13", 96, 4),
    ("G14", 144, 6),
    ("G15", 288, 12),
];

struct Verdict {
    pass: bool,
    summary: String,
    problems: Vec<String>,
}

impl Verdict {
    fn new() -> Self {
        Verdict { pass: true, summary: String::new(), problems: Vec::new() }
    }

    fn require(&mut self, ok: bool, problem: impl FnOnce() -> String) {
        if !ok {
            self.pass = false;
            self.problems.push(problem());
        }
    }
}

fn stage_ms(reports: &[GroupReport], name: &str) -> u64 {
    reports.iter().filter_map(|r| r.stage(name)).map(|s| s.duration_ms).sum()
}

fn details<'a>(r: &'a GroupReport, name: &str) -> Option<&'a Value> {
    r.stage(name).map(|s| &s.details)
}

fn stage_passes(r: &GroupReport, name: &str) -> bool {
    r.stage(name).map(|s| s.pass).unwrap_or(false)
}

fn realization(reports: &[GroupReport]) -> Verdict {
    let mut v = Verdict::new();
    for (r, (id, order, center)) in reports.iter().zip(ORDERS) {
        let d = details(r, "factorization").cloned().unwrap_or(Value::Null);
        let ok = d["presentation_order"] == order
            && d["realized_order"] == order
            && d["center_order"] == center
            && d["center_word_order"] == center;
        v.require(ok, || format!("{id}: {d}"));
    }
    let ms = stage_ms(reports, "factorization");
    v.require(ms < 10_000, || format!("took {ms} ms"));
    v.summary = format!("12 orders and centers, {:.1} s", ms as f64 / 1000.0);
    v
}

fn factorization(reports: &[GroupReport]) -> Verdict {
    let mut v = Verdict::new();
    for r in reports {
        let d = details(r, "factorization").cloned().unwrap_or(Value::Null);
        v.require(d["factorization"] == true && d["tree"] == true, || format!("{}: {d}", r.group));
    }
    let ms = stage_ms(reports, "factorization");
    v.require(ms < 10_000, || format!("took {ms} ms"));
    v.summary = format!("factorization and spanning tree for 12 records, {:.1} s", ms as f64 / 1000.0);
    v
}

fn basis(reports: &[GroupReport]) -> Verdict {
    let mut v = Verdict::new();
    let mut slowest_tetra = 0;
    let mut g11 = 0;
    for r in reports {
        v.require(stage_passes(r, "table") && stage_passes(r, "relations"), || {
            format!("{}: table {:?} relations {:?}", r.group, details(r, "table"), details(r, "relations"))
        });
        let ms = r.stage("table").map(|s| s.duration_ms).unwrap_or(0)
            + r.stage("relations").map(|s| s.duration_ms).unwrap_or(0);
        let family = &catalog::spec(&r.group).unwrap().maximal;
        if family == "G7" {
            slowest_tetra = slowest_tetra.max(ms);
        }
        if r.group == "G11" {
            g11 = ms;
        }
    }
    v.require(slowest_tetra < 300_000, || format!("slowest tetrahedral group took {slowest_tetra} ms"));
    v.require(g11 < 1_800_000, || format!("G11 took {g11} ms"));
    v.summary = format!(
        "tables close and relations hold for 12 groups; slowest tetrahedral {:.1} s, G11 {:.1} s",
        slowest_tetra as f64 / 1000.0,
        g11 as f64 / 1000.0
    );
    v
}

fn symmetry(reports: &[GroupReport]) -> Verdict {
    let mut v = Verdict::new();
    let mut partial = Vec::new();
    for r in reports {
        let d = details(r, "gram").cloned().unwrap_or(Value::Null);
        v.require(stage_passes(r, "gram"), || format!("{}: {d}", r.group));
        if d["exact_blocks"] != d["blocks"] {
            partial.push(format!("{} {}/{}", r.group, d["exact_blocks"], d["blocks"]));
        }
    }
    v.summary = if partial.is_empty() {
        "all blocks expanded and exactly symmetric; trace identity holds on basis x generators".into()
    } else {
        format!(
            "expanded blocks exactly symmetric; blocks beyond the term budget ({}) covered by the exact trace identity on basis x generators",
            partial.join(", ")
        )
    };
    v
}

fn recursion_oracle() -> Verdict {
    let mut v = Verdict::new();
    let mut compared = 0;
    for id in ["G4", "G6"] {
        let alg = HeckeAlgebra::build(catalog::spec(id).unwrap()).unwrap();
        let g = gram_blocks(&alg).unwrap();
        v.require(g.is_complete(), || format!("{id}: recursion incomplete"));
        for (k, block) in g.blocks.iter().enumerate() {
            compared += 1;
            v.require(*block == naive_block(&alg, k).unwrap(), || format!("{id}: block {k} differs"));
        }
    }
    v.summary = format!("{compared} blocks of G4 and G6 equal their entrywise traces");
    v
}

fn determinants(reports: &[GroupReport]) -> Verdict {
    let mut v = Verdict::new();
    let printed = [("G4", "-c0^96"), ("G12", "-a0^576")];
    for (id, det) in printed {
        let r = reports.iter().find(|r| r.group == id).unwrap();
        let d = details(r, "det-exact").cloned().unwrap_or(Value::Null);
        v.require(stage_passes(r, "det-exact") && d["determinant"] == det, || format!("{id}: {d}"));
    }
    let mut log_sum = f64::NEG_INFINITY;
    for r in reports.iter().filter(|r| printed.iter().all(|(id, _)| *id != r.group)) {
        let d = details(r, "det-modular").cloned().unwrap_or(Value::Null);
        let trials = d["trials"].as_u64().unwrap_or(0);
        v.require(stage_passes(r, "det-modular") && trials >= 5, || {
            format!("{}: expected {}, observed {}", r.group, d["expected"], d["observed"])
        });
        if let Some(b) = d["log2_error_bound"].as_f64() {
            // log2(2^log_sum + 2^b)
            let hi = log_sum.max(b);
            log_sum = hi + ((log_sum - hi).exp2() + (b - hi).exp2()).log2();
        }
    }
    v.require(log_sum < -100.0, || format!("cumulative false-accept bound 2^{log_sum:.1}"));
    v.summary = format!("G4, G12 exact; ten groups modular, cumulative false-accept bound 2^{log_sum:.1}");
    v
}

fn condition3(reports: &[GroupReport]) -> Verdict {
    let mut v = Verdict::new();
    let mut taus = Vec::new();
    for r in reports {
        let d = details(r, "cond3").cloned().unwrap_or(Value::Null);
        v.require(stage_passes(r, "cond3"), || format!("{}: {d}", r.group));
        taus.push(format!("{} {}", r.group, d["tau_pi"].as_str().unwrap_or("?")));
    }
    v.summary = format!("all vanishings exact; tau(z^m): {}", taus.join(", "));
    v
}

fn sampling(reports: &[GroupReport]) -> Verdict {
    let mut v = Verdict::new();
    for r in reports {
        let d = details(r, "trace-sample").cloned().unwrap_or(Value::Null);
        let ok = stage_passes(r, "trace-sample")
            && d["pairs"].as_u64().unwrap_or(0) >= 200
            && d["max_len"].as_u64().unwrap_or(99) <= 12;
        v.require(ok, || format!("{}: {d}", r.group));
    }
    v.summary = "200 random word pairs per group, |w| <= 12".into();
    v
}

fn fault_injection() -> Verdict {
    let mut v = Verdict::new();
    let spec = catalog::spec("G6").unwrap();
    let alg = HeckeAlgebra::build(spec).unwrap();

    // corrupted matrix entry
    let mut bad = HeckeAlgebra::build(spec).unwrap();
    let s = Letter::new('s');
    let mut rows = bad.matrix(s).unwrap().rows().to_vec();
    let r = rows.iter().position(|row| row.len() > 1).unwrap();
    rows[r][0].1 = &rows[r][0].1 + &LaurentPoly::one();
    bad.replace_matrix(s, SparseMatrix::from_rows(rows));
    let caught = bad.check_relations().unwrap().iter().any(|c| !c.pass);
    v.require(caught, || "corrupted entry of M_s not detected".into());

    // wrong determinant exponent
    let rec = gram_recurrence(&alg).unwrap();
    let expected = spec.expected_determinant().unwrap();
    let c0 = alg.vars.var("c0").unwrap();
    let wrong = &expected * &c0;
    let right = modular_check(&rec, &alg.vars, &expected, Some(5), 1, DEFAULT_PRIME, false).unwrap();
    let off = modular_check(&rec, &alg.vars, &wrong, Some(5), 1, DEFAULT_PRIME, false).unwrap();
    v.require(right.pass && !off.pass, || "shifted c0 exponent not detected".into());

    // duplicated basis word
    let group = RealizedGroup::new(spec, 10).unwrap();
    let mut images = basis_images(&alg, &group).unwrap();
    let good = lifting_check(&group.group, &images).pass;
    images[7] = images[3];
    v.require(good && !lifting_check(&group.group, &images).pass, || "duplicated basis word not detected".into());

    // asymmetric Gram block
    let mut blocks = gram::gram_blocks(&alg).unwrap();
    blocks.blocks[2][1][4] = &blocks.blocks[2][1][4] + &LaurentPoly::one();
    v.require(blocks.first_asymmetry().is_some(), || "perturbed Gram block not detected".into());

    v.summary = "corrupted matrix entry, wrong determinant exponent, duplicated basis word and asymmetric block all rejected".into();
    v
}

fn main() {
    let cfg = RunConfig::default();
    let start = Instant::now();
    let mut reports = Vec::new();
    for (id, _, _) in ORDERS {
        let t = Instant::now();
        let r = run_group(id, &cfg).expect("catalog group");
        eprintln!("{id}: {} in {:.1} s", if r.pass { "pass" } else { "FAIL" }, t.elapsed().as_secs_f64());
        reports.push(r);
    }
    let criteria: [(&str, Verdict); 9] = [
        ("group realization", realization(&reports)),
        ("factorization and spanning trees", factorization(&reports)),
        ("basis certification", basis(&reports)),
        ("Gram symmetry", symmetry(&reports)),
        ("recursion oracle", recursion_oracle()),
        ("determinants", determinants(&reports)),
        ("condition 3", condition3(&reports)),
        ("trace sampling", sampling(&reports)),
        ("fault injection", fault_injection()),
    ];
    println!();
    for (i, (name, v)) in criteria.iter().enumerate() {
        println!("{} {}. {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.summary);
        for p in &v.problems {
            println!("       {p}");
        }
    }
    let passed = criteria.iter().filter(|(_, v)| v.pass).count();
    println!("{passed}/9 criteria pass ({:.0} s)", start.elapsed().as_secs_f64());
    let strict = std::env::var("ACCEPTANCE_STRICT").map(|v| v == "1").unwrap_or(false);
    if strict && passed < 9 {
        std::process::exit(1);
    }
}
