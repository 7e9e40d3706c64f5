//! Per-group verification pipeline and its JSON report.
//!
//! Each requested check becomes one stage with a pass flag and structured
//! details. A stage that cannot produce its input (for example a coset
//! table that does not close) fails, and the stages that depend on it are
//! left out of the report. A stage that runs and returns `false` does not
//! stop the others.

mod checks;

pub use checks::{
    basis_images, condition3_check, condition3_for_words, lifting_check, random_word, trace_identity, trace_sampling,
    Condition3, Lifting, TraceIdentity, TraceSample,
};

use crate::catalog::{self, CatalogError, GroupSpec, RealizedGroup, CENTER_LETTER};
use crate::gram::{self, GramRecurrence};
use crate::group::{verify_factorization, verify_tree, FiniteGroup, Letter, Word};
use crate::hecke::{self, HeckeAlgebra, HeckeError};
use crate::laurent::DEFAULT_PRIME;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::time::Instant;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Factorization,
    Table,
    Relations,
    Gram,
    DetExact,
    DetModular,
    Cond3,
    Lifting,
    TraceSample,
    SpecializedBlock,
}

impl Check {
    pub const ALL: [Check; 10] = [
        Check::Factorization,
        Check::Table,
        Check::Relations,
        Check::Gram,
        Check::DetExact,
        Check::DetModular,
        Check::Cond3,
        Check::Lifting,
        Check::TraceSample,
        Check::SpecializedBlock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Factorization => "factorization",
            Check::Table => "table",
            Check::Relations => "relations",
            Check::Gram => "gram",
            Check::DetExact => "det-exact",
            Check::DetModular => "det-modular",
            Check::Cond3 => "cond3",
            Check::Lifting => "lifting",
            Check::TraceSample => "trace-sample",
            Check::SpecializedBlock => "specialized-block",
        }
    }

    /// Every check that applies to `spec` by default: all of them, with the
    /// exact determinant only where it is cheap.
    pub fn defaults_for(spec: &GroupSpec) -> BTreeSet<Check> {
        Check::ALL.into_iter().filter(|c| *c != Check::DetExact || exact_det_feasible(spec)).collect()
    }
}

impl std::str::FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown check `{s}`"))
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Groups whose exact determinant is computed by default.
pub fn exact_det_feasible(spec: &GroupSpec) -> bool {
    spec.order <= 96 && spec.var_spec().map(|v| v.len() <= 4).unwrap_or(false)
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// `None` runs the defaults of each group.
    pub checks: Option<BTreeSet<Check>>,
    /// Modular trials; `None` picks the count from the degree bound.
    pub trials: Option<usize>,
    pub seed: u64,
    pub prime: u64,
    pub cache_dir: Option<PathBuf>,
    /// Allows `det-exact` on groups outside [`exact_det_feasible`].
    pub force_exact: bool,
    /// Cap on the total number of terms held by exactly expanded Gram
    /// blocks; blocks beyond it are covered by the trace identity.
    pub exact_term_budget: usize,
    pub sample_pairs: usize,
    pub sample_max_len: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            checks: None,
            trials: None,
            seed: 1,
            prime: DEFAULT_PRIME,
            cache_dir: None,
            force_exact: false,
            exact_term_budget: 20_000_000,
            sample_pairs: 200,
            sample_max_len: 12,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Hecke(#[from] HeckeError),
    #[error(transparent)]
    Det(#[from] gram::DetError),
    #[error(transparent)]
    Specialized(#[from] gram::SpecializedError),
    #[error("{0}")]
    Stage(String),
    #[error("det-exact is not feasible for {0}; pass the force flag to run it anyway")]
    NotSmall(String),
    #[error("trials must be at least 1")]
    NoTrials,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Stage {
    pub name: String,
    pub pass: bool,
    pub details: Value,
    pub duration_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GroupReport {
    pub group: String,
    pub pass: bool,
    pub stages: Vec<Stage>,
    pub seed: u64,
    pub prime: u64,
    /// SHA-256 of the serialized generator matrices.
    pub cache_hash: Option<String>,
    pub version: String,
}

impl GroupReport {
    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// The report with every `duration_ms` zeroed, for reproducibility
    /// comparisons.
    pub fn without_timings(&self) -> GroupReport {
        let mut r = self.clone();
        for s in &mut r.stages {
            s.duration_ms = 0;
        }
        r
    }
}

struct Recorder {
    stages: Vec<Stage>,
}

impl Recorder {
    /// Runs one stage; an `Err` is recorded as a failed stage.
    fn run<T, E: std::fmt::Display>(
        &mut self,
        check: Check,
        f: impl FnOnce() -> Result<(bool, Value, T), E>,
    ) -> Option<T> {
        let start = Instant::now();
        let res = f();
        let duration_ms = start.elapsed().as_millis() as u64;
        let (pass, details, out) = match res {
            Ok((p, d, t)) => (p, d, Some(t)),
            Err(e) => (false, json!({ "error": e.to_string() }), None),
        };
        self.stages.push(Stage { name: check.name().into(), pass, details, duration_ms });
        out
    }
}

fn realize(spec: &'static GroupSpec) -> Result<RealizedGroup, CatalogError> {
    RealizedGroup::new(spec, 10)
}

/// Group orders, center, the factorization `Z·⟨g0⟩·X` and the spanning tree.
fn factorization_stage(spec: &'static GroupSpec, group: &RealizedGroup) -> Result<(bool, Value), VerifyError> {
    let own = FiniteGroup::enumerate(&spec.presentation()?, 20 * spec.order).map_err(CatalogError::from)?;
    let g = &group.group;
    let z = group.eval(&Word(vec![Letter::new(CENTER_LETTER)]))?;
    let center = g.center();
    let zs: Vec<usize> = (0..spec.center.order).map(|k| g.pow(z, k)).collect();
    let g0 = group.eval(&Word(vec![Letter::new(spec.parabolic)]))?;
    let ps: Vec<usize> = (0..spec.parabolic_order()).map(|k| g.pow(g0, k)).collect();
    let xs: Vec<usize> = spec.coset_words.iter().map(|w| group.eval(w)).collect::<Result<_, _>>()?;
    let factorization = verify_factorization(g, &zs, &ps, &xs).unwrap_or(false);
    let tree = verify_tree(g, &spec.spanning_tree(), &spec.coset_words, &group.extra());
    let orders_ok = own.order() == spec.order && g.order() == spec.order;
    let center_ok = center.len() == spec.center.order && g.element_order(z) == spec.center.order;
    let pass = orders_ok && center_ok && factorization && tree;
    let details = json!({
        "order": spec.order,
        "presentation_order": own.order(),
        "realized_order": g.order(),
        "center_order": center.len(),
        "center_word_order": g.element_order(z),
        "factorization": factorization,
        "tree": tree,
    });
    Ok((pass, details))
}

/// Builds the algebra from the coset table, or loads it from the cache when
/// the table stage is not requested. Returns the algebra and the hash of its
/// serialized matrices.
fn obtain_algebra(
    spec: &'static GroupSpec,
    cfg: &RunConfig,
    rec: &mut Recorder,
    table_requested: bool,
) -> Option<(HeckeAlgebra, String)> {
    let path = cfg.cache_dir.as_ref().map(|d| hecke::cache_path(d, spec));
    if !table_requested {
        if let Some(p) = &path {
            if let Ok(text) = std::fs::read_to_string(p) {
                if let Ok(alg) = hecke::read_cache(spec, &text) {
                    return Some((alg, hecke::cache_hash(&text)));
                }
            }
        }
    }
    let build = || -> Result<(bool, Value, HeckeAlgebra), HeckeError> {
        let alg = HeckeAlgebra::build(spec)?;
        let t = alg.table().expect("built from a table");
        let details = json!({
            "rows": t.rows(),
            "dimension": alg.dim,
            "rules": t.rule_counts().into_iter().map(|(r, n)| (format!("{r:?}").to_lowercase(), n)).collect::<std::collections::BTreeMap<_, _>>(),
            "hints": spec.hints.len(),
        });
        Ok((true, details, alg))
    };
    let alg = if table_requested {
        rec.run(Check::Table, build)?
    } else {
        match build() {
            Ok((_, _, a)) => a,
            Err(e) => {
                rec.stages.push(Stage {
                    name: Check::Table.name().into(),
                    pass: false,
                    details: json!({ "error": e.to_string() }),
                    duration_ms: 0,
                });
                return None;
            }
        }
    };
    let text = hecke::write_cache(&alg);
    if let Some(p) = &path {
        // a cache that cannot be written only costs a rebuild next time
        let _ = p.parent().map(std::fs::create_dir_all);
        let _ = std::fs::write(p, &text);
    }
    Some((alg, hecke::cache_hash(&text)))
}

fn gram_stage(alg: &HeckeAlgebra, rec: &GramRecurrence, budget: usize) -> Result<(bool, Value, gram::GramBlocks), HeckeError> {
    let reconstructs = rec.z.reconstructs(alg)?;
    let exact = rec.exact_blocks(Some(budget));
    let asym = exact.first_asymmetry();
    let identity = trace_identity(alg)?;
    let pass = reconstructs && asym.is_none() && identity.pass;
    let details = json!({
        "blocks": 2 * rec.m - 1,
        "exact_blocks": exact.blocks.len(),
        "exact_blocks_symmetric": asym.is_none(),
        "first_asymmetry": asym,
        "z_matrix_reconstructs": reconstructs,
        "trace_identity": identity,
    });
    Ok((pass, details, exact))
}

/// Runs the requested checks on one catalog group.
pub fn run_group(id: &str, cfg: &RunConfig) -> Result<GroupReport, VerifyError> {
    let spec = catalog::spec(id)?;
    let checks = cfg.checks.clone().unwrap_or_else(|| Check::defaults_for(spec));
    if checks.contains(&Check::DetExact) && !cfg.force_exact && !exact_det_feasible(spec) {
        return Err(VerifyError::NotSmall(spec.id.clone()));
    }
    if cfg.trials == Some(0) {
        return Err(VerifyError::NoTrials);
    }
    let want = |c: Check| checks.contains(&c);
    let mut rec = Recorder { stages: Vec::new() };
    let mut cache_hash = None;

    let needs_group = want(Check::Factorization) || want(Check::Lifting);
    let group = if needs_group { Some(realize(spec).map_err(|e| e.to_string())) } else { None };
    if want(Check::Factorization) {
        rec.run(Check::Factorization, || -> Result<_, VerifyError> {
            let g = group.as_ref().expect("realized").as_ref().map_err(|e| VerifyError::Stage(e.clone()))?;
            let (p, d) = factorization_stage(spec, g)?;
            Ok((p, d, ()))
        });
    }

    let algebra_checks = [
        Check::Table,
        Check::Relations,
        Check::Gram,
        Check::DetExact,
        Check::DetModular,
        Check::Cond3,
        Check::Lifting,
        Check::TraceSample,
        Check::SpecializedBlock,
    ];
    if algebra_checks.iter().any(|c| want(*c)) {
        if let Some((alg, hash)) = obtain_algebra(spec, cfg, &mut rec, want(Check::Table)) {
            cache_hash = Some(hash);
            run_algebra_checks(spec, &alg, cfg, &checks, group.as_ref().and_then(|g| g.as_ref().ok()), &mut rec);
        }
    }

    let stages = rec.stages;
    Ok(GroupReport {
        group: spec.id.clone(),
        pass: !stages.is_empty() && stages.iter().all(|s| s.pass),
        stages,
        seed: cfg.seed,
        prime: cfg.prime,
        cache_hash,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

fn run_algebra_checks(
    spec: &'static GroupSpec,
    alg: &HeckeAlgebra,
    cfg: &RunConfig,
    checks: &BTreeSet<Check>,
    group: Option<&RealizedGroup>,
    rec: &mut Recorder,
) {
    let want = |c: Check| checks.contains(&c);
    if want(Check::Relations) {
        rec.run(Check::Relations, || -> Result<_, HeckeError> {
            let results = alg.check_relations()?;
            let failed: Vec<&str> = results.iter().filter(|r| !r.pass).map(|r| r.name.as_str()).collect();
            Ok((failed.is_empty(), json!({ "checked": results.len(), "failed": failed }), ()))
        });
    }

    let needs_gram = want(Check::Gram) || want(Check::DetExact) || want(Check::DetModular) || want(Check::SpecializedBlock);
    let recurrence = if needs_gram { gram::gram_recurrence(alg).ok() } else { None };
    let mut exact: Option<gram::GramBlocks> = None;
    if let (true, Some(r)) = (want(Check::Gram), &recurrence) {
        exact = rec.run(Check::Gram, || gram_stage(alg, r, cfg.exact_term_budget));
    }

    if let (true, Some(r)) = (want(Check::DetExact), &recurrence) {
        rec.run(Check::DetExact, || -> Result<_, VerifyError> {
            let blocks = match exact.take().filter(|b| b.is_complete()) {
                Some(b) => b,
                None => r.exact_blocks(None),
            };
            let expected = spec.expected_determinant()?;
            let det = gram::determinant_exact(blocks.assemble(), 2_000_000)?;
            let d = json!({ "determinant": alg.vars.format(&det), "expected": alg.vars.format(&expected), "unit": alg.vars.is_unit(&det) });
            exact = Some(blocks);
            Ok((det == expected, d, ()))
        });
    }

    if let (true, Some(r)) = (want(Check::DetModular), &recurrence) {
        rec.run(Check::DetModular, || -> Result<_, VerifyError> {
            let expected = spec.expected_determinant()?;
            let v = gram::modular_check(r, &alg.vars, &expected, cfg.trials, cfg.seed, cfg.prime, true)?;
            let d = json!({
                "expected": alg.vars.format(&expected),
                "observed": v.probe.as_ref().map(|p| p.to_string()),
                "signed_unit": v.probe.as_ref().map(|p| p.is_signed_unit()).unwrap_or(false),
                "trials": v.trials,
                "degree_bound": v.degree_bound,
                "log2_error_bound": (v.log2_error_bound * 100.0).round() / 100.0,
                "blocks_symmetric_mod_p": v.symmetric,
                "evaluations": v.evaluations,
            });
            Ok((v.pass, d, ()))
        });
    }

    if want(Check::Cond3) {
        rec.run(Check::Cond3, || -> Result<_, HeckeError> {
            let c = condition3_check(alg)?;
            let d = json!({
                "tau_pi": alg.vars.format(&c.tau_pi),
                "checked": c.checked,
                "first_nonzero": c.first_nonzero,
            });
            Ok((c.pass, d, ()))
        });
    }

    if want(Check::Lifting) {
        rec.run(Check::Lifting, || -> Result<_, VerifyError> {
            let owned;
            let g = match group {
                Some(g) => g,
                None => {
                    owned = realize(spec)?;
                    &owned
                }
            };
            let l = lifting_check(&g.group, &basis_images(alg, g)?);
            Ok((l.pass, serde_json::to_value(&l).expect("serializable"), ()))
        });
    }

    if want(Check::TraceSample) {
        rec.run(Check::TraceSample, || -> Result<_, HeckeError> {
            let t = trace_sampling(alg, cfg.sample_pairs, cfg.sample_max_len, cfg.seed)?;
            Ok((t.pass, serde_json::to_value(&t).expect("serializable"), ()))
        });
    }

    if want(Check::SpecializedBlock) {
        if spec.is_maximal() {
            rec.run(Check::SpecializedBlock, || -> Result<_, VerifyError> {
                Ok((true, json!({ "classes": 1, "note": "maximal group: a single z-power class" }), ()))
            });
        } else if spec.theta.is_some() {
            rec.run(Check::SpecializedBlock, || -> Result<_, VerifyError> {
                let sub_gram = match exact.take().filter(|b| b.is_complete()) {
                    Some(b) => b,
                    None => gram::gram_blocks(alg)?,
                };
                let max_spec = catalog::spec(&spec.maximal)?;
                let max = HeckeAlgebra::build(max_spec)?;
                let max_gram = gram::gram_blocks(&max)?;
                let theta: Vec<_> = spec.theta_images()?.into_iter().map(|(_, p)| p).collect();
                let r = gram::specialized_block_check(alg, &sub_gram, &max, &max_gram, &theta)?;
                Ok((r.pass, serde_json::to_value(&r).expect("serializable"), ()))
            });
        }
    }
}
