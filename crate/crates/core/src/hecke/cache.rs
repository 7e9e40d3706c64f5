//! Plain-text cache of the generator matrices.
//!
//! ```text
//! hecke-matrices 1
//! group G6
//! spec <sha256 of the catalog record>
//! dim 48
//! matrix s
//! <row> <col> <poly>
//! ...
//! end
//! ```
//!
//! A cache is only accepted when its `spec` line matches the current
//! catalog record, so edits to the catalog invalidate it.

use super::{HeckeAlgebra, HeckeError, SparseMatrix};
use crate::catalog::GroupSpec;
use crate::group::{Letter, Word};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

const MAGIC: &str = "hecke-matrices 1";

/// Serializes the generator matrices of `alg`.
pub fn write_cache(alg: &HeckeAlgebra) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}\ngroup {}\nspec {}\ndim {}", alg.spec.id, alg.spec.spec_hash(), alg.dim);
    for (l, m) in alg.generator_matrices() {
        let _ = writeln!(out, "matrix {l}");
        for (i, row) in m.rows().iter().enumerate() {
            for (j, p) in row {
                let _ = writeln!(out, "{i} {j} {}", alg.vars.format(p));
            }
        }
    }
    out.push_str("end\n");
    out
}

/// SHA-256 of a serialized cache.
pub fn cache_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Rebuilds the algebra from a serialized cache of `spec`.
pub fn read_cache(spec: &'static GroupSpec, text: &str) -> Result<HeckeAlgebra, HeckeError> {
    let bad = |msg: String| HeckeError::Cache(msg);
    let vars = spec.var_spec()?;
    let mut lines = text.lines().enumerate();
    let mut header = |key: &str| -> Result<String, HeckeError> {
        let (n, line) = lines.next().ok_or_else(|| bad(format!("missing `{key}` line")))?;
        let rest = if key == MAGIC { line.strip_prefix(MAGIC).map(str::to_string) } else { line.strip_prefix(key).map(|r| r.trim().to_string()) };
        rest.ok_or_else(|| bad(format!("line {}: expected `{key}`", n + 1)))
    };
    header(MAGIC)?;
    if header("group")? != spec.id {
        return Err(bad(format!("cache is not for {}", spec.id)));
    }
    if header("spec")? != spec.spec_hash() {
        return Err(bad("catalog record changed since the cache was written".into()));
    }
    let dim: usize = header("dim")?.parse().map_err(|_| bad("bad dimension".into()))?;
    let mut mats: HashMap<Letter, Vec<Vec<_>>> = HashMap::new();
    let mut current: Option<Letter> = None;
    let mut ended = false;
    for (n, line) in lines {
        if line == "end" {
            ended = true;
            break;
        }
        if let Some(name) = line.strip_prefix("matrix ") {
            let w = Word::parse(name).map_err(|e| bad(format!("line {}: {e}", n + 1)))?;
            let [l] = w.letters() else { return Err(bad(format!("line {}: `{name}` is not a letter", n + 1))) };
            mats.insert(*l, vec![Vec::new(); dim]);
            current = Some(*l);
            continue;
        }
        let l = current.ok_or_else(|| bad(format!("line {}: entry outside a matrix", n + 1)))?;
        let mut parts = line.splitn(3, ' ');
        let mut index = || -> Result<usize, HeckeError> {
            let v: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| bad(format!("line {}: bad index", n + 1)))?;
            if v >= dim {
                return Err(bad(format!("line {}: index {v} out of range", n + 1)));
            }
            Ok(v)
        };
        let (i, j) = (index()?, index()?);
        let poly = vars.parse(parts.next().unwrap_or("")).map_err(|e| bad(format!("line {}: {e}", n + 1)))?;
        mats.get_mut(&l).expect("current matrix")[i].push((j, poly));
    }
    if !ended {
        return Err(bad("truncated cache".into()));
    }
    let gens = mats.into_iter().map(|(l, rows)| (l, SparseMatrix::from_rows(rows))).collect();
    HeckeAlgebra::from_generator_matrices(spec, gens)
}

pub fn cache_path(dir: &Path, spec: &GroupSpec) -> PathBuf {
    dir.join(format!("{}.matrices", spec.id))
}
