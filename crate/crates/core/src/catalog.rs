//! Per-group data for G4–G15: presentations, center words, parabolic
//! generators, coset words with their spanning trees, Hecke parameter
//! classes, specializations and expected Gram determinants.
//!
//! The records live in `data/catalog.json` and are embedded at compile time.

use crate::group::{FiniteGroup, GroupError, Presentation, SpanningTree, TreeEdge, Word};
use crate::laurent::{LaurentError, LaurentPoly, VarSpec};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::sync::OnceLock;

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

/// Letter used for the central element in every group.
pub const CENTER_LETTER: char = 'z';

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown group id `{0}` (expected G4 … G15)")]
    UnknownGroup(String),
    #[error("{0} is maximal in its family and has no specialization")]
    NoSpecialization(String),
    #[error("inconsistent catalog record {id}: {reason}")]
    Invalid { id: String, reason: String },
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Tetrahedral,
    Octahedral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: char,
    pub order: usize,
    /// Parameter class: generators sharing a class share Hecke coefficients
    /// named `<class>0 … <class>{order-1}`.
    pub class: char,
    /// Image in the generators of the family's maximal group.
    pub ambient: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedundantDef {
    pub name: char,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenterSpec {
    pub word: Word,
    pub order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub id: String,
    pub family: Family,
    pub maximal: String,
    pub order: usize,
    /// Index of this group in the family's maximal group.
    pub index: usize,
    pub generators: Vec<GeneratorSpec>,
    pub braid_relations: Vec<(Word, Word)>,
    pub redundant: Vec<RedundantDef>,
    pub center: CenterSpec,
    pub parabolic: char,
    pub coset_words: Vec<Word>,
    pub tree: Vec<TreeEdge>,
    /// Extra braid-group identities offered to the coset-table saturation
    /// when the standard rules stall.
    pub hints: Vec<(Word, Word)>,
    pub expected_det: String,
    pub theta: Option<BTreeMap<String, String>>,
}

#[derive(Deserialize)]
struct CatalogFile {
    groups: Vec<GroupSpec>,
}

/// All twelve records, parsed and validated once.
pub fn all() -> &'static [GroupSpec] {
    static CATALOG: OnceLock<Vec<GroupSpec>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let file: CatalogFile = serde_json::from_str(CATALOG_JSON).expect("embedded catalog parses");
        for g in &file.groups {
            if let Err(e) = g.validate() {
                panic!("embedded catalog: {e}");
            }
        }
        file.groups
    })
}

/// Looks up a record by id, case-insensitively (`g6` or `G6`).
pub fn spec(id: &str) -> Result<&'static GroupSpec, CatalogError> {
    all()
        .iter()
        .find(|g| g.id.eq_ignore_ascii_case(id.trim()))
        .ok_or_else(|| CatalogError::UnknownGroup(id.to_string()))
}

pub fn expected_determinant(id: &str) -> Result<LaurentPoly, CatalogError> {
    spec(id)?.expected_determinant()
}

/// The specialization of the maximal group's coefficients for `id`.
pub fn theta(id: &str) -> Result<Vec<(String, LaurentPoly)>, CatalogError> {
    spec(id)?.theta_images()
}

/// The catalog as pretty-printed JSON.
pub fn dump() -> String {
    #[derive(Serialize)]
    struct Dump<'a> {
        groups: &'a [GroupSpec],
    }
    serde_json::to_string_pretty(&Dump { groups: all() }).expect("catalog serializes")
}

impl GroupSpec {
    fn invalid(&self, reason: impl Into<String>) -> CatalogError {
        CatalogError::Invalid { id: self.id.clone(), reason: reason.into() }
    }

    fn validate(&self) -> Result<(), CatalogError> {
        let e = self.parabolic_order();
        if self.coset_words.len() * e * self.center.order != self.order {
            return Err(self.invalid("|X|·e·|Z| differs from the group order"));
        }
        if self.coset_words.len() != self.tree.len() + 1 {
            return Err(self.invalid("tree edge count does not match the coset words"));
        }
        let known = |c: char| {
            c == CENTER_LETTER
                || self.generators.iter().any(|g| g.name == c)
                || self.redundant.iter().any(|r| r.name == c)
        };
        let mut words: Vec<&Word> = self.coset_words.iter().collect();
        words.extend(self.tree.iter().map(|e| &e.label));
        words.push(&self.center.word);
        words.extend(self.redundant.iter().map(|r| &r.word));
        for (l, r) in self.braid_relations.iter().chain(&self.hints) {
            words.push(l);
            words.push(r);
        }
        for w in words {
            if let Some(l) = w.letters().iter().find(|l| !known(l.name)) {
                return Err(self.invalid(format!("unknown letter `{}` in `{w}`", l.name)));
            }
        }
        let vs = self.var_spec()?;
        if !vs.is_unit(&self.expected_determinant()?) {
            return Err(self.invalid("expected determinant is not a unit"));
        }
        if self.is_maximal() && self.theta.is_some() {
            return Err(self.invalid("maximal group with a specialization row"));
        }
        if !self.is_maximal() && self.family == Family::Tetrahedral && self.theta.is_none() {
            return Err(self.invalid("missing specialization row"));
        }
        Ok(())
    }

    pub fn is_maximal(&self) -> bool {
        self.id == self.maximal
    }

    pub fn generator(&self, name: char) -> Option<&GeneratorSpec> {
        self.generators.iter().find(|g| g.name == name)
    }

    pub fn generator_names(&self) -> Vec<char> {
        self.generators.iter().map(|g| g.name).collect()
    }

    pub fn parabolic_order(&self) -> usize {
        self.generator(self.parabolic).map(|g| g.order).unwrap_or(0)
    }

    /// Definition of a redundant letter or of the central letter, in the
    /// group generators (redundant letters inside it expanded).
    pub fn definition(&self, c: char) -> Option<Word> {
        if c == CENTER_LETTER {
            return Some(self.expand(&self.center.word));
        }
        self.redundant.iter().find(|r| r.name == c).map(|r| r.word.clone())
    }

    /// Expands redundant and central letters down to group generators.
    pub fn expand(&self, w: &Word) -> Word {
        let mut cur = w.clone();
        // definitions may refer to each other; the data nests at most twice
        for _ in 0..4 {
            cur = cur.expand(&|c| {
                if c == CENTER_LETTER {
                    Some(self.center.word.clone())
                } else {
                    self.redundant.iter().find(|r| r.name == c).map(|r| r.word.clone())
                }
            });
        }
        cur
    }

    pub fn spanning_tree(&self) -> SpanningTree {
        SpanningTree { vertices: self.coset_words.clone(), edges: self.tree.clone() }
    }

    /// Words of the coset representatives as spelled along the spanning tree.
    /// These define the basis elements of the Hecke algebra.
    pub fn tree_words(&self) -> Vec<Word> {
        let t = self.spanning_tree();
        (0..self.coset_words.len()).map(|v| t.path_word(v).expect("validated tree")).collect()
    }

    /// Coefficient ring: the classes present, each with `order` coefficients;
    /// only the constant coefficient of each class is invertible.
    pub fn var_spec(&self) -> Result<VarSpec, CatalogError> {
        let mut classes: BTreeMap<char, usize> = BTreeMap::new();
        for g in &self.generators {
            if let Some(&e) = classes.get(&g.class) {
                if e != g.order {
                    return Err(self.invalid(format!("class {} used with orders {e} and {}", g.class, g.order)));
                }
            }
            classes.insert(g.class, g.order);
        }
        let mut vars = Vec::new();
        for (c, e) in classes {
            for k in 0..e {
                vars.push((format!("{c}{k}"), k == 0));
            }
        }
        Ok(VarSpec::new(vars)?)
    }

    /// `[a_0, …, a_{e-1}]` with `T^e = Σ a_k T^k` for generator `name`.
    pub fn hecke_coefficients(&self, name: char) -> Result<Vec<LaurentPoly>, CatalogError> {
        let g = self.generator(name).ok_or_else(|| self.invalid(format!("no generator `{name}`")))?;
        let vs = self.var_spec()?;
        (0..g.order).map(|k| Ok(vs.var(&format!("{}{k}", g.class))?)).collect()
    }

    pub fn expected_determinant(&self) -> Result<LaurentPoly, CatalogError> {
        Ok(self.var_spec()?.parse(&self.expected_det)?)
    }

    /// Images of the maximal group's coefficients in this group's ring.
    pub fn theta_images(&self) -> Result<Vec<(String, LaurentPoly)>, CatalogError> {
        let row = self.theta.as_ref().ok_or_else(|| CatalogError::NoSpecialization(self.id.clone()))?;
        let target = self.var_spec()?;
        let source = spec(&self.maximal)?.var_spec()?;
        let mut out = Vec::new();
        for name in source.names() {
            let img = row.get(name).ok_or_else(|| self.invalid(format!("theta has no image for {name}")))?;
            out.push((name.clone(), target.parse(img)?));
        }
        Ok(out)
    }

    /// Presentation on the group generators: orders plus braid relations.
    pub fn presentation(&self) -> Result<Presentation, CatalogError> {
        let orders: Vec<String> = self.generators.iter().map(|g| format!("{}^{}", g.name, g.order)).collect();
        let rels: Vec<&str> = orders.iter().map(String::as_str).collect();
        Ok(Presentation::new(&self.generator_names(), &rels)?.with_equations(&self.braid_relations)?)
    }

    pub fn spec_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }
}

/// A catalog group realized inside its family's maximal group.
pub struct RealizedGroup {
    pub spec: &'static GroupSpec,
    pub group: FiniteGroup,
}

impl RealizedGroup {
    /// Enumerates the maximal group from its presentation and takes the
    /// subgroup generated by the ambient images of this group's generators.
    pub fn new(spec: &'static GroupSpec, coset_cap_factor: usize) -> Result<Self, CatalogError> {
        let max = self::spec(&spec.maximal)?;
        let pres = max.presentation()?;
        let big = FiniteGroup::enumerate(&pres, coset_cap_factor * max.order)?;
        let mut gens = Vec::new();
        for g in &spec.generators {
            gens.push((g.name, big.eval(&g.ambient)?));
        }
        Ok(RealizedGroup { spec, group: big.subgroup(&gens) })
    }

    /// Evaluates a word that may contain redundant and central letters.
    pub fn eval(&self, w: &Word) -> Result<usize, CatalogError> {
        Ok(self.group.eval(&self.spec.expand(w))?)
    }

    /// Resolver for redundant and central letters.
    pub fn extra(&self) -> impl Fn(char) -> Option<usize> + '_ {
        move |c| self.spec.definition(c).and_then(|w| self.group.eval(&self.spec.expand(&w)).ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_records() {
        assert_eq!(all().len(), 12);
        let ids: Vec<&str> = all().iter().map(|g| g.id.as_str()).collect();
        assert_eq!(ids, ["G4", "G5", "G6", "G7", "G8", "G9", "G10", "G11", "G12", "G13", "G14", "G15"]);
        assert!(spec("g99").is_err());
        assert_eq!(spec("g6").unwrap().id, "G6");
    }

    #[test]
    fn g8_record() {
        let g = spec("G8").unwrap();
        let xs: Vec<String> = g.coset_words.iter().map(|w| w.to_string()).collect();
        assert_eq!(xs, ["1", "v", "v^2", "w", "w u", "w u^2"]);
        assert_eq!(g.definition('w').unwrap().to_string(), "u v u");
        assert_eq!(g.generator('v').unwrap().ambient.to_string(), "s u s");
    }

    #[test]
    fn g14_and_g7_records() {
        let g = spec("G14").unwrap();
        assert_eq!(g.parabolic, 't');
        assert_eq!(g.coset_words.len(), 8);
        assert_eq!(g.coset_words[7].to_string(), "s t s t^2 s");
        let g7 = spec("G7").unwrap();
        assert_eq!(g7.coset_words, spec("G6").unwrap().coset_words);
    }

    #[test]
    fn determinants() {
        let vs = spec("G11").unwrap().var_spec().unwrap();
        assert_eq!(vs.format(&expected_determinant("G11").unwrap()), "a0^7296*b0^4416*c0^4032");
        assert_eq!(spec("G12").unwrap().var_spec().unwrap().format(&expected_determinant("G12").unwrap()), "-a0^576");
        let v5 = spec("G5").unwrap().var_spec().unwrap();
        assert_eq!(v5.format(&expected_determinant("G5").unwrap()), "-b0^264*c0^336");
        for g in all() {
            let d = g.expected_determinant().unwrap();
            assert!(g.var_spec().unwrap().is_unit(&d));
            let (m, _) = d.as_term().unwrap();
            assert_eq!(m.total_degree() % 2, 0, "{}", g.id);
        }
    }

    #[test]
    fn theta_rows() {
        let fmt = |id: &str| -> Vec<String> {
            let vs = spec(id).unwrap().var_spec().unwrap();
            theta(id).unwrap().iter().map(|(_, p)| vs.format(p)).collect()
        };
        assert_eq!(fmt("G4"), ["1", "0", "1", "0", "0", "c0", "c1", "c2"]);
        assert_eq!(fmt("G5"), ["1", "0", "b0", "b1", "b2", "c0", "c1", "c2"]);
        assert_eq!(fmt("G6"), ["a0", "a1", "1", "0", "0", "c0", "c1", "c2"]);
        assert!(matches!(theta("G7"), Err(CatalogError::NoSpecialization(_))));
    }

    #[test]
    fn record_invariants() {
        for g in all() {
            assert_eq!(g.coset_words.len() * g.parabolic_order() * g.center.order, g.order);
            if g.is_maximal() {
                assert!(g.theta.is_none());
            }
            if g.family == Family::Tetrahedral && !g.is_maximal() {
                assert!(g.theta.is_some());
            }
            let max = spec(&g.maximal).unwrap().order;
            assert_eq!(g.index * g.order, max, "{}", g.id);
            let vs = g.var_spec().unwrap();
            for (i, n) in vs.names().iter().enumerate() {
                assert_eq!(vs.is_invertible(i), n.ends_with('0'));
            }
        }
    }
}
