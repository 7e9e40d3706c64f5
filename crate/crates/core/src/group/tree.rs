use super::finite::FiniteGroup;
use super::word::Word;
use super::GroupError;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub from: usize,
    pub to: usize,
    /// A single letter: a generator, a redundant generator, or an inverse.
    pub label: Word,
}

/// Spanning tree on the coset words, rooted at vertex 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub vertices: Vec<Word>,
    pub edges: Vec<TreeEdge>,
}

impl SpanningTree {
    /// Parent edge of every vertex; `None` if the edges do not form a tree
    /// rooted at vertex 0.
    pub fn parents(&self) -> Option<Vec<Option<usize>>> {
        let n = self.vertices.len();
        if n == 0 || self.edges.len() + 1 != n {
            return None;
        }
        let mut parent = vec![None; n];
        for (k, e) in self.edges.iter().enumerate() {
            if e.from >= n || e.to >= n || e.to == 0 || parent[e.to].is_some() || e.label.len() != 1 {
                return None;
            }
            parent[e.to] = Some(k);
        }
        // every vertex must reach the root
        for v in 0..n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(k) = parent[cur] {
                cur = self.edges[k].from;
                steps += 1;
                if steps > n {
                    return None;
                }
            }
            if cur != 0 {
                return None;
            }
        }
        Some(parent)
    }

    /// Word spelled by the labels on the path from the root to `v`.
    pub fn path_word(&self, v: usize) -> Option<Word> {
        let parent = self.parents()?;
        let mut letters = Vec::new();
        let mut cur = v;
        while let Some(k) = parent[cur] {
            letters.push(self.edges[k].label.letters()[0]);
            cur = self.edges[k].from;
        }
        letters.reverse();
        Some(Word(letters))
    }

    /// Edges ordered so that each edge's source is the root or an earlier target.
    pub fn edges_in_bfs_order(&self) -> Vec<&TreeEdge> {
        let mut out = Vec::new();
        let mut frontier = vec![0usize];
        while let Some(v) = frontier.pop() {
            for e in self.edges.iter().filter(|e| e.from == v) {
                out.push(e);
                frontier.push(e.to);
            }
        }
        out
    }
}

/// True iff the tree is a rooted spanning tree whose vertices are exactly
/// `xs`, the root evaluates to the identity, and every edge satisfies
/// `to = from · label` in `g`. Letters outside the generators of `g` are
/// resolved through `extra`.
pub fn verify_tree(
    g: &FiniteGroup,
    tree: &SpanningTree,
    xs: &[Word],
    extra: &dyn Fn(char) -> Option<usize>,
) -> bool {
    if tree.vertices.as_slice() != xs || tree.parents().is_none() {
        return false;
    }
    let eval = |w: &Word| g.eval_with(w, extra).ok();
    let Some(vals) = xs.iter().map(eval).collect::<Option<Vec<_>>>() else {
        return false;
    };
    if vals[0] != 0 {
        return false;
    }
    tree.edges.iter().all(|e| match eval(&e.label) {
        Some(l) => g.mul(vals[e.from], l) == vals[e.to],
        None => false,
    })
}

/// True iff the products `y·v·x` (y ∈ zs, v ∈ ps, x ∈ xs) are pairwise
/// distinct; with `|zs|·|ps|·|xs| = |g|` they then exhaust the group.
pub fn verify_factorization(g: &FiniteGroup, zs: &[usize], ps: &[usize], xs: &[usize]) -> Result<bool, GroupError> {
    let total = zs.len() * ps.len() * xs.len();
    if total != g.order() {
        return Err(GroupError::SizeMismatch { expected: g.order(), got: total });
    }
    let mut seen = vec![false; g.order()];
    for &y in zs {
        for &v in ps {
            let yv = g.mul(y, v);
            for &x in xs {
                let e = g.mul(yv, x);
                if seen[e] {
                    return Ok(false);
                }
                seen[e] = true;
            }
        }
    }
    Ok(true)
}
