//! Translational tiling of finite abelian groups.
//!
//! `T` tiles `G` when a complement `Sigma` makes `{ s + T : s in Sigma }` a
//! partition of `G`. The decision procedure is a divisibility pre-check
//! followed by an exact-cover search over translates of `T`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec};

/// Largest group order accepted by the exact-cover search.
pub const MAX_TILING_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TilingError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("the empty set is not a valid tile")]
    EmptySet,
    #[error("exact-cover node budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
}

/// `#T` does not divide `#G`, so no tiling exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityObstruction {
    pub set_size: u64,
    pub group_order: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonTilingCertificate {
    DivisibilityObstruction(DivisibilityObstruction),
    ExhaustedCover,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TilingResult {
    Tiles(Vec<GroupElement>),
    NotTiles(NonTilingCertificate),
}

impl TilingResult {
    pub fn complement(&self) -> Option<&[GroupElement]> {
        match self {
            TilingResult::Tiles(s) => Some(s),
            TilingResult::NotTiles(_) => None,
        }
    }

    pub fn tiles(&self) -> bool {
        matches!(self, TilingResult::Tiles(_))
    }
}

/// First element whose coverage count differs from one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDefect {
    pub element: GroupElement,
    pub multiplicity: usize,
}

pub fn divisibility_check(set_size: usize, g: &GroupSpec) -> Option<DivisibilityObstruction> {
    let set_size = set_size as u64;
    (set_size == 0 || !g.order().is_multiple_of(set_size)).then_some(DivisibilityObstruction {
        set_size,
        group_order: g.order(),
    })
}

/// Returns the first element (in rank order) not covered exactly once by
/// `{ s + T : s in sigma }`, or `None` when the family is a tiling.
pub fn tiling_defect(
    g: &GroupSpec,
    set: &[GroupElement],
    sigma: &[GroupElement],
) -> Result<Option<CoverDefect>, GroupError> {
    g.validate_set(set)?;
    g.validate_set(sigma)?;
    g.ensure_exhaustive(crate::group::MAX_EXHAUSTIVE_ORDER)?;
    let mut counts = vec![0usize; g.order() as usize];
    for s in sigma {
        for x in set {
            counts[g.rank(&g.add(s, x)) as usize] += 1;
        }
    }
    Ok(counts.iter().position(|&c| c != 1).map(|r| CoverDefect {
        element: g.unrank(r as u64),
        multiplicity: counts[r],
    }))
}

pub fn verify_tiling(
    g: &GroupSpec,
    set: &[GroupElement],
    sigma: &[GroupElement],
) -> Result<bool, GroupError> {
    Ok(tiling_defect(g, set, sigma)?.is_none())
}

/// Divisibility pre-check, then exact cover.
pub fn find_tiling(
    g: &GroupSpec,
    set: &[GroupElement],
    budget: u64,
) -> Result<TilingResult, TilingError> {
    if set.is_empty() {
        return Err(TilingError::EmptySet);
    }
    g.validate_set(set)?;
    if let Some(obstruction) = divisibility_check(set.len(), g) {
        return Ok(TilingResult::NotTiles(
            NonTilingCertificate::DivisibilityObstruction(obstruction),
        ));
    }
    search_tiling_complement(g, set, budget)
}

/// Exact-cover search for a complement containing `0`, without the
/// divisibility shortcut.
pub fn search_tiling_complement(
    g: &GroupSpec,
    set: &[GroupElement],
    budget: u64,
) -> Result<TilingResult, TilingError> {
    if set.is_empty() {
        return Err(TilingError::EmptySet);
    }
    g.validate_set(set)?;
    g.ensure_exhaustive(MAX_TILING_ORDER)?;
    let order = g.order() as usize;
    let mut base: Vec<usize> = set.iter().map(|x| g.rank(x) as usize).collect();
    base.sort_unstable();
    base.dedup();
    if base.len() != set.len() {
        // Repeated elements cannot be covered exactly once.
        return Ok(TilingResult::NotTiles(NonTilingCertificate::ExhaustedCover));
    }
    if base.len() == order {
        return Ok(TilingResult::Tiles(vec![g.zero()]));
    }

    // Distinct translates in rank order of the shift.
    let mut seen = HashSet::new();
    let mut shifts = Vec::new();
    let mut rows = Vec::new();
    for t in g.elements() {
        let mut cols: Vec<usize> = set.iter().map(|x| g.rank(&g.add(x, &t)) as usize).collect();
        cols.sort_unstable();
        if seen.insert(cols.clone()) {
            shifts.push(t);
            rows.push(cols);
        }
    }

    let mut dlx = Dlx::new(order, &rows);
    // Shift 0 is row 0; fixing it removes the translation symmetry.
    dlx.select_row(0);
    match dlx.search(budget)? {
        Some(mut chosen) => {
            chosen.push(0);
            let mut sigma: Vec<GroupElement> = chosen.iter().map(|&r| shifts[r].clone()).collect();
            sigma.sort();
            Ok(TilingResult::Tiles(sigma))
        }
        None => Ok(TilingResult::NotTiles(NonTilingCertificate::ExhaustedCover)),
    }
}

/// Dancing-links exact cover over columns `0..n`.
///
/// Node `n` is the root; nodes `0..n` are column headers; row nodes follow.
struct Dlx {
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    row_head: Vec<usize>,
}

impl Dlx {
    fn new(ncols: usize, rows: &[Vec<usize>]) -> Self {
        let root = ncols;
        let total = ncols + 1 + rows.iter().map(Vec::len).sum::<usize>();
        let mut d = Dlx {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col: Vec::with_capacity(total),
            row: Vec::with_capacity(total),
            size: vec![0; ncols],
            row_head: Vec::with_capacity(rows.len()),
        };
        for i in 0..=ncols {
            d.left.push(if i == 0 { root } else { i - 1 });
            d.right.push(if i == root { 0 } else { i + 1 });
            d.up.push(i);
            d.down.push(i);
            d.col.push(i);
            d.row.push(usize::MAX);
        }
        for (r, cols) in rows.iter().enumerate() {
            let first = d.col.len();
            d.row_head.push(first);
            for (k, &c) in cols.iter().enumerate() {
                let node = d.col.len();
                d.left.push(if k == 0 {
                    node + cols.len() - 1
                } else {
                    node - 1
                });
                d.right
                    .push(if k + 1 == cols.len() { first } else { node + 1 });
                let last = d.up[c];
                d.up.push(last);
                d.down.push(c);
                d.down[last] = node;
                d.up[c] = node;
                d.col.push(c);
                d.row.push(r);
                d.size[c] += 1;
            }
        }
        d
    }

    fn root(&self) -> usize {
        self.size.len()
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, dn) = (self.up[j], self.down[j]);
                self.down[u] = dn;
                self.up[dn] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                let (u, dn) = (self.up[j], self.down[j]);
                self.size[self.col[j]] += 1;
                self.down[u] = j;
                self.up[dn] = j;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Commits a row before the search starts.
    fn select_row(&mut self, r: usize) {
        let head = self.row_head[r];
        self.cover(self.col[head]);
        let mut j = self.right[head];
        while j != head {
            self.cover(self.col[j]);
            j = self.right[j];
        }
    }

    /// Minimum remaining candidates; ties go to the smallest column.
    fn choose_column(&self) -> Option<usize> {
        let root = self.root();
        let mut best: Option<usize> = None;
        let mut c = self.right[root];
        while c != root {
            if best.is_none_or(|b| self.size[c] < self.size[b]) {
                best = Some(c);
                if self.size[c] == 0 {
                    break;
                }
            }
            c = self.right[c];
        }
        best
    }

    fn cover_row_rest(&mut self, node: usize) {
        let mut j = self.right[node];
        while j != node {
            self.cover(self.col[j]);
            j = self.right[j];
        }
    }

    fn uncover_row_rest(&mut self, node: usize) {
        let mut j = self.left[node];
        while j != node {
            self.uncover(self.col[j]);
            j = self.left[j];
        }
    }

    /// Iterative Algorithm X; returns the chosen row ids of the first cover.
    fn search(&mut self, budget: u64) -> Result<Option<Vec<usize>>, TilingError> {
        let root = self.root();
        let mut stack: Vec<usize> = Vec::new();
        let mut nodes: u64 = 0;
        loop {
            if self.right[root] == root {
                return Ok(Some(stack.iter().map(|&n| self.row[n]).collect()));
            }
            let mut c = self.choose_column().expect("columns remain");
            self.cover(c);
            let mut r = self.down[c];
            loop {
                if r != c {
                    nodes += 1;
                    if nodes > budget {
                        return Err(TilingError::BudgetExceeded { budget });
                    }
                    stack.push(r);
                    self.cover_row_rest(r);
                    break;
                }
                // Column exhausted: backtrack to the next row of the parent column.
                self.uncover(c);
                let Some(prev) = stack.pop() else {
                    return Ok(None);
                };
                self.uncover_row_rest(prev);
                c = self.col[prev];
                r = self.down[prev];
            }
        }
    }
}
