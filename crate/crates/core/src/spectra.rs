//! Spectra of subsets of finite abelian groups.
//!
//! `L` is a spectrum of `T` when `#L = #T` and every difference of two
//! distinct elements of `L` lies in the Fourier zero set
//! `Z(T) = { d != 0 : sum_{x in T} omega^<d, x> = 0 }`. Spectra are found by a
//! clique search in the Cayley graph `Cay(G, Z(T))`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec, MAX_EXHAUSTIVE_ORDER};

/// Default node budget for clique and exact-cover searches.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Largest set size accepted by [`find_spectrum`].
pub const MAX_SPECTRUM_SET: usize = 64;

const MAX_CLIQUE_CANDIDATES: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("the empty set is not a valid domain")]
    EmptySet,
    #[error("set of size {0} exceeds the search limit {MAX_SPECTRUM_SET}")]
    SetTooLarge(usize),
    #[error("{0} clique candidates exceed the adjacency limit")]
    TooManyCandidates(usize),
    #[error("search node budget of {budget} exhausted")]
    BudgetExceeded { budget: u64 },
}

/// Why a verification rejected a candidate spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SpectrumWitness {
    CardinalityMismatch {
        set_size: usize,
        spectrum_size: usize,
    },
    NonOrthogonal {
        xi: GroupElement,
        xi_prime: GroupElement,
    },
}

/// Outcome of [`is_spectrum`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "witness")]
pub enum SpectrumCheck {
    Valid,
    Invalid(SpectrumWitness),
}

impl SpectrumCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, SpectrumCheck::Valid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotSpectralReason {
    ExhaustedSearch,
}

/// Outcome of [`find_spectrum`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumSearch {
    Spectral(Vec<GroupElement>),
    NotSpectral(NotSpectralReason),
}

impl SpectrumSearch {
    pub fn spectrum(&self) -> Option<&[GroupElement]> {
        match self {
            SpectrumSearch::Spectral(l) => Some(l),
            SpectrumSearch::NotSpectral(_) => None,
        }
    }
}

fn check_domain(g: &GroupSpec, set: &[GroupElement]) -> Result<(), SpectrumError> {
    if set.is_empty() {
        return Err(SpectrumError::EmptySet);
    }
    g.validate_set(set)?;
    Ok(())
}

/// Nonzero frequencies whose character sum over `set` vanishes, in rank order.
pub fn fourier_zero_set(
    g: &GroupSpec,
    set: &[GroupElement],
) -> Result<Vec<GroupElement>, SpectrumError> {
    check_domain(g, set)?;
    g.ensure_exhaustive(MAX_EXHAUSTIVE_ORDER)?;
    Ok(g.elements()
        .skip(1)
        .filter(|d| g.character_sum_unchecked(set, d).is_zero())
        .collect())
}

/// Membership mask over ranks for `Z(T)`.
pub(crate) fn zero_set_mask(g: &GroupSpec, set: &[GroupElement]) -> Vec<bool> {
    let mut mask = vec![false; g.order() as usize];
    for (r, d) in g.elements().enumerate().skip(1) {
        mask[r] = g.character_sum_unchecked(set, &d).is_zero();
    }
    mask
}

/// Verifies that `spectrum` is a spectrum of `set`, reporting the first failing pair.
pub fn is_spectrum(
    g: &GroupSpec,
    set: &[GroupElement],
    spectrum: &[GroupElement],
) -> Result<SpectrumCheck, SpectrumError> {
    check_domain(g, set)?;
    check_domain(g, spectrum)?;
    if set.len() != spectrum.len() {
        return Ok(SpectrumCheck::Invalid(
            SpectrumWitness::CardinalityMismatch {
                set_size: set.len(),
                spectrum_size: spectrum.len(),
            },
        ));
    }
    for (i, xi) in spectrum.iter().enumerate() {
        for xi_prime in &spectrum[i + 1..] {
            let d = g.sub(xi, xi_prime);
            if d.is_zero() || !g.character_sum_unchecked(set, &d).is_zero() {
                return Ok(SpectrumCheck::Invalid(SpectrumWitness::NonOrthogonal {
                    xi: xi.clone(),
                    xi_prime: xi_prime.clone(),
                }));
            }
        }
    }
    Ok(SpectrumCheck::Valid)
}

#[derive(Clone)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn empty(n: usize) -> Self {
        Bitset(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Bitset::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn and(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&mut self, other: &Bitset) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + bit)
            })
        })
    }
}

/// Branch-and-bound search for a clique of a fixed size.
struct CliqueSearch<'a> {
    adjacency: &'a [Bitset],
    target: usize,
    budget: u64,
    nodes: u64,
}

impl CliqueSearch<'_> {
    /// Greedy colouring of `cand`, stopped once `cap` colours are used; the
    /// number of colours bounds any clique inside `cand`.
    fn colour_bound(&self, cand: &Bitset, cap: usize) -> usize {
        let mut rest = cand.clone();
        let mut colours = 0;
        while !rest.is_empty() && colours < cap {
            colours += 1;
            let mut avail = rest.clone();
            while let Some(v) = avail.first() {
                rest.remove(v);
                avail.remove(v);
                avail.and_not(&self.adjacency[v]);
            }
        }
        colours
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: Bitset) -> Result<bool, SpectrumError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SpectrumError::BudgetExceeded {
                budget: self.budget,
            });
        }
        if clique.len() == self.target {
            return Ok(true);
        }
        let need = self.target - clique.len();
        if cand.count() < need || self.colour_bound(&cand, need) < need {
            return Ok(false);
        }
        while let Some(v) = cand.first() {
            if cand.count() < need {
                break;
            }
            cand.remove(v);
            clique.push(v);
            if self.expand(clique, cand.and(&self.adjacency[v]))? {
                return Ok(true);
            }
            clique.pop();
        }
        Ok(false)
    }
}

/// Searches for a spectrum of `set` containing `0`.
///
/// Candidates are the elements of `Z(T)`, ordered by descending degree in the
/// induced Cayley graph with ties broken by rank. The search is exhaustive, so
/// `NotSpectral` is a proof that no spectrum exists.
pub fn find_spectrum(
    g: &GroupSpec,
    set: &[GroupElement],
    budget: u64,
) -> Result<SpectrumSearch, SpectrumError> {
    check_domain(g, set)?;
    g.ensure_exhaustive(MAX_EXHAUSTIVE_ORDER)?;
    let k = set.len();
    if k as u64 == g.order() {
        return Ok(SpectrumSearch::Spectral(g.elements().collect()));
    }
    if k > MAX_SPECTRUM_SET {
        return Err(SpectrumError::SetTooLarge(k));
    }
    if k == 1 {
        return Ok(SpectrumSearch::Spectral(vec![g.zero()]));
    }
    let mask = zero_set_mask(g, set);
    find_spectrum_in_mask(g, &mask, k, budget)
}

pub(crate) fn find_spectrum_in_mask(
    g: &GroupSpec,
    mask: &[bool],
    k: usize,
    budget: u64,
) -> Result<SpectrumSearch, SpectrumError> {
    let zeros: Vec<GroupElement> = mask
        .iter()
        .enumerate()
        .filter(|(_, &z)| z)
        .map(|(r, _)| g.unrank(r as u64))
        .collect();
    if zeros.len() + 1 < k {
        return Ok(SpectrumSearch::NotSpectral(
            NotSpectralReason::ExhaustedSearch,
        ));
    }
    if zeros.len() > MAX_CLIQUE_CANDIDATES {
        return Err(SpectrumError::TooManyCandidates(zeros.len()));
    }

    let n = zeros.len();
    let mut adj_by_rank = vec![Bitset::empty(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if mask[g.rank(&g.sub(&zeros[i], &zeros[j])) as usize] {
                adj_by_rank[i].insert(j);
                adj_by_rank[j].insert(i);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(adj_by_rank[i].count()), i));
    let mut adjacency = vec![Bitset::empty(n); n];
    let mut position = vec![0; n];
    for (pos, &i) in order.iter().enumerate() {
        position[i] = pos;
    }
    for (pos, &i) in order.iter().enumerate() {
        for j in adj_by_rank[i].iter() {
            adjacency[pos].insert(position[j]);
        }
    }

    let mut search = CliqueSearch {
        adjacency: &adjacency,
        target: k - 1,
        budget,
        nodes: 0,
    };
    let mut clique = Vec::with_capacity(k);
    if search.expand(&mut clique, Bitset::full(n))? {
        let mut spectrum: Vec<GroupElement> = std::iter::once(g.zero())
            .chain(clique.iter().map(|&p| zeros[order[p]].clone()))
            .collect();
        spectrum.sort();
        Ok(SpectrumSearch::Spectral(spectrum))
    } else {
        Ok(SpectrumSearch::NotSpectral(
            NotSpectralReason::ExhaustedSearch,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn els(g: &GroupSpec, xs: &[&[i64]]) -> Vec<GroupElement> {
        xs.iter().map(|x| g.element(x).unwrap()).collect()
    }

    #[test]
    fn zero_set_examples() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        let t = els(&z4, &[&[0], &[1]]);
        assert_eq!(fourier_zero_set(&z4, &t).unwrap(), els(&z4, &[&[2]]));

        let g = GroupSpec::new(vec![3, 4]).unwrap();
        let single = els(&g, &[&[2, 1]]);
        assert!(fourier_zero_set(&g, &single).unwrap().is_empty());

        let t = els(&z4, &[&[0], &[1], &[2]]);
        assert!(fourier_zero_set(&z4, &t).unwrap().is_empty());
    }

    #[test]
    fn empty_set_is_rejected() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        assert_eq!(fourier_zero_set(&z4, &[]), Err(SpectrumError::EmptySet));
        assert_eq!(
            find_spectrum(&z4, &[], DEFAULT_NODE_BUDGET),
            Err(SpectrumError::EmptySet)
        );
    }

    #[test]
    fn is_spectrum_examples() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        let t = els(&z4, &[&[0], &[1], &[2]]);
        for l in [
            els(&z4, &[&[0], &[1], &[2]]),
            els(&z4, &[&[0], &[1], &[3]]),
            els(&z4, &[&[1], &[2], &[3]]),
        ] {
            assert!(!is_spectrum(&z4, &t, &l).unwrap().is_valid());
        }
        let g = GroupSpec::new(vec![2, 3]).unwrap();
        let all: Vec<_> = g.elements().collect();
        assert_eq!(is_spectrum(&g, &all, &all).unwrap(), SpectrumCheck::Valid);

        let t = els(&z4, &[&[0], &[1]]);
        assert_eq!(
            is_spectrum(&z4, &t, &els(&z4, &[&[0]])).unwrap(),
            SpectrumCheck::Invalid(SpectrumWitness::CardinalityMismatch {
                set_size: 2,
                spectrum_size: 1
            })
        );
        // Repeated frequency is never orthogonal to itself.
        assert!(matches!(
            is_spectrum(&z4, &t, &els(&z4, &[&[2], &[2]])).unwrap(),
            SpectrumCheck::Invalid(SpectrumWitness::NonOrthogonal { .. })
        ));
    }

    #[test]
    fn find_spectrum_examples() {
        let z4 = GroupSpec::cyclic(4).unwrap();
        assert_eq!(
            find_spectrum(&z4, &els(&z4, &[&[0], &[1]]), DEFAULT_NODE_BUDGET).unwrap(),
            SpectrumSearch::Spectral(els(&z4, &[&[0], &[2]]))
        );
        assert_eq!(
            find_spectrum(&z4, &els(&z4, &[&[0], &[1], &[2]]), DEFAULT_NODE_BUDGET).unwrap(),
            SpectrumSearch::NotSpectral(NotSpectralReason::ExhaustedSearch)
        );
        let all: Vec<_> = z4.elements().collect();
        assert_eq!(
            find_spectrum(&z4, &all, DEFAULT_NODE_BUDGET).unwrap(),
            SpectrumSearch::Spectral(all.clone())
        );
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        // Z({0,1}) = {4} in Z8, so the search must expand at least one node.
        let z8 = GroupSpec::cyclic(8).unwrap();
        let t = els(&z8, &[&[0], &[1]]);
        assert_eq!(
            find_spectrum(&z8, &t, 0),
            Err(SpectrumError::BudgetExceeded { budget: 0 })
        );
    }
}
