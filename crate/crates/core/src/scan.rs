//! Exhaustive comparison of spectrality and tiling over small groups.
//!
//! Subsets are enumerated up to translation: each class is represented by the
//! translate containing `0` whose sorted rank vector is lexicographically
//! smallest. Every class is classified by the clique search (spectral?) and
//! the exact-cover search (tiles?), and the two one-way failures are counted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::spectra::{find_spectrum, SpectrumError, SpectrumSearch};
use crate::tiling::{find_tiling, TilingError, TilingResult};

/// Largest group order accepted by [`fuglede_scan`].
pub const MAX_SCAN_ORDER: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("size filter {size} is outside 1..={order}")]
    InvalidSize { size: usize, order: u64 },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Tiling(#[from] TilingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Only subsets of this size.
    pub size: Option<usize>,
    /// Upper bound on enumerated subsets containing `0`.
    pub max_subsets: u64,
    /// Node budget handed to each clique and exact-cover search.
    pub node_budget: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            size: None,
            max_subsets: 10_000_000,
            node_budget: crate::spectra::DEFAULT_NODE_BUDGET,
        }
    }
}

/// One subset class and its two verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub set: Vec<GroupElement>,
    pub spectral: bool,
    pub tiles: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub spectrum: Option<Vec<GroupElement>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub complement: Option<Vec<GroupElement>>,
}

impl ScanRecord {
    pub fn spectral_non_tile(&self) -> bool {
        self.spectral && !self.tiles
    }

    pub fn tile_non_spectral(&self) -> bool {
        self.tiles && !self.spectral
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub group: GroupSpec,
    pub classes: u64,
    pub spectral_non_tiles: u64,
    pub tiles_non_spectral: u64,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stopped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanReport {
    pub records: Vec<ScanRecord>,
    pub summary: ScanSummary,
}

impl ScanReport {
    pub fn spectral_non_tiles(&self) -> impl Iterator<Item = &ScanRecord> {
        self.records.iter().filter(|r| r.spectral_non_tile())
    }

    pub fn tiles_non_spectral(&self) -> impl Iterator<Item = &ScanRecord> {
        self.records.iter().filter(|r| r.tile_non_spectral())
    }
}

/// Runs both decision procedures on one set.
pub fn classify(g: &GroupSpec, set: &[GroupElement], budget: u64) -> Result<ScanRecord, ScanError> {
    let spectral = find_spectrum(g, set, budget)?;
    let tiling = find_tiling(g, set, budget)?;
    Ok(ScanRecord {
        set: set.to_vec(),
        spectral: matches!(spectral, SpectrumSearch::Spectral(_)),
        tiles: tiling.tiles(),
        spectrum: match spectral {
            SpectrumSearch::Spectral(l) => Some(l),
            SpectrumSearch::NotSpectral(_) => None,
        },
        complement: match tiling {
            TilingResult::Tiles(s) => Some(s),
            TilingResult::NotTiles(_) => None,
        },
    })
}

/// Class representative: the translate `T - t`, `t in T`, with the
/// lexicographically smallest sorted rank vector.
pub fn canonical_translate(g: &GroupSpec, set: &[GroupElement]) -> Vec<GroupElement> {
    let ranks_of = |t: &GroupElement| {
        let mut r: Vec<u64> = set.iter().map(|x| g.rank(&g.sub(x, t))).collect();
        r.sort_unstable();
        r
    };
    let best = set.iter().map(ranks_of).min().unwrap_or_default();
    best.into_iter().map(|r| g.unrank(r)).collect()
}

fn is_canonical(g: &GroupSpec, ranks: &[u64]) -> bool {
    let elems: Vec<GroupElement> = ranks.iter().map(|&r| g.unrank(r)).collect();
    elems.iter().skip(1).all(|t| {
        let mut shifted: Vec<u64> = elems.iter().map(|x| g.rank(&g.sub(x, t))).collect();
        shifted.sort_unstable();
        shifted.as_slice() >= ranks
    })
}

/// Lexicographic `k`-combinations of `1..n`.
struct Combinations {
    n: u64,
    idx: Vec<u64>,
    done: bool,
}

impl Combinations {
    fn new(n: u64, k: usize) -> Self {
        Combinations {
            n,
            idx: (1..=k as u64).collect(),
            done: k as u64 >= n && k > 0,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - (k - i) as u64 {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

fn summary_of(g: &GroupSpec) -> ScanSummary {
    ScanSummary {
        group: g.clone(),
        classes: 0,
        spectral_non_tiles: 0,
        tiles_non_spectral: 0,
        complete: true,
        stopped: None,
    }
}

fn record_into(summary: &mut ScanSummary, rec: &ScanRecord) {
    summary.classes += 1;
    summary.spectral_non_tiles += u64::from(rec.spectral_non_tile());
    summary.tiles_non_spectral += u64::from(rec.tile_non_spectral());
}

fn budget_stop(summary: &mut ScanSummary, err: ScanError) -> Result<(), ScanError> {
    match err {
        ScanError::Spectrum(SpectrumError::BudgetExceeded { .. })
        | ScanError::Tiling(TilingError::BudgetExceeded { .. }) => {
            summary.complete = false;
            summary.stopped = Some(err.to_string());
            Ok(())
        }
        other => Err(other),
    }
}

/// Streams one record per class to `sink`. Exhausting a budget ends the scan
/// early with `complete = false`; the records already emitted stay valid.
pub fn fuglede_scan_with<F>(
    g: &GroupSpec,
    opts: &ScanOptions,
    mut sink: F,
) -> Result<ScanSummary, ScanError>
where
    F: FnMut(&ScanRecord),
{
    g.ensure_exhaustive(MAX_SCAN_ORDER)?;
    let order = g.order();
    let sizes: Vec<usize> = match opts.size {
        Some(k) if k == 0 || k as u64 > order => {
            return Err(ScanError::InvalidSize { size: k, order });
        }
        Some(k) => vec![k],
        None => (1..=order as usize).collect(),
    };
    let mut summary = summary_of(g);
    let mut enumerated = 0u64;
    for k in sizes {
        for rest in Combinations::new(order, k - 1) {
            enumerated += 1;
            if enumerated > opts.max_subsets {
                summary.complete = false;
                summary.stopped = Some(format!(
                    "subset enumeration budget of {} exhausted",
                    opts.max_subsets
                ));
                return Ok(summary);
            }
            let mut ranks = Vec::with_capacity(k);
            ranks.push(0);
            ranks.extend(rest);
            if !is_canonical(g, &ranks) {
                continue;
            }
            let set: Vec<GroupElement> = ranks.iter().map(|&r| g.unrank(r)).collect();
            match classify(g, &set, opts.node_budget) {
                Ok(rec) => {
                    record_into(&mut summary, &rec);
                    sink(&rec);
                }
                Err(e) => {
                    budget_stop(&mut summary, e)?;
                    return Ok(summary);
                }
            }
        }
    }
    Ok(summary)
}

pub fn fuglede_scan(g: &GroupSpec, opts: &ScanOptions) -> Result<ScanReport, ScanError> {
    let mut records = Vec::new();
    let summary = fuglede_scan_with(g, opts, |r| records.push(r.clone()))?;
    Ok(ScanReport { records, summary })
}

/// Classifies the classes of the given sets only (each replaced by its canonical translate).
pub fn scan_sets<F>(
    g: &GroupSpec,
    sets: &[Vec<GroupElement>],
    opts: &ScanOptions,
    mut sink: F,
) -> Result<ScanSummary, ScanError>
where
    F: FnMut(&ScanRecord),
{
    let mut summary = summary_of(g);
    for set in sets {
        g.validate_set(set)?;
        let canon = canonical_translate(g, set);
        match classify(g, &canon, opts.node_budget) {
            Ok(rec) => {
                record_into(&mut summary, &rec);
                sink(&rec);
            }
            Err(e) => {
                budget_stop(&mut summary, e)?;
                return Ok(summary);
            }
        }
    }
    Ok(summary)
}
