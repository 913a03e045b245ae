//! Lifting a finite-group spectral set to the integer lattice.
//!
//! Given `base` in `{0,1,2}^n` (a subset of `Z_3^n` with coordinates copied
//! verbatim, never reduced) and a scale `M`, the lifted set is
//! `Omega = union_{k in [0,M)^n} (3k + base)` with candidate spectrum
//! `Lambda = { (l + M xi) / 3M : l in [0,M)^n, xi in base spectrum }` mod 1.
//! Orthogonality of every pair is checked exactly with cyclotomic integers of
//! order `3M`; window counts quantify the local density of `Omega`.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CyclotomicInt, MAX_CYCLOTOMIC_ORDER};
use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::tiling::DivisibilityObstruction;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("point has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("duplicate lattice point {0:?}")]
    DuplicatePoint(Vec<i64>),
    #[error("base coordinate {0} is outside {{0,1,2}}")]
    BaseOutOfCell(u32),
    #[error("frequencies use mixed denominators {0} and {1}")]
    MixedDenominators(u64, u64),
    #[error("denominator {0} exceeds the supported cyclotomic order {MAX_CYCLOTOMIC_ORDER}")]
    DenominatorTooLarge(u64),
    #[error("invalid lattice configuration: {0}")]
    InvalidConfig(String),
    #[error("point {0:?} lies outside the box [0, 3M)^n")]
    OutsideBox(Vec<i64>),
    #[error("arithmetic overflow")]
    Overflow,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Scales for the lift: `m` truncation, `l` window side, `n` region (unused by
/// any computation; kept for the `L << M << N` bookkeeping).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub dimension: usize,
    pub m: u64,
    pub l: u64,
    pub n: u64,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            dimension: 5,
            m: 2,
            l: 8,
            n: 0,
        }
    }
}

impl LatticeConfig {
    pub fn new(dimension: usize, m: u64) -> Self {
        LatticeConfig {
            dimension,
            m,
            ..LatticeConfig::default()
        }
    }

    pub fn with_window(mut self, l: u64) -> Self {
        self.l = l;
        self
    }

    fn validate(&self) -> Result<(), LatticeError> {
        if self.dimension == 0 {
            return Err(LatticeError::InvalidConfig(
                "dimension must be positive".into(),
            ));
        }
        if self.m == 0 {
            return Err(LatticeError::InvalidConfig("M must be positive".into()));
        }
        Ok(())
    }

    /// Window scans need `L >= 3` and a window that fits in `[0, 3M)^n`.
    pub fn validate_density(&self) -> Result<(), LatticeError> {
        self.validate()?;
        if self.l < 3 {
            return Err(LatticeError::InvalidConfig(format!("L = {} < 3", self.l)));
        }
        if self.l > 3 * self.m {
            return Err(LatticeError::InvalidConfig(format!(
                "L = {} exceeds 3M = {}",
                self.l,
                3 * self.m
            )));
        }
        Ok(())
    }
}

/// Finite set of distinct integer vectors, kept in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct LatticeSet {
    points: Vec<Vec<i64>>,
}

impl TryFrom<Vec<Vec<i64>>> for LatticeSet {
    type Error = LatticeError;

    fn try_from(points: Vec<Vec<i64>>) -> Result<Self, Self::Error> {
        LatticeSet::new(points)
    }
}

impl From<LatticeSet> for Vec<Vec<i64>> {
    fn from(s: LatticeSet) -> Self {
        s.points
    }
}

impl LatticeSet {
    pub fn new(mut points: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        if let Some(first) = points.first() {
            let dim = first.len();
            if let Some(p) = points.iter().find(|p| p.len() != dim) {
                return Err(LatticeError::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        points.sort();
        if let Some(w) = points.windows(2).find(|w| w[0] == w[1]) {
            return Err(LatticeError::DuplicatePoint(w[0].clone()));
        }
        Ok(LatticeSet { points })
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// Copy with one point removed; used to build broken fixtures.
    pub fn without(&self, point: &[i64]) -> LatticeSet {
        LatticeSet {
            points: self
                .points
                .iter()
                .filter(|p| *p != point)
                .cloned()
                .collect(),
        }
    }
}

/// `k`-th power of a small base, with overflow reported.
fn checked_pow(base: u64, exp: usize) -> Result<u64, LatticeError> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .ok_or(LatticeError::Overflow)
}

/// All points of `[0, m)^dim` in lexicographic order.
fn grid(m: u64, dim: usize) -> impl Iterator<Item = Vec<i64>> {
    let total = if dim == 0 { 0 } else { m.pow(dim as u32) };
    (0..total).map(move |mut r| {
        let mut p = vec![0i64; dim];
        for slot in p.iter_mut().rev() {
            *slot = (r % m) as i64;
            r /= m;
        }
        p
    })
}

/// The lift of a base set at scale `M`, remembering how it was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedSet {
    base: Vec<Vec<i64>>,
    config: LatticeConfig,
    points: LatticeSet,
}

impl LiftedSet {
    pub fn base(&self) -> &[Vec<i64>] {
        &self.base
    }

    pub fn config(&self) -> &LatticeConfig {
        &self.config
    }

    pub fn points(&self) -> &LatticeSet {
        &self.points
    }

    pub fn into_points(self) -> LatticeSet {
        self.points
    }

    /// `#((x0 + [0,L)^n) cap Omega)` evaluated coordinatewise from the cell structure.
    pub fn window_count_factorized(&self, x0: &[i64], l: u64) -> u64 {
        let m = self.config.m as i64;
        let l = l as i64;
        self.base
            .iter()
            .map(|b| {
                b.iter()
                    .zip(x0)
                    .map(|(&bj, &wj)| {
                        // k in [0, M) with wj <= 3k + bj <= wj + l - 1
                        let lo = (wj - bj).div_euclid(3) + i64::from((wj - bj).rem_euclid(3) != 0);
                        let hi = (wj + l - 1 - bj).div_euclid(3);
                        (hi.min(m - 1) - lo.max(0) + 1).max(0) as u64
                    })
                    .product::<u64>()
            })
            .sum()
    }
}

fn lift_coords(x: &GroupElement) -> Result<Vec<i64>, LatticeError> {
    x.0.iter()
        .map(|&c| {
            if c < 3 {
                Ok(i64::from(c))
            } else {
                Err(LatticeError::BaseOutOfCell(c))
            }
        })
        .collect()
}

/// `union_{k in [0,M)^n} (3k + base)`.
pub fn build_omega1(base: &[GroupElement], cfg: &LatticeConfig) -> Result<LiftedSet, LatticeError> {
    cfg.validate()?;
    let base: Vec<Vec<i64>> = base.iter().map(lift_coords).collect::<Result<_, _>>()?;
    if let Some(b) = base.iter().find(|b| b.len() != cfg.dimension) {
        return Err(LatticeError::DimensionMismatch {
            expected: cfg.dimension,
            found: b.len(),
        });
    }
    let mut points = Vec::with_capacity(base.len() * checked_pow(cfg.m, cfg.dimension)? as usize);
    for k in grid(cfg.m, cfg.dimension) {
        for b in &base {
            points.push(k.iter().zip(b).map(|(&kj, &bj)| 3 * kj + bj).collect());
        }
    }
    Ok(LiftedSet {
        base,
        config: *cfg,
        points: LatticeSet::new(points)?,
    })
}

/// A rational vector `numerators / denominator` taken modulo 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FrequencyVector {
    pub numerators: Vec<i64>,
    pub denominator: u64,
}

/// Frequencies sharing one denominator; JSON `{"denominator": D, "numerators": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencySet {
    pub denominator: u64,
    pub numerators: Vec<Vec<i64>>,
}

impl FrequencySet {
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn get(&self, i: usize) -> FrequencyVector {
        FrequencyVector {
            numerators: self.numerators[i].clone(),
            denominator: self.denominator,
        }
    }

    /// Builds a set from individual vectors, all of which must share a denominator.
    pub fn from_vectors(vectors: &[FrequencyVector]) -> Result<Self, LatticeError> {
        let denominator = vectors.first().map_or(1, |v| v.denominator);
        if let Some(v) = vectors.iter().find(|v| v.denominator != denominator) {
            return Err(LatticeError::MixedDenominators(denominator, v.denominator));
        }
        Ok(FrequencySet {
            denominator,
            numerators: vectors.iter().map(|v| v.numerators.clone()).collect(),
        })
    }
}

/// `{ (l + M xi) / 3M mod 1 : l in [0,M)^n, xi in spectrum }`, sorted lexicographically.
pub fn build_lambda1(
    spectrum: &[GroupElement],
    cfg: &LatticeConfig,
) -> Result<FrequencySet, LatticeError> {
    cfg.validate()?;
    let spectrum: Vec<Vec<i64>> = spectrum.iter().map(lift_coords).collect::<Result<_, _>>()?;
    if let Some(s) = spectrum.iter().find(|s| s.len() != cfg.dimension) {
        return Err(LatticeError::DimensionMismatch {
            expected: cfg.dimension,
            found: s.len(),
        });
    }
    let m = cfg.m as i64;
    let denominator = 3 * cfg.m;
    let mut numerators: Vec<Vec<i64>> = grid(cfg.m, cfg.dimension)
        .flat_map(|l| {
            spectrum
                .iter()
                .map(|xi| {
                    l.iter()
                        .zip(xi)
                        .map(|(&lj, &xj)| (lj + m * xj).rem_euclid(3 * m))
                        .collect()
                })
                .collect::<Vec<Vec<i64>>>()
        })
        .collect();
    numerators.sort();
    numerators.dedup();
    Ok(FrequencySet {
        denominator,
        numerators,
    })
}

/// Result of a pairwise orthogonality pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum OrthoCheck {
    Valid {
        pairs: u64,
    },
    Invalid {
        xi: Vec<i64>,
        xi_prime: Vec<i64>,
        denominator: u64,
    },
}

impl OrthoCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, OrthoCheck::Valid { .. })
    }
}

fn check_denominator(d: u64) -> Result<u32, LatticeError> {
    if d == 0 || d > MAX_CYCLOTOMIC_ORDER as u64 {
        Err(LatticeError::DenominatorTooLarge(d))
    } else {
        Ok(d as u32)
    }
}

/// `sum_{x in omega} exp(2 pi i (delta / D) . x)` as a cyclotomic integer of order `D`.
pub fn lattice_character_sum(
    omega: &LatticeSet,
    delta: &[i64],
    denominator: u64,
) -> Result<CyclotomicInt, LatticeError> {
    let d = check_denominator(denominator)?;
    if delta.len() != omega.dimension() && !omega.is_empty() {
        return Err(LatticeError::DimensionMismatch {
            expected: omega.dimension(),
            found: delta.len(),
        });
    }
    let dd = denominator as i64;
    let mut sum = CyclotomicInt::zero(d);
    for x in omega.points() {
        let e = x.iter().zip(delta).fold(0i64, |acc, (&xj, &dj)| {
            (acc + xj.rem_euclid(dd) * dj.rem_euclid(dd)) % dd
        });
        sum.add_root_power(e as u32, 1);
    }
    Ok(sum)
}

/// Direct evaluation of one pair: exact cyclotomic zero test of the full sum over `omega`.
pub fn pair_vanishes_direct(
    omega: &LatticeSet,
    a: &[i64],
    b: &[i64],
    denominator: u64,
) -> Result<bool, LatticeError> {
    let delta: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    Ok(lattice_character_sum(omega, &delta, denominator)?.is_zero())
}

/// Factorized evaluation of one pair using the cell structure of a lift.
///
/// With `delta = a - b` over denominator `3M`, the sum splits as
/// `prod_j (sum_{k<M} omega_M^{delta_j k}) * sum_{x in base} omega_{3M}^{delta . x}`.
/// A geometric factor vanishes exactly when `delta_j` is not a multiple of `M`;
/// otherwise `delta = M d` and the remaining sum is a character sum over the
/// base in `Z_3^n`.
pub fn pair_vanishes_factorized(lift: &LiftedSet, a: &[i64], b: &[i64]) -> bool {
    let m = lift.config.m as i64;
    let three_m = 3 * m;
    let delta: Vec<i64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).rem_euclid(three_m))
        .collect();
    if delta.iter().any(|d| d % m != 0) {
        return true;
    }
    let mut sum = CyclotomicInt::zero(3);
    for x in &lift.base {
        let e = x
            .iter()
            .zip(&delta)
            .fold(0i64, |acc, (&xj, &dj)| (acc + xj * (dj / m)) % 3);
        sum.add_root_power(e as u32, 1);
    }
    sum.is_zero()
}

fn first_failing_pair<F>(freqs: &FrequencySet, mut vanishes: F) -> Result<OrthoCheck, LatticeError>
where
    F: FnMut(&[i64], &[i64]) -> Result<bool, LatticeError>,
{
    let nums = &freqs.numerators;
    let mut pairs = 0u64;
    for i in 0..nums.len() {
        for j in i + 1..nums.len() {
            pairs += 1;
            if !vanishes(&nums[i], &nums[j])? {
                return Ok(OrthoCheck::Invalid {
                    xi: nums[i].clone(),
                    xi_prime: nums[j].clone(),
                    denominator: freqs.denominator,
                });
            }
        }
    }
    Ok(OrthoCheck::Valid { pairs })
}

/// Exact orthogonality of every unordered pair of `lambda` over `omega`.
pub fn verify_ortho_lattice(
    omega: &LatticeSet,
    lambda: &FrequencySet,
) -> Result<OrthoCheck, LatticeError> {
    check_denominator(lambda.denominator)?;
    if let Some(v) = lambda
        .numerators
        .iter()
        .find(|v| v.len() != omega.dimension())
    {
        return Err(LatticeError::DimensionMismatch {
            expected: omega.dimension(),
            found: v.len(),
        });
    }
    first_failing_pair(lambda, |a, b| {
        pair_vanishes_direct(omega, a, b, lambda.denominator)
    })
}

/// Same verdicts as [`verify_ortho_lattice`] through the factorized evaluation.
pub fn verify_ortho_factorized(
    lift: &LiftedSet,
    lambda: &FrequencySet,
) -> Result<OrthoCheck, LatticeError> {
    if lambda.denominator != 3 * lift.config.m {
        return Err(LatticeError::MixedDenominators(
            3 * lift.config.m,
            lambda.denominator,
        ));
    }
    first_failing_pair(lambda, |a, b| Ok(pair_vanishes_factorized(lift, a, b)))
}

/// Every aligned cell `3k + {0,1,2}^n`, `k in [0,M)^n`, holds exactly `per_cell`
/// points, and no point lies outside `[0, 3M)^n`.
pub fn cell_count_check(omega: &LatticeSet, cfg: &LatticeConfig, per_cell: usize) -> bool {
    let side = 3 * cfg.m as i64;
    let mut counts: HashMap<Vec<i64>, usize> = HashMap::new();
    for p in omega.points() {
        if p.len() != cfg.dimension || p.iter().any(|&c| c < 0 || c >= side) {
            return false;
        }
        *counts.entry(p.iter().map(|c| c / 3).collect()).or_default() += 1;
    }
    let cells = match checked_pow(cfg.m, cfg.dimension) {
        Ok(c) => c,
        Err(_) => return false,
    };
    counts.len() as u64 == cells && counts.values().all(|&c| c == per_cell)
}

/// `f(t) = #((t + omega) cap (x0 + [0,L)^n))`, by direct enumeration.
pub fn window_count(omega: &LatticeSet, t: &[i64], x0: &[i64], l: u64) -> u64 {
    let l = l as i64;
    omega
        .points()
        .iter()
        .filter(|p| {
            p.iter()
                .zip(t)
                .zip(x0)
                .all(|((&pj, &tj), &xj)| (xj..xj + l).contains(&(pj + tj)))
        })
        .count() as u64
}

/// Which window positions a density scan visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowScan {
    /// Every position in the bulk whose coordinates are multiples of `stride`.
    Exhaustive { stride: u64 },
    /// `trials` uniform bulk positions from a seeded generator.
    Sampled { trials: u64, seed: u64 },
}

/// Nonnegative rational `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub window: u64,
    pub windows: u64,
    pub min_count: u64,
    pub max_count: u64,
    /// `#base / 3^n`.
    pub expected_density: Ratio,
    pub tolerance: Ratio,
    pub within_tolerance: bool,
    /// Windows violating the tolerance.
    pub violations: u64,
    pub min_density: f64,
    pub max_density: f64,
    pub max_deviation: f64,
}

/// Scans windows `x0 + [0,L)^n` contained in `[0, 3M)^n` (where the lift agrees
/// with its periodic extension) and compares each count with the expected
/// density `#base / 3^n`. `tolerance` defaults to `12 / L`.
pub fn density_check(
    lift: &LiftedSet,
    l: u64,
    scan: WindowScan,
    tolerance: Option<Ratio>,
) -> Result<DensityReport, LatticeError> {
    let cfg = lift.config.with_window(l);
    cfg.validate_density()?;
    let n = cfg.dimension;
    let tol = tolerance.unwrap_or(Ratio { num: 12, den: l });
    if tol.den == 0 {
        return Err(LatticeError::InvalidConfig(
            "tolerance denominator is zero".into(),
        ));
    }
    let expected = Ratio {
        num: lift.base.len() as u64,
        den: checked_pow(3, n)?,
    };
    let volume = checked_pow(l, n)?;
    let last = 3 * cfg.m - l;

    let positions: Box<dyn Iterator<Item = Vec<i64>>> = match scan {
        WindowScan::Exhaustive { stride } => {
            if stride == 0 {
                return Err(LatticeError::InvalidConfig(
                    "stride must be positive".into(),
                ));
            }
            let per_axis = last / stride + 1;
            Box::new(grid(per_axis, n).map(move |p| p.iter().map(|&c| c * stride as i64).collect()))
        }
        WindowScan::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Box::new(
                (0..trials).map(move |_| (0..n).map(|_| rng.gen_range(0..=last) as i64).collect()),
            )
        }
    };

    // |f/V - e_num/e_den| <= t_num/t_den  <=>  |f e_den - e_num V| t_den <= t_num e_den V
    let bound = i128::from(tol.num) * i128::from(expected.den) * i128::from(volume);
    let mut report = DensityReport {
        window: l,
        windows: 0,
        min_count: u64::MAX,
        max_count: 0,
        expected_density: expected,
        tolerance: tol,
        within_tolerance: true,
        violations: 0,
        min_density: 0.0,
        max_density: 0.0,
        max_deviation: 0.0,
    };
    for x0 in positions {
        let f = lift.window_count_factorized(&x0, l);
        report.windows += 1;
        report.min_count = report.min_count.min(f);
        report.max_count = report.max_count.max(f);
        let gap = (i128::from(f) * i128::from(expected.den)
            - i128::from(expected.num) * i128::from(volume))
        .abs();
        if gap * i128::from(tol.den) > bound {
            report.violations += 1;
            report.within_tolerance = false;
        }
    }
    if report.windows == 0 {
        report.min_count = 0;
    }
    report.min_density = report.min_count as f64 / volume as f64;
    report.max_density = report.max_count as f64 / volume as f64;
    report.max_deviation = (report.min_density - expected.to_f64())
        .abs()
        .max((report.max_density - expected.to_f64()).abs());
    Ok(report)
}

/// `#Omega` does not divide `(3M)^n`, so `Omega` cannot tile the torus
/// `(Z/3MZ)^n`. This says nothing by itself about tilings of `Z^n`.
pub fn torus_non_tiling(
    omega: &LatticeSet,
    cfg: &LatticeConfig,
) -> Result<Option<DivisibilityObstruction>, LatticeError> {
    let side = 3 * cfg.m as i64;
    if let Some(p) = omega
        .points()
        .iter()
        .find(|p| p.iter().any(|&c| c < 0 || c >= side))
    {
        return Err(LatticeError::OutsideBox(p.clone()));
    }
    let group_order = checked_pow(3 * cfg.m, cfg.dimension)?;
    let set_size = omega.len() as u64;
    Ok(
        (set_size == 0 || group_order % set_size != 0).then_some(DivisibilityObstruction {
            set_size,
            group_order,
        }),
    )
}

/// The image of `omega` in the torus `(Z/3MZ)^n`, as a finite group and a set.
pub fn torus_image(
    omega: &LatticeSet,
    cfg: &LatticeConfig,
) -> Result<(GroupSpec, Vec<GroupElement>), LatticeError> {
    let modulus = u32::try_from(3 * cfg.m).map_err(|_| LatticeError::Overflow)?;
    let g = GroupSpec::power(modulus, cfg.dimension)?;
    let mut seen = HashSet::new();
    let mut set = Vec::new();
    for p in omega.points() {
        let x = g.element(p)?;
        if seen.insert(x.clone()) {
            set.push(x);
        }
    }
    Ok((g, set))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::{descend, spectrum_from_butson, standard_h6, SpectralPair};

    fn z35_pair() -> SpectralPair {
        descend(&spectrum_from_butson(&standard_h6()).unwrap()).unwrap()
    }

    fn zero_base(n: usize) -> Vec<GroupElement> {
        vec![GroupElement(vec![0; n])]
    }

    #[test]
    fn omega1_examples() {
        let pair = z35_pair();
        let one = build_omega1(&pair.set, &LatticeConfig::new(5, 1)).unwrap();
        assert_eq!(one.points().len(), 6);
        let lifted: Vec<Vec<i64>> = pair.set.iter().map(|x| lift_coords(x).unwrap()).collect();
        let mut sorted = lifted.clone();
        sorted.sort();
        assert_eq!(one.points().points(), &sorted[..]);

        let two = build_omega1(&pair.set, &LatticeConfig::new(5, 2)).unwrap();
        assert_eq!(two.points().len(), 192);
        assert!(two
            .points()
            .points()
            .iter()
            .flatten()
            .all(|&c| (0..6).contains(&c)));

        let grid3 = build_omega1(&zero_base(5), &LatticeConfig::new(5, 3)).unwrap();
        assert_eq!(grid3.points().len(), 243);
        assert!(grid3
            .points()
            .points()
            .iter()
            .flatten()
            .all(|&c| c % 3 == 0 && c < 9));
    }

    #[test]
    fn omega1_rejects_unlifted_coordinates() {
        let bad = vec![GroupElement(vec![3, 0])];
        assert_eq!(
            build_omega1(&bad, &LatticeConfig::new(2, 1)),
            Err(LatticeError::BaseOutOfCell(3))
        );
    }

    #[test]
    fn lambda1_examples() {
        let pair = z35_pair();
        let one = build_lambda1(&pair.spectrum, &LatticeConfig::new(5, 1)).unwrap();
        assert_eq!(one.denominator, 3);
        assert_eq!(one.len(), 6);
        let two = build_lambda1(&pair.spectrum, &LatticeConfig::new(5, 2)).unwrap();
        assert_eq!((two.denominator, two.len()), (6, 192));
        let zero = build_lambda1(&zero_base(5), &LatticeConfig::new(5, 2)).unwrap();
        assert_eq!(zero.len(), 32);
        assert!(zero.numerators.iter().flatten().all(|&c| c < 2));
    }

    #[test]
    fn ortho_small_scales() {
        let pair = z35_pair();
        for m in 1..=2 {
            let cfg = LatticeConfig::new(5, m);
            let omega = build_omega1(&pair.set, &cfg).unwrap();
            let lambda = build_lambda1(&pair.spectrum, &cfg).unwrap();
            assert!(verify_ortho_lattice(omega.points(), &lambda)
                .unwrap()
                .is_valid());
            assert!(verify_ortho_factorized(&omega, &lambda).unwrap().is_valid());
        }
    }

    #[test]
    fn perturbed_frequency_is_caught() {
        let pair = z35_pair();
        let cfg = LatticeConfig::new(5, 2);
        let omega = build_omega1(&pair.set, &cfg).unwrap();
        let mut lambda = build_lambda1(&pair.spectrum, &cfg).unwrap();
        // Shift the first frequency by 1/6 in the first coordinate; it now
        // collides in l with another frequency and fails orthogonality.
        lambda.numerators[0][0] = (lambda.numerators[0][0] + 1) % 6;
        let check = verify_ortho_lattice(omega.points(), &lambda).unwrap();
        let OrthoCheck::Invalid { xi, xi_prime, .. } = check else {
            panic!("perturbation must be detected");
        };
        assert!(!pair_vanishes_direct(omega.points(), &xi, &xi_prime, 6).unwrap());
        assert_eq!(
            verify_ortho_factorized(&omega, &lambda).unwrap(),
            verify_ortho_lattice(omega.points(), &lambda).unwrap()
        );
    }

    #[test]
    fn ortho_errors() {
        let omega = LatticeSet::new(vec![vec![0, 0]]).unwrap();
        let big = FrequencySet {
            denominator: 66,
            numerators: vec![vec![0, 0], vec![1, 0]],
        };
        assert_eq!(
            verify_ortho_lattice(&omega, &big),
            Err(LatticeError::DenominatorTooLarge(66))
        );
        let a = FrequencyVector {
            numerators: vec![0],
            denominator: 3,
        };
        let b = FrequencyVector {
            numerators: vec![0],
            denominator: 6,
        };
        assert_eq!(
            FrequencySet::from_vectors(&[a, b]),
            Err(LatticeError::MixedDenominators(3, 6))
        );
    }

    #[test]
    fn cell_counts() {
        let pair = z35_pair();
        let cfg = LatticeConfig::new(5, 2);
        let omega = build_omega1(&pair.set, &cfg).unwrap();
        assert!(cell_count_check(omega.points(), &cfg, 6));
        let broken = omega.points().without(&[0, 0, 0, 0, 0]);
        assert!(!cell_count_check(&broken, &cfg, 6));
        let single = build_omega1(&zero_base(5), &cfg).unwrap();
        assert!(cell_count_check(single.points(), &cfg, 1));
    }

    #[test]
    fn window_examples() {
        let pair = z35_pair();
        let cfg = LatticeConfig::new(5, 2);
        let omega = build_omega1(&pair.set, &cfg).unwrap();
        let pts = omega.points();
        assert_eq!(window_count(pts, &[0; 5], &[100; 5], 3), 0);
        assert_eq!(window_count(pts, &[0; 5], &[0; 5], 6), 192);
        assert_eq!(window_count(pts, &[0; 5], &[0; 5], 3), 6);
        for x0 in [[0, 0, 0, 0, 0], [1, 2, 0, 3, 1], [-2, 4, 1, 0, 5]] {
            assert_eq!(
                window_count(pts, &[0; 5], &x0, 3),
                omega.window_count_factorized(&x0, 3)
            );
        }
    }

    #[test]
    fn density_aligned_windows_are_exact() {
        let pair = z35_pair();
        let omega = build_omega1(&pair.set, &LatticeConfig::new(5, 4)).unwrap();
        let r = density_check(&omega, 6, WindowScan::Exhaustive { stride: 3 }, None).unwrap();
        assert_eq!((r.min_count, r.max_count), (6 * 32, 6 * 32));
        assert!(r.within_tolerance);

        let solid: Vec<GroupElement> = GroupSpec::power(3, 3).unwrap().elements().collect();
        let omega = build_omega1(&solid, &LatticeConfig::new(3, 4)).unwrap();
        let r = density_check(&omega, 5, WindowScan::Exhaustive { stride: 1 }, None).unwrap();
        assert_eq!((r.min_count, r.max_count), (125, 125));
    }

    #[test]
    fn density_precondition() {
        let pair = z35_pair();
        let omega = build_omega1(&pair.set, &LatticeConfig::new(5, 1)).unwrap();
        assert!(matches!(
            density_check(&omega, 2, WindowScan::Exhaustive { stride: 1 }, None),
            Err(LatticeError::InvalidConfig(_))
        ));
        assert!(matches!(
            density_check(&omega, 4, WindowScan::Exhaustive { stride: 1 }, None),
            Err(LatticeError::InvalidConfig(_))
        ));
    }

    #[test]
    fn torus_obstructions() {
        let pair = z35_pair();
        for m in 1..=3 {
            let cfg = LatticeConfig::new(5, m);
            let omega = build_omega1(&pair.set, &cfg).unwrap();
            let ob = torus_non_tiling(omega.points(), &cfg).unwrap().unwrap();
            assert_eq!(ob.set_size, 6 * m.pow(5));
            assert_eq!(ob.group_order, (3 * m).pow(5));
        }
        let solid: Vec<GroupElement> = GroupSpec::power(3, 2).unwrap().elements().collect();
        let cfg = LatticeConfig::new(2, 2);
        let omega = build_omega1(&solid, &cfg).unwrap();
        assert_eq!(torus_non_tiling(omega.points(), &cfg).unwrap(), None);
    }

    #[test]
    fn one_dimensional_toy_cross_checked_by_exact_cover() {
        let cfg = LatticeConfig::new(1, 2);
        let base = vec![GroupElement(vec![0]), GroupElement(vec![1])];
        let omega = build_omega1(&base, &cfg).unwrap();
        let ob = torus_non_tiling(omega.points(), &cfg).unwrap().unwrap();
        assert_eq!((ob.set_size, ob.group_order), (4, 6));
        let (g, set) = torus_image(omega.points(), &cfg).unwrap();
        let res = crate::tiling::search_tiling_complement(&g, &set, 1_000_000).unwrap();
        assert!(!res.tiles());
    }
}
