//! Thickening a lattice set by unit cubes.
//!
//! `Omega2 = Omega1 + [0,1)^n` is a disjoint union of unit cubes and
//! `Lambda2 = Lambda1 + Z^n`. For `eta = lambda - lambda'` the inner product
//! of the two exponentials over `Omega2` factors as
//! `(sum_{x in Omega1} e(eta . x)) * prod_j c(eta_j)` with `c(0) = 1` and
//! `c(s) = (e(s) - 1) / (2 pi i s)` otherwise. `c(s)` vanishes exactly at the
//! nonzero integers, so the zero decision needs no floating point.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{
    lattice_character_sum, FrequencySet, FrequencyVector, LatticeError, LatticeSet, OrthoCheck,
};

#[derive(Debug, Error)]
pub enum ContinuumError {
    #[error("the zero frequency difference pairs an exponential with itself")]
    ZeroDifference,
    #[error("cannot thicken an empty set")]
    EmptySet,
    #[error("truncation with {0} frequencies exceeds the pair budget")]
    BudgetExceeded(u64),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed geometry file: {0}")]
    Format(#[from] serde_json::Error),
}

impl PartialEq for ContinuumError {
    fn eq(&self, other: &Self) -> bool {
        self.to_string() == other.to_string()
    }
}

/// Disjoint union of unit cubes `corner + [0,1)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeUnion {
    dimension: usize,
    corners: Vec<Vec<i64>>,
}

impl CubeUnion {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Lexicographically sorted corners.
    pub fn corners(&self) -> &[Vec<i64>] {
        &self.corners
    }

    /// Lebesgue measure, which is the number of cubes.
    pub fn measure(&self) -> u64 {
        self.corners.len() as u64
    }

    pub fn as_lattice_set(&self) -> LatticeSet {
        LatticeSet::new(self.corners.clone()).expect("corners are distinct")
    }
}

pub fn build_omega2(omega1: &LatticeSet) -> Result<CubeUnion, ContinuumError> {
    if omega1.is_empty() {
        return Err(ContinuumError::EmptySet);
    }
    Ok(CubeUnion {
        dimension: omega1.dimension(),
        corners: omega1.points().to_vec(),
    })
}

/// `base + shift`, a point of `Lambda1 + Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtendedFrequency {
    pub base: FrequencyVector,
    pub shift: Vec<i64>,
}

impl ExtendedFrequency {
    /// Numerators of the real vector `base + shift` over the base denominator.
    fn absolute(&self) -> Vec<i64> {
        let d = self.base.denominator as i64;
        self.base
            .numerators
            .iter()
            .zip(&self.shift)
            .map(|(&n, &k)| n + d * k)
            .collect()
    }

    /// `self - other` as an exact rational vector.
    pub fn difference(
        &self,
        other: &ExtendedFrequency,
    ) -> Result<FrequencyDifference, LatticeError> {
        if self.base.denominator != other.base.denominator {
            return Err(LatticeError::MixedDenominators(
                self.base.denominator,
                other.base.denominator,
            ));
        }
        Ok(FrequencyDifference {
            numerators: self
                .absolute()
                .iter()
                .zip(other.absolute())
                .map(|(a, b)| a - b)
                .collect(),
            denominator: self.base.denominator,
        })
    }
}

/// A real vector `numerators / denominator`, not reduced modulo 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyDifference {
    pub numerators: Vec<i64>,
    pub denominator: u64,
}

impl FrequencyDifference {
    pub fn negate(&self) -> Self {
        FrequencyDifference {
            numerators: self.numerators.iter().map(|n| -n).collect(),
            denominator: self.denominator,
        }
    }
}

/// Exact decision of `int_{Omega2} e(eta . x) dx = 0`.
///
/// A coordinate that is a nonzero integer kills its cube factor. Otherwise
/// every cube factor is nonzero and the verdict is the cyclotomic zero test
/// of the lattice sum over `Omega1`.
pub fn inner_product_is_zero(
    omega1: &LatticeSet,
    eta: &FrequencyDifference,
) -> Result<bool, ContinuumError> {
    if eta.numerators.iter().all(|&n| n == 0) {
        return Err(ContinuumError::ZeroDifference);
    }
    let d = eta.denominator as i64;
    if eta.numerators.iter().any(|&n| n != 0 && n % d == 0) {
        return Ok(true);
    }
    Ok(lattice_character_sum(omega1, &eta.numerators, eta.denominator)?.is_zero())
}

/// How pairs of a truncated spectrum are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelection {
    /// Every unordered pair; fails with `BudgetExceeded` beyond `max_pairs`.
    All { max_pairs: u64 },
    /// `pairs` distinct-index pairs drawn from a seeded generator.
    Sample { pairs: u64, seed: u64 },
}

/// `{ lambda + k : lambda in lambda1, |k|_inf <= radius }` in lexicographic (k, lambda) order.
pub fn truncated_spectrum(lambda1: &FrequencySet, radius: u64) -> Vec<ExtendedFrequency> {
    let dim = lambda1.numerators.first().map_or(0, Vec::len);
    let side = 2 * radius as i64 + 1;
    let total = (side as u64).pow(dim as u32);
    let mut out = Vec::with_capacity(total as usize * lambda1.len());
    for mut r in 0..total {
        let mut shift = vec![0i64; dim];
        for slot in shift.iter_mut().rev() {
            *slot = (r % side as u64) as i64 - radius as i64;
            r /= side as u64;
        }
        for i in 0..lambda1.len() {
            out.push(ExtendedFrequency {
                base: lambda1.get(i),
                shift: shift.clone(),
            });
        }
    }
    out
}

/// Orthogonality over `Omega2` of frequencies `Lambda1 + k`, `|k|_inf <= radius`.
///
/// This certifies orthogonality on a finite truncation only; completeness of
/// `Lambda2` is an infinitary statement and is not checked.
pub fn verify_spectrum_truncation(
    omega1: &LatticeSet,
    lambda1: &FrequencySet,
    radius: u64,
    selection: PairSelection,
) -> Result<OrthoCheck, ContinuumError> {
    let freqs = truncated_spectrum(lambda1, radius);
    let n = freqs.len() as u64;
    let witness = |a: &ExtendedFrequency,
                   b: &ExtendedFrequency|
     -> Result<Option<OrthoCheck>, ContinuumError> {
        let eta = a.difference(b)?;
        // A repeated frequency is never orthogonal to itself.
        let repeated = eta.numerators.iter().all(|&n| n == 0);
        if !repeated && inner_product_is_zero(omega1, &eta)? {
            Ok(None)
        } else {
            Ok(Some(OrthoCheck::Invalid {
                xi: a.absolute(),
                xi_prime: b.absolute(),
                denominator: lambda1.denominator,
            }))
        }
    };
    match selection {
        PairSelection::All { max_pairs } => {
            let total = n * n.saturating_sub(1) / 2;
            if total > max_pairs {
                return Err(ContinuumError::BudgetExceeded(n));
            }
            for i in 0..freqs.len() {
                for j in i + 1..freqs.len() {
                    if let Some(w) = witness(&freqs[i], &freqs[j])? {
                        return Ok(w);
                    }
                }
            }
            Ok(OrthoCheck::Valid { pairs: total })
        }
        PairSelection::Sample { pairs, seed } => {
            if n < 2 {
                return Ok(OrthoCheck::Valid { pairs: 0 });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..pairs {
                let i = rng.gen_range(0..n) as usize;
                let mut j = rng.gen_range(0..n - 1) as usize;
                if j >= i {
                    j += 1;
                }
                if let Some(w) = witness(&freqs[i], &freqs[j])? {
                    return Ok(w);
                }
            }
            Ok(OrthoCheck::Valid { pairs })
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GeometryFile {
    dimension: usize,
    cube_corners: Vec<Vec<i64>>,
    spectrum: FrequencySet,
    measure: u64,
}

/// Serialized geometry with sorted corners and sorted spectrum numerators.
pub fn geometry_json(omega2: &CubeUnion, lambda1: &FrequencySet) -> String {
    let mut numerators = lambda1.numerators.clone();
    numerators.sort();
    let file = GeometryFile {
        dimension: omega2.dimension,
        cube_corners: omega2.corners.clone(),
        spectrum: FrequencySet {
            denominator: lambda1.denominator,
            numerators,
        },
        measure: omega2.measure(),
    };
    serde_json::to_string(&file).expect("geometry serializes")
}

pub fn export_geometry(
    omega2: &CubeUnion,
    lambda1: &FrequencySet,
    path: &Path,
) -> Result<(), ContinuumError> {
    let mut text = geometry_json(omega2, lambda1);
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn import_geometry(path: &Path) -> Result<(CubeUnion, FrequencySet), ContinuumError> {
    let file: GeometryFile = serde_json::from_str(&fs::read_to_string(path)?)?;
    let set = LatticeSet::new(file.cube_corners)?;
    if set.len() as u64 != file.measure || (!set.is_empty() && set.dimension() != file.dimension) {
        return Err(LatticeError::InvalidConfig(
            "measure or dimension disagrees with corners".into(),
        )
        .into());
    }
    let omega2 = build_omega2(&set)?;
    let distinct: HashSet<&Vec<i64>> = file.spectrum.numerators.iter().collect();
    if distinct.len() != file.spectrum.len() {
        return Err(LatticeError::InvalidConfig("repeated spectrum entry".into()).into());
    }
    Ok((omega2, file.spectrum))
}
