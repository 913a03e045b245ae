//! Finite abelian groups `Z_{n_1} x ... x Z_{n_k}` and their elements.
//!
//! The group is identified with its own dual: a frequency is stored as a
//! [`GroupElement`] in the same coordinates, and the pairing
//! `<xi, x> = sum_j xi_j x_j (m / n_j) mod m` gives the character value
//! `exp(2 pi i <xi, x> / m)`, where `m` is the exponent of the group.
//!
//! Elements have a dense mixed-radix rank in `[0, order)`. The last
//! coordinate is the least significant digit, so rank order coincides with
//! lexicographic order on coordinate vectors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CyclotomicInt, MAX_CYCLOTOMIC_ORDER};

/// Largest group order accepted by operations that enumerate every element.
pub const MAX_EXHAUSTIVE_ORDER: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("a group needs at least one modulus")]
    NoModuli,
    #[error("modulus {0} is smaller than 2")]
    ModulusTooSmall(u64),
    #[error("group order overflows 64 bits")]
    OrderOverflow,
    #[error("group exponent {0} exceeds the supported maximum {MAX_CYCLOTOMIC_ORDER}")]
    ExponentTooLarge(u64),
    #[error("element has {found} coordinates but the group has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate {index} = {value} is not reduced modulo {modulus}")]
    Unreduced {
        index: usize,
        value: u32,
        modulus: u32,
    },
    #[error("basis index {index} out of range 1..={dimension}")]
    BasisIndex { index: usize, dimension: usize },
    #[error("group order {0} exceeds the exhaustive limit {MAX_EXHAUSTIVE_ORDER}")]
    TooLarge(u64),
    #[error("invalid group descriptor {0:?}")]
    Descriptor(String),
}

/// An element (or, under self-duality, a character) given by reduced coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(pub Vec<u32>);

impl GroupElement {
    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl From<Vec<u32>> for GroupElement {
    fn from(coords: Vec<u32>) -> Self {
        GroupElement(coords)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Deserialize, Serialize)]
struct GroupSpecRepr {
    moduli: Vec<u32>,
}

/// `Z_{n_1} x ... x Z_{n_k}` with cached exponent and order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupSpecRepr", into = "GroupSpecRepr")]
pub struct GroupSpec {
    moduli: Vec<u32>,
    exponent: u32,
    order: u64,
}

impl TryFrom<GroupSpecRepr> for GroupSpec {
    type Error = GroupError;

    fn try_from(repr: GroupSpecRepr) -> Result<Self, Self::Error> {
        GroupSpec::new(repr.moduli)
    }
}

impl From<GroupSpec> for GroupSpecRepr {
    fn from(g: GroupSpec) -> Self {
        GroupSpecRepr { moduli: g.moduli }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl GroupSpec {
    pub fn new(moduli: Vec<u32>) -> Result<Self, GroupError> {
        if moduli.is_empty() {
            return Err(GroupError::NoModuli);
        }
        let mut exponent: u64 = 1;
        let mut order: u64 = 1;
        for &n in &moduli {
            if n < 2 {
                return Err(GroupError::ModulusTooSmall(n as u64));
            }
            exponent = exponent / gcd(exponent, n as u64) * n as u64;
            if exponent > MAX_CYCLOTOMIC_ORDER as u64 {
                return Err(GroupError::ExponentTooLarge(exponent));
            }
            order = order
                .checked_mul(n as u64)
                .ok_or(GroupError::OrderOverflow)?;
        }
        Ok(GroupSpec {
            moduli,
            exponent: exponent as u32,
            order,
        })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: u32) -> Result<Self, GroupError> {
        GroupSpec::new(vec![n])
    }

    /// `Z_p^k`.
    pub fn power(p: u32, k: usize) -> Result<Self, GroupError> {
        GroupSpec::new(vec![p; k])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn dimension(&self) -> usize {
        self.moduli.len()
    }

    /// Least common multiple of the moduli.
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `Some(q)` when every modulus equals `q`.
    pub fn homogeneous_modulus(&self) -> Option<u32> {
        let q = self.moduli[0];
        self.moduli.iter().all(|&n| n == q).then_some(q)
    }

    pub fn ensure_exhaustive(&self, limit: u64) -> Result<(), GroupError> {
        if self.order > limit {
            Err(GroupError::TooLarge(self.order))
        } else {
            Ok(())
        }
    }

    pub fn validate(&self, x: &GroupElement) -> Result<(), GroupError> {
        if x.len() != self.moduli.len() {
            return Err(GroupError::DimensionMismatch {
                expected: self.moduli.len(),
                found: x.len(),
            });
        }
        for (index, (&value, &modulus)) in x.0.iter().zip(&self.moduli).enumerate() {
            if value >= modulus {
                return Err(GroupError::Unreduced {
                    index,
                    value,
                    modulus,
                });
            }
        }
        Ok(())
    }

    /// Builds an element from arbitrary integers, reducing each coordinate.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        if coords.len() != self.moduli.len() {
            return Err(GroupError::DimensionMismatch {
                expected: self.moduli.len(),
                found: coords.len(),
            });
        }
        Ok(GroupElement(
            coords
                .iter()
                .zip(&self.moduli)
                .map(|(&c, &n)| c.rem_euclid(n as i64) as u32)
                .collect(),
        ))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.moduli.len()])
    }

    /// The unit vector `e_j`, with `j` counted from 1.
    pub fn standard_basis(&self, j: usize) -> Result<GroupElement, GroupError> {
        if j == 0 || j > self.moduli.len() {
            return Err(GroupError::BasisIndex {
                index: j,
                dimension: self.moduli.len(),
            });
        }
        let mut coords = vec![0; self.moduli.len()];
        coords[j - 1] = 1;
        Ok(GroupElement(coords))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &n)| ((x as u64 + y as u64) % n as u64) as u32)
                .collect(),
        )
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(&x, &n)| if x == 0 { 0 } else { n - x })
                .collect(),
        )
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &n)| ((x as u64 + n as u64 - y as u64) % n as u64) as u32)
                .collect(),
        )
    }

    /// `T + t` for every element of `set`.
    pub fn translate(&self, set: &[GroupElement], t: &GroupElement) -> Vec<GroupElement> {
        set.iter().map(|x| self.add(x, t)).collect()
    }

    /// Mixed-radix index of a (valid) element.
    pub fn rank(&self, x: &GroupElement) -> u64 {
        x.0.iter()
            .zip(&self.moduli)
            .fold(0u64, |acc, (&c, &n)| acc * n as u64 + c as u64)
    }

    /// Inverse of [`GroupSpec::rank`]; `r` must be below the order.
    pub fn unrank(&self, mut r: u64) -> GroupElement {
        let mut coords = vec![0u32; self.moduli.len()];
        for (slot, &n) in coords.iter_mut().zip(&self.moduli).rev() {
            *slot = (r % n as u64) as u32;
            r /= n as u64;
        }
        GroupElement(coords)
    }

    /// All elements in rank order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order).map(move |r| self.unrank(r))
    }

    /// The exponent `<xi, x>` in `Z_m` such that the character value is `omega_m^<xi, x>`.
    pub fn pairing(&self, xi: &GroupElement, x: &GroupElement) -> Result<u32, GroupError> {
        self.validate(xi)?;
        self.validate(x)?;
        Ok(self.pairing_unchecked(xi, x))
    }

    pub(crate) fn pairing_unchecked(&self, xi: &GroupElement, x: &GroupElement) -> u32 {
        let m = self.exponent as u64;
        let mut acc = 0u64;
        for ((&a, &b), &n) in xi.0.iter().zip(&x.0).zip(&self.moduli) {
            acc = (acc + (a as u64 * b as u64 % n as u64) * (m / n as u64)) % m;
        }
        acc as u32
    }

    /// `sum_{x in set} omega_m^<d, x>` as an exact cyclotomic integer of order `m`.
    pub fn character_sum(
        &self,
        set: &[GroupElement],
        d: &GroupElement,
    ) -> Result<CyclotomicInt, GroupError> {
        self.validate(d)?;
        for x in set {
            self.validate(x)?;
        }
        Ok(self.character_sum_unchecked(set, d))
    }

    pub(crate) fn character_sum_unchecked(
        &self,
        set: &[GroupElement],
        d: &GroupElement,
    ) -> CyclotomicInt {
        let mut sum = CyclotomicInt::zero(self.exponent);
        for x in set {
            sum.add_root_power(self.pairing_unchecked(d, x), 1);
        }
        sum
    }

    pub fn validate_set(&self, set: &[GroupElement]) -> Result<(), GroupError> {
        set.iter().try_for_each(|x| self.validate(x))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.homogeneous_modulus() {
            if self.moduli.len() == 1 {
                return write!(f, "Z{q}");
            }
            return write!(f, "Z{q}^{}", self.moduli.len());
        }
        let parts: Vec<String> = self.moduli.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Descriptor grammar: `"n"` is `Z_n`, `"p^k"` is `Z_p^k`, and factors may be
/// joined with `x`, as in `"4x2"` or `"3^2x4"`.
impl FromStr for GroupSpec {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::Descriptor(s.to_string());
        let mut moduli = Vec::new();
        for factor in s.trim().split(['x', 'X', '*']) {
            let factor = factor.trim();
            let (base, power) = match factor.split_once('^') {
                Some((b, k)) => (b.trim(), k.trim().parse::<usize>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            let base = base
                .trim_start_matches(['Z', 'z'])
                .parse::<u32>()
                .map_err(|_| bad())?;
            if power == 0 {
                return Err(bad());
            }
            moduli.extend(std::iter::repeat_n(base, power));
        }
        GroupSpec::new(moduli)
    }
}
