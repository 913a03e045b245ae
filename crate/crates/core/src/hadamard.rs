//! Butson-type Hadamard matrices and the spectral sets they produce.
//!
//! An `N x N` matrix with `q`-th root of unity entries and pairwise
//! orthogonal rows gives a spectral set `{e_1, ..., e_N}` in `Z_q^N` whose
//! spectrum is read off the rows. When `N` is not a power of `q` the set
//! cannot tile. [`descend`] moves such an example down one dimension and
//! [`pad_dimension`] moves it up.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{CyclotomicInt, MAX_CYCLOTOMIC_ORDER};
use crate::group::{GroupElement, GroupError, GroupSpec};
use crate::spectra::{is_spectrum, SpectrumCheck, SpectrumError, SpectrumWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HadamardError {
    #[error("matrix is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("root order {0} is outside 2..={MAX_CYCLOTOMIC_ORDER}")]
    RootOrder(u32),
    #[error("root order {0} is composite; only prime orders are supported")]
    CompositeRootOrder(u32),
    #[error("rows {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("group {0} is not of the form Z_q^N")]
    NotElementary(String),
    #[error("cannot descend below dimension 1")]
    DimensionTooSmall,
    #[error("input pair is not spectral: {0:?}")]
    NotSpectral(SpectrumWitness),
    #[error("translated element {0} lies outside the zero-sum hyperplane")]
    OutsideHyperplane(GroupElement),
    #[error("cannot pad dimension {from} down to {to}")]
    PadBelowDimension { from: usize, to: usize },
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Square matrix of `q`-th roots of unity stored as exponents in `Z_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ButsonRepr", into = "ButsonRepr")]
pub struct ButsonMatrix {
    q: u32,
    logs: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct ButsonRepr {
    q: u32,
    logs: Vec<Vec<i64>>,
}

impl TryFrom<ButsonRepr> for ButsonMatrix {
    type Error = HadamardError;

    fn try_from(r: ButsonRepr) -> Result<Self, Self::Error> {
        ButsonMatrix::new(r.q, r.logs)
    }
}

impl From<ButsonMatrix> for ButsonRepr {
    fn from(m: ButsonMatrix) -> Self {
        ButsonRepr {
            q: m.q,
            logs: m
                .logs
                .into_iter()
                .map(|row| row.into_iter().map(i64::from).collect())
                .collect(),
        }
    }
}

impl ButsonMatrix {
    /// Builds a matrix, reducing every exponent modulo `q`.
    pub fn new(q: u32, logs: Vec<Vec<i64>>) -> Result<Self, HadamardError> {
        if !(2..=MAX_CYCLOTOMIC_ORDER).contains(&q) {
            return Err(HadamardError::RootOrder(q));
        }
        if logs.is_empty() {
            return Err(HadamardError::Empty);
        }
        let size = logs.len();
        if let Some((row, r)) = logs.iter().enumerate().find(|(_, r)| r.len() != size) {
            return Err(HadamardError::NotSquare {
                row,
                len: r.len(),
                size,
            });
        }
        let logs = logs
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| e.rem_euclid(q as i64) as u32)
                    .collect()
            })
            .collect();
        Ok(ButsonMatrix { q, logs })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn size(&self) -> usize {
        self.logs.len()
    }

    pub fn logs(&self) -> &[Vec<u32>] {
        &self.logs
    }

    /// `sum_k omega_q^{logs[a][k] - logs[b][k]}`.
    pub fn row_inner_product(&self, a: usize, b: usize) -> CyclotomicInt {
        let mut sum = CyclotomicInt::zero(self.q);
        for (&x, &y) in self.logs[a].iter().zip(&self.logs[b]) {
            sum.add_root_power(x + self.q - y, 1);
        }
        sum
    }

    /// First pair of distinct rows that fails the exact orthogonality test.
    pub fn first_non_orthogonal_pair(&self) -> Option<(usize, usize)> {
        let n = self.size();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| !self.row_inner_product(a, b).is_zero())
    }

    pub fn verify(&self) -> bool {
        self.first_non_orthogonal_pair().is_none()
    }
}

/// Boolean form of [`ButsonMatrix::verify`].
pub fn verify_butson(h: &ButsonMatrix) -> bool {
    h.verify()
}

const H12_SIGNS: [&str; 12] = [
    "+-----------",
    "++-+---+++-+",
    "+++-+---+++-",
    "+-++-+---+++",
    "++-++-+---++",
    "+++-++-+---+",
    "++++-++-+---",
    "+-+++-++-+--",
    "+--+++-++-+-",
    "+---+++-++-+",
    "++---+++-++-",
    "+-+---+++-++",
];

/// The 12 x 12 real Hadamard matrix, `+1 -> 0`, `-1 -> 1`.
pub fn standard_h12() -> ButsonMatrix {
    let logs = H12_SIGNS
        .iter()
        .map(|row| row.chars().map(|c| i64::from(c == '-')).collect())
        .collect();
    ButsonMatrix::new(2, logs).expect("embedded matrix is square")
}

/// The 6 x 6 cube-root matrix, `1 -> 0`, `w -> 1`, `w^2 -> 2`.
pub fn standard_h6() -> ButsonMatrix {
    let logs = vec![
        vec![0, 0, 0, 0, 0, 0],
        vec![0, 0, 1, 1, 2, 2],
        vec![0, 1, 0, 2, 2, 1],
        vec![0, 1, 2, 0, 1, 2],
        vec![0, 2, 2, 1, 0, 1],
        vec![0, 2, 1, 2, 1, 0],
    ];
    ButsonMatrix::new(3, logs).expect("embedded matrix is square")
}

/// A set together with a spectrum in a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPair {
    pub group: GroupSpec,
    pub set: Vec<GroupElement>,
    pub spectrum: Vec<GroupElement>,
}

impl SpectralPair {
    pub fn check(&self) -> Result<SpectrumCheck, SpectrumError> {
        is_spectrum(&self.group, &self.set, &self.spectrum)
    }
}

fn is_prime(q: u32) -> bool {
    q >= 2
        && (2..q)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// `({e_1, ..., e_N}, {xi_1, ..., xi_N})` in `Z_q^N` with `(xi_k)_j = logs[k][j]`,
/// so the character of `xi_k` evaluated on `e_j` is the `(k, j)` entry.
pub fn spectrum_from_butson(h: &ButsonMatrix) -> Result<SpectralPair, HadamardError> {
    if !is_prime(h.q) {
        return Err(HadamardError::CompositeRootOrder(h.q));
    }
    if let Some((a, b)) = h.first_non_orthogonal_pair() {
        return Err(HadamardError::NotOrthogonal(a, b));
    }
    let n = h.size();
    let group = GroupSpec::power(h.q, n)?;
    let set = (1..=n)
        .map(|j| group.standard_basis(j))
        .collect::<Result<Vec<_>, _>>()?;
    let spectrum = h.logs.iter().map(|row| GroupElement(row.clone())).collect();
    Ok(SpectralPair {
        group,
        set,
        spectrum,
    })
}

fn require_valid(pair: &SpectralPair) -> Result<(), HadamardError> {
    match pair.check()? {
        SpectrumCheck::Valid => Ok(()),
        SpectrumCheck::Invalid(w) => Err(HadamardError::NotSpectral(w)),
    }
}

/// Moves a spectral pair in `Z_q^N` to `Z_q^{N-1}`.
///
/// The set is translated by `-e_1`, which must place it inside the hyperplane
/// `Gamma = { x : x_1 + ... + x_N = 0 }`. Each frequency is replaced by its
/// representative modulo the diagonal `(c, ..., c)` with first coordinate
/// zero. Dropping the first coordinate on both sides identifies `Gamma` with
/// `Z_q^{N-1}` and preserves the pairing, since for `x` in `Gamma` and
/// `lambda_1 = 0`, `<lambda, x> = sum_{j >= 2} lambda_j x_j`.
pub fn descend(pair: &SpectralPair) -> Result<SpectralPair, HadamardError> {
    let g = &pair.group;
    let q = g
        .homogeneous_modulus()
        .ok_or_else(|| HadamardError::NotElementary(g.to_string()))?;
    let n = g.dimension();
    if n < 2 {
        return Err(HadamardError::DimensionTooSmall);
    }
    require_valid(pair)?;

    let e1 = g.standard_basis(1)?;
    let shifted: Vec<GroupElement> = pair.set.iter().map(|x| g.sub(x, &e1)).collect();
    if let Some(x) = shifted
        .iter()
        .find(|x| x.0.iter().map(|&c| c as u64).sum::<u64>() % q as u64 != 0)
    {
        return Err(HadamardError::OutsideHyperplane(x.clone()));
    }
    let normalized = pair.spectrum.iter().map(|l| {
        let c = l.0[0];
        GroupElement(l.0.iter().map(|&v| (v + q - c) % q).collect())
    });

    let group = GroupSpec::power(q, n - 1)?;
    let drop_first = |x: &GroupElement| GroupElement(x.0[1..].to_vec());
    let out = SpectralPair {
        group,
        set: shifted.iter().map(drop_first).collect(),
        spectrum: normalized.map(|l| drop_first(&l)).collect(),
    };
    debug_assert!(out.check().map(|c| c.is_valid()).unwrap_or(false));
    Ok(out)
}

/// Zero-extends a spectral pair in `Z_q^n` to `Z_q^{n'}`.
pub fn pad_dimension(pair: &SpectralPair, target: usize) -> Result<SpectralPair, HadamardError> {
    let g = &pair.group;
    let q = g
        .homogeneous_modulus()
        .ok_or_else(|| HadamardError::NotElementary(g.to_string()))?;
    let n = g.dimension();
    if target < n {
        return Err(HadamardError::PadBelowDimension {
            from: n,
            to: target,
        });
    }
    require_valid(pair)?;
    let pad = |x: &GroupElement| {
        let mut c = x.0.clone();
        c.resize(target, 0);
        GroupElement(c)
    };
    Ok(SpectralPair {
        group: GroupSpec::power(q, target)?,
        set: pair.set.iter().map(pad).collect(),
        spectrum: pair.spectrum.iter().map(pad).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{find_tiling, DivisibilityObstruction, NonTilingCertificate, TilingResult};

    const BUDGET: u64 = 1_000_000;

    #[test]
    fn embedded_matrices_verify() {
        assert!(verify_butson(&standard_h12()));
        assert!(verify_butson(&standard_h6()));
        let repeated = ButsonMatrix::new(2, vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(!verify_butson(&repeated));
        assert_eq!(repeated.first_non_orthogonal_pair(), Some((0, 1)));
    }

    #[test]
    fn embedded_rows() {
        assert_eq!(
            standard_h12().logs()[0],
            vec![0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]
        );
        assert_eq!(standard_h6().logs()[1], vec![0, 0, 1, 1, 2, 2]);
        assert_eq!(standard_h6().logs()[0], vec![0; 6]);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(ButsonMatrix::new(2, vec![]), Err(HadamardError::Empty));
        assert!(matches!(
            ButsonMatrix::new(2, vec![vec![0, 1], vec![0]]),
            Err(HadamardError::NotSquare { row: 1, .. })
        ));
        assert_eq!(
            ButsonMatrix::new(1, vec![vec![0]]),
            Err(HadamardError::RootOrder(1))
        );
        let m = ButsonMatrix::new(3, vec![vec![-1]]).unwrap();
        assert_eq!(m.logs()[0][0], 2);
    }

    #[test]
    fn json_format() {
        let m: ButsonMatrix = serde_json::from_str(r#"{"q":2,"logs":[[0,0],[0,1]]}"#).unwrap();
        assert!(m.verify());
        assert_eq!(
            serde_json::to_string(&m).unwrap(),
            r#"{"q":2,"logs":[[0,0],[0,1]]}"#
        );
        assert!(serde_json::from_str::<ButsonMatrix>(r#"{"q":2,"logs":[[0,0]]}"#).is_err());
    }

    #[test]
    fn h12_gives_spectral_non_tile() {
        let pair = spectrum_from_butson(&standard_h12()).unwrap();
        assert_eq!(pair.group.order(), 4096);
        assert!(pair.check().unwrap().is_valid());
        assert_eq!(
            find_tiling(&pair.group, &pair.set, BUDGET).unwrap(),
            TilingResult::NotTiles(NonTilingCertificate::DivisibilityObstruction(
                DivisibilityObstruction {
                    set_size: 12,
                    group_order: 4096
                }
            ))
        );
        // Second frequency reads row 2 of the matrix.
        assert_eq!(pair.spectrum[1].0, vec![0, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 0]);
    }

    #[test]
    fn printed_frequencies_are_complements() {
        // The displayed xi_1 and xi_2 use +1 -> 1; they are the all-ones
        // complements of the formula-consistent rows, and also form a valid
        // spectrum since complementing every row preserves orthogonality.
        let pair = spectrum_from_butson(&standard_h12()).unwrap();
        let g = &pair.group;
        let ones = GroupElement(vec![1; 12]);
        let printed_1 = GroupElement(vec![1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]);
        let printed_2 = GroupElement(vec![1, 1, 0, 1, 0, 0, 0, 1, 1, 1, 0, 1]);
        assert_eq!(g.add(&pair.spectrum[0], &ones), printed_1);
        assert_eq!(g.add(&pair.spectrum[1], &ones), printed_2);
        let complemented: Vec<_> = pair.spectrum.iter().map(|l| g.add(l, &ones)).collect();
        assert!(is_spectrum(g, &pair.set, &complemented).unwrap().is_valid());
    }

    #[test]
    fn h6_gives_spectral_non_tile_and_descends() {
        let pair = spectrum_from_butson(&standard_h6()).unwrap();
        assert!(pair.check().unwrap().is_valid());
        assert!(!find_tiling(&pair.group, &pair.set, BUDGET).unwrap().tiles());

        let down = descend(&pair).unwrap();
        assert_eq!(down.group, GroupSpec::power(3, 5).unwrap());
        assert_eq!(down.set.len(), 6);
        assert!(down.check().unwrap().is_valid());
        let mut expected = vec![down.group.zero()];
        expected.extend((1..=5).map(|j| down.group.standard_basis(j).unwrap()));
        assert_eq!(down.set, expected);
        assert_eq!(
            find_tiling(&down.group, &down.set, BUDGET).unwrap(),
            TilingResult::NotTiles(NonTilingCertificate::DivisibilityObstruction(
                DivisibilityObstruction {
                    set_size: 6,
                    group_order: 243
                }
            ))
        );
    }

    #[test]
    fn h12_descends_to_eleven_dimensions() {
        let down = descend(&spectrum_from_butson(&standard_h12()).unwrap()).unwrap();
        assert_eq!(down.group.order(), 2048);
        assert_eq!(down.set.len(), 12);
        assert!(down.check().unwrap().is_valid());
        assert!(!find_tiling(&down.group, &down.set, BUDGET).unwrap().tiles());
    }

    #[test]
    fn descend_translation_step_is_harmless_on_zero_sum_sets() {
        // {0, e_1 - e_2} style set: already contains e_1 and lies in e_1 + Gamma.
        let g = GroupSpec::power(2, 2).unwrap();
        let pair = SpectralPair {
            group: g.clone(),
            set: vec![g.element(&[1, 0]).unwrap(), g.element(&[0, 1]).unwrap()],
            spectrum: vec![g.element(&[0, 0]).unwrap(), g.element(&[1, 0]).unwrap()],
        };
        assert!(pair.check().unwrap().is_valid());
        let down = descend(&pair).unwrap();
        assert!(down.check().unwrap().is_valid());
    }

    #[test]
    fn descend_rejects_sets_off_the_hyperplane() {
        let g = GroupSpec::power(3, 2).unwrap();
        let pair = SpectralPair {
            group: g.clone(),
            set: vec![g.element(&[0, 0]).unwrap()],
            spectrum: vec![g.element(&[0, 0]).unwrap()],
        };
        assert!(matches!(
            descend(&pair),
            Err(HadamardError::OutsideHyperplane(_))
        ));
    }

    #[test]
    fn composite_and_unverified_inputs_rejected() {
        let h4 = ButsonMatrix::new(4, vec![vec![0, 0], vec![0, 2]]).unwrap();
        assert!(h4.verify());
        assert_eq!(
            spectrum_from_butson(&h4),
            Err(HadamardError::CompositeRootOrder(4))
        );
        let bad = ButsonMatrix::new(2, vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(
            spectrum_from_butson(&bad),
            Err(HadamardError::NotOrthogonal(0, 1))
        );
    }

    #[test]
    fn one_by_one_matrix() {
        let pair = spectrum_from_butson(&ButsonMatrix::new(2, vec![vec![0]]).unwrap()).unwrap();
        assert_eq!(pair.set, vec![GroupElement(vec![1])]);
        assert!(pair.check().unwrap().is_valid());
    }

    #[test]
    fn padding() {
        let down = descend(&spectrum_from_butson(&standard_h6()).unwrap()).unwrap();
        let up = pad_dimension(&down, 6).unwrap();
        assert!(up.check().unwrap().is_valid());
        assert_eq!(up.group.order(), 729);
        assert!(!find_tiling(&up.group, &up.set, BUDGET).unwrap().tiles());
        assert_eq!(pad_dimension(&down, 5).unwrap(), down);
        assert!(matches!(
            pad_dimension(&down, 4),
            Err(HadamardError::PadBelowDimension { from: 5, to: 4 })
        ));

        let z2 = GroupSpec::cyclic(2).unwrap();
        let single = SpectralPair {
            group: z2.clone(),
            set: vec![z2.zero()],
            spectrum: vec![z2.zero()],
        };
        let padded = pad_dimension(&single, 3).unwrap();
        assert!(padded.check().unwrap().is_valid());
        let sigma: Vec<_> = padded.group.elements().collect();
        assert_eq!(
            find_tiling(&padded.group, &padded.set, BUDGET).unwrap(),
            TilingResult::Tiles(sigma)
        );
    }
}
