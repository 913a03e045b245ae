//! Exact arithmetic on integer combinations of m-th roots of unity.
//!
//! A [`CyclotomicInt`] of order `m` stores `sum_j c_j omega_m^j` with
//! `omega_m = exp(2 pi i / m)`. The representation is not unique; the zero
//! test reduces the coefficient polynomial modulo the cyclotomic polynomial
//! `Phi_m`, which is exact and needs no floating point.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Largest root order handled by the zero test.
pub const MAX_CYCLOTOMIC_ORDER: u32 = 64;

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // Both polynomials are little-endian; `den` is monic.
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (k, &d) in den.iter().enumerate() {
                rem[i + k] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn cyclotomic_table() -> &'static [Vec<i64>] {
    static TABLE: OnceLock<Vec<Vec<i64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let top = MAX_CYCLOTOMIC_ORDER as usize;
        let mut table: Vec<Vec<i64>> = vec![Vec::new(); top + 1];
        for m in 1..=top {
            // x^m - 1 = prod_{d | m} Phi_d
            let mut p = vec![0i64; m + 1];
            p[0] = -1;
            p[m] = 1;
            for d in (1..m).filter(|d| m % d == 0) {
                p = poly_div_exact(&p, &table[d]);
            }
            table[m] = p;
        }
        table
    })
}

/// Coefficients of `Phi_m`, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> &'static [i64] {
    assert!(
        (1..=MAX_CYCLOTOMIC_ORDER).contains(&m),
        "cyclotomic order {m} outside 1..={MAX_CYCLOTOMIC_ORDER}"
    );
    &cyclotomic_table()[m as usize]
}

fn is_prime(m: u32) -> bool {
    m >= 2
        && (2..m)
            .take_while(|d| d * d <= m)
            .all(|d| !m.is_multiple_of(d))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicInt {
    order: u32,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    /// # Panics
    /// If `m` is outside `1..=MAX_CYCLOTOMIC_ORDER`.
    pub fn zero(m: u32) -> Self {
        assert!(
            (1..=MAX_CYCLOTOMIC_ORDER).contains(&m),
            "cyclotomic order {m} outside 1..={MAX_CYCLOTOMIC_ORDER}"
        );
        CyclotomicInt {
            order: m,
            coeffs: vec![0; m as usize],
        }
    }

    pub fn from_coeffs(m: u32, coeffs: &[i64]) -> Self {
        let mut z = CyclotomicInt::zero(m);
        for (j, &c) in coeffs.iter().enumerate() {
            z.coeffs[j % m as usize] += c;
        }
        z
    }

    pub fn from_integer(m: u32, n: i64) -> Self {
        let mut z = CyclotomicInt::zero(m);
        z.coeffs[0] = n;
        z
    }

    /// `c * omega_m^k`.
    pub fn root_power(m: u32, k: u32, c: i64) -> Self {
        let mut z = CyclotomicInt::zero(m);
        z.add_root_power(k, c);
        z
    }

    pub fn add_root_power(&mut self, k: u32, c: i64) {
        self.coeffs[(k % self.order) as usize] += c;
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Complex conjugate: `omega^j -> omega^{-j}`.
    pub fn conj(&self) -> Self {
        let m = self.order as usize;
        let mut z = CyclotomicInt::zero(self.order);
        for (j, &c) in self.coeffs.iter().enumerate() {
            z.coeffs[(m - j) % m] += c;
        }
        z
    }

    /// Re-expresses the value in order `k * m` (same complex number).
    pub fn lift(&self, k: u32) -> Self {
        let mut z = CyclotomicInt::zero(self.order * k);
        for (j, &c) in self.coeffs.iter().enumerate() {
            z.coeffs[j * k as usize] += c;
        }
        z
    }

    /// Remainder of the coefficient polynomial modulo `Phi_m`.
    pub fn reduced(&self) -> Vec<i128> {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.len() - 1;
        let mut rem: Vec<i128> = self.coeffs.iter().map(|&c| c as i128).collect();
        for top in (deg..rem.len()).rev() {
            let c = rem[top];
            if c != 0 {
                let shift = top - deg;
                for (k, &p) in phi.iter().enumerate() {
                    rem[shift + k] -= c * p as i128;
                }
            }
        }
        rem.truncate(deg);
        rem
    }

    /// Exact test for the represented complex number being zero.
    pub fn is_zero(&self) -> bool {
        if is_prime(self.order) {
            // Phi_p = 1 + x + ... + x^{p-1} and the kernel is spanned by it.
            return self.coeffs.windows(2).all(|w| w[0] == w[1]);
        }
        self.reduced().iter().all(|&c| c == 0)
    }

    /// Floating-point value, for diagnostics only.
    pub fn to_complex(&self) -> Complex {
        let m = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold(Complex { re: 0.0, im: 0.0 }, |acc, (j, &c)| {
                let theta = std::f64::consts::TAU * j as f64 / m;
                Complex {
                    re: acc.re + c as f64 * theta.cos(),
                    im: acc.im + c as f64 * theta.sin(),
                }
            })
    }
}

/// Minimal complex value used for diagnostic output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub fn norm(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

impl Add for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn add(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        CyclotomicInt {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn sub(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        self + &(-rhs)
    }
}

impl Neg for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn neg(self) -> CyclotomicInt {
        CyclotomicInt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CyclotomicInt {
    type Output = CyclotomicInt;

    fn mul(self, rhs: &CyclotomicInt) -> CyclotomicInt {
        assert_eq!(self.order, rhs.order, "mixed cyclotomic orders");
        let m = self.order as usize;
        let mut out = CyclotomicInt::zero(self.order);
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out.coeffs[(i + j) % m] += a * b;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), &[-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), &[1, 1]);
        assert_eq!(cyclotomic_polynomial(3), &[1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), &[1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), &[1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), &[1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(64).len(), 33);
        for m in 1..=MAX_CYCLOTOMIC_ORDER {
            let phi = cyclotomic_polynomial(m);
            assert_eq!(*phi.last().unwrap(), 1, "Phi_{m} is monic");
        }
    }

    #[test]
    fn zero_test_examples() {
        assert!(CyclotomicInt::from_coeffs(3, &[1, 1, 1]).is_zero());
        assert!(CyclotomicInt::from_coeffs(2, &[5, 5]).is_zero());
        assert!(!CyclotomicInt::from_coeffs(2, &[5, 4]).is_zero());
        let z = CyclotomicInt::from_coeffs(6, &[1, 0, 1, 0, 1, 0]);
        assert!(z.to_complex().norm() < 1e-12);
        assert!(z.is_zero());
        assert!(!CyclotomicInt::from_coeffs(6, &[1, 1, 0, 0, 0, 0]).is_zero());
        assert!(CyclotomicInt::from_integer(1, 0).is_zero());
        assert!(!CyclotomicInt::from_integer(1, 3).is_zero());
    }

    #[test]
    fn arithmetic_matches_floating_point() {
        let a = CyclotomicInt::from_coeffs(12, &[1, -2, 0, 3, 0, 0, 1, 0, 0, 0, 4, -1]);
        let b = CyclotomicInt::from_coeffs(12, &[0, 1, 1, 0, -3, 0, 0, 2, 0, 0, 0, 5]);
        let (za, zb) = (a.to_complex(), b.to_complex());
        let p = (&a * &b).to_complex();
        assert!((p.re - (za.re * zb.re - za.im * zb.im)).abs() < 1e-9);
        assert!((p.im - (za.re * zb.im + za.im * zb.re)).abs() < 1e-9);
        let s = (&a - &b).to_complex();
        assert!((s.re - (za.re - zb.re)).abs() < 1e-9);
        let c = a.conj().to_complex();
        assert!((c.im + za.im).abs() < 1e-9);
        let l = a.lift(3).to_complex();
        assert!((l.re - za.re).abs() < 1e-9 && (l.im - za.im).abs() < 1e-9);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn norm_squared_of_root_sum_is_real() {
        // |1 + i|^2 = 2
        let z = CyclotomicInt::from_coeffs(4, &[1, 1, 0, 0]);
        let n = &z * &z.conj();
        assert!((&n - &CyclotomicInt::from_integer(4, 2)).is_zero());
    }
}
