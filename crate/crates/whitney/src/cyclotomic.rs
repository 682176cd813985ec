//! Exact cyclotomic integers: Z-linear combinations of m-th roots of unity
//! with decidable equality and no floating point anywhere.
//!
//! A value is stored against a conductor m in the power basis
//! 1, z, ..., z^(phi(m)-1) of Z[z]/Phi_m(z); reduction modulo the m-th
//! cyclotomic polynomial makes the representation canonical for fixed m, and
//! rational values are always collapsed to conductor 1. Cross-conductor
//! operations lift both operands to the lcm.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;

/// Euler phi.
pub fn phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn cyclotomic_poly_cache() -> &'static Mutex<HashMap<u32, Vec<i64>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Phi_m, constant term first, computed by exact division of
/// x^m - 1 by the cyclotomic polynomials of the proper divisors.
pub fn cyclotomic_poly(m: u32) -> Vec<i64> {
    if let Some(p) = cyclotomic_poly_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let result = if m == 1 {
        vec![-1, 1]
    } else {
        let mut num = vec![0i64; m as usize + 1];
        num[0] = -1;
        num[m as usize] = 1;
        for d in 1..m {
            if m % d == 0 {
                num = poly_div_exact(&num, &cyclotomic_poly(d));
            }
        }
        num
    };
    cyclotomic_poly_cache()
        .lock()
        .unwrap()
        .insert(m, result.clone());
    result
}

/// Exact division of integer polynomials, panics on nonzero remainder.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem: Vec<i64> = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for i in (dd..num.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - dd] = c;
        for k in 0..=dd {
            rem[i - dd + k] -= c * den[k];
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division not exact");
    quot
}

/// Remainder of an integer polynomial modulo a monic divisor.
fn poly_rem(mut rem: Vec<i64>, den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        for k in 0..=dd {
            rem[i - dd + k] -= c * den[k];
        }
    }
    rem.truncate(dd);
    while rem.len() < dd {
        rem.push(0);
    }
    rem
}

/// Exact cyclotomic integer.
#[derive(Clone)]
pub struct Cyclotomic {
    m: u32,
    /// Length phi(m); coefficient of z^k at index k.
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero() -> Cyclotomic {
        Cyclotomic {
            m: 1,
            coeffs: vec![0],
        }
    }

    pub fn from_i64(v: i64) -> Cyclotomic {
        Cyclotomic {
            m: 1,
            coeffs: vec![v],
        }
    }

    /// zeta_m^k.
    pub fn root_of_unity(m: u32, k: u64) -> Cyclotomic {
        assert!(m >= 1);
        let mut dense = vec![0i64; m as usize];
        dense[(k % m as u64) as usize] = 1;
        Cyclotomic::reduce(m, dense)
    }

    /// Canonical form from a dense exponent-basis vector (any length; folded
    /// mod m first, then reduced mod Phi_m, then conductor-collapsed when the
    /// value is rational).
    pub fn reduce(m: u32, dense: Vec<i64>) -> Cyclotomic {
        let mut folded = vec![0i64; m as usize];
        for (e, c) in dense.into_iter().enumerate() {
            folded[e % m as usize] += c;
        }
        let coeffs = poly_rem(folded, &cyclotomic_poly(m));
        let mut v = Cyclotomic { m, coeffs };
        v.collapse_if_rational();
        v
    }

    fn collapse_if_rational(&mut self) {
        if self.m != 1 && self.coeffs[1..].iter().all(|&c| c == 0) {
            *self = Cyclotomic {
                m: 1,
                coeffs: vec![self.coeffs[0]],
            };
        }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m == 1 && self.coeffs[0] == 0
    }

    /// Some(n) iff the value is the rational integer n.
    pub fn as_i64(&self) -> Option<i64> {
        if self.m == 1 {
            Some(self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.m == 1
    }

    /// Coefficient vector in the power basis at a conductor L that m divides.
    pub fn lifted_coeffs(&self, l: u32) -> Vec<i64> {
        assert_eq!(l % self.m, 0, "target conductor must be a multiple");
        let scale = (l / self.m) as usize;
        let mut dense = vec![0i64; l as usize];
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c != 0 {
                dense[e * scale] += c;
            }
        }
        poly_rem(dense, &cyclotomic_poly(l))
    }

    fn lift(&self, l: u32) -> Cyclotomic {
        if l == self.m {
            return self.clone();
        }
        Cyclotomic {
            m: l,
            coeffs: self.lifted_coeffs(l),
        }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let l = (self.m as u64).lcm(&(other.m as u64)) as u32;
        let a = self.lift(l);
        let b = other.lift(l);
        let coeffs: Vec<i64> = a
            .coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(&x, &y)| x + y)
            .collect();
        let mut v = Cyclotomic { m: l, coeffs };
        v.collapse_if_rational();
        v
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Cyclotomic {
        let mut v = Cyclotomic {
            m: self.m,
            coeffs: self.coeffs.iter().map(|&c| c * k).collect(),
        };
        v.collapse_if_rational();
        v
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        if let (Some(a), Some(b)) = (self.as_i64(), other.as_i64()) {
            return Cyclotomic::from_i64(a * b);
        }
        let l = (self.m as u64).lcm(&(other.m as u64)) as u32;
        let a = self.lift(l);
        let b = other.lift(l);
        let mut prod = vec![0i64; a.coeffs.len() + b.coeffs.len()];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    prod[i + j] += x * y;
                }
            }
        }
        Cyclotomic::reduce(l, prod)
    }

    /// Complex conjugation: z^k -> z^(m-k).
    pub fn conj(&self) -> Cyclotomic {
        if self.m == 1 {
            return self.clone();
        }
        let mut dense = vec![0i64; self.m as usize];
        for (e, &c) in self.coeffs.iter().enumerate() {
            let idx = if e == 0 { 0 } else { self.m as usize - e };
            dense[idx] += c;
        }
        Cyclotomic::reduce(self.m, dense)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// Galois twist z -> z^j for j coprime to the conductor.
    pub fn galois(&self, j: u64) -> Cyclotomic {
        if self.m == 1 {
            return self.clone();
        }
        let mut dense = vec![0i64; self.m as usize];
        for (e, &c) in self.coeffs.iter().enumerate() {
            dense[((e as u64 * j) % self.m as u64) as usize] += c;
        }
        Cyclotomic::reduce(self.m, dense)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            return self.coeffs == other.coeffs;
        }
        let l = (self.m as u64).lcm(&(other.m as u64)) as u32;
        self.lifted_coeffs(l) == other.lifted_coeffs(l)
    }
}
impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_i64() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "{c}")?;
            } else if c == 1 {
                write!(f, "z{}^{e}", self.m)?;
            } else {
                write!(f, "{c}*z{}^{e}", self.m)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn phi_values() {
        assert_eq!(phi(1), 1);
        assert_eq!(phi(12), 4);
        assert_eq!(phi(360), 96);
        assert_eq!(phi(1092), 288);
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn roots_and_vanishing_sums() {
        // 1 + z3 + z3^2 = 0
        let sum = Cyclotomic::from_i64(1)
            .add(&Cyclotomic::root_of_unity(3, 1))
            .add(&Cyclotomic::root_of_unity(3, 2));
        assert!(sum.is_zero());
        // z4^2 = -1
        let i2 = Cyclotomic::root_of_unity(4, 1).mul(&Cyclotomic::root_of_unity(4, 1));
        assert_eq!(i2, Cyclotomic::from_i64(-1));
        // z6 = 1 + z3 (same value through different conductors)
        let z6 = Cyclotomic::root_of_unity(6, 1);
        let alt = Cyclotomic::from_i64(1).add(&Cyclotomic::root_of_unity(3, 1));
        assert_eq!(z6, alt);
    }

    #[test]
    fn conjugation_and_reality() {
        let z5 = Cyclotomic::root_of_unity(5, 1);
        let real_part = z5.add(&z5.conj());
        assert!(real_part.is_real());
        assert!(!z5.is_real());
        assert!(real_part.as_i64().is_none()); // golden-ratio-ish irrational
        // norm-like product z * conj(z) = 1 for a root of unity
        assert_eq!(z5.mul(&z5.conj()), Cyclotomic::from_i64(1));
    }

    #[test]
    fn galois_orbit_sums_are_rational() {
        // sum over the Galois orbit of z7 is the rational -1
        let mut s = Cyclotomic::zero();
        for j in 1..7 {
            s = s.add(&Cyclotomic::root_of_unity(7, j));
        }
        assert_eq!(s.as_i64(), Some(-1));
        // the galois twist permutes roots of unity
        let z5 = Cyclotomic::root_of_unity(5, 1);
        assert_eq!(z5.galois(2), Cyclotomic::root_of_unity(5, 2));
        let real = z5.add(&z5.conj());
        assert!(real.galois(2).is_real());
        assert_ne!(real.galois(2), real); // conjugate golden-ratio value
    }

    proptest! {
        #[test]
        fn ring_axioms(m in prop::sample::select(vec![3u32, 4, 6, 8, 9, 12]), a_raw in prop::collection::vec(-4i64..5, 4), b_raw in prop::collection::vec(-4i64..5, 4), c_raw in prop::collection::vec(-4i64..5, 4)) {
            let a = Cyclotomic::reduce(m, a_raw);
            let b = Cyclotomic::reduce(m, b_raw);
            let c = Cyclotomic::reduce(m, c_raw);
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
            prop_assert!(a.sub(&a).is_zero());
        }
    }
}
