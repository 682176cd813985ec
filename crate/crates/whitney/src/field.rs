//! Exact arithmetic for finite fields GF(p^r) with q = p^r <= 2^16, and small
//! dense matrices over them.
//!
//! Elements are stored as canonical indices in [0, q): the index is the base-p
//! evaluation of the reduced coefficient vector, so index <-> coefficient
//! vector is a bijection. Fields with q <= 256 precompute full add/mul/inv
//! tables; larger fields fall back to polynomial arithmetic modulo the field
//! modulus.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_FIELD_SIZE: u64 = 1 << 16;
const TABLE_LIMIT: u64 = 256;

/// Modulus table for the common extension fields. Everything else uses the
/// smallest monic irreducible in base-p coefficient order (constant term
/// first), found by exhaustive search.
const FIXED_MODULI: &[(u64, u32, &[u16])] = &[
    (2, 2, &[1, 1, 1]),    // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]), // x^3 + x + 1
    (2, 4, &[1, 1, 0, 0, 1]), // x^4 + x + 1
    (3, 2, &[1, 0, 1]),    // x^2 + 1
    (5, 2, &[1, 1, 1]),    // x^2 + x + 1
    (3, 3, &[1, 2, 0, 1]), // x^3 + 2x + 1
];

#[derive(Debug)]
struct FieldInner {
    p: u64,
    r: u32,
    q: u64,
    /// Monic modulus, length r+1, constant term first.
    modulus: Vec<u16>,
    /// q*q tables when q <= 256, indexed by a*q+b.
    add_table: Vec<u16>,
    mul_table: Vec<u16>,
    inv_table: Vec<u16>,
}

/// Shared, immutable description of one finite field.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.inner.q)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.r == other.inner.r
                && self.inner.modulus == other.inner.modulus)
    }
}
impl Eq for FieldSpec {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Polynomial arithmetic helpers over GF(p), vectors constant-term-first.
fn poly_mul_mod(a: &[u16], b: &[u16], modulus: &[u16], p: u64) -> Vec<u16> {
    let r = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p;
        }
    }
    // reduce: modulus is monic, x^r = -(lower part)
    for i in (r..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for k in 0..r {
            let m = modulus[k] as u64;
            if m != 0 {
                let idx = i - r + k;
                prod[idx] = (prod[idx] + c * (p - m) % p) % p;
            }
        }
    }
    prod.truncate(r.max(1));
    prod.iter().map(|&c| c as u16).collect()
}

fn index_to_coeffs(idx: u64, p: u64, r: u32) -> Vec<u16> {
    let mut v = Vec::with_capacity(r as usize);
    let mut x = idx;
    for _ in 0..r {
        v.push((x % p) as u16);
        x /= p;
    }
    v
}

fn coeffs_to_index(coeffs: &[u16], p: u64) -> u64 {
    let mut idx = 0u64;
    for &c in coeffs.iter().rev() {
        idx = idx * p + c as u64;
    }
    idx
}

impl FieldInner {
    fn add_raw(&self, a: u64, b: u64) -> u64 {
        let (p, r) = (self.p, self.r);
        let mut out = 0u64;
        let mut mul = 1u64;
        let (mut x, mut y) = (a, b);
        for _ in 0..r {
            out += ((x % p + y % p) % p) * mul;
            mul *= p;
            x /= p;
            y /= p;
        }
        out
    }

    fn neg_raw(&self, a: u64) -> u64 {
        let (p, r) = (self.p, self.r);
        let mut out = 0u64;
        let mut mul = 1u64;
        let mut x = a;
        for _ in 0..r {
            out += ((p - x % p) % p) * mul;
            mul *= p;
            x /= p;
        }
        out
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let ca = index_to_coeffs(a, self.p, self.r);
        let cb = index_to_coeffs(b, self.p, self.r);
        coeffs_to_index(&poly_mul_mod(&ca, &cb, &self.modulus, self.p), self.p)
    }

    fn pow_raw(&self, a: u64, mut k: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            k >>= 1;
        }
        acc
    }

    fn inv_raw(&self, a: u64) -> u64 {
        // a^(q-2); a != 0 checked by callers
        self.pow_raw(a, self.q - 2)
    }
}

/// Exhaustive irreducibility test for the small degrees in scope: trial
/// division by every monic polynomial of degree <= r/2.
fn is_irreducible(modulus: &[u16], p: u64) -> bool {
    let r = modulus.len() - 1;
    for d in 1..=r / 2 {
        let count = p.pow(d as u32);
        for v in 0..count {
            let mut div: Vec<u16> = index_to_coeffs(v, p, d as u32);
            div.push(1); // monic of degree d
            if poly_divides(&div, modulus, p) {
                return false;
            }
        }
    }
    true
}

fn poly_divides(div: &[u16], target: &[u16], p: u64) -> bool {
    let mut rem: Vec<u64> = target.iter().map(|&c| c as u64).collect();
    let d = div.len() - 1;
    while rem.len() > d {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let top = rem.len() - 1;
            for k in 0..=d {
                let idx = top - d + k;
                rem[idx] = (rem[idx] + lead * (p - div[k] as u64) % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

impl FieldSpec {
    /// Builds GF(p^r) with a fixed, documented modulus: the entry from the
    /// built-in table if present, otherwise the lexicographically smallest
    /// monic irreducible (coefficient vector read constant term first).
    pub fn new(p: u64, r: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r < 1 {
            return Err(Error::FieldSizeOutOfRange { q: 0 });
        }
        let q = p.checked_pow(r).filter(|&q| q <= MAX_FIELD_SIZE).ok_or(
            Error::FieldSizeOutOfRange {
                q: p.saturating_pow(r),
            },
        )?;

        let modulus: Vec<u16> = if r == 1 {
            vec![0, 1] // x: arithmetic is plain mod-p, modulus unused
        } else if let Some((_, _, m)) = FIXED_MODULI
            .iter()
            .find(|&&(fp, fr, _)| fp == p && fr == r)
        {
            m.to_vec()
        } else {
            // smallest-lexicographic search over the non-leading coefficients
            let mut found = None;
            for v in 0..p.pow(r) {
                let mut cand = index_to_coeffs(v, p, r);
                cand.push(1);
                if is_irreducible(&cand, p) {
                    found = Some(cand);
                    break;
                }
            }
            found.expect("an irreducible polynomial of each degree exists")
        };
        debug_assert!(r == 1 || is_irreducible(&modulus, p));

        let mut inner = FieldInner {
            p,
            r,
            q,
            modulus,
            add_table: Vec::new(),
            mul_table: Vec::new(),
            inv_table: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add = vec![0u16; n * n];
            let mut mul = vec![0u16; n * n];
            let mut inv = vec![0u16; n];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = inner.add_raw(a, b) as u16;
                    mul[(a * q + b) as usize] = inner.mul_raw(a, b) as u16;
                }
                if a != 0 {
                    inv[a as usize] = inner.inv_raw(a) as u16;
                }
            }
            inner.add_table = add;
            inner.mul_table = mul;
            inner.inv_table = inv;
        }
        Ok(FieldSpec {
            inner: Arc::new(inner),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }
    pub fn r(&self) -> u32 {
        self.inner.r
    }
    pub fn q(&self) -> u64 {
        self.inner.q
    }
    /// Monic modulus, constant term first, length r+1.
    pub fn modulus(&self) -> &[u16] {
        &self.inner.modulus
    }

    pub fn element(&self, idx: u64) -> FieldElement {
        assert!(idx < self.inner.q, "element index out of range");
        FieldElement {
            spec: self.clone(),
            idx: idx as u16,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }
    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// p-1 lifted into the extension: the canonical -1.
    pub fn minus_one(&self) -> FieldElement {
        self.element(self.inner.p - 1)
    }

    /// The element x (polynomial generator of the extension over GF(p)).
    pub fn poly_gen(&self) -> FieldElement {
        assert!(self.inner.r > 1, "poly_gen requires an extension field");
        self.element(self.inner.p)
    }

    /// x^k as a field element (k-th polynomial basis vector), k < r.
    pub fn basis_element(&self, k: u32) -> FieldElement {
        assert!(k < self.inner.r);
        self.element(self.inner.p.pow(k))
    }

    /// Smallest-index element of multiplicative order q-1.
    pub fn primitive_element(&self) -> FieldElement {
        let q = self.inner.q;
        'cand: for idx in 1..q {
            let mut pow = idx;
            for _ in 1..q - 1 {
                if pow == 1 {
                    continue 'cand;
                }
                pow = self.raw_mul(pow, idx);
            }
            if pow == 1 {
                return self.element(idx);
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    #[inline]
    pub(crate) fn raw_add(&self, a: u64, b: u64) -> u64 {
        let inner = &self.inner;
        if !inner.add_table.is_empty() {
            inner.add_table[(a * inner.q + b) as usize] as u64
        } else {
            inner.add_raw(a, b)
        }
    }

    #[inline]
    pub(crate) fn raw_mul(&self, a: u64, b: u64) -> u64 {
        let inner = &self.inner;
        if !inner.mul_table.is_empty() {
            inner.mul_table[(a * inner.q + b) as usize] as u64
        } else {
            inner.mul_raw(a, b)
        }
    }

    #[inline]
    pub(crate) fn raw_neg(&self, a: u64) -> u64 {
        self.inner.neg_raw(a)
    }

    pub(crate) fn raw_inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let inner = &self.inner;
        if !inner.inv_table.is_empty() {
            Ok(inner.inv_table[a as usize] as u64)
        } else {
            Ok(inner.inv_raw(a))
        }
    }
}

/// One element of a finite field, in canonical reduced form.
#[derive(Clone)]
pub struct FieldElement {
    spec: FieldSpec,
    idx: u16,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#GF({})", self.idx, self.spec.q())
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.idx == other.idx && self.spec == other.spec
    }
}
impl Eq for FieldElement {}

impl FieldElement {
    pub fn index(&self) -> u64 {
        self.idx as u64
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// Coefficient vector over GF(p), length r, constant term first.
    pub fn coeffs(&self) -> Vec<u16> {
        index_to_coeffs(self.idx as u64, self.spec.p(), self.spec.r())
    }

    pub fn is_zero(&self) -> bool {
        self.idx == 0
    }

    fn check_same(&self, other: &FieldElement) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self
            .spec
            .element(self.spec.raw_add(self.idx as u64, other.idx as u64)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check_same(other)?;
        Ok(self
            .spec
            .element(self.spec.raw_mul(self.idx as u64, other.idx as u64)))
    }

    pub fn neg(&self) -> FieldElement {
        self.spec.element(self.spec.raw_neg(self.idx as u64))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(self.spec.element(self.spec.raw_inv(self.idx as u64)?))
    }

    pub fn pow(&self, k: u64) -> FieldElement {
        self.spec.element(self.spec.inner.pow_raw(self.idx as u64, k))
    }
}

/// Packed, injective matrix encoding: row-major base-q digits in one 64-bit
/// word when q^(n^2) fits, otherwise a little-endian byte vector. Within one
/// group every element uses the same variant, so `Ord` is consistent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Encoded {
    Word(u64),
    Bytes(Box<[u8]>),
}

/// Square matrix over a finite field; entries are canonical element indices.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldSpec,
    n: usize,
    entries: Vec<u16>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat{}x{} over GF({}) [", self.n, self.n, self.field.q())?;
        for i in 0..self.n {
            writeln!(f, "  {:?}", &self.entries[i * self.n..(i + 1) * self.n])?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zero(field: &FieldSpec, n: usize) -> Mat {
        Mat {
            field: field.clone(),
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn identity(field: &FieldSpec, n: usize) -> Mat {
        let mut m = Mat::zero(field, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// diag(d1, ..., dn) from element indices.
    pub fn diagonal(field: &FieldSpec, diag: &[u64]) -> Mat {
        let n = diag.len();
        let mut m = Mat::zero(field, n);
        for (i, &d) in diag.iter().enumerate() {
            assert!(d < field.q());
            m.entries[i * n + i] = d as u16;
        }
        m
    }

    /// The fixed antidiagonal symplectic form: J[i][2n-1-i] = (-1)^i,
    /// +1 in the top-right corner.
    pub fn symplectic_form(field: &FieldSpec, half: usize) -> Mat {
        let n = 2 * half;
        let mut m = Mat::zero(field, n);
        let minus_one = field.minus_one().index() as u16;
        for i in 0..n {
            m.entries[i * n + (n - 1 - i)] = if i % 2 == 0 { 1 } else { minus_one };
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j] as u64
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        assert!(v < self.field.q());
        self.entries[i * self.n + j] = v as u16;
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::MixedFields);
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let n = self.n;
        let f = &self.field;
        let mut out = Mat::zero(f, n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.entries[k * n + j] as u64;
                    if b == 0 {
                        continue;
                    }
                    let cur = out.entries[i * n + j] as u64;
                    out.entries[i * n + j] = f.raw_add(cur, f.raw_mul(a, b)) as u16;
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = Mat::zero(&self.field, n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.entries[i * n + j];
            }
        }
        out
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> FieldElement {
        let n = self.n;
        let f = &self.field;
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut det = 1u64;
        for col in 0..n {
            let pivot = (col..n).find(|&row| a[row * n + col] != 0);
            let pivot = match pivot {
                Some(p) => p,
                None => return f.zero(),
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = f.raw_neg(det);
            }
            let pv = a[col * n + col];
            det = f.raw_mul(det, pv);
            let pv_inv = f.raw_inv(pv).expect("pivot nonzero");
            for row in col + 1..n {
                let factor = f.raw_mul(a[row * n + col], pv_inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let sub = f.raw_mul(factor, a[col * n + j]);
                    a[row * n + j] = f.raw_add(a[row * n + j], f.raw_neg(sub));
                }
            }
        }
        f.element(det)
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inv(&self) -> Result<Mat> {
        let n = self.n;
        let f = &self.field;
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut b: Vec<u64> = Mat::identity(f, n).entries.iter().map(|&e| e as u64).collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&row| a[row * n + col] != 0)
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    b.swap(pivot * n + j, col * n + j);
                }
            }
            let pv_inv = f.raw_inv(a[col * n + col])?;
            for j in 0..n {
                a[col * n + j] = f.raw_mul(a[col * n + j], pv_inv);
                b[col * n + j] = f.raw_mul(b[col * n + j], pv_inv);
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a[row * n + col];
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let s1 = f.raw_mul(factor, a[col * n + j]);
                    a[row * n + j] = f.raw_add(a[row * n + j], f.raw_neg(s1));
                    let s2 = f.raw_mul(factor, b[col * n + j]);
                    b[row * n + j] = f.raw_add(b[row * n + j], f.raw_neg(s2));
                }
            }
        }
        Ok(Mat {
            field: f.clone(),
            n,
            entries: b.iter().map(|&e| e as u16).collect(),
        })
    }

    /// True iff A^t J A = J for the fixed antidiagonal form of half-dimension
    /// `half`. Total on square matrices of size 2*half.
    pub fn symplectic_member(&self, half: usize) -> bool {
        if self.n != 2 * half {
            return false;
        }
        let j = Mat::symplectic_form(&self.field, half);
        let lhs = self
            .transpose()
            .mul(&j)
            .and_then(|m| m.mul(self))
            .expect("dimensions agree");
        lhs == j
    }

    pub fn encode(&self) -> Encoded {
        let q = self.field.q() as u128;
        // q^(n^2) <= 2^64 <=> n^2 * log2(q) <= 64; test by accumulation
        let mut fits = true;
        let mut cap: u128 = 1;
        for _ in 0..self.entries.len() {
            cap = cap.saturating_mul(q);
            if cap > u64::MAX as u128 + 1 {
                fits = false;
                break;
            }
        }
        if fits {
            let mut word: u64 = 0;
            for &e in self.entries.iter().rev() {
                word = word * self.field.q() + e as u64;
            }
            Encoded::Word(word)
        } else {
            let mut bytes = Vec::with_capacity(self.entries.len() * 2);
            for &e in &self.entries {
                bytes.extend_from_slice(&e.to_le_bytes());
            }
            Encoded::Bytes(bytes.into_boxed_slice())
        }
    }

    pub fn decode(field: &FieldSpec, n: usize, enc: &Encoded) -> Mat {
        let mut m = Mat::zero(field, n);
        match enc {
            Encoded::Word(w) => {
                let q = field.q();
                let mut x = *w;
                for i in 0..n * n {
                    m.entries[i] = (x % q) as u16;
                    x /= q;
                }
            }
            Encoded::Bytes(b) => {
                for i in 0..n * n {
                    m.entries[i] = u16::from_le_bytes([b[2 * i], b[2 * i + 1]]);
                }
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_and_gf4() {
        let f2 = FieldSpec::new(2, 1).unwrap();
        assert_eq!(f2.q(), 2);
        let f4 = FieldSpec::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        // omega * omega = omega + 1, forced by x^2+x+1
        let omega = f4.poly_gen();
        let sq = omega.mul(&omega).unwrap();
        assert_eq!(sq, f4.element(3)); // x+1 has coeffs (1,1) -> index 3
    }

    #[test]
    fn gf9_minus_one_is_nonsquare_mod_3() {
        // exhaustive squaring over GF(3) shows -1 is not a square, so x^2+1
        // is irreducible and the table entry is valid
        assert!((0..3u64).all(|a| (a * a) % 3 != 2));
        let f9 = FieldSpec::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn inv_in_gf7() {
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert_eq!(f7.element(3).inv().unwrap(), f7.element(5));
    }

    #[test]
    fn gf9_multiplicative_order() {
        let f9 = FieldSpec::new(3, 2).unwrap();
        let x = f9.poly_gen();
        assert_eq!(x.pow(8), f9.one());
        // x^2 = -1 under modulus x^2+1, so x has order 4, not 8
        assert_eq!(x.pow(4), f9.one());
        let g = f9.primitive_element();
        assert_eq!(g.pow(8), f9.one());
        assert!((1..8).all(|k| g.pow(k) != f9.one()));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldSpec::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(
            FieldSpec::new(2, 17),
            Err(Error::FieldSizeOutOfRange { .. })
        ));
        let f5 = FieldSpec::new(5, 1).unwrap();
        assert!(matches!(f5.zero().inv(), Err(Error::ZeroInverse)));
        let f7 = FieldSpec::new(7, 1).unwrap();
        assert!(matches!(
            f5.one().add(&f7.one()),
            Err(Error::MixedFields)
        ));
        assert!(matches!(
            Mat::identity(&f5, 2).mul(&Mat::identity(&f7, 2)),
            Err(Error::MixedFields)
        ));
        assert!(matches!(
            Mat::identity(&f5, 2).mul(&Mat::identity(&f5, 3)),
            Err(Error::DimensionMismatch(2, 3))
        ));
        let mut singular = Mat::zero(&f5, 2);
        singular.set(0, 0, 1);
        assert!(matches!(singular.inv(), Err(Error::SingularMatrix)));
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, r) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 3), (2, 4), (13, 1)] {
            let f = FieldSpec::new(p, r).unwrap();
            let q = f.q();
            if q > 16 && q != 13 {
                continue;
            }
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.raw_add(a, b), f.raw_add(b, a));
                    assert_eq!(f.raw_mul(a, b), f.raw_mul(b, a));
                    for c in 0..q {
                        assert_eq!(
                            f.raw_add(f.raw_add(a, b), c),
                            f.raw_add(a, f.raw_add(b, c))
                        );
                        assert_eq!(
                            f.raw_mul(f.raw_mul(a, b), c),
                            f.raw_mul(a, f.raw_mul(b, c))
                        );
                        assert_eq!(
                            f.raw_mul(a, f.raw_add(b, c)),
                            f.raw_add(f.raw_mul(a, b), f.raw_mul(a, c))
                        );
                    }
                }
                if a != 0 {
                    assert_eq!(f.raw_mul(a, f.raw_inv(a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn field_axioms_randomized_large() {
        // fields beyond the table limit exercise the polynomial path
        for (p, r) in [(2u64, 13u32), (3, 7), (251, 2)] {
            let f = FieldSpec::new(p, r).unwrap();
            let q = f.q();
            assert!(q > 256);
            let mut state = 0x12345678u64;
            let mut next = || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state % q
            };
            for _ in 0..200 {
                let (a, b, c) = (next(), next(), next());
                assert_eq!(f.raw_add(a, b), f.raw_add(b, a));
                assert_eq!(f.raw_mul(a, b), f.raw_mul(b, a));
                assert_eq!(
                    f.raw_mul(f.raw_mul(a, b), c),
                    f.raw_mul(a, f.raw_mul(b, c))
                );
                assert_eq!(
                    f.raw_mul(a, f.raw_add(b, c)),
                    f.raw_add(f.raw_mul(a, b), f.raw_mul(a, c))
                );
                if a != 0 {
                    assert_eq!(f.raw_mul(a, f.raw_inv(a).unwrap()), 1);
                }
                assert_eq!(f.raw_add(a, f.raw_neg(a)), 0);
            }
        }
    }

    #[test]
    fn det_examples() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        let id4 = Mat::identity(&f3, 4);
        assert_eq!(id4.det(), f3.one());
        let m1 = f3.minus_one().index();
        let d = Mat::diagonal(&f3, &[1, m1, m1, 1]);
        assert_eq!(d.det(), f3.one());
    }

    #[test]
    fn symplectic_examples() {
        let f3 = FieldSpec::new(3, 1).unwrap();
        assert!(Mat::identity(&f3, 4).symplectic_member(2));
        let m1 = f3.minus_one().index();
        assert!(Mat::diagonal(&f3, &[1, m1, m1, 1]).symplectic_member(2));
        assert!(!Mat::diagonal(&f3, &[2, 1, 1, 1]).symplectic_member(2));
    }

    #[test]
    fn j_squares_to_minus_identity() {
        for (p, r) in [(3u64, 1u32), (5, 1), (7, 1), (3, 2)] {
            let f = FieldSpec::new(p, r).unwrap();
            for half in [1usize, 2, 3] {
                let j = Mat::symplectic_form(&f, half);
                let j2 = j.mul(&j).unwrap();
                let mut minus_id = Mat::identity(&f, 2 * half);
                for i in 0..2 * half {
                    minus_id.set(i, i, f.minus_one().index());
                }
                assert_eq!(j2, minus_id);
            }
        }
    }

    proptest! {
        #[test]
        fn random_inverse_roundtrip_gf5(seed in 0u64..1000) {
            // 4x4 invertible matrices over GF(5): A * A^-1 = I
            let f5 = FieldSpec::new(5, 1).unwrap();
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 33) % 5
            };
            let mut m = Mat::zero(&f5, 4);
            for i in 0..4 {
                for j in 0..4 {
                    m.set(i, j, next());
                }
            }
            if !m.det().is_zero() {
                let inv = m.inv().unwrap();
                prop_assert_eq!(m.mul(&inv).unwrap(), Mat::identity(&f5, 4));
            }
        }

        #[test]
        fn encode_decode_roundtrip(q_idx in 0usize..4, seed in 0u64..500) {
            let specs = [(2u64,1u32),(3,1),(5,1),(3,2)];
            let (p, r) = specs[q_idx];
            let f = FieldSpec::new(p, r).unwrap();
            let q = f.q();
            let mut state = seed.wrapping_add(99).wrapping_mul(2862933555777941757);
            let mut next = || {
                state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                (state >> 33) % q
            };
            for n in [2usize, 4, 6] {
                let mut m = Mat::zero(&f, n);
                for i in 0..n {
                    for j in 0..n {
                        m.set(i, j, next());
                    }
                }
                let enc = m.encode();
                prop_assert_eq!(Mat::decode(&f, n, &enc), m);
            }
        }
    }
}
