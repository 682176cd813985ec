//! Graded-commutative algebras over the two-element field with polynomial and
//! square-zero generators: the ambient rings in which total Stiefel-Whitney
//! classes are expressed, the specific presentations used by each group
//! family, restriction maps between them, and Dickson products.
//!
//! Elements are sparse sets of monomials; a coefficient is either 0 or 1, so
//! presence in the set means 1 and addition is symmetric difference. A
//! presentation has at most six generators and a monomial packs its exponents
//! (16 bits each) with the total degree into one word, so the natural word
//! order is graded-lexicographic and multiplication is a lane-wise add.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on generators per presentation (packed-monomial layout).
pub const MAX_GENERATORS: usize = 6;

const LANE_BITS: u32 = 16;
const LANE_MASK: u128 = 0xFFFF;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenKind {
    Polynomial,
    SquareZero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub kind: GenKind,
}

/// A finitely presented graded algebra over Z/2: free on `generators`, modulo
/// the squares of the square-zero ones.
#[derive(Debug, PartialEq, Eq)]
pub struct RingPresentation {
    /// Identity string, used for caching and diagnostics.
    pub name: String,
    pub generators: Vec<Generator>,
    /// Mask with 0xFFFE in each square-zero lane: a monomial hits the ideal
    /// iff (packed & mask) != 0.
    square_zero_mask: u128,
}

impl RingPresentation {
    fn build(name: String, gens: Vec<Generator>) -> Result<Arc<RingPresentation>> {
        if gens.len() > MAX_GENERATORS {
            return Err(Error::InvalidPreset(format!(
                "{name}: {} generators exceeds the supported {MAX_GENERATORS}",
                gens.len()
            )));
        }
        debug_assert!(gens.iter().all(|g| g.degree >= 1));
        let mut mask = 0u128;
        for (i, g) in gens.iter().enumerate() {
            if g.kind == GenKind::SquareZero {
                mask |= 0xFFFE << lane_shift(i);
            }
        }
        Ok(Arc::new(RingPresentation {
            name,
            generators: gens,
            square_zero_mask: mask,
        }))
    }

    fn new(name: impl Into<String>, gens: Vec<(&str, u32, GenKind)>) -> Arc<RingPresentation> {
        let generators = gens
            .into_iter()
            .map(|(n, degree, kind)| Generator {
                name: n.to_string(),
                degree,
                kind,
            })
            .collect();
        RingPresentation::build(name.into(), generators).expect("within generator cap")
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }
}

#[inline]
fn lane_shift(gen_idx: usize) -> u32 {
    // generator 0 sits just below the degree lane so it is the most
    // significant exponent: word order = graded-lex
    ((MAX_GENERATORS - 1 - gen_idx) as u32) * LANE_BITS
}

const DEGREE_SHIFT: u32 = (MAX_GENERATORS as u32) * LANE_BITS;

/// Lowest bit of every lane above the least significant one; a carry crossing
/// a lane boundary flips exactly these bits of (a ^ b ^ (a+b)).
const BOUNDARY_MASK: u128 = {
    let mut m = 0u128;
    let mut k = 1;
    while k <= MAX_GENERATORS as u32 {
        m |= 1u128 << (k * LANE_BITS);
        k += 1;
    }
    m
};

/// High bit of each exponent lane; doubling a monomial with any of these set
/// would corrupt the neighbor lane.
const LANE_HIGH_MASK: u128 = {
    let mut m = 0u128;
    let mut k = 0;
    while k < MAX_GENERATORS as u32 {
        m |= 0x8000u128 << (k * LANE_BITS);
        k += 1;
    }
    m
};

/// Lane-wise add with cross-lane carry detection. Exponents beyond 16 bits
/// are outside the engine's scope, so a carry is a hard failure rather than
/// silent corruption.
#[inline]
fn lane_add(a: u128, b: u128) -> u128 {
    let sum = a.wrapping_add(b);
    assert!(
        (a ^ b ^ sum) & BOUNDARY_MASK == 0 && sum >= a,
        "monomial exponent overflow"
    );
    sum
}

/// One monomial, packed as [degree | e_0 | e_1 | ... | e_5].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Monomial(u128);

impl Monomial {
    fn from_exps(ring: &RingPresentation, exps: &[u16]) -> Monomial {
        let mut word = 0u128;
        let mut degree = 0u64;
        for (i, (&e, g)) in exps.iter().zip(&ring.generators).enumerate() {
            word |= (e as u128) << lane_shift(i);
            degree += e as u64 * g.degree as u64;
        }
        assert!(degree < (1 << 32), "monomial degree overflow");
        Monomial(word | (degree as u128) << DEGREE_SHIFT)
    }

    pub fn degree(&self) -> u32 {
        (self.0 >> DEGREE_SHIFT) as u32
    }

    pub fn exps(&self, n_gens: usize) -> Vec<u16> {
        (0..n_gens)
            .map(|i| ((self.0 >> lane_shift(i)) & LANE_MASK) as u16)
            .collect()
    }

    #[inline]
    fn try_mul(self, other: Monomial, ring: &RingPresentation) -> Option<Monomial> {
        let sum = lane_add(self.0, other.0);
        if sum & ring.square_zero_mask != 0 {
            None
        } else {
            Some(Monomial(sum))
        }
    }
}

/// Element of a presented ring: a finite set of admissible monomials.
#[derive(Clone)]
pub struct Element {
    ring: Arc<RingPresentation>,
    terms: BTreeSet<Monomial>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        *self.ring == *other.ring && self.terms == other.terms
    }
}
impl Eq for Element {}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl Element {
    pub fn zero(ring: &Arc<RingPresentation>) -> Element {
        Element {
            ring: ring.clone(),
            terms: BTreeSet::new(),
        }
    }

    pub fn one(ring: &Arc<RingPresentation>) -> Element {
        let mut terms = BTreeSet::new();
        terms.insert(Monomial(0));
        Element {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn generator(ring: &Arc<RingPresentation>, idx: usize) -> Element {
        assert!(idx < ring.generators.len());
        let mut exps = vec![0u16; ring.generators.len()];
        exps[idx] = 1;
        Element::from_monomials(ring, std::iter::once(exps))
    }

    pub fn generator_by_name(ring: &Arc<RingPresentation>, name: &str) -> Option<Element> {
        ring.gen_index(name).map(|i| Element::generator(ring, i))
    }

    /// Sum of the given monomials (duplicates cancel mod 2); monomials hitting
    /// a square-zero relation vanish.
    pub fn from_monomials<I>(ring: &Arc<RingPresentation>, monomials: I) -> Element
    where
        I: IntoIterator<Item = Vec<u16>>,
    {
        let mut terms = BTreeSet::new();
        for exps in monomials {
            let m = Monomial::from_exps(ring, &exps);
            if m.0 & ring.square_zero_mask != 0 {
                continue;
            }
            if !terms.insert(m) {
                terms.remove(&m);
            }
        }
        Element {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ring
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.contains(&Monomial(0))
    }

    pub fn top_degree(&self) -> u32 {
        self.terms.iter().next_back().map_or(0, |m| m.degree())
    }

    fn check_same(&self, other: &Element) -> Result<()> {
        if *self.ring == *other.ring {
            Ok(())
        } else {
            Err(Error::MixedPresentations)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let mut terms = self.terms.clone();
        for &m in &other.terms {
            if !terms.insert(m) {
                terms.remove(&m);
            }
        }
        Ok(Element {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check_same(other)?;
        let ring = &self.ring;
        // iterate the smaller factor outside
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        let mut terms = BTreeSet::new();
        for &a in small {
            for &b in large {
                if let Some(m) = a.try_mul(b, ring) {
                    if !terms.insert(m) {
                        terms.remove(&m);
                    }
                }
            }
        }
        Ok(Element {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Frobenius: in characteristic 2 the square of a sum is the sum of the
    /// squared monomials; monomials touching a square-zero generator vanish.
    pub fn square(&self) -> Element {
        let ring = &self.ring;
        let mut terms = BTreeSet::new();
        for &a in &self.terms {
            assert!(a.0 & LANE_HIGH_MASK == 0, "monomial exponent overflow");
            let doubled = Monomial(a.0 << 1);
            if doubled.0 & ring.square_zero_mask == 0 {
                terms.insert(doubled);
            }
        }
        Element {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, k: u64) -> Element {
        let mut acc = Element::one(&self.ring);
        if k == 0 {
            return acc;
        }
        let bits = 64 - k.leading_zeros();
        for i in (0..bits).rev() {
            acc = acc.square();
            if (k >> i) & 1 == 1 {
                acc = acc.mul(self).expect("same ring");
            }
        }
        acc
    }

    /// Drops every monomial of degree > d.
    pub fn truncate(&self, d: u32) -> Element {
        let cutoff = Monomial(((d as u128) + 1) << DEGREE_SHIFT);
        Element {
            ring: self.ring.clone(),
            terms: self.terms.range(..cutoff).cloned().collect(),
        }
    }

    /// The homogeneous component in degree d.
    pub fn graded_component(&self, d: u32) -> Element {
        let lo = Monomial((d as u128) << DEGREE_SHIFT);
        let hi = Monomial(((d as u128) + 1) << DEGREE_SHIFT);
        Element {
            ring: self.ring.clone(),
            terms: self.terms.range(lo..hi).cloned().collect(),
        }
    }

    /// Degrees with a nonzero component, ascending.
    pub fn support_degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.iter().map(|m| m.degree()).collect();
        ds.dedup();
        ds
    }

    /// Terms in rendering order: ascending degree, descending exponent
    /// vectors within a degree (so v1^2 prints before v1*v2 before v2^2).
    fn display_order(&self) -> Vec<Monomial> {
        let mut terms: Vec<Monomial> = self.terms.iter().copied().collect();
        terms.sort_by(|a, b| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| b.0.cmp(&a.0))
        });
        terms
    }

    /// Deterministic text rendering, e.g. "1 + t + s*t^2".
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let n = self.ring.generators.len();
        let mut parts = Vec::with_capacity(self.terms.len());
        for m in self.display_order() {
            if m.degree() == 0 {
                parts.push("1".to_string());
                continue;
            }
            let factors: Vec<String> = m
                .exps(n)
                .iter()
                .zip(&self.ring.generators)
                .filter(|(&e, _)| e > 0)
                .map(|(&e, g)| {
                    if e == 1 {
                        g.name.clone()
                    } else {
                        format!("{}^{}", g.name, e)
                    }
                })
                .collect();
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    /// JSON form: a list of monomials, each a list of [generator, exponent]
    /// pairs (empty list = the constant 1).
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.ring.generators.len();
        let monomials: Vec<serde_json::Value> = self
            .display_order()
            .into_iter()
            .map(|m| {
                let pairs: Vec<serde_json::Value> = m
                    .exps(n)
                    .iter()
                    .zip(&self.ring.generators)
                    .filter(|(&e, _)| e > 0)
                    .map(|(&e, g)| serde_json::json!([g.name, e]))
                    .collect();
                serde_json::Value::Array(pairs)
            })
            .collect();
        serde_json::Value::Array(monomials)
    }
}

/// The ring presentations appearing in the engine, by group family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// H*(C_n), n even: k[s,t]/(s^2) for n = 0 mod 4, k[v] for n = 2 mod 4.
    Cyclic { n: u32 },
    /// H*(C_n^k) by Kunneth.
    CyclicPower { n: u32, k: u32 },
    /// H*(SL(2,q)) for odd q: k[e] tensor k[b]/b^2, deg e = 4, deg b = 3.
    Sl2Odd,
    /// H*(X) for the block subgroup of Sp(2n,q): e_i (deg 4), b_i (deg 3).
    BlockX { n: u32 },
    /// H*(C_2^r) = k[v_1..v_r].
    ElemAbelian { r: u32 },
    /// Ambient ring of the SL(3,q) theorem; shape depends on q mod 4.
    Sl3Target { q: u32 },
}

pub fn preset(p: Preset) -> Result<Arc<RingPresentation>> {
    use GenKind::*;
    match p {
        Preset::Cyclic { n } => {
            if n % 2 != 0 || n == 0 {
                return Err(Error::InvalidPreset(format!(
                    "cyclic ring preset requires even n, got {n}"
                )));
            }
            if n % 4 == 0 {
                Ok(RingPresentation::new(
                    format!("cyclic({n})"),
                    vec![("s", 1, SquareZero), ("t", 2, Polynomial)],
                ))
            } else {
                Ok(RingPresentation::new(
                    format!("cyclic({n})"),
                    vec![("v", 1, Polynomial)],
                ))
            }
        }
        Preset::CyclicPower { n, k } => {
            if n % 2 != 0 || n == 0 || k == 0 {
                return Err(Error::InvalidPreset(format!(
                    "cyclic_power ring preset requires even n and k >= 1, got ({n},{k})"
                )));
            }
            let mut gens: Vec<Generator> = Vec::new();
            if n % 4 == 0 {
                for i in 1..=k {
                    gens.push(Generator {
                        name: format!("s{i}"),
                        degree: 1,
                        kind: SquareZero,
                    });
                }
                for i in 1..=k {
                    gens.push(Generator {
                        name: format!("t{i}"),
                        degree: 2,
                        kind: Polynomial,
                    });
                }
            } else {
                for i in 1..=k {
                    gens.push(Generator {
                        name: format!("v{i}"),
                        degree: 1,
                        kind: Polynomial,
                    });
                }
            }
            RingPresentation::build(format!("cyclic_power({n},{k})"), gens)
        }
        Preset::Sl2Odd => Ok(RingPresentation::new(
            "sl2_odd",
            vec![("e", 4, Polynomial), ("b", 3, SquareZero)],
        )),
        Preset::BlockX { n } => {
            if n == 0 || n > 3 {
                return Err(Error::InvalidPreset(format!(
                    "block_X rank {n} out of range"
                )));
            }
            let mut gens = Vec::new();
            for i in 1..=n {
                gens.push(Generator {
                    name: format!("e{i}"),
                    degree: 4,
                    kind: Polynomial,
                });
            }
            for i in 1..=n {
                gens.push(Generator {
                    name: format!("b{i}"),
                    degree: 3,
                    kind: SquareZero,
                });
            }
            RingPresentation::build(format!("block_X({n})"), gens)
        }
        Preset::ElemAbelian { r } => {
            if r == 0 || r > 6 {
                return Err(Error::InvalidPreset(format!(
                    "elem_abelian rank {r} out of range"
                )));
            }
            let gens = (1..=r)
                .map(|i| Generator {
                    name: format!("v{i}"),
                    degree: 1,
                    kind: Polynomial,
                })
                .collect();
            RingPresentation::build(format!("elem_abelian({r})"), gens)
        }
        Preset::Sl3Target { q } => {
            if q % 2 == 0 {
                return Err(Error::InvalidPreset(format!(
                    "sl3_target requires odd q, got {q}"
                )));
            }
            if q % 4 == 1 {
                Ok(RingPresentation::new(
                    format!("sl3_target({q})"),
                    vec![
                        ("s1", 1, SquareZero),
                        ("s2", 1, SquareZero),
                        ("t1", 2, Polynomial),
                        ("t2", 2, Polynomial),
                    ],
                ))
            } else {
                Ok(RingPresentation::new(
                    format!("sl3_target({q})"),
                    vec![("v1", 1, Polynomial), ("v2", 1, Polynomial)],
                ))
            }
        }
    }
}

/// Degree-preserving algebra map determined by generator images.
#[derive(Clone, Debug)]
pub struct RingMap {
    source: Arc<RingPresentation>,
    target: Arc<RingPresentation>,
    images: Vec<Element>,
    /// When every generator image is 0 or a single monomial, substitution is
    /// pure exponent arithmetic.
    monomial_images: Option<Vec<Option<Monomial>>>,
}

impl RingMap {
    /// Validates at construction: every nonzero image is homogeneous of the
    /// generator's degree, and images of square-zero generators square to 0.
    pub fn new(
        source: Arc<RingPresentation>,
        target: Arc<RingPresentation>,
        images: Vec<Element>,
    ) -> Result<RingMap> {
        if images.len() != source.generators.len() {
            return Err(Error::MalformedRingMap(format!(
                "{} images given for {} generators",
                images.len(),
                source.generators.len()
            )));
        }
        for (gen, img) in source.generators.iter().zip(&images) {
            if *img.ring != *target {
                return Err(Error::MalformedRingMap(format!(
                    "image of {} lives in the wrong ring",
                    gen.name
                )));
            }
            if !img.is_zero() && img.terms.iter().any(|m| m.degree() != gen.degree) {
                return Err(Error::MalformedRingMap(format!(
                    "image of {} (degree {}) is not homogeneous of that degree",
                    gen.name, gen.degree
                )));
            }
            if gen.kind == GenKind::SquareZero && !img.square().is_zero() {
                return Err(Error::MalformedRingMap(format!(
                    "image of square-zero generator {} does not square to zero",
                    gen.name
                )));
            }
        }
        let monomial_images = images
            .iter()
            .map(|img| match img.terms.len() {
                0 => Some(None),
                1 => Some(Some(*img.terms.iter().next().unwrap())),
                _ => None,
            })
            .collect::<Option<Vec<Option<Monomial>>>>();
        Ok(RingMap {
            source,
            target,
            images,
            monomial_images,
        })
    }

    pub fn source(&self) -> &Arc<RingPresentation> {
        &self.source
    }
    pub fn target(&self) -> &Arc<RingPresentation> {
        &self.target
    }

    /// Monomial-by-monomial substitution.
    pub fn apply(&self, a: &Element) -> Result<Element> {
        if *a.ring != *self.source {
            return Err(Error::MixedPresentations);
        }
        if let Some(mono_images) = &self.monomial_images {
            // fast path: every generator maps to 0 or one monomial, so each
            // input monomial maps to 0 or one output monomial
            let n = self.source.generators.len();
            let nt = self.target.generators.len();
            let mut terms = BTreeSet::new();
            'outer: for m in &a.terms {
                let exps = m.exps(n);
                let mut acc = Monomial(0);
                for (i, &e) in exps.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    match mono_images[i] {
                        None => continue 'outer, // generator maps to 0
                        Some(img) => {
                            // img^e: scale every exponent lane by e, checked
                            let scaled: Vec<u16> = img
                                .exps(nt)
                                .iter()
                                .map(|&x| {
                                    u16::try_from(x as u64 * e as u64)
                                        .expect("monomial exponent overflow")
                                })
                                .collect();
                            acc = Monomial(lane_add(
                                acc.0,
                                Monomial::from_exps(&self.target, &scaled).0,
                            ));
                        }
                    }
                }
                if acc.0 & self.target.square_zero_mask != 0 {
                    continue;
                }
                if !terms.insert(acc) {
                    terms.remove(&acc);
                }
            }
            return Ok(Element {
                ring: self.target.clone(),
                terms,
            });
        }
        let mut out = Element::zero(&self.target);
        for m in &a.terms {
            let exps = m.exps(self.source.generators.len());
            let mut term = Element::one(&self.target);
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&self.images[i].pow(e as u64))?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }
}

/// The full product over an r-dimensional space of degree-1 classes,
/// prod_{v in V} (1+v), computed through the linearized polynomial
/// f_r(x) = prod_{v in V} (x+v) and evaluated at x = 1. The graded pieces in
/// positive degree are the Dickson invariants, sitting in degrees 2^r - 2^i.
pub fn dickson_product(r: u32) -> Result<Element> {
    if r == 0 || r > 6 {
        return Err(Error::InvalidPreset(format!(
            "dickson rank {r} out of range"
        )));
    }
    let ring = preset(Preset::ElemAbelian { r })?;
    // f as a list of coefficients of x^(2^i); f_0(x) = x
    let mut coeffs: Vec<Element> = vec![Element::one(&ring)];
    for j in 0..r as usize {
        let vj = Element::generator(&ring, j);
        // f_{j+1}(x) = f_j(x)^2 + f_j(v_{j+1}) * f_j(x)
        let mut f_at_v = Element::zero(&ring);
        let mut v_pow = vj.clone(); // v^(2^i)
        for c in &coeffs {
            f_at_v = f_at_v.add(&c.mul(&v_pow)?)?;
            v_pow = v_pow.square();
        }
        let mut next: Vec<Element> = Vec::with_capacity(coeffs.len() + 1);
        for c in &coeffs {
            next.push(f_at_v.mul(c)?);
        }
        next.push(Element::zero(&ring));
        for (i, c) in coeffs.iter().enumerate() {
            let sq = c.square();
            next[i + 1] = next[i + 1].add(&sq)?;
        }
        coeffs = next;
    }
    // evaluate at x = 1: sum of all coefficients
    let mut total = Element::zero(&ring);
    for c in &coeffs {
        total = total.add(c)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elem_abelian(r: u32) -> Arc<RingPresentation> {
        preset(Preset::ElemAbelian { r }).unwrap()
    }

    #[test]
    fn preset_generator_lists() {
        let c4 = preset(Preset::Cyclic { n: 4 }).unwrap();
        assert_eq!(c4.generators.len(), 2);
        assert_eq!(c4.generators[0].name, "s");
        assert_eq!(c4.generators[0].kind, GenKind::SquareZero);
        assert_eq!(c4.generators[1].degree, 2);

        let c6 = preset(Preset::Cyclic { n: 6 }).unwrap();
        assert_eq!(c6.generators.len(), 1);
        assert_eq!(c6.generators[0].name, "v");

        let bx = preset(Preset::BlockX { n: 2 }).unwrap();
        let names: Vec<_> = bx.generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["e1", "e2", "b1", "b2"]);
        assert_eq!(bx.generators[0].degree, 4);
        assert_eq!(bx.generators[2].degree, 3);

        let ea = elem_abelian(3);
        assert_eq!(ea.generators.len(), 3);
        assert!(ea.generators.iter().all(|g| g.degree == 1));

        assert!(preset(Preset::Cyclic { n: 5 }).is_err());
        assert!(preset(Preset::CyclicPower { n: 4, k: 4 }).is_err()); // 8 gens
    }

    #[test]
    fn char2_squaring() {
        let sl2 = preset(Preset::Sl2Odd).unwrap();
        let e = Element::generator_by_name(&sl2, "e").unwrap();
        let one_plus_e = Element::one(&sl2).add(&e).unwrap();
        let sq = one_plus_e.mul(&one_plus_e).unwrap();
        let expected = Element::one(&sl2).add(&e.mul(&e).unwrap()).unwrap();
        assert_eq!(sq, expected);
        assert_eq!(sq, one_plus_e.square());

        let c4 = preset(Preset::Cyclic { n: 4 }).unwrap();
        let s = Element::generator_by_name(&c4, "s").unwrap();
        let one_plus_s = Element::one(&c4).add(&s).unwrap();
        assert!(one_plus_s.mul(&one_plus_s).unwrap().is_one());
        // b^2 = 0 in the sl2 ring
        let b = Element::generator_by_name(&sl2, "b").unwrap();
        assert!(b.mul(&b).unwrap().is_zero());
    }

    #[test]
    fn cube_matches_repeated_multiplication() {
        let ea = elem_abelian(2);
        let one = Element::one(&ea);
        let v1 = Element::generator(&ea, 0);
        let v2 = Element::generator(&ea, 1);
        let f = one.add(&v1).unwrap().add(&v2).unwrap();
        let cube = f.pow(3);
        let mut brute = Element::one(&ea);
        for _ in 0..3 {
            brute = brute.mul(&f).unwrap();
        }
        assert_eq!(cube, brute);
        assert!(!cube.graded_component(0).is_zero());
        assert_eq!(cube.top_degree(), 3);
        // trinomial coefficients mod 2: the cube is
        // 1 + v1 + v2 + v1^2 + v2^2 + v1^3 + v2^3 + v1^2 v2 + v1 v2^2
        assert_eq!(cube.term_count(), 9);
    }

    #[test]
    fn dickson_small_ranks() {
        let d1 = dickson_product(1).unwrap();
        let ea1 = elem_abelian(1);
        let v = Element::generator(&ea1, 0);
        assert_eq!(d1, Element::one(&ea1).add(&v).unwrap());

        // r = 2: 1 + (v1^2 + v1 v2 + v2^2) + (v1^2 v2 + v1 v2^2)
        let d2 = dickson_product(2).unwrap();
        let ea2 = elem_abelian(2);
        let v1 = Element::generator(&ea2, 0);
        let v2 = Element::generator(&ea2, 1);
        let deg2 = v1
            .square()
            .add(&v1.mul(&v2).unwrap())
            .unwrap()
            .add(&v2.square())
            .unwrap();
        let deg3 = v1
            .square()
            .mul(&v2)
            .unwrap()
            .add(&v1.mul(&v2.square()).unwrap())
            .unwrap();
        let expected = Element::one(&ea2).add(&deg2).unwrap().add(&deg3).unwrap();
        assert_eq!(d2, expected);

        // r = 3: nonzero graded pieces exactly at degrees {0, 4, 6, 7}
        let d3 = dickson_product(3).unwrap();
        assert_eq!(d3.support_degrees(), vec![0, 4, 6, 7]);
    }

    #[test]
    fn dickson_matches_brute_force() {
        for r in 1..=4u32 {
            let ring = elem_abelian(r);
            let mut brute = Element::one(&ring);
            for mask in 0..(1u32 << r) {
                let mut v = Element::zero(&ring);
                for i in 0..r {
                    if mask & (1 << i) != 0 {
                        v = v.add(&Element::generator(&ring, i as usize)).unwrap();
                    }
                }
                let factor = Element::one(&ring).add(&v).unwrap();
                brute = brute.mul(&factor).unwrap();
            }
            assert_eq!(dickson_product(r).unwrap(), brute, "rank {r}");
            let expected_degrees: std::collections::BTreeSet<u32> = std::iter::once(0)
                .chain((0..r).map(|i| (1u32 << r) - (1u32 << i)))
                .collect();
            let support: std::collections::BTreeSet<u32> =
                brute.support_degrees().into_iter().collect();
            assert_eq!(support, expected_degrees);
        }
    }

    #[test]
    fn ring_map_validation_and_application() {
        let sl2 = preset(Preset::Sl2Odd).unwrap();
        let ea1 = elem_abelian(1);
        let v = Element::generator(&ea1, 0);
        let map = RingMap::new(
            sl2.clone(),
            ea1.clone(),
            vec![v.pow(4), Element::zero(&ea1)],
        )
        .unwrap();

        // (1+e)^r maps to (1+v^4)^r = (1+v)^(4r)
        let e = Element::generator_by_name(&sl2, "e").unwrap();
        let one_plus_e = Element::one(&sl2).add(&e).unwrap();
        for r in 0..5u64 {
            let img = map.apply(&one_plus_e.pow(r)).unwrap();
            let direct = Element::one(&ea1).add(&v).unwrap().pow(4 * r);
            assert_eq!(img, direct);
        }
        assert!(map.apply(&Element::one(&sl2)).unwrap().is_one());
        // b-divisible terms die under the map
        let b = Element::generator_by_name(&sl2, "b").unwrap();
        assert!(map.apply(&b.mul(&e).unwrap()).unwrap().is_zero());

        // s -> v is not a valid map: v^2 != 0 in k[v]
        let c4 = preset(Preset::Cyclic { n: 4 }).unwrap();
        let bad = RingMap::new(c4.clone(), ea1.clone(), vec![v.clone(), v.square()]);
        assert!(matches!(bad, Err(Error::MalformedRingMap(_))));

        // degree check
        let bad2 = RingMap::new(
            sl2.clone(),
            ea1.clone(),
            vec![v.pow(3), Element::zero(&ea1)],
        );
        assert!(matches!(bad2, Err(Error::MalformedRingMap(_))));
    }

    #[test]
    fn non_monomial_image_map() {
        // t -> v1^2 + v1 v2 exercises the generic substitution path
        let c4 = preset(Preset::Cyclic { n: 4 }).unwrap();
        let ea2 = elem_abelian(2);
        let v1 = Element::generator(&ea2, 0);
        let v2 = Element::generator(&ea2, 1);
        let img = v1.square().add(&v1.mul(&v2).unwrap()).unwrap();
        let map = RingMap::new(c4.clone(), ea2.clone(), vec![Element::zero(&ea2), img.clone()])
            .unwrap();
        let t = Element::generator_by_name(&c4, "t").unwrap();
        let x = Element::one(&c4).add(&t.pow(2)).unwrap();
        assert_eq!(
            map.apply(&x).unwrap(),
            Element::one(&ea2).add(&img.pow(2)).unwrap()
        );
    }

    #[test]
    fn sl3_target_maps() {
        // q = 1 mod 4: t_i -> v_i^2 turns the t-product into the v-product
        // squared
        let src = preset(Preset::Sl3Target { q: 5 }).unwrap();
        let ea2 = elem_abelian(2);
        let v1 = Element::generator(&ea2, 0);
        let v2 = Element::generator(&ea2, 1);
        let zero = Element::zero(&ea2);
        let map = RingMap::new(
            src.clone(),
            ea2.clone(),
            vec![zero.clone(), zero, v1.square(), v2.square()],
        )
        .unwrap();
        let t1 = Element::generator_by_name(&src, "t1").unwrap();
        let t2 = Element::generator_by_name(&src, "t2").unwrap();
        let one = Element::one(&src);
        let prod = one
            .add(&t1)
            .unwrap()
            .mul(&one.add(&t2).unwrap())
            .unwrap()
            .mul(&one.add(&t1.add(&t2).unwrap()).unwrap())
            .unwrap();
        let img = map.apply(&prod).unwrap();
        let onev = Element::one(&ea2);
        let vprod = onev
            .add(&v1)
            .unwrap()
            .mul(&onev.add(&v2).unwrap())
            .unwrap()
            .mul(&onev.add(&v1.add(&v2).unwrap()).unwrap())
            .unwrap();
        assert_eq!(img, vprod.square());
    }

    #[test]
    fn rendering() {
        let bx = preset(Preset::BlockX { n: 2 }).unwrap();
        let e1 = Element::generator_by_name(&bx, "e1").unwrap();
        let e2 = Element::generator_by_name(&bx, "e2").unwrap();
        let x = Element::one(&bx)
            .add(&e1)
            .unwrap()
            .add(&e1.mul(&e2.square()).unwrap())
            .unwrap();
        assert_eq!(x.render(), "1 + e1 + e1*e2^2");
        assert_eq!(Element::zero(&bx).render(), "0");
        let js = serde_json::to_string(&x.to_json()).unwrap();
        assert_eq!(js, r#"[[],[["e1",1]],[["e1",1],["e2",2]]]"#);
        // within a fixed degree, earlier generators print first
        let ea2 = elem_abelian(2);
        let v1 = Element::generator(&ea2, 0);
        let v2 = Element::generator(&ea2, 1);
        let quad = v1
            .square()
            .add(&v1.mul(&v2).unwrap())
            .unwrap()
            .add(&v2.square())
            .unwrap();
        assert_eq!(quad.render(), "v1^2 + v1*v2 + v2^2");
    }

    proptest! {
        #[test]
        fn mul_assoc_comm_and_add_involution(seed in 0u64..300) {
            let ring = preset(Preset::BlockX { n: 2 }).unwrap();
            let mut state = seed.wrapping_mul(0x9E3779B97F4A7C15).wrapping_add(1);
            let mut next = |bound: u64| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                state % bound
            };
            let mut rand_elem = || {
                let count = next(4) + 1;
                let monos: Vec<Vec<u16>> = (0..count)
                    .map(|_| (0..4).map(|_| next(3) as u16).collect())
                    .collect();
                Element::from_monomials(&ring, monos)
            };
            let a = rand_elem();
            let b = rand_elem();
            let c = rand_elem();
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            let one = Element::one(&ring);
            prop_assert_eq!(a.mul(&one).unwrap(), a.clone());
            prop_assert!(a.add(&a).unwrap().is_zero());
            // Frobenius structural identity
            prop_assert_eq!(a.square(), a.mul(&a).unwrap());
        }
    }
}
