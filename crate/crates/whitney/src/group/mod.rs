//! Group construction and enumeration: cyclic groups and the matrix families
//! SL(2,q), SL(3,q), Sp(4,q), Sp(6,q), with conjugacy classes, power maps and
//! the named subgroups used by the restriction oracles.

mod subgroups;

pub use subgroups::{Structure, SubgroupEmbedding, SubgroupName};

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Encoded, FieldSpec, Mat};

/// Default enumeration budget: covers SL(2,q) up to q = 181, SL(3,q) up to
/// q = 7 and Sp(4,q) up to q = 5; every Sp(6,q) is refused.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GroupSpec {
    Cyclic { n: u32 },
    CyclicPower { n: u32, k: u32 },
    Sl2 { q: u32 },
    Sl3 { q: u32 },
    Sp4 { q: u32 },
    Sp6 { q: u32 },
}

impl GroupSpec {
    pub fn order(&self) -> u64 {
        match *self {
            GroupSpec::Cyclic { n } => n as u64,
            GroupSpec::CyclicPower { n, k } => (n as u64).pow(k),
            GroupSpec::Sl2 { q } => {
                let q = q as u64;
                q * (q * q - 1)
            }
            GroupSpec::Sl3 { q } => {
                let q = q as u64;
                q.pow(3) * (q * q - 1) * (q.pow(3) - 1)
            }
            GroupSpec::Sp4 { q } => {
                let q = q as u64;
                q.pow(4) * (q * q - 1) * (q.pow(4) - 1)
            }
            GroupSpec::Sp6 { q } => {
                let q = q as u64;
                q.pow(9) * (q * q - 1) * (q.pow(4) - 1) * (q.pow(6) - 1)
            }
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            GroupSpec::Cyclic { .. } => "cyclic",
            GroupSpec::CyclicPower { .. } => "cyclic_power",
            GroupSpec::Sl2 { .. } => "sl2",
            GroupSpec::Sl3 { .. } => "sl3",
            GroupSpec::Sp4 { .. } => "sp4",
            GroupSpec::Sp6 { .. } => "sp6",
        }
    }

    pub fn q(&self) -> Option<u32> {
        match *self {
            GroupSpec::Sl2 { q } | GroupSpec::Sl3 { q } | GroupSpec::Sp4 { q } | GroupSpec::Sp6 { q } => {
                Some(q)
            }
            _ => None,
        }
    }

    pub fn matrix_dim(&self) -> Option<usize> {
        match self {
            GroupSpec::Sl2 { .. } => Some(2),
            GroupSpec::Sl3 { .. } => Some(3),
            GroupSpec::Sp4 { .. } => Some(4),
            GroupSpec::Sp6 { .. } => Some(6),
            _ => None,
        }
    }

    /// Half-dimension n for Sp(2n,q).
    pub fn symplectic_half(&self) -> Option<usize> {
        match self {
            GroupSpec::Sp4 { .. } => Some(2),
            GroupSpec::Sp6 { .. } => Some(3),
            _ => None,
        }
    }
}

/// (p, r) with q = p^r, or an error if q is not a prime power.
pub fn factor_prime_power(q: u32) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::FieldSizeOutOfRange { q: q as u64 });
    }
    let mut p = 2u64;
    while p * p <= q as u64 {
        if q as u64 % p == 0 {
            let mut x = q as u64;
            let mut r = 0;
            while x % p == 0 {
                x /= p;
                r += 1;
            }
            if x != 1 {
                return Err(Error::NotPrime(q as u64));
            }
            return Ok((p, r));
        }
        p += 1;
    }
    Ok((q as u64, 1))
}

/// Distinguished element indices located at build time.
#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct Distinguished {
    pub identity: u32,
    pub minus_identity: Option<u32>,
    pub g1: Option<u32>,
    pub g2: Option<u32>,
    pub a1: Option<u32>,
    pub n1: Option<u32>,
    /// Cyclic generator.
    pub generator: Option<u32>,
}

enum Repr {
    Cyclic { n: u64 },
    CyclicPower { n: u64, k: u32 },
    Matrix { field: FieldSpec, dim: usize },
}

/// Fully enumerated group with class data.
pub struct GroupData {
    spec: GroupSpec,
    repr: Repr,
    elements: Vec<Encoded>,
    index: HashMap<Encoded, u32>,
    gens: Vec<u32>,
    class_of: Vec<u32>,
    class_reps: Vec<u32>,
    class_sizes: Vec<u64>,
    class_elements: Vec<Vec<u32>>,
    inverse_class: Vec<u32>,
    rep_orders: Vec<u64>,
    distinguished: Distinguished,
    exponent: u64,
}

impl std::fmt::Debug for GroupData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GroupData({:?}, order {}, {} classes)",
            self.spec,
            self.order(),
            self.class_count()
        )
    }
}

impl GroupData {
    pub fn build(spec: GroupSpec) -> Result<GroupData> {
        GroupData::build_with_budget(spec, DEFAULT_BUDGET)
    }

    pub fn build_with_budget(spec: GroupSpec, budget: u64) -> Result<GroupData> {
        let order = spec.order();
        if order > budget {
            return Err(Error::BudgetExceeded { order, budget });
        }
        let mut g = match spec {
            GroupSpec::Cyclic { n } => Self::build_cyclic(spec, n as u64, 1),
            GroupSpec::CyclicPower { n, k } => Self::build_cyclic(spec, n as u64, k),
            _ => Self::build_matrix(spec)?,
        };
        g.compute_classes();
        g.locate_distinguished()?;
        Ok(g)
    }

    fn build_cyclic(spec: GroupSpec, n: u64, k: u32) -> GroupData {
        assert!(n >= 1 && k >= 1);
        let order = n.pow(k);
        let elements: Vec<Encoded> = (0..order).map(Encoded::Word).collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        // unit vectors in each coordinate
        let gens = (0..k).map(|i| n.pow(i) as u32).collect();
        GroupData {
            spec,
            repr: if k == 1 {
                Repr::Cyclic { n }
            } else {
                Repr::CyclicPower { n, k }
            },
            elements,
            index,
            gens,
            class_of: Vec::new(),
            class_reps: Vec::new(),
            class_sizes: Vec::new(),
            class_elements: Vec::new(),
            inverse_class: Vec::new(),
            rep_orders: Vec::new(),
            distinguished: Distinguished::default(),
            exponent: 0,
        }
    }

    fn build_matrix(spec: GroupSpec) -> Result<GroupData> {
        let q = spec.q().expect("matrix family");
        let (p, r) = factor_prime_power(q)?;
        let field = FieldSpec::new(p, r)?;
        let dim = spec.matrix_dim().expect("matrix family");
        let gen_mats = generator_matrices(&spec, &field, dim);
        for g in &gen_mats {
            match spec {
                GroupSpec::Sp4 { .. } | GroupSpec::Sp6 { .. } => {
                    assert!(
                        g.symplectic_member(dim / 2),
                        "generator fails the symplectic form"
                    );
                }
                _ => assert_eq!(g.det(), field.one(), "generator is not unimodular"),
            }
        }

        let expected = spec.order();
        let id = Mat::identity(&field, dim);
        let mut elements = vec![id.encode()];
        let mut index: HashMap<Encoded, u32> = HashMap::with_capacity(expected as usize * 2);
        index.insert(elements[0].clone(), 0);
        let mut queue: VecDeque<u32> = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            let m = Mat::decode(&field, dim, &elements[i as usize]);
            for g in &gen_mats {
                let prod = m.mul(g)?;
                let enc = prod.encode();
                if let std::collections::hash_map::Entry::Vacant(slot) = index.entry(enc.clone()) {
                    let idx = elements.len() as u32;
                    elements.push(enc);
                    slot.insert(idx);
                    queue.push_back(idx);
                    if elements.len() as u64 > expected {
                        return Err(Error::GenerationFailure {
                            found: elements.len() as u64,
                            expected,
                        });
                    }
                }
            }
        }
        if elements.len() as u64 != expected {
            return Err(Error::GenerationFailure {
                found: elements.len() as u64,
                expected,
            });
        }
        let gens = gen_mats
            .iter()
            .map(|g| index[&g.encode()])
            .collect();
        Ok(GroupData {
            spec,
            repr: Repr::Matrix { field, dim },
            elements,
            index,
            gens,
            class_of: Vec::new(),
            class_reps: Vec::new(),
            class_sizes: Vec::new(),
            class_elements: Vec::new(),
            inverse_class: Vec::new(),
            rep_orders: Vec::new(),
            distinguished: Distinguished::default(),
            exponent: 0,
        })
    }

    /// Orbit partition under conjugation by the generators, then classes are
    /// re-indexed by ascending minimal element encoding so the numbering is
    /// independent of discovery order.
    fn compute_classes(&mut self) {
        let order = self.elements.len();
        let abelian = !matches!(self.repr, Repr::Matrix { .. });
        let mut class_of = vec![u32::MAX; order];
        let mut classes: Vec<Vec<u32>> = Vec::new();

        if abelian {
            class_of = (0..order as u32).collect();
            classes = (0..order as u32).map(|i| vec![i]).collect();
        } else {
            let gen_pairs: Vec<(u32, u32)> =
                self.gens.iter().map(|&g| (g, self.inv(g))).collect();
            for start in 0..order as u32 {
                if class_of[start as usize] != u32::MAX {
                    continue;
                }
                let cls = classes.len() as u32;
                let mut orbit = vec![start];
                class_of[start as usize] = cls;
                let mut head = 0;
                while head < orbit.len() {
                    let x = orbit[head];
                    head += 1;
                    for &(g, ginv) in &gen_pairs {
                        let y = self.mul(self.mul(g, x), ginv);
                        if class_of[y as usize] == u32::MAX {
                            class_of[y as usize] = cls;
                            orbit.push(y);
                        }
                    }
                }
                orbit.sort_unstable();
                classes.push(orbit);
            }
        }

        // canonical order: by the minimal encoding occurring in the class
        let mut keyed: Vec<(Encoded, Vec<u32>)> = classes
            .into_iter()
            .map(|cls| {
                let min_enc = cls
                    .iter()
                    .map(|&i| &self.elements[i as usize])
                    .min()
                    .unwrap()
                    .clone();
                (min_enc, cls)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));

        let mut reps = Vec::with_capacity(keyed.len());
        let mut sizes = Vec::with_capacity(keyed.len());
        let mut class_elements = Vec::with_capacity(keyed.len());
        for (new_idx, (min_enc, cls)) in keyed.iter().enumerate() {
            for &e in cls {
                class_of[e as usize] = new_idx as u32;
            }
            reps.push(self.index[min_enc]);
            sizes.push(cls.len() as u64);
            class_elements.push(cls.clone());
        }

        self.class_of = class_of;
        self.class_reps = reps;
        self.class_sizes = sizes;
        self.class_elements = class_elements;

        self.rep_orders = self
            .class_reps
            .iter()
            .map(|&r| self.element_order(r))
            .collect();
        self.exponent = self.rep_orders.iter().fold(1u64, |acc, &o| acc.lcm(&o));
        self.inverse_class = self
            .class_reps
            .iter()
            .map(|&r| self.class_of[self.inv(r) as usize])
            .collect();
    }

    fn locate_distinguished(&mut self) -> Result<()> {
        let mut d = Distinguished {
            identity: 0,
            ..Default::default()
        };
        let find = |m: &Mat| -> Option<u32> { self.index.get(&m.encode()).copied() };
        match (&self.spec, &self.repr) {
            (GroupSpec::Cyclic { n }, _) => {
                if *n > 1 {
                    d.generator = Some(1);
                }
                if *n % 2 == 0 {
                    d.minus_identity = Some(*n / 2);
                }
            }
            (GroupSpec::CyclicPower { .. }, _) => {}
            (spec, Repr::Matrix { field, dim }) => {
                let p = field.p();
                let m1 = field.minus_one().index();
                if p != 2 {
                    let minus_id = Mat::diagonal(field, &vec![m1; *dim]);
                    // -1 has determinant (-1)^dim, so it only lies in SL(n,q)
                    // for even n
                    if dim % 2 == 0 {
                        d.minus_identity = Some(
                            find(&minus_id)
                                .ok_or_else(|| Error::MissingDistinguished("-1".into()))?,
                        );
                    }
                }
                match spec {
                    GroupSpec::Sl3 { .. } if p != 2 => {
                        let a1 = Mat::diagonal(field, &[m1, m1, 1]);
                        d.a1 = Some(
                            find(&a1).ok_or_else(|| Error::MissingDistinguished("a1".into()))?,
                        );
                    }
                    GroupSpec::Sp4 { .. } if p != 2 => {
                        let g1 = Mat::diagonal(field, &[1, m1, m1, 1]);
                        d.g1 = Some(
                            find(&g1).ok_or_else(|| Error::MissingDistinguished("g1".into()))?,
                        );
                    }
                    GroupSpec::Sp6 { .. } if p != 2 => {
                        let g1 = Mat::diagonal(field, &[1, 1, m1, m1, 1, 1]);
                        let g2 = Mat::diagonal(field, &[1, m1, m1, m1, m1, 1]);
                        d.g1 = Some(
                            find(&g1).ok_or_else(|| Error::MissingDistinguished("g1".into()))?,
                        );
                        d.g2 = Some(
                            find(&g2).ok_or_else(|| Error::MissingDistinguished("g2".into()))?,
                        );
                    }
                    GroupSpec::Sl2 { .. } if p == 2 => {
                        let mut n1 = Mat::identity(field, 2);
                        n1.set(0, 1, 1);
                        d.n1 = Some(
                            find(&n1).ok_or_else(|| Error::MissingDistinguished("n1".into()))?,
                        );
                    }
                    _ => {}
                }
            }
            _ => unreachable!("cyclic specs use cyclic representations"),
        }
        self.distinguished = d;
        Ok(())
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }
    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }
    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }
    pub fn class_reps(&self) -> &[u32] {
        &self.class_reps
    }
    pub fn class_elements(&self, class: usize) -> &[u32] {
        &self.class_elements[class]
    }
    pub fn rep_orders(&self) -> &[u64] {
        &self.rep_orders
    }
    pub fn inverse_class(&self, class: usize) -> u32 {
        self.inverse_class[class]
    }
    pub fn exponent(&self) -> u64 {
        self.exponent
    }
    pub fn distinguished(&self) -> &Distinguished {
        &self.distinguished
    }
    pub fn generators(&self) -> &[u32] {
        &self.gens
    }
    pub fn encoding(&self, el: u32) -> &Encoded {
        &self.elements[el as usize]
    }
    pub fn element_index(&self, enc: &Encoded) -> Option<u32> {
        self.index.get(enc).copied()
    }
    pub fn identity_class(&self) -> u32 {
        self.class_of[0]
    }

    pub fn field(&self) -> Option<&FieldSpec> {
        match &self.repr {
            Repr::Matrix { field, .. } => Some(field),
            _ => None,
        }
    }

    pub fn matrix(&self, el: u32) -> Option<Mat> {
        match &self.repr {
            Repr::Matrix { field, dim } => {
                Some(Mat::decode(field, *dim, &self.elements[el as usize]))
            }
            _ => None,
        }
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.repr {
            Repr::Cyclic { n } => ((a as u64 + b as u64) % n) as u32,
            Repr::CyclicPower { n, k } => {
                let mut out = 0u64;
                let mut mulr = 1u64;
                let (mut x, mut y) = (a as u64, b as u64);
                for _ in 0..*k {
                    out += ((x % n + y % n) % n) * mulr;
                    mulr *= n;
                    x /= n;
                    y /= n;
                }
                out as u32
            }
            Repr::Matrix { field, dim } => {
                let ma = Mat::decode(field, *dim, &self.elements[a as usize]);
                let mb = Mat::decode(field, *dim, &self.elements[b as usize]);
                let enc = ma.mul(&mb).expect("same field and dimension").encode();
                self.index[&enc]
            }
        }
    }

    pub fn inv(&self, a: u32) -> u32 {
        match &self.repr {
            Repr::Cyclic { n } => ((n - a as u64) % n) as u32,
            Repr::CyclicPower { n, k } => {
                let mut out = 0u64;
                let mut mulr = 1u64;
                let mut x = a as u64;
                for _ in 0..*k {
                    out += ((n - x % n) % n) * mulr;
                    mulr *= n;
                    x /= n;
                }
                out as u32
            }
            Repr::Matrix { field, dim } => {
                let m = Mat::decode(field, *dim, &self.elements[a as usize]);
                let enc = m.inv().expect("group elements are invertible").encode();
                self.index[&enc]
            }
        }
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 0u32; // identity index
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn element_order(&self, a: u32) -> u64 {
        match &self.repr {
            Repr::Cyclic { n } => n / n.gcd(&(a as u64)),
            Repr::CyclicPower { n, k } => {
                let mut ord = 1u64;
                let mut x = a as u64;
                for _ in 0..*k {
                    ord = ord.lcm(&(n / n.gcd(&(x % n))));
                    x /= n;
                }
                ord
            }
            Repr::Matrix { .. } => {
                let mut ord = 1u64;
                let mut cur = a;
                while cur != 0 {
                    cur = self.mul(cur, a);
                    ord += 1;
                }
                ord
            }
        }
    }

    pub fn class_of(&self, el: u32) -> u32 {
        self.class_of[el as usize]
    }

    /// Class of the k-th power of (any element of) a class.
    pub fn power_map(&self, class: u32, k: u64) -> u32 {
        let rep = self.class_reps[class as usize];
        self.class_of[self.pow(rep, k) as usize]
    }

    /// Classes of rep^0, rep^1, ..., rep^(ord-1) for a class representative.
    pub fn power_class_walk(&self, class: u32) -> Vec<u32> {
        let rep = self.class_reps[class as usize];
        let ord = self.rep_orders[class as usize];
        let mut walk = Vec::with_capacity(ord as usize);
        let mut cur = 0u32;
        for _ in 0..ord {
            walk.push(self.class_of[cur as usize]);
            cur = self.mul(cur, rep);
        }
        walk
    }

    /// Number of solutions of g^2 = 1 (identity included).
    pub fn involution_count(&self) -> u64 {
        (0..self.class_count())
            .filter(|&c| self.rep_orders[c] <= 2)
            .map(|c| self.class_sizes[c])
            .sum()
    }
}

const CACHE_MAGIC: &[u8; 4] = b"WHGD";
const CACHE_VERSION: u32 = 1;

impl GroupData {
    /// Binary cache image: everything `build` produces, so a load skips both
    /// enumeration and class computation.
    pub fn to_cache_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&CACHE_VERSION.to_le_bytes());
        let spec_json = serde_json::to_vec(&self.spec).expect("spec serializes");
        out.extend_from_slice(&(spec_json.len() as u32).to_le_bytes());
        out.extend_from_slice(&spec_json);

        out.extend_from_slice(&(self.elements.len() as u64).to_le_bytes());
        let all_words = self.elements.iter().all(|e| matches!(e, Encoded::Word(_)));
        out.push(u8::from(all_words));
        for e in &self.elements {
            match e {
                Encoded::Word(w) if all_words => out.extend_from_slice(&w.to_le_bytes()),
                Encoded::Word(w) => {
                    out.extend_from_slice(&8u32.to_le_bytes());
                    out.extend_from_slice(&w.to_le_bytes());
                }
                Encoded::Bytes(b) => {
                    out.extend_from_slice(&(b.len() as u32).to_le_bytes());
                    out.extend_from_slice(b);
                }
            }
        }
        let push_u32s = |out: &mut Vec<u8>, xs: &[u32]| {
            out.extend_from_slice(&(xs.len() as u64).to_le_bytes());
            for x in xs {
                out.extend_from_slice(&x.to_le_bytes());
            }
        };
        let push_u64s = |out: &mut Vec<u8>, xs: &[u64]| {
            out.extend_from_slice(&(xs.len() as u64).to_le_bytes());
            for x in xs {
                out.extend_from_slice(&x.to_le_bytes());
            }
        };
        push_u32s(&mut out, &self.gens);
        push_u32s(&mut out, &self.class_of);
        push_u32s(&mut out, &self.class_reps);
        push_u64s(&mut out, &self.class_sizes);
        push_u32s(&mut out, &self.inverse_class);
        push_u64s(&mut out, &self.rep_orders);
        out.extend_from_slice(&self.exponent.to_le_bytes());
        let dist_json = serde_json::to_vec(&self.distinguished).expect("serializes");
        out.extend_from_slice(&(dist_json.len() as u32).to_le_bytes());
        out.extend_from_slice(&dist_json);
        out
    }

    pub fn from_cache_bytes(bytes: &[u8]) -> Result<GroupData> {
        let bad = || Error::ImportRejected("corrupt group cache".into());
        let mut pos = 0usize;
        let take = |pos: &mut usize, n: usize| -> Result<&[u8]> {
            let s = bytes.get(*pos..*pos + n).ok_or_else(bad)?;
            *pos += n;
            Ok(s)
        };
        let read_u32 = |pos: &mut usize| -> Result<u32> {
            Ok(u32::from_le_bytes(take(pos, 4)?.try_into().unwrap()))
        };
        let read_u64 = |pos: &mut usize| -> Result<u64> {
            Ok(u64::from_le_bytes(take(pos, 8)?.try_into().unwrap()))
        };
        if take(&mut pos, 4)? != CACHE_MAGIC {
            return Err(bad());
        }
        if read_u32(&mut pos)? != CACHE_VERSION {
            return Err(Error::ImportRejected("group cache version mismatch".into()));
        }
        let spec_len = read_u32(&mut pos)? as usize;
        let spec: GroupSpec = serde_json::from_slice(take(&mut pos, spec_len)?)
            .map_err(|_| bad())?;

        let count = read_u64(&mut pos)? as usize;
        let all_words = take(&mut pos, 1)?[0] == 1;
        let mut elements = Vec::with_capacity(count);
        for _ in 0..count {
            if all_words {
                elements.push(Encoded::Word(read_u64(&mut pos)?));
            } else {
                let len = read_u32(&mut pos)? as usize;
                if len == 8 {
                    elements.push(Encoded::Word(read_u64(&mut pos)?));
                } else {
                    elements.push(Encoded::Bytes(take(&mut pos, len)?.into()));
                }
            }
        }
        let read_u32s = |pos: &mut usize| -> Result<Vec<u32>> {
            let n = read_u64(pos)? as usize;
            (0..n).map(|_| read_u32(pos)).collect()
        };
        let read_u64s = |pos: &mut usize| -> Result<Vec<u64>> {
            let n = read_u64(pos)? as usize;
            (0..n).map(|_| read_u64(pos)).collect()
        };
        let gens = read_u32s(&mut pos)?;
        let class_of = read_u32s(&mut pos)?;
        let class_reps = read_u32s(&mut pos)?;
        let class_sizes = read_u64s(&mut pos)?;
        let inverse_class = read_u32s(&mut pos)?;
        let rep_orders = read_u64s(&mut pos)?;
        let exponent = read_u64(&mut pos)?;
        let dist_len = read_u32(&mut pos)? as usize;
        let distinguished: Distinguished =
            serde_json::from_slice(take(&mut pos, dist_len)?).map_err(|_| bad())?;

        if spec.order() != count as u64
            || class_of.len() != count
            || class_sizes.iter().sum::<u64>() != count as u64
        {
            return Err(bad());
        }
        let index: HashMap<Encoded, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as u32))
            .collect();
        if index.len() != count {
            return Err(bad());
        }
        let mut class_elements: Vec<Vec<u32>> = vec![Vec::new(); class_reps.len()];
        for (el, &cls) in class_of.iter().enumerate() {
            class_elements
                .get_mut(cls as usize)
                .ok_or_else(bad)?
                .push(el as u32);
        }
        let repr = match spec {
            GroupSpec::Cyclic { n } => Repr::Cyclic { n: n as u64 },
            GroupSpec::CyclicPower { n, k } => Repr::CyclicPower { n: n as u64, k },
            _ => {
                let (p, r) = factor_prime_power(spec.q().unwrap())?;
                Repr::Matrix {
                    field: FieldSpec::new(p, r)?,
                    dim: spec.matrix_dim().unwrap(),
                }
            }
        };
        Ok(GroupData {
            spec,
            repr,
            elements,
            index,
            gens,
            class_of,
            class_reps,
            class_sizes,
            class_elements,
            inverse_class,
            rep_orders,
            distinguished,
            exponent,
        })
    }
}

/// Standard generating sets: elementary transvections E_ij(x^k) for SL(n,q),
/// symplectic transvections for Sp(2n,q). Correctness is certified by the
/// order count after closure.
fn generator_matrices(spec: &GroupSpec, field: &FieldSpec, dim: usize) -> Vec<Mat> {
    let r = field.r();
    let basis: Vec<u64> = (0..r).map(|k| field.basis_element(k).index()).collect();
    let mut gens = Vec::new();
    match spec {
        GroupSpec::Sl2 { .. } | GroupSpec::Sl3 { .. } => {
            for i in 0..dim {
                for j in 0..dim {
                    if i == j {
                        continue;
                    }
                    for &a in &basis {
                        let mut m = Mat::identity(field, dim);
                        m.set(i, j, a);
                        gens.push(m);
                    }
                }
            }
        }
        GroupSpec::Sp4 { .. } | GroupSpec::Sp6 { .. } => {
            // directions: e_i and e_i + c e_j (i < j, c != 0)
            let mut dirs: Vec<Vec<u64>> = Vec::new();
            for i in 0..dim {
                let mut v = vec![0u64; dim];
                v[i] = 1;
                dirs.push(v);
            }
            for i in 0..dim {
                for j in i + 1..dim {
                    for c in 1..field.q() {
                        let mut v = vec![0u64; dim];
                        v[i] = 1;
                        v[j] = c;
                        dirs.push(v);
                    }
                }
            }
            let j_form = Mat::symplectic_form(field, dim / 2);
            for v in &dirs {
                for &lambda in &basis {
                    gens.push(symplectic_transvection(field, &j_form, v, lambda));
                }
            }
        }
        _ => unreachable!(),
    }
    gens
}

/// T(x) = x + lambda * (x^t J v) v, i.e. T = I - lambda * v (v^t J).
fn symplectic_transvection(field: &FieldSpec, j: &Mat, v: &[u64], lambda: u64) -> Mat {
    let dim = v.len();
    // w = v^t J as a row vector
    let mut w = vec![0u64; dim];
    for (col, w_entry) in w.iter_mut().enumerate() {
        let mut acc = 0u64;
        for (row, &vr) in v.iter().enumerate() {
            acc = field.raw_add(acc, field.raw_mul(vr, j.get(row, col)));
        }
        *w_entry = acc;
    }
    let mut t = Mat::identity(field, dim);
    for i in 0..dim {
        if v[i] == 0 {
            continue;
        }
        for (col, &wc) in w.iter().enumerate() {
            let delta = field.raw_neg(field.raw_mul(lambda, field.raw_mul(v[i], wc)));
            let cur = t.get(i, col);
            t.set(i, col, field.raw_add(cur, delta));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_formulas() {
        assert_eq!(GroupSpec::Sl2 { q: 3 }.order(), 24);
        assert_eq!(GroupSpec::Sl2 { q: 5 }.order(), 120);
        assert_eq!(GroupSpec::Sl3 { q: 3 }.order(), 5616);
        assert_eq!(GroupSpec::Sp4 { q: 3 }.order(), 51_840);
        assert_eq!(GroupSpec::Sp6 { q: 3 }.order(), 9_170_703_360);
        assert_eq!(GroupSpec::Cyclic { n: 4 }.order(), 4);
        assert_eq!(GroupSpec::CyclicPower { n: 4, k: 2 }.order(), 16);
    }

    #[test]
    fn budget_refusal() {
        let err = GroupData::build(GroupSpec::Sp6 { q: 3 }).unwrap_err();
        match err {
            Error::BudgetExceeded { order, budget } => {
                assert_eq!(order, 9_170_703_360);
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn cyclic_structure() {
        let g = GroupData::build(GroupSpec::Cyclic { n: 4 }).unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.class_count(), 4);
        assert_eq!(g.mul(1, 3), 0);
        assert_eq!(g.inv(1), 3);
        assert_eq!(g.element_order(1), 4);
        assert_eq!(g.distinguished().generator, Some(1));
        assert_eq!(g.distinguished().minus_identity, Some(2));

        let c6 = GroupData::build(GroupSpec::Cyclic { n: 6 }).unwrap();
        assert_eq!(c6.class_count(), 6);
        // power map: class of g^1 squared is class of g^2
        let c8 = GroupData::build(GroupSpec::Cyclic { n: 8 }).unwrap();
        assert_eq!(c8.power_map(1, 2), 2);
        assert_eq!(c8.power_map(1, 1), 1);
    }

    #[test]
    fn sl2_3_classes() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 3 }).unwrap();
        assert_eq!(g.order(), 24);
        assert_eq!(g.class_count(), 7); // q + 4 for odd q
        assert_eq!(g.class_sizes().iter().sum::<u64>(), 24);
        assert!(g.class_sizes().iter().all(|s| 24 % s == 0));
        // (-1)^2 = 1
        let minus = g.distinguished().minus_identity.unwrap();
        assert_eq!(g.power_map(g.class_of(minus), 2), g.identity_class());
        assert_eq!(g.involution_count(), 2);
    }

    #[test]
    fn sl2_5_classes() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 5 }).unwrap();
        assert_eq!(g.order(), 120);
        assert_eq!(g.class_count(), 9);
    }

    #[test]
    fn sl2_even_builds() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 4 }).unwrap();
        assert_eq!(g.order(), 60);
        assert_eq!(g.class_count(), 5); // q + 1 for even q
        assert!(g.distinguished().n1.is_some());
        assert!(g.distinguished().minus_identity.is_none());
    }

    #[test]
    fn sl3_3_builds() {
        let g = GroupData::build(GroupSpec::Sl3 { q: 3 }).unwrap();
        assert_eq!(g.order(), 5616);
        let a1 = g.distinguished().a1.unwrap();
        assert_eq!(g.element_order(a1), 2);
        assert!(g.distinguished().minus_identity.is_none()); // det(-1) = -1 in odd dim
    }

    #[test]
    fn class_of_is_conjugation_invariant() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 5 }).unwrap();
        // sample conjugators deterministically
        for x in (0..g.order() as u32).step_by(17) {
            let xinv = g.inv(x);
            for el in (0..g.order() as u32).step_by(29) {
                let conj = g.mul(g.mul(x, el), xinv);
                assert_eq!(g.class_of(el), g.class_of(conj));
            }
        }
    }

    #[test]
    fn power_map_representative_independent() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 3 }).unwrap();
        for c in 0..g.class_count() as u32 {
            for k in [2u64, 3, 5] {
                let expect = g.power_map(c, k);
                // three members of the class besides the rep
                for &el in g.class_elements(c as usize).iter().take(3) {
                    assert_eq!(g.class_of(g.pow(el, k)), expect);
                }
            }
        }
    }

    #[test]
    fn cache_roundtrip() {
        for spec in [GroupSpec::Sl2 { q: 3 }, GroupSpec::Cyclic { n: 6 }] {
            let g = GroupData::build(spec).unwrap();
            let bytes = g.to_cache_bytes();
            let back = GroupData::from_cache_bytes(&bytes).unwrap();
            assert_eq!(back.order(), g.order());
            assert_eq!(back.class_count(), g.class_count());
            assert_eq!(back.class_of, g.class_of);
            assert_eq!(back.exponent(), g.exponent());
            assert_eq!(back.mul(1, 2), g.mul(1, 2));
        }
        assert!(GroupData::from_cache_bytes(b"garbage").is_err());
    }

    #[test]
    fn distinguished_membership() {
        let g = GroupData::build(GroupSpec::Sp4 { q: 3 }).unwrap();
        assert_eq!(g.order(), 51_840);
        let g1 = g.distinguished().g1.unwrap();
        let m = g.matrix(g1).unwrap();
        assert!(m.symplectic_member(2));
        let minus = g.distinguished().minus_identity.unwrap();
        assert!(g.matrix(minus).unwrap().symplectic_member(2));
        assert_eq!(g.element_order(minus), 2);
    }
}
