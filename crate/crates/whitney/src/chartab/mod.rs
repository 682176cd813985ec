//! Exact character tables: the Dixon-Schneider computation, Frobenius-Schur
//! indicators, orthogonality checks, restriction to subgroups, decomposition
//! over abelian subgroups, and a JSON interchange format for externally
//! computed tables.

mod dixon;
pub mod io;

pub use dixon::dixon_table;

use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{GroupData, GroupSpec, Structure, SubgroupEmbedding};

/// Distinguished-class markers carried by character tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Identity,
    MinusIdentity,
    G1,
    G2,
    A1,
    N1,
}

impl Tag {
    pub fn as_str(&self) -> &'static str {
        match self {
            Tag::Identity => "identity",
            Tag::MinusIdentity => "minus_identity",
            Tag::G1 => "g1",
            Tag::G2 => "g2",
            Tag::A1 => "a1",
            Tag::N1 => "n1",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassInfo {
    pub size: u64,
    pub rep_order: u64,
    pub tags: Vec<Tag>,
}

#[derive(Clone, Debug)]
pub struct Irrep {
    pub degree: i64,
    /// Frobenius-Schur indicator: +1 orthogonal, -1 symplectic, 0 complex.
    pub fs: i8,
    pub values: Vec<Cyclotomic>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableSource {
    Computed,
    Imported,
}

/// Exact character table. Standalone: everything needed by the theorem
/// evaluators is carried here, so imported tables (for groups too large to
/// enumerate) flow through the same paths as computed ones.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub group: GroupSpec,
    pub order: u64,
    pub exponent: u64,
    pub classes: Vec<ClassInfo>,
    pub irreps: Vec<Irrep>,
    pub identity_class: usize,
    pub source: TableSource,
}

/// A class function on the table's group, one value per class.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    pub values: Vec<Cyclotomic>,
}

/// Values of a restricted class function, one per subgroup element, in the
/// subgroup's canonical element order.
#[derive(Clone, Debug)]
pub struct SubgroupFunction {
    pub values: Vec<Cyclotomic>,
}

/// One constituent line of an orthogonality report.
#[derive(Clone, Debug)]
pub struct Constituent {
    pub row: usize,
    pub multiplicity: i64,
    pub fs: i8,
}

#[derive(Clone, Debug)]
pub struct OrthogonalityReport {
    pub orthogonal: bool,
    pub real_valued: bool,
    pub constituents: Vec<Constituent>,
    /// Why the input fails, when it does.
    pub reason: Option<String>,
}

impl CharacterTable {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_by_tag(&self, tag: Tag) -> Option<usize> {
        self.classes.iter().position(|c| c.tags.contains(&tag))
    }

    pub fn row(&self, i: usize) -> Result<ClassFunction> {
        let irrep = self
            .irreps
            .get(i)
            .ok_or_else(|| Error::SelectorOutOfRange(format!("row {i}")))?;
        Ok(ClassFunction {
            values: irrep.values.clone(),
        })
    }

    /// The double f + f of a row; the standard way to make a symplectic
    /// irreducible orthogonal.
    pub fn doubled_row(&self, i: usize) -> Result<ClassFunction> {
        let f = self.row(i)?;
        Ok(f.scaled(2))
    }

    pub fn sum_of_rows(&self, parts: &[(usize, u64)]) -> Result<ClassFunction> {
        let mut values = vec![Cyclotomic::zero(); self.class_count()];
        for &(row, mult) in parts {
            let r = self.row(row)?;
            for (acc, v) in values.iter_mut().zip(&r.values) {
                *acc = acc.add(&v.scale(mult as i64));
            }
        }
        Ok(ClassFunction { values })
    }

    pub fn regular_character(&self) -> ClassFunction {
        let parts: Vec<(usize, u64)> = self
            .irreps
            .iter()
            .enumerate()
            .map(|(i, ir)| (i, ir.degree as u64))
            .collect();
        self.sum_of_rows(&parts).expect("rows in range")
    }

    pub fn degree_of(&self, f: &ClassFunction) -> Result<i64> {
        f.values[self.identity_class]
            .as_i64()
            .ok_or(Error::IrrationalValue {
                tag: "identity".into(),
            })
    }

    /// Integer character value at a tagged class.
    pub fn value_at_tag(&self, f: &ClassFunction, tag: Tag) -> Result<i64> {
        let c = self
            .class_by_tag(tag)
            .ok_or_else(|| Error::MissingClassTag(tag.as_str().into()))?;
        f.values[c].as_i64().ok_or(Error::IrrationalValue {
            tag: tag.as_str().into(),
        })
    }

    /// omega(-1) for an irreducible row, when the group has a central
    /// involution.
    pub fn central_sign(&self, row: usize) -> Result<i8> {
        let minus = self
            .class_by_tag(Tag::MinusIdentity)
            .ok_or_else(|| Error::MissingClassTag("minus_identity".into()))?;
        let irrep = &self.irreps[row];
        let v = irrep.values[minus]
            .as_i64()
            .ok_or(Error::IrrationalValue {
                tag: "minus_identity".into(),
            })?;
        if v == irrep.degree {
            Ok(1)
        } else if v == -irrep.degree {
            Ok(-1)
        } else {
            Err(Error::TableValidation(format!(
                "central involution acts with non-scalar character value {v} on row {row}"
            )))
        }
    }

    /// <f, row_i> = (1/|G|) sum_c |C_c| f(c) conj(chi_i(c)), demanded exact.
    pub fn inner_with_row(&self, f: &ClassFunction, i: usize) -> Result<i64> {
        let mut sum = Cyclotomic::zero();
        for (c, info) in self.classes.iter().enumerate() {
            let term = f.values[c]
                .mul(&self.irreps[i].values[c].conj())
                .scale(info.size as i64);
            sum = sum.add(&term);
        }
        let s = sum.as_i64().ok_or_else(|| Error::NotACharacter {
            reason: format!("inner product with row {i} is irrational"),
        })?;
        if s % self.order as i64 != 0 {
            return Err(Error::NotACharacter {
                reason: format!(
                    "inner product with row {i} is {s}/{} (not an integer)",
                    self.order
                ),
            });
        }
        Ok(s / self.order as i64)
    }

    /// Decomposes f over the irreducible rows; errors unless every
    /// multiplicity is a nonnegative integer.
    pub fn decompose(&self, f: &ClassFunction) -> Result<Vec<i64>> {
        if f.values.len() != self.class_count() {
            return Err(Error::NotACharacter {
                reason: "value count does not match class count".into(),
            });
        }
        let mut mults = Vec::with_capacity(self.irreps.len());
        for i in 0..self.irreps.len() {
            let m = self.inner_with_row(f, i)?;
            if m < 0 {
                return Err(Error::NotACharacter {
                    reason: format!("negative multiplicity {m} on row {i}"),
                });
            }
            mults.push(m);
        }
        // the multiplicities must reproduce f (f could have a part outside
        // the span of the rows only if the table were corrupt)
        let mut recombined = vec![Cyclotomic::zero(); self.class_count()];
        for (i, &m) in mults.iter().enumerate() {
            if m == 0 {
                continue;
            }
            for (acc, v) in recombined.iter_mut().zip(&self.irreps[i].values) {
                *acc = acc.add(&v.scale(m));
            }
        }
        if recombined != f.values {
            return Err(Error::NotACharacter {
                reason: "function is not an integer combination of the rows".into(),
            });
        }
        Ok(mults)
    }

    /// Character-level orthogonality: real-valued, symplectic constituents
    /// with even multiplicity, complex constituents paired with conjugates.
    pub fn orthogonality_report(&self, f: &ClassFunction) -> Result<OrthogonalityReport> {
        let mults = self.decompose(f)?;
        let constituents: Vec<Constituent> = mults
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(row, &m)| Constituent {
                row,
                multiplicity: m,
                fs: self.irreps[row].fs,
            })
            .collect();

        let mut reason = None;
        let real_valued = f.values.iter().all(|v| v.is_real());
        if !real_valued {
            reason = Some("not real-valued".into());
        } else {
            for c in &constituents {
                if c.fs == -1 && c.multiplicity % 2 != 0 {
                    reason = Some(format!(
                        "symplectic constituent (row {}) has odd multiplicity {}",
                        c.row, c.multiplicity
                    ));
                    break;
                }
            }
        }
        // real-valuedness already forces conjugate pairing of fs = 0
        // constituents; check structurally as well
        if reason.is_none() {
            for c in &constituents {
                if c.fs == 0 {
                    match self.conjugate_row(c.row) {
                        Some(conj_row) if mults[conj_row] == c.multiplicity => {}
                        _ => {
                            reason = Some(format!(
                                "complex constituent (row {}) not paired with its conjugate",
                                c.row
                            ));
                            break;
                        }
                    }
                }
            }
        }
        Ok(OrthogonalityReport {
            orthogonal: reason.is_none(),
            real_valued,
            constituents,
            reason,
        })
    }

    pub fn is_orthogonal(&self, f: &ClassFunction) -> Result<bool> {
        Ok(self.orthogonality_report(f)?.orthogonal)
    }

    /// Index of the complex-conjugate row. Always present in a complete
    /// table; None can only happen for a defective import.
    pub fn conjugate_row(&self, i: usize) -> Option<usize> {
        let conj: Vec<Cyclotomic> = self.irreps[i].values.iter().map(|v| v.conj()).collect();
        self.irreps.iter().position(|ir| ir.values == conj)
    }

    /// Frobenius-Schur indicator of a row.
    pub fn fs_indicator(&self, i: usize) -> i8 {
        self.irreps[i].fs
    }

    /// Counts of fs = +1 / 0 / -1 rows.
    pub fn fs_census(&self) -> (usize, usize, usize) {
        let plus = self.irreps.iter().filter(|ir| ir.fs == 1).count();
        let zero = self.irreps.iter().filter(|ir| ir.fs == 0).count();
        let minus = self.irreps.iter().filter(|ir| ir.fs == -1).count();
        (plus, zero, minus)
    }

    pub fn involution_count(&self) -> u64 {
        self.classes
            .iter()
            .filter(|c| c.rep_order <= 2)
            .map(|c| c.size)
            .sum()
    }

    /// The four standing table invariants: row orthogonality, column
    /// orthogonality, sum of squared degrees, and the Frobenius-Schur
    /// involution-count identity.
    pub fn verify(&self) -> Result<()> {
        let k = self.class_count();
        if self.irreps.len() != k {
            return Err(Error::TableValidation(format!(
                "{} rows vs {} classes",
                self.irreps.len(),
                k
            )));
        }
        let order = self.order as i64;
        if self.classes.iter().map(|c| c.size).sum::<u64>() != self.order {
            return Err(Error::TableValidation(
                "class sizes do not sum to the group order".into(),
            ));
        }
        // row orthogonality
        for i in 0..k {
            for j in i..k {
                let mut sum = Cyclotomic::zero();
                for (c, info) in self.classes.iter().enumerate() {
                    let term = self.irreps[i].values[c]
                        .mul(&self.irreps[j].values[c].conj())
                        .scale(info.size as i64);
                    sum = sum.add(&term);
                }
                let expected = if i == j { order } else { 0 };
                if sum.as_i64() != Some(expected) {
                    return Err(Error::TableValidation(format!(
                        "row orthogonality fails for rows ({i},{j}): got {sum:?}"
                    )));
                }
            }
        }
        // column orthogonality
        for c in 0..k {
            for d in c..k {
                let mut sum = Cyclotomic::zero();
                for ir in &self.irreps {
                    sum = sum.add(&ir.values[c].mul(&ir.values[d].conj()));
                }
                let expected = if c == d {
                    order / self.classes[c].size as i64
                } else {
                    0
                };
                if sum.as_i64() != Some(expected) {
                    return Err(Error::TableValidation(format!(
                        "column orthogonality fails for classes ({c},{d})"
                    )));
                }
            }
        }
        // degrees
        let degree_sq: i64 = self.irreps.iter().map(|ir| ir.degree * ir.degree).sum();
        if degree_sq != order {
            return Err(Error::TableValidation(format!(
                "sum of squared degrees {degree_sq} != order {order}"
            )));
        }
        // FS involution identity
        let fs_sum: i64 = self
            .irreps
            .iter()
            .map(|ir| ir.fs as i64 * ir.degree)
            .sum();
        if fs_sum != self.involution_count() as i64 {
            return Err(Error::TableValidation(format!(
                "FS identity fails: sum fs*deg = {fs_sum}, involutions = {}",
                self.involution_count()
            )));
        }
        Ok(())
    }
}

impl ClassFunction {
    pub fn scaled(&self, k: i64) -> ClassFunction {
        ClassFunction {
            values: self.values.iter().map(|v| v.scale(k)).collect(),
        }
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        ClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// Stable fingerprint of the values, for report provenance.
    pub fn fingerprint(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |x: i64| {
            for b in x.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for v in &self.values {
            let l = v.conductor();
            eat(l as i64);
            for c in v.lifted_coeffs(l) {
                eat(c);
            }
        }
        format!("{h:016x}")
    }
}

/// Restriction along a subgroup embedding: the value at a subgroup element is
/// the value at the parent class containing it.
pub fn restrict(g: &GroupData, f: &ClassFunction, e: &SubgroupEmbedding) -> SubgroupFunction {
    SubgroupFunction {
        values: e
            .elements
            .iter()
            .map(|&el| f.values[g.class_of(el) as usize].clone())
            .collect(),
    }
}

/// Multiplicities of the linear characters of an elementary-abelian or cyclic
/// subgroup in a restricted character, by Fourier inversion. For a C_2^k the
/// result is indexed by character mask (bit i set = nontrivial on basis
/// element i); for a cyclic group by the character's exponent.
pub fn abelian_decompose(e: &SubgroupEmbedding, f: &SubgroupFunction) -> Result<Vec<i64>> {
    let n = e.elements.len() as i64;
    match &e.structure {
        Structure::ElemAbelian2 { basis } => {
            let k = basis.len();
            let mut mults = Vec::with_capacity(1 << k);
            for s in 0..1u32 << k {
                let mut sum = Cyclotomic::zero();
                for (t, v) in f.values.iter().enumerate() {
                    let sign = if (s & t as u32).count_ones() % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    sum = sum.add(&v.scale(sign));
                }
                mults.push(decompose_entry(sum, n, s as u64)?);
            }
            Ok(mults)
        }
        Structure::Cyclic { order, .. } => {
            let m = *order as u32;
            let mut mults = Vec::with_capacity(m as usize);
            for j in 0..m as u64 {
                let mut sum = Cyclotomic::zero();
                for (i, v) in f.values.iter().enumerate() {
                    // conj(chi_j(g^i)) = zeta^(-ij)
                    let e_pow = (j * (m as u64 - i as u64 % m as u64)) % m as u64;
                    sum = sum.add(&v.mul(&Cyclotomic::root_of_unity(m, e_pow)));
                }
                mults.push(decompose_entry(sum, n, j)?);
            }
            Ok(mults)
        }
        _ => Err(Error::NotACharacter {
            reason: "decomposition requires an elementary-abelian or cyclic subgroup".into(),
        }),
    }
}

fn decompose_entry(sum: Cyclotomic, n: i64, which: u64) -> Result<i64> {
    let s = sum.as_i64().ok_or_else(|| Error::NotACharacter {
        reason: format!("multiplicity {which} is irrational"),
    })?;
    if s % n != 0 || s < 0 {
        return Err(Error::NotACharacter {
            reason: format!("multiplicity {which} is {s}/{n}"),
        });
    }
    Ok(s / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupData, GroupSpec, SubgroupName};

    fn sl2_3() -> (GroupData, CharacterTable) {
        let g = GroupData::build(GroupSpec::Sl2 { q: 3 }).unwrap();
        let t = dixon_table(&g).unwrap();
        (g, t)
    }

    #[test]
    fn sl2_2_is_s3() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 2 }).unwrap();
        let t = dixon_table(&g).unwrap();
        let mut degs: Vec<i64> = t.irreps.iter().map(|ir| ir.degree).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 2]);
        assert!(t.irreps.iter().all(|ir| ir.fs == 1));
        // standard character vanishes on the transposition class (= class of n1)
        let n1 = t.class_by_tag(Tag::N1).unwrap();
        let std_row = t.irreps.iter().position(|ir| ir.degree == 2).unwrap();
        assert_eq!(t.irreps[std_row].values[n1].as_i64(), Some(0));
    }

    #[test]
    fn sl2_3_table_shape() {
        let (_, t) = sl2_3();
        let mut degs: Vec<i64> = t.irreps.iter().map(|ir| ir.degree).collect();
        degs.sort();
        assert_eq!(degs, vec![1, 1, 1, 2, 2, 2, 3]);
        t.verify().unwrap();
        // the quaternionic constituent: degree 2, rational values, fs = -1
        let quat: Vec<usize> = (0..7).filter(|&i| t.irreps[i].fs == -1).collect();
        assert_eq!(quat.len(), 1);
        assert_eq!(t.irreps[quat[0]].degree, 2);
        assert!(t.irreps[quat[0]].values.iter().all(|v| v.is_rational()));
        let (plus, zero, minus) = t.fs_census();
        assert_eq!((plus, zero, minus), (2, 4, 1));
    }

    #[test]
    fn cyclic4_table() {
        let g = GroupData::build(GroupSpec::Cyclic { n: 4 }).unwrap();
        let t = dixon_table(&g).unwrap();
        assert!(t.irreps.iter().all(|ir| ir.degree == 1));
        t.verify().unwrap();
        // values are powers of zeta_4 on the generator class
        let gen_class = 1usize;
        let i = Cyclotomic::root_of_unity(4, 1);
        let count_i = t
            .irreps
            .iter()
            .filter(|ir| ir.values[gen_class] == i)
            .count();
        assert_eq!(count_i, 1);
    }

    #[test]
    fn steinberg_restriction_to_center() {
        let (g, t) = sl2_3();
        let st = t.irreps.iter().position(|ir| ir.degree == 3).unwrap();
        let z = g.subgroup(SubgroupName::Center).unwrap();
        let f = t.row(st).unwrap();
        let res = restrict(&g, &f, &z);
        assert_eq!(res.values[0].as_i64(), Some(3));
        assert_eq!(res.values[1].as_i64(), Some(3)); // omega(-1) = +1
        let mults = abelian_decompose(&z, &res).unwrap();
        assert_eq!(mults, vec![3, 0]);
    }

    #[test]
    fn quaternionic_double_on_center() {
        let (g, t) = sl2_3();
        let quat = t.irreps.iter().position(|ir| ir.fs == -1).unwrap();
        let f = t.doubled_row(quat).unwrap();
        let z = g.subgroup(SubgroupName::Center).unwrap();
        let res = restrict(&g, &f, &z);
        assert_eq!(res.values[0].as_i64(), Some(4));
        assert_eq!(res.values[1].as_i64(), Some(-4));
        let mults = abelian_decompose(&z, &res).unwrap();
        assert_eq!(mults, vec![0, 4]); // 4 copies of the sign character
    }

    #[test]
    fn orthogonality_criterion() {
        let (_, t) = sl2_3();
        let quat = t.irreps.iter().position(|ir| ir.fs == -1).unwrap();
        let single = t.row(quat).unwrap();
        let report = t.orthogonality_report(&single).unwrap();
        assert!(!report.orthogonal);
        let double = t.doubled_row(quat).unwrap();
        assert!(t.is_orthogonal(&double).unwrap());
        // an fs = 0 character alone is not orthogonal
        let complex = t.irreps.iter().position(|ir| ir.fs == 0).unwrap();
        assert!(!t.is_orthogonal(&t.row(complex).unwrap()).unwrap());
        // but together with its conjugate it is
        let cr = t.conjugate_row(complex).unwrap();
        let pair = t.sum_of_rows(&[(complex, 1), (cr, 1)]).unwrap();
        assert!(t.is_orthogonal(&pair).unwrap());
        // trivial + trivial
        let triv = t
            .irreps
            .iter()
            .position(|ir| ir.degree == 1 && ir.fs == 1)
            .unwrap();
        assert!(t
            .is_orthogonal(&t.sum_of_rows(&[(triv, 2)]).unwrap())
            .unwrap());
    }

    #[test]
    fn s3_standard_on_c2() {
        // S3 standard restricted to the order-2 subgroup decomposes as
        // trivial + sign
        let g = GroupData::build(GroupSpec::Sl2 { q: 2 }).unwrap();
        let t = dixon_table(&g).unwrap();
        let std_row = t.irreps.iter().position(|ir| ir.degree == 2).unwrap();
        let n1 = g.distinguished().n1.unwrap();
        // the subgroup generated by n1 is C_2 = UnipotentN for q = 2
        let e = g.subgroup(SubgroupName::UnipotentN).unwrap();
        assert_eq!(e.elements, vec![0, n1]);
        let res = restrict(&g, &t.row(std_row).unwrap(), &e);
        let mults = abelian_decompose(&e, &res).unwrap();
        assert_eq!(mults, vec![1, 1]);
    }

    #[test]
    fn cyclic_decompose_on_torus() {
        // restriction to the diagonal torus C_4 of SL(2,5) splits into its
        // linear characters with nonnegative integer multiplicities
        let g = GroupData::build(GroupSpec::Sl2 { q: 5 }).unwrap();
        let t = dixon_table(&g).unwrap();
        let torus = g.subgroup(SubgroupName::DiagonalTorus).unwrap();
        assert_eq!(torus.order(), 4);
        for i in 0..t.irreps.len() {
            let res = restrict(&g, &t.row(i).unwrap(), &torus);
            let mults = abelian_decompose(&torus, &res).unwrap();
            assert_eq!(mults.iter().sum::<i64>(), t.irreps[i].degree);
        }
    }

    #[test]
    fn fs_indicator_via_gow_on_center() {
        let (_, t) = sl2_3();
        for (i, ir) in t.irreps.iter().enumerate() {
            match ir.fs {
                1 => assert_eq!(t.central_sign(i).unwrap(), 1),
                -1 => assert_eq!(t.central_sign(i).unwrap(), -1),
                _ => {}
            }
        }
    }

    #[test]
    fn decompose_rejects_junk() {
        let (_, t) = sl2_3();
        let mut f = t.row(0).unwrap();
        f.values[2] = f.values[2].add(&Cyclotomic::from_i64(1));
        assert!(t.decompose(&f).is_err());
    }
}
