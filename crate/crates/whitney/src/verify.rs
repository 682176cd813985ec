//! Independent verification: the elementary-abelian restriction oracle, the
//! theorem-vs-oracle comparison, the synthetic block-weight identity suite for
//! the symplectic families, and the Whitney-sum suite.
//!
//! On an elementary-abelian 2-group the total class of any representation is
//! forced by the first-class isomorphism on linear characters together with
//! Whitney multiplicativity, so the oracle side needs no theorem input at all:
//! it is computed straight from restricted character values.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chartab::{abelian_decompose, restrict, CharacterTable, ClassFunction, SubgroupFunction};
use crate::cohomology::{preset, Element, Preset, RingMap};
use crate::error::{Error, Result};
use crate::group::{GroupData, GroupSpec, SubgroupEmbedding, SubgroupName};
use crate::swc::{self, SwcResult};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equal,
    Mismatch { first_differing_degree: u32 },
}

/// Outcome of one theorem-vs-oracle comparison.
#[derive(Clone, Debug)]
pub struct OracleReport {
    pub verdict: Verdict,
    pub subgroup: String,
    pub fingerprint: String,
    /// Multiplicity of each linear character of the subgroup, labelled by its
    /// first Stiefel-Whitney class.
    pub multiplicities: Vec<(String, i64)>,
    pub oracle_class: Element,
    pub theorem_image: Element,
}

impl OracleReport {
    pub fn is_equal(&self) -> bool {
        self.verdict == Verdict::Equal
    }
}

/// w = prod_chi (1 + w_1(chi))^(m_chi) over the linear characters of C_2^k,
/// with multiplicities indexed by character mask.
pub fn oracle_from_multiplicities(k: u32, mults: &[i64]) -> Result<Element> {
    if mults.len() != 1 << k {
        return Err(Error::NotACharacter {
            reason: format!("{} multiplicities for rank {k}", mults.len()),
        });
    }
    let ring = preset(Preset::ElemAbelian { r: k })?;
    let mut w = Element::one(&ring);
    for (mask, &m) in mults.iter().enumerate() {
        if mask == 0 || m == 0 {
            continue;
        }
        if m < 0 {
            return Err(Error::NotACharacter {
                reason: format!("negative multiplicity {m}"),
            });
        }
        let mut lin = Element::one(&ring);
        for i in 0..k {
            if mask & (1 << i) != 0 {
                lin = lin.add(&Element::generator(&ring, i as usize))?;
            }
        }
        w = w.mul(&lin.pow(m as u64))?;
    }
    Ok(w)
}

/// The forced total class of a character of an elementary-abelian 2-group.
pub fn oracle_elem_abelian(e: &SubgroupEmbedding, f: &SubgroupFunction) -> Result<Element> {
    let k = e.rank2().ok_or_else(|| Error::NotACharacter {
        reason: "oracle subgroup is not elementary-abelian".into(),
    })?;
    let mults = abelian_decompose(e, f)?;
    oracle_from_multiplicities(k, &mults)
}

/// Human-readable label for a linear character of C_2^k: its first class.
fn character_label(k: u32, mask: usize) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let parts: Vec<String> = (0..k)
        .filter(|i| mask & (1 << i) != 0)
        .map(|i| format!("v{}", i + 1))
        .collect();
    parts.join("+")
}

/// The built-in restriction map from a family's ambient ring to the
/// cohomology of its canonical elementary-abelian 2-subgroup.
///
/// Degree-4 generators restrict through the center of each SL(2,q) block
/// (e -> v^4); the degree-3 generators restrict to zero, as does the
/// square-zero degree-1 generator s of a cyclic or torus ring (its defining
/// character is trivial on the 2-torsion when the cyclic order is divisible
/// by 4, and no valid degree-preserving map can send it anywhere else).
pub fn builtin_restriction_map(group: &GroupSpec) -> Result<RingMap> {
    match *group {
        GroupSpec::Cyclic { n } if n % 4 == 0 => {
            let src = preset(Preset::Cyclic { n })?;
            let dst = preset(Preset::ElemAbelian { r: 1 })?;
            let v = Element::generator(&dst, 0);
            RingMap::new(src, dst.clone(), vec![Element::zero(&dst), v.square()])
        }
        GroupSpec::Cyclic { n } if n % 2 == 0 => {
            let src = preset(Preset::Cyclic { n })?;
            let dst = preset(Preset::ElemAbelian { r: 1 })?;
            let v = Element::generator(&dst, 0);
            RingMap::new(src, dst, vec![v])
        }
        GroupSpec::Sl2 { q } if q % 2 == 1 => {
            let src = preset(Preset::Sl2Odd)?;
            let dst = preset(Preset::ElemAbelian { r: 1 })?;
            let v = Element::generator(&dst, 0);
            RingMap::new(src, dst.clone(), vec![v.pow(4), Element::zero(&dst)])
        }
        GroupSpec::Sl2 { q } => {
            let r = q.trailing_zeros();
            let ring = preset(Preset::ElemAbelian { r })?;
            let images = (0..r as usize)
                .map(|i| Element::generator(&ring, i))
                .collect();
            RingMap::new(ring.clone(), ring, images)
        }
        GroupSpec::Sl3 { q } if q % 2 == 1 => {
            let src = preset(Preset::Sl3Target { q })?;
            let dst = preset(Preset::ElemAbelian { r: 2 })?;
            let v1 = Element::generator(&dst, 0);
            let v2 = Element::generator(&dst, 1);
            if q % 4 == 1 {
                // s1, s2 -> 0; t_i -> v_i^2
                RingMap::new(
                    src,
                    dst.clone(),
                    vec![
                        Element::zero(&dst),
                        Element::zero(&dst),
                        v1.square(),
                        v2.square(),
                    ],
                )
            } else {
                RingMap::new(src, dst, vec![v1, v2])
            }
        }
        GroupSpec::Sp4 { q } | GroupSpec::Sp6 { q } if q % 2 == 1 => {
            let n = if matches!(group, GroupSpec::Sp4 { .. }) {
                2
            } else {
                3
            };
            let src = preset(Preset::BlockX { n })?;
            let dst = preset(Preset::ElemAbelian { r: n })?;
            let mut images = Vec::new();
            for i in 0..n as usize {
                images.push(Element::generator(&dst, i).pow(4));
            }
            for _ in 0..n as usize {
                images.push(Element::zero(&dst));
            }
            RingMap::new(src, dst, images)
        }
        _ => Err(Error::UnsupportedFamily {
            family: group.family_name().into(),
        }),
    }
}

/// Certifies the functoriality equation for one evaluated class: the image of
/// the theorem output under the built-in restriction map must equal the
/// oracle class of the restricted character.
pub fn compare_restriction(
    g: &GroupData,
    table: &CharacterTable,
    f: &ClassFunction,
    res: &SwcResult,
) -> Result<OracleReport> {
    let e = g.subgroup(SubgroupName::ElemAbelian2)?;
    let k = e.rank2().expect("canonical oracle subgroups are C_2^k");
    let map = builtin_restriction_map(&table.group)?;
    let theorem_image = map.apply(&res.total)?;
    let restricted = restrict(g, f, &e);
    let mults = abelian_decompose(&e, &restricted)?;
    let oracle_class = oracle_from_multiplicities(k, &mults)?;

    let verdict = if theorem_image == oracle_class {
        Verdict::Equal
    } else {
        let d = (0..=theorem_image.top_degree().max(oracle_class.top_degree()))
            .find(|&d| theorem_image.graded_component(d) != oracle_class.graded_component(d))
            .unwrap_or(0);
        Verdict::Mismatch {
            first_differing_degree: d,
        }
    };
    Ok(OracleReport {
        verdict,
        subgroup: format!("{}(C_2^{k})", e.name.as_str()),
        fingerprint: f.fingerprint(),
        multiplicities: mults
            .iter()
            .enumerate()
            .map(|(mask, &m)| (character_label(k, mask), m))
            .collect(),
        oracle_class,
        theorem_image,
    })
}

/// Per-weight multiplicities for the block-center of a symplectic group;
/// errors unless the multiplicities are constant on weight levels (the
/// symmetry the closed-form exponent identities rely on).
pub fn block_weight_profile(k: u32, mults: &[i64]) -> Result<Vec<i64>> {
    let mut by_weight: Vec<Option<i64>> = vec![None; k as usize + 1];
    for (mask, &m) in mults.iter().enumerate() {
        let w = (mask as u32).count_ones() as usize;
        match by_weight[w] {
            None => by_weight[w] = Some(m),
            Some(prev) if prev == m => {}
            Some(prev) => {
                return Err(Error::TheoremInconsistency(format!(
                    "weight-{w} multiplicities differ: {prev} vs {m}"
                )))
            }
        }
    }
    Ok(by_weight.into_iter().map(|m| m.unwrap_or(0)).collect())
}

/// The honest character table of C_2^n presented as a block-center model of
/// Sp(2n,q): classes are the 2^n central involution products with the
/// distinguished elements tagged at their block-weight representatives. Every
/// table identity (orthogonality, degrees, the Frobenius-Schur count) holds
/// exactly, so the table survives the import gauntlet and feeds the theorem
/// evaluators end to end without any enumeration of the full group.
pub fn synthetic_block_center_table(n: u32, q: u32) -> crate::chartab::CharacterTable {
    use crate::chartab::{CharacterTable, ClassInfo, Irrep, TableSource, Tag};
    use crate::cyclotomic::Cyclotomic;
    assert!(n == 2 || n == 3);
    let size = 1usize << n;
    let mut classes: Vec<ClassInfo> = (0..size)
        .map(|mask| ClassInfo {
            size: 1,
            rep_order: if mask == 0 { 1 } else { 2 },
            tags: Vec::new(),
        })
        .collect();
    classes[0].tags.push(Tag::Identity);
    classes[size - 1].tags.push(Tag::MinusIdentity);
    if n == 2 {
        // basis (block 1, block 2); g1 = the inner-block involution
        classes[0b10].tags.push(Tag::G1);
    } else {
        // basis (block 1, block 2, block 3); g1 = block 3, g2 = blocks 2*3
        classes[0b100].tags.push(Tag::G1);
        classes[0b110].tags.push(Tag::G2);
    }
    let irreps: Vec<Irrep> = (0..size)
        .map(|chi| Irrep {
            degree: 1,
            fs: 1,
            values: (0..size)
                .map(|x| {
                    let sign = if (chi & x).count_ones() % 2 == 0 { 1 } else { -1 };
                    Cyclotomic::from_i64(sign)
                })
                .collect(),
        })
        .collect();
    let table = CharacterTable {
        group: if n == 2 {
            GroupSpec::Sp4 { q }
        } else {
            GroupSpec::Sp6 { q }
        },
        order: size as u64,
        exponent: 2,
        classes,
        irreps,
        identity_class: 0,
        source: TableSource::Computed,
    };
    table.verify().expect("block-center model is consistent");
    table
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCase {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: Vec<SuiteCase>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {}/{} cases pass",
            self.suite,
            self.cases.iter().filter(|c| c.pass).count(),
            self.cases.len()
        )
    }

    fn case(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.cases.push(SuiteCase {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }
}

/// Krawtchouk-style evaluation: Theta at a weight-u block involution from the
/// per-weight multiplicities, Theta_u = sum_w m_w K_w(u).
fn theta_from_weights(n: u32, m: &[i64], u: u32) -> i64 {
    let mut theta = 0i64;
    for (mask, weight) in (0..1u32 << n).map(|mask| (mask, mask.count_ones())) {
        // a weight-u element is the product of the first u basis involutions
        let support: u32 = (1 << u) - 1;
        let sign = if (mask & support).count_ones() % 2 == 0 {
            1
        } else {
            -1
        };
        theta += m[weight as usize] * sign;
    }
    theta
}

/// Property suite for the symplectic theorems without any real character
/// table: random block-weight multiplicities (positive weights in 4Z) are
/// converted to character values, pushed through the theorem evaluator, and
/// compared exactly against the oracle product; negative controls check that
/// off-lattice multiplicities trip the integrality gate.
pub fn synthetic_sp_identity(n: u32, trials: u32, seed: u64) -> Result<SuiteReport> {
    assert!(n == 2 || n == 3, "symplectic ranks in scope are 2 and 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport {
        suite: format!("synthetic_sp_identity(n={n})"),
        cases: Vec::new(),
    };
    for trial in 0..trials {
        // m_0 free in [0,64]; higher weights multiples of 4 up to 64
        let mut m = vec![rng.gen_range(0..=64i64)];
        for _ in 0..n {
            m.push(4 * rng.gen_range(0..=16i64));
        }
        let thetas: Vec<i64> = (0..=n).map(|u| theta_from_weights(n, &m, u)).collect();
        let outcome = synthetic_case(n, &m, &thetas);
        match outcome {
            Ok(()) => report.case(format!("trial {trial} m={m:?}"), true, "equal"),
            Err(e) => report.case(format!("trial {trial} m={m:?}"), false, e.to_string()),
        }
    }
    // negative controls: a positive weight level off the 4Z lattice must be
    // refused by the integrality gate
    for bad in [2i64, 6, 10] {
        let mut m = vec![0i64; n as usize + 1];
        m[1] = bad;
        let thetas: Vec<i64> = (0..=n).map(|u| theta_from_weights(n, &m, u)).collect();
        let exps = if n == 2 {
            swc::sp4_exponents(thetas[0], thetas[1], thetas[2])
        } else {
            swc::sp6_exponents(thetas[0], thetas[1], thetas[2], thetas[3])
        };
        let tripped = exps.iter().any(|e| e.require().is_err());
        report.case(
            format!("negative control m1={bad}"),
            tripped,
            if tripped {
                "integrality gate tripped".to_string()
            } else {
                "gate failed to trip".to_string()
            },
        );
    }
    Ok(report)
}

fn synthetic_case(n: u32, m: &[i64], thetas: &[i64]) -> Result<()> {
    let (theorem, map_src) = if n == 2 {
        let exps = swc::sp4_exponents(thetas[0], thetas[1], thetas[2]);
        let r = exps[0].require()?;
        let s = exps[1].require()?;
        (swc::assemble_sp4(r, s)?, GroupSpec::Sp4 { q: 3 })
    } else {
        let exps = swc::sp6_exponents(thetas[0], thetas[1], thetas[2], thetas[3]);
        let r = exps[0].require()?;
        let s = exps[1].require()?;
        let t = exps[2].require()?;
        (swc::assemble_sp6(r, s, t)?, GroupSpec::Sp6 { q: 3 })
    };
    let map = builtin_restriction_map(&map_src)?;
    let image = map.apply(&theorem)?;
    let mults: Vec<i64> = (0..1usize << n)
        .map(|mask| m[mask.count_ones() as usize])
        .collect();
    let oracle = oracle_from_multiplicities(n, &mults)?;
    if image == oracle {
        Ok(())
    } else {
        Err(Error::TheoremInconsistency(format!(
            "formula image {} != oracle {}",
            image.render(),
            oracle.render()
        )))
    }
}

/// Draws a random orthogonal character: a sum of orthogonal irreducibles,
/// doubled symplectic irreducibles, and conjugate pairs, capped in degree.
pub fn random_orthogonal(
    t: &CharacterTable,
    rng: &mut ChaCha8Rng,
    degree_cap: i64,
) -> ClassFunction {
    let mut parts: Vec<(usize, u64)> = Vec::new();
    let mut degree = 0i64;
    for _ in 0..8 {
        let row = rng.gen_range(0..t.irreps.len());
        let ir = &t.irreps[row];
        let (add, extra): (Vec<(usize, u64)>, i64) = match ir.fs {
            1 => (vec![(row, 1)], ir.degree),
            -1 => (vec![(row, 2)], 2 * ir.degree),
            _ => {
                let Some(cr) = t.conjugate_row(row) else { continue; };
                (vec![(row, 1), (cr, 1)], 2 * ir.degree)
            }
        };
        if degree + extra > degree_cap && degree > 0 {
            break;
        }
        degree += extra;
        parts.extend(add);
    }
    t.sum_of_rows(&parts).expect("rows in range")
}

/// w(f + f') = w(f) w(f') as exact ring elements, over seeded random pairs.
pub fn whitney_sum_suite(
    t: &CharacterTable,
    pairs: u32,
    seed: u64,
    degree_cap: i64,
) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SuiteReport {
        suite: format!("whitney_sum({}, q={:?})", t.group.family_name(), t.group.q()),
        cases: Vec::new(),
    };
    for trial in 0..pairs {
        let f1 = random_orthogonal(t, &mut rng, degree_cap);
        let f2 = random_orthogonal(t, &mut rng, degree_cap);
        let sum = f1.add(&f2);
        let outcome = (|| -> Result<bool> {
            let r1 = swc::swc_auto(t, &f1)?;
            let r2 = swc::swc_auto(t, &f2)?;
            let rs = swc::swc_auto(t, &sum)?;
            Ok(rs.total == r1.total.mul(&r2.total)?)
        })();
        match outcome {
            Ok(true) => report.case(format!("pair {trial}"), true, "product matches"),
            Ok(false) => report.case(format!("pair {trial}"), false, "product differs"),
            Err(e) => report.case(format!("pair {trial}"), false, e.to_string()),
        }
    }
    report
}

/// Runs the theorem evaluator and the restriction oracle over every
/// orthogonal row, every doubled symplectic row, and every conjugate pair of
/// the table.
pub fn restriction_suite(g: &GroupData, t: &CharacterTable) -> SuiteReport {
    let mut report = SuiteReport {
        suite: format!(
            "restriction({}, q={:?})",
            t.group.family_name(),
            t.group.q()
        ),
        cases: Vec::new(),
    };
    let mut seen_pairs = std::collections::HashSet::new();
    for (i, ir) in t.irreps.iter().enumerate() {
        let (label, f) = match ir.fs {
            1 => (format!("row {i} (deg {})", ir.degree), t.row(i).unwrap()),
            -1 => (
                format!("doubled row {i} (deg {})", 2 * ir.degree),
                t.doubled_row(i).unwrap(),
            ),
            _ => {
                let cr = t.conjugate_row(i).expect("complete table");
                if !seen_pairs.insert((i.min(cr), i.max(cr))) {
                    continue;
                }
                (
                    format!("conjugate pair {{{i},{cr}}} (deg {})", 2 * ir.degree),
                    t.sum_of_rows(&[(i, 1), (cr, 1)]).unwrap(),
                )
            }
        };
        let outcome = (|| -> Result<OracleReport> {
            let res = swc::swc_auto(t, &f)?;
            compare_restriction(g, t, &f, &res)
        })();
        match outcome {
            Ok(rep) if rep.is_equal() => report.case(label, true, "equal"),
            Ok(rep) => report.case(label, false, format!("{:?}", rep.verdict)),
            Err(e) => report.case(label, false, e.to_string()),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartab::dixon_table;
    use crate::group::GroupData;

    #[test]
    fn oracle_examples() {
        // sgn on C_2 -> 1 + v1
        let w = oracle_from_multiplicities(1, &[0, 1]).unwrap();
        assert_eq!(w.render(), "1 + v1");
        // trivial + sgn -> 1 + v1
        let w = oracle_from_multiplicities(1, &[1, 1]).unwrap();
        assert_eq!(w.render(), "1 + v1");
        // multiplicities (0,1,1,1) on C_2^2: the full Dickson product
        let w = oracle_from_multiplicities(2, &[0, 1, 1, 1]).unwrap();
        assert_eq!(w, crate::cohomology::dickson_product(2).unwrap());
    }

    #[test]
    fn builtin_maps_validate() {
        for spec in [
            GroupSpec::Cyclic { n: 4 },
            GroupSpec::Cyclic { n: 6 },
            GroupSpec::Sl2 { q: 3 },
            GroupSpec::Sl2 { q: 4 },
            GroupSpec::Sl2 { q: 8 },
            GroupSpec::Sl3 { q: 3 },
            GroupSpec::Sl3 { q: 5 },
            GroupSpec::Sp4 { q: 3 },
            GroupSpec::Sp6 { q: 3 },
        ] {
            builtin_restriction_map(&spec).unwrap();
        }
    }

    #[test]
    fn sl2_3_quaternionic_double_comparison() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 3 }).unwrap();
        let t = dixon_table(&g).unwrap();
        let quat = t.irreps.iter().position(|ir| ir.fs == -1).unwrap();
        let f = t.doubled_row(quat).unwrap();
        let res = swc::swc_auto(&t, &f).unwrap();
        let rep = compare_restriction(&g, &t, &f, &res).unwrap();
        assert!(rep.is_equal());
        // theorem side (1+e) maps to (1+v)^4; oracle side is 4 sgn
        assert_eq!(rep.multiplicities, vec![("1".to_string(), 0), ("v1".to_string(), 4)]);
        let ring = rep.oracle_class.ring().clone();
        let v = Element::generator(&ring, 0);
        assert_eq!(rep.oracle_class, Element::one(&ring).add(&v).unwrap().pow(4));
    }

    #[test]
    fn sl2_3_full_restriction_suite() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 3 }).unwrap();
        let t = dixon_table(&g).unwrap();
        let rep = restriction_suite(&g, &t);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn sl2_4_restriction_suite() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 4 }).unwrap();
        let t = dixon_table(&g).unwrap();
        let rep = restriction_suite(&g, &t);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn cyclic_restriction_suite() {
        for n in [4u32, 6, 8, 12] {
            let g = GroupData::build(GroupSpec::Cyclic { n }).unwrap();
            let t = dixon_table(&g).unwrap();
            let rep = restriction_suite(&g, &t);
            assert!(rep.passed(), "n={n}: {rep:?}");
        }
    }

    #[test]
    fn synthetic_identities() {
        let rep2 = synthetic_sp_identity(2, 50, DEFAULT_SEED).unwrap();
        assert!(rep2.passed(), "{:?}", rep2.cases.iter().find(|c| !c.pass));
        let rep3 = synthetic_sp_identity(3, 50, DEFAULT_SEED).unwrap();
        assert!(rep3.passed(), "{:?}", rep3.cases.iter().find(|c| !c.pass));
    }

    #[test]
    fn worked_synthetic_examples() {
        // (m0, m1, m2) = (0, 4, 8): r = 1, s = 2
        let thetas: Vec<i64> = (0..=2).map(|u| theta_from_weights(2, &[0, 4, 8], u)).collect();
        assert_eq!(thetas, vec![16, -8, 0]);
        synthetic_case(2, &[0, 4, 8], &thetas).unwrap();
        // (0,4,0,0): thetas (12, 4, -4, -12)
        let thetas: Vec<i64> = (0..=3)
            .map(|u| theta_from_weights(3, &[0, 4, 0, 0], u))
            .collect();
        assert_eq!(thetas, vec![12, 4, -4, -12]);
        synthetic_case(3, &[0, 4, 0, 0], &thetas).unwrap();
    }

    #[test]
    fn whitney_suite_small() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 3 }).unwrap();
        let t = dixon_table(&g).unwrap();
        let rep = whitney_sum_suite(&t, 50, DEFAULT_SEED, 48);
        assert!(rep.passed(), "{:?}", rep.cases.iter().find(|c| !c.pass));
    }

    #[test]
    fn synthetic_table_flows_through_import_and_swc() {
        let t = synthetic_block_center_table(3, 3);
        let text = crate::chartab::io::export_json(&t);
        let back = crate::chartab::io::import_json(&text).unwrap();
        // a 4-fold regular character has Theta = (32, 0, 0, ...) and all
        // three exponents equal to 1
        let parts: Vec<(usize, u64)> = (0..back.irreps.len()).map(|i| (i, 4)).collect();
        let f = back.sum_of_rows(&parts).unwrap();
        let res = swc::swc_auto(&back, &f).unwrap();
        let exps: Vec<i64> = res
            .report
            .exponents
            .iter()
            .map(|e| e.num / e.den)
            .collect();
        assert_eq!(exps, vec![1, 1, 1]);
        // and the oracle agrees with the mapped theorem output
        let map = builtin_restriction_map(&back.group).unwrap();
        let image = map.apply(&res.total).unwrap();
        let oracle = oracle_from_multiplicities(3, &vec![4i64; 8]).unwrap();
        assert_eq!(image, oracle);
    }

    #[test]
    fn block_weight_profile_checks_symmetry() {
        assert_eq!(
            block_weight_profile(2, &[3, 4, 4, 8]).unwrap(),
            vec![3, 4, 8]
        );
        assert!(block_weight_profile(2, &[3, 4, 5, 8]).is_err());
    }
}
