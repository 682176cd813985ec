//! Total Stiefel-Whitney class evaluators: one closed-form theorem per group
//! family, each turning a handful of character values into an element of the
//! family's ambient mod-2 cohomology ring.
//!
//! Every evaluator checks the orthogonality precondition at character level,
//! extracts the exponents as exact rationals, refuses anything that is not a
//! nonnegative integer, and assembles the class by exact ring arithmetic.

use std::sync::Arc;

use serde::Serialize;

use crate::chartab::{CharacterTable, ClassFunction, Constituent, Tag};
use crate::cohomology::{dickson_product, preset, Element, Preset, RingPresentation};
use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Cyclic,
    Sl2Odd,
    Sl2Even,
    Sl3,
    Sp4,
    Sp6,
}

impl Theorem {
    pub fn as_str(&self) -> &'static str {
        match self {
            Theorem::Cyclic => "cyclic",
            Theorem::Sl2Odd => "sl2_odd",
            Theorem::Sl2Even => "sl2_even",
            Theorem::Sl3 => "sl3",
            Theorem::Sp4 => "sp4",
            Theorem::Sp6 => "sp6",
        }
    }
}

/// One exponent of a theorem as an exact rational, before the integrality
/// gate.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentValue {
    pub name: String,
    pub num: i64,
    pub den: i64,
    pub integral: bool,
}

impl ExponentValue {
    fn new(name: &str, num: i64, den: i64) -> ExponentValue {
        ExponentValue {
            name: name.into(),
            num,
            den,
            integral: num % den == 0 && num / den >= 0,
        }
    }

    /// The gated value: a nonnegative integer or a refusal.
    pub fn require(&self) -> Result<u64> {
        if self.integral {
            Ok((self.num / self.den) as u64)
        } else {
            Err(Error::NonIntegralExponent {
                name: self.name.clone(),
                num: self.num,
                den: self.den,
            })
        }
    }
}

/// Exponent extraction record: which character values were consumed and what
/// each exponent came out to.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub theorem: Theorem,
    pub exponents: Vec<ExponentValue>,
    pub values_used: Vec<(String, i64)>,
}

/// A total Stiefel-Whitney class with its provenance.
#[derive(Clone, Debug)]
pub struct SwcResult {
    pub theorem: Theorem,
    pub ring: Arc<RingPresentation>,
    pub total: Element,
    pub report: ExponentReport,
    pub degree: i64,
    pub constituents: Vec<Constituent>,
    pub fingerprint: String,
}

impl SwcResult {
    /// Structured report per the engine's JSON interface.
    pub fn to_json(&self, table: &CharacterTable) -> serde_json::Value {
        let mut exps = serde_json::Map::new();
        for e in &self.report.exponents {
            exps.insert(
                e.name.clone(),
                serde_json::json!({ "num": e.num, "den": e.den, "integral": e.integral }),
            );
        }
        let fs_profile: Vec<serde_json::Value> = self
            .constituents
            .iter()
            .map(|c| serde_json::json!({ "row": c.row, "multiplicity": c.multiplicity, "fs": c.fs }))
            .collect();
        serde_json::json!({
            "group": { "family": table.group.family_name(), "q": table.group.q(), "order": table.order },
            "input": {
                "degree": self.degree,
                "fingerprint": self.fingerprint,
                "fs_profile": fs_profile,
            },
            "theorem": self.theorem.as_str(),
            "exponents": serde_json::Value::Object(exps),
            "total_class": {
                "text": self.total.render(),
                "monomials": self.total.to_json(),
            },
        })
    }
}

fn one_plus(ring: &Arc<RingPresentation>, gens: &[usize]) -> Element {
    let mut sum = Element::one(ring);
    for &g in gens {
        sum = sum.add(&Element::generator(ring, g)).expect("same ring");
    }
    sum
}

fn finish(
    theorem: Theorem,
    ring: Arc<RingPresentation>,
    total: Element,
    report: ExponentReport,
    degree: i64,
    constituents: Vec<Constituent>,
    f: &ClassFunction,
) -> SwcResult {
    // w_0 = 1 always; the total degree never exceeds deg f, with truncation
    // as a safety net
    let total = total.truncate(degree.max(0) as u32);
    debug_assert!(total.graded_component(0).is_one());
    SwcResult {
        theorem,
        ring,
        total,
        report,
        degree,
        constituents,
        fingerprint: f.fingerprint(),
    }
}

fn orthogonal_constituents(t: &CharacterTable, f: &ClassFunction) -> Result<Vec<Constituent>> {
    let report = t.orthogonality_report(f)?;
    if !report.orthogonal {
        return Err(Error::NotOrthogonal {
            reason: report.reason.unwrap_or_else(|| "unknown".into()),
        });
    }
    Ok(report.constituents)
}

/// Is f a single irreducible row of multiplicity one?
fn single_row(constituents: &[Constituent]) -> Option<usize> {
    match constituents {
        [c] if c.multiplicity == 1 => Some(c.row),
        _ => None,
    }
}

/// The double of a (typically symplectic) character; doubling is how a
/// symplectic irreducible becomes orthogonal.
pub fn double_symplectic(f: &ClassFunction) -> ClassFunction {
    f.scaled(2)
}

/// Cyclic-group evaluation.
pub fn swc_cyclic(t: &CharacterTable, f: &ClassFunction) -> Result<SwcResult> {
    let GroupSpec::Cyclic { n } = t.group else {
        return Err(Error::UnsupportedFamily {
            family: t.group.family_name().into(),
        });
    };
    if n % 2 != 0 {
        return Err(Error::UnsupportedFamily {
            family: format!("cyclic({n}) with odd n"),
        });
    }
    let constituents = orthogonal_constituents(t, f)?;
    let degree = t.degree_of(f)?;
    let theta_half = t.value_at_tag(f, Tag::MinusIdentity)?;
    let ring = preset(Preset::Cyclic { n })?;

    let b = ExponentValue::new("b", degree - theta_half, 4);
    let mut exponents = vec![b.clone()];
    let values_used = vec![
        ("identity".to_string(), degree),
        ("minus_identity".to_string(), theta_half),
    ];

    let total = if n % 4 == 2 {
        // w = (1+v)^(2b); only the combined exponent 2b is required to be
        // integral (b itself may be half-integral, e.g. for the sign
        // character)
        let two_b = ExponentValue::new("2b", degree - theta_half, 2);
        exponents.push(two_b.clone());
        let e = two_b.require()?;
        one_plus(&ring, &[0]).pow(e)
    } else {
        let bv = b.require()?;
        let det_trivial = determinant_is_trivial(t, &constituents)?;
        let one_plus_t = one_plus(&ring, &[ring.gen_index("t").unwrap()]);
        let mut w = one_plus_t.pow(bv);
        if !det_trivial {
            let one_plus_s = one_plus(&ring, &[ring.gen_index("s").unwrap()]);
            w = w.mul(&one_plus_s)?;
        }
        w
    };
    let report = ExponentReport {
        theorem: Theorem::Cyclic,
        exponents,
        values_used,
    };
    Ok(finish(Theorem::Cyclic, ring, total, report, degree, constituents, f))
}

/// det f as the pointwise product of the constituent linear characters;
/// trivial iff every value is 1.
fn determinant_is_trivial(t: &CharacterTable, constituents: &[Constituent]) -> Result<bool> {
    let k = t.class_count();
    let mut det = vec![Cyclotomic::from_i64(1); k];
    for c in constituents {
        if t.irreps[c.row].degree != 1 {
            return Err(Error::TableValidation(
                "cyclic table has a constituent of degree > 1".into(),
            ));
        }
        for (d, v) in det.iter_mut().zip(&t.irreps[c.row].values) {
            for _ in 0..c.multiplicity {
                *d = d.mul(v);
            }
        }
    }
    Ok(det.iter().all(|v| v.as_i64() == Some(1)))
}

/// SL(2,q), q odd: w = (1+e)^r with r = (Theta(1) - Theta(-1))/8.
pub fn swc_sl2_odd(t: &CharacterTable, f: &ClassFunction) -> Result<SwcResult> {
    let constituents = orthogonal_constituents(t, f)?;
    let degree = t.degree_of(f)?;
    let theta_minus = t.value_at_tag(f, Tag::MinusIdentity)?;
    let r = ExponentValue::new("r", degree - theta_minus, 8);
    let rv = r.require()?;
    let ring = preset(Preset::Sl2Odd)?;
    let total = one_plus(&ring, &[0]).pow(rv);
    let report = ExponentReport {
        theorem: Theorem::Sl2Odd,
        exponents: vec![r],
        values_used: vec![
            ("identity".into(), degree),
            ("minus_identity".into(), theta_minus),
        ],
    };
    Ok(finish(Theorem::Sl2Odd, ring, total, report, degree, constituents, f))
}

/// SL(2,q), q = 2^r: w = (prod_{v in H^1(N)} (1+v))^s with
/// s = (Theta(1) - Theta(n_1))/q; the product is the Dickson class sum.
pub fn swc_sl2_even(t: &CharacterTable, f: &ClassFunction) -> Result<SwcResult> {
    let GroupSpec::Sl2 { q } = t.group else {
        return Err(Error::UnsupportedFamily {
            family: t.group.family_name().into(),
        });
    };
    let r = q.trailing_zeros();
    if q != 1 << r {
        return Err(Error::UnsupportedFamily {
            family: format!("sl2({q}) is not even"),
        });
    }
    // every character is orthogonal here; the check still guards against
    // inputs that are not characters at all
    let constituents = orthogonal_constituents(t, f)?;
    let degree = t.degree_of(f)?;
    let theta_n1 = t.value_at_tag(f, Tag::N1)?;
    let s = ExponentValue::new("s", degree - theta_n1, q as i64);
    let sv = s.require()?;
    let total = dickson_product(r)?.pow(sv);
    let ring = preset(Preset::ElemAbelian { r })?;
    let report = ExponentReport {
        theorem: Theorem::Sl2Even,
        exponents: vec![s],
        values_used: vec![("identity".into(), degree), ("n1".into(), theta_n1)],
    };
    Ok(finish(Theorem::Sl2Even, ring, total, report, degree, constituents, f))
}

/// SL(3,q), q odd: Dickson-type product over the diagonal 2-torsion with
/// exponent m = (Theta(1) - Theta(a_1))/8; the ambient ring and the gated
/// exponent depend on q mod 4.
pub fn swc_sl3(t: &CharacterTable, f: &ClassFunction) -> Result<SwcResult> {
    let GroupSpec::Sl3 { q } = t.group else {
        return Err(Error::UnsupportedFamily {
            family: t.group.family_name().into(),
        });
    };
    if q % 2 == 0 {
        return Err(Error::UnsupportedFamily {
            family: format!("sl3({q}) with even q"),
        });
    }
    let constituents = orthogonal_constituents(t, f)?;
    let degree = t.degree_of(f)?;
    let theta_a1 = t.value_at_tag(f, Tag::A1)?;
    let ring = preset(Preset::Sl3Target { q })?;
    let m = ExponentValue::new("m", degree - theta_a1, 8);
    let mut exponents = vec![m.clone()];

    let total = if q % 4 == 1 {
        let mv = m.require()?;
        let t1 = ring.gen_index("t1").unwrap();
        let t2 = ring.gen_index("t2").unwrap();
        one_plus(&ring, &[t1])
            .mul(&one_plus(&ring, &[t2]))?
            .mul(&one_plus(&ring, &[t1, t2]))?
            .pow(mv)
    } else {
        // gate 2m, not m: m itself may be half-integral here
        let two_m = ExponentValue::new("2m", degree - theta_a1, 4);
        exponents.push(two_m.clone());
        let mv = two_m.require()?;
        let v1 = ring.gen_index("v1").unwrap();
        let v2 = ring.gen_index("v2").unwrap();
        one_plus(&ring, &[v1])
            .mul(&one_plus(&ring, &[v2]))?
            .mul(&one_plus(&ring, &[v1, v2]))?
            .pow(mv)
    };
    let report = ExponentReport {
        theorem: Theorem::Sl3,
        exponents,
        values_used: vec![("identity".into(), degree), ("a1".into(), theta_a1)],
    };
    Ok(finish(Theorem::Sl3, ring, total, report, degree, constituents, f))
}

/// Exponents of the Sp(4,q) theorem from the three character values
/// (Theta(1), Theta(g1), Theta(-1)).
pub fn sp4_exponents(theta_1: i64, theta_g1: i64, theta_minus: i64) -> Vec<ExponentValue> {
    vec![
        ExponentValue::new("r", theta_1 - theta_minus, 16),
        ExponentValue::new("s", theta_1 + theta_minus - 2 * theta_g1, 16),
    ]
}

/// Exponents of the Sp(6,q) theorem from (Theta(1), Theta(g1), Theta(g2),
/// Theta(-1)).
pub fn sp6_exponents(
    theta_1: i64,
    theta_g1: i64,
    theta_g2: i64,
    theta_minus: i64,
) -> Vec<ExponentValue> {
    vec![
        ExponentValue::new("r", theta_1 + theta_g1 - theta_g2 - theta_minus, 32),
        ExponentValue::new("s", theta_1 - theta_g1 - theta_g2 + theta_minus, 32),
        ExponentValue::new("t", theta_1 - 3 * theta_g1 + 3 * theta_g2 - theta_minus, 32),
    ]
}

/// ((1+e_1)(1+e_2))^r (1+e_1+e_2)^s in the rank-2 block ring.
pub fn assemble_sp4(r: u64, s: u64) -> Result<Element> {
    let ring = preset(Preset::BlockX { n: 2 })?;
    let e1 = ring.gen_index("e1").unwrap();
    let e2 = ring.gen_index("e2").unwrap();
    one_plus(&ring, &[e1])
        .mul(&one_plus(&ring, &[e2]))?
        .pow(r)
        .mul(&one_plus(&ring, &[e1, e2]).pow(s))
}

/// (prod (1+e_i))^r (prod_{i<j} (1+e_i+e_j))^s (1+e_1+e_2+e_3)^t.
pub fn assemble_sp6(r: u64, s: u64, tt: u64) -> Result<Element> {
    let ring = preset(Preset::BlockX { n: 3 })?;
    let e: Vec<usize> = (1..=3)
        .map(|i| ring.gen_index(&format!("e{i}")).unwrap())
        .collect();
    let singles = one_plus(&ring, &[e[0]])
        .mul(&one_plus(&ring, &[e[1]]))?
        .mul(&one_plus(&ring, &[e[2]]))?;
    let pairs = one_plus(&ring, &[e[0], e[1]])
        .mul(&one_plus(&ring, &[e[0], e[2]]))?
        .mul(&one_plus(&ring, &[e[1], e[2]]))?;
    let triple = one_plus(&ring, &[e[0], e[1], e[2]]);
    singles.pow(r).mul(&pairs.pow(s))?.mul(&triple.pow(tt))
}

/// Sp(4,q), q odd.
pub fn swc_sp4(t: &CharacterTable, f: &ClassFunction) -> Result<SwcResult> {
    let GroupSpec::Sp4 { q } = t.group else {
        return Err(Error::UnsupportedFamily {
            family: t.group.family_name().into(),
        });
    };
    if q % 2 == 0 {
        return Err(Error::UnsupportedFamily {
            family: format!("sp4({q}) with even q"),
        });
    }
    let constituents = orthogonal_constituents(t, f)?;
    let degree = t.degree_of(f)?;
    let theta_g1 = t.value_at_tag(f, Tag::G1)?;
    let theta_minus = t.value_at_tag(f, Tag::MinusIdentity)?;
    let exponents = sp4_exponents(degree, theta_g1, theta_minus);
    let rv = exponents[0].require()?;
    let sv = exponents[1].require()?;
    // an irreducible orthogonal character has Theta(-1) = Theta(1) (the
    // central involution acts trivially), so r must vanish and the general
    // formula must collapse to the shortcut s = (deg - Theta(g1))/8
    if let Some(row) = single_row(&constituents) {
        if t.irreps[row].fs == 1 {
            let shortcut = ExponentValue::new("s_shortcut", degree - theta_g1, 8);
            if rv != 0 || shortcut.require()? != sv {
                return Err(Error::TheoremInconsistency(format!(
                    "irreducible orthogonal row {row}: general (r={rv}, s={sv}) disagrees with the shortcut {}/{}",
                    shortcut.num, shortcut.den
                )));
            }
        }
    }
    let total = assemble_sp4(rv, sv)?;
    let ring = preset(Preset::BlockX { n: 2 })?;
    let report = ExponentReport {
        theorem: Theorem::Sp4,
        exponents,
        values_used: vec![
            ("identity".into(), degree),
            ("g1".into(), theta_g1),
            ("minus_identity".into(), theta_minus),
        ],
    };
    Ok(finish(Theorem::Sp4, ring, total, report, degree, constituents, f))
}

/// Sp(6,q), q odd.
pub fn swc_sp6(t: &CharacterTable, f: &ClassFunction) -> Result<SwcResult> {
    let GroupSpec::Sp6 { q } = t.group else {
        return Err(Error::UnsupportedFamily {
            family: t.group.family_name().into(),
        });
    };
    if q % 2 == 0 {
        return Err(Error::UnsupportedFamily {
            family: format!("sp6({q}) with even q"),
        });
    }
    let constituents = orthogonal_constituents(t, f)?;
    let degree = t.degree_of(f)?;
    let theta_g1 = t.value_at_tag(f, Tag::G1)?;
    let theta_g2 = t.value_at_tag(f, Tag::G2)?;
    let theta_minus = t.value_at_tag(f, Tag::MinusIdentity)?;
    let exponents = sp6_exponents(degree, theta_g1, theta_g2, theta_minus);
    let rv = exponents[0].require()?;
    let sv = exponents[1].require()?;
    let tv = exponents[2].require()?;
    if let Some(row) = single_row(&constituents) {
        if t.irreps[row].fs == 1 {
            let shortcut = ExponentValue::new("s_shortcut", degree - theta_g1, 16);
            if rv != 0 || tv != 0 || shortcut.require()? != sv {
                return Err(Error::TheoremInconsistency(format!(
                    "irreducible orthogonal row {row}: general (r={rv}, s={sv}, t={tv}) disagrees with the shortcut {}/{}",
                    shortcut.num, shortcut.den
                )));
            }
        }
    }
    let total = assemble_sp6(rv, sv, tv)?;
    let ring = preset(Preset::BlockX { n: 3 })?;
    let report = ExponentReport {
        theorem: Theorem::Sp6,
        exponents,
        values_used: vec![
            ("identity".into(), degree),
            ("g1".into(), theta_g1),
            ("g2".into(), theta_g2),
            ("minus_identity".into(), theta_minus),
        ],
    };
    Ok(finish(Theorem::Sp6, ring, total, report, degree, constituents, f))
}

/// Routes on (family, parity of q).
pub fn swc_auto(t: &CharacterTable, f: &ClassFunction) -> Result<SwcResult> {
    match t.group {
        GroupSpec::Cyclic { .. } => swc_cyclic(t, f),
        GroupSpec::Sl2 { q } if q % 2 == 1 => swc_sl2_odd(t, f),
        GroupSpec::Sl2 { .. } => swc_sl2_even(t, f),
        GroupSpec::Sl3 { .. } => swc_sl3(t, f),
        GroupSpec::Sp4 { .. } => swc_sp4(t, f),
        GroupSpec::Sp6 { .. } => swc_sp6(t, f),
        GroupSpec::CyclicPower { .. } => Err(Error::UnsupportedFamily {
            family: "cyclic_power".into(),
        }),
    }
}
