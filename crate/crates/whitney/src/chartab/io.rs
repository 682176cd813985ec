//! Character-table JSON interchange. Bit-exact integers only; cyclotomic
//! values are carried as {m, coeffs} with coeffs indexed by the exponent of
//! zeta_m. Imported tables must survive the full validation gauntlet
//! (orthogonality, the Frobenius-Schur involution identity, and the class
//! tags the target theorem needs) before they are usable.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::GroupSpec;

use super::{CharacterTable, ClassInfo, Irrep, TableSource, Tag};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TableFile {
    schema_version: u32,
    group: GroupBlock,
    classes: Vec<ClassBlock>,
    irreducibles: Vec<IrrepBlock>,
}

#[derive(Serialize, Deserialize)]
struct GroupBlock {
    #[serde(flatten)]
    spec: GroupSpec,
    order: u64,
}

#[derive(Serialize, Deserialize)]
struct ClassBlock {
    size: u64,
    order_of_rep: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tags: Vec<Tag>,
}

#[derive(Serialize, Deserialize)]
struct IrrepBlock {
    degree: i64,
    fs: i8,
    values: Vec<ValueJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ValueJson {
    Int(i64),
    Cyc { m: u32, coeffs: Vec<i64> },
}

impl ValueJson {
    fn from_cyclotomic(v: &Cyclotomic) -> ValueJson {
        match v.as_i64() {
            Some(n) => ValueJson::Int(n),
            None => {
                let m = v.conductor();
                let mut coeffs = v.lifted_coeffs(m);
                coeffs.resize(m as usize, 0);
                ValueJson::Cyc { m, coeffs }
            }
        }
    }

    fn to_cyclotomic(&self) -> Result<Cyclotomic> {
        match self {
            ValueJson::Int(n) => Ok(Cyclotomic::from_i64(*n)),
            ValueJson::Cyc { m, coeffs } => {
                if *m == 0 || coeffs.len() > *m as usize {
                    return Err(Error::ImportRejected(format!(
                        "cyclotomic value with conductor {m} and {} coefficients",
                        coeffs.len()
                    )));
                }
                Ok(Cyclotomic::reduce(*m, coeffs.clone()))
            }
        }
    }
}

pub fn export_json(table: &CharacterTable) -> String {
    let file = TableFile {
        schema_version: SCHEMA_VERSION,
        group: GroupBlock {
            spec: table.group,
            order: table.order,
        },
        classes: table
            .classes
            .iter()
            .map(|c| ClassBlock {
                size: c.size,
                order_of_rep: c.rep_order,
                tags: c.tags.clone(),
            })
            .collect(),
        irreducibles: table
            .irreps
            .iter()
            .map(|ir| IrrepBlock {
                degree: ir.degree,
                fs: ir.fs,
                values: ir.values.iter().map(ValueJson::from_cyclotomic).collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("schema serializes")
}

/// Tags every theorem evaluator needs for a family; import refuses files
/// missing them.
fn required_tags(spec: &GroupSpec) -> Vec<Tag> {
    match spec {
        GroupSpec::Cyclic { n } if n % 2 == 0 => vec![Tag::MinusIdentity],
        GroupSpec::Cyclic { .. } | GroupSpec::CyclicPower { .. } => vec![],
        GroupSpec::Sl2 { q } if q % 2 == 0 => vec![Tag::N1],
        GroupSpec::Sl2 { .. } => vec![Tag::MinusIdentity],
        GroupSpec::Sl3 { .. } => vec![Tag::A1],
        GroupSpec::Sp4 { .. } => vec![Tag::MinusIdentity, Tag::G1],
        GroupSpec::Sp6 { .. } => vec![Tag::MinusIdentity, Tag::G1, Tag::G2],
    }
}

pub fn import_json(text: &str) -> Result<CharacterTable> {
    let file: TableFile =
        serde_json::from_str(text).map_err(|e| Error::ImportRejected(format!("schema: {e}")))?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::ImportRejected(format!(
            "schema version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    let order = file.group.order;
    if order == 0 || file.classes.is_empty() {
        return Err(Error::ImportRejected("empty group".into()));
    }
    let size_sum: u64 = file.classes.iter().map(|c| c.size).sum();
    if size_sum != order {
        return Err(Error::ImportRejected(format!(
            "class sizes sum to {size_sum}, order is {order}"
        )));
    }
    if file.irreducibles.len() != file.classes.len() {
        return Err(Error::ImportRejected(format!(
            "{} irreducibles vs {} classes",
            file.irreducibles.len(),
            file.classes.len()
        )));
    }
    for (i, c) in file.classes.iter().enumerate() {
        if c.size == 0 || c.order_of_rep == 0 || order % c.order_of_rep != 0 {
            return Err(Error::ImportRejected(format!(
                "class {i}: size {} / representative order {}",
                c.size, c.order_of_rep
            )));
        }
    }

    let identity_candidates: Vec<usize> = file
        .classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.tags.contains(&Tag::Identity))
        .map(|(i, _)| i)
        .collect();
    let [identity_class] = identity_candidates[..] else {
        return Err(Error::ImportRejected(
            "exactly one class must be tagged `identity`".into(),
        ));
    };
    let idc = &file.classes[identity_class];
    if idc.size != 1 || idc.order_of_rep != 1 {
        return Err(Error::ImportRejected(
            "identity class must have size 1 and representative order 1".into(),
        ));
    }

    let exponent = file
        .classes
        .iter()
        .fold(1u64, |acc, c| acc.lcm(&c.order_of_rep));

    let mut irreps = Vec::with_capacity(file.irreducibles.len());
    for (row, ib) in file.irreducibles.iter().enumerate() {
        if ib.values.len() != file.classes.len() {
            return Err(Error::ImportRejected(format!(
                "row {row} has {} values for {} classes",
                ib.values.len(),
                file.classes.len()
            )));
        }
        let values: Vec<Cyclotomic> = ib
            .values
            .iter()
            .map(|v| v.to_cyclotomic())
            .collect::<Result<_>>()?;
        for (c, v) in values.iter().enumerate() {
            // chi(x) lies in the cyclotomic field of the order of x
            if file.classes[c].order_of_rep % v.conductor() as u64 != 0 {
                return Err(Error::ImportRejected(format!(
                    "row {row}, class {c}: value conductor {} does not divide element order {}",
                    v.conductor(),
                    file.classes[c].order_of_rep
                )));
            }
        }
        if values[identity_class].as_i64() != Some(ib.degree) || ib.degree < 1 {
            return Err(Error::ImportRejected(format!(
                "row {row}: identity value does not equal the stated degree {}",
                ib.degree
            )));
        }
        if !matches!(ib.fs, -1..=1) {
            return Err(Error::ImportRejected(format!(
                "row {row}: fs = {} out of range",
                ib.fs
            )));
        }
        let real = values.iter().all(|v| v.is_real());
        if (ib.fs != 0) != real {
            return Err(Error::ImportRejected(format!(
                "row {row}: fs = {} inconsistent with real-valuedness",
                ib.fs
            )));
        }
        irreps.push(Irrep {
            degree: ib.degree,
            fs: ib.fs,
            values,
        });
    }

    for (tag, label) in [
        (Tag::MinusIdentity, "minus_identity"),
        (Tag::G1, "g1"),
        (Tag::G2, "g2"),
        (Tag::A1, "a1"),
        (Tag::N1, "n1"),
    ] {
        for (i, c) in file.classes.iter().enumerate() {
            if c.tags.contains(&tag) {
                if c.order_of_rep != 2 {
                    return Err(Error::ImportRejected(format!(
                        "class {i} tagged `{label}` must consist of involutions"
                    )));
                }
                if tag == Tag::MinusIdentity && c.size != 1 {
                    return Err(Error::ImportRejected(format!(
                        "class {i} tagged `{label}` must be central (size 1)"
                    )));
                }
            }
        }
    }
    for tag in required_tags(&file.group.spec) {
        if !file.classes.iter().any(|c| c.tags.contains(&tag)) {
            return Err(Error::ImportRejected(format!(
                "missing class tag `{}` required for family {}",
                tag.as_str(),
                file.group.spec.family_name()
            )));
        }
    }

    let table = CharacterTable {
        group: file.group.spec,
        order,
        exponent,
        classes: file
            .classes
            .into_iter()
            .map(|c| ClassInfo {
                size: c.size,
                rep_order: c.order_of_rep,
                tags: c.tags,
            })
            .collect(),
        irreps,
        identity_class,
        source: TableSource::Imported,
    };
    // the heavy gauntlet: row/column orthogonality, degree identity, FS
    // involution identity
    table
        .verify()
        .map_err(|e| Error::ImportRejected(e.to_string()))?;
    Ok(table)
}
