//! Named subgroups with verified structure tags: centers, diagonal tori, the
//! block subgroup X of Sp(2n,q), the unipotent subgroup N of SL(2,2^r), and
//! the canonical elementary-abelian 2-subgroups the restriction oracle uses.

use serde::{Deserialize, Serialize};

use super::{GroupData, GroupSpec};
use crate::error::{Error, Result};
use crate::field::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubgroupName {
    Center,
    DiagonalTorus,
    BlockX,
    UnipotentN,
    ElemAbelian2,
}

impl SubgroupName {
    pub fn as_str(&self) -> &'static str {
        match self {
            SubgroupName::Center => "Center",
            SubgroupName::DiagonalTorus => "DiagonalTorus",
            SubgroupName::BlockX => "BlockX",
            SubgroupName::UnipotentN => "UnipotentN",
            SubgroupName::ElemAbelian2 => "ElemAbelian2",
        }
    }
}

/// Verified abstract structure of a subgroup.
#[derive(Clone, Debug)]
pub enum Structure {
    /// C_2^k with a fixed ordered basis; subgroup elements are indexed by
    /// basis bitmask (element i = product of basis elements in the bits of i).
    ElemAbelian2 { basis: Vec<u32> },
    /// Cyclic with a chosen generator; elements are its powers in order.
    Cyclic { generator: u32, order: u64 },
    /// Product of cyclic factors with chosen generators (diagonal tori).
    Torus { generators: Vec<u32>, orders: Vec<u64> },
    /// n commuting SL(2,q) blocks (the subgroup X).
    Sl2Blocks { n: u32 },
}

/// A subgroup given by its parent element indices in a canonical order.
#[derive(Clone, Debug)]
pub struct SubgroupEmbedding {
    pub name: SubgroupName,
    pub elements: Vec<u32>,
    pub structure: Structure,
}

impl SubgroupEmbedding {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    /// Rank k for C_2^k structures.
    pub fn rank2(&self) -> Option<u32> {
        match &self.structure {
            Structure::ElemAbelian2 { basis } => Some(basis.len() as u32),
            _ => None,
        }
    }
}

impl GroupData {
    pub fn subgroup(&self, name: SubgroupName) -> Result<SubgroupEmbedding> {
        let invalid = || Error::InvalidSubgroup {
            name: name.as_str().to_string(),
            family: self.spec().family_name().to_string(),
        };
        let emb = match (name, *self.spec()) {
            (SubgroupName::Center, _) => self.center(),
            (SubgroupName::ElemAbelian2, GroupSpec::Cyclic { n }) if n % 2 == 0 => {
                self.elem_abelian2(vec![self.pow(1, n as u64 / 2)])
            }
            (SubgroupName::ElemAbelian2, GroupSpec::CyclicPower { n, k }) if n % 2 == 0 => {
                let basis = (0..k)
                    .map(|i| self.pow((n as u64).pow(i) as u32, n as u64 / 2))
                    .collect();
                self.elem_abelian2(basis)
            }
            (SubgroupName::ElemAbelian2, GroupSpec::Sl2 { q }) if q % 2 == 1 => {
                let minus = self
                    .distinguished()
                    .minus_identity
                    .ok_or_else(|| Error::MissingDistinguished("-1".into()))?;
                self.elem_abelian2(vec![minus])
            }
            (SubgroupName::ElemAbelian2, GroupSpec::Sl2 { q }) if q % 2 == 0 => {
                self.unipotent_n()
            }
            (SubgroupName::UnipotentN, GroupSpec::Sl2 { q }) if q % 2 == 0 => self.unipotent_n(),
            (SubgroupName::ElemAbelian2, GroupSpec::Sl3 { q }) if q % 2 == 1 => {
                let field = self.field().expect("matrix group");
                let m1 = field.minus_one().index();
                let a1 = Mat::diagonal(field, &[m1, m1, 1]);
                let a2 = Mat::diagonal(field, &[m1, 1, m1]);
                self.elem_abelian2(vec![self.lookup(&a1)?, self.lookup(&a2)?])
            }
            (SubgroupName::ElemAbelian2, GroupSpec::Sp4 { q }) if q % 2 == 1 => {
                let field = self.field().expect("matrix group");
                let m1 = field.minus_one().index();
                // block order from the outermost (1,4) block inward
                let b1 = Mat::diagonal(field, &[m1, 1, 1, m1]);
                let b2 = Mat::diagonal(field, &[1, m1, m1, 1]);
                self.elem_abelian2(vec![self.lookup(&b1)?, self.lookup(&b2)?])
            }
            (SubgroupName::ElemAbelian2, GroupSpec::Sp6 { q }) if q % 2 == 1 => {
                let field = self.field().expect("matrix group");
                let m1 = field.minus_one().index();
                let b1 = Mat::diagonal(field, &[m1, 1, 1, 1, 1, m1]);
                let b2 = Mat::diagonal(field, &[1, m1, 1, 1, m1, 1]);
                let b3 = Mat::diagonal(field, &[1, 1, m1, m1, 1, 1]);
                self.elem_abelian2(vec![self.lookup(&b1)?, self.lookup(&b2)?, self.lookup(&b3)?])
            }
            (SubgroupName::DiagonalTorus, GroupSpec::Sl2 { .. })
            | (SubgroupName::DiagonalTorus, GroupSpec::Sl3 { .. })
            | (SubgroupName::DiagonalTorus, GroupSpec::Sp4 { .. })
            | (SubgroupName::DiagonalTorus, GroupSpec::Sp6 { .. }) => self.diagonal_torus(),
            (SubgroupName::BlockX, GroupSpec::Sp4 { .. })
            | (SubgroupName::BlockX, GroupSpec::Sp6 { .. }) => self.block_x(),
            _ => Err(invalid()),
        }?;
        Ok(emb)
    }

    fn lookup(&self, m: &Mat) -> Result<u32> {
        self.element_index(&m.encode())
            .ok_or_else(|| Error::MissingDistinguished(format!("{m:?}")))
    }

    fn center(&self) -> Result<SubgroupEmbedding> {
        let gens: Vec<u32> = self.generators().to_vec();
        let mut elements = Vec::new();
        for el in 0..self.order() as u32 {
            if gens.iter().all(|&g| self.mul(el, g) == self.mul(g, el)) {
                elements.push(el);
            }
        }
        // centers in scope are cyclic; find an element whose order equals |Z|
        let n = elements.len() as u64;
        let gen = elements
            .iter()
            .copied()
            .find(|&z| self.element_order(z) == n);
        let structure = match gen {
            Some(g) if n == 2 => Structure::ElemAbelian2 { basis: vec![g] },
            Some(g) => Structure::Cyclic {
                generator: g,
                order: n,
            },
            None => {
                return Err(Error::InvalidSubgroup {
                    name: "Center".into(),
                    family: format!("{} (non-cyclic center?)", self.spec().family_name()),
                })
            }
        };
        let emb = SubgroupEmbedding {
            name: SubgroupName::Center,
            elements: match &structure {
                Structure::ElemAbelian2 { basis } => self.mask_ordered(basis),
                Structure::Cyclic { generator, order } => self.power_ordered(*generator, *order),
                _ => unreachable!(),
            },
            structure,
        };
        self.verify_abelian(&emb)?;
        Ok(emb)
    }

    fn elem_abelian2(&self, basis: Vec<u32>) -> Result<SubgroupEmbedding> {
        let emb = SubgroupEmbedding {
            name: SubgroupName::ElemAbelian2,
            elements: self.mask_ordered(&basis),
            structure: Structure::ElemAbelian2 { basis },
        };
        self.verify_abelian(&emb)?;
        Ok(emb)
    }

    fn unipotent_n(&self) -> Result<SubgroupEmbedding> {
        let field = self.field().expect("matrix group");
        let r = field.r();
        let mut basis = Vec::with_capacity(r as usize);
        for k in 0..r {
            let mut m = Mat::identity(field, 2);
            m.set(0, 1, field.basis_element(k).index());
            basis.push(self.lookup(&m)?);
        }
        let emb = SubgroupEmbedding {
            name: SubgroupName::UnipotentN,
            elements: self.mask_ordered(&basis),
            structure: Structure::ElemAbelian2 { basis },
        };
        self.verify_abelian(&emb)?;
        Ok(emb)
    }

    fn diagonal_torus(&self) -> Result<SubgroupEmbedding> {
        let field = self.field().expect("matrix group");
        let q = field.q();
        let alpha = field.primitive_element().index();
        let alpha_inv = field.raw_inv(alpha)?;
        let dim = self.spec().matrix_dim().unwrap();
        let gens: Vec<Mat> = match self.spec() {
            GroupSpec::Sl2 { .. } => vec![Mat::diagonal(field, &[alpha, alpha_inv])],
            GroupSpec::Sl3 { .. } => vec![
                Mat::diagonal(field, &[alpha, 1, alpha_inv]),
                Mat::diagonal(field, &[1, alpha, alpha_inv]),
            ],
            GroupSpec::Sp4 { .. } | GroupSpec::Sp6 { .. } => {
                let half = dim / 2;
                (0..half)
                    .map(|i| {
                        let mut d = vec![1u64; dim];
                        d[i] = alpha;
                        d[dim - 1 - i] = alpha_inv;
                        Mat::diagonal(field, &d)
                    })
                    .collect()
            }
            _ => unreachable!(),
        };
        let gen_idx: Vec<u32> = gens.iter().map(|m| self.lookup(m)).collect::<Result<_>>()?;
        let orders: Vec<u64> = vec![q - 1; gen_idx.len()];
        // mixed-radix enumeration over the generator powers
        let total: u64 = orders.iter().product();
        let mut elements = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut el = 0u32;
            let mut rem = idx;
            for (g, &o) in gen_idx.iter().zip(&orders) {
                let e = rem % o;
                rem /= o;
                el = self.mul(el, self.pow(*g, e));
            }
            elements.push(el);
        }
        let structure = if gen_idx.len() == 1 {
            Structure::Cyclic {
                generator: gen_idx[0],
                order: orders[0],
            }
        } else {
            Structure::Torus {
                generators: gen_idx,
                orders,
            }
        };
        let emb = SubgroupEmbedding {
            name: SubgroupName::DiagonalTorus,
            elements,
            structure,
        };
        self.verify_abelian(&emb)?;
        Ok(emb)
    }

    /// Matrices supported on the diagonal or the antidiagonal; isomorphic to
    /// n commuting copies of SL(2,q) through the block projections.
    fn block_x(&self) -> Result<SubgroupEmbedding> {
        let field = self.field().expect("matrix group");
        let dim = self.spec().matrix_dim().unwrap();
        let half = dim / 2;
        let mut elements = Vec::new();
        for el in 0..self.order() as u32 {
            let m = self.matrix(el).unwrap();
            let mut on_pattern = true;
            'scan: for i in 0..dim {
                for j in 0..dim {
                    if i != j && i + j != dim - 1 && m.get(i, j) != 0 {
                        on_pattern = false;
                        break 'scan;
                    }
                }
            }
            if on_pattern {
                elements.push(el);
            }
        }
        let q = field.q();
        let sl2_order = q * (q * q - 1);
        let expected = sl2_order.pow(half as u32);
        if elements.len() as u64 != expected {
            return Err(Error::GenerationFailure {
                found: elements.len() as u64,
                expected,
            });
        }
        Ok(SubgroupEmbedding {
            name: SubgroupName::BlockX,
            elements,
            structure: Structure::Sl2Blocks { n: half as u32 },
        })
    }

    /// Elements of a C_2^k ordered by basis bitmask.
    fn mask_ordered(&self, basis: &[u32]) -> Vec<u32> {
        let k = basis.len();
        (0..1u32 << k)
            .map(|mask| {
                let mut el = 0u32;
                for (i, &b) in basis.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        el = self.mul(el, b);
                    }
                }
                el
            })
            .collect()
    }

    fn power_ordered(&self, gen: u32, order: u64) -> Vec<u32> {
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = 0u32;
        for _ in 0..order {
            out.push(cur);
            cur = self.mul(cur, gen);
        }
        out
    }

    /// Closure under product and inverse, distinctness, and the structure tag
    /// (commutativity and element orders).
    fn verify_abelian(&self, emb: &SubgroupEmbedding) -> Result<()> {
        let set: std::collections::HashSet<u32> = emb.elements.iter().copied().collect();
        if set.len() != emb.elements.len() {
            return Err(Error::GenerationFailure {
                found: set.len() as u64,
                expected: emb.elements.len() as u64,
            });
        }
        for &a in &emb.elements {
            if !set.contains(&self.inv(a)) {
                return Err(Error::InvalidSubgroup {
                    name: emb.name.as_str().into(),
                    family: "not closed under inverse".into(),
                });
            }
            for &b in &emb.elements {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::InvalidSubgroup {
                        name: emb.name.as_str().into(),
                        family: "not closed under product".into(),
                    });
                }
                if self.mul(a, b) != self.mul(b, a) {
                    return Err(Error::InvalidSubgroup {
                        name: emb.name.as_str().into(),
                        family: "not abelian".into(),
                    });
                }
            }
        }
        if let Structure::ElemAbelian2 { basis } = &emb.structure {
            for &b in basis {
                if self.mul(b, b) != 0 || b == 0 {
                    return Err(Error::InvalidSubgroup {
                        name: emb.name.as_str().into(),
                        family: "basis element is not an involution".into(),
                    });
                }
            }
            if emb.elements.len() != 1 << basis.len() {
                return Err(Error::InvalidSubgroup {
                    name: emb.name.as_str().into(),
                    family: "basis does not span".into(),
                });
            }
        }
        Ok(())
    }

    /// The 2x2 block of an X-element at block j (0-based: rows/cols j and
    /// dim-1-j).
    pub fn block_projection(&self, el: u32, block: usize) -> Option<Mat> {
        let field = self.field()?;
        let dim = self.spec().matrix_dim()?;
        let m = self.matrix(el)?;
        let (i, j) = (block, dim - 1 - block);
        let mut out = Mat::zero(field, 2);
        out.set(0, 0, m.get(i, i));
        out.set(0, 1, m.get(i, j));
        out.set(1, 0, m.get(j, i));
        out.set(1, 1, m.get(j, j));
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupData;

    #[test]
    fn sl2_center() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 3 }).unwrap();
        let z = g.subgroup(SubgroupName::Center).unwrap();
        assert_eq!(z.order(), 2);
        assert!(matches!(z.structure, Structure::ElemAbelian2 { .. }));
        assert_eq!(
            z.elements[1],
            g.distinguished().minus_identity.unwrap()
        );
    }

    #[test]
    fn sp4_elem_abelian() {
        let g = GroupData::build(GroupSpec::Sp4 { q: 3 }).unwrap();
        let e = g.subgroup(SubgroupName::ElemAbelian2).unwrap();
        assert_eq!(e.order(), 4);
        let Structure::ElemAbelian2 { basis } = &e.structure else {
            panic!("wrong structure")
        };
        // g1 = diag(1,-1,-1,1) is the second basis element
        assert_eq!(basis[1], g.distinguished().g1.unwrap());
        // mask order: 1, b1, b2, b1*b2 = -1
        assert_eq!(e.elements[0], 0);
        assert_eq!(e.elements[3], g.distinguished().minus_identity.unwrap());
    }

    #[test]
    fn sl2_even_unipotent() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 4 }).unwrap();
        let n = g.subgroup(SubgroupName::UnipotentN).unwrap();
        assert_eq!(n.order(), 4);
        let Structure::ElemAbelian2 { basis } = &n.structure else {
            panic!("wrong structure")
        };
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0], g.distinguished().n1.unwrap());
        // same subgroup under the oracle alias
        let e = g.subgroup(SubgroupName::ElemAbelian2).unwrap();
        assert_eq!(e.elements, n.elements);
    }

    #[test]
    fn sl3_elem_abelian_conjugate_involutions() {
        let g = GroupData::build(GroupSpec::Sl3 { q: 3 }).unwrap();
        let e = g.subgroup(SubgroupName::ElemAbelian2).unwrap();
        assert_eq!(e.order(), 4);
        // the three involutions are pairwise conjugate in SL(3,q)
        let classes: Vec<u32> = e.elements[1..].iter().map(|&x| g.class_of(x)).collect();
        assert!(classes.iter().all(|&c| c == classes[0]));
    }

    #[test]
    fn diagonal_torus_structure() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 5 }).unwrap();
        let t = g.subgroup(SubgroupName::DiagonalTorus).unwrap();
        assert_eq!(t.order(), 4);
        let g9 = GroupData::build(GroupSpec::Sl3 { q: 3 }).unwrap();
        let t9 = g9.subgroup(SubgroupName::DiagonalTorus).unwrap();
        assert_eq!(t9.order(), 4); // C_2 x C_2 for q = 3
    }

    #[test]
    fn block_x_of_sp4() {
        let g = GroupData::build(GroupSpec::Sp4 { q: 3 }).unwrap();
        let x = g.subgroup(SubgroupName::BlockX).unwrap();
        assert_eq!(x.order(), 24 * 24);
        // block projections are multiplicative and blocks commute
        let sample: Vec<u32> = x.elements.iter().copied().step_by(37).collect();
        for &a in sample.iter().take(8) {
            for &b in sample.iter().take(8) {
                let ab = g.mul(a, b);
                for blk in 0..2 {
                    let pa = g.block_projection(a, blk).unwrap();
                    let pb = g.block_projection(b, blk).unwrap();
                    let pab = g.block_projection(ab, blk).unwrap();
                    assert_eq!(pa.mul(&pb).unwrap(), pab);
                }
            }
        }
        // single-block involutions are conjugate in G
        let e = g.subgroup(SubgroupName::ElemAbelian2).unwrap();
        let Structure::ElemAbelian2 { basis } = &e.structure else {
            panic!()
        };
        assert_eq!(g.class_of(basis[0]), g.class_of(basis[1]));
    }

    #[test]
    fn invalid_requests() {
        let g = GroupData::build(GroupSpec::Sl2 { q: 3 }).unwrap();
        assert!(matches!(
            g.subgroup(SubgroupName::UnipotentN),
            Err(Error::InvalidSubgroup { .. })
        ));
        let c = GroupData::build(GroupSpec::Cyclic { n: 6 }).unwrap();
        let e = c.subgroup(SubgroupName::ElemAbelian2).unwrap();
        assert_eq!(e.order(), 2);
        assert_eq!(e.elements[1], 3);
    }
}
