//! Dixon-Schneider character table computation.
//!
//! All linear algebra happens in GF(l) for a prime l = 1 (mod m) with
//! l > 2 sqrt(|G|), where m is the group exponent: the class-sum matrices are
//! simultaneously diagonalized over GF(l), the one-dimensional common
//! eigenspaces are the central characters mod l, and the bound on l makes the
//! lift of eigenvalue multiplicities back to characteristic zero unique.

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::GroupData;

use super::{CharacterTable, ClassInfo, Irrep, TableSource, Tag};

/// Upper bound of the prime search, reported in the error when exceeded.
const PRIME_SEARCH_BOUND: u64 = 1 << 31;

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

/// Smallest prime l = 1 (mod m) with l > 2 sqrt(order), by linear scan.
fn find_dixon_prime(m: u64, order: u64) -> Result<u64> {
    let big_enough = |l: u64| (l as u128) * (l as u128) > 4 * order as u128;
    let mut l = m + 1;
    while l <= PRIME_SEARCH_BOUND {
        if big_enough(l) && is_prime(l) {
            return Ok(l);
        }
        l += m;
    }
    Err(Error::NoSuitablePrime {
        m,
        lower: (4 * order as u128).isqrt() as u64,
        bound: PRIME_SEARCH_BOUND,
    })
}

#[inline]
fn mul_mod(a: u64, b: u64, l: u64) -> u64 {
    a * b % l
}

fn pow_mod(mut a: u64, mut k: u64, l: u64) -> u64 {
    let mut acc = 1u64;
    a %= l;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul_mod(acc, a, l);
        }
        a = mul_mod(a, a, l);
        k >>= 1;
    }
    acc
}

fn inv_mod(a: u64, l: u64) -> u64 {
    pow_mod(a, l - 2, l)
}

fn neg_mod(a: u64, l: u64) -> u64 {
    if a == 0 {
        0
    } else {
        l - a
    }
}

/// Smallest integer of multiplicative order exactly m mod l (m | l-1):
/// z = g^((l-1)/m) for the smallest primitive root g.
fn element_of_order(m: u64, l: u64) -> u64 {
    let mut factors = Vec::new();
    let mut x = l - 1;
    let mut p = 2;
    while p * p <= x {
        if x % p == 0 {
            factors.push(p);
            while x % p == 0 {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        factors.push(x);
    }
    let g = (2..l)
        .find(|&g| factors.iter().all(|&p| pow_mod(g, (l - 1) / p, l) != 1))
        .expect("GF(l)* is cyclic");
    pow_mod(g, (l - 1) / m, l)
}

/// Class-sum matrix N_r over GF(l): N[s][t] = #{x in C_r : x^-1 z_t in C_s},
/// the structure constant of K_r K_s on K_t.
fn class_matrix(g: &GroupData, r: usize, l: u64) -> Vec<Vec<u64>> {
    let k = g.class_count();
    let mut n = vec![vec![0u64; k]; k];
    let reps: Vec<u32> = g.class_reps().to_vec();
    for &x in g.class_elements(r) {
        let xinv = g.inv(x);
        for (t, &rep) in reps.iter().enumerate() {
            let s = g.class_of(g.mul(xinv, rep)) as usize;
            n[s][t] = (n[s][t] + 1) % l;
        }
    }
    n
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut Vec<Vec<u64>>, l: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let ncols = if rows.is_empty() { 0 } else { rows[0].len() };
    let mut row = 0;
    for col in 0..ncols {
        if row >= rows.len() {
            break;
        }
        let Some(pr) = (row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(row, pr);
        let pinv = inv_mod(rows[row][col], l);
        for c in col..ncols {
            rows[row][c] = mul_mod(rows[row][c], pinv, l);
        }
        for r in 0..rows.len() {
            if r != row && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in col..ncols {
                    let sub = mul_mod(f, rows[row][c], l);
                    rows[r][c] = (rows[r][c] + neg_mod(sub, l)) % l;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    rows.truncate(row);
    pivots
}

/// Basis of the null space of a square matrix.
fn kernel(mat: &[Vec<u64>], l: u64) -> Vec<Vec<u64>> {
    let d = mat.len();
    let mut rows: Vec<Vec<u64>> = mat.to_vec();
    let pivots = rref(&mut rows, l);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..d {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = neg_mod(rows[ri][free], l);
        }
        basis.push(v);
    }
    basis
}

/// Characteristic polynomial by Faddeev-LeVerrier; requires l > d so the
/// divisions by 1..d are invertible. Coefficients constant term first.
fn char_poly(mat: &[Vec<u64>], l: u64) -> Vec<u64> {
    let d = mat.len();
    assert!((d as u64) < l, "char_poly needs l > dimension");
    let mut coeffs = vec![0u64; d + 1];
    coeffs[d] = 1;
    // M_1 = I, c_{d-1} = -tr(A M_1); M_{k+1} = A M_k + c_{d-k} I
    let mut mk: Vec<Vec<u64>> = (0..d)
        .map(|i| (0..d).map(|j| u64::from(i == j)).collect())
        .collect();
    for step in 1..=d {
        // A * M_k
        let mut am = vec![vec![0u64; d]; d];
        for i in 0..d {
            for t in 0..d {
                let a = mat[i][t];
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    am[i][j] = (am[i][j] + mul_mod(a, mk[t][j], l)) % l;
                }
            }
        }
        let trace = (0..d).fold(0u64, |acc, i| (acc + am[i][i]) % l);
        let c = mul_mod(neg_mod(trace, l), inv_mod(step as u64, l), l);
        coeffs[d - step] = c;
        if step < d {
            mk = am;
            for i in 0..d {
                mk[i][i] = (mk[i][i] + c) % l;
            }
        }
    }
    coeffs
}

fn eval_poly(coeffs: &[u64], x: u64, l: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = (mul_mod(acc, x, l) + c) % l;
    }
    acc
}

/// A subspace of GF(l)^k held as an RREF basis (rows), so membership and
/// coordinates are a pivot lookup.
struct Subspace {
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn full(k: usize) -> Subspace {
        Subspace {
            rows: (0..k)
                .map(|i| (0..k).map(|j| u64::from(i == j)).collect())
                .collect(),
            pivots: (0..k).collect(),
        }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Matrix of the action of N on this subspace (N must preserve it).
    fn restrict(&self, n: &[Vec<u64>], l: u64) -> Result<Vec<Vec<u64>>> {
        let d = self.dim();
        let k = n.len();
        let mut action = vec![vec![0u64; d]; d];
        for (j, b) in self.rows.iter().enumerate() {
            // w = N * b
            let mut w = vec![0u64; k];
            for (s, ws) in w.iter_mut().enumerate() {
                let mut acc = 0u64;
                for t in 0..k {
                    acc = (acc + mul_mod(n[s][t], b[t], l)) % l;
                }
                *ws = acc;
            }
            // coordinates from pivot entries, then membership check
            let coords: Vec<u64> = self.pivots.iter().map(|&p| w[p]).collect();
            let mut reconstructed = vec![0u64; k];
            for (i, &c) in coords.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for t in 0..k {
                    reconstructed[t] = (reconstructed[t] + mul_mod(c, self.rows[i][t], l)) % l;
                }
            }
            if reconstructed != w {
                return Err(Error::SplittingFailure);
            }
            for (i, &c) in coords.iter().enumerate() {
                action[i][j] = c;
            }
        }
        Ok(action)
    }

    /// Splits into the eigenspaces of the restricted action of N.
    fn split(&self, n: &[Vec<u64>], l: u64) -> Result<Vec<Subspace>> {
        let d = self.dim();
        let action = self.restrict(n, l)?;
        // eigenvalues: roots of the characteristic polynomial when l > d,
        // otherwise scan every lambda directly
        let eigenvalues: Vec<u64> = if (d as u64) < l {
            let cp = char_poly(&action, l);
            (0..l).filter(|&x| eval_poly(&cp, x, l) == 0).collect()
        } else {
            (0..l).collect()
        };
        let mut out = Vec::new();
        let mut total = 0;
        for lambda in eigenvalues {
            let mut shifted = action.clone();
            for i in 0..d {
                shifted[i][i] = (shifted[i][i] + neg_mod(lambda, l)) % l;
            }
            let ker = kernel(&shifted, l);
            if ker.is_empty() {
                continue;
            }
            total += ker.len();
            // map coordinate vectors back into GF(l)^k
            let k = self.rows[0].len();
            let mut rows: Vec<Vec<u64>> = ker
                .iter()
                .map(|coords| {
                    let mut v = vec![0u64; k];
                    for (i, &c) in coords.iter().enumerate() {
                        if c == 0 {
                            continue;
                        }
                        for t in 0..k {
                            v[t] = (v[t] + mul_mod(c, self.rows[i][t], l)) % l;
                        }
                    }
                    v
                })
                .collect();
            let pivots = rref(&mut rows, l);
            out.push(Subspace { rows, pivots });
        }
        if total != d {
            // a class matrix must act diagonalizably on every invariant
            // subspace; anything else means corrupted class data
            return Err(Error::SplittingFailure);
        }
        Ok(out)
    }
}

/// Exact irreducible character table via Dixon-Schneider.
pub fn dixon_table(g: &GroupData) -> Result<CharacterTable> {
    let k = g.class_count();
    let order = g.order();
    let m = g.exponent();
    let l = find_dixon_prime(m, order)?;
    let z = element_of_order(m, l);

    // deterministic splitting order: by class size, then class index,
    // skipping the identity class (its class matrix is the identity)
    let id_class = g.identity_class() as usize;
    let mut split_order: Vec<usize> = (0..k).filter(|&c| c != id_class).collect();
    split_order.sort_by_key(|&c| (g.class_sizes()[c], c));

    let mut subspaces = vec![Subspace::full(k)];
    for r in split_order {
        if subspaces.iter().all(|s| s.dim() == 1) {
            break;
        }
        let n = class_matrix(g, r, l);
        let mut next = Vec::with_capacity(subspaces.len());
        for s in subspaces {
            if s.dim() == 1 {
                next.push(s);
            } else {
                next.extend(s.split(&n, l)?);
            }
        }
        subspaces = next;
    }
    if subspaces.len() != k || subspaces.iter().any(|s| s.dim() != 1) {
        return Err(Error::SplittingFailure);
    }

    let sizes = g.class_sizes();
    let inv_sizes: Vec<u64> = sizes.iter().map(|&s| inv_mod(s % l, l)).collect();
    let order_mod = order % l;

    // precompute the power walks and orders once per class
    let rep_orders = g.rep_orders();
    let walks: Vec<Vec<u32>> = (0..k).map(|c| g.power_class_walk(c as u32)).collect();

    let mut irreps = Vec::with_capacity(k);
    for sub in &subspaces {
        let v = &sub.rows[0];
        if v[id_class] == 0 {
            return Err(Error::SplittingFailure);
        }
        // normalize so the identity coordinate is 1: u_c = |C_c| chi(c) / deg
        let scale = inv_mod(v[id_class], l);
        let u: Vec<u64> = v.iter().map(|&x| mul_mod(x, scale, l)).collect();
        // sum_c u_c u_{c*} / |C_c| = |G| / deg^2
        let mut s = 0u64;
        for c in 0..k {
            let cstar = g.inverse_class(c) as usize;
            s = (s + mul_mod(mul_mod(u[c], u[cstar], l), inv_sizes[c], l)) % l;
        }
        if s == 0 {
            return Err(Error::SplittingFailure);
        }
        let deg_sq = mul_mod(order_mod, inv_mod(s, l), l);
        // the true degree is the square root below l/2
        let degree = (1..=(l - 1) / 2)
            .find(|&d| mul_mod(d, d, l) == deg_sq)
            .ok_or(Error::SplittingFailure)?;
        // character values mod l
        let tchar: Vec<u64> = (0..k)
            .map(|c| mul_mod(mul_mod(degree, u[c], l), inv_sizes[c], l))
            .collect();

        // lift each value to a cyclotomic integer: chi(x) = sum mu_s zeta^s
        // where mu_s is the multiplicity of the eigenvalue zeta^s of pi(x)
        let mut values = Vec::with_capacity(k);
        for c in 0..k {
            let kc = rep_orders[c];
            let zc = pow_mod(z, m / kc, l);
            let zc_inv = inv_mod(zc, l);
            let kc_inv = inv_mod(kc % l, l);
            let walk = &walks[c];
            let mut dense = Vec::with_capacity(kc as usize);
            for s_exp in 0..kc {
                let mut acc = 0u64;
                let mut zpow = 1u64; // zc_inv^(s*l) accumulated over l
                let step = pow_mod(zc_inv, s_exp, l);
                for &cls in walk.iter() {
                    acc = (acc + mul_mod(tchar[cls as usize], zpow, l)) % l;
                    zpow = mul_mod(zpow, step, l);
                }
                let mu = mul_mod(acc, kc_inv, l);
                // true multiplicities are in [0, deg] and deg < l/2, so the
                // residue is the lift
                dense.push(mu as i64);
            }
            values.push(Cyclotomic::reduce(kc as u32, dense));
        }
        if values[id_class].as_i64() != Some(degree as i64) {
            return Err(Error::SplittingFailure);
        }
        irreps.push(Irrep {
            degree: degree as i64,
            fs: 0, // filled below
            values,
        });
    }

    // Frobenius-Schur indicators: nu = (1/|G|) sum_c |C_c| chi(c^2-class)
    let sq_class: Vec<usize> = (0..k).map(|c| g.power_map(c as u32, 2) as usize).collect();
    for ir in &mut irreps {
        let mut sum = Cyclotomic::zero();
        for c in 0..k {
            sum = sum.add(&ir.values[sq_class[c]].scale(sizes[c] as i64));
        }
        let nu = sum.as_i64().ok_or_else(|| {
            Error::TableValidation("Frobenius-Schur sum is irrational".into())
        })?;
        ir.fs = if nu == order as i64 {
            1
        } else if nu == -(order as i64) {
            -1
        } else if nu == 0 {
            0
        } else {
            return Err(Error::TableValidation(format!(
                "Frobenius-Schur sum {nu} is not 0 or +-|G|"
            )));
        };
    }

    // stable row order: by degree, then lexicographically by the coefficient
    // vectors of the values lifted to the group exponent
    let sort_m = m as u32;
    irreps.sort_by(|a, b| {
        a.degree.cmp(&b.degree).then_with(|| {
            for (va, vb) in a.values.iter().zip(&b.values) {
                let ca = va.lifted_coeffs(sort_m);
                let cb = vb.lifted_coeffs(sort_m);
                match ca.cmp(&cb) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    let classes = build_class_infos(g);
    let table = CharacterTable {
        group: *g.spec(),
        order,
        exponent: m,
        classes,
        irreps,
        identity_class: id_class,
        source: TableSource::Computed,
    };
    table.verify()?;
    Ok(table)
}

fn build_class_infos(g: &GroupData) -> Vec<ClassInfo> {
    let d = g.distinguished();
    let mut classes: Vec<ClassInfo> = (0..g.class_count())
        .map(|c| ClassInfo {
            size: g.class_sizes()[c],
            rep_order: g.rep_orders()[c],
            tags: Vec::new(),
        })
        .collect();
    let mut tag = |el: Option<u32>, t: Tag| {
        if let Some(e) = el {
            let c = g.class_of(e) as usize;
            if !classes[c].tags.contains(&t) {
                classes[c].tags.push(t);
            }
        }
    };
    tag(Some(0), Tag::Identity);
    tag(d.minus_identity, Tag::MinusIdentity);
    tag(d.g1, Tag::G1);
    tag(d.g2, Tag::G2);
    tag(d.a1, Tag::A1);
    tag(d.n1, Tag::N1);
    classes
}
