//! Complete reducibility relative to a block subgroup `K = c·(GL_{n_1} × ... × GL_{n_s})·c⁻¹`.
//!
//! Two independent decisions are computed. The direct one runs over the
//! cocharacters of `K`: `H` is relatively cr if whenever `H ≤ P_λ` for
//! `λ ∈ Y(K)` there is `μ ∈ Y(K)` with `P_μ = P_λ` and `H ≤ L_μ`. The
//! building one asks whether `H` acts completely reducibly on the join of the
//! block buildings `X(GL(U_1)) * ... * X(GL(U_s))`.

use std::collections::BTreeMap;

use crate::building::{cocharacter_parabolic, consecutive_blocks, Building, Cochar, Flag};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groups::MatGroup;
use crate::matrix::FqMatrix;
use crate::subspace::Subspace;

/// `c·(GL_{n_1} × ... × GL_{n_s})·c⁻¹`, stabilizing `U_i = c·⟨e_j : j in block i⟩`.
#[derive(Clone, Debug)]
pub struct BlockSubgroup {
    field: Field,
    sizes: Vec<usize>,
    conj: FqMatrix,
    parts: Vec<Subspace>,
}

impl BlockSubgroup {
    pub fn standard(field: &Field, sizes: &[usize]) -> Result<BlockSubgroup> {
        let n = sizes.iter().sum();
        Self::conjugated(field, sizes, FqMatrix::identity(n))
    }

    pub fn conjugated(field: &Field, sizes: &[usize], conj: FqMatrix) -> Result<BlockSubgroup> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::Invalid("block sizes must be positive".into()));
        }
        let n: usize = sizes.iter().sum();
        if conj.rows() != n || conj.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: conj.rows(),
            });
        }
        if !conj.is_invertible(field) {
            return Err(Error::Singular);
        }
        let parts = consecutive_blocks(sizes)
            .iter()
            .map(|b| Subspace::coordinate(n, b).image(field, &conj))
            .collect();
        Ok(BlockSubgroup {
            field: field.clone(),
            sizes: sizes.to_vec(),
            conj,
            parts,
        })
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn conjugator(&self) -> &FqMatrix {
        &self.conj
    }

    pub fn parts(&self) -> &[Subspace] {
        &self.parts
    }

    /// Does `g` stabilize every `U_i`?
    pub fn contains(&self, g: &FqMatrix) -> bool {
        self.parts.iter().all(|u| &u.image(&self.field, g) == u)
    }

    /// The permutation of the parts induced by `g`, if `g` permutes them.
    /// For `GL` blocks this is exactly the condition `g ∈ N(K)`.
    pub fn part_permutation(&self, g: &FqMatrix) -> Option<Vec<usize>> {
        self.parts
            .iter()
            .map(|u| {
                let image = u.image(&self.field, g);
                self.parts.iter().position(|w| *w == image)
            })
            .collect()
    }

    pub fn is_normalized_by(&self, g: &FqMatrix) -> bool {
        self.part_permutation(g).is_some()
    }

    /// All elements of `K(F_q)`.
    pub fn elements(&self, caps: &Caps) -> Result<Vec<FqMatrix>> {
        let mut blocks = Vec::with_capacity(self.sizes.len());
        let mut total: usize = 1;
        for &s in &self.sizes {
            let g = MatGroup::general_linear(&self.field, s, caps)?;
            total = total.saturating_mul(g.order());
            if total > caps.max_group_order {
                return Err(Error::GroupTooLarge {
                    cap: caps.max_group_order,
                });
            }
            blocks.push(g.elements().to_vec());
        }
        let ci = self.conj.inverse(&self.field)?;
        let mut out = Vec::with_capacity(total);
        let mut idx = vec![0usize; blocks.len()];
        loop {
            let parts: Vec<FqMatrix> = idx
                .iter()
                .zip(&blocks)
                .map(|(&i, b)| b[i].clone())
                .collect();
            let d = FqMatrix::block_diagonal(&parts);
            out.push(self.conj.mul(&self.field, &d).mul(&self.field, &ci));
            let mut k = 0;
            loop {
                if k == idx.len() {
                    out.sort();
                    return Ok(out);
                }
                idx[k] += 1;
                if idx[k] < blocks[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
}

/// A simplex of the join of the block buildings: one flag inside each part
/// `U_i` (possibly empty), not all empty. Members are subspaces of the
/// ambient `F_q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSimplex {
    pub parts: Vec<Flag>,
}

impl KSimplex {
    fn image(&self, field: &Field, g: &FqMatrix, perm: &[usize]) -> KSimplex {
        let mut parts = vec![Flag::empty(0); self.parts.len()];
        for (i, f) in self.parts.iter().enumerate() {
            parts[perm[i]] = f.image(field, g);
        }
        KSimplex { parts }
    }
}

/// Opposition of two flags of the subspace `u` inside `GL(u)`.
fn opposite_in(field: &Field, u: &Subspace, f: &Flag, g: &Flag) -> bool {
    if f.len() != g.len() {
        return false;
    }
    let r = f.len();
    (0..r).all(|i| {
        let v = &f.chain()[i];
        let w = &g.chain()[r - 1 - i];
        v.dim() + w.dim() == u.dim() && v.sum(field, w).map(|s| &s == u).unwrap_or(false)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeCrReport {
    /// Decision from the cocharacters of `K`.
    pub direct: bool,
    /// Decision from the action on the join of the block buildings.
    pub via_building: bool,
    /// Distinct pairs `(P_λ, L_λ)` for `λ ∈ Y(K)`.
    pub cocharacter_pairs: usize,
    pub k_simplices: usize,
    pub stable_k_simplices: usize,
    /// Least stable simplex of the join without a stable opposite.
    pub counterexample: Option<KSimplex>,
}

impl RelativeCrReport {
    pub fn agree(&self) -> bool {
        self.direct == self.via_building
    }
}

/// Flags of `F_q^s` carried into the ambient space by `x ↦ c·ι(x)`, where
/// `ι` places coordinates into `block`. Includes the empty flag.
fn part_flags(
    field: &Field,
    n: usize,
    block: &[usize],
    conj: &FqMatrix,
    caps: &Caps,
) -> Result<Vec<Flag>> {
    let s = block.len();
    let mut out = vec![Flag::empty(n)];
    if s < 2 {
        return Ok(out);
    }
    let b = Building::build(s, field, caps)?;
    let embed = |v: &Subspace| {
        let mut m = FqMatrix::zeros(v.dim(), n);
        for r in 0..v.dim() {
            for (j, &c) in block.iter().enumerate() {
                m.set(r, c, v.basis().get(r, j));
            }
        }
        Subspace::span(field, &m).image(field, conj)
    };
    for f in b.flags() {
        out.push(Flag::from_chain_unchecked(
            n,
            f.chain().iter().map(embed).collect(),
        ));
    }
    Ok(out)
}

/// Surjections `0..n → 0..k` for all `k`, i.e. weight preorders on the coordinates.
fn weight_preorders(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut w = vec![0i64; n];
    fn rec(i: usize, w: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == w.len() {
            let max = w.iter().copied().max().unwrap_or(0);
            if (0..=max).all(|v| w.contains(&v)) {
                out.push(w.clone());
            }
            return;
        }
        for v in 0..w.len() as i64 {
            w[i] = v;
            rec(i + 1, w, out);
        }
    }
    rec(0, &mut w, &mut out);
    out
}

/// Relative complete reducibility of `H ≤ N(K)`.
pub fn relative_cr(h: &MatGroup, k: &BlockSubgroup, caps: &Caps) -> Result<RelativeCrReport> {
    let field = h.field();
    if field != &k.field {
        return Err(Error::FieldMismatch(format!(
            "group over {} but K over {}",
            field, k.field
        )));
    }
    let n = k.n();
    if h.degree() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: h.degree(),
        });
    }
    let perms: Vec<(FqMatrix, Vec<usize>)> = h
        .generating_set()
        .into_iter()
        .map(|g| {
            k.part_permutation(&g)
                .map(|p| (g, p))
                .ok_or(Error::NotNormalizing)
        })
        .collect::<Result<_>>()?;

    // Direct: λ = x·c·ν·c⁻¹·x⁻¹ for a diagonal ν and x ∈ K(F_q). Then P_λ is
    // the x·c-image of the flag of ν and L_λ stabilizes the images of its
    // weight spaces.
    let k_elems = k.elements(caps)?;
    let mut pairs: BTreeMap<Flag, Vec<Vec<Subspace>>> = BTreeMap::new();
    for w in weight_preorders(n) {
        let par = cocharacter_parabolic(&Cochar(w));
        for x in &k_elems {
            let t = x.mul(field, &k.conj);
            let flag = par.flag.image(field, &t);
            let mut pieces: Vec<Subspace> = par
                .levi_blocks
                .iter()
                .map(|b| Subspace::coordinate(n, b).image(field, &t))
                .collect();
            pieces.sort();
            let levis = pairs.entry(flag).or_default();
            if !levis.contains(&pieces) {
                levis.push(pieces);
            }
        }
    }
    let cocharacter_pairs = pairs.values().map(Vec::len).sum();
    let direct = pairs
        .iter()
        .filter(|(flag, _)| h.lies_in_parabolic(flag))
        .all(|(_, levis)| {
            levis
                .iter()
                .any(|pieces| pieces.iter().all(|d| h.stabilizes(d)))
        });

    // Via the join of the block buildings.
    let per_part: Vec<Vec<Flag>> = consecutive_blocks(&k.sizes)
        .iter()
        .map(|b| part_flags(field, n, b, &k.conj, caps))
        .collect::<Result<_>>()?;
    let mut simplices = vec![Vec::new()];
    for flags in &per_part {
        let mut next = Vec::with_capacity(simplices.len() * flags.len());
        for s in &simplices {
            for f in flags {
                let mut t: Vec<Flag> = Vec::clone(s);
                t.push(f.clone());
                next.push(t);
            }
        }
        simplices = next;
    }
    let simplices: Vec<KSimplex> = simplices
        .into_iter()
        .filter(|p| p.iter().any(|f| !f.is_empty()))
        .map(|parts| KSimplex { parts })
        .collect();
    let stable: Vec<&KSimplex> = simplices
        .iter()
        .filter(|s| perms.iter().all(|(g, p)| &s.image(field, g, p) == *s))
        .collect();
    let is_opp = |a: &KSimplex, b: &KSimplex| {
        a.parts
            .iter()
            .zip(&b.parts)
            .zip(&k.parts)
            .all(|((f, g), u)| opposite_in(field, u, f, g))
    };
    let counterexample = stable
        .iter()
        .copied()
        .filter(|a| !stable.iter().any(|b| is_opp(a, b)))
        .min()
        .cloned();
    Ok(RelativeCrReport {
        direct,
        via_building: counterexample.is_none(),
        cocharacter_pairs,
        k_simplices: simplices.len(),
        stable_k_simplices: stable.len(),
        counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cr::group_cr;

    fn f(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    fn cyclic(field: &Field, rows: &[&[i64]]) -> MatGroup {
        let m = FqMatrix::from_ints(field, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
            .unwrap();
        MatGroup::closure(field, rows.len(), vec![m], &Caps::default()).unwrap()
    }

    #[test]
    fn weight_preorder_count_is_ordered_bell() {
        // ordered Bell (Fubini) numbers
        assert_eq!(weight_preorders(1).len(), 1);
        assert_eq!(weight_preorders(2).len(), 3);
        assert_eq!(weight_preorders(3).len(), 13);
        assert_eq!(weight_preorders(4).len(), 75);
    }

    #[test]
    fn block_elements() {
        let f2 = f(2, 1);
        let k = BlockSubgroup::standard(&f2, &[2, 1]).unwrap();
        let elems = k.elements(&Caps::default()).unwrap();
        assert_eq!(elems.len(), 6);
        assert!(elems.iter().all(|g| k.contains(g)));
        let f3 = f(3, 1);
        let t = BlockSubgroup::standard(&f3, &[1, 1]).unwrap();
        assert_eq!(t.elements(&Caps::default()).unwrap().len(), 4);
    }

    #[test]
    fn unipotent_in_gl2_block_is_not_relatively_cr() {
        let f2 = f(2, 1);
        let k = BlockSubgroup::standard(&f2, &[2, 1]).unwrap();
        let h = cyclic(&f2, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let rep = relative_cr(&h, &k, &Caps::default()).unwrap();
        assert_eq!(rep.k_simplices, 3);
        assert_eq!(rep.stable_k_simplices, 1);
        assert!(!rep.direct && !rep.via_building);
        let e1 = Flag::vertex(Subspace::coordinate(3, &[0]));
        assert_eq!(
            rep.counterexample,
            Some(KSimplex {
                parts: vec![e1, Flag::empty(3)]
            })
        );
    }

    #[test]
    fn k_equal_to_g_is_ordinary_cr() {
        let f2 = f(2, 1);
        let caps = Caps::default();
        let b = Building::build(3, &f2, &caps).unwrap();
        let k = BlockSubgroup::standard(&f2, &[3]).unwrap();
        for h in [
            cyclic(&f2, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
            cyclic(&f2, &[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]),
            cyclic(&f2, &[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
            MatGroup::trivial(&f2, 3),
        ] {
            let rep = relative_cr(&h, &k, &caps).unwrap();
            let plain = group_cr(&b, &h).unwrap().is_cr();
            assert_eq!(rep.via_building, plain);
            assert_eq!(rep.direct, plain);
        }
    }

    #[test]
    fn torus_k_is_vacuous() {
        let f3 = f(3, 1);
        let k = BlockSubgroup::standard(&f3, &[1, 1]).unwrap();
        let swap = cyclic(&f3, &[&[0, 1], &[1, 0]]);
        let rep = relative_cr(&swap, &k, &Caps::default()).unwrap();
        assert_eq!(rep.k_simplices, 0);
        assert!(rep.via_building && rep.direct);
    }

    #[test]
    fn non_normalizing_group_is_rejected() {
        let f2 = f(2, 1);
        let k = BlockSubgroup::standard(&f2, &[2, 1]).unwrap();
        let h = cyclic(&f2, &[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(
            relative_cr(&h, &k, &Caps::default()).unwrap_err(),
            Error::NotNormalizing
        );
    }

    #[test]
    fn conjugated_block_matches_conjugated_group() {
        let f2 = f(2, 1);
        let caps = Caps::default();
        let c = FqMatrix::from_ints(&f2, &[vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 1]]).unwrap();
        let k0 = BlockSubgroup::standard(&f2, &[2, 1]).unwrap();
        let k1 = BlockSubgroup::conjugated(&f2, &[2, 1], c.clone()).unwrap();
        for h in [
            cyclic(&f2, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]),
            cyclic(&f2, &[&[0, 1, 0], &[1, 1, 0], &[0, 0, 1]]),
        ] {
            let a = relative_cr(&h, &k0, &caps).unwrap();
            let b = relative_cr(&h.conjugate(&c).unwrap(), &k1, &caps).unwrap();
            assert_eq!((a.direct, a.via_building), (b.direct, b.via_building));
            assert_eq!(a.cocharacter_pairs, b.cocharacter_pairs);
        }
    }
}
