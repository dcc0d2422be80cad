//! Semisimplicity of the natural module `F_q^n` by brute force.
//!
//! This is deliberately independent of the building code: it enumerates
//! every subspace, keeps the invariant ones and searches for invariant
//! complements.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::groups::MatGroup;
use crate::subspace::Subspace;

/// All `H`-invariant subspaces (including `0` and `F_q^n`) with the
/// covering relation of the inclusion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleLattice {
    pub invariant_subspaces: Vec<Subspace>,
    /// Index pairs `(a, b)` with `a ⊂ b` a covering.
    pub hasse: Vec<(usize, usize)>,
}

/// Every generator maps every basis vector of `v` into `v`.
fn is_invariant(h: &MatGroup, v: &Subspace) -> bool {
    let field = h.field();
    h.generating_set().iter().all(|g| {
        (0..v.dim()).all(|r| {
            let x = v.basis().row(r);
            let n = x.len();
            let gx: Vec<_> = (0..n)
                .map(|i| (0..n).fold(0, |acc, j| field.add(acc, field.mul(g.get(i, j), x[j]))))
                .collect();
            v.contains_vector(field, &gx)
        })
    })
}

pub fn invariant_subspaces(h: &MatGroup, caps: &Caps) -> Result<SubmoduleLattice> {
    invariant_subspaces_with(h, caps, Strategy::default())
}

pub fn invariant_subspaces_with(
    h: &MatGroup,
    caps: &Caps,
    strategy: Strategy,
) -> Result<SubmoduleLattice> {
    let field = h.field();
    let n = h.degree();
    let count = Subspace::count_all(n, field.order() as u64);
    if count > caps.max_subspaces {
        return Err(Error::TooManySubspaces {
            count,
            cap: caps.max_subspaces,
        });
    }
    let all = Subspace::enumerate_all(field, n);
    let inv = exec::filter(strategy, &all, |v| is_invariant(h, v));
    let contains = |a: &Subspace, b: &Subspace| a.contains(field, b).unwrap_or(false);
    for a in &inv {
        for b in &inv {
            let s = a.sum(field, b)?;
            let i = a.intersect(field, b)?;
            assert!(
                inv.contains(&s) && inv.contains(&i),
                "invariant subspaces not closed under + and ∩"
            );
        }
    }
    let mut hasse = Vec::new();
    for (i, a) in inv.iter().enumerate() {
        for (j, b) in inv.iter().enumerate() {
            if a.dim() < b.dim()
                && contains(b, a)
                && !inv.iter().any(|c| {
                    c.dim() > a.dim() && c.dim() < b.dim() && contains(c, a) && contains(b, c)
                })
            {
                hasse.push((i, j));
            }
        }
    }
    Ok(SubmoduleLattice {
        invariant_subspaces: inv,
        hasse,
    })
}

impl SubmoduleLattice {
    /// An invariant complement of `w`, if any.
    pub fn complement(&self, h: &MatGroup, w: &Subspace) -> Option<&Subspace> {
        let field = h.field();
        let n = h.degree();
        self.invariant_subspaces.iter().find(|c| {
            c.dim() + w.dim() == n && c.intersect(field, w).map(|i| i.is_zero()).unwrap_or(false)
        })
    }
}

/// Is `F_q^n` a semisimple `H`-module: does every invariant subspace have an
/// invariant complement?
pub fn is_semisimple_module(h: &MatGroup, caps: &Caps) -> Result<bool> {
    let lat = invariant_subspaces(h, caps)?;
    Ok(lat
        .invariant_subspaces
        .iter()
        .all(|w| lat.complement(h, w).is_some()))
}
