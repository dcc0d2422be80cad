//! Subgroup corpora and per-subgroup cross-checks.
//!
//! The corpus of an ambient group consists of all cyclic subgroups and all
//! subgroups generated by two elements, deduplicated by element set. For
//! `GL_2(F_2)`, `GL_2(F_3)` and `GL_3(F_2)` this is every subgroup that has
//! at most two generators.

use std::collections::{HashSet, VecDeque};

use crate::building::Building;
use crate::caps::Caps;
use crate::cr::{is_cr, CrVerdict, FixedComplex};
use crate::error::Result;
use crate::exec::{self, Strategy};
use crate::groups::{BuildingAutoSet, MatGroup};
use crate::oracle::is_semisimple_module;
use crate::topology::{
    classify, levi_sphere_containment, order_complex, reduced_homology, HomologyProfile,
    LeviSearch, TopoClass,
};

/// Multiplication table of a finite group on element indices.
struct Table {
    mul: Vec<u32>,
    order: usize,
    identity: u32,
}

impl Table {
    fn new(g: &MatGroup, strategy: Strategy) -> Table {
        let els = g.elements();
        let order = els.len();
        let rows: Vec<Vec<u32>> = exec::map(strategy, els, |a| {
            els.iter()
                .map(|b| g.index_of(&a.mul(g.field(), b)).expect("group is closed") as u32)
                .collect()
        });
        let identity = g
            .index_of(&crate::matrix::FqMatrix::identity(g.degree()))
            .expect("identity") as u32;
        Table {
            mul: rows.concat(),
            order,
            identity,
        }
    }

    fn closure(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut out = vec![self.identity];
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul[x as usize * self.order + s as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Cyclic and two-generated subgroups of `ambient`, ordered by group order
/// and then by element set.
pub fn enumerate_subgroups(ambient: &MatGroup, strategy: Strategy) -> Vec<MatGroup> {
    let table = Table::new(ambient, strategy);
    let n = table.order as u32;
    let found: Vec<Vec<(Vec<u32>, Vec<u32>)>> = exec::map_range(strategy, n as usize, |a| {
        let a = a as u32;
        let mut local = Vec::new();
        local.push((table.closure(&[a]), vec![a]));
        for b in a + 1..n {
            local.push((table.closure(&[a, b]), vec![a, b]));
        }
        local
    });
    let mut seen = HashSet::new();
    let mut groups: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for (set, gens) in found.into_iter().flatten() {
        if seen.insert(set.clone()) {
            groups.push((set, gens));
        }
    }
    groups.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    let els = ambient.elements();
    groups
        .into_iter()
        .map(|(set, gens)| {
            let gens = gens
                .iter()
                .filter(|&&i| i != table.identity)
                .map(|&i| els[i as usize].clone())
                .collect();
            let elements = set.iter().map(|&i| els[i as usize].clone()).collect();
            MatGroup::from_parts(ambient.field(), ambient.degree(), gens, elements)
        })
        .collect()
}

/// Outcome of the Levi sphere search, without the sphere itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LeviOutcome {
    Found,
    NotFound,
    Inconclusive,
}

impl From<&LeviSearch> for LeviOutcome {
    fn from(s: &LeviSearch) -> Self {
        match s {
            LeviSearch::Found(_) => LeviOutcome::Found,
            LeviSearch::NotFound => LeviOutcome::NotFound,
            LeviSearch::Inconclusive => LeviOutcome::Inconclusive,
        }
    }
}

/// All checks for one subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusRow {
    pub group: MatGroup,
    pub verdict: CrVerdict,
    pub witnesses_valid: bool,
    pub semisimple: bool,
    pub stable_flags: usize,
    pub dim: isize,
    pub homology: HomologyProfile,
    pub class: TopoClass,
    pub levi: LeviOutcome,
}

impl CorpusRow {
    pub fn is_cr(&self) -> bool {
        self.verdict.is_cr()
    }

    pub fn oracle_agrees(&self) -> bool {
        self.is_cr() == self.semisimple
    }

    /// `cr ⇔ not point-like ⇔ Levi sphere found`, and a cr complex is a
    /// bouquet in the top degree. `None` for an empty fixed set.
    pub fn topology_agrees(&self) -> Option<bool> {
        if self.stable_flags == 0 {
            return None;
        }
        let cr = self.is_cr();
        let shape = match &self.class {
            TopoClass::PointLike => !cr,
            TopoClass::SphereBouquetLike { dim, .. } => cr && *dim as isize == self.dim,
            TopoClass::Other => false,
        };
        Some(
            shape
                && (self.levi == LeviOutcome::Found) == cr
                && self.levi != LeviOutcome::Inconclusive,
        )
    }

    pub fn consistent(&self) -> bool {
        self.witnesses_valid && self.oracle_agrees() && self.topology_agrees() != Some(false)
    }
}

pub fn evaluate(b: &Building, h: &MatGroup, caps: &Caps) -> Result<CorpusRow> {
    evaluate_with(b, h, caps, Strategy::Sequential)
}

pub fn evaluate_with(
    b: &Building,
    h: &MatGroup,
    caps: &Caps,
    strategy: Strategy,
) -> Result<CorpusRow> {
    crate::cr::check_group(b, h)?;
    let fc = FixedComplex::with_strategy(b, &BuildingAutoSet::from_group(h), strategy)?;
    let verdict = is_cr(&fc);
    let homology = reduced_homology(&order_complex(&fc, caps)?);
    let dim = fc.dim();
    Ok(CorpusRow {
        witnesses_valid: fc.validate(&verdict),
        semisimple: is_semisimple_module(h, caps)?,
        stable_flags: fc.stable().len(),
        dim,
        class: classify(&homology, dim),
        homology,
        levi: LeviOutcome::from(&levi_sphere_containment(&fc, caps)),
        verdict,
        group: h.clone(),
    })
}

/// Evaluates every group; an error on one group does not stop the others.
pub fn evaluate_all(
    b: &Building,
    groups: &[MatGroup],
    caps: &Caps,
    strategy: Strategy,
) -> Vec<Result<CorpusRow>> {
    exec::map(strategy, groups, |h| {
        evaluate_with(b, h, caps, Strategy::Sequential)
    })
}

/// Pairs `(i, j)` of corpus indices with `groups[j] ⊴ groups[i]`.
pub fn normal_pairs(groups: &[MatGroup], strategy: Strategy) -> Vec<(usize, usize)> {
    exec::map_range(strategy, groups.len(), |i| {
        (0..groups.len())
            .filter(|&j| {
                groups[j].order() <= groups[i].order() && groups[i].order() % groups[j].order() == 0
            })
            .filter(|&j| groups[j].is_subgroup_of(&groups[i]) && groups[j].is_normal_in(&groups[i]))
            .map(|j| (i, j))
            .collect::<Vec<_>>()
    })
    .concat()
}
