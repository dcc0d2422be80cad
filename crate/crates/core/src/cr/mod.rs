//! Fixed-point complexes and complete-reducibility decisions.
//!
//! For a group `Γ` acting on the building, `X^Γ` is the set of `Γ`-stable
//! flags. `Γ` acts completely reducibly iff every stable flag has a stable
//! opposite. When `Γ` contains the duality the stable flags form only a
//! poset (they sit in the barycentric subdivision); opposition is still
//! tested between stable flags directly.

mod relative;
mod variants;

pub use relative::{relative_cr, BlockSubgroup, KSimplex, RelativeCrReport};
pub use variants::{
    clifford_check, gsigma_cr, gsigma_cr_in_extension, quotient_transfer_check, sigma_cr,
    sigma_variant_cr, tau_search, CliffordReport, ExtensionCheck, GsigmaReport, QuotientReport,
    SigmaCrReport, SigmaVariantReport, TauReport, TauRound,
};

use crate::building::{graded_pieces, opposite, Building, Flag};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::field::Field;
use crate::groups::{BuildingAutoSet, MatGroup};

/// `X^Γ`: the `Γ`-stable flags of a building, in building order.
#[derive(Clone, Debug)]
pub struct FixedComplex {
    n: usize,
    field: Field,
    autos: BuildingAutoSet,
    stable: Vec<Flag>,
    type_preserving: bool,
}

impl FixedComplex {
    pub fn new(b: &Building, autos: &BuildingAutoSet) -> Result<FixedComplex> {
        Self::with_strategy(b, autos, Strategy::default())
    }

    pub fn with_strategy(
        b: &Building,
        autos: &BuildingAutoSet,
        strategy: Strategy,
    ) -> Result<FixedComplex> {
        autos.validate(b.field(), b.n())?;
        let field = b.field();
        let stable = exec::filter(strategy, b.flags(), |f| autos.fixes(field, f));
        Ok(FixedComplex {
            n: b.n(),
            field: field.clone(),
            autos: autos.clone(),
            stable,
            type_preserving: autos.is_type_preserving(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn autos(&self) -> &BuildingAutoSet {
        &self.autos
    }

    pub fn stable(&self) -> &[Flag] {
        &self.stable
    }

    pub fn is_empty(&self) -> bool {
        self.stable.is_empty()
    }

    pub fn type_preserving(&self) -> bool {
        self.type_preserving
    }

    pub fn contains(&self, f: &Flag) -> bool {
        self.stable.binary_search(f).is_ok()
    }

    /// Strict order of the stable poset: proper face relation.
    pub fn precedes(f: &Flag, g: &Flag) -> bool {
        f.len() < g.len() && f.is_face_of(g)
    }

    /// Dimension of the order complex of the stable poset (longest chain
    /// minus one); `-1` when empty. For type-preserving actions this is the
    /// largest simplex dimension.
    pub fn dim(&self) -> isize {
        // flags are sorted by length, so predecessors come first
        let mut longest = vec![1usize; self.stable.len()];
        for j in 0..self.stable.len() {
            for i in 0..j {
                if Self::precedes(&self.stable[i], &self.stable[j]) {
                    longest[j] = longest[j].max(longest[i] + 1);
                }
            }
        }
        longest.iter().copied().max().map_or(-1, |m| m as isize - 1)
    }

    /// Least stable opposite of `f`, if any.
    pub fn stable_opposite(&self, f: &Flag) -> Option<&Flag> {
        self.stable.iter().find(|g| opposite(&self.field, f, g))
    }

    /// Checks that every witness pair is opposite and consists of stable flags.
    pub fn validate(&self, verdict: &CrVerdict) -> bool {
        match verdict {
            CrVerdict::Reducible { witnesses } => {
                witnesses.len() == self.stable.len()
                    && witnesses.iter().all(|(f, g)| {
                        opposite(&self.field, f, g)
                            && self.autos.fixes(&self.field, f)
                            && self.autos.fixes(&self.field, g)
                    })
            }
            CrVerdict::NotReducible { counterexample } => {
                self.autos.fixes(&self.field, counterexample)
                    && self
                        .stable
                        .iter()
                        .all(|g| !opposite(&self.field, counterexample, g))
            }
        }
    }
}

pub fn fixed_complex(b: &Building, autos: &BuildingAutoSet) -> Result<FixedComplex> {
    FixedComplex::new(b, autos)
}

/// Outcome of a complete-reducibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrVerdict {
    /// Every stable flag paired with its least stable opposite.
    Reducible { witnesses: Vec<(Flag, Flag)> },
    /// The least stable flag without a stable opposite.
    NotReducible { counterexample: Flag },
}

impl CrVerdict {
    pub fn is_cr(&self) -> bool {
        matches!(self, CrVerdict::Reducible { .. })
    }

    pub fn witnesses(&self) -> &[(Flag, Flag)] {
        match self {
            CrVerdict::Reducible { witnesses } => witnesses,
            CrVerdict::NotReducible { .. } => &[],
        }
    }

    pub fn counterexample(&self) -> Option<&Flag> {
        match self {
            CrVerdict::Reducible { .. } => None,
            CrVerdict::NotReducible { counterexample } => Some(counterexample),
        }
    }
}

pub fn is_cr(fc: &FixedComplex) -> CrVerdict {
    is_cr_with(fc, Strategy::default())
}

pub fn is_cr_with(fc: &FixedComplex, strategy: Strategy) -> CrVerdict {
    let found = exec::map(strategy, &fc.stable, |f| fc.stable_opposite(f).cloned());
    let mut witnesses = Vec::with_capacity(found.len());
    for (f, g) in fc.stable.iter().zip(found) {
        match g {
            Some(g) => witnesses.push((f.clone(), g)),
            None => {
                return CrVerdict::NotReducible {
                    counterexample: f.clone(),
                }
            }
        }
    }
    CrVerdict::Reducible { witnesses }
}

/// Building-cr of a matrix group acting by conjugation.
pub fn group_cr(b: &Building, h: &MatGroup) -> Result<CrVerdict> {
    check_group(b, h)?;
    Ok(is_cr(&FixedComplex::new(
        b,
        &BuildingAutoSet::from_group(h),
    )?))
}

pub(crate) fn check_group(b: &Building, h: &MatGroup) -> Result<()> {
    if h.field() != b.field() {
        return Err(Error::FieldMismatch(format!(
            "group over {} but building over {}",
            h.field(),
            b.field()
        )));
    }
    if h.degree() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: b.n(),
            found: h.degree(),
        });
    }
    Ok(())
}

/// For an `H`-stable flag `f` with `H`-stable opposite `g`: does `H` lie in
/// the common Levi subgroup, i.e. stabilize every graded piece?
pub fn witness_levi_is_stable(field: &Field, h: &MatGroup, f: &Flag, g: &Flag) -> bool {
    match graded_pieces(field, f, g) {
        Some(pieces) => pieces.iter().all(|d| h.stabilizes(d)),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::groups::BuildingAuto;
    use crate::matrix::FqMatrix;
    use crate::subspace::Subspace;

    fn f(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    fn group(field: &Field, n: usize, gens: &[&[&[i64]]]) -> MatGroup {
        let gens = gens
            .iter()
            .map(|g| {
                FqMatrix::from_ints(field, &g.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
                    .unwrap()
            })
            .collect();
        MatGroup::closure(field, n, gens, &Caps::default()).unwrap()
    }

    #[test]
    fn trivial_action_fixes_everything() {
        let f2 = f(2, 1);
        let b = Building::build(2, &f2, &Caps::default()).unwrap();
        let autos =
            BuildingAutoSet::new(vec![BuildingAuto::Inner(FqMatrix::identity(2))], "id").unwrap();
        let fc = fixed_complex(&b, &autos).unwrap();
        assert_eq!(fc.stable().len(), 3);
        assert!(fc.type_preserving());
        assert_eq!(fc.dim(), 0);
    }

    #[test]
    fn unipotent_fixes_one_line_and_is_not_cr() {
        let f2 = f(2, 1);
        let b = Building::build(2, &f2, &Caps::default()).unwrap();
        let u = group(&f2, 2, &[&[&[1, 1], &[0, 1]]]);
        let fc = fixed_complex(&b, &BuildingAutoSet::from_group(&u)).unwrap();
        let e1 = Flag::vertex(Subspace::coordinate(2, &[0]));
        assert_eq!(fc.stable(), &[e1.clone()]);
        let v = is_cr(&fc);
        assert_eq!(v, CrVerdict::NotReducible { counterexample: e1 });
        assert!(fc.validate(&v));
    }

    #[test]
    fn swap_over_f3_is_cr() {
        let f3 = f(3, 1);
        let b = Building::build(2, &f3, &Caps::default()).unwrap();
        let s = group(&f3, 2, &[&[&[0, 1], &[1, 0]]]);
        let fc = fixed_complex(&b, &BuildingAutoSet::from_group(&s)).unwrap();
        let plus = Flag::vertex(Subspace::from_vectors(&f3, 2, &[vec![1, 1]]).unwrap());
        let minus = Flag::vertex(Subspace::from_vectors(&f3, 2, &[vec![1, 2]]).unwrap());
        let mut expected = vec![plus.clone(), minus.clone()];
        expected.sort();
        assert_eq!(fc.stable(), expected.as_slice());
        let v = is_cr(&fc);
        assert!(v.is_cr());
        assert!(fc.validate(&v));
        assert!(v.witnesses().contains(&(plus.clone(), minus.clone())));
        assert!(v.witnesses().contains(&(minus, plus)));
    }

    #[test]
    fn empty_fixed_set_is_vacuously_cr() {
        let f2 = f(2, 1);
        let b = Building::build(2, &f2, &Caps::default()).unwrap();
        let gl = MatGroup::general_linear(&f2, 2, &Caps::default()).unwrap();
        let fc = fixed_complex(&b, &BuildingAutoSet::from_group(&gl)).unwrap();
        assert!(fc.is_empty());
        assert_eq!(fc.dim(), -1);
        assert_eq!(is_cr(&fc), CrVerdict::Reducible { witnesses: vec![] });
    }

    #[test]
    fn duality_on_gl3_f2_fixes_three_isotropic_chambers() {
        let f2 = f(2, 1);
        let b = Building::build(3, &f2, &Caps::default()).unwrap();
        let autos = BuildingAutoSet::new(vec![BuildingAuto::Duality], "duality").unwrap();
        let fc = fixed_complex(&b, &autos).unwrap();
        assert!(!fc.type_preserving());
        assert_eq!(fc.stable().len(), 3);
        let isotropic = [vec![1, 1, 0], vec![1, 0, 1], vec![0, 1, 1]];
        for fl in fc.stable() {
            assert!(fl.is_chamber());
            let p = &fl.chain()[0];
            assert!(isotropic.iter().any(|v| p.contains_vector(&f2, v)));
            assert_eq!(fl.chain()[1], p.annihilator(&f2));
        }
        assert_eq!(fc.dim(), 0);
        let v = is_cr(&fc);
        assert!(v.is_cr());
        assert!(fc.validate(&v));
    }

    #[test]
    fn strategies_give_identical_verdicts() {
        let f2 = f(2, 1);
        let b = Building::build(3, &f2, &Caps::default()).unwrap();
        let u = group(&f2, 3, &[&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]]);
        let autos = BuildingAutoSet::from_group(&u);
        let seq = FixedComplex::with_strategy(&b, &autos, Strategy::Sequential).unwrap();
        let par = FixedComplex::with_strategy(&b, &autos, Strategy::Parallel).unwrap();
        assert_eq!(seq.stable(), par.stable());
        assert_eq!(
            is_cr_with(&seq, Strategy::Sequential),
            is_cr_with(&par, Strategy::Parallel)
        );
    }

    #[test]
    fn field_mismatch_is_reported() {
        let b = Building::build(2, &f(3, 1), &Caps::default()).unwrap();
        let h = MatGroup::trivial(&f(2, 1), 2);
        assert!(matches!(group_cr(&b, &h), Err(Error::FieldMismatch(_))));
    }
}
