//! σ-cr, G_σ-cr, Σ-cr, the Clifford property, normalizer search and the
//! central-quotient transfer.

use crate::building::{opposite, Building, Flag};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::groups::{BuildingAuto, BuildingAutoSet, MatGroup};

use super::{check_group, group_cr, is_cr, CrVerdict, FixedComplex};

/// Literal "contained in a stable parabolic ⇒ contained in a stable
/// opposite": for every flag `f` with `stable(f)` and `H ≤ Stab(f)` there is
/// an opposite `g` with `stable(g)` and `H ≤ Stab(g)`. Containment is
/// checked over all elements of `H`, independently of the fixed complex.
fn definitional_check(b: &Building, h: &MatGroup, stable: impl Fn(&Flag) -> bool) -> bool {
    let candidates: Vec<&Flag> = b
        .flags()
        .iter()
        .filter(|f| stable(f) && h.lies_in_parabolic(f))
        .collect();
    candidates
        .iter()
        .all(|f| candidates.iter().any(|g| opposite(b.field(), f, g)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaCrReport {
    /// Verdict for `Γ = ⟨H, σ⟩` on the building.
    pub verdict: CrVerdict,
    /// Direct check: every σ-stable parabolic containing `H` has a σ-stable
    /// Levi containing `H`.
    pub definitional: bool,
}

impl SigmaCrReport {
    pub fn agree(&self) -> bool {
        self.verdict.is_cr() == self.definitional
    }
}

/// σ-complete reducibility of `H` for a Steinberg-type automorphism `σ`
/// (a Frobenius twist, or any other building automorphism).
pub fn sigma_cr(b: &Building, h: &MatGroup, sigma: &BuildingAuto) -> Result<SigmaCrReport> {
    check_group(b, h)?;
    let gamma = BuildingAutoSet::from_group(h).with(sigma.clone());
    let verdict = is_cr(&FixedComplex::new(b, &gamma)?);
    // A σ-stable Levi of P containing H is the common Levi of P and a
    // σ-stable opposite parabolic containing H.
    let definitional = definitional_check(b, h, |f| sigma.fixes(b.field(), f));
    Ok(SigmaCrReport {
        verdict,
        definitional,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionCheck {
    pub degree: u32,
    /// `⟨H, σ⟩` on the building over `F_{q^r}`.
    pub sigma_cr: bool,
    /// `H` alone on the building over `F_{q^r}`.
    pub plain_cr: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsigmaReport {
    /// `H` on the rational building over `F_q`.
    pub rational: CrVerdict,
    /// `H ≤ P_σ ⇒ H ≤ L_σ`, checked over the rational flags.
    pub definitional: bool,
    pub extension: Option<ExtensionCheck>,
}

impl GsigmaReport {
    pub fn consistent(&self) -> bool {
        let r = self.rational.is_cr();
        r == self.definitional
            && self
                .extension
                .as_ref()
                .map_or(true, |e| e.sigma_cr == r && e.plain_cr == r)
    }
}

/// `G_σ`-complete reducibility of `H ≤ GL_n(F_q)`; for `r > 1` also
/// recomputed over `F_{q^r}` with `σ = x ↦ x^q` adjoined, and without it.
pub fn gsigma_cr(h: &MatGroup, r: u32, caps: &Caps) -> Result<GsigmaReport> {
    if r == 0 {
        return Err(Error::Invalid("extension degree must be at least 1".into()));
    }
    let field = h.field();
    let b = Building::build(h.degree(), field, caps)?;
    let rational = group_cr(&b, h)?;
    let definitional = definitional_check(&b, h, |_| true);
    let extension = if r > 1 {
        let big = Field::new(field.characteristic(), field.degree() * r)?;
        let hx = h.extend_field(&big)?;
        let bx = Building::build(h.degree(), &big, caps)?;
        let sigma = BuildingAuto::Frobenius(field.degree());
        let sigma_cr = sigma_cr(&bx, &hx, &sigma)?.verdict.is_cr();
        let plain_cr = group_cr(&bx, &hx)?.is_cr();
        Some(ExtensionCheck {
            degree: r,
            sigma_cr,
            plain_cr,
        })
    } else {
        None
    };
    Ok(GsigmaReport {
        rational,
        definitional,
        extension,
    })
}

/// As [`gsigma_cr`] for a group given inside `GL_n(F_{q^r})` whose entries
/// must lie in the fixed field `base = F_q` of `σ`.
pub fn gsigma_cr_in_extension(h: &MatGroup, base: &Field, caps: &Caps) -> Result<GsigmaReport> {
    let big = h.field();
    if big.characteristic() != base.characteristic() || big.degree() % base.degree() != 0 {
        return Err(Error::FieldMismatch(format!(
            "{base} is not a subfield of {big}"
        )));
    }
    let restricted = h.restrict_to_subfield(base)?;
    gsigma_cr(&restricted, big.degree() / base.degree(), caps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordReport {
    pub h: CrVerdict,
    pub n: CrVerdict,
}

impl CliffordReport {
    /// `cr(H) ⇒ cr(N)`.
    pub fn consistent(&self) -> bool {
        !self.h.is_cr() || self.n.is_cr()
    }
}

pub fn clifford_check(b: &Building, h: &MatGroup, n: &MatGroup) -> Result<CliffordReport> {
    check_group(b, h)?;
    check_group(b, n)?;
    if !n.is_normal_in(h) {
        return Err(Error::NotNormal);
    }
    Ok(CliffordReport {
        h: group_cr(b, h)?,
        n: group_cr(b, n)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaVariantReport {
    /// `Γ = Σ ∪ H` on the building.
    pub verdict: CrVerdict,
    /// Literal: every Σ-stable parabolic containing `H` has a Σ-stable
    /// opposite containing `H`.
    pub literal: bool,
}

impl SigmaVariantReport {
    pub fn agree(&self) -> bool {
        self.verdict.is_cr() == self.literal
    }
}

/// Σ-complete reducibility for a set `Σ` of building automorphisms.
pub fn sigma_variant_cr(
    b: &Building,
    h: &MatGroup,
    sigma: &BuildingAutoSet,
) -> Result<SigmaVariantReport> {
    check_group(b, h)?;
    let gamma = BuildingAutoSet::from_group(h).extend(sigma);
    let verdict = is_cr(&FixedComplex::new(b, &gamma)?);
    let literal = definitional_check(b, h, |f| sigma.fixes(b.field(), f));
    Ok(SigmaVariantReport { verdict, literal })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauRound {
    pub degree: u32,
    pub h_cr: bool,
    pub normalizer_order: usize,
    pub normalizer_cr: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauReport {
    /// Smallest `r` with `cr(H) ⇔ cr(N_{GL_n(F_{q^r})}(H))`.
    pub found: Option<u32>,
    pub rounds: Vec<TauRound>,
}

/// Searches `r = 1..=r_max` for a Frobenius power `τ = x ↦ x^{q^r}` whose
/// fixed group `GL_n(F_{q^r})` has `cr(N(H)) ⇔ cr(H)`.
pub fn tau_search(h: &MatGroup, r_max: u32, caps: &Caps) -> Result<TauReport> {
    let field = h.field();
    let mut rounds = Vec::new();
    for r in 1..=r_max {
        let big = Field::new(field.characteristic(), field.degree() * r)?;
        let hx = h.extend_field(&big)?;
        let b = Building::build(h.degree(), &big, caps)?;
        let norm = hx.normalizer_in_general_linear(caps)?;
        let round = TauRound {
            degree: r,
            h_cr: group_cr(&b, &hx)?.is_cr(),
            normalizer_order: norm.order(),
            normalizer_cr: group_cr(&b, &norm)?.is_cr(),
        };
        let hit = round.h_cr == round.normalizer_cr;
        rounds.push(round);
        if hit {
            return Ok(TauReport {
                found: Some(r),
                rounds,
            });
        }
    }
    Ok(TauReport {
        found: None,
        rounds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientReport {
    pub h_cr: bool,
    pub saturated_cr: bool,
    pub saturated_order: usize,
}

impl QuotientReport {
    pub fn consistent(&self) -> bool {
        self.h_cr == self.saturated_cr
    }
}

/// Compares `H` with its scalar saturation `Z·H`. Scalars fix every flag,
/// so the buildings of `GL_n` and `PGL_n` coincide and the verdicts must
/// agree.
pub fn quotient_transfer_check(b: &Building, h: &MatGroup, caps: &Caps) -> Result<QuotientReport> {
    check_group(b, h)?;
    let zh = h.with_scalars(caps)?;
    Ok(QuotientReport {
        h_cr: group_cr(b, h)?.is_cr(),
        saturated_cr: group_cr(b, &zh)?.is_cr(),
        saturated_order: zh.order(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::FqMatrix;
    use crate::subspace::Subspace;

    fn f(p: u32, m: u32) -> Field {
        Field::new(p, m).unwrap()
    }

    fn mat(field: &Field, rows: &[&[i64]]) -> FqMatrix {
        FqMatrix::from_ints(field, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn cyclic(field: &Field, rows: &[&[i64]]) -> MatGroup {
        MatGroup::closure(field, rows.len(), vec![mat(field, rows)], &Caps::default()).unwrap()
    }

    #[test]
    fn swap_in_char_2_is_not_sigma_cr() {
        let (f2, f4) = (f(2, 1), f(2, 2));
        let b = Building::build(2, &f4, &Caps::default()).unwrap();
        assert_eq!(b.vertices().len(), 5);
        let h = cyclic(&f2, &[&[0, 1], &[1, 0]]).extend_field(&f4).unwrap();
        let rep = sigma_cr(&b, &h, &BuildingAuto::Frobenius(1)).unwrap();
        let diag = Flag::vertex(Subspace::from_vectors(&f4, 2, &[vec![1, 1]]).unwrap());
        assert_eq!(
            rep.verdict,
            CrVerdict::NotReducible {
                counterexample: diag
            }
        );
        assert!(rep.agree());
    }

    #[test]
    fn trivial_group_is_sigma_cr() {
        for n in [2, 3] {
            let f4 = f(2, 2);
            let b = Building::build(n, &f4, &Caps::default()).unwrap();
            let rep =
                sigma_cr(&b, &MatGroup::trivial(&f4, n), &BuildingAuto::Frobenius(1)).unwrap();
            assert!(rep.verdict.is_cr());
            assert!(rep.definitional);
            // σ-fixed flags are exactly the rational building over F_2
            let rational = Building::build(n, &f(2, 1), &Caps::default()).unwrap();
            assert_eq!(rep.verdict.witnesses().len(), rational.flags().len());
        }
    }

    #[test]
    fn rational_torus_is_sigma_cr() {
        let f4 = f(2, 2);
        let b = Building::build(2, &f4, &Caps::default()).unwrap();
        let torus = MatGroup::closure(
            &f4,
            2,
            vec![mat(&f4, &[&[2, 0], &[0, 1]]), mat(&f4, &[&[1, 0], &[0, 2]])],
            &Caps::default(),
        )
        .unwrap();
        assert_eq!(torus.order(), 9);
        let rep = sigma_cr(&b, &torus, &BuildingAuto::Frobenius(1)).unwrap();
        assert!(rep.verdict.is_cr() && rep.agree());
        assert_eq!(rep.verdict.witnesses().len(), 2);
    }

    #[test]
    fn gsigma_examples() {
        let (f2, f3) = (f(2, 1), f(3, 1));
        let caps = Caps::default();
        let u = cyclic(&f2, &[&[1, 1], &[0, 1]]);
        let rep = gsigma_cr(&u, 2, &caps).unwrap();
        assert!(!rep.rational.is_cr());
        assert!(rep.consistent());

        let gl = MatGroup::general_linear(&f2, 2, &caps).unwrap();
        let rep = gsigma_cr(&gl, 2, &caps).unwrap();
        assert_eq!(rep.rational, CrVerdict::Reducible { witnesses: vec![] });
        assert!(rep.consistent());

        let swap = cyclic(&f3, &[&[0, 1], &[1, 0]]);
        let rep = gsigma_cr(&swap, 2, &caps).unwrap();
        assert!(rep.rational.is_cr());
        assert!(rep.consistent());
    }

    #[test]
    fn gsigma_rejects_entries_outside_fixed_field() {
        let f4 = f(2, 2);
        let torus = cyclic(&f4, &[&[2, 0], &[0, 1]]);
        let err = gsigma_cr_in_extension(&torus, &f(2, 1), &Caps::default()).unwrap_err();
        assert_eq!(err, Error::NotInFixedField);
        let rational = cyclic(&f4, &[&[0, 1], &[1, 0]]);
        assert!(gsigma_cr_in_extension(&rational, &f(2, 1), &Caps::default()).is_ok());
    }

    #[test]
    fn clifford_s3_and_a3() {
        let f2 = f(2, 1);
        let caps = Caps::default();
        let b = Building::build(2, &f2, &caps).unwrap();
        let s3 = MatGroup::general_linear(&f2, 2, &caps).unwrap();
        let a3 = cyclic(&f2, &[&[0, 1], &[1, 1]]);
        let rep = clifford_check(&b, &s3, &a3).unwrap();
        assert!(rep.h.is_cr() && rep.n.is_cr() && rep.consistent());
        let rep = clifford_check(&b, &s3, &MatGroup::trivial(&f2, 2)).unwrap();
        assert!(rep.consistent());
        let u = cyclic(&f2, &[&[1, 1], &[0, 1]]);
        let rep = clifford_check(&b, &u, &MatGroup::trivial(&f2, 2)).unwrap();
        assert!(!rep.h.is_cr() && rep.consistent());
        assert_eq!(clifford_check(&b, &s3, &u).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn sigma_variant_examples() {
        let f2 = f(2, 1);
        let caps = Caps::default();
        let b = Building::build(3, &f2, &caps).unwrap();
        let duality = BuildingAutoSet::new(vec![BuildingAuto::Duality], "duality").unwrap();
        let rep = sigma_variant_cr(&b, &MatGroup::trivial(&f2, 3), &duality).unwrap();
        assert!(rep.verdict.is_cr() && rep.agree());
        assert_eq!(rep.verdict.witnesses().len(), 3);

        let trivial_sigma =
            BuildingAutoSet::new(vec![BuildingAuto::Inner(FqMatrix::identity(3))], "id").unwrap();
        let u = cyclic(&f2, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let rep = sigma_variant_cr(&b, &u, &trivial_sigma).unwrap();
        assert_eq!(rep.verdict, group_cr(&b, &u).unwrap());
        assert!(rep.agree());

        let f4 = f(2, 2);
        let b4 = Building::build(2, &f4, &caps).unwrap();
        let frob = BuildingAutoSet::new(vec![BuildingAuto::Frobenius(1)], "frobenius").unwrap();
        let swap = cyclic(&f4, &[&[0, 1], &[1, 0]]);
        let via_sigma = sigma_cr(&b4, &swap, &BuildingAuto::Frobenius(1)).unwrap();
        let via_set = sigma_variant_cr(&b4, &swap, &frob).unwrap();
        assert_eq!(via_sigma.verdict, via_set.verdict);
    }

    #[test]
    fn tau_search_examples() {
        let f3 = f(3, 1);
        let caps = Caps::default();
        let swap = cyclic(&f3, &[&[0, 1], &[1, 0]]);
        let rep = tau_search(&swap, 3, &caps).unwrap();
        assert_eq!(rep.found, Some(1));
        let first = &rep.rounds[0];
        assert!(first.h_cr);
        assert!(first.normalizer_cr);
        // N(<swap>) = C(swap), the centralizer of a regular semisimple
        // element: the split torus of its eigenbasis, order (3-1)^2 = 4,
        // extended by the swap of eigenlines (which centralizes too).
        let gl = MatGroup::general_linear(&f3, 2, &caps).unwrap();
        assert_eq!(
            first.normalizer_order,
            swap.normalizer_in(&gl).unwrap().order()
        );

        let u = cyclic(&f3, &[&[1, 1], &[0, 1]]);
        let rep = tau_search(&u, 3, &caps).unwrap();
        assert_eq!(rep.found, Some(1));
        assert!(!rep.rounds[0].h_cr && !rep.rounds[0].normalizer_cr);
    }

    #[test]
    fn quotient_transfer_examples() {
        let f3 = f(3, 1);
        let caps = Caps::default();
        let b = Building::build(2, &f3, &caps).unwrap();
        let u = cyclic(&f3, &[&[1, 1], &[0, 1]]);
        let rep = quotient_transfer_check(&b, &u, &caps).unwrap();
        assert!(rep.consistent() && !rep.h_cr);
        assert_eq!(rep.saturated_order, 6);
        let z = u.with_scalars(&caps).unwrap();
        let rep = quotient_transfer_check(&b, &z, &caps).unwrap();
        assert_eq!(rep.saturated_order, z.order());
        let torus = cyclic(&f3, &[&[2, 0], &[0, 1]]);
        assert!(quotient_transfer_check(&b, &torus, &caps)
            .unwrap()
            .consistent());
    }
}
