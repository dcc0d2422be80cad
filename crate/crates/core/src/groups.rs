//! Finite matrix groups and building automorphisms.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::building::Flag;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::field::{Elem, Field};
use crate::matrix::FqMatrix;
use crate::subspace::Subspace;

/// A finite subgroup of `GL_n(F_q)` with its full element set.
#[derive(Clone)]
pub struct MatGroup {
    field: Field,
    n: usize,
    generators: Vec<FqMatrix>,
    /// Sorted.
    elements: Vec<FqMatrix>,
    members: HashSet<FqMatrix>,
}

impl fmt::Debug for MatGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatGroup")
            .field("field", &self.field)
            .field("n", &self.n)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for MatGroup {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.n == other.n && self.elements == other.elements
    }
}

impl Eq for MatGroup {}

fn check_generator(field: &Field, n: usize, g: &FqMatrix) -> Result<()> {
    if g.rows() != n || g.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.rows().max(g.cols()),
        });
    }
    if !g.is_invertible(field) {
        return Err(Error::Singular);
    }
    Ok(())
}

fn bfs_closure(
    field: &Field,
    n: usize,
    gens: &[FqMatrix],
    cap: usize,
) -> Result<HashSet<FqMatrix>> {
    let id = FqMatrix::identity(n);
    let mut seen = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for s in gens {
            let y = x.mul(field, s);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(seen)
}

impl MatGroup {
    /// The group generated by `generators`, enumerated breadth-first.
    pub fn closure(
        field: &Field,
        n: usize,
        generators: Vec<FqMatrix>,
        caps: &Caps,
    ) -> Result<MatGroup> {
        for g in &generators {
            check_generator(field, n, g)?;
        }
        let members = bfs_closure(field, n, &generators, caps.max_group_order)?;
        let mut elements: Vec<_> = members.iter().cloned().collect();
        elements.sort();
        Ok(MatGroup {
            field: field.clone(),
            n,
            generators,
            elements,
            members,
        })
    }

    /// Wraps an element set that is already a group, choosing generators
    /// greedily. Fails with [`Error::NotClosed`] if the set is not a group.
    pub fn from_elements(field: &Field, n: usize, elements: Vec<FqMatrix>) -> Result<MatGroup> {
        let members: HashSet<FqMatrix> = elements.iter().cloned().collect();
        for g in &elements {
            check_generator(field, n, g)?;
        }
        if !members.contains(&FqMatrix::identity(n)) {
            return Err(Error::NotClosed);
        }
        let mut sorted: Vec<_> = members.iter().cloned().collect();
        sorted.sort();
        let mut gens = Vec::new();
        let mut current = HashSet::from([FqMatrix::identity(n)]);
        for e in &sorted {
            if current.contains(e) {
                continue;
            }
            gens.push(e.clone());
            current = bfs_closure(field, n, &gens, members.len()).map_err(|_| Error::NotClosed)?;
            if !current.is_subset(&members) {
                return Err(Error::NotClosed);
            }
        }
        Ok(MatGroup {
            field: field.clone(),
            n,
            generators: gens,
            elements: sorted,
            members,
        })
    }

    /// Trusted constructor for element sets already known to form a group.
    pub(crate) fn from_parts(
        field: &Field,
        n: usize,
        generators: Vec<FqMatrix>,
        mut elements: Vec<FqMatrix>,
    ) -> MatGroup {
        elements.sort();
        let members = elements.iter().cloned().collect();
        MatGroup {
            field: field.clone(),
            n,
            generators,
            elements,
            members,
        }
    }

    pub fn trivial(field: &Field, n: usize) -> MatGroup {
        let id = FqMatrix::identity(n);
        MatGroup {
            field: field.clone(),
            n,
            generators: Vec::new(),
            elements: vec![id.clone()],
            members: HashSet::from([id]),
        }
    }

    /// All of `GL_n(F_q)` by exhaustive scan, with the standard generators
    /// `diag(ζ, 1, ..., 1)` and the transvections `I + x^k E_ij`.
    pub fn general_linear(field: &Field, n: usize, caps: &Caps) -> Result<MatGroup> {
        let elements = invertible_matrices(field, n, caps, Strategy::default())?;
        let zeta = primitive_element(field);
        let mut generators = Vec::new();
        if field.order() > 2 {
            let mut d = vec![1; n];
            d[0] = zeta;
            generators.push(FqMatrix::diagonal(&d));
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for k in 0..field.degree() {
                    let mut t = FqMatrix::identity(n);
                    t.set(i, j, (field.characteristic() as Elem).pow(k));
                    generators.push(t);
                }
            }
        }
        let members = elements.iter().cloned().collect();
        Ok(MatGroup {
            field: field.clone(),
            n,
            generators,
            elements,
            members,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[FqMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[FqMatrix] {
        &self.elements
    }

    pub fn contains(&self, g: &FqMatrix) -> bool {
        self.members.contains(g)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &MatGroup) -> bool {
        self.field == other.field
            && self.n == other.n
            && self.order() <= other.order()
            && other.order() % self.order() == 0
            && self.elements.iter().all(|g| other.contains(g))
    }

    /// Is `self` a normal subgroup of `h`?
    pub fn is_normal_in(&self, h: &MatGroup) -> bool {
        if !self.is_subgroup_of(h) {
            return false;
        }
        h.generating_set().iter().all(|x| {
            let xi = x
                .inverse(&self.field)
                .expect("group elements are invertible");
            self.generating_set()
                .iter()
                .all(|y| self.contains(&x.mul(&self.field, y).mul(&self.field, &xi)))
        })
    }

    /// Generators, or the identity if the generator list is empty.
    pub fn generating_set(&self) -> Vec<FqMatrix> {
        if self.generators.is_empty() {
            vec![FqMatrix::identity(self.n)]
        } else {
            self.generators.clone()
        }
    }

    /// `g H g⁻¹`.
    pub fn conjugate(&self, g: &FqMatrix) -> Result<MatGroup> {
        check_generator(&self.field, self.n, g)?;
        let gi = g.inverse(&self.field)?;
        let conj = |x: &FqMatrix| g.mul(&self.field, x).mul(&self.field, &gi);
        let mut elements: Vec<_> = self.elements.iter().map(conj).collect();
        elements.sort();
        let members = elements.iter().cloned().collect();
        Ok(MatGroup {
            field: self.field.clone(),
            n: self.n,
            generators: self.generators.iter().map(conj).collect(),
            elements,
            members,
        })
    }

    /// Does `g` normalize `self`?
    pub fn is_normalized_by(&self, g: &FqMatrix) -> bool {
        let Ok(gi) = g.inverse(&self.field) else {
            return false;
        };
        self.generating_set()
            .iter()
            .all(|h| self.contains(&g.mul(&self.field, h).mul(&self.field, &gi)))
    }

    /// `N_A(H)` for an ambient group `A ⊇ H`.
    pub fn normalizer_in(&self, ambient: &MatGroup) -> Result<MatGroup> {
        let elems = exec::filter(Strategy::default(), &ambient.elements, |g| {
            self.is_normalized_by(g)
        });
        MatGroup::from_elements(&self.field, self.n, elems)
    }

    /// `N_{GL_n(F)}(H)` by a scan of all `n × n` matrices over the group's field.
    pub fn normalizer_in_general_linear(&self, caps: &Caps) -> Result<MatGroup> {
        let q = self.field.order() as u64;
        let total = q.checked_pow((self.n * self.n) as u32).unwrap_or(u64::MAX);
        if total > caps.max_scan {
            return Err(Error::ScanTooLarge {
                candidates: total,
                cap: caps.max_scan,
            });
        }
        let n = self.n;
        let elems = exec::filter_map_range(Strategy::default(), total, |code| {
            let g = FqMatrix::from_index(n, n, q as u32, code);
            self.is_normalized_by(&g).then_some(g)
        });
        if elems.len() > caps.max_group_order {
            return Err(Error::GroupTooLarge {
                cap: caps.max_group_order,
            });
        }
        MatGroup::from_elements(&self.field, self.n, elems)
    }

    /// `Z·H` where `Z` is the group of nonzero scalar matrices.
    pub fn with_scalars(&self, caps: &Caps) -> Result<MatGroup> {
        let zeta = primitive_element(&self.field);
        let mut gens = self.generators.clone();
        if zeta != 1 {
            gens.push(FqMatrix::identity(self.n).scale(&self.field, zeta));
        }
        MatGroup::closure(&self.field, self.n, gens, caps)
    }

    /// Image in `GL_n` over an extension field.
    pub fn extend_field(&self, big: &Field) -> Result<MatGroup> {
        let table = big.embedding_from(&self.field)?;
        let lift = |x: &FqMatrix| x.map(|e| table[e as usize]);
        let mut elements: Vec<_> = self.elements.iter().map(lift).collect();
        elements.sort();
        let members = elements.iter().cloned().collect();
        Ok(MatGroup {
            field: big.clone(),
            n: self.n,
            generators: self.generators.iter().map(lift).collect(),
            elements,
            members,
        })
    }

    /// Rewrites a group over an extension field whose entries all lie in the
    /// subfield `sub`.
    pub fn restrict_to_subfield(&self, sub: &Field) -> Result<MatGroup> {
        let table = self.field.embedding_from(sub)?;
        let mut back = vec![None; self.field.order() as usize];
        for (s, &b) in table.iter().enumerate() {
            back[b as usize] = Some(s as Elem);
        }
        let restrict = |x: &FqMatrix| -> Result<FqMatrix> {
            let data = x
                .data()
                .iter()
                .map(|&e| back[e as usize].ok_or(Error::NotInFixedField))
                .collect::<Result<Vec<_>>>()?;
            Ok(FqMatrix::from_flat(x.rows(), x.cols(), data))
        };
        let mut elements = self
            .elements
            .iter()
            .map(restrict)
            .collect::<Result<Vec<_>>>()?;
        elements.sort();
        let members = elements.iter().cloned().collect();
        Ok(MatGroup {
            field: sub.clone(),
            n: self.n,
            generators: self
                .generators
                .iter()
                .map(restrict)
                .collect::<Result<_>>()?,
            elements,
            members,
        })
    }

    /// Is every element contained in the parabolic `Stab(f)`, i.e. does every
    /// element map each member of `f` to itself?
    pub fn lies_in_parabolic(&self, f: &Flag) -> bool {
        self.elements
            .iter()
            .all(|g| f.is_stabilized_by(&self.field, g))
    }

    /// Does every element stabilize `v`?
    pub fn stabilizes(&self, v: &Subspace) -> bool {
        self.generating_set()
            .iter()
            .all(|g| &v.image(&self.field, g) == v)
    }

    /// Position of `g` in the sorted element list.
    pub fn index_of(&self, g: &FqMatrix) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }
}

/// A generator of the multiplicative group `F_q^*`.
pub fn primitive_element(field: &Field) -> Elem {
    let q = field.order() as u64;
    if q == 2 {
        return 1;
    }
    let order = q - 1;
    let primes: Vec<u64> = (2..=order)
        .filter(|&d| order % d == 0 && crate::field::is_prime(d))
        .collect();
    field
        .elements()
        .skip(1)
        .find(|&a| primes.iter().all(|&l| field.pow(a, order / l) != 1))
        .expect("F_q^* is cyclic")
}

/// Every invertible `n × n` matrix over `field`, sorted.
pub fn invertible_matrices(
    field: &Field,
    n: usize,
    caps: &Caps,
    strategy: Strategy,
) -> Result<Vec<FqMatrix>> {
    let q = field.order() as u64;
    let total = q.checked_pow((n * n) as u32).unwrap_or(u64::MAX);
    if total > caps.max_scan {
        return Err(Error::ScanTooLarge {
            candidates: total,
            cap: caps.max_scan,
        });
    }
    let mut elems = exec::filter_map_range(strategy, total, |code| {
        let g = FqMatrix::from_index(n, n, q as u32, code);
        g.is_invertible(field).then_some(g)
    });
    if elems.len() > caps.max_group_order {
        return Err(Error::GroupTooLarge {
            cap: caps.max_group_order,
        });
    }
    elems.sort();
    Ok(elems)
}

/// A simplicial automorphism of the building induced by an automorphism of
/// `GL_n(F_q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BuildingAuto {
    /// Conjugation by an invertible matrix; `U ↦ gU` on subspaces.
    Inner(FqMatrix),
    /// Entrywise `x ↦ x^{p^r}`, `r ≥ 1`.
    Frobenius(u32),
    /// `g ↦ (gᵀ)⁻¹`; `U ↦ U°` on subspaces, reversing flags.
    Duality,
}

impl BuildingAuto {
    pub fn is_type_preserving(&self) -> bool {
        !matches!(self, BuildingAuto::Duality)
    }

    pub fn validate(&self, field: &Field, n: usize) -> Result<()> {
        match self {
            BuildingAuto::Inner(g) => check_generator(field, n, g),
            BuildingAuto::Frobenius(0) => {
                Err(Error::Invalid("Frobenius power must be at least 1".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn apply_matrix(&self, field: &Field, g: &FqMatrix) -> Result<FqMatrix> {
        match self {
            BuildingAuto::Inner(x) => {
                if x.rows() != g.rows() {
                    return Err(Error::DimensionMismatch {
                        expected: x.rows(),
                        found: g.rows(),
                    });
                }
                Ok(x.mul(field, g).mul(field, &x.inverse(field)?))
            }
            BuildingAuto::Frobenius(r) => Ok(g.frobenius(field, *r)),
            BuildingAuto::Duality => g.inverse_transpose(field),
        }
    }

    pub fn apply_subspace(&self, field: &Field, v: &Subspace) -> Subspace {
        match self {
            BuildingAuto::Inner(x) => v.image(field, x),
            BuildingAuto::Frobenius(r) => v.frobenius(field, *r),
            BuildingAuto::Duality => v.annihilator(field),
        }
    }

    pub fn apply_flag(&self, field: &Field, f: &Flag) -> Result<Flag> {
        if let BuildingAuto::Inner(x) = self {
            if x.rows() != f.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: x.rows(),
                    found: f.ambient_dim(),
                });
            }
        }
        let mut chain: Vec<Subspace> = f
            .chain()
            .iter()
            .map(|v| self.apply_subspace(field, v))
            .collect();
        if matches!(self, BuildingAuto::Duality) {
            chain.reverse();
        }
        Ok(Flag::from_chain_unchecked(f.ambient_dim(), chain))
    }

    /// `a(f) = f`.
    pub fn fixes(&self, field: &Field, f: &Flag) -> bool {
        match self {
            BuildingAuto::Duality => {
                let r = f.len();
                (0..r).all(|i| f.chain()[i].annihilator(field) == f.chain()[r - 1 - i])
            }
            _ => f
                .chain()
                .iter()
                .all(|v| &self.apply_subspace(field, v) == v),
        }
    }
}

/// Generators of the acting group `Γ`. `Γ` itself is never enumerated:
/// a flag is `Γ`-stable iff every generator fixes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingAutoSet {
    autos: Vec<BuildingAuto>,
    description: String,
}

impl BuildingAutoSet {
    pub fn new(autos: Vec<BuildingAuto>, description: impl Into<String>) -> Result<Self> {
        if autos.is_empty() {
            return Err(Error::Invalid(
                "an automorphism set needs at least one generator".into(),
            ));
        }
        Ok(BuildingAutoSet {
            autos,
            description: description.into(),
        })
    }

    /// Inner automorphisms by the generators of `h`.
    pub fn from_group(h: &MatGroup) -> Self {
        BuildingAutoSet {
            autos: h
                .generating_set()
                .into_iter()
                .map(BuildingAuto::Inner)
                .collect(),
            description: format!("H of order {}", h.order()),
        }
    }

    pub fn with(mut self, a: BuildingAuto) -> Self {
        self.description = format!("{} + {:?}", self.description, kind_label(&a));
        self.autos.push(a);
        self
    }

    pub fn extend(mut self, others: &BuildingAutoSet) -> Self {
        self.autos.extend(others.autos.iter().cloned());
        self.description = format!("{} + {}", self.description, others.description);
        self
    }

    pub fn autos(&self) -> &[BuildingAuto] {
        &self.autos
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn is_type_preserving(&self) -> bool {
        self.autos.iter().all(BuildingAuto::is_type_preserving)
    }

    pub fn validate(&self, field: &Field, n: usize) -> Result<()> {
        self.autos.iter().try_for_each(|a| a.validate(field, n))
    }

    pub fn fixes(&self, field: &Field, f: &Flag) -> bool {
        self.autos.iter().all(|a| a.fixes(field, f))
    }
}

fn kind_label(a: &BuildingAuto) -> String {
    match a {
        BuildingAuto::Inner(_) => "inner".into(),
        BuildingAuto::Frobenius(r) => format!("frobenius^{r}"),
        BuildingAuto::Duality => "duality".into(),
    }
}

/// `σ(H) = H` as sets.
pub fn is_sigma_stable(h: &MatGroup, sigma: &BuildingAuto) -> bool {
    h.elements().iter().all(|g| {
        sigma
            .apply_matrix(h.field(), g)
            .map(|x| h.contains(&x))
            .unwrap_or(false)
    })
}
