//! The spherical building of `GL_n` over `F_q` as a flag complex.
//!
//! Vertices are proper nonzero subspaces of `F_q^n`; simplices are flags
//! (strictly increasing chains of vertices). The stabilizer of a flag is a
//! parabolic subgroup, and two flags are opposite exactly when their
//! parabolics meet in a common Levi subgroup.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::FqMatrix;
use crate::subspace::{gaussian_binomial, Subspace};

/// A strictly increasing chain `0 < V_1 < ... < V_r < F_q^n`.
///
/// The empty chain is allowed and stands for the whole group (it is not a
/// simplex of the building).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Flag {
    ambient: usize,
    chain: Vec<Subspace>,
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.chain).finish()
    }
}

impl Ord for Flag {
    /// Shorter flags first, then by type (dimension list), then by members.
    fn cmp(&self, other: &Self) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then(self.chain.len().cmp(&other.chain.len()))
            .then_with(|| self.type_set().cmp(&other.type_set()))
            .then_with(|| self.chain.cmp(&other.chain))
    }
}

impl PartialOrd for Flag {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Flag {
    /// Validates that `chain` is strictly increasing and consists of proper
    /// nonzero subspaces of `F_q^n`.
    pub fn new(field: &Field, ambient: usize, chain: Vec<Subspace>) -> Result<Flag> {
        for v in &chain {
            if v.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch {
                    expected: ambient,
                    found: v.ambient_dim(),
                });
            }
            if v.is_zero() || v.is_full() {
                return Err(Error::Invalid(
                    "flag members must be proper nonzero subspaces".into(),
                ));
            }
        }
        for w in chain.windows(2) {
            if w[0].dim() >= w[1].dim() || !w[1].contains(field, &w[0])? {
                return Err(Error::Invalid(
                    "flag members must be strictly increasing".into(),
                ));
            }
        }
        Ok(Flag { ambient, chain })
    }

    /// Caller guarantees the chain is valid.
    pub(crate) fn from_chain_unchecked(ambient: usize, chain: Vec<Subspace>) -> Flag {
        Flag { ambient, chain }
    }

    pub fn empty(ambient: usize) -> Flag {
        Flag {
            ambient,
            chain: Vec::new(),
        }
    }

    pub fn vertex(v: Subspace) -> Flag {
        Flag {
            ambient: v.ambient_dim(),
            chain: vec![v],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    /// Simplex dimension (`len - 1`).
    pub fn simplex_dim(&self) -> isize {
        self.chain.len() as isize - 1
    }

    pub fn type_set(&self) -> Vec<usize> {
        self.chain.iter().map(Subspace::dim).collect()
    }

    pub fn is_chamber(&self) -> bool {
        self.chain.len() + 1 == self.ambient
    }

    /// Is `self` a face of `other` (every member of `self` occurs in `other`)?
    pub fn is_face_of(&self, other: &Flag) -> bool {
        let mut it = other.chain.iter();
        self.chain.iter().all(|v| it.any(|w| w == v))
    }

    /// Does `g` map every member of the flag to itself?
    pub fn is_stabilized_by(&self, field: &Field, g: &FqMatrix) -> bool {
        self.chain.iter().all(|v| &v.image(field, g) == v)
    }

    /// `g·f`.
    pub fn image(&self, field: &Field, g: &FqMatrix) -> Flag {
        Flag {
            ambient: self.ambient,
            chain: self.chain.iter().map(|v| v.image(field, g)).collect(),
        }
    }
}

/// Are `f` and `g` opposite? Equal length `r`, complementary types and
/// `V_i ∩ W_{r+1-i} = 0` for all `i`.
pub fn opposite(field: &Field, f: &Flag, g: &Flag) -> bool {
    let n = f.ambient;
    if g.ambient != n || f.len() != g.len() {
        return false;
    }
    let r = f.len();
    (0..r).all(|i| {
        let v = &f.chain[i];
        let w = &g.chain[r - 1 - i];
        v.dim() + w.dim() == n && v.sum(field, w).map(|s| s.is_full()).unwrap_or(false)
    })
}

/// Pieces `D_i = V_i ∩ W_{r+2-i}` (`i = 1..r+1`, with `V_{r+1} = W_{r+1} = F_q^n`)
/// of a pair of flags of equal length. For opposite flags they form a
/// direct-sum decomposition whose stabilizer is the common Levi subgroup.
pub fn graded_pieces(field: &Field, f: &Flag, g: &Flag) -> Option<Vec<Subspace>> {
    if f.len() != g.len() || f.ambient != g.ambient {
        return None;
    }
    let n = f.ambient;
    let r = f.len();
    let v = |i: usize| {
        if i == r + 1 {
            Subspace::full(n)
        } else {
            f.chain[i - 1].clone()
        }
    };
    let w = |j: usize| {
        if j == r + 1 {
            Subspace::full(n)
        } else {
            g.chain[j - 1].clone()
        }
    };
    (1..=r + 1)
        .map(|i| v(i).intersect(field, &w(r + 2 - i)).ok())
        .collect()
}

/// Elements of `elems` stabilizing every member of `f`.
pub fn stabilizer<'a>(field: &Field, f: &Flag, elems: &'a [FqMatrix]) -> Vec<&'a FqMatrix> {
    elems
        .iter()
        .filter(|g| f.is_stabilized_by(field, g))
        .collect()
}

pub fn stabilizer_check(field: &Field, f: &Flag, g: &FqMatrix) -> bool {
    f.is_stabilized_by(field, g)
}

/// Does `g` lie in the unipotent radical of the stabilizer of `f`, i.e. act
/// trivially on every quotient `V_i / V_{i-1}`?
fn in_unipotent_radical(field: &Field, f: &Flag, g: &FqMatrix) -> bool {
    let n = f.ambient;
    let mut below = Subspace::zero(n);
    let members = f
        .chain
        .iter()
        .cloned()
        .chain(std::iter::once(Subspace::full(n)));
    for v in members {
        for r in 0..v.dim() {
            let x = v.basis().row(r);
            let gx: Vec<u16> = (0..n)
                .map(|i| (0..n).fold(0, |acc, j| field.add(acc, field.mul(g.get(i, j), x[j]))))
                .collect();
            let diff: Vec<u16> = gx.iter().zip(x).map(|(&a, &b)| field.sub(a, b)).collect();
            if !below.contains_vector(field, &diff) {
                return false;
            }
        }
        below = v;
    }
    true
}

/// Group-theoretic opposition test over an explicit finite group `elems`
/// (typically all of `GL_n(F_q)`): `P ∩ Q` must be a complement of the
/// unipotent radical in both `P = Stab(f)` and `Q = Stab(g)`, and must
/// coincide with the simultaneous stabilizer of the graded pieces.
pub fn common_levi_oracle(field: &Field, f: &Flag, g: &Flag, elems: &[FqMatrix]) -> bool {
    let p = stabilizer(field, f, elems);
    let q = stabilizer(field, g, elems);
    let meet: Vec<&FqMatrix> = p
        .iter()
        .copied()
        .filter(|x| g.is_stabilized_by(field, x))
        .collect();
    let complement = |par: &[&FqMatrix], flag: &Flag| {
        let radical = par
            .iter()
            .filter(|x| in_unipotent_radical(field, flag, x))
            .count();
        let overlap = meet
            .iter()
            .filter(|x| in_unipotent_radical(field, flag, x))
            .count();
        overlap == 1 && meet.len() * radical == par.len()
    };
    if !complement(&p, f) || !complement(&q, g) {
        return false;
    }
    let Some(pieces) = graded_pieces(field, f, g) else {
        return false;
    };
    let piece_stab: Vec<&FqMatrix> = elems
        .iter()
        .filter(|x| pieces.iter().all(|d| &d.image(field, x) == d))
        .collect();
    piece_stab == meet
}

/// An integral cocharacter `t ↦ diag(t^{a_1}, ..., t^{a_n})` of the diagonal torus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochar(pub Vec<i64>);

/// Parabolic `P_λ`, Levi `L_λ` and unipotent radical of a diagonal cocharacter.
///
/// Conjugation by `λ(t)` scales entry `(i, j)` by `t^{a_i - a_j}`, so the
/// limit at `0` exists iff `g_ij = 0` whenever `a_i < a_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicData {
    pub weights: Vec<i64>,
    /// The flag stabilized by `P_λ`.
    pub flag: Flag,
    /// Coordinate level sets of the weights, highest weight first.
    pub levi_blocks: Vec<Vec<usize>>,
}

impl ParabolicData {
    pub fn contains(&self, g: &FqMatrix) -> bool {
        let a = &self.weights;
        (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] >= a[j] || g.get(i, j) == 0))
    }

    pub fn levi_contains(&self, g: &FqMatrix) -> bool {
        let a = &self.weights;
        (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] == a[j] || g.get(i, j) == 0))
    }

    pub fn radical_contains(&self, g: &FqMatrix) -> bool {
        let a = &self.weights;
        self.contains(g)
            && (0..a.len())
                .all(|i| (0..a.len()).all(|j| a[i] != a[j] || g.get(i, j) == u16::from(i == j)))
    }
}

pub fn cocharacter_parabolic(lambda: &Cochar) -> ParabolicData {
    let n = lambda.0.len();
    let mut levels: Vec<i64> = lambda.0.clone();
    levels.sort_unstable_by(|a, b| b.cmp(a));
    levels.dedup();
    let levi_blocks: Vec<Vec<usize>> = levels
        .iter()
        .map(|&w| (0..n).filter(|&i| lambda.0[i] == w).collect())
        .collect();
    let mut acc = Vec::new();
    let mut chain = Vec::new();
    for block in levi_blocks.iter().take(levi_blocks.len().saturating_sub(1)) {
        acc.extend_from_slice(block);
        chain.push(Subspace::coordinate(n, &acc));
    }
    ParabolicData {
        weights: lambda.0.clone(),
        flag: Flag::from_chain_unchecked(n, chain),
        levi_blocks,
    }
}

/// `X_{F_q}(GL_n)`: every proper nonzero subspace and every flag.
#[derive(Clone, Debug)]
pub struct Building {
    n: usize,
    field: Field,
    vertices: Vec<Subspace>,
    flags: Vec<Flag>,
    index: HashMap<Flag, usize>,
}

impl Building {
    pub fn build(n: usize, field: &Field, caps: &Caps) -> Result<Building> {
        let q = field.order();
        if n < 2 {
            return Err(Error::Invalid(format!("building needs n >= 2, got {n}")));
        }
        if n > caps.max_building_n {
            return Err(Error::BuildingTooLarge {
                n,
                q,
                reason: format!("n > {}", caps.max_building_n),
            });
        }
        let vertex_count: u64 = (1..n).map(|d| gaussian_binomial(n, d, q as u64)).sum();
        if vertex_count > caps.max_building_vertices {
            return Err(Error::BuildingTooLarge {
                n,
                q,
                reason: format!("{vertex_count} vertices > {}", caps.max_building_vertices),
            });
        }
        let vertices: Vec<Subspace> = (1..n)
            .flat_map(|d| Subspace::enumerate(field, n, d))
            .collect();
        // up[i]: vertices of larger dimension containing vertex i
        let up: Vec<Vec<usize>> = vertices
            .iter()
            .map(|v| {
                (0..vertices.len())
                    .filter(|&j| {
                        vertices[j].dim() > v.dim()
                            && vertices[j].contains(field, v).unwrap_or(false)
                    })
                    .collect()
            })
            .collect();
        let mut flags = Vec::new();
        fn extend(
            chain: &mut Vec<usize>,
            up: &[Vec<usize>],
            vertices: &[Subspace],
            n: usize,
            out: &mut Vec<Flag>,
        ) {
            out.push(Flag::from_chain_unchecked(
                n,
                chain.iter().map(|&i| vertices[i].clone()).collect(),
            ));
            let last = *chain.last().unwrap();
            for &j in &up[last] {
                chain.push(j);
                extend(chain, up, vertices, n, out);
                chain.pop();
            }
        }
        for i in 0..vertices.len() {
            extend(&mut vec![i], &up, &vertices, n, &mut flags);
        }
        flags.sort();
        let index = flags
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, f)| (f, i))
            .collect();
        Ok(Building {
            n,
            field: field.clone(),
            vertices,
            flags,
            index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Simplicial dimension `n - 2`.
    pub fn dim(&self) -> usize {
        self.n - 2
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn flags(&self) -> &[Flag] {
        &self.flags
    }

    pub fn chambers(&self) -> impl Iterator<Item = &Flag> {
        self.flags.iter().filter(|f| f.is_chamber())
    }

    pub fn index_of(&self, f: &Flag) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn opposite(&self, f: &Flag, g: &Flag) -> bool {
        opposite(&self.field, f, g)
    }
}

/// Levi sphere `s(L)` of the Levi subgroup stabilizing a direct-sum
/// decomposition `F_q^n = U_1 ⊕ ... ⊕ U_s`: all flags whose members are sums
/// of some of the `U_i`. It is a sphere of dimension `s - 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviSphere {
    pub parts: Vec<Subspace>,
    pub flags: Vec<Flag>,
}

impl LeviSphere {
    pub fn from_decomposition(field: &Field, parts: Vec<Subspace>) -> Result<LeviSphere> {
        let n = parts.first().map(Subspace::ambient_dim).unwrap_or(0);
        let total: usize = parts.iter().map(Subspace::dim).sum();
        let mut span = Subspace::zero(n);
        for p in &parts {
            if p.ambient_dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.ambient_dim(),
                });
            }
            if p.is_zero() {
                return Err(Error::Invalid(
                    "Levi decomposition parts must be nonzero".into(),
                ));
            }
            span = span.sum(field, p)?;
        }
        if total != n || !span.is_full() {
            return Err(Error::Invalid(
                "parts do not form a direct-sum decomposition".into(),
            ));
        }
        let s = parts.len();
        // sums over subsets, indexed by bitmask
        let mut sums = vec![Subspace::zero(n); 1 << s];
        for mask in 1usize..(1 << s) {
            let low = mask.trailing_zeros() as usize;
            sums[mask] = sums[mask & (mask - 1)].sum(field, &parts[low])?;
        }
        let full = (1usize << s) - 1;
        let mut flags = Vec::new();
        fn rec(
            mask: usize,
            full: usize,
            chain: &mut Vec<usize>,
            sums: &[Subspace],
            n: usize,
            out: &mut Vec<Flag>,
        ) {
            if !chain.is_empty() {
                out.push(Flag::from_chain_unchecked(
                    n,
                    chain.iter().map(|&m| sums[m].clone()).collect(),
                ));
            }
            // proper supersets of `mask`, excluding the full set
            let rest = full & !mask;
            let mut sub = rest;
            while sub != 0 {
                let next = mask | sub;
                if next != full {
                    chain.push(next);
                    rec(next, full, chain, sums, n, out);
                    chain.pop();
                }
                sub = (sub - 1) & rest;
            }
        }
        rec(0, full, &mut Vec::new(), &sums, n, &mut flags);
        flags.sort();
        flags.dedup();
        Ok(LeviSphere { parts, flags })
    }

    /// Standard block Levi: `blocks` partitions the coordinates `0..n`.
    pub fn from_blocks(field: &Field, n: usize, blocks: &[Vec<usize>]) -> Result<LeviSphere> {
        let mut seen = vec![false; n];
        for &i in blocks.iter().flatten() {
            if i >= n || seen[i] {
                return Err(Error::Invalid(
                    "blocks must partition the coordinates".into(),
                ));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Invalid(
                "blocks must partition the coordinates".into(),
            ));
        }
        let parts = blocks.iter().map(|b| Subspace::coordinate(n, b)).collect();
        Self::from_decomposition(field, parts)
    }

    /// Consecutive coordinate blocks of the given sizes.
    pub fn from_block_sizes(field: &Field, sizes: &[usize]) -> Result<LeviSphere> {
        Self::from_blocks(field, sizes.iter().sum(), &consecutive_blocks(sizes))
    }

    /// The standard apartment: the Levi sphere of the diagonal torus.
    pub fn apartment(field: &Field, n: usize) -> Result<LeviSphere> {
        Self::from_block_sizes(field, &vec![1; n])
    }

    pub fn dim(&self) -> isize {
        self.parts.len() as isize - 2
    }

    pub fn vertex_count(&self) -> usize {
        self.flags.iter().filter(|f| f.len() == 1).count()
    }

    pub fn chamber_count(&self) -> usize {
        let top = self.parts.len().saturating_sub(1);
        self.flags.iter().filter(|f| f.len() == top).count()
    }

    /// Number of opposites of each flag inside the sphere.
    pub fn opposite_counts(&self, field: &Field) -> Vec<usize> {
        self.flags
            .iter()
            .map(|f| self.flags.iter().filter(|g| opposite(field, f, g)).count())
            .collect()
    }

    pub fn opposition_is_perfect_matching(&self, field: &Field) -> bool {
        self.opposite_counts(field).iter().all(|&c| c == 1)
    }
}

pub fn consecutive_blocks(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let b = (start..start + s).collect();
            start += s;
            b
        })
        .collect()
}
