//! Integral simplicial homology and the homology-level shape of fixed-point
//! complexes.
//!
//! Classification is by reduced homology only: it certifies the necessary
//! conditions for a contractible complex or a bouquet of spheres, not the
//! homotopy type itself.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::building::{Flag, LeviSphere};
use crate::caps::Caps;
use crate::cr::FixedComplex;
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::subspace::Subspace;

/// A finite abstract simplicial complex on vertices `0..vertex_count`.
/// `simplices[d]` holds the `d`-simplices as sorted vertex tuples, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    /// Face closure of `generators`. Empty tuples are ignored.
    pub fn from_simplices(generators: impl IntoIterator<Item = Vec<usize>>) -> SimplicialComplex {
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<usize>>> = Vec::new();
        let mut vertex_count = 0;
        for mut s in generators {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            vertex_count = vertex_count.max(s.last().unwrap() + 1);
            let k = s.len();
            // all nonempty subsets
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| s[i])
                    .collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Default::default);
                }
                by_dim[d].insert(face);
            }
        }
        SimplicialComplex {
            vertex_count,
            simplices: by_dim
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.simplices.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    /// `-1 + f_0 - f_1 + f_2 - ...`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.face_counts()
            .iter()
            .enumerate()
            .fold(-1, |acc, (d, &f)| {
                if d % 2 == 0 {
                    acc + f as i64
                } else {
                    acc - f as i64
                }
            })
    }

    /// Boundary map `C_d → C_{d-1}` as a dense `f_{d-1} × f_d` matrix, `d ≥ 1`.
    pub fn boundary(&self, d: usize) -> Vec<Vec<BigInt>> {
        let rows = self.simplices(d - 1);
        let index: HashMap<&[usize], usize> = rows
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i))
            .collect();
        let cols = self.simplices(d);
        let mut m = vec![vec![BigInt::zero(); cols.len()]; rows.len()];
        for (j, s) in cols.iter().enumerate() {
            for i in 0..s.len() {
                let face: Vec<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i)
                    .map(|(_, &v)| v)
                    .collect();
                let r = index[face.as_slice()];
                m[r][j] = if i % 2 == 0 {
                    BigInt::one()
                } else {
                    -BigInt::one()
                };
            }
        }
        m
    }
}

/// Subcomplex spanned by a face-closed set of flags: vertices are the
/// subspaces occurring in the flags, in sorted order.
pub fn flag_complex(flags: &[Flag]) -> SimplicialComplex {
    let mut vertices: Vec<&Subspace> = flags.iter().flat_map(|f| f.chain()).collect();
    vertices.sort();
    vertices.dedup();
    let index: HashMap<&Subspace, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    SimplicialComplex::from_simplices(
        flags
            .iter()
            .map(|f| f.chain().iter().map(|v| index[v]).collect::<Vec<_>>()),
    )
}

/// Order complex of the stable poset: vertices are the stable flags (in
/// their sorted order), simplices are chains under the proper-face relation.
/// For type-preserving actions this is the barycentric subdivision of the
/// stable subcomplex.
pub fn order_complex(fc: &FixedComplex, caps: &Caps) -> Result<SimplicialComplex> {
    let stable = fc.stable();
    let up: Vec<Vec<usize>> = (0..stable.len())
        .map(|i| {
            (0..stable.len())
                .filter(|&j| FixedComplex::precedes(&stable[i], &stable[j]))
                .collect()
        })
        .collect();
    let mut chains = Vec::new();
    fn rec(
        chain: &mut Vec<usize>,
        up: &[Vec<usize>],
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        if out.len() >= cap {
            return Err(Error::Invalid(format!(
                "order complex exceeds {cap} simplices"
            )));
        }
        out.push(chain.clone());
        let last = *chain.last().unwrap();
        for &j in &up[last] {
            chain.push(j);
            rec(chain, up, out, cap)?;
            chain.pop();
        }
        Ok(())
    }
    for i in 0..stable.len() {
        rec(&mut vec![i], &up, &mut chains, caps.max_simplices)?;
    }
    Ok(SimplicialComplex::from_simplices(chains))
}

/// The Levi sphere as a simplicial complex.
pub fn levi_sphere_complex(s: &LeviSphere) -> SimplicialComplex {
    flag_complex(&s.flags)
}

/// Nonzero diagonal entries (positive, each dividing the next) of the Smith
/// normal form of `m`.
pub fn invariant_factors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    smith(m.to_vec(), false).0
}

/// Smith normal form with unimodular transforms: returns `(u, d, v)` with
/// `u·m·v = d`.
pub fn smith_normal_form(
    m: &[Vec<BigInt>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let (_, d, u, v) = smith(m.to_vec(), true);
    (u, d, v)
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

type Mat = Vec<Vec<BigInt>>;

fn smith(mut a: Mat, track: bool) -> (Vec<BigInt>, Mat, Mat, Mat) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut u = if track { identity(rows) } else { Vec::new() };
    let mut v = if track { identity(cols) } else { Vec::new() };

    // row_i += k·row_j (on a and u)
    let add_row = |a: &mut Mat, u: &mut Mat, i: usize, j: usize, k: &BigInt| {
        for c in 0..cols {
            let x = &a[j][c] * k;
            a[i][c] += x;
        }
        if track {
            for c in 0..rows {
                let x = &u[j][c] * k;
                u[i][c] += x;
            }
        }
    };
    let add_col = |a: &mut Mat, v: &mut Mat, i: usize, j: usize, k: &BigInt| {
        for r in 0..rows {
            let x = &a[r][j] * k;
            a[r][i] += x;
        }
        if track {
            for r in 0..cols {
                let x = &v[r][j] * k;
                v[r][i] += x;
            }
        }
    };
    let swap_rows = |a: &mut Mat, u: &mut Mat, i: usize, j: usize| {
        a.swap(i, j);
        if track {
            u.swap(i, j);
        }
    };
    let swap_cols = |a: &mut Mat, v: &mut Mat, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        if track {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    };

    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, t, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = -(&a[i][t] / &a[t][t]);
                    add_row(&mut a, &mut u, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                        if a[i][t].abs() < a[t][t].abs() {
                            swap_rows(&mut a, &mut u, t, i);
                        }
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = -(&a[t][j] / &a[t][t]);
                    add_col(&mut a, &mut v, j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                        if a[t][j].abs() < a[t][t].abs() {
                            swap_cols(&mut a, &mut v, t, j);
                        }
                    }
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let bad =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => add_row(&mut a, &mut u, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for c in 0..cols {
                a[t][c] = -&a[t][c];
            }
            if track {
                for c in 0..rows {
                    u[t][c] = -&u[t][c];
                }
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    (diag, a, u, v)
}

/// Reduced integral homology in degrees `0..=dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyProfile {
    pub reduced_betti: Vec<usize>,
    /// Invariant factors greater than one, per degree.
    pub torsion: Vec<Vec<BigInt>>,
    /// `Σ (-1)^i b̃_i`, which is `-1` for the empty complex.
    pub euler_reduced: i64,
}

impl HomologyProfile {
    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_torsion_free() && self.reduced_betti.iter().all(|&b| b == 0)
    }
}

pub fn reduced_homology(sc: &SimplicialComplex) -> HomologyProfile {
    reduced_homology_with(sc, Strategy::default())
}

pub fn reduced_homology_with(sc: &SimplicialComplex, strategy: Strategy) -> HomologyProfile {
    let top = sc.simplices.len();
    // factors[d] = invariant factors of ∂_d for d = 1..=top-1; ∂_0 is the augmentation
    let factors: Vec<Vec<BigInt>> = exec::map_range(strategy, top, |d| {
        if d == 0 {
            vec![BigInt::one()]
        } else {
            invariant_factors(&sc.boundary(d))
        }
    });
    let rank = |d: usize| factors.get(d).map_or(0, Vec::len);
    let counts = sc.face_counts();
    let reduced_betti: Vec<usize> = (0..top)
        .map(|d| counts[d] - rank(d) - rank(d + 1))
        .collect();
    let torsion = (0..top)
        .map(|d| {
            factors
                .get(d + 1)
                .map(|f| f.iter().filter(|x| !x.is_one()).cloned().collect())
                .unwrap_or_default()
        })
        .collect();
    // the empty complex has H̃_{-1} = Z
    let empty_term = if top == 0 { -1 } else { 0 };
    let euler_reduced = empty_term
        + reduced_betti
            .iter()
            .enumerate()
            .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum::<i64>();
    HomologyProfile {
        reduced_betti,
        torsion,
        euler_reduced,
    }
}

/// Homology-level shape of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopoClass {
    /// All reduced homology vanishes. The empty complex is also reported
    /// here: an empty fixed set is treated as vacuously cr elsewhere and is
    /// kept out of the shape comparisons.
    PointLike,
    /// Torsion-free homology of rank `count` concentrated in degree `dim`.
    SphereBouquetLike {
        dim: usize,
        count: usize,
    },
    Other,
}

/// `dim_fixed` is the dimension of the complex; a bouquet must have its
/// homology in exactly that degree.
pub fn classify(hp: &HomologyProfile, dim_fixed: isize) -> TopoClass {
    if hp.is_acyclic() {
        return TopoClass::PointLike;
    }
    if !hp.is_torsion_free() || dim_fixed < 0 {
        return TopoClass::Other;
    }
    let d = dim_fixed as usize;
    let elsewhere = hp
        .reduced_betti
        .iter()
        .enumerate()
        .any(|(i, &b)| i != d && b != 0);
    match hp.reduced_betti.get(d) {
        Some(&count) if count > 0 && !elsewhere => TopoClass::SphereBouquetLike { dim: d, count },
        _ => TopoClass::Other,
    }
}

/// Outcome of a Levi sphere search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeviSearch {
    Found(LeviSphere),
    NotFound,
    /// The node budget ran out before the search finished.
    Inconclusive,
}

impl LeviSearch {
    pub fn found(&self) -> Option<&LeviSphere> {
        match self {
            LeviSearch::Found(s) => Some(s),
            _ => None,
        }
    }
}

/// Searches for a decomposition `F_q^n = U_1 ⊕ ... ⊕ U_s`, `s = dim X^Γ + 2`,
/// whose Levi sphere lies in `X^Γ` (every flag of subset sums is stable).
/// Parts are chosen in increasing order among the stable vertices; the
/// least decomposition found is returned.
pub fn levi_sphere_containment(fc: &FixedComplex, caps: &Caps) -> LeviSearch {
    let dim = fc.dim();
    if dim < 0 {
        return LeviSearch::NotFound;
    }
    let field = fc.field();
    let n = fc.n();
    let s = dim as usize + 2;
    let stable_vertices: Vec<&Subspace> = fc
        .stable()
        .iter()
        .filter(|f| f.len() == 1)
        .map(|f| &f.chain()[0])
        .collect();
    let is_stable_vertex = |v: &Subspace| v.is_full() || stable_vertices.binary_search(&v).is_ok();

    struct Search<'a> {
        parts: Vec<Subspace>,
        // sums[mask] over chosen parts
        sums: Vec<Subspace>,
        nodes: u64,
        budget: u64,
        candidates: &'a [&'a Subspace],
    }
    let mut sorted = stable_vertices.clone();
    sorted.sort();
    let mut search = Search {
        parts: Vec::new(),
        sums: vec![Subspace::zero(n)],
        nodes: 0,
        budget: caps.max_levi_nodes,
        candidates: &sorted,
    };

    // Returns Some(true) when found, Some(false) when exhausted, None on budget.
    fn rec(
        st: &mut Search<'_>,
        start: usize,
        s: usize,
        n: usize,
        field: &crate::field::Field,
        ok: &dyn Fn(&Subspace) -> bool,
    ) -> Option<bool> {
        let chosen = st.parts.len();
        let used: usize = st.parts.iter().map(Subspace::dim).sum();
        if chosen + 1 == s {
            // the last part is forced to be any complement; it must be a
            // stable vertex, so scan all of them (no order constraint)
            for &c in st.candidates {
                st.nodes += 1;
                if st.nodes > st.budget {
                    return None;
                }
                if c.dim() + used != n || !try_push(st, c, field, ok) {
                    continue;
                }
                return Some(true);
            }
            return Some(false);
        }
        for idx in start..st.candidates.len() {
            st.nodes += 1;
            if st.nodes > st.budget {
                return None;
            }
            let c = st.candidates[idx];
            // leave at least one dimension for each remaining part
            if used + c.dim() + (s - chosen - 1) > n {
                continue;
            }
            if !try_push(st, c, field, ok) {
                continue;
            }
            match rec(st, idx + 1, s, n, field, ok) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            st.parts.pop();
            let keep = st.sums.len() / 2;
            st.sums.truncate(keep);
        }
        Some(false)
    }

    fn try_push(
        st: &mut Search<'_>,
        c: &Subspace,
        field: &crate::field::Field,
        ok: &dyn Fn(&Subspace) -> bool,
    ) -> bool {
        let mut new_sums = Vec::with_capacity(st.sums.len());
        for old in &st.sums {
            let Ok(sum) = old.sum(field, c) else {
                return false;
            };
            if sum.dim() != old.dim() + c.dim() || !ok(&sum) {
                return false;
            }
            new_sums.push(sum);
        }
        st.sums.extend(new_sums);
        st.parts.push(c.clone());
        true
    }

    let ok = |v: &Subspace| is_stable_vertex(v);
    match rec(&mut search, 0, s, n, field, &ok) {
        None => LeviSearch::Inconclusive,
        Some(false) => LeviSearch::NotFound,
        Some(true) => {
            let sphere = LeviSphere::from_decomposition(field, search.parts)
                .expect("parts form a decomposition");
            if sphere.flags.iter().all(|f| fc.contains(f)) {
                LeviSearch::Found(sphere)
            } else {
                LeviSearch::NotFound
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::building::Building;
    use crate::field::Field;
    use crate::groups::{BuildingAuto, BuildingAutoSet, MatGroup};
    use crate::matrix::FqMatrix;

    fn int(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    fn fc_of(field: &Field, n: usize, gens: &[&[&[i64]]]) -> FixedComplex {
        let b = Building::build(n, field, &Caps::default()).unwrap();
        let gens = gens
            .iter()
            .map(|g| {
                FqMatrix::from_ints(field, &g.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
                    .unwrap()
            })
            .collect();
        let h = MatGroup::closure(field, n, gens, &Caps::default()).unwrap();
        FixedComplex::new(&b, &BuildingAutoSet::from_group(&h)).unwrap()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(
            invariant_factors(&int(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]])),
            vec![2.into(), 6.into(), 12.into()]
        );
        assert_eq!(
            invariant_factors(&int(&[&[0, 0], &[0, 0]])),
            Vec::<BigInt>::new()
        );
        assert_eq!(
            invariant_factors(&int(&[&[2, 0], &[0, 3]])),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        let m = int(&[&[4, 6], &[6, 9], &[2, 3]]);
        let (u, d, v) = smith_normal_form(&m);
        assert_eq!(mul(&mul(&u, &m), &v), d);
        assert_eq!(d[0][0], BigInt::from(1));
        assert!(d[1][1].is_zero());
    }

    #[test]
    fn point_and_isolated_points() {
        let pt = SimplicialComplex::from_simplices([vec![0]]);
        let hp = reduced_homology(&pt);
        assert_eq!(hp.reduced_betti, vec![0]);
        assert_eq!(classify(&hp, 0), TopoClass::PointLike);
        let three = SimplicialComplex::from_simplices([vec![0], vec![1], vec![2]]);
        let hp = reduced_homology(&three);
        assert_eq!(hp.reduced_betti, vec![2]);
        assert_eq!(
            classify(&hp, 0),
            TopoClass::SphereBouquetLike { dim: 0, count: 2 }
        );
    }

    #[test]
    fn circle_and_projective_plane() {
        let circle = SimplicialComplex::from_simplices([vec![0, 1], vec![1, 2], vec![0, 2]]);
        let hp = reduced_homology(&circle);
        assert_eq!(hp.reduced_betti, vec![0, 1]);
        assert_eq!(hp.euler_reduced, circle.reduced_euler_characteristic());
        // 6-vertex RP^2: H_1 = Z/2
        let rp2 = SimplicialComplex::from_simplices([
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 1, 5],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![1, 3, 4],
            vec![1, 3, 5],
            vec![2, 4, 5],
        ]);
        let hp = reduced_homology(&rp2);
        assert_eq!(hp.reduced_betti, vec![0, 0, 0]);
        assert_eq!(hp.torsion[1], vec![BigInt::from(2)]);
        assert_eq!(classify(&hp, 2), TopoClass::Other);
        let disk = SimplicialComplex::from_simplices([vec![0, 1, 2]]);
        assert_eq!(classify(&reduced_homology(&disk), 2), TopoClass::PointLike);
    }

    #[test]
    fn empty_complex() {
        let sc = SimplicialComplex::from_simplices(Vec::<Vec<usize>>::new());
        assert!(sc.is_empty());
        let hp = reduced_homology(&sc);
        assert!(hp.reduced_betti.is_empty());
        assert_eq!(classify(&hp, -1), TopoClass::PointLike);
    }

    #[test]
    fn full_gl3_f2_building_both_ways() {
        let f2 = Field::new(2, 1).unwrap();
        let b = Building::build(3, &f2, &Caps::default()).unwrap();
        let flat = flag_complex(b.flags());
        assert_eq!(flat.face_counts(), vec![14, 21]);
        let hp = reduced_homology(&flat);
        assert_eq!(hp.reduced_betti, vec![0, 8]);
        assert!(hp.is_torsion_free());
        assert_eq!(
            classify(&hp, 1),
            TopoClass::SphereBouquetLike { dim: 1, count: 8 }
        );
        let fc = FixedComplex::new(
            &b,
            &BuildingAutoSet::new(vec![BuildingAuto::Inner(FqMatrix::identity(3))], "id").unwrap(),
        )
        .unwrap();
        let sd = order_complex(&fc, &Caps::default()).unwrap();
        assert_eq!(sd.face_counts(), vec![35, 42]);
        assert_eq!(reduced_homology(&sd), hp);
    }

    #[test]
    fn order_complex_cap() {
        let f2 = Field::new(2, 1).unwrap();
        let b = Building::build(3, &f2, &Caps::default()).unwrap();
        let fc = FixedComplex::new(
            &b,
            &BuildingAutoSet::new(vec![BuildingAuto::Inner(FqMatrix::identity(3))], "id").unwrap(),
        )
        .unwrap();
        let caps = Caps {
            max_simplices: 10,
            ..Caps::default()
        };
        assert!(order_complex(&fc, &caps).is_err());
    }

    #[test]
    fn levi_search_examples() {
        let f3 = Field::new(3, 1).unwrap();
        let torus = fc_of(
            &f3,
            3,
            &[
                &[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]],
                &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]],
            ],
        );
        let found = levi_sphere_containment(&torus, &Caps::default());
        let apt = LeviSphere::apartment(&f3, 3).unwrap();
        assert_eq!(found.found().map(|s| &s.flags), Some(&apt.flags));
        let hp = reduced_homology(&order_complex(&torus, &Caps::default()).unwrap());
        assert_eq!(
            classify(&hp, torus.dim()),
            TopoClass::SphereBouquetLike { dim: 1, count: 1 }
        );

        let f2 = Field::new(2, 1).unwrap();
        let u = fc_of(&f2, 2, &[&[&[1, 1], &[0, 1]]]);
        assert_eq!(
            levi_sphere_containment(&u, &Caps::default()),
            LeviSearch::NotFound
        );

        let swap = fc_of(&f3, 2, &[&[&[0, 1], &[1, 0]]]);
        let s = levi_sphere_containment(&swap, &Caps::default());
        let parts = &s.found().unwrap().parts;
        assert_eq!(parts.len(), 2);
        assert!(parts
            .iter()
            .all(|p| swap.contains(&Flag::vertex(p.clone()))));

        let caps = Caps {
            max_levi_nodes: 1,
            ..Caps::default()
        };
        assert_eq!(
            levi_sphere_containment(&torus, &caps),
            LeviSearch::Inconclusive
        );
    }
}
