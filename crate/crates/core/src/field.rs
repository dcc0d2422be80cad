//! Finite fields `F_q`, `q = p^m`.
//!
//! An element of `F_{p^m}` is stored as a `u16` whose base-`p` digits are the
//! coefficients of its polynomial representative modulo the field's modulus
//! (digit `i` is the coefficient of `x^i`). For `m = 1` this is the usual
//! residue in `0..p`. Small fields get precomputed operation tables; larger
//! ones fall back to polynomial arithmetic.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Element of a [`Field`], encoded as described in the module docs.
pub type Elem = u16;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u32 = 1 << 16;

/// Fields up to this order carry full addition/multiplication tables.
const TABLE_LIMIT: u32 = 256;

#[derive(Debug)]
struct Tables {
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field `F_{p^m}` with a fixed irreducible modulus.
#[derive(Clone)]
pub struct Field {
    p: u16,
    m: u32,
    q: u32,
    /// Monic modulus, coefficients from `x^0` up to `x^m` (last entry is 1).
    modulus: Vec<u16>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
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

// Polynomials over F_p as coefficient vectors, lowest degree first.

fn poly_trim(a: &mut Vec<u16>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
    let p32 = p as u32;
    let mut r: Vec<u16> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db] as u32, p32);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] as u32 * lead_inv) % p32;
        for (i, &bi) in b.iter().enumerate() {
            let idx = dr - db + i;
            let sub = (c * bi as u32) % p32;
            r[idx] = ((r[idx] as u32 + p32 - sub) % p32) as u16;
        }
        poly_trim(&mut r);
    }
    r
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime: a^(p-2)
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn monic_polys(p: u16, deg: u32) -> impl Iterator<Item = Vec<u16>> {
    // Lexicographic order on the coefficients of x^{deg-1}, ..., x^0.
    let count = (p as u64).pow(deg);
    (0..count).map(move |mut k| {
        let mut coeffs = vec![0u16; deg as usize + 1];
        coeffs[deg as usize] = 1;
        for i in 0..deg as usize {
            coeffs[i] = (k % p as u64) as u16;
            k /= p as u64;
        }
        coeffs
    })
}

fn is_irreducible(f: &[u16], p: u16) -> bool {
    let deg = (f.len() - 1) as u32;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        for g in monic_polys(p, d) {
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    /// Builds `F_{p^m}` using the lexicographically least monic irreducible
    /// polynomial of degree `m` (ordered by the coefficients of
    /// `x^{m-1}, ..., x^0`).
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let q = (p as u64)
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_ORDER as u64);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge {
                p,
                m,
                cap: MAX_FIELD_ORDER,
            });
        };
        let p = p as u16;
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            monic_polys(p, m)
                .find(|f| is_irreducible(f, p))
                .expect("an irreducible polynomial of every degree exists")
        };
        let mut field = Field {
            p,
            m,
            q: q as u32,
            modulus,
            tables: None,
        };
        if field.q <= TABLE_LIMIT {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            neg[a] = self.slow_neg(a as Elem);
            for b in 0..q {
                add[a * q + b] = self.slow_add(a as Elem, b as Elem);
                let prod = self.slow_mul(a as Elem, b as Elem);
                mul[a * q + b] = prod;
                if prod == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    pub fn characteristic(&self) -> u32 {
        self.p as u32
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, lowest-degree coefficient first.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q as Elem
    }

    fn digits(&self, a: Elem) -> Vec<u16> {
        let mut a = a as u32;
        let mut out = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            out.push((a % self.p as u32) as u16);
            a /= self.p as u32;
        }
        out
    }

    fn from_digits(&self, digits: &[u16]) -> Elem {
        let mut acc = 0u32;
        for &d in digits.iter().rev() {
            acc = acc * self.p as u32 + d as u32;
        }
        acc as Elem
    }

    fn slow_add(&self, a: Elem, b: Elem) -> Elem {
        if self.m == 1 {
            return ((a as u32 + b as u32) % self.p as u32) as Elem;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u16> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| ((x as u32 + y as u32) % self.p as u32) as u16)
            .collect();
        self.from_digits(&sum)
    }

    fn slow_neg(&self, a: Elem) -> Elem {
        let p = self.p as u32;
        if self.m == 1 {
            return ((p - a as u32 % p) % p) as Elem;
        }
        let d: Vec<u16> = self
            .digits(a)
            .iter()
            .map(|&x| ((p - x as u32) % p) as u16)
            .collect();
        self.from_digits(&d)
    }

    fn slow_mul(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p as u32;
        if self.m == 1 {
            return ((a as u32 * b as u32) % p) as Elem;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u16; da.len() + db.len()];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u32 + x as u32 * y as u32) % p) as u16;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.m as usize, 0);
        self.from_digits(&r)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.add[a as usize * self.q as usize + b as usize],
            None => self.slow_add(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.neg[a as usize],
            None => self.slow_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => t.mul[a as usize * self.q as usize + b as usize],
            None => self.slow_mul(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        match &self.tables {
            Some(t) => Some(t.inv[a as usize]),
            None => Some(self.pow(a, self.q as u64 - 2)),
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `x ↦ x^{p^r}`.
    pub fn frobenius(&self, a: Elem, r: u32) -> Elem {
        let r = r % self.m;
        let mut x = a;
        for _ in 0..r {
            x = self.pow(x, self.p as u64);
        }
        x
    }

    /// Reduces an integer entry into the field.
    ///
    /// Nonnegative `k < q` is read as an element code (base-`p` digits are
    /// polynomial coefficients); for prime fields any integer is reduced mod
    /// `p`. Negative values denote additive inverses.
    pub fn from_int(&self, k: i64) -> Result<Elem> {
        if self.m == 1 {
            return Ok(k.rem_euclid(self.p as i64) as Elem);
        }
        let abs = k.unsigned_abs();
        if abs >= self.q as u64 {
            return Err(Error::EntryOutOfRange {
                entry: k,
                q: self.q,
            });
        }
        let e = abs as Elem;
        Ok(if k < 0 { self.neg(e) } else { e })
    }

    /// Elements fixed by `x ↦ x^{p^r}`, i.e. the subfield `F_{p^{gcd(m, r)}}`.
    pub fn fixed_by_frobenius(&self, a: Elem, r: u32) -> bool {
        self.frobenius(a, r) == a
    }

    /// Embedding table `sub -> self` for a subfield `sub` of `self` (same
    /// characteristic, `sub.degree()` dividing `self.degree()`).
    pub fn embedding_from(&self, sub: &Field) -> Result<Vec<Elem>> {
        if sub.p != self.p || self.m % sub.m != 0 {
            return Err(Error::FieldMismatch(format!(
                "{sub} does not embed in {self}"
            )));
        }
        if sub.m == 1 {
            return Ok((0..sub.q as Elem).collect());
        }
        // find the least root of sub's modulus in self
        let root = self
            .elements()
            .find(|&x| {
                let mut acc: Elem = 0;
                for &c in sub.modulus.iter().rev() {
                    acc = self.add(self.mul(acc, x), c as Elem);
                }
                acc == 0
            })
            .expect("a subfield modulus splits in the extension");
        let table = (0..sub.q as Elem)
            .map(|a| {
                let digits = sub.digits(a);
                let mut acc: Elem = 0;
                for &c in digits.iter().rev() {
                    acc = self.add(self.mul(acc, root), c as Elem);
                }
                acc
            })
            .collect();
        Ok(table)
    }
}
