//! Arithmetic in small finite fields F_{p^k}, p an odd prime.
//!
//! Fields are runtime values: a `Field` owns the characteristic, the extension
//! degree and the reduction modulus, and every element operation goes through
//! it. Elements are dense little-endian coefficient vectors over F_p. For
//! k >= 2 the modulus is the first monic irreducible of degree k in base-p
//! value order of its coefficient vector (constant term varies fastest), so
//! two `Field`s with equal (p, k) are interchangeable and a field serialized
//! as `{"p": .., "k": ..}` reconstructs bit-identically.
//!
//! `Field::new` enforces the enumeration budget p^k <= 10^7 expected of
//! user-facing base fields. Internal splitting-field towers built by
//! `Field::tower` may be far larger; they are never enumerated, only used for
//! root materialization, so their size alone is unconstrained.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest admitted base-field size: point counting enumerates P^1(F_{q^n})
/// or P^2(F_{q^n}) directly, so q itself must stay enumerable.
pub const MAX_FIELD_SIZE: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic must be an odd prime, got {0}")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("field size out of range: p = {p}, k = {k}")]
    TooLarge { p: u64, k: usize },
}

/// An element of a specific `Field`: little-endian coefficients mod p, always
/// of length k. Comparison order is the base-p value of the vector (most
/// significant coefficient last), matching element enumeration order.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FieldElem(pub(crate) Vec<u64>);

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl std::fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            write!(f, "{:?}", self.0)
        }
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElem {
    /// Base-p value order: compare from the most significant coefficient down.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        debug_assert_eq!(self.0.len(), other.0.len());
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

/// A concrete finite field F_{p^k}.
#[derive(Clone, Debug)]
pub struct Field {
    p: u64,
    k: usize,
    /// Lower k coefficients of the monic degree-k modulus (empty for k = 1).
    tail: Vec<u64>,
    /// p^k when it fits in u64; large towers leave this as None.
    size_u64: Option<u64>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for Field {}

/// Serialized shape of a field: the modulus is re-derived on load.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FieldRepr {
    pub p: u64,
    pub k: usize,
}

impl Field {
    /// Builds F_{p^k} for an odd prime p, 1 <= k <= 6, p^k <= 10^7.
    pub fn new(p: u64, k: usize) -> Result<Field, FieldError> {
        if p == 2 {
            return Err(FieldError::EvenCharacteristic);
        }
        if p < 3 || !is_prime_u64(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p > 1 << 16 || !(1..=6).contains(&k) {
            return Err(FieldError::TooLarge { p, k });
        }
        match checked_pow(p, k) {
            Some(q) if q <= MAX_FIELD_SIZE => {}
            _ => return Err(FieldError::TooLarge { p, k }),
        }
        Ok(Self::tower(p, k))
    }

    /// Builds F_{p^k} without the size budget. Used for splitting-field
    /// towers during root materialization; p must already be a valid odd
    /// prime (callers extend an existing `Field`).
    pub(crate) fn tower(p: u64, k: usize) -> Field {
        assert!(k >= 1);
        let tail = if k == 1 {
            Vec::new()
        } else {
            smallest_irreducible_tail(p, k)
        };
        Field {
            p,
            k,
            tail,
            size_u64: checked_pow(p, k),
        }
    }

    pub fn from_repr(r: FieldRepr) -> Result<Field, FieldError> {
        Field::new(r.p, r.k)
    }

    pub fn repr(&self) -> FieldRepr {
        FieldRepr { p: self.p, k: self.k }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// p^k, available whenever the field is small enough to enumerate.
    pub fn size(&self) -> Option<u64> {
        self.size_u64
    }

    pub fn size_big(&self) -> BigUint {
        BigUint::from(self.p).pow(self.k as u32)
    }

    /// Monic modulus as little-endian coefficients (length k + 1); `None`
    /// for prime fields.
    pub fn modulus(&self) -> Option<Vec<u64>> {
        if self.k == 1 {
            None
        } else {
            let mut m = self.tail.clone();
            m.push(1);
            Some(m)
        }
    }

    // --- element construction -------------------------------------------------

    pub fn zero(&self) -> FieldElem {
        FieldElem(vec![0; self.k])
    }

    pub fn one(&self) -> FieldElem {
        self.from_u64(1)
    }

    pub fn from_u64(&self, c: u64) -> FieldElem {
        let mut v = vec![0; self.k];
        v[0] = c % self.p;
        FieldElem(v)
    }

    pub fn from_i64(&self, c: i64) -> FieldElem {
        let p = self.p as i64;
        self.from_u64(c.rem_euclid(p) as u64)
    }

    /// Element from little-endian signed coefficients; shorter input is
    /// padded with zeros. Panics if more than k coefficients are given.
    pub fn elem(&self, coeffs: &[i64]) -> FieldElem {
        assert!(coeffs.len() <= self.k, "element has too many coefficients");
        let p = self.p as i64;
        let mut v = vec![0; self.k];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i] = c.rem_euclid(p) as u64;
        }
        FieldElem(v)
    }

    /// The generator t of the polynomial basis (equals 0 only when k = 1 is
    /// misused; callers working in extensions use this as the modulus root).
    pub fn gen(&self) -> FieldElem {
        let mut v = vec![0; self.k];
        if self.k > 1 {
            v[1] = 1;
        }
        FieldElem(v)
    }

    /// Enumeration: the element whose coefficient vector is the base-p
    /// expansion of `idx`.
    pub fn elem_from_index(&self, mut idx: u64) -> FieldElem {
        let mut v = vec![0; self.k];
        for slot in v.iter_mut() {
            *slot = idx % self.p;
            idx /= self.p;
        }
        debug_assert_eq!(idx, 0, "index exceeds field size");
        FieldElem(v)
    }

    pub fn index_of(&self, a: &FieldElem) -> u64 {
        let mut idx = 0u64;
        for &c in a.0.iter().rev() {
            idx = idx * self.p + c;
        }
        idx
    }

    pub fn random_elem<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        FieldElem((0..self.k).map(|_| rng.gen_range(0..self.p)).collect())
    }

    // --- arithmetic -----------------------------------------------------------

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut v = a.0.clone();
        self.add_assign(&mut v, &b.0);
        FieldElem(v)
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut v = a.0.clone();
        self.sub_assign(&mut v, &b.0);
        FieldElem(v)
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem(a.0.iter().map(|&c| if c == 0 { 0 } else { self.p - c }).collect())
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut out = vec![0u64; self.k];
        let mut scratch = vec![0u64; 2 * self.k - 1];
        self.mul_into(&a.0, &b.0, &mut out, &mut scratch);
        FieldElem(out)
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn scale(&self, a: &FieldElem, c: u64) -> FieldElem {
        let c = c % self.p;
        FieldElem(a.0.iter().map(|&x| x * c % self.p).collect())
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let e = self.size_big() - 2u32;
        Some(self.pow_big(a, &e))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Option<FieldElem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow(&self, a: &FieldElem, e: u64) -> FieldElem {
        self.pow_big(a, &BigUint::from(e))
    }

    pub fn pow_big(&self, a: &FieldElem, e: &BigUint) -> FieldElem {
        let mut acc = self.one();
        let bits = e.bits();
        for i in (0..bits).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// The p-power Frobenius x -> x^p, the generator of Gal(F_{p^k}/F_p).
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        self.pow(a, self.p)
    }

    // --- in-place slice kernels (hot counting loops avoid reallocations) ------

    pub(crate) fn add_assign(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            let s = *x + y;
            *x = if s >= self.p { s - self.p } else { s };
        }
    }

    pub(crate) fn sub_assign(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            let s = *x + self.p - y;
            *x = if s >= self.p { s - self.p } else { s };
        }
    }

    /// out = a * b reduced by the modulus. `scratch` must have length
    /// 2k - 1; coefficients stay below p <= 2^16 so the schoolbook
    /// accumulation cannot overflow u64.
    pub(crate) fn mul_into(&self, a: &[u64], b: &[u64], out: &mut [u64], scratch: &mut [u64]) {
        let k = self.k;
        if k == 1 {
            out[0] = a[0] * b[0] % self.p;
            return;
        }
        scratch.fill(0);
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                scratch[i + j] += ai * bj;
            }
        }
        for s in scratch.iter_mut() {
            *s %= self.p;
        }
        // Fold degrees 2k-2 .. k down using x^k = -tail(x).
        for d in (k..2 * k - 1).rev() {
            let c = scratch[d];
            if c == 0 {
                continue;
            }
            scratch[d] = 0;
            for (j, &t) in self.tail.iter().enumerate() {
                if t != 0 {
                    scratch[d - k + j] = (scratch[d - k + j] + c * (self.p - t)) % self.p;
                }
            }
        }
        out.copy_from_slice(&scratch[..k]);
    }

    // --- quadratic character and square roots ----------------------------------

    /// Quadratic character: 0 on zero, +1 on nonzero squares, -1 otherwise.
    pub fn chi(&self, a: &FieldElem) -> i8 {
        if a.is_zero() {
            return 0;
        }
        let e = (self.size_big() - 1u32) >> 1;
        let r = self.pow_big(a, &e);
        if r == self.one() {
            1
        } else {
            debug_assert_eq!(r, self.neg(&self.one()));
            -1
        }
    }

    /// Canonical square root: the smaller of the two roots in element order.
    /// Only supported on enumerable fields (all public base fields qualify).
    pub fn sqrt(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return Some(self.zero());
        }
        if self.chi(a) != 1 {
            return None;
        }
        let q = self
            .size_u64
            .expect("square roots are only taken over enumerable fields");
        let r = if q % 4 == 3 {
            self.pow(a, (q + 1) / 4)
        } else {
            self.tonelli_shanks(a, q)
        };
        debug_assert_eq!(self.mul(&r, &r), *a);
        let rn = self.neg(&r);
        Some(if rn < r { rn } else { r })
    }

    fn tonelli_shanks(&self, a: &FieldElem, q: u64) -> FieldElem {
        let mut t = q - 1;
        let mut s = 0u32;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        // First non-residue in enumeration order; exists since q is odd.
        let z = (1..q)
            .map(|i| self.elem_from_index(i))
            .find(|e| self.chi(e) == -1)
            .expect("odd field has a quadratic non-residue");
        let mut m = s;
        let mut c = self.pow(&z, t);
        let mut u = self.pow(a, t);
        let mut r = self.pow(a, (t + 1) / 2);
        while u != self.one() {
            let mut i = 0u32;
            let mut probe = u.clone();
            while probe != self.one() {
                probe = self.square(&probe);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.square(&b);
            }
            m = i;
            c = self.square(&b);
            u = self.mul(&u, &c);
            r = self.mul(&r, &b);
        }
        r
    }
}

fn checked_pow(p: u64, k: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

// --- raw mod-p polynomial helpers for the modulus search ---------------------
//
// These operate on trimmed little-endian u64 coefficient vectors over F_p and
// exist only so `Field` construction does not depend on the generic polynomial
// layer built on top of it.

fn raw_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn raw_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + ai * bj) % p;
        }
    }
    raw_trim(&mut out);
    out
}

/// Remainder of `a` by monic `f`.
fn raw_rem(mut a: Vec<u64>, f: &[u64], p: u64) -> Vec<u64> {
    let df = f.len() - 1;
    while a.len() > df {
        let c = *a.last().unwrap();
        let shift = a.len() - 1 - df;
        if c != 0 {
            for (j, &fj) in f.iter().enumerate().take(df) {
                let idx = shift + j;
                a[idx] = (a[idx] + c * (p - fj)) % p;
            }
        }
        a.pop();
        raw_trim(&mut a);
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Extended Euclid on integers; p prime, a nonzero mod p.
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "element not invertible");
    s0.rem_euclid(p as i64) as u64
}

fn raw_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    raw_trim(&mut a);
    raw_trim(&mut b);
    while !b.is_empty() {
        // Make b monic, then reduce.
        let lead = *b.last().unwrap();
        if lead != 1 {
            let li = inv_mod(lead, p);
            for c in b.iter_mut() {
                *c = *c * li % p;
            }
        }
        let r = raw_rem(a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        if lead != 1 {
            let li = inv_mod(lead, p);
            for c in a.iter_mut() {
                *c = *c * li % p;
            }
        }
    }
    a
}

fn raw_powmod(base: &[u64], e: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = raw_rem(base.to_vec(), f, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_rem(raw_mul(&acc, &b, p), f, p);
        }
        b = raw_rem(raw_mul(&b, &b, p), f, p);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin irreducibility for monic f of degree m over F_p; for m <= 3 the
/// equivalent absence-of-roots scan is used instead.
fn raw_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m <= 3 {
        // Reducible <=> has a linear factor <=> has a root in F_p.
        for x in 0..p {
            let mut v = 0u64;
            for &c in f.iter().rev() {
                v = (v * x + c) % p;
            }
            if v == 0 {
                return false;
            }
        }
        return true;
    }
    // Iterated Frobenius: h_j = x^(p^j) mod f.
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let checkpoints: Vec<usize> = prime_factors(m).iter().map(|l| m / l).collect();
    for j in 1..=m {
        h = raw_powmod(&h, p, f, p);
        if checkpoints.contains(&j) {
            // gcd(h - x, f) must be trivial.
            let mut d = h.clone();
            while d.len() < 2 {
                d.push(0);
            }
            d[1] = (d[1] + p - 1) % p;
            let mut dv = d;
            raw_trim(&mut dv);
            let g = raw_gcd(dv, f.to_vec(), p);
            if g.len() != 1 {
                return false;
            }
        }
    }
    h == x
}

/// Lower coefficients of the first monic irreducible of degree k over F_p in
/// base-p value order of (c_0, ..., c_{k-1}).
fn smallest_irreducible_tail(p: u64, k: usize) -> Vec<u64> {
    let mut digits = vec![0u64; k];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if raw_irreducible(&f, p) {
            return digits;
        }
        // Increment the base-p counter; a monic irreducible of every degree
        // exists, so this terminates well before wrapping.
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
            assert!(i < k, "no irreducible of degree {k} over F_{p}?");
        }
    }
}
