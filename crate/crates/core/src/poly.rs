//! Univariate polynomials over runtime finite fields: arithmetic, gcds,
//! resultants, Lagrange interpolation, deterministic root extraction,
//! distinct-degree splitting data, and explicit embeddings of a field into
//! the towers where roots materialize.

use num_bigint::BigUint;

use crate::field::{Field, FieldElem};
use crate::matrix;

/// Dense univariate polynomial, little-endian coefficients, no trailing
/// zeros (the zero polynomial has an empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UniPoly {
    coeffs: Vec<FieldElem>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElem>) -> UniPoly {
        while coeffs.last().map_or(false, FieldElem::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(vals: &[i64], f: &Field) -> UniPoly {
        Self::from_coeffs(vals.iter().map(|&v| f.from_i64(v)).collect())
    }

    /// The monomial x.
    pub fn x(f: &Field) -> UniPoly {
        UniPoly { coeffs: vec![f.zero(), f.one()] }
    }

    pub fn constant(c: FieldElem) -> UniPoly {
        Self::from_coeffs(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    /// Coefficient of x^i, zero beyond the degree.
    pub fn coeff(&self, i: usize, f: &Field) -> FieldElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn lead(&self) -> &FieldElem {
        self.coeffs.last().expect("zero polynomial has no leading coefficient")
    }

    pub fn eval(&self, x: &FieldElem, f: &Field) -> FieldElem {
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, x), c);
        }
        acc
    }

    pub fn add(&self, o: &UniPoly, f: &Field) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.add(&self.coeff(i, f), &o.coeff(i, f)));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn sub(&self, o: &UniPoly, f: &Field) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(f.sub(&self.coeff(i, f), &o.coeff(i, f)));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn neg(&self, f: &Field) -> UniPoly {
        UniPoly { coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect() }
    }

    pub fn mul(&self, o: &UniPoly, f: &Field) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let t = f.mul(a, b);
                out[i + j] = f.add(&out[i + j], &t);
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &FieldElem, f: &Field) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn monic(&self, f: &Field) -> UniPoly {
        let li = f.inv(self.lead()).unwrap();
        self.scale(&li, f)
    }

    pub fn derivative(&self, f: &Field) -> UniPoly {
        let out: Vec<FieldElem> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.scale(c, i as u64))
            .collect();
        UniPoly::from_coeffs(out)
    }

    /// Long division by a nonzero divisor: returns (quotient, remainder).
    pub fn divrem(&self, d: &UniPoly, f: &Field) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let li = f.inv(d.lead()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![f.zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let c = f.mul(rem.last().unwrap(), &li);
            let shift = rem.len() - 1 - dd;
            if !c.is_zero() {
                quo[shift] = c.clone();
                for (j, dc) in d.coeffs.iter().enumerate().take(dd) {
                    let t = f.mul(&c, dc);
                    rem[shift + j] = f.sub(&rem[shift + j], &t);
                }
            }
            rem.pop();
            while rem.last().map_or(false, FieldElem::is_zero) {
                rem.pop();
            }
        }
        (UniPoly::from_coeffs(quo), UniPoly { coeffs: rem })
    }

    pub fn div_exact(&self, d: &UniPoly, f: &Field) -> UniPoly {
        let (q, r) = self.divrem(d, f);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, o: &UniPoly, f: &Field) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let bm = b.monic(f);
            let r = a.divrem(&bm, f).1;
            a = bm;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic(f)
        }
    }

    pub fn is_squarefree(&self, f: &Field) -> bool {
        match self.degree() {
            None => false,
            Some(0) | Some(1) => true,
            Some(_) => self.gcd(&self.derivative(f), f).degree() == Some(0),
        }
    }

    pub fn pow_mod(&self, e: u64, m: &UniPoly, f: &Field) -> UniPoly {
        self.pow_mod_big(&BigUint::from(e), m, f)
    }

    pub fn pow_mod_big(&self, e: &BigUint, m: &UniPoly, f: &Field) -> UniPoly {
        let mut acc = UniPoly::constant(f.one());
        let (_, base) = self.divrem(m, f);
        let mut acc_set = false;
        let bits = e.bits();
        for i in (0..bits).rev() {
            if acc_set {
                acc = acc.mul(&acc, f).divrem(m, f).1;
            }
            if e.bit(i) {
                acc = acc.mul(&base, f).divrem(m, f).1;
                acc_set = true;
            } else {
                acc_set = true;
            }
        }
        acc
    }
}

/// x^(p^j) mod m, by iterating the p-power map (exponentiation respects the
/// congruence, so repeated reduction is sound).
fn frobenius_power_mod(j: usize, m: &UniPoly, f: &Field) -> UniPoly {
    let mut h = UniPoly::x(f).divrem(m, f).1;
    for _ in 0..j {
        h = h.pow_mod(f.p(), m, f);
    }
    h
}

/// All roots of `poly` lying in `fld`, sorted in canonical element order.
/// Deterministic: the splitting shifts are tried in enumeration order.
pub fn roots_in_field(poly: &UniPoly, fld: &Field) -> Vec<FieldElem> {
    assert!(!poly.is_zero(), "zero polynomial has every root");
    if poly.degree() == Some(0) {
        return Vec::new();
    }
    // gcd with x^Q - x isolates exactly the rational roots, each simple.
    let h = frobenius_power_mod(fld.degree(), poly, fld);
    let hx = h.sub(&UniPoly::x(fld), fld);
    let r = poly.gcd(&hx, fld);
    let mut roots = Vec::new();
    chi_split(&r, fld, &mut roots);
    roots.sort();
    roots
}

/// Splits a monic product of distinct linear factors using quadratic
/// character sieves (x + delta)^((Q-1)/2) for successive shifts delta.
fn chi_split(r: &UniPoly, fld: &Field, out: &mut Vec<FieldElem>) {
    match r.degree() {
        None | Some(0) => {}
        Some(1) => out.push(fld.neg(&r.coeff(0, fld))),
        Some(deg) => {
            let e = (fld.size_big() - 1u32) >> 1;
            for didx in 0.. {
                let delta = fld.elem_from_index(didx);
                let shifted = UniPoly::from_coeffs(vec![delta, fld.one()]);
                let s = shifted.pow_mod_big(&e, r, fld);
                let s1 = s.sub(&UniPoly::constant(fld.one()), fld);
                let d = r.gcd(&s1, fld);
                if let Some(dd) = d.degree() {
                    if dd > 0 && dd < deg {
                        chi_split(&d, fld, out);
                        chi_split(&r.div_exact(&d, fld), fld, out);
                        return;
                    }
                }
            }
            unreachable!("character sieve separates distinct roots");
        }
    }
}

/// Distinct-degree splitting data for a squarefree polynomial: pairs
/// (degree, number of irreducible factors of that degree), ascending.
pub fn ddf_degrees(poly: &UniPoly, fld: &Field) -> Vec<(usize, usize)> {
    assert!(poly.is_squarefree(fld), "distinct-degree data needs squarefree input");
    let mut f = poly.monic(fld);
    let mut out = Vec::new();
    let mut h = UniPoly::x(fld).divrem(&f, fld).1;
    let mut d = 0;
    while let Some(deg) = f.degree() {
        if deg == 0 {
            break;
        }
        d += 1;
        if 2 * d > deg {
            out.push((deg, 1));
            break;
        }
        for _ in 0..fld.degree() {
            h = h.pow_mod(fld.p(), &f, fld);
        }
        let g = f.gcd(&h.sub(&UniPoly::x(fld), fld), fld);
        if let Some(gd) = g.degree() {
            if gd > 0 {
                out.push((d, gd / d));
                f = f.div_exact(&g, fld);
                h = h.divrem(&f, fld).1;
            }
        }
    }
    out
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

/// Degree over `fld` of the splitting field of a squarefree polynomial.
pub fn splitting_degree(poly: &UniPoly, fld: &Field) -> usize {
    ddf_degrees(poly, fld).iter().fold(1, |acc, &(d, _)| lcm(acc, d))
}

/// Lagrange interpolation through points with pairwise distinct x values.
pub fn interpolate(points: &[(FieldElem, FieldElem)], f: &Field) -> UniPoly {
    let mut master = UniPoly::constant(f.one());
    for (x, _) in points {
        let lin = UniPoly::from_coeffs(vec![f.neg(x), f.one()]);
        master = master.mul(&lin, f);
    }
    let mut acc = UniPoly::zero();
    for (x, y) in points {
        let lin = UniPoly::from_coeffs(vec![f.neg(x), f.one()]);
        let num = master.div_exact(&lin, f);
        let denom = num.eval(x, f);
        let w = f.mul(y, &f.inv(&denom).unwrap());
        acc = acc.add(&num.scale(&w, f), f);
    }
    acc
}

/// Sylvester determinant for coefficient slices in ascending order with the
/// stated degrees (slices must have length degree + 1; leading entries may
/// be zero when a nominal degree is intended).
pub(crate) fn sylvester_det(a: &[FieldElem], m: usize, b: &[FieldElem], n: usize, f: &Field) -> FieldElem {
    let size = m + n;
    if size == 0 {
        return f.one();
    }
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![f.zero(); size];
        for t in 0..=m {
            row[i + t] = a[m - t].clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![f.zero(); size];
        for t in 0..=n {
            row[i + t] = b[n - t].clone();
        }
        rows.push(row);
    }
    matrix::det(rows, f)
}

/// Resultant with respect to the actual degrees; zero if either input is the
/// zero polynomial.
pub fn resultant(a: &UniPoly, b: &UniPoly, f: &Field) -> FieldElem {
    match (a.degree(), b.degree()) {
        (Some(m), Some(n)) => sylvester_det(a.coeffs(), m, b.coeffs(), n, f),
        _ => f.zero(),
    }
}

/// An explicit embedding of a field into the degree-j tower above it, with
/// exact membership testing for the reverse direction.
pub struct Extension {
    base: Field,
    top: Field,
    j: usize,
    /// theta^0 .. theta^(k0-1) in the top field, theta the canonical root of
    /// the base modulus.
    theta_powers: Vec<FieldElem>,
    /// Row-reduction transform E over F_p with E * M in echelon form, M the
    /// K x k0 matrix of theta powers; applied to coordinates for retraction.
    recover: Vec<Vec<FieldElem>>,
    prime: Field,
}

impl Extension {
    pub fn new(base: &Field, j: usize) -> Extension {
        assert!(j >= 1);
        let k0 = base.degree();
        let top = if j == 1 {
            base.clone()
        } else {
            Field::tower(base.p(), k0 * j)
        };
        let theta_powers = if k0 == 1 {
            vec![top.one()]
        } else if j == 1 {
            (0..k0).map(|i| top.pow(&top.gen(), i as u64)).collect()
        } else {
            let modpoly = UniPoly::from_coeffs(
                base.modulus().unwrap().iter().map(|&c| top.from_u64(c)).collect(),
            );
            let roots = roots_in_field(&modpoly, &top);
            assert_eq!(roots.len(), k0, "modulus splits completely in the tower");
            let theta = roots[0].clone();
            let mut pows = Vec::with_capacity(k0);
            let mut acc = top.one();
            for _ in 0..k0 {
                pows.push(acc.clone());
                acc = top.mul(&acc, &theta);
            }
            pows
        };
        let prime = Field::tower(base.p(), 1);
        let kk = top.degree();
        // Augment [M | I] and row-reduce; M has full column rank, so the
        // pivots sit in the first k0 columns and E = right block satisfies
        // E * M = [I; 0].
        let mut rows: Vec<Vec<FieldElem>> = (0..kk)
            .map(|r| {
                let mut row: Vec<FieldElem> = theta_powers
                    .iter()
                    .map(|tp| prime.from_u64(tp.coeffs()[r]))
                    .collect();
                for c in 0..kk {
                    row.push(if c == r { prime.one() } else { prime.zero() });
                }
                row
            })
            .collect();
        let pivots = matrix::rref(&mut rows, &prime);
        assert_eq!(&pivots[..theta_powers.len()], &(0..theta_powers.len()).collect::<Vec<_>>()[..]);
        let recover = rows
            .into_iter()
            .map(|row| row[theta_powers.len()..].to_vec())
            .collect();
        Extension { base: base.clone(), top, j, theta_powers, recover, prime }
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn top(&self) -> &Field {
        &self.top
    }

    pub fn degree(&self) -> usize {
        self.j
    }

    pub fn embed(&self, a: &FieldElem) -> FieldElem {
        let mut acc = self.top.zero();
        for (i, tp) in self.theta_powers.iter().enumerate() {
            acc = self.top.add(&acc, &self.top.scale(tp, a.coeffs()[i]));
        }
        acc
    }

    pub fn embed_poly(&self, p: &UniPoly) -> UniPoly {
        UniPoly::from_coeffs(p.coeffs().iter().map(|c| self.embed(c)).collect())
    }

    /// Inverse of `embed` where defined: Some exactly on the embedded copy
    /// of the base field.
    pub fn retract(&self, y: &FieldElem) -> Option<FieldElem> {
        let k0 = self.base.degree();
        let mut coeffs = vec![0u64; k0];
        for (r, row) in self.recover.iter().enumerate() {
            let mut acc = self.prime.zero();
            for (c, e) in row.iter().enumerate() {
                acc = self.prime.add(&acc, &self.prime.scale(e, y.coeffs()[c]));
            }
            let v = acc.coeffs()[0];
            if r < k0 {
                coeffs[r] = v;
            } else if v != 0 {
                return None;
            }
        }
        Some(self.base.elem(&coeffs.iter().map(|&c| c as i64).collect::<Vec<_>>()))
    }

    pub fn retract_poly(&self, p: &UniPoly) -> Option<UniPoly> {
        let mut out = Vec::with_capacity(p.coeffs().len());
        for c in p.coeffs() {
            out.push(self.retract(c)?);
        }
        Some(UniPoly::from_coeffs(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn f13() -> Field {
        Field::new(13, 1).unwrap()
    }

    #[test]
    fn division_and_gcd() {
        let f = f13();
        let a = UniPoly::from_i64(&[-6, 11, -6, 1], &f); // (x-1)(x-2)(x-3)
        let b = UniPoly::from_i64(&[2, -3, 1], &f); // (x-1)(x-2)
        let g = a.gcd(&b, &f);
        assert_eq!(g, b.monic(&f));
        let q = a.div_exact(&b, &f);
        assert_eq!(q, UniPoly::from_i64(&[-3, 1], &f));
    }

    #[test]
    fn resultant_known_values() {
        let f = Field::new(7, 1).unwrap();
        let a = UniPoly::from_i64(&[-1, 1], &f);
        let b = UniPoly::from_i64(&[1, 1], &f);
        assert_eq!(resultant(&a, &b, &f), f.from_u64(2));

        let f5 = Field::new(5, 1).unwrap();
        let c = UniPoly::from_i64(&[1, 0, 1], &f5); // x^2+1, root 2
        let d = UniPoly::from_i64(&[-2, 1], &f5); // x-2
        assert_eq!(resultant(&c, &d, &f5), f5.zero());
    }

    #[test]
    fn resultant_is_multiplicative_in_the_first_argument() {
        let f = f13();
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..50 {
            let rand_poly = |rng: &mut ChaCha12Rng, d: usize| {
                let mut coeffs: Vec<FieldElem> = (0..=d).map(|_| f.random_elem(rng)).collect();
                while coeffs.last().unwrap().is_zero() {
                    *coeffs.last_mut().unwrap() = f.random_elem(rng);
                }
                UniPoly::from_coeffs(coeffs)
            };
            let a = rand_poly(&mut rng, 2);
            let b = rand_poly(&mut rng, 3);
            let h = rand_poly(&mut rng, 2);
            let lhs = resultant(&a.mul(&b, &f), &h, &f);
            let rhs = f.mul(&resultant(&a, &h, &f), &resultant(&b, &h, &f));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn roots_sorted_and_complete() {
        let f = f13();
        // (x^2+1)(x-3): x^2+1 has roots 5 and 8 mod 13.
        let p = UniPoly::from_i64(&[1, 0, 1], &f).mul(&UniPoly::from_i64(&[-3, 1], &f), &f);
        let roots = roots_in_field(&p, &f);
        assert_eq!(roots, vec![f.from_u64(3), f.from_u64(5), f.from_u64(8)]);
    }

    #[test]
    fn roots_of_inseparable_cube() {
        let f = Field::new(3, 1).unwrap();
        // x^3 + 1 = (x+1)^3 over F_3; derivative vanishes identically.
        let p = UniPoly::from_i64(&[1, 0, 0, 1], &f);
        assert_eq!(roots_in_field(&p, &f), vec![f.from_u64(2)]);
        assert!(!p.is_squarefree(&f));
    }

    #[test]
    fn roots_in_quadratic_extension() {
        let f9 = Field::new(3, 2).unwrap();
        let p = UniPoly::from_i64(&[1, 0, 1], &f9);
        let roots = roots_in_field(&p, &f9);
        let t = f9.gen();
        assert_eq!(roots, vec![t.clone(), f9.neg(&t)]);
    }

    #[test]
    fn ddf_reports_factor_degrees() {
        let f = f13();
        // (x^2-2) irreducible (2 is a non-square mod 13) times (x-1).
        let p = UniPoly::from_i64(&[-2, 0, 1], &f).mul(&UniPoly::from_i64(&[-1, 1], &f), &f);
        assert_eq!(ddf_degrees(&p, &f), vec![(1, 1), (2, 1)]);
        assert_eq!(splitting_degree(&p, &f), 2);
    }

    #[test]
    fn splitting_degree_is_lcm_of_factor_degrees() {
        let f3 = Field::new(3, 1).unwrap();
        let cubic_mod = Field::tower(3, 3).modulus().unwrap();
        let quintic_mod = Field::tower(3, 5).modulus().unwrap();
        let to_poly = |m: &[u64]| UniPoly::from_coeffs(m.iter().map(|&c| f3.from_u64(c)).collect());
        let p = to_poly(&cubic_mod).mul(&to_poly(&quintic_mod), &f3);
        assert_eq!(splitting_degree(&p, &f3), 15);
    }

    #[test]
    fn interpolation_recovers_random_polynomials() {
        let f = Field::new(17, 1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(29);
        for _ in 0..20 {
            let coeffs: Vec<FieldElem> = (0..8).map(|_| f.random_elem(&mut rng)).collect();
            let p = UniPoly::from_coeffs(coeffs);
            let points: Vec<(FieldElem, FieldElem)> = (0..8u64)
                .map(|i| {
                    let x = f.from_u64(i);
                    let y = p.eval(&x, &f);
                    (x, y)
                })
                .collect();
            assert_eq!(interpolate(&points, &f), p);
        }
    }

    #[test]
    fn embedding_round_trips_and_respects_multiplication() {
        let base = Field::new(3, 2).unwrap();
        let ext = Extension::new(&base, 2);
        assert_eq!(ext.top().degree(), 4);
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..100 {
            let a = base.random_elem(&mut rng);
            let b = base.random_elem(&mut rng);
            let ea = ext.embed(&a);
            let eb = ext.embed(&b);
            assert_eq!(ext.retract(&ea), Some(a.clone()));
            assert_eq!(
                ext.embed(&base.mul(&a, &b)),
                ext.top().mul(&ea, &eb)
            );
            assert_eq!(
                ext.embed(&base.add(&a, &b)),
                ext.top().add(&ea, &eb)
            );
        }
        // Exactly 9 of the 81 elements retract.
        let members = (0..81)
            .filter(|&i| ext.retract(&ext.top().elem_from_index(i)).is_some())
            .count();
        assert_eq!(members, 9);
    }

    #[test]
    fn trivial_extension_is_identity() {
        let base = Field::new(5, 2).unwrap();
        let ext = Extension::new(&base, 1);
        let a = base.elem(&[3, 4]);
        assert_eq!(ext.embed(&a), a);
        assert_eq!(ext.retract(&a), Some(a.clone()));
    }

    #[test]
    fn prime_base_embedding_is_constants() {
        let base = Field::new(5, 1).unwrap();
        let ext = Extension::new(&base, 3);
        let a = base.from_u64(3);
        let e = ext.embed(&a);
        assert_eq!(e, ext.top().from_u64(3));
        assert_eq!(ext.retract(&e), Some(a));
        assert_eq!(ext.retract(&ext.top().gen()), None);
    }
}
