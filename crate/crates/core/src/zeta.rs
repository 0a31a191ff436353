//! Exact point counts over extension fields and the L-polynomials they
//! determine.
//!
//! Counts are plain enumerations: every x in P^1(F_{q^n}) for double covers
//! and fiber products, every point of P^2(F_{q^n}) for plane quartics. A
//! global budget caps the enumeration size so a typo in `n` fails fast
//! instead of running for hours. L-polynomials are built from the counts
//! N_1..N_g by Newton's identities over arbitrary-precision integers and
//! completed by the functional equation, so every certificate identity
//! checked downstream is exact integer arithmetic.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::curve::{CurveModel, HoweSystem};
use crate::field::{Field, FieldElem};
use crate::forms::{BinaryForm, Trivariate};
use crate::poly::{Extension, UniPoly};

/// Ceiling on the number of field elements a single count may enumerate:
/// q^n values of x for a double cover, q^{2n} affine pairs for a quartic.
pub const ENUM_BUDGET: u64 = 10_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CountError {
    #[error("counting points over F_{{{q}^{n}}} exceeds the enumeration budget")]
    BudgetExceeded { q: u64, n: usize },
    #[error("counts N_1..N_{n} do not give an integral L-polynomial")]
    InconsistentCounts { n: usize },
    #[error("predicted N_{n} = {expected} disagrees with the exact count {actual}")]
    CountMismatch { n: usize, expected: BigInt, actual: u64 },
    #[error("N_{n} violates the Weil bound for genus {genus}")]
    WeilBound { genus: usize, n: usize },
    #[error("no L-polynomial support for genus {0}")]
    UnsupportedGenus(usize),
    #[error("claimed factor does not divide the L-polynomial")]
    NotDivisible,
    #[error("quotient of L-polynomials breaks the functional equation")]
    BrokenFunctionalEquation,
    #[error("L-polynomial must have constant coefficient 1")]
    BadConstantTerm,
}

/// Bitmap of the nonzero squares of an enumerable field, indexed by element
/// index. One sweep of q squarings replaces a Fermat exponentiation per
/// character evaluation.
pub struct SquaresTable {
    bits: Vec<u64>,
}

impl SquaresTable {
    pub fn new(f: &Field) -> SquaresTable {
        let size = f.size().expect("character table needs an enumerable field");
        let words: Vec<AtomicU64> = (0..=(size >> 6)).map(|_| AtomicU64::new(0)).collect();
        (1..size as usize).into_par_iter().with_min_len(1 << 13).for_each(|i| {
            let t = f.elem_from_index(i as u64);
            let idx = f.index_of(&f.square(&t));
            words[(idx >> 6) as usize].fetch_or(1 << (idx & 63), Ordering::Relaxed);
        });
        SquaresTable { bits: words.into_iter().map(AtomicU64::into_inner).collect() }
    }

    /// The quadratic character: 0 on zero, 1 on squares, -1 otherwise.
    pub fn chi(&self, f: &Field, v: &FieldElem) -> i8 {
        if v.is_zero() {
            return 0;
        }
        let idx = f.index_of(v);
        if (self.bits[(idx >> 6) as usize] >> (idx & 63)) & 1 == 1 {
            1
        } else {
            -1
        }
    }
}

fn pow_within_budget(q: u64, e: usize) -> Option<u64> {
    let mut v: u64 = 1;
    for _ in 0..e {
        v = v.checked_mul(q)?;
        if v > ENUM_BUDGET {
            return None;
        }
    }
    Some(v)
}

/// Points of the smooth projective double cover y^2 = Phi(x, w) over
/// F_{q^n}: one orbit of size 1 + chi(Phi) over each point of P^1, with the
/// leading coefficient playing the role of the value at infinity.
fn cover_count(field: &Field, form: &BinaryForm, n: usize) -> Result<u64, CountError> {
    let q = field.size().expect("base field is enumerable");
    let qn = pow_within_budget(q, n).ok_or(CountError::BudgetExceeded { q, n })?;
    let ext = Extension::new(field, n);
    let top = ext.top().clone();
    let fm = form.map_coeffs(|c| ext.embed(c));
    let affine = fm.dehomogenize();
    let table = SquaresTable::new(&top);
    let sum: i64 = (0..qn as usize)
        .into_par_iter()
        .with_min_len(1 << 13)
        .map(|i| {
            let x = top.elem_from_index(i as u64);
            table.chi(&top, &affine.eval(&x, &top)) as i64
        })
        .sum();
    let inf = table.chi(&top, fm.coeff(fm.degree())) as i64;
    Ok((qn as i64 + 1 + sum + inf) as u64)
}

/// Points of a smooth plane quartic over F_{q^n}, enumerated chart by
/// chart: (1 : y : z), then (0 : 1 : z), then (0 : 0 : 1).
fn quartic_count(field: &Field, form: &Trivariate, n: usize) -> Result<u64, CountError> {
    let q = field.size().expect("base field is enumerable");
    pow_within_budget(q, 2 * n).ok_or(CountError::BudgetExceeded { q, n })?;
    let qn = pow_within_budget(q, n).unwrap();
    let ext = Extension::new(field, n);
    let top = ext.top().clone();
    let fm = form.map_coeffs(|c| ext.embed(c));

    // F(1, y, z) arranged by powers of z, each coefficient a polynomial in y.
    let zcoeffs: Vec<UniPoly> = (0..=4)
        .map(|m| {
            let cs: Vec<FieldElem> = (0..=4 - m).map(|j| fm.get(4 - j - m, j).clone()).collect();
            UniPoly::from_coeffs(cs)
        })
        .collect();
    let affine: u64 = (0..qn as usize)
        .into_par_iter()
        .with_min_len(1 << 8)
        .map(|yi| {
            let y = top.elem_from_index(yi as u64);
            let a: Vec<FieldElem> = zcoeffs.iter().map(|p| p.eval(&y, &top)).collect();
            let mut hits = 0u64;
            for zi in 0..qn {
                let z = top.elem_from_index(zi);
                let mut v = a[4].clone();
                for am in a[..4].iter().rev() {
                    v = top.add(&top.mul(&v, &z), am);
                }
                if v.is_zero() {
                    hits += 1;
                }
            }
            hits
        })
        .sum();

    // F(0, 1, z) as a polynomial in z.
    let line_poly =
        UniPoly::from_coeffs((0..=4).map(|m| fm.get(0, 4 - m).clone()).collect::<Vec<_>>());
    let line = (0..qn)
        .filter(|&zi| line_poly.eval(&top.elem_from_index(zi), &top).is_zero())
        .count() as u64;
    let corner = fm.get(0, 0).is_zero() as u64;
    Ok(affine + line + corner)
}

/// Points of the normalized fiber product y^2 = f1(x), z^2 = f2(x) over
/// F_{q^n}. Where both branch forms are nonzero the fiber is a product of
/// the two cover fibers; where exactly one vanishes the vanishing
/// coordinate is pinned to zero; where both vanish (a shared simple root)
/// the normalization separates the branches and y/z parametrizes them, so
/// the fiber has 1 + chi(f1'f2') points. At infinity the quartic leading
/// coefficients stand in for the values and the cubic ones for the
/// derivatives.
fn howe_count(sys: &HoweSystem, n: usize) -> Result<u64, CountError> {
    let field = sys.field();
    let q = field.size().expect("base field is enumerable");
    let qn = pow_within_budget(q, n).ok_or(CountError::BudgetExceeded { q, n })?;
    let ext = Extension::new(field, n);
    let top = ext.top().clone();
    let p1 = sys.phi1().map_coeffs(|c| ext.embed(c));
    let p2 = sys.phi2().map_coeffs(|c| ext.embed(c));
    let a1 = p1.dehomogenize();
    let a2 = p2.dehomogenize();
    let d1 = a1.derivative(&top);
    let d2 = a2.derivative(&top);
    let table = SquaresTable::new(&top);
    let fiber = |v1: &FieldElem, v2: &FieldElem, u1: &FieldElem, u2: &FieldElem| -> u64 {
        match (v1.is_zero(), v2.is_zero()) {
            (false, false) => {
                ((1 + table.chi(&top, v1) as i64) * (1 + table.chi(&top, v2) as i64)) as u64
            }
            (true, false) => (1 + table.chi(&top, v2) as i64) as u64,
            (false, true) => (1 + table.chi(&top, v1) as i64) as u64,
            (true, true) => (1 + table.chi(&top, &top.mul(u1, u2)) as i64) as u64,
        }
    };
    let sum: u64 = (0..qn as usize)
        .into_par_iter()
        .with_min_len(1 << 13)
        .map(|i| {
            let x = top.elem_from_index(i as u64);
            fiber(
                &a1.eval(&x, &top),
                &a2.eval(&x, &top),
                &d1.eval(&x, &top),
                &d2.eval(&x, &top),
            )
        })
        .sum();
    let inf = fiber(p1.coeff(4), p2.coeff(4), p1.coeff(3), p2.coeff(3));
    Ok(sum + inf)
}

/// The number of points of the curve over F_{q^n}.
pub fn count_points(model: &CurveModel, n: usize) -> Result<u64, CountError> {
    assert!(n >= 1);
    match model {
        CurveModel::Hyperelliptic(c) | CurveModel::Genus2(c) | CurveModel::Genus1(c) => {
            cover_count(c.field(), c.form(), n)
        }
        CurveModel::Quartic(c) => quartic_count(c.field(), c.form(), n),
        CurveModel::Howe(h) => howe_count(h, n),
    }
}

/// Numerator of the zeta function: the degree-2g integer polynomial with
/// constant term 1 whose inverse roots are the Frobenius eigenvalues. The
/// coefficients satisfy c_{2g-j} = q^{g-j} c_j, so counts over the first g
/// extensions pin the whole polynomial down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    coeffs: Vec<BigInt>,
    q: u64,
    genus: usize,
}

impl LPolynomial {
    pub fn from_counts(q: u64, genus: usize, counts: &[u64]) -> Result<LPolynomial, CountError> {
        assert_eq!(counts.len(), genus);
        let mut c: Vec<BigInt> = vec![BigInt::one()];
        let mut p: Vec<BigInt> = Vec::new();
        for k in 1..=genus {
            p.push(BigInt::from(q).pow(k as u32) + 1 - BigInt::from(counts[k - 1]));
            let mut acc = p[k - 1].clone();
            for j in 1..k {
                acc += &c[j] * &p[k - 1 - j];
            }
            let kk = BigInt::from(k as u64);
            if !(&acc % &kk).is_zero() {
                return Err(CountError::InconsistentCounts { n: k });
            }
            c.push(-(acc / &kk));
        }
        for i in 1..=genus {
            let v = &c[genus - i] * BigInt::from(q).pow(i as u32);
            c.push(v);
        }
        let lp = LPolynomial { coeffs: c, q, genus };
        for n in 1..=4 {
            let diff: BigInt = BigInt::from(q).pow(n as u32) + 1 - lp.predicted_count(n);
            if diff.pow(2) > BigInt::from(4 * genus as u64 * genus as u64) * BigInt::from(q).pow(n as u32)
            {
                return Err(CountError::WeilBound { genus, n });
            }
        }
        Ok(lp)
    }

    /// Wraps explicit coefficients; only the constant term is validated, so
    /// this is for round-tripping values produced elsewhere, not a proof of
    /// anything.
    pub fn from_coeffs(q: u64, genus: usize, coeffs: Vec<BigInt>) -> Result<LPolynomial, CountError> {
        assert_eq!(coeffs.len(), 2 * genus + 1);
        if !coeffs[0].is_one() {
            return Err(CountError::BadConstantTerm);
        }
        Ok(LPolynomial { coeffs, q, genus })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// N_n implied by the coefficients, via the forward Newton recursion
    /// for power sums of the inverse roots.
    pub fn predicted_count(&self, n: usize) -> BigInt {
        let g2 = 2 * self.genus;
        let mut p: Vec<BigInt> = Vec::with_capacity(n);
        for k in 1..=n {
            let mut acc = if k <= g2 {
                BigInt::from(k as u64) * &self.coeffs[k]
            } else {
                BigInt::zero()
            };
            for j in 1..k {
                if j <= g2 {
                    acc += &self.coeffs[j] * &p[k - 1 - j];
                }
            }
            p.push(-acc);
        }
        BigInt::from(self.q).pow(n as u32) + 1 - &p[n - 1]
    }

    pub fn satisfies_functional_equation(&self) -> bool {
        let g = self.genus;
        (0..=g).all(|j| {
            self.coeffs[2 * g - j] == &self.coeffs[j] * BigInt::from(self.q).pow((g - j) as u32)
        })
    }

    /// Exact division by a claimed factor. The quotient must multiply back
    /// to self and satisfy its own functional equation.
    pub fn divide(&self, den: &LPolynomial) -> Result<LPolynomial, CountError> {
        assert_eq!(self.q, den.q);
        assert!(den.genus <= self.genus);
        let gq = self.genus - den.genus;
        let mut quo: Vec<BigInt> = Vec::with_capacity(2 * gq + 1);
        for i in 0..=2 * gq {
            let mut v = self.coeffs[i].clone();
            for j in 1..=i.min(2 * den.genus) {
                v -= &den.coeffs[j] * &quo[i - j];
            }
            quo.push(v);
        }
        for i in 0..=2 * self.genus {
            let mut v = BigInt::zero();
            for j in 0..=i.min(2 * den.genus) {
                if i - j <= 2 * gq {
                    v += &den.coeffs[j] * &quo[i - j];
                }
            }
            if v != self.coeffs[i] {
                return Err(CountError::NotDivisible);
            }
        }
        let out = LPolynomial { coeffs: quo, q: self.q, genus: gq };
        if !out.satisfies_functional_equation() {
            return Err(CountError::BrokenFunctionalEquation);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &LPolynomial) -> LPolynomial {
        assert_eq!(self.q, other.q);
        let genus = self.genus + other.genus;
        let mut coeffs = vec![BigInt::zero(); 2 * genus + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LPolynomial { coeffs, q: self.q, genus }
    }
}

/// Counts N_1..N_g, builds the L-polynomial, and when the budget allows
/// recounts N_{g+1} against the prediction. The extra count is not needed
/// to determine the coefficients, which is exactly why it catches a wrong
/// count that Newton's identities alone would absorb.
pub fn l_polynomial(model: &CurveModel) -> Result<LPolynomial, CountError> {
    let g = model.genus();
    if g == 0 || g > 3 {
        return Err(CountError::UnsupportedGenus(g));
    }
    let q = model.field().size().expect("curve fields are enumerable");
    let counts: Vec<u64> = (1..=g)
        .map(|n| count_points(model, n))
        .collect::<Result<_, _>>()?;
    let lp = LPolynomial::from_counts(q, g, &counts)?;
    match count_points(model, g + 1) {
        Ok(actual) => {
            let expected = lp.predicted_count(g + 1);
            if expected != BigInt::from(actual) {
                return Err(CountError::CountMismatch { n: g + 1, expected, actual });
            }
        }
        Err(CountError::BudgetExceeded { .. }) => {}
        Err(e) => return Err(e),
    }
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{DoubleCover, PlaneQuartic};

    fn fermat_quartic(f: &Field) -> Trivariate {
        let mut t = Trivariate::zero(4, f);
        t.set(4, 0, f.one());
        t.set(0, 4, f.one());
        t.set(0, 0, f.from_i64(-1));
        t
    }

    fn naive_projective_count(form: &Trivariate, f: &Field) -> u64 {
        let q = f.size().unwrap();
        let mut affine_hits = 0u64;
        for i in 0..q.pow(3) {
            let v = [
                f.elem_from_index(i % q),
                f.elem_from_index((i / q) % q),
                f.elem_from_index(i / (q * q)),
            ];
            if (i != 0) && form.eval(&v, f).is_zero() {
                affine_hits += 1;
            }
        }
        assert_eq!(affine_hits % (q - 1), 0);
        affine_hits / (q - 1)
    }

    fn naive_cover_count(form: &BinaryForm, f: &Field) -> u64 {
        let q = f.size().unwrap();
        let affine = form.dehomogenize();
        let mut n = 0u64;
        for xi in 0..q {
            let x = f.elem_from_index(xi);
            let v = affine.eval(&x, f);
            for yi in 0..q {
                let y = f.elem_from_index(yi);
                if f.square(&y) == v {
                    n += 1;
                }
            }
        }
        n + 1 + f.chi(form.coeff(form.degree())) as u64
    }

    #[test]
    fn squares_table_matches_the_character() {
        for (p, k) in [(5, 1), (3, 3), (13, 1), (5, 2)] {
            let f = Field::new(p, k).unwrap();
            let table = SquaresTable::new(&f);
            for i in 0..f.size().unwrap() {
                let v = f.elem_from_index(i);
                assert_eq!(table.chi(&f, &v), f.chi(&v));
            }
        }
    }

    #[test]
    fn fermat_quartic_counts() {
        let f = Field::new(5, 1).unwrap();
        let c = PlaneQuartic::new(f.clone(), fermat_quartic(&f)).unwrap();
        let model = CurveModel::Quartic(c);
        assert_eq!(count_points(&model, 1).unwrap(), 8);

        let naive = naive_projective_count(&fermat_quartic(&f), &f);
        assert_eq!(naive, 8);

        let ext = Extension::new(&f, 2);
        let top = ext.top().clone();
        let lifted = fermat_quartic(&f).map_coeffs(|c| ext.embed(c));
        assert_eq!(count_points(&model, 2).unwrap(), naive_projective_count(&lifted, &top));
    }

    #[test]
    fn octic_cover_counts() {
        let f = Field::new(3, 1).unwrap();
        let octic = UniPoly::from_i64(&[-1, 0, 0, 0, 0, 0, 0, 0, 1], &f);
        let c = DoubleCover::new(f.clone(), octic.clone(), 3).unwrap();
        let model = CurveModel::Hyperelliptic(c.clone());
        assert_eq!(count_points(&model, 1).unwrap(), 4);
        assert_eq!(naive_cover_count(c.form(), &f), 4);

        let ext = Extension::new(&f, 2);
        let lifted = c.form().map_coeffs(|x| ext.embed(x));
        assert_eq!(count_points(&model, 2).unwrap(), naive_cover_count(&lifted, ext.top()));
    }

    #[test]
    fn promoted_quintic_matches_naive_count() {
        let f = Field::new(7, 1).unwrap();
        let quintic = UniPoly::from_i64(&[0, -1, 0, 0, 0, 1], &f);
        let c = DoubleCover::new(f.clone(), quintic, 2).unwrap();
        assert_eq!(c.genus(), 2);
        let model = CurveModel::Genus2(c.clone());
        assert_eq!(count_points(&model, 1).unwrap(), naive_cover_count(c.form(), &f));
    }

    #[test]
    fn supersingular_cubic_l_polynomial() {
        let f = Field::new(3, 1).unwrap();
        let cubic = UniPoly::from_i64(&[0, 1, 0, 1], &f);
        let model = CurveModel::Genus1(DoubleCover::new(f, cubic, 1).unwrap());
        assert_eq!(count_points(&model, 1).unwrap(), 4);
        let lp = l_polynomial(&model).unwrap();
        assert_eq!(lp.coeffs(), &[BigInt::from(1), BigInt::from(0), BigInt::from(3)]);
        assert!(lp.satisfies_functional_equation());
        assert_eq!(lp.predicted_count(2), BigInt::from(16));
    }

    #[test]
    fn howe_fiber_product_counts() {
        let f = Field::new(11, 1).unwrap();
        let f1 = UniPoly::from_i64(&[0, -6, 11, -6, 1], &f);
        let f2 = UniPoly::from_i64(&[0, -20, 29, -10, 1], &f);
        let sys = HoweSystem::new(f.clone(), f1.clone(), f2.clone()).unwrap();
        assert_eq!(sys.shared_degree(), 2);
        assert_eq!(sys.genus(), 3);
        let model = CurveModel::Howe(sys.clone());
        assert_eq!(count_points(&model, 1).unwrap(), 8);

        // Orbit identity for the Klein four cover: the fiber product count
        // plus twice the base line count equals the sum over the three
        // intermediate double covers y^2 = f1, z^2 = f2, w^2 = f1 f2 / g^2.
        let e1 = CurveModel::Genus1(DoubleCover::new(f.clone(), f1.clone(), 1).unwrap());
        let e2 = CurveModel::Genus1(DoubleCover::new(f.clone(), f2.clone(), 1).unwrap());
        let h12 = f1
            .div_exact(&sys.shared().dehomogenize(), &f)
            .mul(&f2.div_exact(&sys.shared().dehomogenize(), &f), &f);
        let e3 = CurveModel::Genus1(DoubleCover::new(f.clone(), h12, 1).unwrap());
        assert_eq!(count_points(&e1, 1).unwrap(), 8);
        assert_eq!(count_points(&e2, 1).unwrap(), 16);
        assert_eq!(count_points(&e3, 1).unwrap(), 8);
        for n in 1..=3 {
            let q = 11u64.pow(n as u32);
            assert_eq!(
                count_points(&model, n).unwrap() + 2 * (q + 1),
                count_points(&e1, n).unwrap()
                    + count_points(&e2, n).unwrap()
                    + count_points(&e3, n).unwrap()
            );
        }
    }

    #[test]
    fn budgets_are_enforced() {
        let f = Field::new(17, 1).unwrap();
        let octic = UniPoly::from_i64(&[-1, 0, 0, 0, 0, 0, 0, 0, 1], &f);
        let model = CurveModel::Hyperelliptic(DoubleCover::new(f, octic, 3).unwrap());
        assert_eq!(
            count_points(&model, 6).unwrap_err(),
            CountError::BudgetExceeded { q: 17, n: 6 }
        );

        let f13 = Field::new(13, 1).unwrap();
        let quartic = CurveModel::Quartic(PlaneQuartic::new(f13.clone(), fermat_quartic(&f13)).unwrap());
        assert!(count_points(&quartic, 3).is_ok());
        assert_eq!(
            count_points(&quartic, 4).unwrap_err(),
            CountError::BudgetExceeded { q: 13, n: 4 }
        );
    }

    #[test]
    fn bad_counts_are_rejected() {
        assert_eq!(
            LPolynomial::from_counts(5, 1, &[100]).unwrap_err(),
            CountError::WeilBound { genus: 1, n: 1 }
        );
        assert_eq!(
            LPolynomial::from_counts(3, 2, &[4, 5]).unwrap_err(),
            CountError::InconsistentCounts { n: 2 }
        );
    }

    #[test]
    fn division_of_l_polynomials() {
        let e = LPolynomial::from_counts(3, 1, &[4]).unwrap();
        let cube = e.mul(&e).mul(&e);
        assert_eq!(cube.genus(), 3);
        assert!(cube.satisfies_functional_equation());
        let back = cube.divide(&e).unwrap().divide(&e).unwrap();
        assert_eq!(back, e);

        let unit = LPolynomial::from_coeffs(
            3,
            1,
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(3)],
        )
        .unwrap();
        assert_eq!(cube.divide(&unit).unwrap_err(), CountError::NotDivisible);
        assert_eq!(
            LPolynomial::from_coeffs(3, 1, vec![BigInt::from(2); 3]).unwrap_err(),
            CountError::BadConstantTerm
        );
    }
}
