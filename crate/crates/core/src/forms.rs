//! Homogeneous forms in two and three variables: binary forms carry the
//! degree-8 branch data of hyperelliptic models, ternary quartics carry
//! smooth plane curves. Both support linear substitutions, and binary forms
//! get the projective notions (squarefreeness as a form, resultants at
//! nominal degree) that distinguish them from their dehomogenizations.

use crate::field::{Field, FieldElem};
use crate::matrix::{Mat2, Mat3};
use crate::poly::{self, UniPoly};

/// Homogeneous binary form of fixed degree d: coefficient i multiplies
/// x^i w^(d-i). The vector always has length d + 1; leading zeros are
/// meaningful (they record zeros at infinity).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm {
    coeffs: Vec<FieldElem>,
}

impl BinaryForm {
    pub fn new(coeffs: Vec<FieldElem>) -> BinaryForm {
        assert!(!coeffs.is_empty());
        BinaryForm { coeffs }
    }

    /// Homogenization of a polynomial to the stated degree.
    pub fn from_poly(p: &UniPoly, degree: usize, f: &Field) -> BinaryForm {
        assert!(p.degree().map_or(true, |d| d <= degree));
        BinaryForm { coeffs: (0..=degree).map(|i| p.coeff(i, f)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &FieldElem {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    /// Value at w = 1, as a polynomial in x.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.clone())
    }

    /// Multiplication by w: same x-coefficients, degree one higher.
    pub fn times_w(&self, f: &Field) -> BinaryForm {
        let mut coeffs = self.coeffs.clone();
        coeffs.push(f.zero());
        BinaryForm { coeffs }
    }

    /// Multiplicity of the zero at (1 : 0); None for the zero form.
    pub fn infinity_multiplicity(&self) -> Option<usize> {
        let top = self.coeffs.iter().rposition(|c| !c.is_zero())?;
        Some(self.degree() - top)
    }

    pub fn eval(&self, x: &FieldElem, w: &FieldElem, f: &Field) -> FieldElem {
        // Horner in x/w direction with explicit powers of w.
        let d = self.degree();
        let mut acc = f.zero();
        for i in (0..=d).rev() {
            acc = f.mul(&acc, x);
            if !self.coeffs[i].is_zero() {
                let wp = f.pow(w, (d - i) as u64);
                acc = f.add(&acc, &f.mul(&self.coeffs[i], &wp));
            }
        }
        acc
    }

    pub fn scale(&self, c: &FieldElem, f: &Field) -> BinaryForm {
        BinaryForm { coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect() }
    }

    /// Squarefree as a form: the dehomogenization is squarefree and the zero
    /// at infinity (if any) is simple.
    pub fn is_squarefree_form(&self, f: &Field) -> bool {
        match self.infinity_multiplicity() {
            None => false,
            Some(m) => m <= 1 && self.dehomogenize().is_squarefree(f),
        }
    }

    /// Substitution (x, w) -> (a x + b w, c x + d w) for m = [[a, b], [c, d]].
    pub fn transform(&self, m: &Mat2, f: &Field) -> BinaryForm {
        let d = self.degree();
        // Ascending-x coefficient vectors of the two image linear forms.
        let top = [m.0[0][1].clone(), m.0[0][0].clone()];
        let bot = [m.0[1][1].clone(), m.0[1][0].clone()];
        let pows = |lin: &[FieldElem; 2]| -> Vec<Vec<FieldElem>> {
            let mut out = vec![vec![f.one()]];
            for i in 1..=d {
                let prev = &out[i - 1];
                let mut next = vec![f.zero(); i + 1];
                for (t, c) in prev.iter().enumerate() {
                    let lo = f.mul(c, &lin[0]);
                    let hi = f.mul(c, &lin[1]);
                    next[t] = f.add(&next[t], &lo);
                    next[t + 1] = f.add(&next[t + 1], &hi);
                }
                out.push(next);
            }
            out
        };
        let tp = pows(&top);
        let bp = pows(&bot);
        let mut coeffs = vec![f.zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // c * top^i * bot^(d-i), convolved.
            for (s, a) in tp[i].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (t, b) in bp[d - i].iter().enumerate() {
                    let term = f.mul(&f.mul(c, a), b);
                    coeffs[s + t] = f.add(&coeffs[s + t], &term);
                }
            }
        }
        BinaryForm { coeffs }
    }

    pub fn map_coeffs(&self, mut g: impl FnMut(&FieldElem) -> FieldElem) -> BinaryForm {
        BinaryForm { coeffs: self.coeffs.iter().map(|c| g(c)).collect() }
    }
}

/// Resultant of two binary forms at their nominal degrees; zero exactly when
/// they share a projective zero (including one at infinity).
pub fn resultant_forms(a: &BinaryForm, b: &BinaryForm, f: &Field) -> FieldElem {
    poly::sylvester_det(a.coeffs(), a.degree(), b.coeffs(), b.degree(), f)
}

/// Exponents (i, j, k) of the degree-d trivariate monomials in canonical
/// order: first exponent descending, then second descending.
pub fn monomials(d: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity((d + 1) * (d + 2) / 2);
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push((i, j, d - i - j));
        }
    }
    out
}

fn tri_index(d: usize, i: usize, j: usize) -> usize {
    let r = d - i;
    r * (r + 1) / 2 + (r - j)
}

/// Dense homogeneous trivariate form of fixed degree, coefficients in the
/// canonical monomial order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trivariate {
    degree: usize,
    coeffs: Vec<FieldElem>,
}

impl Trivariate {
    pub fn zero(degree: usize, f: &Field) -> Trivariate {
        Trivariate { degree, coeffs: vec![f.zero(); (degree + 1) * (degree + 2) / 2] }
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<FieldElem>) -> Trivariate {
        assert_eq!(coeffs.len(), (degree + 1) * (degree + 2) / 2);
        Trivariate { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.coeffs[tri_index(self.degree, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.coeffs[tri_index(self.degree, i, j)] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    pub fn eval(&self, v: &[FieldElem; 3], f: &Field) -> FieldElem {
        let d = self.degree;
        let pow_table = |e: &FieldElem| -> Vec<FieldElem> {
            let mut t = vec![f.one()];
            for i in 1..=d {
                let prev = t[i - 1].clone();
                t.push(f.mul(&prev, e));
            }
            t
        };
        let (px, py, pz) = (pow_table(&v[0]), pow_table(&v[1]), pow_table(&v[2]));
        let mut acc = f.zero();
        for ((i, j, k), c) in monomials(d).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let t = f.mul(&f.mul(c, &px[i]), &f.mul(&py[j], &pz[k]));
            acc = f.add(&acc, &t);
        }
        acc
    }

    pub fn add(&self, o: &Trivariate, f: &Field) -> Trivariate {
        assert_eq!(self.degree, o.degree);
        Trivariate {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem, f: &Field) -> Trivariate {
        Trivariate {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, o: &Trivariate, f: &Field) -> Trivariate {
        let d = self.degree + o.degree;
        let mut out = Trivariate::zero(d, f);
        for ((i1, j1, _), c1) in monomials(self.degree).into_iter().zip(&self.coeffs) {
            if c1.is_zero() {
                continue;
            }
            for ((i2, j2, _), c2) in monomials(o.degree).into_iter().zip(&o.coeffs) {
                if c2.is_zero() {
                    continue;
                }
                let idx = tri_index(d, i1 + i2, j1 + j2);
                let t = f.mul(c1, c2);
                out.coeffs[idx] = f.add(&out.coeffs[idx], &t);
            }
        }
        out
    }

    /// Partial derivative; var is 0, 1 or 2.
    pub fn partial(&self, var: usize, f: &Field) -> Trivariate {
        assert!(self.degree >= 1);
        let d = self.degree;
        let mut out = Trivariate::zero(d - 1, f);
        for ((i, j, k), c) in monomials(d).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let (e, ni, nj) = match var {
                0 => (i, i.wrapping_sub(1), j),
                1 => (j, i, j - if j > 0 { 1 } else { 0 }),
                _ => (k, i, j),
            };
            if e == 0 {
                continue;
            }
            let idx = tri_index(d - 1, ni, nj);
            let t = f.scale(c, e as u64);
            out.coeffs[idx] = f.add(&out.coeffs[idx], &t);
        }
        out
    }

    /// Substitution v -> M v: returns F(M x, M y, M z) coefficients.
    pub fn transform(&self, m: &Mat3, f: &Field) -> Trivariate {
        let d = self.degree;
        let lin = |r: usize| -> Trivariate {
            let mut t = Trivariate::zero(1, f);
            t.set(1, 0, m.0[r][0].clone());
            t.set(0, 1, m.0[r][1].clone());
            t.set(0, 0, m.0[r][2].clone());
            t
        };
        let pows = |t: &Trivariate| -> Vec<Trivariate> {
            let mut out = vec![Trivariate::zero(0, f)];
            out[0].coeffs[0] = f.one();
            for i in 1..=d {
                let next = out[i - 1].mul(t, f);
                out.push(next);
            }
            out
        };
        let (lx, ly, lz) = (lin(0), lin(1), lin(2));
        let (px, py, pz) = (pows(&lx), pows(&ly), pows(&lz));
        let mut acc = Trivariate::zero(d, f);
        for ((i, j, k), c) in monomials(d).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let term = px[i].mul(&py[j], f).mul(&pz[k], f).scale(c, f);
            acc = acc.add(&term, f);
        }
        acc
    }

    /// Restriction to the line z = 0 as a binary form in (x, y).
    pub fn restrict_z0(&self) -> BinaryForm {
        let d = self.degree;
        BinaryForm::new((0..=d).map(|i| self.get(i, d - i).clone()).collect())
    }

    /// Specialize x = x0, z = z0, leaving a univariate polynomial in y.
    pub fn specialize_xz(&self, x0: &FieldElem, z0: &FieldElem, f: &Field) -> UniPoly {
        let d = self.degree;
        let pow_table = |e: &FieldElem| -> Vec<FieldElem> {
            let mut t = vec![f.one()];
            for i in 1..=d {
                let prev = t[i - 1].clone();
                t.push(f.mul(&prev, e));
            }
            t
        };
        let (px, pz) = (pow_table(x0), pow_table(z0));
        let mut out = vec![f.zero(); d + 1];
        for ((i, j, k), c) in monomials(d).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let t = f.mul(c, &f.mul(&px[i], &pz[k]));
            out[j] = f.add(&out[j], &t);
        }
        UniPoly::from_coeffs(out)
    }

    pub fn map_coeffs(&self, mut g: impl FnMut(&FieldElem) -> FieldElem) -> Trivariate {
        Trivariate { degree: self.degree, coeffs: self.coeffs.iter().map(|c| g(c)).collect() }
    }
}
