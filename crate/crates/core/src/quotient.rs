//! Quotient curves by the involutions found on each model.
//!
//! For a double cover y^2 = f(x) with a line involution whose lifts have
//! order two, a coordinate change moves the two fixed points of the
//! involution to 0 and infinity, turning it into x -> -x and the branch
//! octic into an even polynomial P(x^2). The invariants of the two lifts
//! are (x^2, y) and (x^2, xy), so the quotients are s^2 = P(X) of genus one
//! and s^2 = X P(X) of genus two, and the Jacobian splits accordingly.
//!
//! For a plane quartic with a harmonic reflection, sending the center to
//! (1 : 0 : 0) and the axis to the line x = 0 rewrites the quartic as
//! c x^4 + q2(y, z) x^2 + q4(y, z). The quotient identifies +-x, and
//! eliminating u = x^2 from the quadratic c u^2 + q2 u + q4 exhibits it as
//! the genus-one discriminant cover s^2 = q2^2 - 4 c q4.
//!
//! A fiber product system y^2 = f1, z^2 = f2 sharing exactly two branch
//! points carries a Klein four-group whose three intermediate quotients are
//! elliptic: the two visible covers and w^2 = (Phi1 / G)(Phi2 / G) for the
//! shared factor G, with w = yz after clearing the common part.

use thiserror::Error;

use crate::curve::{DoubleCover, HoweSystem, ModelError, PlaneQuartic};
use crate::field::FieldElem;
use crate::forms::BinaryForm;
use crate::involution::{self, QuarticReflection};
use crate::matrix::{kernel_basis, Mat2, Mat3};
use crate::poly::{self, Extension, UniPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("fixed points of the involution are conjugate; rerun with the quadratic extension enabled")]
    NeedsExtension,
    #[error("reflection center lies on the quartic")]
    HyperellipticContradiction,
    #[error("discriminant of the quotient pencil is not squarefree")]
    DegenerateDiscriminant,
    #[error("fiber product shares {0} branch points, the elliptic trio needs exactly 2")]
    WrongSharedDegree(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Both quotients of a double cover by the order-two lifts of one line
/// involution, together with the normalizing data that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperQuotients {
    /// The line involution, over the base field of the curve.
    pub mobius: Mat2,
    /// 1 when its fixed points are rational, 2 when they generate the
    /// quadratic extension everything below then lives in.
    pub extension_degree: usize,
    /// Fixed points (x : w) of the involution, affine points first in
    /// element order, infinity last.
    pub fixed_points: [(FieldElem, FieldElem); 2],
    /// Coordinate change sending the fixed points to 0 and infinity.
    pub transform: Mat2,
    /// The branch octic in the new coordinate, even in x.
    pub even_octic: UniPoly,
    /// s^2 = P(X) where P(x^2) is the even octic.
    pub elliptic: DoubleCover,
    /// s^2 = X P(X).
    pub genus_two: DoubleCover,
}

/// Quotients of y^2 = f(x) by the two lifts of the line involution m.
///
/// m must be one of the involution classes kept by the search, so that its
/// lifts have order two and its fixed points avoid the branch locus. When
/// the fixed points are conjugate the construction happens over the
/// quadratic extension of the base field, which `extend` opts into.
pub fn hyper_quotients(
    c: &DoubleCover,
    m: &Mat2,
    extend: bool,
) -> Result<HyperQuotients, QuotientError> {
    let f = c.field();
    let phi = involution::fixed_form(m, f);
    let aff = phi.dehomogenize();
    let roots = poly::roots_in_field(&aff, f);
    let mut pts: Vec<(FieldElem, FieldElem)> =
        roots.iter().map(|r| (r.clone(), f.one())).collect();
    if phi.coeff(2).is_zero() {
        pts.push((f.one(), f.zero()));
    }

    let (extension_degree, top, form0, p0, p1) = if pts.len() == 2 {
        let (a, b) = (pts[0].clone(), pts[1].clone());
        (1usize, f.clone(), c.form().clone(), a, b)
    } else {
        assert!(pts.is_empty());
        if !extend {
            return Err(QuotientError::NeedsExtension);
        }
        let ext = Extension::new(f, 2);
        let top = ext.top().clone();
        let lifted = poly::roots_in_field(&ext.embed_poly(&aff), &top);
        assert_eq!(lifted.len(), 2);
        let form0 = c.form().map_coeffs(|v| ext.embed(v));
        let a = (lifted[0].clone(), top.one());
        let b = (lifted[1].clone(), top.one());
        (2usize, top, form0, a, b)
    };

    // When the fixed points already are 0 and infinity, keep the model
    // verbatim instead of composing with a determinant-scaled identity.
    let t = if p0.0.is_zero() && p1.1.is_zero() {
        Mat2::identity(&top)
    } else {
        Mat2([
            [p0.1.clone(), top.neg(&p0.0)],
            [p1.1.clone(), top.neg(&p1.0)],
        ])
    };
    // transform computes F(T^adj x), and T^adj = det(T) T^-1, so dividing by
    // det^8 gives exactly F(T^-1 x): the substituted curve equation, with no
    // hidden quadratic twist.
    let dinv = top.inv(&t.det(&top)).unwrap();
    let even_form = form0
        .transform(&t.adjugate(&top), &top)
        .scale(&top.pow(&dinv, 8), &top);
    for i in [1, 3, 5, 7] {
        assert!(even_form.coeff(i).is_zero());
    }
    // The fixed points of a kept class avoid the branch locus, so neither 0
    // nor infinity branches and the even octic has full degree and a nonzero
    // constant term.
    assert!(!even_form.coeff(0).is_zero() && !even_form.coeff(8).is_zero());

    let halved: Vec<FieldElem> = (0..=4).map(|i| even_form.coeff(2 * i).clone()).collect();
    let mut shifted = vec![top.zero()];
    shifted.extend(halved.iter().cloned());
    let elliptic = DoubleCover::new(top.clone(), UniPoly::from_coeffs(halved), 1)?;
    let genus_two = DoubleCover::new(top.clone(), UniPoly::from_coeffs(shifted), 2)?;

    Ok(HyperQuotients {
        mobius: m.clone(),
        extension_degree,
        fixed_points: [p0, p1],
        transform: t,
        even_octic: even_form.dehomogenize(),
        elliptic,
        genus_two,
    })
}

/// The elliptic quotient of a plane quartic by a harmonic reflection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticQuotient {
    /// Columns: the center, then a basis of the axis. Conjugating the
    /// reflection by this matrix gives diag(-1, 1, 1) exactly.
    pub transform: Mat3,
    /// The quartic rewritten in those coordinates: c x^4 + q2 x^2 + q4.
    pub even_coeffs: [FieldElem; 9],
    /// s^2 = q2(Y)^2 - 4 c q4(Y) on the axis.
    pub elliptic: DoubleCover,
}

pub fn quartic_quotient(
    c: &PlaneQuartic,
    r: &QuarticReflection,
) -> Result<QuarticQuotient, QuotientError> {
    let f = c.field();
    let m = involution::reflection_matrix(&r.center, &r.axis, f)
        .expect("reflection center off its axis");
    let span = kernel_basis(&[r.axis.to_vec()], 3, f);
    assert_eq!(span.len(), 2);
    let v0: [FieldElem; 3] = span[0].clone().try_into().unwrap();
    let v1: [FieldElem; 3] = span[1].clone().try_into().unwrap();
    let n = Mat3::from_cols(&r.center, &v0, &v1);

    let mut d = Mat3::identity(f);
    d.0[0][0] = f.neg(&d.0[0][0]);
    assert_eq!(m.mul(&n, f), n.mul(&d, f));

    let even = c.form().transform(&n, f);
    for i in [1, 3] {
        for j in 0..=(4 - i) {
            assert!(even.get(i, j).is_zero());
        }
    }
    let lead = even.get(4, 0).clone();
    if lead.is_zero() {
        return Err(QuotientError::HyperellipticContradiction);
    }
    let q2: Vec<FieldElem> = (0..=2).map(|j| even.get(2, j).clone()).collect();
    let q4: Vec<FieldElem> = (0..=4).map(|j| even.get(0, j).clone()).collect();

    let mut disc = vec![f.zero(); 5];
    for (a, ca) in q2.iter().enumerate() {
        for (b, cb) in q2.iter().enumerate() {
            disc[a + b] = f.add(&disc[a + b], &f.mul(ca, cb));
        }
    }
    let four_c = f.mul(&f.from_i64(4), &lead);
    for (k, ck) in q4.iter().enumerate() {
        disc[k] = f.sub(&disc[k], &f.mul(&four_c, ck));
    }
    let dform = BinaryForm::new(disc);
    if !dform.is_squarefree_form(f) {
        return Err(QuotientError::DegenerateDiscriminant);
    }
    let elliptic = DoubleCover::new(f.clone(), dform.dehomogenize(), 1)?;

    let mut even_coeffs: Vec<FieldElem> = vec![lead];
    even_coeffs.extend(q2);
    even_coeffs.extend(q4);
    Ok(QuarticQuotient {
        transform: n,
        even_coeffs: even_coeffs.try_into().unwrap(),
        elliptic,
    })
}

/// The three elliptic quotients of a fiber product system whose branch
/// quartics share exactly two projective zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoweQuotients {
    pub e1: DoubleCover,
    pub e2: DoubleCover,
    pub e3: DoubleCover,
}

pub fn howe_quotients(sys: &HoweSystem) -> Result<HoweQuotients, QuotientError> {
    let r = sys.shared_degree();
    if r != 2 {
        return Err(QuotientError::WrongSharedDegree(r));
    }
    let f = sys.field();
    let e1 = DoubleCover::new(f.clone(), sys.f1().clone(), 1)?;
    let e2 = DoubleCover::new(f.clone(), sys.f2().clone(), 1)?;
    // The third quotient w^2 = (Phi1 / G)(Phi2 / G) with w = yz / g(x). Any
    // shared zero at infinity divides out of the dehomogenized polynomials
    // automatically, and the cofactors are coprime and squarefree, so their
    // product is again a squarefree quartic form.
    let g = sys.shared().dehomogenize();
    let h1 = sys.f1().div_exact(&g, f);
    let h2 = sys.f2().div_exact(&g, f);
    let e3 = DoubleCover::new(f.clone(), h1.mul(&h2, f), 1)?;
    Ok(HoweQuotients { e1, e2, e3 })
}

/// Number of geometric branch points of the projection from the fiber
/// product curve to its first factor y^2 = f1: twice the number of zeros of
/// Phi2 that are not zeros of Phi1. A system of genus 5 - r gives 2(4 - r).
pub fn howe_branch_count(sys: &HoweSystem) -> usize {
    let f = sys.field();
    let a1 = sys.phi1().dehomogenize();
    let a2 = sys.phi2().dehomogenize();
    let ext = Extension::new(f, poly::splitting_degree(&a2, f));
    let top = ext.top().clone();
    let lifted1 = ext.embed_poly(&a1);
    let mut count = poly::roots_in_field(&ext.embed_poly(&a2), &top)
        .iter()
        .filter(|r| !lifted1.eval(r, &top).is_zero())
        .count();
    let at_infinity_2 = sys.phi2().infinity_multiplicity().unwrap_or(0) > 0;
    let at_infinity_1 = sys.phi1().infinity_multiplicity().unwrap_or(0) > 0;
    if at_infinity_2 && !at_infinity_1 {
        count += 1;
    }
    2 * count
}
