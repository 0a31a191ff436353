//! Involution search for the two genus-3 model families.
//!
//! A hyperelliptic curve y^2 = Phi(x, w) carries an extra involution
//! exactly when some Mobius transformation of the line permutes the eight
//! branch points: such an m is pinned down by where it sends three of
//! them, so scanning the 336 ordered image triples of a fixed reference
//! triple over the splitting field finds every candidate. Each surviving
//! class lifts to the curve in two ways, and the lifts have order 2
//! precisely when the fixed points of m avoid the branch locus, or
//! equivalently when the form multiplier equals the fourth power of
//! -det m. A smooth plane quartic instead admits only harmonic
//! reflections: for each point-line pair (p, l) with p off l, the map
//! fixing l pointwise and negating the p-direction either preserves the
//! quartic or does not, and a scan over all rational pairs is complete
//! because a rational projective involution always rescales to a rational
//! reflection.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::curve::{CurveModel, DoubleCover, PlaneQuartic};
use crate::field::{Field, FieldElem};
use crate::forms::{resultant_forms, BinaryForm, Trivariate};
use crate::matrix::{kernel_basis, Mat2, Mat3};
use crate::poly::{self, Extension};

/// Ceiling on q^4, the size of the point-line scan for quartic
/// reflections.
pub const REFLECTION_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvolutionError {
    #[error("reflection scan over F_{q} is past the q^4 budget")]
    SearchBudget { q: u64 },
    #[error("involutions are searched on genus-3 models only, not {0}")]
    UnsupportedModel(&'static str),
}

/// One automorphism of a hyperelliptic curve lying over a branch-permuting
/// Mobius involution: (x : w : y) -> (m(x : w) : nu y) with y of weight 4.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperLift {
    /// Normalized matrix of the induced map on the line.
    pub mobius: Mat2,
    /// Multiplier of the branch form under m.
    pub scale: FieldElem,
    /// Multiplier on y; the two lifts of m differ by its sign.
    pub y_multiplier: FieldElem,
    /// Fixed points on the curve over the algebraic closure: 4 for the
    /// lift whose quotient is elliptic, 0 for the genus-2 quotient.
    pub fixed_on_curve: usize,
    pub quotient_genus: usize,
    /// Signs of the action on the three holomorphic differentials, sorted.
    pub eigenvalues: [i8; 3],
}

/// Everything the branch-permutation scan finds on a hyperelliptic curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperInvolutions {
    /// Order-2 lifts, two per surviving Mobius class, sorted by matrix key
    /// and then by y-multiplier index.
    pub lifts: Vec<HyperLift>,
    /// Mobius classes whose fixed points are branch points; their lifts
    /// square to the hyperelliptic involution instead of the identity.
    pub order_four: Vec<Mat2>,
}

/// A harmonic reflection of the plane preserving a smooth quartic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticReflection {
    /// Normalized matrix of the reflection.
    pub matrix: Mat3,
    /// The isolated fixed point (negated eigendirection).
    pub center: [FieldElem; 3],
    /// Coefficients of the pointwise-fixed line.
    pub axis: [FieldElem; 3],
    /// Fixed points on the curve: the four transverse axis intersections.
    pub fixed_on_curve: usize,
    pub quotient_genus: usize,
    /// Signs on the differentials for the determinant-one representative.
    pub eigenvalues: [i8; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Involutions {
    Hyperelliptic(HyperInvolutions),
    Quartic(Vec<QuarticReflection>),
}

pub fn involutions(model: &CurveModel) -> Result<Involutions, InvolutionError> {
    match model {
        CurveModel::Hyperelliptic(c) => Ok(Involutions::Hyperelliptic(hyper_involutions(c))),
        CurveModel::Quartic(c) => Ok(Involutions::Quartic(quartic_reflections(c)?)),
        other => Err(InvolutionError::UnsupportedModel(other.kind())),
    }
}

/// The eight projective zeros of the branch form, over its splitting
/// field, affine roots in element order and infinity last.
fn branch_points(
    form: &BinaryForm,
    f: &Field,
) -> (Extension, Vec<(FieldElem, FieldElem)>) {
    let affine = form.dehomogenize();
    let d = poly::splitting_degree(&affine, f);
    let ext = Extension::new(f, d);
    let top = ext.top().clone();
    let mut pts: Vec<(FieldElem, FieldElem)> =
        poly::roots_in_field(&ext.embed_poly(&affine), &top)
            .into_iter()
            .map(|r| (r, top.one()))
            .collect();
    if form.infinity_multiplicity() == Some(1) {
        pts.push((top.one(), top.zero()));
    }
    assert_eq!(pts.len(), form.degree());
    (ext, pts)
}

/// The matrix sending 0, 1, infinity to the three given points.
fn triple_matrix(
    p0: &(FieldElem, FieldElem),
    p1: &(FieldElem, FieldElem),
    pinf: &(FieldElem, FieldElem),
    f: &Field,
) -> Mat2 {
    let alpha = f.sub(&f.mul(&p1.0, &p0.1), &f.mul(&p0.0, &p1.1));
    let beta = f.sub(&f.mul(&pinf.0, &p1.1), &f.mul(&p1.0, &pinf.1));
    Mat2([
        [f.mul(&alpha, &pinf.0), f.mul(&beta, &p0.0)],
        [f.mul(&alpha, &pinf.1), f.mul(&beta, &p0.1)],
    ])
}

/// Quadratic form cutting out the fixed points of m on the line.
pub(crate) fn fixed_form(m: &Mat2, f: &Field) -> BinaryForm {
    let [[a, b], [c, d]] = &m.0;
    BinaryForm::new(vec![f.neg(b), f.sub(d, a), c.clone()])
}

/// The multiplier lambda with g = lambda * base, if there is one.
fn form_multiplier(g: &BinaryForm, base: &BinaryForm, f: &Field) -> Option<FieldElem> {
    let i = base.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let lam = f.mul(g.coeff(i), &f.inv(base.coeff(i)).unwrap());
    (g == &base.scale(&lam, f)).then_some(lam)
}

/// Counts the curve points fixed by the lift (m, nu). The two fixed points
/// of m on the line carry eigenvalues mu and -mu, and the pair of curve
/// points over each is fixed exactly when mu^4 = nu.
fn lift_fixed_points(m: &Mat2, nu: &FieldElem, form: &BinaryForm, f: &Field) -> usize {
    let phi = fixed_form(m, f);
    let affine = phi.dehomogenize();
    let d = poly::splitting_degree(&affine, f);
    let ext = Extension::new(f, d);
    let top = ext.top().clone();
    let mut pts: Vec<(FieldElem, FieldElem)> =
        poly::roots_in_field(&ext.embed_poly(&affine), &top)
            .into_iter()
            .map(|r| (r, top.one()))
            .collect();
    if phi.coeff(2).is_zero() {
        pts.push((top.one(), top.zero()));
    }
    assert_eq!(pts.len(), 2);
    let me = Mat2([
        [ext.embed(&m.0[0][0]), ext.embed(&m.0[0][1])],
        [ext.embed(&m.0[1][0]), ext.embed(&m.0[1][1])],
    ]);
    let fe = form.map_coeffs(|c| ext.embed(c));
    let nu_e = ext.embed(nu);
    let mut count = 0;
    for (x0, w0) in pts {
        let (ix, iw) = me.apply(&x0, &w0, &top);
        let mu = if x0.is_zero() {
            top.mul(&iw, &top.inv(&w0).unwrap())
        } else {
            top.mul(&ix, &top.inv(&x0).unwrap())
        };
        assert!(!fe.eval(&x0, &w0, &top).is_zero());
        if top.pow(&mu, 4) == nu_e {
            count += 2;
        }
    }
    count
}

pub fn hyper_involutions(c: &DoubleCover) -> HyperInvolutions {
    let f = c.field();
    let form = c.form();
    let (ext, pts) = branch_points(form, f);
    let top = ext.top().clone();
    let adj_ref = triple_matrix(&pts[0], &pts[1], &pts[2], &top).adjugate(&top);

    let mut kept: BTreeMap<Vec<FieldElem>, (Mat2, FieldElem)> = BTreeMap::new();
    let mut order_four: BTreeMap<Vec<FieldElem>, Mat2> = BTreeMap::new();
    let n = pts.len();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                if i == j || i == l || j == l {
                    continue;
                }
                let t_img = triple_matrix(&pts[i], &pts[j], &pts[l], &top);
                let cand = t_img.mul(&adj_ref, &top);
                if cand.is_scalar(&top) || !cand.trace(&top).is_zero() {
                    continue;
                }
                let cand = cand.normalized(&top);
                let mut entries = cand.entries().map(|e| ext.retract(e));
                let Some(m) = (|| {
                    let m = Mat2([
                        [entries.next()??, entries.next()??],
                        [entries.next()??, entries.next()??],
                    ]);
                    Some(m)
                })() else {
                    continue;
                };
                let Some(lam) = form_multiplier(&form.transform(&m, f), form, f) else {
                    continue;
                };

                // Order of the lifts, two ways: the fixed points of m meet
                // the branch locus exactly when lambda is minus the fourth
                // power of -det m.
                let delta = f.neg(&m.det(f));
                let order_two = lam == f.square(&f.square(&delta));
                let res = resultant_forms(&fixed_form(&m, f), form, f);
                assert_eq!(order_two, !res.is_zero());
                if order_two {
                    kept.insert(m.key(), (m, lam));
                } else {
                    order_four.insert(m.key(), m);
                }
            }
        }
    }

    let mut lifts = Vec::new();
    for (m, lam) in kept.into_values() {
        let delta_sq = f.square(&f.neg(&m.det(f)));
        let mut pair = [delta_sq.clone(), f.neg(&delta_sq)];
        pair.sort_by_key(|nu| f.index_of(nu));
        for nu in pair {
            let fixed = lift_fixed_points(&m, &nu, form, f);
            let long = nu == delta_sq;
            assert_eq!(fixed, if long { 4 } else { 0 });
            lifts.push(HyperLift {
                mobius: m.clone(),
                scale: lam.clone(),
                y_multiplier: nu,
                fixed_on_curve: fixed,
                quotient_genus: (8 - fixed) / 4,
                eigenvalues: if long { [-1, -1, 1] } else { [-1, 1, 1] },
            });
        }
    }
    HyperInvolutions { lifts, order_four: order_four.into_values().collect() }
}

fn projective_reps(f: &Field) -> Vec<[FieldElem; 3]> {
    let q = f.size().expect("reflection scan needs an enumerable field");
    let mut v = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            v.push([f.one(), f.elem_from_index(a), f.elem_from_index(b)]);
        }
    }
    for b in 0..q {
        v.push([f.zero(), f.one(), f.elem_from_index(b)]);
    }
    v.push([f.zero(), f.zero(), f.one()]);
    v
}

/// The multiplier lambda with g = lambda * base, if there is one.
fn quartic_multiplier(g: &Trivariate, base: &Trivariate, f: &Field) -> Option<FieldElem> {
    let i = base.coeffs().iter().position(|c| !c.is_zero()).unwrap();
    let lam = f.mul(&g.coeffs()[i], &f.inv(&base.coeffs()[i]).unwrap());
    (g == &base.scale(&lam, f)).then_some(lam)
}

/// The harmonic reflection fixing the line l pointwise and negating the
/// center p, or None when p lies on l.
pub(crate) fn reflection_matrix(p: &[FieldElem; 3], l: &[FieldElem; 3], f: &Field) -> Option<Mat3> {
    let mut s = f.zero();
    for i in 0..3 {
        s = f.add(&s, &f.mul(&p[i], &l[i]));
    }
    let factor = f.mul(&f.from_i64(2), &f.inv(&s)?);
    let mut r = Mat3::identity(f);
    for i in 0..3 {
        for j in 0..3 {
            let off = f.mul(&factor, &f.mul(&p[i], &l[j]));
            r.0[i][j] = f.sub(&r.0[i][j], &off);
        }
    }
    Some(r)
}

/// The record for the harmonic reflection about `center` and `axis`, or
/// None when the pair is degenerate or the quartic is not invariant.
pub fn classify_reflection(
    c: &PlaneQuartic,
    center: &[FieldElem; 3],
    axis: &[FieldElem; 3],
) -> Option<QuarticReflection> {
    let f = c.field();
    let form = c.form();
    let r = reflection_matrix(center, axis, f)?;
    let lam = quartic_multiplier(&form.transform(&r, f), form, f)?;
    // An exact reflection representative squares to the identity, so
    // lambda is a sign, and -1 would force the quartic to vanish on the
    // fixed line.
    assert!(lam == f.one());
    // The center cannot lie on the curve and the axis cannot be tangent
    // to it: either would give the restriction of the involution a fixed
    // point with trivial differential.
    assert!(!form.eval(center, f).is_zero());
    let span = kernel_basis(&[axis.to_vec()], 3, f);
    let v0: [FieldElem; 3] = span[0].clone().try_into().unwrap();
    let v1: [FieldElem; 3] = span[1].clone().try_into().unwrap();
    let n = Mat3::from_cols(&v0, &v1, center);
    assert!(!n.det(f).is_zero());
    let axis_slice = form.transform(&n, f).restrict_z0();
    assert!(axis_slice.is_squarefree_form(f));
    Some(QuarticReflection {
        matrix: r.normalized(f),
        center: center.clone(),
        axis: axis.clone(),
        fixed_on_curve: 4,
        quotient_genus: 1,
        eigenvalues: [-1, -1, 1],
    })
}

pub fn quartic_reflections(c: &PlaneQuartic) -> Result<Vec<QuarticReflection>, InvolutionError> {
    let f = c.field();
    let q = f.size().expect("reflection scan needs an enumerable field");
    if q.checked_pow(4).map_or(true, |v| v > REFLECTION_BUDGET) {
        return Err(InvolutionError::SearchBudget { q });
    }
    let reps = projective_reps(f);

    let found: Vec<(Vec<FieldElem>, QuarticReflection)> = reps
        .par_iter()
        .with_min_len(8)
        .flat_map_iter(|p| {
            let reps = &reps;
            reps.iter().filter_map(move |l| {
                let refl = classify_reflection(c, p, l)?;
                Some((refl.matrix.key(), refl))
            })
        })
        .collect();

    let mut sorted = BTreeMap::new();
    for (key, refl) in found {
        let prior = sorted.insert(key, refl);
        assert!(prior.is_none());
    }
    Ok(sorted.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::UniPoly;

    fn octic_cover(coeffs: &[i64], f: &Field) -> DoubleCover {
        DoubleCover::new(f.clone(), UniPoly::from_i64(coeffs, f), 3).unwrap()
    }

    #[test]
    fn eighth_roots_of_unity_have_five_involution_classes() {
        let f = Field::new(17, 1).unwrap();
        let c = octic_cover(&[-1, 0, 0, 0, 0, 0, 0, 0, 1], &f);
        let found = hyper_involutions(&c);
        assert_eq!(found.lifts.len(), 10);
        assert_eq!(found.order_four.len(), 4);

        // x -> -x plus the inversions x -> z/x with z an eighth root of
        // unity: the fixed points +-sqrt(z) are branch points exactly when
        // z is a fourth root, so those four classes fall in the order-4
        // bucket and the other four inversions survive.
        let classes: Vec<Vec<u64>> = found
            .lifts
            .iter()
            .step_by(2)
            .map(|l| l.mobius.entries().map(|e| f.index_of(e)).collect())
            .collect();
        let inv = |z: i64| {
            let zi = f.inv(&f.from_i64(z)).unwrap();
            vec![0, 1, f.index_of(&zi), 0]
        };
        assert!(classes.contains(&vec![1, 0, 0, 16]));
        for z in [2, -2, 8, -8] {
            assert!(classes.contains(&inv(z)));
        }
        let order4: Vec<Vec<u64>> = found
            .order_four
            .iter()
            .map(|m| m.entries().map(|e| f.index_of(e)).collect())
            .collect();
        for z in [1, -1, 4, -4] {
            assert!(order4.contains(&inv(z)));
        }

        for pair in found.lifts.chunks(2) {
            let genera: Vec<usize> = pair.iter().map(|l| l.quotient_genus).collect();
            let mut sorted = genera.clone();
            sorted.sort();
            assert_eq!(sorted, vec![1, 2]);
            assert_eq!(pair[0].mobius, pair[1].mobius);
            for l in pair {
                assert_eq!(l.quotient_genus == 1, l.fixed_on_curve == 4);
                assert_eq!(
                    l.eigenvalues,
                    if l.quotient_genus == 1 { [-1, -1, 1] } else { [-1, 1, 1] }
                );
            }
        }
    }

    #[test]
    fn irrational_inversions_are_rejected() {
        // Branch points are the eighth roots of 2; the inversions sending
        // x to (eighth root of unity) * 2^(1/4) / x permute them but have
        // no rational matrix, since no fourth root of +-2 lives in F_5.
        let f = Field::new(5, 1).unwrap();
        let c = octic_cover(&[-2, 0, 0, 0, 0, 0, 0, 0, 1], &f);
        let found = hyper_involutions(&c);
        assert_eq!(found.lifts.len(), 2);
        assert!(found.order_four.is_empty());
        let m = &found.lifts[0].mobius;
        let ids: Vec<u64> = m.entries().map(|e| f.index_of(e)).collect();
        assert_eq!(ids, vec![1, 0, 0, 4]);
    }

    #[test]
    fn odd_branch_polynomial_yields_only_order_four() {
        // x(x^2-1)(x^2-2)(x^2-3) over F_11 is odd, so x -> -x multiplies
        // the promoted octic form by -1 and its lifts square to the
        // hyperelliptic involution; 0 and infinity are branch points.
        let f = Field::new(11, 1).unwrap();
        let poly = UniPoly::from_i64(&[0, 1], &f)
            .mul(&UniPoly::from_i64(&[-1, 0, 1], &f), &f)
            .mul(&UniPoly::from_i64(&[-2, 0, 1], &f), &f)
            .mul(&UniPoly::from_i64(&[-3, 0, 1], &f), &f);
        let c = DoubleCover::new(f.clone(), poly, 3).unwrap();
        let found = hyper_involutions(&c);
        assert!(found.lifts.is_empty());
        assert_eq!(found.order_four.len(), 1);
        let ids: Vec<u64> = found.order_four[0].entries().map(|e| f.index_of(e)).collect();
        assert_eq!(ids, vec![1, 0, 0, 10]);
    }

    fn fermat_quartic(f: &Field) -> Trivariate {
        let mut t = Trivariate::zero(4, f);
        t.set(4, 0, f.one());
        t.set(0, 4, f.one());
        t.set(0, 0, f.from_i64(-1));
        t
    }

    #[test]
    fn fermat_reflections_match_a_full_projective_scan() {
        let f = Field::new(5, 1).unwrap();
        let c = PlaneQuartic::new(f.clone(), fermat_quartic(&f)).unwrap();
        let found = quartic_reflections(&c).unwrap();

        // Brute force over every normalized invertible matrix: keep the
        // non-scalar ones squaring to a scalar and preserving the quartic
        // up to a factor.
        let q = 5u64;
        let mut oracle: Vec<Vec<FieldElem>> = Vec::new();
        for first in 0..9usize {
            let tail = 9 - first - 1;
            for idx in 0..q.pow(tail as u32) {
                let mut flat = vec![f.zero(); first];
                flat.push(f.one());
                let mut rest = idx;
                for _ in 0..tail {
                    flat.push(f.elem_from_index(rest % q));
                    rest /= q;
                }
                let m = Mat3([
                    [flat[0].clone(), flat[1].clone(), flat[2].clone()],
                    [flat[3].clone(), flat[4].clone(), flat[5].clone()],
                    [flat[6].clone(), flat[7].clone(), flat[8].clone()],
                ]);
                if m.det(&f).is_zero() {
                    continue;
                }
                let sq = m.mul(&m, &f);
                let scalar = sq.0[0][0].clone();
                let is_scalar_sq = !scalar.is_zero()
                    && sq.0[0][1].is_zero() && sq.0[0][2].is_zero()
                    && sq.0[1][0].is_zero() && sq.0[1][2].is_zero()
                    && sq.0[2][0].is_zero() && sq.0[2][1].is_zero()
                    && sq.0[1][1] == scalar && sq.0[2][2] == scalar;
                if !is_scalar_sq {
                    continue;
                }
                let diag = m.0[0][1].is_zero() && m.0[0][2].is_zero()
                    && m.0[1][0].is_zero() && m.0[1][2].is_zero()
                    && m.0[2][0].is_zero() && m.0[2][1].is_zero()
                    && m.0[0][0] == m.0[1][1] && m.0[1][1] == m.0[2][2];
                if diag {
                    continue;
                }
                if quartic_multiplier(&fermat_quartic(&f).transform(&m, &f), &fermat_quartic(&f), &f)
                    .is_some()
                {
                    oracle.push(m.key());
                }
            }
        }
        oracle.sort();
        oracle.dedup();
        let keys: Vec<Vec<FieldElem>> = found.iter().map(|r| r.matrix.key()).collect();
        assert_eq!(keys, oracle);

        // Three coordinate-sign classes and the four twisted swaps of x
        // and y; no x-z or y-z swap preserves x^4 + y^4 - z^4 over F_5
        // because -1 is not a fourth power there.
        assert_eq!(found.len(), 7);
        for r in &found {
            assert_eq!(r.quotient_genus, 1);
            assert_eq!(r.fixed_on_curve, 4);
            assert_eq!(r.eigenvalues, [-1, -1, 1]);
        }
    }

    #[test]
    fn reflection_scan_budget() {
        let f = Field::new(101, 1).unwrap();
        let mut t = Trivariate::zero(4, &f);
        t.set(4, 0, f.one());
        t.set(0, 4, f.one());
        t.set(0, 0, f.from_i64(-1));
        let c = PlaneQuartic::new(f, t).unwrap();
        assert_eq!(
            quartic_reflections(&c).unwrap_err(),
            InvolutionError::SearchBudget { q: 101 }
        );
    }

    #[test]
    fn unsupported_models_are_refused() {
        let f = Field::new(7, 1).unwrap();
        let e = DoubleCover::new(f.clone(), UniPoly::from_i64(&[1, 1, 0, 1], &f), 1).unwrap();
        assert_eq!(
            involutions(&CurveModel::Genus1(e)).unwrap_err(),
            InvolutionError::UnsupportedModel("genus1")
        );
    }
}
