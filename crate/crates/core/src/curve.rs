//! Curve models and their validation: double covers of the line (genus 1, 2
//! and 3 hyperelliptic), smooth plane quartics, and the paired-quartic
//! systems whose fiber product carries a completely decomposed picture.
//! Construction is exact: branch forms must be squarefree as forms, and
//! plane quartics are certified smooth by eliminating every possible
//! singular point, not by sampling.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::field::{Field, FieldElem, FieldError, FieldRepr};
use crate::forms::{monomials, BinaryForm, Trivariate};
use crate::matrix::Mat3;
use crate::poly::{self, Extension, UniPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("defining polynomial is zero")]
    ZeroPolynomial,
    #[error("defining polynomial must have degree {expected}, got {got}")]
    WrongDegree { expected: &'static str, got: usize },
    #[error("branch form is not squarefree")]
    NotSquarefree,
    #[error("plane quartic is singular")]
    Singular { witness: Option<SingularWitness> },
}

/// A singular point found during smoothness certification, with coordinates
/// over the extension of the curve's field of the stated degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularWitness {
    pub extension_degree: usize,
    pub coords: [Vec<u64>; 3],
}

/// y^2 = f(x) with squarefree degree-(2g+2) branch form; odd-degree input is
/// promoted by one, placing a branch point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCover {
    field: Field,
    poly: UniPoly,
    form: BinaryForm,
}

impl DoubleCover {
    pub fn new(field: Field, poly: UniPoly, genus: usize) -> Result<DoubleCover, ModelError> {
        let even = 2 * genus + 2;
        let Some(d) = poly.degree() else {
            return Err(ModelError::ZeroPolynomial);
        };
        let expected: &'static str = match genus {
            1 => "3 or 4",
            2 => "5 or 6",
            3 => "7 or 8",
            _ => "2g+1 or 2g+2",
        };
        if d != even && d + 1 != even {
            return Err(ModelError::WrongDegree { expected, got: d });
        }
        let form = if d == even {
            BinaryForm::from_poly(&poly, even, &field)
        } else {
            BinaryForm::from_poly(&poly, d, &field).times_w(&field)
        };
        if !form.is_squarefree_form(&field) {
            return Err(ModelError::NotSquarefree);
        }
        Ok(DoubleCover { field, poly, form })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn poly(&self) -> &UniPoly {
        &self.poly
    }

    /// The branch form of degree 2g+2 (its zeros are the branch points).
    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn genus(&self) -> usize {
        (self.form.degree() - 2) / 2
    }
}

/// A smooth plane quartic, certified at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneQuartic {
    field: Field,
    form: Trivariate,
}

impl PlaneQuartic {
    pub fn new(field: Field, form: Trivariate) -> Result<PlaneQuartic, ModelError> {
        assert_eq!(form.degree(), 4);
        if form.is_zero() {
            return Err(ModelError::ZeroPolynomial);
        }
        check_smooth(&form, &field)?;
        Ok(PlaneQuartic { field, form })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn form(&self) -> &Trivariate {
        &self.form
    }
}

/// A pair of squarefree quartic branch forms over a shared line; the fiber
/// product of the two elliptic double covers has genus 5 - deg gcd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoweSystem {
    field: Field,
    f1: UniPoly,
    f2: UniPoly,
    phi1: BinaryForm,
    phi2: BinaryForm,
    shared: BinaryForm,
}

impl HoweSystem {
    pub fn new(field: Field, f1: UniPoly, f2: UniPoly) -> Result<HoweSystem, ModelError> {
        let promote = |p: &UniPoly| -> Result<BinaryForm, ModelError> {
            let Some(d) = p.degree() else {
                return Err(ModelError::ZeroPolynomial);
            };
            if d != 3 && d != 4 {
                return Err(ModelError::WrongDegree { expected: "3 or 4", got: d });
            }
            let form = if d == 4 {
                BinaryForm::from_poly(p, 4, &field)
            } else {
                BinaryForm::from_poly(p, 3, &field).times_w(&field)
            };
            if !form.is_squarefree_form(&field) {
                return Err(ModelError::NotSquarefree);
            }
            Ok(form)
        };
        let phi1 = promote(&f1)?;
        let phi2 = promote(&f2)?;
        let shared = form_gcd(&phi1, &phi2, &field);
        Ok(HoweSystem { field, f1, f2, phi1, phi2, shared })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn f1(&self) -> &UniPoly {
        &self.f1
    }

    pub fn f2(&self) -> &UniPoly {
        &self.f2
    }

    pub fn phi1(&self) -> &BinaryForm {
        &self.phi1
    }

    pub fn phi2(&self) -> &BinaryForm {
        &self.phi2
    }

    /// Monic-normalized gcd of the two branch forms, as a form (a shared
    /// zero at infinity contributes).
    pub fn shared(&self) -> &BinaryForm {
        &self.shared
    }

    pub fn shared_degree(&self) -> usize {
        self.shared.degree()
    }

    pub fn genus(&self) -> usize {
        5 - self.shared_degree()
    }
}

/// Gcd of two binary forms including the zero at infinity: the affine gcd
/// times the shared infinity multiplicity.
pub fn form_gcd(a: &BinaryForm, b: &BinaryForm, f: &Field) -> BinaryForm {
    let affine = a.dehomogenize().gcd(&b.dehomogenize(), f);
    let inf = a
        .infinity_multiplicity()
        .unwrap()
        .min(b.infinity_multiplicity().unwrap());
    let d = affine.degree().unwrap() + inf;
    let mut form = BinaryForm::from_poly(&affine, affine.degree().unwrap(), f);
    for _ in 0..inf {
        form = form.times_w(f);
    }
    assert_eq!(form.degree(), d);
    form
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveModel {
    Hyperelliptic(DoubleCover),
    Quartic(PlaneQuartic),
    Genus2(DoubleCover),
    Genus1(DoubleCover),
    Howe(HoweSystem),
}

impl CurveModel {
    pub fn field(&self) -> &Field {
        match self {
            CurveModel::Hyperelliptic(c) | CurveModel::Genus2(c) | CurveModel::Genus1(c) => c.field(),
            CurveModel::Quartic(q) => q.field(),
            CurveModel::Howe(h) => h.field(),
        }
    }

    pub fn genus(&self) -> usize {
        match self {
            CurveModel::Hyperelliptic(c) | CurveModel::Genus2(c) | CurveModel::Genus1(c) => c.genus(),
            CurveModel::Quartic(_) => 3,
            CurveModel::Howe(h) => h.genus(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CurveModel::Hyperelliptic(_) => "hyperelliptic",
            CurveModel::Quartic(_) => "quartic",
            CurveModel::Genus2(_) => "genus2",
            CurveModel::Genus1(_) => "genus1",
            CurveModel::Howe(_) => "howe",
        }
    }
}

// --- smoothness certification -------------------------------------------------
//
// Exact decision procedure. Every singular quartic has a singular closed
// point of degree at most 6: a reduced quartic has at most 6 singular points
// (so each Galois orbit is that small), and a non-reduced one contains a
// repeated line or conic inside its singular locus. The search below is
// therefore complete once extensions up to degree 6 are examined, and the
// positive-dimensional cases announce themselves as identically vanishing
// resultants first.

fn check_smooth(form: &Trivariate, field: &Field) -> Result<(), ModelError> {
    let (ext, fl, v) = off_curve_point(form, field);
    let l = ext.top().clone();
    let e = ext.degree();

    // Gradient at the off-curve point; nonzero by the Euler relation.
    let parts = [fl.partial(0, &l), fl.partial(1, &l), fl.partial(2, &l)];
    let grad: [FieldElem; 3] = std::array::from_fn(|i| parts[i].eval(&v, &l));
    assert!(grad.iter().any(|g| !g.is_zero()));

    let dot = |a: &[FieldElem; 3], b: &[FieldElem; 3]| -> FieldElem {
        let mut s = l.zero();
        for (x, y) in a.iter().zip(b) {
            s = l.add(&s, &l.mul(x, y));
        }
        s
    };

    // Coordinate change T = [a | v | c]: middle column v makes the y^4
    // coefficient F(v) nonzero; a and c are unit-vector completions nudged
    // by v so the x y^3 and y^3 z coefficients grad.a, grad.c are nonzero
    // too. grad.v = 4 F(v) != 0 makes the nudge always available.
    let istar = v.iter().position(|c| !c.is_zero()).unwrap();
    let mut completions = (0..3).filter(|&i| i != istar).map(|i| {
        let mut u: [FieldElem; 3] = std::array::from_fn(|_| l.zero());
        u[i] = l.one();
        u
    });
    let pick = |u: [FieldElem; 3]| -> [FieldElem; 3] {
        if !dot(&grad, &u).is_zero() {
            u
        } else {
            std::array::from_fn(|i| l.add(&u[i], &v[i]))
        }
    };
    let col_a = pick(completions.next().unwrap());
    let col_c = pick(completions.next().unwrap());
    let t = Mat3::from_cols(&col_a, &v, &col_c);
    assert!(!t.det(&l).is_zero());

    let g = fl.transform(&t, &l);
    let gp = [g.partial(0, &l), g.partial(1, &l), g.partial(2, &l)];
    for p in &gp {
        assert!(!p.get(0, 3).is_zero(), "partials must be cubic in y after normalization");
    }

    let witness_from = |ambient: &Field, chain: &dyn Fn(&FieldElem) -> FieldElem, pt: [FieldElem; 3]| {
        let tn = Mat3(std::array::from_fn(|i| std::array::from_fn(|j| chain(&t.0[i][j]))));
        let image = tn.apply(&pt, ambient);
        let degree = ambient.degree() / field.degree();
        if degree > 6 {
            return None;
        }
        Some(SingularWitness {
            extension_degree: degree,
            coords: std::array::from_fn(|i| image[i].coeffs().to_vec()),
        })
    };

    // The corner (1:0:0) is the only point missed by the two checks below.
    let corner = [l.one(), l.zero(), l.zero()];
    if gp.iter().all(|p| p.eval(&corner, &l).is_zero()) {
        let w = witness_from(&l, &|c| c.clone(), corner);
        return Err(ModelError::Singular { witness: w });
    }

    // Points (x : 1 : 0) on the line z = 0: common roots of the three
    // restricted partials.
    let line_cubics: Vec<UniPoly> = gp
        .iter()
        .map(|p| p.restrict_z0().dehomogenize())
        .collect();
    let g_line = line_cubics[0]
        .gcd(&line_cubics[1], &l)
        .gcd(&line_cubics[2], &l);
    if g_line.degree().map_or(false, |d| d >= 1) {
        // Roots split within degree 3 over L, so a witness materializes.
        for j in 1..=3usize {
            if e * j > 6 {
                break;
            }
            let extj = Extension::new(&l, j);
            let n = extj.top().clone();
            let roots = poly::roots_in_field(&extj.embed_poly(&g_line), &n);
            if let Some(x0) = roots.first() {
                let pt = [x0.clone(), n.one(), n.zero()];
                let w = witness_from(&n, &|c| extj.embed(c), pt);
                return Err(ModelError::Singular { witness: w });
            }
        }
        return Err(ModelError::Singular { witness: None });
    }

    // Affine chart z = 1. The three partials are cubics in y whose leading
    // coefficients are nonzero constants, so the resultants specialize
    // exactly and have x-degree at most 18: interpolate them from 19 samples
    // over a field with at least 19 elements.
    let lsize = l.size().expect("sample field is enumerable");
    let mut jm = 1usize;
    let mut msize = lsize;
    while msize < 19 {
        jm += 1;
        msize = msize.saturating_mul(lsize);
    }
    let extm = Extension::new(&l, jm);
    let m = extm.top().clone();
    let gpm: Vec<Trivariate> = gp.iter().map(|p| p.map_coeffs(|c| extm.embed(c))).collect();
    let mut samples: Vec<[(FieldElem, FieldElem); 3]> = Vec::with_capacity(19);
    let mut xs_list = Vec::with_capacity(19);
    for s in 0..19u64 {
        let xs = m.elem_from_index(s);
        let specs: Vec<UniPoly> = gpm.iter().map(|p| p.specialize_xz(&xs, &m.one(), &m)).collect();
        let r = [
            poly::resultant(&specs[0], &specs[1], &m),
            poly::resultant(&specs[0], &specs[2], &m),
            poly::resultant(&specs[1], &specs[2], &m),
        ];
        samples.push(std::array::from_fn(|i| (xs.clone(), r[i].clone())));
        xs_list.push(xs);
    }
    let resultants: Vec<UniPoly> = (0..3)
        .map(|i| {
            let pts: Vec<(FieldElem, FieldElem)> = samples.iter().map(|s| s[i].clone()).collect();
            poly::interpolate(&pts, &m)
        })
        .collect();

    // A singular affine point's x-coordinate is a root of every pairwise
    // resultant. It is also a closed point of degree at most 6, so scanning
    // the compositum towers F_{q^j}, j <= 6, for roots of the candidate
    // polynomial and testing the y-direction gcd there is a complete search.
    // Returns Some(confirmation) once a singular point is proved, with the
    // witness when its field is small enough to report.
    let dm = e * jm;
    let materialize = |cands: &UniPoly| -> Option<Option<SingularWitness>> {
        for j in 1..=6usize {
            let total = lcm(dm, j);
            let extn = Extension::new(&m, total / dm);
            let n = extn.top().clone();
            let gn = extn.embed_poly(cands);
            let gpn: Vec<Trivariate> = gpm
                .iter()
                .map(|p| p.map_coeffs(|c| extn.embed(c)))
                .collect();
            for x0 in poly::roots_in_field(&gn, &n) {
                let specs: Vec<UniPoly> = gpn
                    .iter()
                    .map(|p| p.specialize_xz(&x0, &n.one(), &n))
                    .collect();
                let h = specs[0].gcd(&specs[1], &n).gcd(&specs[2], &n);
                if h.degree().map_or(false, |d| d >= 1) {
                    let witness = poly::roots_in_field(&h, &n).first().and_then(|y0| {
                        let pt = [x0.clone(), y0.clone(), n.one()];
                        witness_from(&n, &|c| extn.embed(&extm.embed(c)), pt)
                    });
                    return Some(witness);
                }
            }
        }
        None
    };

    // An identically zero resultant forces a common positive-dimensional
    // piece of two partials, which meets the (nonconstant) third partial in
    // the projective plane: singular regardless of what materializes. The
    // remaining resultants still vanish at every singular x-coordinate, so
    // they drive the witness search.
    let nonzero: Vec<&UniPoly> = resultants.iter().filter(|r| !r.is_zero()).collect();
    if nonzero.len() < 3 {
        let witness = match nonzero.split_first() {
            None => None,
            Some((first, rest)) => {
                let cands = rest.iter().fold((*first).clone(), |acc, r| acc.gcd(r, &m));
                materialize(&cands).flatten()
            }
        };
        return Err(ModelError::Singular { witness });
    }

    let g_x = resultants[0]
        .gcd(&resultants[1], &m)
        .gcd(&resultants[2], &m);
    if g_x.degree() == Some(0) {
        return Ok(());
    }
    match materialize(&g_x) {
        Some(witness) => Err(ModelError::Singular { witness }),
        None => Ok(()),
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

/// A point of the plane, over the field or its quadratic extension, where
/// the quartic does not vanish. Five lines of five points each suffice once
/// the field has at least 5 elements; tiny fields are exhausted first.
fn off_curve_point(form: &Trivariate, field: &Field) -> (Extension, Trivariate, [FieldElem; 3]) {
    for e in [1usize, 2] {
        let ext = Extension::new(field, e);
        let l = ext.top().clone();
        let fl = form.map_coeffs(|c| ext.embed(c));
        let q = l.size().expect("quadratic extension of a base field is enumerable");
        let scan = q.min(5);
        for ai in 0..scan {
            for bi in 0..scan {
                let v = [l.one(), l.elem_from_index(ai), l.elem_from_index(bi)];
                if !fl.eval(&v, &l).is_zero() {
                    return (ext, fl, v);
                }
            }
        }
        if q < 5 {
            for bi in 0..q {
                let v = [l.zero(), l.one(), l.elem_from_index(bi)];
                if !fl.eval(&v, &l).is_zero() {
                    return (ext, fl, v);
                }
            }
            let v = [l.zero(), l.zero(), l.one()];
            if !fl.eval(&v, &l).is_zero() {
                return (ext, fl, v);
            }
        }
    }
    unreachable!("a quartic curve cannot cover the plane over a field with 9+ elements")
}

// --- JSON curve files ---------------------------------------------------------

#[derive(Debug, Error)]
pub enum CurveFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("curve file: {0}")]
    Schema(String),
}

fn schema_err<T>(msg: impl Into<String>) -> Result<T, CurveFileError> {
    Err(CurveFileError::Schema(msg.into()))
}

fn parse_elem(v: &Value, field: &Field) -> Result<FieldElem, CurveFileError> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(c) => Ok(field.from_i64(c)),
            None => schema_err("coefficients must be integers"),
        },
        Value::Array(items) => {
            if items.len() > field.degree() {
                return schema_err(format!(
                    "element has {} coefficients but the field has degree {}",
                    items.len(),
                    field.degree()
                ));
            }
            let mut coeffs = Vec::with_capacity(items.len());
            for it in items {
                match it.as_i64() {
                    Some(c) => coeffs.push(c),
                    None => return schema_err("element coefficients must be integers"),
                }
            }
            Ok(field.elem(&coeffs))
        }
        _ => schema_err("elements must be integers or arrays of integers"),
    }
}

fn parse_poly(v: &Value, field: &Field) -> Result<UniPoly, CurveFileError> {
    let Value::Array(items) = v else {
        return schema_err("polynomials must be arrays of coefficients");
    };
    let mut coeffs = Vec::with_capacity(items.len());
    for it in items {
        coeffs.push(parse_elem(it, field)?);
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

fn parse_quartic(v: &Value, field: &Field) -> Result<Trivariate, CurveFileError> {
    let Value::Object(map) = v else {
        return schema_err("quartic forms must be objects keyed by monomial exponents");
    };
    let mut form = Trivariate::zero(4, field);
    for (key, val) in map {
        let parts: Vec<&str> = key.split(',').collect();
        if parts.len() != 3 {
            return schema_err(format!("bad monomial key {key:?}, expected \"i,j,k\""));
        }
        let mut exps = [0usize; 3];
        for (slot, part) in exps.iter_mut().zip(&parts) {
            match part.trim().parse::<usize>() {
                Ok(e) => *slot = e,
                Err(_) => return schema_err(format!("bad monomial key {key:?}")),
            }
        }
        if exps[0] + exps[1] + exps[2] != 4 {
            return schema_err(format!("monomial {key:?} does not have degree 4"));
        }
        form.set(exps[0], exps[1], parse_elem(val, field)?);
    }
    Ok(form)
}

pub fn parse_curve(json_text: &str) -> Result<CurveModel, CurveFileError> {
    let v: Value = serde_json::from_str(json_text)?;
    let Value::Object(map) = &v else {
        return schema_err("curve file must be a JSON object");
    };
    for key in map.keys() {
        if !matches!(key.as_str(), "model" | "field" | "f" | "f1" | "f2") {
            return schema_err(format!("unknown key {key:?}"));
        }
    }
    let Some(model) = map.get("model").and_then(Value::as_str) else {
        return schema_err("missing \"model\"");
    };
    let Some(field_v) = map.get("field") else {
        return schema_err("missing \"field\"");
    };
    let repr: FieldRepr = serde_json::from_value(field_v.clone())?;
    let field = Field::from_repr(repr)?;
    let want_f = |key: &str| -> Result<&Value, CurveFileError> {
        map.get(key)
            .ok_or_else(|| CurveFileError::Schema(format!("missing {key:?}")))
    };
    let curve = match model {
        "hyperelliptic" => {
            let f = parse_poly(want_f("f")?, &field)?;
            CurveModel::Hyperelliptic(DoubleCover::new(field, f, 3)?)
        }
        "genus2" => {
            let f = parse_poly(want_f("f")?, &field)?;
            CurveModel::Genus2(DoubleCover::new(field, f, 2)?)
        }
        "genus1" => {
            let f = parse_poly(want_f("f")?, &field)?;
            CurveModel::Genus1(DoubleCover::new(field, f, 1)?)
        }
        "quartic" => {
            let f = parse_quartic(want_f("f")?, &field)?;
            CurveModel::Quartic(PlaneQuartic::new(field, f)?)
        }
        "howe" => {
            let f1 = parse_poly(want_f("f1")?, &field)?;
            let f2 = parse_poly(want_f("f2")?, &field)?;
            CurveModel::Howe(HoweSystem::new(field, f1, f2)?)
        }
        other => return schema_err(format!("unknown model {other:?}")),
    };
    Ok(curve)
}

pub fn elem_to_json(e: &FieldElem) -> Value {
    Value::Array(e.coeffs().iter().map(|&c| json!(c)).collect())
}

pub fn poly_to_json(p: &UniPoly) -> Value {
    Value::Array(p.coeffs().iter().map(elem_to_json).collect())
}

pub fn quartic_to_json(t: &Trivariate) -> Value {
    let mut map = BTreeMap::new();
    for ((i, j, k), c) in monomials(4).into_iter().zip(t.coeffs()) {
        if !c.is_zero() {
            map.insert(format!("{i},{j},{k}"), elem_to_json(c));
        }
    }
    serde_json::to_value(map).unwrap()
}

pub fn curve_to_json(c: &CurveModel) -> Value {
    let field = c.field().repr();
    match c {
        CurveModel::Hyperelliptic(dc) | CurveModel::Genus2(dc) | CurveModel::Genus1(dc) => json!({
            "model": c.kind(),
            "field": field,
            "f": poly_to_json(dc.poly()),
        }),
        CurveModel::Quartic(q) => json!({
            "model": "quartic",
            "field": field,
            "f": quartic_to_json(q.form()),
        }),
        CurveModel::Howe(h) => json!({
            "model": "howe",
            "field": field,
            "f1": poly_to_json(h.f1()),
            "f2": poly_to_json(h.f2()),
        }),
    }
}
