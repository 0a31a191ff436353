//! The top of the pipeline: decide whether a genus-3 Jacobian splits
//! through an involution, classify how far it splits, and certify every
//! claim with exact integer L-polynomial identities.
//!
//! A hyperelliptic curve splits once per kept line involution, into an
//! elliptic curve and a genus-2 curve with L_C = L_E * L_G2. A plane
//! quartic splits once per harmonic reflection, pulling out an elliptic
//! factor whose cofactor is a degree-4 L-polynomial with the genus-2
//! functional equation; three isogenous abelian-surface complements exist,
//! so the record carries multiplicity 3 instead of three payloads. When
//! two involutions commute projectively the curve carries a Klein
//! four-group, the third involution is their product, and the Jacobian
//! decomposes completely into three elliptic factors.
//!
//! Reports are plain JSON values: deterministic, self-contained (every
//! quotient model embeds its own field), and re-checkable from scratch by
//! `verify_certificate` without trusting any recorded number.

use num_traits::ToPrimitive;
use serde_json::{json, Value};
use thiserror::Error;

use crate::curve::{curve_to_json, parse_curve, poly_to_json, CurveModel, DoubleCover, PlaneQuartic};
use crate::field::{Field, FieldElem};
use crate::involution::{
    self, HyperInvolutions, HyperLift, InvolutionError, Involutions, QuarticReflection,
};
use crate::matrix::{Mat2, Mat3};
use crate::poly::Extension;
use crate::quotient::{self, HyperQuotients, QuotientError};
use crate::zeta::{self, CountError, LPolynomial};

#[derive(Debug, Error)]
pub enum DecomposeError {
    #[error(transparent)]
    Involution(#[from] InvolutionError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("no decomposition pipeline for {0} models")]
    Unsupported(&'static str),
}

impl DecomposeError {
    /// True when the failure is an enumeration budget rather than bad input
    /// or a broken identity.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            DecomposeError::Involution(InvolutionError::SearchBudget { .. })
                | DecomposeError::Count(CountError::BudgetExceeded { .. })
        )
    }
}

fn je(e: &FieldElem) -> Value {
    crate::curve::elem_to_json(e)
}

fn mat2_json(m: &Mat2) -> Value {
    json!([[je(&m.0[0][0]), je(&m.0[0][1])], [je(&m.0[1][0]), je(&m.0[1][1])]])
}

fn mat3_json(m: &Mat3) -> Value {
    Value::Array(
        (0..3)
            .map(|i| Value::Array((0..3).map(|j| je(&m.0[i][j])).collect()))
            .collect(),
    )
}

fn point_json(p: &(FieldElem, FieldElem)) -> Value {
    json!([je(&p.0), je(&p.1)])
}

/// JSON record of an L-polynomial: its base field size and signed
/// coefficients in ascending degree.
pub fn l_json(l: &LPolynomial) -> Value {
    let coeffs: Vec<i64> = l
        .coeffs()
        .iter()
        .map(|c| c.to_i64().expect("L coefficient exceeds i64"))
        .collect();
    json!({"q": l.q(), "coeffs": coeffs})
}

fn hyper_lift_json(l: &HyperLift) -> Value {
    json!({
        "mobius": mat2_json(&l.mobius),
        "form_multiplier": je(&l.scale),
        "y_multiplier": je(&l.y_multiplier),
        "fixed_points_on_curve": l.fixed_on_curve,
        "quotient_genus": l.quotient_genus,
        "eigenvalues": l.eigenvalues,
    })
}

fn reflection_json(r: &QuarticReflection) -> Value {
    json!({
        "matrix": mat3_json(&r.matrix),
        "center": [je(&r.center[0]), je(&r.center[1]), je(&r.center[2])],
        "axis": [je(&r.axis[0]), je(&r.axis[1]), je(&r.axis[2])],
        "fixed_points_on_curve": r.fixed_on_curve,
        "quotient_genus": r.quotient_genus,
        "eigenvalues": r.eigenvalues,
    })
}

/// The distinct kept classes behind a lift list, in lift order.
fn kept_classes(inv: &HyperInvolutions) -> Vec<Mat2> {
    let mut out: Vec<Mat2> = Vec::new();
    for l in &inv.lifts {
        if out.last() != Some(&l.mobius) {
            out.push(l.mobius.clone());
        }
    }
    out
}

/// First pair of distinct kept classes whose matrices commute up to sign,
/// with the normalized product as the third class of the Klein group.
fn commuting_pair(classes: &[Mat2], f: &Field) -> Option<(usize, usize, Mat2)> {
    for i in 0..classes.len() {
        for j in (i + 1)..classes.len() {
            let a = classes[i].mul(&classes[j], f);
            let b = classes[j].mul(&classes[i], f);
            let a = a.normalized(f);
            if a == b.normalized(f) {
                return Some((i, j, a));
            }
        }
    }
    None
}

/// First pair of commuting reflections, with the index of the product's
/// class in the same list.
fn commuting_reflections(refs: &[QuarticReflection], f: &Field) -> Option<(usize, usize, usize)> {
    for i in 0..refs.len() {
        for j in (i + 1)..refs.len() {
            let a = refs[i].matrix.mul(&refs[j].matrix, f).normalized(f);
            let b = refs[j].matrix.mul(&refs[i].matrix, f).normalized(f);
            if a == b {
                // Reflections are the only involutions of the plane and the
                // scan is complete, so the product class is in the list.
                let k = refs
                    .iter()
                    .position(|r| r.matrix == a)
                    .expect("product of commuting reflections is a reflection");
                return Some((i, j, k));
            }
        }
    }
    None
}

/// L-polynomial of the degree-d base change, fitted from counts of the
/// base model over the extension tower.
fn extended_l(model: &CurveModel, q: u64, d: usize) -> Result<LPolynomial, DecomposeError> {
    let genus = model.genus();
    let counts: Vec<u64> = (1..=genus)
        .map(|n| zeta::count_points(model, d * n))
        .collect::<Result<_, _>>()?;
    Ok(LPolynomial::from_counts(q.pow(d as u32), genus, &counts)?)
}

fn hyper_split_payload(
    model: &CurveModel,
    q: u64,
    l_base: &LPolynomial,
    hq: &HyperQuotients,
) -> Result<(Value, bool), DecomposeError> {
    let lc = if hq.extension_degree == 1 {
        l_base.clone()
    } else {
        extended_l(model, q, hq.extension_degree)?
    };
    let e_model = CurveModel::Genus1(hq.elliptic.clone());
    let g_model = CurveModel::Genus2(hq.genus_two.clone());
    let le = zeta::l_polynomial(&e_model)?;
    let lg = zeta::l_polynomial(&g_model)?;
    let ok = le.mul(&lg) == lc;
    let payload = json!({
        "mobius": mat2_json(&hq.mobius),
        "extension_degree": hq.extension_degree,
        "fixed_points": [point_json(&hq.fixed_points[0]), point_json(&hq.fixed_points[1])],
        "transform": mat2_json(&hq.transform),
        "even_octic": poly_to_json(&hq.even_octic),
        "elliptic": curve_to_json(&e_model),
        "genus_two": curve_to_json(&g_model),
        "l_curve": l_json(&lc),
        "l_elliptic": l_json(&le),
        "l_genus_two": l_json(&lg),
        "certificate": if ok { "consistent" } else { "failed" },
    });
    Ok((payload, ok))
}

fn complete_hyper(
    model: &CurveModel,
    dc: &DoubleCover,
    q: u64,
    l_base: &LPolynomial,
    classes: &[Mat2],
    extend: bool,
) -> Result<Option<(Value, bool)>, DecomposeError> {
    let f = dc.field();
    let Some((i, j, third)) = commuting_pair(classes, f) else {
        return Ok(None);
    };
    // The product of two commuting order-2 lifts is again an order-2 lift,
    // so the search must have kept the third class.
    assert!(classes.contains(&third));
    let trio = [classes[i].clone(), classes[j].clone(), third.clone()];
    let pair_json = json!([mat2_json(&trio[0]), mat2_json(&trio[1])]);

    let mut quots = Vec::new();
    for m in &trio {
        match quotient::hyper_quotients(dc, m, extend) {
            Ok(hq) => quots.push(hq),
            Err(QuotientError::NeedsExtension) => {
                let payload = json!({
                    "pair": pair_json,
                    "third": mat2_json(&third),
                    "status": "needs_extension",
                });
                return Ok(Some((payload, true)));
            }
            Err(e) => return Err(e.into()),
        }
    }

    // Degrees are 1 or 2, so their least common multiple is the maximum.
    let d = quots.iter().map(|h| h.extension_degree).max().unwrap();
    let factors: Vec<DoubleCover> = quots
        .iter()
        .map(|h| {
            if h.extension_degree == d {
                Ok(h.elliptic.clone())
            } else {
                let ext = Extension::new(f, d);
                DoubleCover::new(ext.top().clone(), ext.embed_poly(h.elliptic.poly()), 1)
            }
        })
        .collect::<Result<_, _>>()
        .map_err(QuotientError::from)?;
    let lc = if d == 1 {
        l_base.clone()
    } else {
        extended_l(model, q, d)?
    };
    let ls: Vec<LPolynomial> = factors
        .iter()
        .map(|e| zeta::l_polynomial(&CurveModel::Genus1(e.clone())))
        .collect::<Result<_, _>>()?;
    let ok = ls[0].mul(&ls[1]).mul(&ls[2]) == lc;
    let payload = json!({
        "pair": pair_json,
        "third": mat2_json(&third),
        "extension_degree": d,
        "factors": factors.iter().map(|e| curve_to_json(&CurveModel::Genus1(e.clone()))).collect::<Vec<_>>(),
        "l_curve": l_json(&lc),
        "l_factors": ls.iter().map(l_json).collect::<Vec<_>>(),
        "certificate": if ok { "consistent" } else { "failed" },
    });
    Ok(Some((payload, ok)))
}

fn analyze_hyper(
    model: &CurveModel,
    dc: &DoubleCover,
    extend: bool,
) -> Result<Value, DecomposeError> {
    let inv = involution::hyper_involutions(dc);
    let classes = kept_classes(&inv);
    let lifts_json: Vec<Value> = inv.lifts.iter().map(hyper_lift_json).collect();
    let order4: Vec<Value> = inv.order_four.iter().map(mat2_json).collect();

    if classes.is_empty() {
        return Ok(json!({
            "schema_version": 1,
            "curve": curve_to_json(model),
            "kinds": ["NONE"],
            "involutions": lifts_json,
            "order_four": order4,
            "splits": [],
            "complete": Value::Null,
            "l_curve": Value::Null,
            "certificate_status": "consistent",
        }));
    }

    let q = dc.field().size().expect("capped fields are enumerable");
    let l_curve = zeta::l_polynomial(model)?;
    let mut all_ok = true;
    let mut splits = Vec::new();
    for m in &classes {
        match quotient::hyper_quotients(dc, m, extend) {
            Ok(hq) => {
                let (payload, ok) = hyper_split_payload(model, q, &l_curve, &hq)?;
                all_ok &= ok;
                splits.push(payload);
            }
            Err(QuotientError::NeedsExtension) => {
                splits.push(json!({"mobius": mat2_json(m), "status": "needs_extension"}));
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut kinds = vec!["HYP_SPLIT"];
    let complete = match complete_hyper(model, dc, q, &l_curve, &classes, extend)? {
        Some((v, ok)) => {
            kinds.push("COMPLETE");
            all_ok &= ok;
            v
        }
        None => Value::Null,
    };

    Ok(json!({
        "schema_version": 1,
        "curve": curve_to_json(model),
        "kinds": kinds,
        "involutions": lifts_json,
        "order_four": order4,
        "splits": splits,
        "complete": complete,
        "l_curve": l_json(&l_curve),
        "certificate_status": if all_ok { "consistent" } else { "failed" },
    }))
}

fn quartic_split_payload(
    pq: &PlaneQuartic,
    r: &QuarticReflection,
    l_curve: &LPolynomial,
) -> Result<(Value, bool, DoubleCover, LPolynomial), DecomposeError> {
    let qq = quotient::quartic_quotient(pq, r)?;
    let e_model = CurveModel::Genus1(qq.elliptic.clone());
    let le = zeta::l_polynomial(&e_model)?;
    let (complement, ok) = match l_curve.divide(&le) {
        Ok(la) => (l_json(&la), true),
        Err(e) => (json!({"error": e.to_string()}), false),
    };
    let payload = json!({
        "center": [je(&r.center[0]), je(&r.center[1]), je(&r.center[2])],
        "axis": [je(&r.axis[0]), je(&r.axis[1]), je(&r.axis[2])],
        "transform": mat3_json(&qq.transform),
        "elliptic": curve_to_json(&e_model),
        "l_elliptic": l_json(&le),
        "l_complement": complement,
        "multiplicity": 3,
        "certificate": if ok { "consistent" } else { "failed" },
    });
    Ok((payload, ok, qq.elliptic, le))
}

fn analyze_quartic(
    model: &CurveModel,
    pq: &PlaneQuartic,
) -> Result<Value, DecomposeError> {
    let refs = involution::quartic_reflections(pq)?;
    let refs_json: Vec<Value> = refs.iter().map(reflection_json).collect();

    if refs.is_empty() {
        return Ok(json!({
            "schema_version": 1,
            "curve": curve_to_json(model),
            "kinds": ["NONE"],
            "involutions": refs_json,
            "splits": [],
            "complete": Value::Null,
            "l_curve": Value::Null,
            "certificate_status": "consistent",
        }));
    }

    let l_curve = zeta::l_polynomial(model)?;
    let mut all_ok = true;
    let mut splits = Vec::new();
    let mut factors = Vec::new();
    for r in &refs {
        let (payload, ok, e, le) = quartic_split_payload(pq, r, &l_curve)?;
        all_ok &= ok;
        splits.push(payload);
        factors.push((e, le));
    }

    let mut kinds = vec!["QUARTIC_SPLIT"];
    let complete = match commuting_reflections(&refs, pq.field()) {
        Some((i, j, k)) => {
            kinds.push("COMPLETE");
            let trio = [i, j, k];
            let prod = factors[i].1.mul(&factors[j].1).mul(&factors[k].1);
            let ok = prod == l_curve;
            all_ok &= ok;
            json!({
                "pair": [
                    {"center": splits[i]["center"].clone(), "axis": splits[i]["axis"].clone()},
                    {"center": splits[j]["center"].clone(), "axis": splits[j]["axis"].clone()},
                ],
                "third": {"center": splits[k]["center"].clone(), "axis": splits[k]["axis"].clone()},
                "extension_degree": 1,
                "factors": trio
                    .iter()
                    .map(|&t| curve_to_json(&CurveModel::Genus1(factors[t].0.clone())))
                    .collect::<Vec<_>>(),
                "l_curve": l_json(&l_curve),
                "l_factors": trio.iter().map(|&t| l_json(&factors[t].1)).collect::<Vec<_>>(),
                "certificate": if ok { "consistent" } else { "failed" },
            })
        }
        None => Value::Null,
    };

    Ok(json!({
        "schema_version": 1,
        "curve": curve_to_json(model),
        "kinds": kinds,
        "involutions": refs_json,
        "splits": splits,
        "complete": complete,
        "l_curve": l_json(&l_curve),
        "certificate_status": if all_ok { "consistent" } else { "failed" },
    }))
}

/// Run the whole pipeline on one curve and return the report.
///
/// `extend` permits quotient construction over a quadratic extension when
/// an involution's fixed points are conjugate; without it such splits are
/// reported with status "needs_extension" and carry no certificate.
pub fn analyze(model: &CurveModel, extend: bool) -> Result<Value, DecomposeError> {
    match model {
        CurveModel::Hyperelliptic(dc) => analyze_hyper(model, dc, extend),
        CurveModel::Quartic(pq) => analyze_quartic(model, pq),
        other => Err(DecomposeError::Unsupported(other.kind())),
    }
}

/// The witness that the curve is a Howe curve: the first commuting pair of
/// distinct involutions, with their product as the third Klein element.
pub fn detect_howe(model: &CurveModel) -> Result<Option<Value>, DecomposeError> {
    match model {
        CurveModel::Hyperelliptic(dc) => {
            let inv = involution::hyper_involutions(dc);
            let classes = kept_classes(&inv);
            Ok(commuting_pair(&classes, dc.field()).map(|(i, j, third)| {
                json!({
                    "pair": [mat2_json(&classes[i]), mat2_json(&classes[j])],
                    "third": mat2_json(&third),
                })
            }))
        }
        CurveModel::Quartic(pq) => {
            let refs = involution::quartic_reflections(pq)?;
            Ok(commuting_reflections(&refs, pq.field()).map(|(i, j, k)| {
                let id = |r: &QuarticReflection| {
                    json!({
                        "center": [je(&r.center[0]), je(&r.center[1]), je(&r.center[2])],
                        "axis": [je(&r.axis[0]), je(&r.axis[1]), je(&r.axis[2])],
                    })
                };
                json!({"pair": [id(&refs[i]), id(&refs[j])], "third": id(&refs[k])})
            }))
        }
        other => Err(DecomposeError::Unsupported(other.kind())),
    }
}

/// Involution listing for the CLI, without quotients or certificates.
pub fn involution_survey(model: &CurveModel) -> Result<Value, DecomposeError> {
    match involution::involutions(model)? {
        Involutions::Hyperelliptic(inv) => Ok(json!({
            "schema_version": 1,
            "curve": curve_to_json(model),
            "involutions": inv.lifts.iter().map(hyper_lift_json).collect::<Vec<_>>(),
            "order_four": inv.order_four.iter().map(mat2_json).collect::<Vec<_>>(),
        })),
        Involutions::Quartic(refs) => Ok(json!({
            "schema_version": 1,
            "curve": curve_to_json(model),
            "involutions": refs.iter().map(reflection_json).collect::<Vec<_>>(),
        })),
    }
}

/// Quotient constructions for the CLI, without L-polynomial certificates.
pub fn quotient_survey(model: &CurveModel, extend: bool) -> Result<Value, DecomposeError> {
    match model {
        CurveModel::Hyperelliptic(dc) => {
            let inv = involution::hyper_involutions(dc);
            let mut quotients = Vec::new();
            for m in kept_classes(&inv) {
                match quotient::hyper_quotients(dc, &m, extend) {
                    Ok(hq) => quotients.push(json!({
                        "mobius": mat2_json(&hq.mobius),
                        "extension_degree": hq.extension_degree,
                        "fixed_points": [
                            point_json(&hq.fixed_points[0]),
                            point_json(&hq.fixed_points[1]),
                        ],
                        "transform": mat2_json(&hq.transform),
                        "even_octic": poly_to_json(&hq.even_octic),
                        "elliptic": curve_to_json(&CurveModel::Genus1(hq.elliptic.clone())),
                        "genus_two": curve_to_json(&CurveModel::Genus2(hq.genus_two.clone())),
                    })),
                    Err(QuotientError::NeedsExtension) => {
                        quotients.push(json!({"mobius": mat2_json(&m), "status": "needs_extension"}));
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(json!({
                "schema_version": 1,
                "curve": curve_to_json(model),
                "quotients": quotients,
            }))
        }
        CurveModel::Quartic(pq) => {
            let refs = involution::quartic_reflections(pq)?;
            let mut quotients = Vec::new();
            for r in &refs {
                let qq = quotient::quartic_quotient(pq, r)?;
                quotients.push(json!({
                    "center": [je(&r.center[0]), je(&r.center[1]), je(&r.center[2])],
                    "axis": [je(&r.axis[0]), je(&r.axis[1]), je(&r.axis[2])],
                    "transform": mat3_json(&qq.transform),
                    "elliptic": curve_to_json(&CurveModel::Genus1(qq.elliptic.clone())),
                }));
            }
            Ok(json!({
                "schema_version": 1,
                "curve": curve_to_json(model),
                "quotients": quotients,
            }))
        }
        CurveModel::Howe(sys) => {
            let r = sys.shared_degree();
            let quotients = if r == 2 {
                let trio = quotient::howe_quotients(sys)?;
                json!({
                    "e1": curve_to_json(&CurveModel::Genus1(trio.e1.clone())),
                    "e2": curve_to_json(&CurveModel::Genus1(trio.e2.clone())),
                    "e3": curve_to_json(&CurveModel::Genus1(trio.e3.clone())),
                })
            } else {
                Value::Null
            };
            Ok(json!({
                "schema_version": 1,
                "curve": curve_to_json(model),
                "genus": sys.genus(),
                "shared_degree": r,
                "branch_count": quotient::howe_branch_count(sys),
                "quotients": quotients,
            }))
        }
        other => Err(DecomposeError::Unsupported(other.kind())),
    }
}

fn reparse_model(v: &Value, what: &str) -> Result<CurveModel, String> {
    parse_curve(&v.to_string()).map_err(|e| format!("{what} does not reparse: {e}"))
}

fn reparse_l(v: &Value, what: &str) -> Result<LPolynomial, String> {
    let q = v
        .get("q")
        .and_then(Value::as_u64)
        .ok_or_else(|| format!("{what} has no q"))?;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| format!("{what} has no coefficients"))?;
    let ints: Vec<_> = coeffs
        .iter()
        .map(|c| c.as_i64().map(Into::into))
        .collect::<Option<_>>()
        .ok_or_else(|| format!("{what} has non-integer coefficients"))?;
    if ints.len() % 2 == 0 || ints.len() < 3 {
        return Err(format!("{what} has {} coefficients, expected 2g+1", ints.len()));
    }
    let genus = (ints.len() - 1) / 2;
    LPolynomial::from_coeffs(q, genus, ints).map_err(|e| format!("{what}: {e}"))
}

fn recount(model: &CurveModel, what: &str) -> Result<LPolynomial, String> {
    zeta::l_polynomial(model).map_err(|e| format!("recount of {what}: {e}"))
}

fn check_recorded(recorded: &Value, fresh: &LPolynomial, what: &str) -> Result<(), String> {
    let rec = reparse_l(recorded, what)?;
    if rec != *fresh {
        return Err(format!(
            "{what} was recorded as {:?} but recounts to {:?}",
            rec.coeffs(),
            fresh.coeffs()
        ));
    }
    Ok(())
}

fn curve_l_over(
    model: &CurveModel,
    q: u64,
    d: usize,
    cache: &mut Option<LPolynomial>,
) -> Result<LPolynomial, String> {
    if d == 1 {
        if cache.is_none() {
            *cache = Some(recount(model, "the curve")?);
        }
        return Ok(cache.clone().unwrap());
    }
    extended_l(model, q, d).map_err(|e| format!("recount of the curve base change: {e}"))
}

/// Re-derive every certified identity in a report from scratch: reparse the
/// embedded models, recount all point numbers, refit the L-polynomials, and
/// compare against both the recorded values and the claimed identities.
pub fn verify_certificate(report: &Value) -> Result<(), String> {
    let curve_v = report
        .get("curve")
        .ok_or_else(|| "report has no curve".to_string())?;
    let model = reparse_model(curve_v, "the curve")?;
    let q = model
        .field()
        .size()
        .ok_or_else(|| "curve field is too large to recount".to_string())?;
    let mut cache: Option<LPolynomial> = None;

    for (idx, s) in report
        .get("splits")
        .and_then(Value::as_array)
        .into_iter()
        .flatten()
        .enumerate()
    {
        if s.get("status").is_some() {
            continue;
        }
        let tag = format!("split {idx}");
        match &model {
            CurveModel::Hyperelliptic(_) => {
                let d = s
                    .get("extension_degree")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| format!("{tag} has no extension degree"))? as usize;
                let e = reparse_model(&s["elliptic"], &tag)?;
                let g = reparse_model(&s["genus_two"], &tag)?;
                let le = recount(&e, &format!("{tag} elliptic factor"))?;
                let lg = recount(&g, &format!("{tag} genus-2 factor"))?;
                let lc = curve_l_over(&model, q, d, &mut cache)?;
                check_recorded(&s["l_elliptic"], &le, &format!("{tag} L_E"))?;
                check_recorded(&s["l_genus_two"], &lg, &format!("{tag} L_G2"))?;
                let prod = le.mul(&lg);
                if prod != lc {
                    return Err(format!(
                        "{tag}: L_C = {:?} but L_E * L_G2 = {:?}",
                        lc.coeffs(),
                        prod.coeffs()
                    ));
                }
            }
            CurveModel::Quartic(_) => {
                let e = reparse_model(&s["elliptic"], &tag)?;
                let le = recount(&e, &format!("{tag} elliptic factor"))?;
                let lc = curve_l_over(&model, q, 1, &mut cache)?;
                check_recorded(&s["l_elliptic"], &le, &format!("{tag} L_E"))?;
                let la = lc
                    .divide(&le)
                    .map_err(|e| format!("{tag}: L_E does not divide L_C: {e}"))?;
                check_recorded(&s["l_complement"], &la, &format!("{tag} L_A"))?;
                if s.get("multiplicity").and_then(Value::as_u64) != Some(3) {
                    return Err(format!("{tag} does not record multiplicity 3"));
                }
            }
            _ => return Err("report is for an unsupported model".to_string()),
        }
    }

    let complete = report.get("complete").filter(|v| !v.is_null());
    if let Some(c) = complete {
        if c.get("status").is_none() {
            let d = c
                .get("extension_degree")
                .and_then(Value::as_u64)
                .ok_or_else(|| "complete payload has no extension degree".to_string())?
                as usize;
            let facts = c
                .get("factors")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 3)
                .ok_or_else(|| "complete payload needs three factors".to_string())?;
            let mut ls = Vec::new();
            for (t, fv) in facts.iter().enumerate() {
                let tag = format!("complete factor {t}");
                let e = reparse_model(fv, &tag)?;
                let le = recount(&e, &tag)?;
                check_recorded(&c["l_factors"][t], &le, &tag)?;
                ls.push(le);
            }
            let lc = curve_l_over(&model, q, d, &mut cache)?;
            let prod = ls[0].mul(&ls[1]).mul(&ls[2]);
            if prod != lc {
                return Err(format!(
                    "complete: L_C = {:?} but the factor product is {:?}",
                    lc.coeffs(),
                    prod.coeffs()
                ));
            }
        }
    }

    if let Some(lv) = report.get("l_curve").filter(|v| !v.is_null()) {
        let lc = curve_l_over(&model, q, 1, &mut cache)?;
        check_recorded(lv, &lc, "L_C")?;
    }
    Ok(())
}
