//! JSON renderings of library results.

use scatlab::equiv::{EquivVerdict, Witness};
use scatlab::linset::{LinePoint, ScatterVerdict, WeightSpectrum};
use scatlab::rmcode::{Idealiser, TwistedAttempt};
use scatlab::{FieldCtx, FqnElem};
use serde_json::{json, Value};

use crate::parse::{poly_to_json, vec_to_json};

pub fn elem(ctx: &FieldCtx, x: FqnElem) -> Value {
    json!(ctx.encode(x))
}

pub fn field(ctx: &FieldCtx) -> Value {
    // The descriptor carries the modulus and the F_q-basis.
    json!({"descriptor": ctx.descriptor()})
}

pub fn scatter(ctx: &FieldCtx, v: &ScatterVerdict) -> Value {
    match v {
        ScatterVerdict::Scattered => json!({"verdict": "scattered"}),
        ScatterVerdict::NotScattered { witness, weight } => {
            json!({"verdict": "not_scattered", "witness": elem(ctx, *witness), "weight": weight})
        }
    }
}

pub fn spectrum(s: &WeightSpectrum) -> Value {
    json!({
        "rank": s.rank,
        "size": s.size(),
        "max_weight": s.max_weight(),
        "counts": s.counts.iter().map(|(w, c)| (w.to_string(), json!(c))).collect::<serde_json::Map<_, _>>(),
    })
}

pub fn line_point(ctx: &FieldCtx, p: &LinePoint) -> Value {
    match p {
        LinePoint::Affine(m) => json!(["affine", ctx.encode(*m)]),
        LinePoint::Infinity => json!(["infinity"]),
    }
}

pub fn witness(ctx: &FieldCtx, w: &Witness) -> Value {
    json!({
        "sigma_p_power": w.sigma,
        "a": elem(ctx, w.a),
        "b": elem(ctx, w.b),
        "c": elem(ctx, w.c),
        "d": elem(ctx, w.d),
        "det": elem(ctx, w.det(ctx)),
        "adjoint": w.adjoint,
    })
}

pub fn equiv(ctx: &FieldCtx, v: &EquivVerdict) -> Value {
    json!({
        "status": v.status,
        "one_sided": v.one_sided,
        "witnesses": v.witnesses.iter().map(|w| witness(ctx, w)).collect::<Vec<_>>(),
        "search_log": v.search_log,
    })
}

pub fn idealiser(ctx: &FieldCtx, i: &Idealiser) -> Value {
    json!({
        "dim_fq": i.dim_fq,
        "field_degree": i.field_degree,
        "basis": i.basis.iter().map(|b| poly_to_json(ctx, b)).collect::<Vec<_>>(),
    })
}

pub fn twisted(ctx: &FieldCtx, attempts: &[TwistedAttempt]) -> Value {
    json!(attempts
        .iter()
        .map(|a| json!({
            "s": a.s,
            "dims": [a.dims.0, a.dims.1],
            "match": a.matched.as_ref().map(|m| json!({
                "s": m.s,
                "eta": elem(ctx, m.eta),
                "p": poly_to_json(ctx, &m.p),
                "q": poly_to_json(ctx, &m.q),
            })),
        }))
        .collect::<Vec<_>>())
}

pub fn points(ctx: &FieldCtx, v: &[Vec<FqnElem>]) -> Value {
    json!(v.iter().map(|r| vec_to_json(ctx, r)).collect::<Vec<_>>())
}
