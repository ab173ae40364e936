//! Text and JSON forms of field descriptors, elements, polynomials, subspaces and codes.

use scatlab::geometry::ProjSubspace;
use scatlab::{Error, FieldCtx, FieldDescriptor, FqnElem, LinPoly, Result};
use serde_json::{json, Value};

fn perr(at: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Parse { at: at.into(), msg: msg.into() }
}

fn json_err(e: serde_json::Error) -> Error {
    perr(format!("line {} column {}", e.line(), e.column()), e.to_string())
}

/// Accepts a JSON descriptor or `key=value` pairs: `q=25,n=6`, `p=5,h=2,n=6`, `modulus=1+2x+x^2`.
pub fn parse_field(s: &str) -> Result<FieldDescriptor> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(json_err);
    }
    let (mut p, mut h, mut n, mut q, mut modulus) = (None, None, None, None, None);
    let mut offset = 0;
    for part in s.split(',') {
        let at = format!("offset {offset}");
        offset += part.len() + 1;
        let (k, v) = part.split_once('=').ok_or_else(|| perr(&at, format!("expected key=value, got {part:?}")))?;
        let num = || v.trim().parse::<u64>().map_err(|_| perr(&at, format!("{k} must be a non-negative integer")));
        match k.trim() {
            "p" => p = Some(num()?),
            "h" => h = Some(num()? as u32),
            "n" => n = Some(num()? as u32),
            "q" => q = Some(num()?),
            "modulus" => {
                modulus = Some(
                    v.split(':')
                        .map(|c| c.trim().parse::<u64>().map_err(|_| perr(&at, "modulus coefficients are ':'-separated integers")))
                        .collect::<Result<Vec<u64>>>()?,
                )
            }
            other => return Err(perr(&at, format!("unknown key {other:?}"))),
        }
    }
    if let Some(q) = q {
        let (pp, hh) = prime_power(q).ok_or_else(|| perr("q", format!("{q} is not a prime power")))?;
        if p.is_some_and(|x| x != pp) || h.is_some_and(|x| x != hh) {
            return Err(perr("q", "q disagrees with p and h"));
        }
        p = Some(pp);
        h = Some(hh);
    }
    let p = p.ok_or_else(|| perr("field", "missing p or q"))?;
    let n = n.ok_or_else(|| perr("field", "missing n"))?;
    Ok(FieldDescriptor { p, h: h.unwrap_or(1), n, modulus, fq_basis: None })
}

/// `(p, h)` with `q = p^h`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut r, mut h) = (q, 0);
    while r % p == 0 {
        r /= p;
        h += 1;
    }
    (r == 1).then_some((p, h))
}

pub fn field_from_str(s: &str) -> Result<FieldCtx> {
    FieldCtx::from_descriptor(&parse_field(s)?)
}

pub fn parse_elem(ctx: &FieldCtx, v: &Value, at: &str) -> Result<FqnElem> {
    match v {
        Value::Number(num) => {
            if let Some(u) = num.as_u64() {
                ctx.elem(u).map_err(|e| perr(at, e.to_string()))
            } else if let Some(i) = num.as_i64() {
                // Negative integers denote prime field elements.
                Ok(ctx.from_fp(i))
            } else {
                Err(perr(at, "element must be an integer"))
            }
        }
        _ => Err(perr(at, "element must be an integer")),
    }
}

fn poly_from_value(ctx: &FieldCtx, v: &Value, at: &str) -> Result<LinPoly> {
    match v {
        Value::Array(items) => {
            if items.len() != ctx.n() {
                return Err(perr(at, format!("expected {} coefficients, got {}", ctx.n(), items.len())));
            }
            let c = items
                .iter()
                .enumerate()
                .map(|(i, x)| parse_elem(ctx, x, &format!("{at}[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            LinPoly::new(ctx, c)
        }
        Value::String(s) => parse_terms(ctx, s).map_err(|e| match e {
            Error::Parse { at: a, msg } => perr(format!("{at}: {a}"), msg),
            other => other,
        }),
        _ => Err(perr(at, "polynomial must be an array of encodings or a term string")),
    }
}

/// A JSON coefficient array or a term string such as `x^q - x^q^2 + 3*x^{q^4} + [7]x^q^5`.
pub fn parse_poly(ctx: &FieldCtx, s: &str) -> Result<LinPoly> {
    let t = s.trim();
    if t.starts_with('[') && t.ends_with(']') && serde_json::from_str::<Value>(t).is_ok() {
        let v: Value = serde_json::from_str(t).map_err(json_err)?;
        return poly_from_value(ctx, &v, "polynomial");
    }
    parse_terms(ctx, t)
}

fn parse_terms(ctx: &FieldCtx, s: &str) -> Result<LinPoly> {
    let bytes: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut terms = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_whitespace() {
            *i += 1;
        }
    };
    let mut first = true;
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() {
            break;
        }
        let mut sign = 1i64;
        if bytes[i] == '+' || bytes[i] == '-' {
            if bytes[i] == '-' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !first {
            return Err(perr(format!("offset {i}"), "expected '+' or '-'"));
        }
        first = false;
        // Coefficient: integer (prime field) or [encoding].
        let mut coeff = FqnElem::ONE;
        if i < bytes.len() && bytes[i] == '[' {
            let start = i;
            let end = bytes[i..].iter().position(|&c| c == ']').ok_or_else(|| perr(format!("offset {start}"), "unclosed '['"))? + i;
            let txt: String = bytes[i + 1..end].iter().collect();
            let enc = txt.trim().parse::<u64>().map_err(|_| perr(format!("offset {start}"), "bad encoding"))?;
            coeff = ctx.elem(enc).map_err(|e| perr(format!("offset {start}"), e.to_string()))?;
            i = end + 1;
        } else if i < bytes.len() && bytes[i].is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = bytes[start..i].iter().collect();
            let k = txt.parse::<i64>().map_err(|_| perr(format!("offset {start}"), "bad integer"))?;
            coeff = ctx.from_fp(k);
        }
        skip_ws(&mut i);
        if i < bytes.len() && bytes[i] == '*' {
            i += 1;
            skip_ws(&mut i);
        }
        if i >= bytes.len() || bytes[i] != 'x' {
            return Err(perr(format!("offset {i}"), "expected 'x'"));
        }
        i += 1;
        let mut exp = 0usize;
        if i < bytes.len() && bytes[i] == '^' {
            i += 1;
            let braced = i < bytes.len() && bytes[i] == '{';
            if braced {
                i += 1;
            }
            if i >= bytes.len() || bytes[i] != 'q' {
                return Err(perr(format!("offset {i}"), "expected 'q' in exponent"));
            }
            i += 1;
            exp = 1;
            if i < bytes.len() && bytes[i] == '^' {
                i += 1;
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let txt: String = bytes[start..i].iter().collect();
                exp = txt.parse().map_err(|_| perr(format!("offset {start}"), "expected exponent digits"))?;
            }
            if braced {
                if i >= bytes.len() || bytes[i] != '}' {
                    return Err(perr(format!("offset {i}"), "expected '}'"));
                }
                i += 1;
            }
        }
        if exp >= ctx.n() {
            return Err(perr(format!("offset {i}"), format!("exponent {exp} must be below n={}", ctx.n())));
        }
        terms.push((exp, if sign < 0 { ctx.neg(coeff) } else { coeff }));
    }
    if terms.is_empty() {
        return Err(perr("offset 0", "empty polynomial"));
    }
    Ok(LinPoly::from_terms(ctx, &terms))
}

pub fn poly_to_json(ctx: &FieldCtx, f: &LinPoly) -> Value {
    json!(f.encodings(ctx))
}

/// Human form, e.g. `x^q + 4*x^{q^2}`; coefficients outside F_p are bracketed encodings.
pub fn poly_to_string(ctx: &FieldCtx, f: &LinPoly) -> String {
    let mut out = String::new();
    for (i, &c) in f.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mon = match i {
            0 => "x".to_string(),
            1 => "x^q".to_string(),
            _ => format!("x^{{q^{i}}}"),
        };
        let coef = if c == FqnElem::ONE {
            String::new()
        } else if ctx.in_prime_field(c) {
            format!("{}*", ctx.encode(c))
        } else {
            format!("[{}]", ctx.encode(c))
        };
        if !out.is_empty() {
            out.push_str(" + ");
        }
        out.push_str(&coef);
        out.push_str(&mon);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A JSON array of polynomials, each an array or a term string.
pub fn parse_polys(ctx: &FieldCtx, s: &str) -> Result<Vec<LinPoly>> {
    let v: Value = serde_json::from_str(s).map_err(json_err)?;
    match v {
        Value::Array(items) => items.iter().enumerate().map(|(i, x)| poly_from_value(ctx, x, &format!("gens[{i}]"))).collect(),
        _ => Err(perr("gens", "expected a JSON array of polynomials")),
    }
}

fn vectors(ctx: &FieldCtx, v: &Value, at: &str) -> Result<Vec<Vec<FqnElem>>> {
    let rows = v.as_array().ok_or_else(|| perr(at, "expected an array of vectors"))?;
    rows.iter()
        .enumerate()
        .map(|(r, row)| {
            let row = row.as_array().ok_or_else(|| perr(format!("{at}[{r}]"), "expected an array"))?;
            if row.len() != ctx.n() {
                return Err(perr(format!("{at}[{r}]"), format!("expected {} entries", ctx.n())));
            }
            row.iter().enumerate().map(|(c, x)| parse_elem(ctx, x, &format!("{at}[{r}][{c}]"))).collect()
        })
        .collect()
}

/// `{"basis": [[...], ...]}` or `{"equations": [[...], ...]}`.
pub fn parse_subspace(ctx: &FieldCtx, s: &str) -> Result<ProjSubspace> {
    let v: Value = serde_json::from_str(s).map_err(json_err)?;
    if let Some(b) = v.get("basis") {
        Ok(ProjSubspace::from_basis(ctx, &vectors(ctx, b, "basis")?))
    } else if let Some(e) = v.get("equations") {
        Ok(ProjSubspace::from_equations(ctx, &vectors(ctx, e, "equations")?))
    } else {
        Err(perr("subspace", "expected a \"basis\" or \"equations\" key"))
    }
}

pub fn vec_to_json(ctx: &FieldCtx, v: &[FqnElem]) -> Value {
    json!(v.iter().map(|&x| ctx.encode(x)).collect::<Vec<_>>())
}

pub fn subspace_to_json(ctx: &FieldCtx, s: &ProjSubspace) -> Value {
    json!({
        "dim": s.dim(),
        "basis": s.basis().iter().map(|r| vec_to_json(ctx, r)).collect::<Vec<_>>(),
        "equations": s.equations(ctx).iter().map(|r| vec_to_json(ctx, r)).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_forms() {
        let d = parse_field("q=25,n=6").unwrap();
        assert_eq!((d.p, d.h, d.n), (5, 2, 6));
        let ctx = FieldCtx::from_descriptor(&d).unwrap();
        let back = parse_field(&serde_json::to_string(&ctx.descriptor()).unwrap()).unwrap();
        assert_eq!(back, ctx.descriptor());
        assert!(matches!(parse_field("q=12,n=2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_field("p=5,n"), Err(Error::Parse { .. })));
        let m = parse_field("p=2,n=3,modulus=1:1:0:1").unwrap();
        assert_eq!(m.modulus, Some(vec![1, 1, 0, 1]));
    }

    #[test]
    fn polynomial_forms() {
        let ctx = FieldCtx::new(5, 1, 6, None).unwrap();
        let f = parse_poly(&ctx, "x^q - x^q^2 + x^{q^4} + x^q^5").unwrap();
        assert_eq!(f.encodings(&ctx), vec![0, 1, 4, 0, 1, 1]);
        assert_eq!(parse_poly(&ctx, &poly_to_json(&ctx, &f).to_string()).unwrap(), f);
        assert_eq!(parse_poly(&ctx, &poly_to_string(&ctx, &f)).unwrap(), f);
        let g = parse_poly(&ctx, "[7]x^q + 2*x").unwrap();
        assert_eq!(g.encodings(&ctx), vec![2, 7, 0, 0, 0, 0]);
        assert_eq!(parse_poly(&ctx, &poly_to_string(&ctx, &g)).unwrap(), g);
        let too_big = format!("[{}, 0, 0, 0, 0, 0]", 5u64.pow(6));
        match parse_poly(&ctx, &too_big) {
            Err(Error::Parse { at, .. }) => assert_eq!(at, "polynomial[0]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly(&ctx, "x^q^7"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly(&ctx, "x^q x"), Err(Error::Parse { .. })));
        let gens = parse_polys(&ctx, r#"["x", [0,1,0,0,0,0]]"#).unwrap();
        assert_eq!(gens.len(), 2);
    }

    #[test]
    fn subspace_forms() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let s = parse_subspace(&ctx, r#"{"equations": [[1,0,0,0],[0,1,0,2]]}"#).unwrap();
        assert_eq!(s.dim(), 1);
        let j = subspace_to_json(&ctx, &s);
        let back = parse_subspace(&ctx, &json!({"basis": j["basis"]}).to_string()).unwrap();
        assert_eq!(back, s);
    }
}
