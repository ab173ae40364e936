//! Known maximum scattered subspaces of F_{q^6}^2 and the quadrinomial.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqnElem};
use crate::linpoly::LinPoly;

/// Parametrized families of maximum scattered graphs `{(x, f(x))}` in F_{q^6}^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `x^q`
    Pseudoregulus,
    /// `δ x^q + x^{q^5}` with `N(δ) ∉ {0,1}`
    LpBinomial,
    /// `δ x^q + x^{q^4}` with `N_{q^6/q^3}(δ) ∉ {0,1}`
    Binomial14,
    /// `x^q + x^{q^3} + δ x^{q^5}`, q odd, `δ^2 + δ = 1`
    Trinomial,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Pseudoregulus, Family::LpBinomial, Family::Binomial14, Family::Trinomial];

    pub fn label(self) -> &'static str {
        match self {
            Family::Pseudoregulus => "U1",
            Family::LpBinomial => "U2",
            Family::Binomial14 => "U3",
            Family::Trinomial => "U4",
        }
    }

    pub fn has_parameter(self) -> bool {
        self != Family::Pseudoregulus
    }

    /// Parameter condition. Only the norm condition is checked for `Binomial14`.
    pub fn is_valid(self, ctx: &FieldCtx, delta: FqnElem) -> bool {
        match self {
            Family::Pseudoregulus => true,
            Family::LpBinomial => {
                let nd = ctx.norm(delta);
                !nd.is_zero() && nd != FqnElem::ONE
            }
            Family::Binomial14 => {
                let nd = ctx.rel_norm(delta, 3);
                !nd.is_zero() && nd != FqnElem::ONE
            }
            Family::Trinomial => {
                ctx.p() != 2 && ctx.add(ctx.mul(delta, delta), delta) == FqnElem::ONE
            }
        }
    }

    pub fn instantiate(self, ctx: &FieldCtx, delta: FqnElem) -> Result<LinPoly> {
        if ctx.n() != 6 {
            return Err(Error::InvalidParameter(format!("catalog families live in F_{{q^6}}, got n={}", ctx.n())));
        }
        if !self.is_valid(ctx, delta) {
            return Err(Error::InvalidParameter(format!("δ={} violates the {} condition", ctx.encode(delta), self.label())));
        }
        let one = FqnElem::ONE;
        Ok(match self {
            Family::Pseudoregulus => LinPoly::monomial(ctx, 1, one),
            Family::LpBinomial => LinPoly::from_terms(ctx, &[(1, delta), (5, one)]),
            Family::Binomial14 => LinPoly::from_terms(ctx, &[(1, delta), (4, one)]),
            Family::Trinomial => LinPoly::from_terms(ctx, &[(1, one), (3, one), (5, delta)]),
        })
    }
}

/// Roots of `δ^2 + δ - 1` in F_{q^n}.
pub fn trinomial_parameters(ctx: &FieldCtx) -> Vec<FqnElem> {
    if ctx.p() == 2 {
        return Vec::new();
    }
    // δ = (-1 ± sqrt(5)) / 2, located by a square root search over F_{q^2} ⊆ F_{q^6}.
    let five = ctx.from_fp(5);
    let half = ctx.inv(ctx.from_fp(2));
    let mut out = Vec::new();
    if five.is_zero() {
        out.push(ctx.mul(ctx.neg(FqnElem::ONE), half));
        return out;
    }
    let r = sqrt(ctx, five).expect("5 is a square in F_{q^2}");
    for s in [r, ctx.neg(r)] {
        out.push(ctx.mul(ctx.sub(s, FqnElem::ONE), half));
    }
    out.sort_by_key(|&d| ctx.encode(d));
    out
}

fn sqrt(ctx: &FieldCtx, a: FqnElem) -> Option<FqnElem> {
    // Square roots of elements of F_p lie in F_{p^2}; search its elements x = u + v w.
    let fixed2: Vec<FqnElem> = {
        let mut basis = Vec::new();
        for x in ctx.elements() {
            if ctx.frob_p(x, 2) == x && !x.is_zero() && !ctx.in_prime_field(x) {
                basis.push(x);
                break;
            }
        }
        basis
    };
    let p = ctx.p() as i64;
    for u in 0..p {
        let uu = ctx.from_fp(u);
        if ctx.mul(uu, uu) == a {
            return Some(uu);
        }
        for w in &fixed2 {
            for v in 1..p {
                let x = ctx.add(uu, ctx.scale(*w, v));
                if ctx.mul(x, x) == a {
                    return Some(x);
                }
            }
        }
    }
    None
}

/// `x^q - x^{q^2} + x^{q^4} + x^{q^5}` over F_{q^6}.
pub fn quadrinomial(ctx: &FieldCtx) -> Result<LinPoly> {
    if ctx.n() != 6 {
        return Err(Error::InvalidParameter("the quadrinomial is defined for n = 6".into()));
    }
    let one = FqnElem::ONE;
    Ok(LinPoly::from_terms(ctx, &[(1, one), (2, ctx.neg(one)), (4, one), (5, one)]))
}

/// A generator of the multiplicative group of F_{q^n}.
pub fn primitive_element(ctx: &FieldCtx) -> FqnElem {
    let order = ctx.order() - 1;
    let factors = crate::fp::prime_factors(u64::try_from(order).expect("group order fits in u64"));
    ctx.elements()
        .skip(1)
        .find(|&x| factors.iter().all(|&r| ctx.pow(x, order / r as u128) != FqnElem::ONE))
        .expect("cyclic group has a generator")
}

fn gcd128(a: u128, b: u128) -> u128 {
    if b == 0 { a } else { gcd128(b, a % b) }
}

/// Valid parameters up to `δ ~ δ λ^{q^a - q^b}` and `δ ~ δ^p`, where `x^{q^a}`, `x^{q^b}`
/// are the two monomials of a binomial family. Trinomial parameters are returned as is.
pub fn delta_classes(ctx: &FieldCtx, family: Family) -> Vec<FqnElem> {
    let (a, b) = match family {
        Family::Pseudoregulus => return Vec::new(),
        Family::Trinomial => return trinomial_parameters(ctx).into_iter().filter(|&d| family.is_valid(ctx, d)).collect(),
        Family::LpBinomial => (1u32, 5u32),
        Family::Binomial14 => (1, 4),
    };
    let order = ctx.order() - 1;
    let q = ctx.q() as u128;
    let g = gcd128(q.pow(b) - q.pow(a), order);
    let alpha = primitive_element(ctx);
    let p = ctx.p() as u128;
    let mut out = Vec::new();
    for r in 0..g {
        let mut s = (r * p) % g;
        let mut minimal = true;
        while s != r {
            if s < r {
                minimal = false;
                break;
            }
            s = (s * p) % g;
        }
        if minimal {
            let d = ctx.pow(alpha, r);
            if family.is_valid(ctx, d) {
                out.push(d);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trinomial_parameter_at_five() {
        let ctx = FieldCtx::new(5, 1, 6, None).unwrap();
        let ds = trinomial_parameters(&ctx);
        assert_eq!(ds, vec![ctx.from_fp(2)]);
        assert!(Family::Trinomial.instantiate(&ctx, ctx.from_fp(2)).is_ok());
    }

    #[test]
    fn trinomial_parameters_are_roots() {
        for q in [3u64, 7, 13] {
            let ctx = FieldCtx::new(q, 1, 6, None).unwrap();
            let ds = trinomial_parameters(&ctx);
            assert_eq!(ds.len(), 2);
            for d in ds {
                assert!(Family::Trinomial.is_valid(&ctx, d));
            }
        }
    }

    #[test]
    fn validity_enforced() {
        let ctx = FieldCtx::new(3, 1, 6, None).unwrap();
        let one = FqnElem::ONE;
        assert!(matches!(Family::LpBinomial.instantiate(&ctx, one), Err(Error::InvalidParameter(_))));
        assert!(Family::Pseudoregulus.instantiate(&ctx, FqnElem::ZERO).is_ok());
        let small = FieldCtx::new(3, 1, 4, None).unwrap();
        assert!(quadrinomial(&small).is_err());
    }

    #[test]
    fn primitive_generates() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let a = primitive_element(&ctx);
        let mut seen = std::collections::HashSet::new();
        let mut x = FqnElem::ONE;
        for _ in 0..80 {
            seen.insert(x);
            x = ctx.mul(x, a);
        }
        assert_eq!(seen.len(), 80);
    }

    #[test]
    fn delta_classes_cover_all_parameters() {
        let ctx = FieldCtx::new(3, 1, 6, None).unwrap();
        for (fam, a, b) in [(Family::LpBinomial, 1usize, 5usize), (Family::Binomial14, 1, 4)] {
            let reps = delta_classes(&ctx, fam);
            // Every valid δ is δ_0 λ^{q^a - q^b} composed with a Frobenius power of some representative.
            let mut covered = std::collections::HashSet::new();
            for &r in &reps {
                for j in 0..ctx.degree() {
                    let rj = ctx.frob_p(r, j);
                    for lam in ctx.elements().skip(1) {
                        covered.insert(ctx.mul(rj, ctx.div(ctx.frob(lam, a), ctx.frob(lam, b))));
                    }
                }
            }
            for d in ctx.elements().filter(|&d| fam.is_valid(&ctx, d)) {
                assert!(covered.contains(&d));
            }
        }
    }
}
