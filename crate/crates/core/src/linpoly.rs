//! q-polynomials `f(x) = sum_{i<n} a_i x^{q^i}` over F_{q^n}.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FpLinearMap, FqnElem};
use crate::fp::FpMat;
use crate::vecspace;

/// A q-polynomial of q-degree less than n, stored as its n coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinPoly {
    coeffs: Vec<FqnElem>,
}

impl LinPoly {
    pub fn new(ctx: &FieldCtx, coeffs: Vec<FqnElem>) -> Result<Self> {
        if coeffs.len() != ctx.n() {
            return Err(Error::DegreeMismatch(format!("expected {} coefficients, got {}", ctx.n(), coeffs.len())));
        }
        Ok(LinPoly { coeffs })
    }

    pub fn from_encodings(ctx: &FieldCtx, enc: &[u64]) -> Result<Self> {
        let coeffs = enc.iter().map(|&e| ctx.elem(e)).collect::<Result<Vec<_>>>()?;
        Self::new(ctx, coeffs)
    }

    /// Builds from (q-exponent, coefficient) pairs; exponents are reduced mod n.
    pub fn from_terms(ctx: &FieldCtx, terms: &[(usize, FqnElem)]) -> Self {
        let mut c = vec![FqnElem::ZERO; ctx.n()];
        for &(i, a) in terms {
            let i = i % ctx.n();
            c[i] = ctx.add(c[i], a);
        }
        LinPoly { coeffs: c }
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        LinPoly { coeffs: vec![FqnElem::ZERO; ctx.n()] }
    }

    pub fn monomial(ctx: &FieldCtx, i: usize, c: FqnElem) -> Self {
        Self::from_terms(ctx, &[(i, c)])
    }

    /// The identity map `x`.
    pub fn identity(ctx: &FieldCtx) -> Self {
        Self::monomial(ctx, 0, FqnElem::ONE)
    }

    pub fn coeffs(&self) -> &[FqnElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FqnElem {
        self.coeffs[i % self.coeffs.len()]
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn encodings(&self, ctx: &FieldCtx) -> Vec<u64> {
        self.coeffs.iter().map(|&c| ctx.encode(c)).collect()
    }

    pub fn eval(&self, ctx: &FieldCtx, x: FqnElem) -> FqnElem {
        let mut acc = FqnElem::ZERO;
        for (i, &a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                acc = ctx.add(acc, ctx.mul(a, ctx.frob(x, i)));
            }
        }
        acc
    }

    /// The polynomial as an F_p-linear map.
    pub fn compile(&self, ctx: &FieldCtx) -> FpLinearMap {
        let cols: Vec<FqnElem> = (0..ctx.degree()).map(|i| self.eval(ctx, ctx.t_pow(i))).collect();
        FpLinearMap::from_columns(ctx, &cols)
    }

    pub fn add(&self, ctx: &FieldCtx, g: &LinPoly) -> LinPoly {
        LinPoly { coeffs: self.coeffs.iter().zip(&g.coeffs).map(|(&a, &b)| ctx.add(a, b)).collect() }
    }

    pub fn sub(&self, ctx: &FieldCtx, g: &LinPoly) -> LinPoly {
        LinPoly { coeffs: self.coeffs.iter().zip(&g.coeffs).map(|(&a, &b)| ctx.sub(a, b)).collect() }
    }

    /// `c * f(x)`.
    pub fn scale(&self, ctx: &FieldCtx, c: FqnElem) -> LinPoly {
        LinPoly { coeffs: self.coeffs.iter().map(|&a| ctx.mul(c, a)).collect() }
    }

    /// `f ∘ g`.
    pub fn compose(&self, ctx: &FieldCtx, g: &LinPoly) -> LinPoly {
        let n = ctx.n();
        let mut c = vec![FqnElem::ZERO; n];
        for (i, &fi) in self.coeffs.iter().enumerate() {
            if fi.is_zero() {
                continue;
            }
            for (j, &gj) in g.coeffs.iter().enumerate() {
                if gj.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                c[k] = ctx.add(c[k], ctx.mul(fi, ctx.frob(gj, i)));
            }
        }
        LinPoly { coeffs: c }
    }

    /// Adjoint with respect to the trace bilinear form.
    pub fn adjoint(&self, ctx: &FieldCtx) -> LinPoly {
        let n = ctx.n();
        let mut c = vec![FqnElem::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let k = (n - i) % n;
            c[k] = ctx.frob(a, k);
        }
        LinPoly { coeffs: c }
    }

    /// `x^{q^s} ∘ f`, i.e. coefficient `a_i^{q^s}` moved to position `i+s`.
    pub fn twist(&self, ctx: &FieldCtx, s: i64) -> LinPoly {
        let n = ctx.n() as i64;
        let s = s.rem_euclid(n) as usize;
        let mut c = vec![FqnElem::ZERO; ctx.n()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            c[(i + s) % ctx.n()] = ctx.frob(a, s);
        }
        LinPoly { coeffs: c }
    }

    /// Applies `x ↦ x^{p^j}` to every coefficient.
    pub fn frob_coeffs(&self, ctx: &FieldCtx, j: usize) -> LinPoly {
        LinPoly { coeffs: self.coeffs.iter().map(|&a| ctx.frob_p(a, j)).collect() }
    }

    /// Dimension over F_q of the kernel.
    pub fn kernel_dim(&self, ctx: &FieldCtx) -> usize {
        ctx.n() - self.compile(ctx).rank() / ctx.h()
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        ctx.n() - self.kernel_dim(ctx)
    }

    pub fn is_invertible(&self, ctx: &FieldCtx) -> bool {
        self.kernel_dim(ctx) == 0
    }

    /// Matrix over F_q in the basis `1, t, ..., t^{n-1}`; column j holds f(t^j).
    pub fn matrix_over_fq(&self, ctx: &FieldCtx) -> Vec<Vec<FqnElem>> {
        let n = ctx.n();
        let cols: Vec<Vec<FqnElem>> = ctx.fq_basis().iter().map(|&b| ctx.fq_coords(self.eval(ctx, b))).collect();
        (0..n).map(|r| (0..n).map(|c| cols[c][r]).collect()).collect()
    }

    /// Dickson matrix `D_ij = a_{j-i}^{q^i}`.
    pub fn dickson_matrix(&self, ctx: &FieldCtx) -> Vec<Vec<FqnElem>> {
        let n = ctx.n();
        (0..n).map(|i| (0..n).map(|j| ctx.frob(self.coeffs[(j + n - i) % n], i)).collect()).collect()
    }

    /// Unique q-polynomial with `f(xs[i]) = ys[i]`, given an F_q-basis `xs`.
    pub fn interpolate(ctx: &FieldCtx, xs: &[FqnElem], ys: &[FqnElem]) -> Result<LinPoly> {
        let n = ctx.n();
        if xs.len() != n || ys.len() != n {
            return Err(Error::InvalidParameter("interpolation needs n points".into()));
        }
        let moore: Vec<Vec<FqnElem>> = xs.iter().map(|&x| (0..n).map(|l| ctx.frob(x, l)).collect()).collect();
        if vecspace::rank(ctx, &moore) < n {
            return Err(Error::InvalidParameter("interpolation points are F_q-dependent".into()));
        }
        let a = vecspace::solve(ctx, &moore, ys).expect("Moore matrix is invertible");
        Ok(LinPoly { coeffs: a })
    }
}

/// F_p-basis of the common kernel of the given polynomials.
pub fn common_kernel(ctx: &FieldCtx, fs: &[LinPoly]) -> Vec<FqnElem> {
    let d = ctx.degree();
    let mut m = FpMat::zeros(ctx.p(), d * fs.len(), d);
    for (k, f) in fs.iter().enumerate() {
        let map = f.compile(ctx);
        for c in 0..d {
            let col = ctx.digits(map.column(c));
            for (r, v) in col.into_iter().enumerate() {
                m.set(k * d + r, c, v);
            }
        }
    }
    m.kernel().into_iter().map(|v| ctx.from_digits(&v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn ctx() -> &'static FieldCtx {
        static C: OnceLock<FieldCtx> = OnceLock::new();
        C.get_or_init(|| FieldCtx::new(3, 1, 4, None).unwrap())
    }

    fn ctx2() -> &'static FieldCtx {
        static C: OnceLock<FieldCtx> = OnceLock::new();
        C.get_or_init(|| FieldCtx::new(2, 2, 3, None).unwrap())
    }

    fn poly_strategy(c: &'static FieldCtx) -> impl Strategy<Value = LinPoly> {
        let order = c.order() as u64;
        proptest::collection::vec(0..order, c.n()).prop_map(move |v| LinPoly::from_encodings(c, &v).unwrap())
    }

    fn trace_form(c: &FieldCtx, x: FqnElem, y: FqnElem) -> FqnElem {
        c.trace(c.mul(x, y))
    }

    proptest! {
        #[test]
        fn compose_is_functional(f in poly_strategy(ctx()), g in poly_strategy(ctx()), x in 0u64..81) {
            let c = ctx();
            let x = c.elem(x).unwrap();
            prop_assert_eq!(f.compose(c, &g).eval(c, x), f.eval(c, g.eval(c, x)));
        }

        #[test]
        fn compose_associative(f in poly_strategy(ctx()), g in poly_strategy(ctx()), h in poly_strategy(ctx())) {
            let c = ctx();
            prop_assert_eq!(f.compose(c, &g).compose(c, &h), f.compose(c, &g.compose(c, &h)));
        }

        #[test]
        fn adjoint_involution_and_form(f in poly_strategy(ctx()), x in 0u64..81, y in 0u64..81) {
            let c = ctx();
            let (x, y) = (c.elem(x).unwrap(), c.elem(y).unwrap());
            prop_assert_eq!(f.adjoint(c).adjoint(c), f.clone());
            prop_assert_eq!(trace_form(c, f.eval(c, x), y), trace_form(c, x, f.adjoint(c).eval(c, y)));
        }

        #[test]
        fn adjoint_over_nonprime_q(f in poly_strategy(ctx2()), x in 0u64..64, y in 0u64..64) {
            let c = ctx2();
            let (x, y) = (c.elem(x).unwrap(), c.elem(y).unwrap());
            prop_assert_eq!(trace_form(c, f.eval(c, x), y), trace_form(c, x, f.adjoint(c).eval(c, y)));
            prop_assert_eq!(f.adjoint(c).kernel_dim(c), f.kernel_dim(c));
        }

        #[test]
        fn twist_compose_rule(f in poly_strategy(ctx()), g in poly_strategy(ctx()), s in 0i64..8) {
            let c = ctx();
            prop_assert_eq!(f.compose(c, &g).twist(c, s), f.twist(c, s).compose(c, &g));
            prop_assert_eq!(f.twist(c, s).twist(c, -s), f.clone());
        }

        #[test]
        fn kernel_dim_matches_dickson_and_fq_matrix(f in poly_strategy(ctx())) {
            let c = ctx();
            let k = f.kernel_dim(c);
            prop_assert_eq!(c.n() - vecspace::rank(c, &f.dickson_matrix(c)), k);
            prop_assert_eq!(c.n() - vecspace::rank(c, &f.matrix_over_fq(c)), k);
            let zeros = c.elements().filter(|&x| f.eval(c, x).is_zero()).count();
            prop_assert_eq!(zeros as u64, 3u64.pow(k as u32));
        }

        #[test]
        fn compiled_matches_eval(f in poly_strategy(ctx2()), x in 0u64..64) {
            let c = ctx2();
            let x = c.elem(x).unwrap();
            prop_assert_eq!(f.compile(c).apply(x), f.eval(c, x));
        }
    }

    #[test]
    fn kernel_dim_over_nonprime_q_by_enumeration() {
        let c = ctx2();
        let els: Vec<FqnElem> = c.elements().collect();
        for k in 0..300usize {
            let f = LinPoly::new(c, (0..3).map(|i| els[(k * 7 + i * 13 + k / 3) % 64]).collect()).unwrap();
            let zeros = els.iter().filter(|&&x| f.eval(c, x).is_zero()).count();
            assert_eq!(zeros, 4usize.pow(f.kernel_dim(c) as u32));
        }
    }

    #[test]
    fn interpolation_roundtrip() {
        let c = ctx();
        let f = LinPoly::from_encodings(c, &[3, 17, 0, 50]).unwrap();
        let xs = c.fq_basis();
        let ys: Vec<FqnElem> = xs.iter().map(|&x| f.eval(c, x)).collect();
        assert_eq!(LinPoly::interpolate(c, &xs, &ys).unwrap(), f);
    }

    #[test]
    fn common_kernel_dimension() {
        let c = ctx();
        let f = LinPoly::from_terms(c, &[(1, FqnElem::ONE), (0, c.neg(FqnElem::ONE))]);
        let k = common_kernel(c, &[f.clone()]);
        assert_eq!(k.len(), 1);
        assert!(c.in_subfield(k[0]));
        let g = LinPoly::identity(c);
        assert!(common_kernel(c, &[f, g]).is_empty());
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(matches!(LinPoly::from_encodings(ctx(), &[1, 2]), Err(Error::DegreeMismatch(_))));
    }
}
