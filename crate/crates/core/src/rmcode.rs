//! F_q-linear rank-metric codes inside the ring of q-polynomials modulo x^{q^n} - x.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqnElem};
use crate::fp::{FpMat, SmallFp};
use crate::geometry::gcd;
use crate::linpoly::LinPoly;
use crate::sweep::Budget;
use crate::vecspace::{self, Subspace};

/// An F_q-subspace of the q-polynomial ring, stored by a reduced F_p-basis.
#[derive(Clone, Debug)]
pub struct RmCode {
    fp: FpMat,
    left_linear: bool,
    gens: Vec<LinPoly>,
}

fn flatten(ctx: &FieldCtx, f: &LinPoly) -> Vec<u64> {
    f.coeffs().iter().flat_map(|&c| ctx.digits(c)).collect()
}

fn unflatten(ctx: &FieldCtx, row: &[u64]) -> LinPoly {
    let d = ctx.degree();
    LinPoly::new(ctx, row.chunks(d).map(|c| ctx.from_digits(c)).collect()).expect("n chunks")
}

impl RmCode {
    fn from_fp_rows(ctx: &FieldCtx, rows: Vec<Vec<u64>>) -> Self {
        let width = ctx.n() * ctx.degree();
        let fp = FpMat::from_rows(ctx.p(), width, &rows).row_basis();
        let mut code = RmCode { fp, left_linear: false, gens: Vec::new() };
        code.left_linear = code.closed_under_scalars(ctx);
        code.gens = if code.left_linear { code.fqn_basis(ctx) } else { code.fq_basis(ctx) };
        code
    }

    /// The F_{q^n}-span of `gens` (scalars acting on the left).
    pub fn fqn_span(ctx: &FieldCtx, gens: &[LinPoly]) -> Self {
        let mut rows = Vec::new();
        for g in gens {
            for e in 0..ctx.degree() {
                rows.push(flatten(ctx, &g.scale(ctx, ctx.t_pow(e))));
            }
        }
        Self::from_fp_rows(ctx, rows)
    }

    /// The F_q-span of `gens`.
    pub fn fq_span(ctx: &FieldCtx, gens: &[LinPoly]) -> Self {
        let mut rows = Vec::new();
        for g in gens {
            for &b in ctx.subfield_basis() {
                rows.push(flatten(ctx, &g.scale(ctx, b)));
            }
        }
        Self::from_fp_rows(ctx, rows)
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Self::from_fp_rows(ctx, Vec::new())
    }

    /// The whole ring.
    pub fn full(ctx: &FieldCtx) -> Self {
        let gens: Vec<LinPoly> = (0..ctx.n()).map(|i| LinPoly::monomial(ctx, i, FqnElem::ONE)).collect();
        Self::fqn_span(ctx, &gens)
    }

    fn closed_under_scalars(&self, ctx: &FieldCtx) -> bool {
        // t generates F_{q^n} as an F_p-algebra.
        let t = ctx.t_pow(1);
        (0..self.fp.nrows()).all(|r| {
            let f = unflatten(ctx, self.fp.row(r)).scale(ctx, t);
            self.contains(ctx, &f)
        })
    }

    fn greedy_basis(&self, ctx: &FieldCtx, scalars: &[FqnElem]) -> Vec<LinPoly> {
        let width = ctx.n() * ctx.degree();
        let mut span = FpMat::zeros(ctx.p(), 0, width);
        let mut out = Vec::new();
        for r in 0..self.fp.nrows() {
            if span.nrows() == self.fp.nrows() {
                break;
            }
            let f = unflatten(ctx, self.fp.row(r));
            let mut ext = span.clone();
            for &c in scalars {
                ext.push_row(&flatten(ctx, &f.scale(ctx, c)));
            }
            let ext = ext.row_basis();
            if ext.nrows() > span.nrows() {
                span = ext;
                out.push(f);
            }
        }
        out
    }

    fn fqn_basis(&self, ctx: &FieldCtx) -> Vec<LinPoly> {
        let mut rows: Vec<Vec<FqnElem>> = self.greedy_basis(ctx, &(0..ctx.degree()).map(|e| ctx.t_pow(e)).collect::<Vec<_>>())
            .into_iter()
            .map(|f| f.coeffs().to_vec())
            .collect();
        vecspace::rref(ctx, &mut rows);
        rows.into_iter().map(|r| LinPoly::new(ctx, r).expect("length n")).collect()
    }

    fn fq_basis(&self, ctx: &FieldCtx) -> Vec<LinPoly> {
        self.greedy_basis(ctx, ctx.subfield_basis())
    }

    pub fn is_left_linear(&self) -> bool {
        self.left_linear
    }

    /// An F_{q^n}-basis when left-linear, otherwise an F_q-basis.
    pub fn generators(&self) -> &[LinPoly] {
        &self.gens
    }

    pub fn dim_fq(&self, ctx: &FieldCtx) -> usize {
        self.fp.nrows() / ctx.h()
    }

    pub fn dim_fqn(&self) -> Option<usize> {
        self.left_linear.then_some(self.gens.len())
    }

    pub fn contains(&self, ctx: &FieldCtx, f: &LinPoly) -> bool {
        let mut m = self.fp.clone();
        m.push_row(&flatten(ctx, f));
        m.rank() == self.fp.nrows()
    }

    pub fn is_subcode_of(&self, ctx: &FieldCtx, other: &RmCode) -> bool {
        (0..self.fp.nrows()).all(|r| other.contains(ctx, &unflatten(ctx, self.fp.row(r))))
    }

    pub fn same_code(&self, ctx: &FieldCtx, other: &RmCode) -> bool {
        self.fp.nrows() == other.fp.nrows() && self.is_subcode_of(ctx, other)
    }

    /// An F_p-basis of the code.
    pub fn fp_basis(&self, ctx: &FieldCtx) -> Vec<LinPoly> {
        (0..self.fp.nrows()).map(|r| unflatten(ctx, self.fp.row(r))).collect()
    }

    /// `{f^{q^s} : f in C}`.
    pub fn twisted(&self, ctx: &FieldCtx, s: i64) -> RmCode {
        let rows = self.fp_basis(ctx).iter().map(|f| flatten(ctx, &f.twist(ctx, s))).collect();
        Self::from_fp_rows(ctx, rows)
    }

    /// Coefficient vectors of the generators.
    pub fn coefficient_map(&self) -> Vec<Vec<FqnElem>> {
        self.gens.iter().map(|g| g.coeffs().to_vec()).collect()
    }

    /// Generator coefficient vectors as an F_{q^n}-subspace of F_{q^n}^n.
    pub fn coefficient_space(&self, ctx: &FieldCtx) -> Result<Subspace> {
        if !self.left_linear {
            return Err(Error::InvalidParameter("code is not F_{q^n}-linear on the left".into()));
        }
        Ok(Subspace::span(ctx, ctx.n(), &self.coefficient_map()))
    }
}

/// `<x, f>` over F_{q^n}.
pub fn code_from_subspace(ctx: &FieldCtx, f: &LinPoly) -> RmCode {
    RmCode::fqn_span(ctx, &[LinPoly::identity(ctx), f.clone()])
}

fn check_ks(ctx: &FieldCtx, k: usize, s: usize) -> Result<()> {
    let n = ctx.n();
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n-1, got k={k}")));
    }
    if gcd(s % n, n) != 1 {
        return Err(Error::InvalidParameter(format!("gcd(s, n) must be 1, got s={s}")));
    }
    Ok(())
}

pub fn gabidulin(ctx: &FieldCtx, k: usize, s: usize) -> Result<RmCode> {
    check_ks(ctx, k, s)?;
    let n = ctx.n();
    let gens: Vec<LinPoly> = (0..k).map(|i| LinPoly::monomial(ctx, (s * i) % n, FqnElem::ONE)).collect();
    Ok(RmCode::fqn_span(ctx, &gens))
}

/// `{a_0 x + ... + a_{k-1} x^{q^{s(k-1)}} + a_0^{q^h} η x^{q^{sk}}}`.
pub fn twisted_gabidulin(ctx: &FieldCtx, k: usize, s: usize, eta: FqnElem, h: usize) -> Result<RmCode> {
    check_ks(ctx, k, s)?;
    let n = ctx.n();
    let sign = if (n * k) % 2 == 0 { FqnElem::ONE } else { ctx.neg(FqnElem::ONE) };
    if ctx.norm(eta) == sign {
        return Err(Error::InvalidEta(format!("norm of eta equals (-1)^(nk)")));
    }
    let mut rows = Vec::new();
    for e in 0..ctx.degree() {
        let a = ctx.t_pow(e);
        for i in 1..k {
            rows.push(flatten(ctx, &LinPoly::monomial(ctx, (s * i) % n, a)));
        }
        let head = LinPoly::from_terms(ctx, &[(0, a), ((s * k) % n, ctx.mul(ctx.frob(a, h % n), eta))]);
        rows.push(flatten(ctx, &head));
    }
    Ok(RmCode::from_fp_rows(ctx, rows))
}

/// Orthogonal complement under `b(f, g) = Tr(sum f_i g_i)`.
pub fn delsarte_dual(ctx: &FieldCtx, c: &RmCode) -> RmCode {
    let d = ctx.degree();
    let n = ctx.n();
    let mut a = FpMat::zeros(ctx.p(), 0, n * d);
    for g in c.fp_basis(ctx) {
        let row: Vec<u64> = (0..n)
            .flat_map(|i| (0..d).map(move |e| (i, e)))
            .map(|(i, e)| ctx.abs_trace(ctx.mul(ctx.t_pow(e), g.coeff(i))))
            .collect();
        a.push_row(&row);
    }
    let rows = if a.nrows() == 0 {
        (0..n * d).map(|j| { let mut v = vec![0; n * d]; v[j] = 1; v }).collect()
    } else {
        a.kernel()
    };
    RmCode::from_fp_rows(ctx, rows)
}

/// Images of the F_p-basis `t^e`; rank over F_q is the F_p-rank divided by h.
struct Ranker<'a> {
    ctx: &'a FieldCtx,
    small: SmallFp,
    images: Vec<Vec<FqnElem>>,
}

impl<'a> Ranker<'a> {
    fn new(ctx: &'a FieldCtx, gens: &[LinPoly]) -> Self {
        let d = ctx.degree();
        let images = gens.iter().map(|g| (0..d).map(|e| g.eval(ctx, ctx.t_pow(e))).collect()).collect();
        Ranker { ctx, small: SmallFp::new(ctx.p()), images }
    }

    fn rank(&self, coeffs: &[FqnElem], buf: &mut Vec<u8>) -> usize {
        let ctx = self.ctx;
        let d = ctx.degree();
        buf.clear();
        buf.resize(d * d, 0);
        for e in 0..d {
            let mut v = FqnElem::ZERO;
            for (a, img) in coeffs.iter().zip(&self.images) {
                if !a.is_zero() {
                    v = ctx.add(v, ctx.mul(*a, img[e]));
                }
            }
            ctx.write_digits(v, &mut buf[e * d..(e + 1) * d]);
        }
        self.small.rank(buf, d, d) / ctx.h()
    }
}

/// Counts of nonzero codewords by rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankDistribution {
    pub counts: BTreeMap<usize, u128>,
}

impl RankDistribution {
    pub fn min_distance(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }
    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }
}

/// Number of rank computations a distance sweep needs.
pub fn sweep_size(ctx: &FieldCtx, c: &RmCode) -> u128 {
    let (base, k) = if c.left_linear { (ctx.order(), c.gens.len()) } else { (ctx.q() as u128, c.gens.len()) };
    (0..k as u32).map(|i| base.saturating_pow(i)).fold(0u128, |a, b| a.saturating_add(b))
}

/// Rank distribution by projective enumeration, over F_{q^n} for left-linear codes and F_q otherwise.
pub fn rank_distribution(ctx: &FieldCtx, c: &RmCode, budget: &Budget) -> Result<RankDistribution> {
    budget.check(sweep_size(ctx, c))?;
    let k = c.gens.len();
    let mut counts = BTreeMap::new();
    if k == 0 {
        return Ok(RankDistribution { counts });
    }
    let ranker = Ranker::new(ctx, &c.gens);
    let (scalars, mult): (Option<Vec<FqnElem>>, u128) = if c.left_linear {
        (None, ctx.order() - 1)
    } else {
        (Some(ctx.fq_elements()), ctx.q() as u128 - 1)
    };
    let base = scalars.as_ref().map_or(ctx.order(), |s| s.len() as u128) as u64;
    let elem = |i: u64| -> FqnElem {
        match &scalars {
            Some(s) => s[i as usize],
            None => ctx.elem(i).expect("in range"),
        }
    };
    for lead in 0..k {
        let tail = k - lead - 1;
        let total = (base as u128).pow(tail as u32) as u64;
        let part: BTreeMap<usize, u128> = (0..total)
            .into_par_iter()
            .fold(
                || (BTreeMap::<usize, u128>::new(), Vec::new(), vec![FqnElem::ZERO; k]),
                |(mut acc, mut buf, mut coeffs), mut idx| {
                    coeffs.iter_mut().for_each(|c| *c = FqnElem::ZERO);
                    coeffs[lead] = FqnElem::ONE;
                    for j in lead + 1..k {
                        coeffs[j] = elem(idx % base);
                        idx /= base;
                    }
                    *acc.entry(ranker.rank(&coeffs, &mut buf)).or_default() += 1;
                    (acc, buf, coeffs)
                },
            )
            .map(|(a, _, _)| a)
            .reduce(BTreeMap::new, |mut a, b| {
                for (r, v) in b {
                    *a.entry(r).or_default() += v;
                }
                a
            });
        for (r, v) in part {
            *counts.entry(r).or_default() += v * mult;
        }
    }
    Ok(RankDistribution { counts })
}

pub fn min_distance(ctx: &FieldCtx, c: &RmCode, budget: &Budget) -> Result<Option<usize>> {
    Ok(rank_distribution(ctx, c, budget)?.min_distance())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MrdReport {
    pub dim_fq: usize,
    pub min_distance: Option<usize>,
    pub is_mrd: bool,
}

/// MRD iff `dim_Fq C = n (n - d + 1)`.
pub fn mrd_report(ctx: &FieldCtx, c: &RmCode, budget: &Budget) -> Result<MrdReport> {
    let d = min_distance(ctx, c, budget)?;
    let dim = c.dim_fq(ctx);
    let n = ctx.n();
    let is_mrd = d.is_some_and(|d| dim == n * (n - d + 1));
    Ok(MrdReport { dim_fq: dim, min_distance: d, is_mrd })
}

pub fn is_mrd(ctx: &FieldCtx, c: &RmCode, budget: &Budget) -> Result<bool> {
    Ok(mrd_report(ctx, c, budget)?.is_mrd)
}

/// An idealiser as an F_q-subalgebra of the q-polynomial ring.
#[derive(Clone, Debug)]
pub struct Idealiser {
    pub basis: Vec<LinPoly>,
    pub dim_fq: usize,
    /// `Some(d)` when the algebra is the field F_{q^d}.
    pub field_degree: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

fn idealiser(ctx: &FieldCtx, c: &RmCode, side: Side) -> Idealiser {
    let n = ctx.n();
    let d = ctx.degree();
    let width = n * d;
    let parity = {
        let k = c.fp.kernel();
        FpMat::from_rows(ctx.p(), width, &k)
    };
    let basis = c.fp_basis(ctx);
    let unknowns: Vec<LinPoly> =
        (0..n).flat_map(|i| (0..d).map(move |e| (i, e))).map(|(i, e)| LinPoly::monomial(ctx, i, ctx.t_pow(e))).collect();
    // Column j holds the syndromes of phi_j composed with every code basis element.
    let cols: Vec<Vec<u64>> = unknowns
        .iter()
        .map(|phi| {
            let mut col = Vec::new();
            for f in &basis {
                let g = match side {
                    Side::Left => phi.compose(ctx, f),
                    Side::Right => f.compose(ctx, phi),
                };
                col.extend(parity.mul_vec(&flatten(ctx, &g)));
            }
            col
        })
        .collect();
    let alg_rows: Vec<Vec<u64>> = if cols[0].is_empty() {
        (0..width).map(|j| { let mut v = vec![0; width]; v[j] = 1; v }).collect()
    } else {
        let m = FpMat::from_rows(ctx.p(), cols[0].len(), &cols).transpose();
        m.kernel()
    };
    let alg: Vec<LinPoly> = alg_rows
        .iter()
        .map(|v| {
            let mut acc = LinPoly::zero(ctx);
            for (j, &x) in v.iter().enumerate() {
                if x != 0 {
                    acc = acc.add(ctx, &unknowns[j].scale(ctx, ctx.from_fp(x as i64)));
                }
            }
            acc
        })
        .collect();
    let field_degree = field_degree(ctx, &alg);
    let dim_fq = alg.len() / ctx.h();
    let basis = RmCode::fq_span(ctx, &alg).gens;
    Idealiser { basis, dim_fq, field_degree }
}

fn poly_pow(ctx: &FieldCtx, f: &LinPoly, mut e: u64) -> LinPoly {
    let mut base = f.clone();
    let mut acc = LinPoly::identity(ctx);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.compose(ctx, &base);
        }
        base = base.compose(ctx, &base);
        e >>= 1;
    }
    acc
}

/// A commutative F_q-algebra is a field iff `a -> a^q` is injective and fixes only F_q.
fn field_degree(ctx: &FieldCtx, alg: &[LinPoly]) -> Option<usize> {
    let m = alg.len();
    for i in 0..m {
        for j in i + 1..m {
            if alg[i].compose(ctx, &alg[j]) != alg[j].compose(ctx, &alg[i]) {
                return None;
            }
        }
    }
    let n = ctx.n();
    let width = n * ctx.degree();
    let basis_rows: Vec<Vec<u64>> = alg.iter().map(|f| flatten(ctx, f)).collect();
    let b = FpMat::from_rows(ctx.p(), width, &basis_rows).transpose();
    // Matrix of a -> a^q in the given F_p-basis.
    let mut frob_cols = Vec::with_capacity(m);
    for f in alg {
        let img = flatten(ctx, &poly_pow(ctx, f, ctx.q()));
        frob_cols.push(b.solve(&img)?);
    }
    let fm = FpMat::from_rows(ctx.p(), m, &frob_cols).transpose();
    if fm.rank() != m {
        return None;
    }
    let mut shifted = fm.clone();
    for i in 0..m {
        shifted.set(i, i, (shifted.get(i, i) + ctx.p() - 1) % ctx.p());
    }
    let fixed = m - shifted.rank();
    (fixed == ctx.h()).then_some(m / ctx.h())
}

pub fn left_idealiser(ctx: &FieldCtx, c: &RmCode) -> Idealiser {
    idealiser(ctx, c, Side::Left)
}

pub fn right_idealiser(ctx: &FieldCtx, c: &RmCode) -> Idealiser {
    idealiser(ctx, c, Side::Right)
}

fn fqn_intersection_dims(ctx: &FieldCtx, c: &RmCode, s: i64, upto: usize) -> Result<(Vec<usize>, Vec<Subspace>)> {
    let base = c.coefficient_space(ctx)?;
    let mut cur = base.clone();
    let mut dims = vec![cur.dim()];
    let mut spaces = vec![cur.clone()];
    for j in 1..=upto {
        let tw = c.twisted(ctx, s * j as i64).coefficient_space(ctx)?;
        cur = cur.intersect(ctx, &tw);
        dims.push(cur.dim());
        spaces.push(cur.clone());
    }
    Ok((dims, spaces))
}

/// Values of s, coprime to n, with `dim(C ∩ C^{[s]}) = k - 1`.
pub fn gabidulin_recognize(ctx: &FieldCtx, c: &RmCode) -> Result<Vec<usize>> {
    let k = c.dim_fqn().ok_or_else(|| Error::InvalidParameter("code is not F_{q^n}-linear on the left".into()))?;
    let mut out = Vec::new();
    for s in crate::geometry::coprime_generators(ctx.n()) {
        let (dims, _) = fqn_intersection_dims(ctx, c, s as i64, 1)?;
        if k >= 1 && dims[1] == k - 1 {
            out.push(s);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedMatch {
    pub s: usize,
    pub eta: FqnElem,
    pub p: LinPoly,
    pub q: LinPoly,
}

/// Per-s report of the twisted recognizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedAttempt {
    pub s: usize,
    /// `dim(C ∩ C^{[s]})` and `dim(C ∩ C^{[s]} ∩ C^{[2s]})`.
    pub dims: (usize, usize),
    pub matched: Option<TwistedMatch>,
}

/// Looks for `C = <p^{[s]}, ..., p^{[s(k-1)]}> ⊕ <q>` with p invertible and `p + η p^{[sk]} ∈ C`, η ≠ 0.
pub fn twisted_recognize(ctx: &FieldCtx, c: &RmCode) -> Result<Vec<TwistedAttempt>> {
    let k = c.dim_fqn().ok_or_else(|| Error::InvalidParameter("code is not F_{q^n}-linear on the left".into()))?;
    if k <= 2 {
        return Err(Error::InvalidParameter(format!("twisted recognition needs dimension k > 2, got {k}")));
    }
    let n = ctx.n();
    let mut out = Vec::new();
    for s in crate::geometry::coprime_generators(n) {
        let si = s as i64;
        let (dims, _) = fqn_intersection_dims(ctx, c, si, 2)?;
        let mut attempt = TwistedAttempt { s, dims: (dims[1], dims[2]), matched: None };
        if dims[1] == k - 2 && dims[2] == k - 3 {
            attempt.matched = twisted_extract(ctx, c, k, si);
        }
        out.push(attempt);
    }
    Ok(out)
}

fn twisted_extract(ctx: &FieldCtx, c: &RmCode, k: usize, s: i64) -> Option<TwistedMatch> {
    let n = ctx.n();
    let (dims, spaces) = fqn_intersection_dims(ctx, c, s, k - 2).ok()?;
    if dims[k - 2] != 1 {
        return None;
    }
    let top = LinPoly::new(ctx, spaces[k - 2].basis()[0].clone()).ok()?;
    let p = top.twist(ctx, -(s * (k as i64 - 1)));
    if !p.is_invertible(ctx) {
        return None;
    }
    let chain: Vec<LinPoly> = (1..k).map(|i| p.twist(ctx, s * i as i64)).collect();
    let chain_space = Subspace::span(ctx, n, &chain.iter().map(|f| f.coeffs().to_vec()).collect::<Vec<_>>());
    if chain_space.dim() != k - 1 || chain.iter().any(|f| !c.contains(ctx, f)) {
        return None;
    }
    // p = sum c_i g_i - η p^{[sk]}
    let tw = p.twist(ctx, s * k as i64);
    let mut cols: Vec<Vec<FqnElem>> = c.gens.iter().map(|g| g.coeffs().to_vec()).collect();
    cols.push(tw.coeffs().to_vec());
    let a: Vec<Vec<FqnElem>> = (0..n).map(|i| cols.iter().map(|col| col[i]).collect()).collect();
    let sol = vecspace::solve(ctx, &a, p.coeffs())?;
    let mut eta = ctx.neg(*sol.last().expect("nonempty"));
    if eta.is_zero() {
        if !c.contains(ctx, &tw) {
            return None;
        }
        eta = FqnElem::ONE;
    }
    let qpoly = c.gens.iter().find(|g| !chain_space.contains(ctx, g.coeffs()))?.clone();
    Some(TwistedMatch { s: s.rem_euclid(n as i64) as usize, eta, p, q: qpoly })
}
