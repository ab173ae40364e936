//! PG(n-1, q^n): the canonical subgeometry Σ, the collineations σ̂^s fixing it,
//! intersection numbers, generating points, projections and vertex criteria.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqnElem};
use crate::fp::{self, FpMat};
use crate::linpoly::{self, LinPoly};
use crate::linset::LinePoint;
use crate::sweep::{self, Budget};
use crate::vecspace::{self, Subspace};

/// A projective subspace of PG(n-1, q^n), stored canonically by its echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjSubspace(Subspace);

impl ProjSubspace {
    pub fn from_basis(ctx: &FieldCtx, rows: &[Vec<FqnElem>]) -> Self {
        ProjSubspace(Subspace::span(ctx, ctx.n(), rows))
    }

    pub fn from_equations(ctx: &FieldCtx, eqs: &[Vec<FqnElem>]) -> Self {
        ProjSubspace(Subspace::from_equations(ctx, ctx.n(), eqs))
    }

    pub fn empty(ctx: &FieldCtx) -> Self {
        ProjSubspace(Subspace::zero(ctx.n()))
    }

    /// Projective dimension; the empty subspace has dimension -1.
    pub fn dim(&self) -> isize {
        self.0.dim() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.0.dim() == 0
    }

    pub fn basis(&self) -> &[Vec<FqnElem>] {
        self.0.basis()
    }

    pub fn equations(&self, ctx: &FieldCtx) -> Vec<Vec<FqnElem>> {
        self.0.annihilator(ctx)
    }

    pub fn contains(&self, ctx: &FieldCtx, v: &[FqnElem]) -> bool {
        self.0.contains(ctx, v)
    }

    pub fn contains_subspace(&self, ctx: &FieldCtx, other: &ProjSubspace) -> bool {
        other.0.is_subspace_of(ctx, &self.0)
    }

    pub fn join(&self, ctx: &FieldCtx, other: &ProjSubspace) -> ProjSubspace {
        ProjSubspace(self.0.join(ctx, &other.0))
    }

    pub fn meet(&self, ctx: &FieldCtx, other: &ProjSubspace) -> ProjSubspace {
        ProjSubspace(self.0.intersect(ctx, &other.0))
    }

    pub fn inner(&self) -> &Subspace {
        &self.0
    }
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize(ctx: &FieldCtx, v: &[FqnElem]) -> Vec<FqnElem> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(&lead) => {
            let inv = ctx.inv(lead);
            v.iter().map(|&x| ctx.mul(inv, x)).collect()
        }
    }
}

/// `σ̂^s` on vectors: component i becomes `x_{i-s}^{q^s}`.
pub fn sigma_vec(ctx: &FieldCtx, v: &[FqnElem], s: i64) -> Vec<FqnElem> {
    let n = ctx.n();
    let s = s.rem_euclid(n as i64) as usize;
    (0..n).map(|i| ctx.frob(v[(i + n - s) % n], s)).collect()
}

pub fn sigma_conjugate(ctx: &FieldCtx, sub: &ProjSubspace, s: i64) -> ProjSubspace {
    ProjSubspace(sub.0.map(ctx, |v| sigma_vec(ctx, v, s)))
}

pub fn intersect(ctx: &FieldCtx, subs: &[ProjSubspace]) -> ProjSubspace {
    let mut eqs = Vec::new();
    for s in subs {
        eqs.extend(s.equations(ctx));
    }
    ProjSubspace::from_equations(ctx, &eqs)
}

/// `(x, x^q, ..., x^{q^{n-1}})`.
pub fn subgeometry_vec(ctx: &FieldCtx, x: FqnElem) -> Vec<FqnElem> {
    (0..ctx.n()).map(|i| ctx.frob(x, i)).collect()
}

/// The q-polynomial `sum_j a_j x^{q^j}` attached to a linear form.
fn form_poly(ctx: &FieldCtx, a: &[FqnElem]) -> LinPoly {
    LinPoly::new(ctx, a.to_vec()).expect("form of length n")
}

/// Some `x != 0` whose subgeometry vector lies in `sub`, if any.
pub fn meets_subgeometry(ctx: &FieldCtx, sub: &ProjSubspace) -> Option<FqnElem> {
    let polys: Vec<LinPoly> = sub.equations(ctx).iter().map(|a| form_poly(ctx, a)).collect();
    if polys.is_empty() {
        return Some(FqnElem::ONE);
    }
    linpoly::common_kernel(ctx, &polys).into_iter().next()
}

/// F_q-dimension of the set of subgeometry vectors inside `sub`.
pub fn subgeometry_rank(ctx: &FieldCtx, sub: &ProjSubspace) -> usize {
    let polys: Vec<LinPoly> = sub.equations(ctx).iter().map(|a| form_poly(ctx, a)).collect();
    if polys.is_empty() {
        return ctx.n();
    }
    linpoly::common_kernel(ctx, &polys).len() / ctx.h()
}

pub fn coprime_generators(n: usize) -> Vec<usize> {
    (1..n).filter(|&s| gcd(s, n) == 1).collect()
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Projective dimensions of `Γ ∩ Γ^σ ∩ ... ∩ Γ^{σ^t}` for t = 0..=tmax, σ = σ̂^s.
pub fn conjugate_chain_dims(ctx: &FieldCtx, gamma: &ProjSubspace, s: i64, tmax: usize) -> Vec<isize> {
    let mut cur = gamma.clone();
    let mut out = vec![cur.dim()];
    for t in 1..=tmax {
        cur = cur.meet(ctx, &sigma_conjugate(ctx, gamma, s * t as i64));
        out.push(cur.dim());
    }
    out
}

fn check_vertex_hypotheses(ctx: &FieldCtx, gamma: &ProjSubspace, s: i64) -> Result<()> {
    if gcd(s.rem_euclid(ctx.n() as i64) as usize, ctx.n()) != 1 {
        return Err(Error::HypothesisViolated(format!("s={s} is not coprime to n={}", ctx.n())));
    }
    if meets_subgeometry(ctx, gamma).is_some() {
        return Err(Error::HypothesisViolated("the subspace meets the subgeometry".into()));
    }
    let k = gamma.dim();
    let d1 = gamma.meet(ctx, &sigma_conjugate(ctx, gamma, s)).dim();
    if d1 < k - 2 {
        return Err(Error::HypothesisViolated(format!("dim(Γ∩Γ^σ)={d1} < k-2={}", k - 2)));
    }
    Ok(())
}

/// Least r >= 1 with `dim(Γ ∩ ... ∩ Γ^{σ^r}) > k - 2r`, σ = σ̂^s.
pub fn intersection_number(ctx: &FieldCtx, gamma: &ProjSubspace, s: i64) -> Result<usize> {
    check_vertex_hypotheses(ctx, gamma, s)?;
    let k = gamma.dim();
    let mut cur = gamma.clone();
    for r in 1..=(k as usize + 4) {
        cur = cur.meet(ctx, &sigma_conjugate(ctx, gamma, s * r as i64));
        if cur.dim() > k - 2 * r as isize {
            return Ok(r);
        }
    }
    Err(Error::HypothesisViolated("no intersection number found".into()))
}

/// Outcome of the generating point recovery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingPoint {
    pub point: Vec<FqnElem>,
    pub intn: usize,
    /// `k - r + 2`: number of independent points `P, ..., P^{σ^{k-r+1}}` in Γ.
    pub count: usize,
    pub unique: bool,
    /// Number of points satisfying the defining conditions when searched.
    pub candidates: usize,
}

fn points_span(ctx: &FieldCtx, p: &[FqnElem], s: i64, upto: usize) -> ProjSubspace {
    let rows: Vec<Vec<FqnElem>> = (0..=upto).map(|i| sigma_vec(ctx, p, s * i as i64)).collect();
    ProjSubspace::from_basis(ctx, &rows)
}

fn is_generating(ctx: &FieldCtx, gamma: &ProjSubspace, p: &[FqnElem], s: i64, tstar: usize) -> bool {
    let n = ctx.n() as i64;
    let span = points_span(ctx, p, s, tstar);
    span.dim() == tstar as isize
        && gamma.contains_subspace(ctx, &span)
        && !gamma.contains(ctx, &sigma_vec(ctx, p, s * (n - 1)))
}

pub fn generating_point(ctx: &FieldCtx, gamma: &ProjSubspace, s: i64) -> Result<GeneratingPoint> {
    let r = intersection_number(ctx, gamma, s)?;
    let k = gamma.dim();
    let tstar_i = k - r as isize + 1;
    if tstar_i < 0 {
        return Err(Error::HypothesisViolated(format!("k-r+1={tstar_i} is negative")));
    }
    let tstar = tstar_i as usize;
    let conj: Vec<ProjSubspace> = (0..=tstar).map(|i| sigma_conjugate(ctx, gamma, s * i as i64)).collect();
    let inter = intersect(ctx, &conj);
    let uniq_claim = (2 * r as isize) < k + 2;
    let pull = |v: &[FqnElem]| normalize(ctx, &sigma_vec(ctx, v, -(s * tstar as i64)));
    if inter.dim() == 0 {
        let p = pull(&inter.basis()[0]);
        if is_generating(ctx, gamma, &p, s, tstar) {
            return Ok(GeneratingPoint { point: p, intn: r, count: tstar + 1, unique: uniq_claim, candidates: 1 });
        }
    }
    // Search the points of the intersection for valid pullbacks.
    if inter.dim() < 0 {
        return Err(Error::DegenerateConfiguration("empty conjugate intersection".into()));
    }
    if inter.dim() > 1 {
        return Err(Error::DegenerateConfiguration(format!(
            "conjugate intersection has dimension {}",
            inter.dim()
        )));
    }
    let (a, b) = (&inter.basis()[0], inter.basis().get(1));
    let mut found: Vec<Vec<FqnElem>> = Vec::new();
    let mut try_vec = |v: Vec<FqnElem>| {
        let p = pull(&v);
        if is_generating(ctx, gamma, &p, s, tstar) {
            found.push(p);
        }
    };
    match b {
        None => try_vec(a.clone()),
        Some(b) => {
            try_vec(b.clone());
            for lam in ctx.elements() {
                try_vec(a.iter().zip(b).map(|(&x, &y)| ctx.add(x, ctx.mul(lam, y))).collect());
            }
        }
    }
    found.sort_by_key(|v| v.iter().map(|&x| ctx.encode(x)).collect::<Vec<_>>());
    let candidates = found.len();
    let point = found
        .into_iter()
        .next()
        .ok_or_else(|| Error::DegenerateConfiguration("no generating point".into()))?;
    Ok(GeneratingPoint { point, intn: r, count: tstar + 1, unique: uniq_claim && candidates == 1, candidates })
}

/// Projection of Σ from a vertex Γ onto an axis Λ.
#[derive(Clone, Debug)]
pub struct Projection {
    /// Coordinates of the projected point of `(x, x^q, ...)` in the echelon basis of Λ.
    pub g1: LinPoly,
    pub g2: LinPoly,
    /// Points with their weights, in canonical order, when enumerated.
    pub points: Option<Vec<(LinePoint, usize)>>,
}

impl Projection {
    /// `g2 ∘ g1^{-1}` when `g1` is invertible, so that the image is `L_f`.
    pub fn reconstructed(&self, ctx: &FieldCtx) -> Option<LinPoly> {
        if !self.g1.is_invertible(ctx) {
            return None;
        }
        let basis = ctx.fq_basis();
        let ys: Vec<FqnElem> = basis.iter().map(|&b| self.g1.eval(ctx, b)).collect();
        let inv = LinPoly::interpolate(ctx, &ys, &basis).ok()?;
        Some(self.g2.compose(ctx, &inv))
    }
}

pub(crate) fn line_key(ctx: &FieldCtx, a: FqnElem, b: FqnElem) -> LinePoint {
    if a.is_zero() {
        LinePoint::Infinity
    } else {
        LinePoint::Affine(ctx.div(b, a))
    }
}

pub(crate) fn sort_points(ctx: &FieldCtx, pts: &mut [(LinePoint, usize)]) {
    pts.sort_by_key(|(p, _)| match p {
        LinePoint::Affine(m) => (0, ctx.encode(*m)),
        LinePoint::Infinity => (1, 0),
    });
}

pub fn project(ctx: &FieldCtx, gamma: &ProjSubspace, lambda: &ProjSubspace, budget: &Budget) -> Result<Projection> {
    if meets_subgeometry(ctx, gamma).is_some() {
        return Err(Error::VertexMeetsSubgeometry);
    }
    if !gamma.meet(ctx, lambda).is_empty() {
        return Err(Error::VertexMeetsAxis);
    }
    if lambda.dim() != 1 || gamma.dim() != ctx.n() as isize - 3 {
        return Err(Error::InvalidParameter("need a vertex of dimension n-3 and a line".into()));
    }
    let ells = gamma.equations(ctx);
    let lam = lambda.basis();
    let m: Vec<Vec<FqnElem>> = ells.iter().map(|l| lam.iter().map(|v| vecspace::dot(ctx, l, v)).collect()).collect();
    // M^{-1} by solving against unit vectors.
    let col0 = vecspace::solve(ctx, &m, &[FqnElem::ONE, FqnElem::ZERO]).expect("axis complements vertex");
    let col1 = vecspace::solve(ctx, &m, &[FqnElem::ZERO, FqnElem::ONE]).expect("axis complements vertex");
    let minv = [[col0[0], col1[0]], [col0[1], col1[1]]];
    let n = ctx.n();
    let g: Vec<LinPoly> = (0..2)
        .map(|j| {
            let c: Vec<FqnElem> = (0..n)
                .map(|i| ctx.add(ctx.mul(minv[j][0], ells[0][i]), ctx.mul(minv[j][1], ells[1][i])))
                .collect();
            LinPoly::new(ctx, c).expect("length n")
        })
        .collect();
    let points = if budget.check(ctx.order()).is_ok() {
        let (m1, m2) = (g[0].compile(ctx), g[1].compile(ctx));
        let counts = sweep::fold(
            ctx,
            || (),
            HashMap::<LinePoint, u64>::new(),
            |_, acc, x| {
                if !x.is_zero() {
                    *acc.entry(line_key(ctx, m1.apply(x), m2.apply(x))).or_default() += 1;
                }
            },
            |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            },
        );
        let mut pts: Vec<(LinePoint, usize)> = counts.into_iter().map(|(k, c)| (k, weight_of(ctx.q(), c))).collect();
        sort_points(ctx, &mut pts);
        Some(pts)
    } else {
        None
    };
    Ok(Projection { g1: g[0].clone(), g2: g[1].clone(), points })
}

/// w with `q^w - 1 = count`.
pub(crate) fn weight_of(q: u64, count: u64) -> usize {
    let mut v = count + 1;
    let mut w = 0;
    while v > 1 {
        debug_assert_eq!(v % q, 0);
        v /= q;
        w += 1;
    }
    w
}

fn check_vertex_shape(ctx: &FieldCtx, gamma: &ProjSubspace) -> Result<()> {
    if gamma.dim() != ctx.n() as isize - 3 {
        return Err(Error::HypothesisViolated(format!("vertex has dimension {}, need n-3", gamma.dim())));
    }
    if meets_subgeometry(ctx, gamma).is_some() {
        return Err(Error::HypothesisViolated("the vertex meets the subgeometry".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PseudoregulusVerdict {
    pub holds: bool,
    /// Generators s with `dim(Γ∩Γ^{σ̂^s}) = n-4`.
    pub generators: Vec<usize>,
    /// Whether Γ lies in a hyperplane spanned by a hyperplane of Σ.
    pub in_subgeometry_hyperplane: bool,
}

pub fn pseudoregulus_criterion(ctx: &FieldCtx, gamma: &ProjSubspace) -> Result<PseudoregulusVerdict> {
    if ctx.q() <= 2 || ctx.n() < 3 {
        return Err(Error::HypothesisViolated("need q > 2 and n >= 3".into()));
    }
    check_vertex_shape(ctx, gamma)?;
    let n = ctx.n() as isize;
    let generators: Vec<usize> = coprime_generators(ctx.n())
        .into_iter()
        .filter(|&s| gamma.meet(ctx, &sigma_conjugate(ctx, gamma, s as i64)).dim() == n - 4)
        .collect();
    // Hyperplanes spanned by hyperplanes of Σ have dual points on the dual subgeometry.
    let ann = ProjSubspace::from_basis(ctx, &gamma.equations(ctx));
    let in_hyp = meets_subgeometry(ctx, &ann).is_some();
    Ok(PseudoregulusVerdict { holds: !generators.is_empty() && !in_hyp, generators, in_subgeometry_hyperplane: in_hyp })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpVerdict {
    /// The intersection number is not 2.
    NotApplicable { intn: usize },
    /// The line through `R^σ` and `R^{σ^{n-1}}` misses Γ (or meets it in one of them).
    NotLp { r: Vec<FqnElem> },
    /// The linear set is of LP type `δ x^{q^s} + x^{q^{s(n-1)}}`, δ up to `λ^{q^s - q^{-s}}`.
    Lp { s: usize, delta: FqnElem, r: Vec<FqnElem>, q_point: Vec<FqnElem> },
}

/// The point `Q = α σ(r) + β σ^{n-1}(r)` on Γ, returned as `(α, β)`.
fn line_meets(ctx: &FieldCtx, gamma: &ProjSubspace, w0: &[FqnElem], w1: &[FqnElem]) -> Option<(FqnElem, FqnElem)> {
    let line = ProjSubspace::from_basis(ctx, &[w0.to_vec(), w1.to_vec()]);
    let m = line.meet(ctx, gamma);
    if m.dim() != 0 {
        return None;
    }
    let v = &m.basis()[0];
    // Solve v = α w0 + β w1.
    let a: Vec<Vec<FqnElem>> = (0..ctx.n()).map(|i| vec![w0[i], w1[i]]).collect();
    let sol = vecspace::solve(ctx, &a, v)?;
    Some((sol[0], sol[1]))
}

fn lp_setup(ctx: &FieldCtx, gamma: &ProjSubspace, s: i64) -> Result<std::result::Result<Vec<FqnElem>, usize>> {
    check_vertex_shape(ctx, gamma)?;
    let intn = intersection_number(ctx, gamma, s)?;
    if intn != 2 {
        return Ok(Err(intn));
    }
    let gp = generating_point(ctx, gamma, s)?;
    let n = ctx.n() as i64;
    Ok(Ok(normalize(ctx, &sigma_vec(ctx, &gp.point, s * (n - 2)))))
}

pub fn lp_criterion(ctx: &FieldCtx, gamma: &ProjSubspace, s: i64) -> Result<LpVerdict> {
    let r = match lp_setup(ctx, gamma, s)? {
        Err(intn) => return Ok(LpVerdict::NotApplicable { intn }),
        Ok(r) => r,
    };
    let n = ctx.n() as i64;
    let w0 = sigma_vec(ctx, &r, s);
    let w1 = sigma_vec(ctx, &r, s * (n - 1));
    match line_meets(ctx, gamma, &w0, &w1) {
        Some((a, b)) if !a.is_zero() && !b.is_zero() => {
            let delta = ctx.neg(ctx.div(b, a));
            let q_point: Vec<FqnElem> = w0.iter().zip(&w1).map(|(&x, &y)| ctx.add(ctx.mul(a, x), ctx.mul(b, y))).collect();
            Ok(LpVerdict::Lp { s: s.rem_euclid(n) as usize, delta, r, q_point: normalize(ctx, &q_point) })
        }
        _ => Ok(LpVerdict::NotLp { r }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicVerdict {
    /// True iff Σ misses `W = <R, R^{σ^2}, ..., R^{σ^{n-2}}, Q'>`.
    pub empty: bool,
    pub witness: Option<FqnElem>,
    pub r: Vec<FqnElem>,
    pub q_point: Vec<FqnElem>,
    pub q_conjugate: Vec<FqnElem>,
    pub delta: FqnElem,
    pub delta_norm: FqnElem,
}

pub fn charact2_criterion(ctx: &FieldCtx, gamma: &ProjSubspace, s: i64) -> Result<HarmonicVerdict> {
    let n = ctx.n();
    if n % 2 == 0 {
        return Err(Error::HypothesisViolated("n must be odd".into()));
    }
    if ctx.p() == 2 {
        return Err(Error::HypothesisViolated("harmonic conjugates need odd q".into()));
    }
    if n < 5 {
        return Err(Error::HypothesisViolated("need dim Γ = n-3 >= 2".into()));
    }
    let r = match lp_setup(ctx, gamma, s)? {
        Err(intn) => return Err(Error::HypothesisViolated(format!("intersection number is {intn}, need 2"))),
        Ok(r) => r,
    };
    let ni = n as i64;
    for i in 2..=ni - 2 {
        if !gamma.contains(ctx, &sigma_vec(ctx, &r, s * i)) {
            return Err(Error::HypothesisViolated("R^{σ^i} not in Γ".into()));
        }
    }
    let w0 = sigma_vec(ctx, &r, s);
    let w1 = sigma_vec(ctx, &r, s * (ni - 1));
    let (a, b) = match line_meets(ctx, gamma, &w0, &w1) {
        Some((a, b)) if !a.is_zero() && !b.is_zero() => (a, b),
        _ => return Err(Error::HypothesisViolated("the line <R^σ, R^{σ^{n-1}}> does not meet Γ in a third point".into())),
    };
    let comb = |sign: FqnElem| -> Vec<FqnElem> {
        w0.iter().zip(&w1).map(|(&x, &y)| ctx.add(ctx.mul(a, x), ctx.mul(ctx.mul(sign, b), y))).collect()
    };
    let q_point = comb(FqnElem::ONE);
    let q_conj = comb(ctx.neg(FqnElem::ONE));
    let mut rows: Vec<Vec<FqnElem>> = (0..=ni - 2).filter(|&i| i != 1).map(|i| sigma_vec(ctx, &r, s * i)).collect();
    rows.push(q_conj.clone());
    let w = ProjSubspace::from_basis(ctx, &rows);
    let witness = meets_subgeometry(ctx, &w);
    let delta = ctx.neg(ctx.div(b, a));
    Ok(HarmonicVerdict {
        empty: witness.is_none(),
        witness,
        r,
        q_point: normalize(ctx, &q_point),
        q_conjugate: normalize(ctx, &q_conj),
        delta,
        delta_norm: ctx.norm(delta),
    })
}

fn unit(n: usize, i: usize) -> Vec<FqnElem> {
    vecspace::unit(n, i)
}

/// Vertex `x_0 = 0, x_5 = -x_4 - x_1 + x_2` and axis `x_1 = ... = x_4 = 0` projecting to the quadrinomial.
pub fn quadrinomial_vertex(ctx: &FieldCtx) -> Result<(ProjSubspace, ProjSubspace)> {
    if ctx.n() != 6 {
        return Err(Error::InvalidParameter("this vertex lives in PG(5, q^6)".into()));
    }
    let one = FqnElem::ONE;
    let z = FqnElem::ZERO;
    let m1 = ctx.neg(one);
    let gamma = ProjSubspace::from_equations(ctx, &[unit(6, 0), vec![z, one, m1, z, one, one]]);
    let lambda = ProjSubspace::from_equations(ctx, &[unit(6, 1), unit(6, 2), unit(6, 3), unit(6, 4)]);
    Ok((gamma, lambda))
}

/// Vertex `x_0 = 0, x_{s(n-1)} = -δ x_s` and axis `x_{is} = 0` for i = 1..n-2.
pub fn lp_vertex(ctx: &FieldCtx, s: usize, delta: FqnElem) -> Result<(ProjSubspace, ProjSubspace)> {
    let n = ctx.n();
    if n < 4 || gcd(s % n, n) != 1 {
        return Err(Error::InvalidParameter(format!("need n >= 4 and gcd(s, n) = 1 (n={n}, s={s})")));
    }
    let mut e2 = vec![FqnElem::ZERO; n];
    e2[(s * (n - 1)) % n] = FqnElem::ONE;
    e2[s % n] = delta;
    let gamma = ProjSubspace::from_equations(ctx, &[unit(n, 0), e2]);
    let eqs: Vec<Vec<FqnElem>> = (1..=n - 2).map(|i| unit(n, (i * s) % n)).collect();
    Ok((gamma, ProjSubspace::from_equations(ctx, &eqs)))
}

/// `<e_2, ..., e_{n-1}>` and the axis `<e_0, e_1>`.
pub fn pseudoregulus_vertex(ctx: &FieldCtx) -> (ProjSubspace, ProjSubspace) {
    let n = ctx.n();
    let gamma = ProjSubspace::from_basis(ctx, &(2..n).map(|i| unit(n, i)).collect::<Vec<_>>());
    let lambda = ProjSubspace::from_basis(ctx, &[unit(n, 0), unit(n, 1)]);
    (gamma, lambda)
}

/// `U = <V, S>_{F_q} ∩ W` for `V = c_N(<gens>)`, S the subgeometry vectors and
/// W the coordinate plane on `j, k`, returned as `(f1, f2)` with `U = {(f1(x), f2(x))}`.
pub fn vertex_from_code(ctx: &FieldCtx, gens: &[LinPoly], j: usize, k: usize) -> Result<(LinPoly, LinPoly)> {
    let n = ctx.n();
    let d = ctx.degree();
    if j >= n || k >= n || j == k {
        return Err(Error::InvalidParameter(format!("axis indices {j},{k} invalid")));
    }
    let p = ctx.p();
    let flatten = |v: &[FqnElem]| -> Vec<u64> { v.iter().flat_map(|&x| ctx.digits(x)).collect() };
    let mut vrows = Vec::new();
    for g in gens {
        for e in 0..d {
            let t = ctx.t_pow(e);
            vrows.push(flatten(&g.coeffs().iter().map(|&c| ctx.mul(t, c)).collect::<Vec<_>>()));
        }
    }
    let v = FpMat::from_rows(p, d * n, &vrows).row_basis();
    let srows: Vec<Vec<u64>> = (0..d).map(|e| flatten(&subgeometry_vec(ctx, ctx.t_pow(e)))).collect();
    let s = FpMat::from_rows(p, d * n, &srows);
    let mut both = v.rows_vec();
    both.extend(srows.iter().cloned());
    let sum = FpMat::from_rows(p, d * n, &both).row_basis();
    if sum.nrows() != v.nrows() + s.rank() {
        return Err(Error::DegenerateConfiguration("V meets the subgeometry vectors".into()));
    }
    let mut wrows = Vec::new();
    for e in 0..d {
        for &idx in &[j, k] {
            let mut vec = vec![FqnElem::ZERO; n];
            vec[idx] = ctx.t_pow(e);
            wrows.push(flatten(&vec));
        }
    }
    let w = FpMat::from_rows(p, d * n, &wrows);
    let u = fp::intersect_rowspaces(&sum, &w);
    if u.nrows() != d {
        return Err(Error::DegenerateConfiguration(format!("intersection has F_p-dimension {}, expected {d}", u.nrows())));
    }
    let pair = |row: &[u64]| -> (FqnElem, FqnElem) {
        (ctx.from_digits(&row[j * d..(j + 1) * d]), ctx.from_digits(&row[k * d..(k + 1) * d]))
    };
    // Greedy F_q-basis of U.
    let mut chosen: Vec<(FqnElem, FqnElem)> = Vec::new();
    let mut span = FpMat::zeros(p, 0, 2 * d);
    for r in 0..u.nrows() {
        let (a, b) = pair(u.row(r));
        let mut ext = span.clone();
        for &g in ctx.subfield_basis() {
            let mut row = ctx.digits(ctx.mul(g, a));
            row.extend(ctx.digits(ctx.mul(g, b)));
            ext.push_row(&row);
        }
        if ext.rank() > span.rank() {
            span = ext.row_basis();
            chosen.push((a, b));
        }
        if chosen.len() == n {
            break;
        }
    }
    let basis = ctx.fq_basis();
    let f1 = LinPoly::interpolate(ctx, &basis, &chosen.iter().map(|c| c.0).collect::<Vec<_>>())?;
    let f2 = LinPoly::interpolate(ctx, &basis, &chosen.iter().map(|c| c.1).collect::<Vec<_>>())?;
    Ok((f1, f2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_group_law_and_fixed_points() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let x = ctx.elem(29).unwrap();
        let v = subgeometry_vec(&ctx, x);
        assert_eq!(sigma_vec(&ctx, &v, 1), v);
        let w: Vec<FqnElem> = [3u64, 77, 0, 12].iter().map(|&e| ctx.elem(e).unwrap()).collect();
        assert_eq!(sigma_vec(&ctx, &sigma_vec(&ctx, &w, 1), 2), sigma_vec(&ctx, &w, 3));
        assert_eq!(sigma_vec(&ctx, &w, 4), w);
    }

    #[test]
    fn coordinate_shift() {
        let ctx = FieldCtx::new(3, 1, 5, None).unwrap();
        let (g, _) = pseudoregulus_vertex(&ctx);
        let shifted = ProjSubspace::from_basis(&ctx, &[unit(5, 3), unit(5, 4), unit(5, 0)]);
        assert_eq!(sigma_conjugate(&ctx, &g, 1), shifted);
    }

    #[test]
    fn quadrinomial_vertex_conjugate_equations() {
        let ctx = FieldCtx::new(5, 1, 6, None).unwrap();
        let (g, _) = quadrinomial_vertex(&ctx).unwrap();
        let one = FqnElem::ONE;
        let z = FqnElem::ZERO;
        let m1 = ctx.neg(one);
        // x_1 = 0 and x_0 = -x_5 - x_2 + x_3
        let expected = ProjSubspace::from_equations(&ctx, &[unit(6, 1), vec![one, z, one, m1, z, one]]);
        assert_eq!(sigma_conjugate(&ctx, &g, 1), expected);
        let i = g.meet(&ctx, &sigma_conjugate(&ctx, &g, 1));
        assert_eq!(i.dim(), 1);
        let two = ctx.from_fp(2);
        // x_0 = x_1 = 0, x_4 = 2x_2 - x_3, x_5 = -x_2 + x_3
        let exp2 = ProjSubspace::from_equations(
            &ctx,
            &[unit(6, 0), unit(6, 1), vec![z, z, two, m1, m1, z], vec![z, z, m1, one, z, m1]],
        );
        assert_eq!(i, exp2);
        assert!(intersect(&ctx, &[g.clone(), sigma_conjugate(&ctx, &g, 1), sigma_conjugate(&ctx, &g, 2)]).is_empty());
    }

    #[test]
    fn grassmann_identity() {
        let ctx = FieldCtx::new(3, 1, 5, None).unwrap();
        let els: Vec<FqnElem> = ctx.elements().collect();
        for k in 0..50usize {
            let rows = |off: usize, m: usize| -> Vec<Vec<FqnElem>> {
                (0..m).map(|i| (0..5).map(|j| els[(k * 131 + off + i * 37 + j * j * 11 + i * j * k) % 243]).collect()).collect()
            };
            let a = ProjSubspace::from_basis(&ctx, &rows(0, 3));
            let b = ProjSubspace::from_basis(&ctx, &rows(7, 3));
            let i = a.meet(&ctx, &b);
            let j = a.join(&ctx, &b);
            assert_eq!(i.dim() + j.dim(), a.dim() + b.dim());
            assert_eq!(a.meet(&ctx, &a), a);
        }
    }

    #[test]
    fn subgeometry_meets_by_enumeration() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let els: Vec<FqnElem> = ctx.elements().collect();
        for k in 0..40usize {
            let rows: Vec<Vec<FqnElem>> =
                (0..2).map(|i| (0..4).map(|j| els[(k * 17 + i * 29 + j * 5 + k * i * j) % 81]).collect()).collect();
            let s = ProjSubspace::from_basis(&ctx, &rows);
            let brute = els.iter().skip(1).any(|&x| s.contains(&ctx, &subgeometry_vec(&ctx, x)));
            let fast = meets_subgeometry(&ctx, &s);
            assert_eq!(brute, fast.is_some());
            if let Some(x) = fast {
                assert!(s.contains(&ctx, &subgeometry_vec(&ctx, x)));
            }
        }
        // A σ̂-fixed subspace meets Σ.
        let x = ctx.elem(5).unwrap();
        let y = ctx.elem(40).unwrap();
        let fixed = ProjSubspace::from_basis(&ctx, &[subgeometry_vec(&ctx, x), subgeometry_vec(&ctx, y)]);
        assert_eq!(sigma_conjugate(&ctx, &fixed, 1), fixed);
        assert!(meets_subgeometry(&ctx, &fixed).is_some());
    }

    #[test]
    fn pseudoregulus_generating_point() {
        let ctx = FieldCtx::new(3, 1, 6, None).unwrap();
        let (g, _) = pseudoregulus_vertex(&ctx);
        assert_eq!(intersection_number(&ctx, &g, 1).unwrap(), 1);
        let gp = generating_point(&ctx, &g, 1).unwrap();
        assert_eq!(gp.point, unit(6, 2));
        assert!(!g.contains(&ctx, &sigma_vec(&ctx, &gp.point, 5)));
        assert_eq!(sigma_vec(&ctx, &gp.point, 5), unit(6, 1));
    }

    #[test]
    fn lp_vertex_generating_point_and_q() {
        let ctx = FieldCtx::new(3, 1, 6, None).unwrap();
        let delta = ctx.t_pow(1);
        let (g, _) = lp_vertex(&ctx, 1, delta).unwrap();
        assert_eq!(intersection_number(&ctx, &g, 1).unwrap(), 2);
        let gp = generating_point(&ctx, &g, 1).unwrap();
        assert_eq!(gp.point, unit(6, 2));
        assert_eq!(gp.count, 3);
        // Γ = <P, P^σ, ..., P^{σ^{n-4}}, Q>
        let mut rows: Vec<Vec<FqnElem>> = (0..=2).map(|i| sigma_vec(&ctx, &gp.point, i)).collect();
        match lp_criterion(&ctx, &g, 1).unwrap() {
            LpVerdict::Lp { delta: d, q_point, .. } => {
                assert_eq!(d, delta);
                rows.push(q_point);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(ProjSubspace::from_basis(&ctx, &rows), g);
    }

    #[test]
    fn hypothesis_errors() {
        let ctx = FieldCtx::new(3, 1, 6, None).unwrap();
        let (g, _) = pseudoregulus_vertex(&ctx);
        assert!(matches!(charact2_criterion(&ctx, &g, 1), Err(Error::HypothesisViolated(_))));
        let meets = ProjSubspace::from_basis(&ctx, &[subgeometry_vec(&ctx, FqnElem::ONE), unit(6, 3), unit(6, 4), unit(6, 5)]);
        assert!(matches!(intersection_number(&ctx, &meets, 1), Err(Error::HypothesisViolated(_))));
        let (_, lam) = pseudoregulus_vertex(&ctx);
        assert!(matches!(project(&ctx, &meets, &lam, &Budget::default()), Err(Error::VertexMeetsSubgeometry)));
        assert!(matches!(lp_criterion(&ctx, &g, 1).unwrap(), LpVerdict::NotApplicable { intn: 1 }));
    }

    #[test]
    fn pseudoregulus_projection_is_xq() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let (g, l) = pseudoregulus_vertex(&ctx);
        let pr = project(&ctx, &g, &l, &Budget::default()).unwrap();
        assert_eq!(pr.g1, LinPoly::identity(&ctx));
        assert_eq!(pr.g2, LinPoly::monomial(&ctx, 1, FqnElem::ONE));
        let pts = pr.points.unwrap();
        assert_eq!(pts.len(), 40);
        assert!(pts.iter().all(|&(_, w)| w == 1));
        let mut brute: Vec<FqnElem> = ctx.elements().skip(1).map(|x| ctx.div(ctx.frob(x, 1), x)).collect();
        brute.sort_by_key(|&m| ctx.encode(m));
        brute.dedup();
        let got: Vec<FqnElem> = pts
            .iter()
            .map(|(p, _)| match p {
                LinePoint::Affine(m) => *m,
                LinePoint::Infinity => panic!(),
            })
            .collect();
        assert_eq!(got, brute);
    }

    #[test]
    fn vertex_from_pseudoregulus_code() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        // V : x_0 = x_1 = 0, spanned by x^{q^2}, x^{q^3}.
        let gens = vec![LinPoly::monomial(&ctx, 2, FqnElem::ONE), LinPoly::monomial(&ctx, 3, FqnElem::ONE)];
        let (f1, f2) = vertex_from_code(&ctx, &gens, 0, 1).unwrap();
        assert!(f1.is_invertible(&ctx));
        for x in ctx.elements() {
            assert_eq!(f2.eval(&ctx, x), ctx.frob(f1.eval(&ctx, x), 1));
        }
        let bad = vec![LinPoly::from_terms(&ctx, &[(0, FqnElem::ONE), (1, FqnElem::ONE), (2, FqnElem::ONE), (3, FqnElem::ONE)])];
        assert!(matches!(vertex_from_code(&ctx, &bad, 0, 1), Err(Error::DegenerateConfiguration(_))));
    }

    fn enumerate_points(ctx: &FieldCtx, f: &LinPoly) -> Vec<(LinePoint, usize)> {
        let mut m: HashMap<LinePoint, u64> = HashMap::new();
        for x in ctx.elements().skip(1) {
            *m.entry(line_key(ctx, x, f.eval(ctx, x))).or_default() += 1;
        }
        let mut v: Vec<(LinePoint, usize)> = m.into_iter().map(|(k, c)| (k, weight_of(ctx.q(), c))).collect();
        sort_points(ctx, &mut v);
        v
    }

    fn quad(ctx: &FieldCtx) -> LinPoly {
        let m1 = ctx.neg(FqnElem::ONE);
        LinPoly::from_terms(ctx, &[(1, FqnElem::ONE), (2, m1), (4, FqnElem::ONE), (5, FqnElem::ONE)])
    }

    #[test]
    fn quadrinomial_vertex_projects_to_quadrinomial() {
        let ctx = FieldCtx::new(5, 1, 6, None).unwrap();
        let (g, l) = quadrinomial_vertex(&ctx).unwrap();
        assert!(meets_subgeometry(&ctx, &g).is_none());
        assert_eq!(intersection_number(&ctx, &g, 1).unwrap(), 3);
        assert_eq!(intersection_number(&ctx, &g, 5).unwrap(), 3);
        let pr = project(&ctx, &g, &l, &Budget::default()).unwrap();
        let f = quad(&ctx);
        assert_eq!(pr.points.as_ref().unwrap(), &enumerate_points(&ctx, &f));
        assert_eq!(pr.reconstructed(&ctx).unwrap(), f);
        assert!(pr.points.unwrap().iter().all(|&(_, w)| w == 1));
        let v = pseudoregulus_criterion(&ctx, &g).unwrap();
        assert!(!v.holds);
        assert!(matches!(lp_criterion(&ctx, &g, 1).unwrap(), LpVerdict::NotApplicable { intn: 3 }));
    }

    #[test]
    fn quadrinomial_vertex_misses_subgeometry_q9() {
        let ctx = FieldCtx::new(3, 2, 6, None).unwrap();
        let (g, _) = quadrinomial_vertex(&ctx).unwrap();
        assert!(meets_subgeometry(&ctx, &g).is_none());
        assert_eq!(subgeometry_rank(&ctx, &g), 0);
    }

    #[test]
    fn lp_vertex_projects_to_lp_polynomial() {
        let ctx = FieldCtx::new(3, 1, 5, None).unwrap();
        for s in [1usize, 2, 3] {
            let delta = ctx.t_pow(2);
            let (g, l) = lp_vertex(&ctx, s, delta).unwrap();
            let pr = project(&ctx, &g, &l, &Budget::default()).unwrap();
            let f = LinPoly::from_terms(&ctx, &[(s, delta), ((s * 4) % 5, FqnElem::ONE)]);
            assert_eq!(pr.points.unwrap(), enumerate_points(&ctx, &f));
            match lp_criterion(&ctx, &g, s as i64).unwrap() {
                LpVerdict::Lp { s: s2, delta: d, .. } => {
                    assert_eq!(s2, s);
                    assert_eq!(d, delta);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn lp_round_trip_n6() {
        for p in [3u64, 5] {
            let ctx = FieldCtx::new(p, 1, 6, None).unwrap();
            let els: Vec<FqnElem> = ctx.elements().collect();
            let mut tested = 0;
            for (i, &delta) in els.iter().enumerate().step_by(if p == 3 { 23 } else { 997 }) {
                let nd = ctx.norm(delta);
                if nd.is_zero() || nd == FqnElem::ONE {
                    continue;
                }
                for s in [1usize, 5] {
                    let (g, _) = lp_vertex(&ctx, s, delta).unwrap();
                    let pr = pseudoregulus_criterion(&ctx, &g).unwrap();
                    assert!(!pr.holds, "i={i}");
                    match lp_criterion(&ctx, &g, s as i64).unwrap() {
                        LpVerdict::Lp { delta: d, .. } => assert_eq!(d, delta),
                        other => panic!("{other:?}"),
                    }
                }
                tested += 1;
            }
            assert!(tested > 5);
        }
    }

    #[test]
    fn harmonic_criterion_matches_norm() {
        let ctx = FieldCtx::new(3, 1, 5, None).unwrap();
        let mut seen = [false; 2];
        for delta in ctx.elements().skip(1) {
            for s in [1i64, 2] {
                let (g, _) = lp_vertex(&ctx, s as usize, delta).unwrap();
                let v = charact2_criterion(&ctx, &g, s).unwrap();
                assert_eq!(v.delta, delta);
                let norm_one = ctx.norm(delta) == FqnElem::ONE;
                assert_eq!(v.empty, !norm_one);
                seen[norm_one as usize] = true;
                if let Some(u) = v.witness {
                    // δ = u^{q^s (q^{s(n-2)} - 1)}
                    let su = s as usize;
                    let e = ctx.div(ctx.frob(u, su * 4), ctx.frob(u, su));
                    assert_eq!(e, delta);
                }
            }
        }
        assert!(seen[0] && seen[1]);
        let even = FieldCtx::new(3, 1, 6, None).unwrap();
        let (g, _) = lp_vertex(&even, 1, even.t_pow(1)).unwrap();
        assert!(matches!(charact2_criterion(&even, &g, 1), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn vertex_from_quadrinomial_code() {
        let ctx = FieldCtx::new(5, 1, 6, None).unwrap();
        let f = quad(&ctx);
        // Dual of <x, f>: h_i = x^{q^i} - b_i x^q for i = 2..5.
        let gens: Vec<LinPoly> = (2..6)
            .map(|i| LinPoly::from_terms(&ctx, &[(i, FqnElem::ONE), (1, ctx.neg(f.coeff(i)))]))
            .collect();
        let (f1, f2) = vertex_from_code(&ctx, &gens, 0, 1).unwrap();
        let pr = Projection { g1: f1, g2: f2, points: None };
        let g = pr.reconstructed(&ctx).unwrap();
        assert_eq!(enumerate_points(&ctx, &g), enumerate_points(&ctx, &f));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(40))]
        #[test]
        fn conjugate_chain_and_generating_point(seed in proptest::prelude::any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let ctx = FieldCtx::new(3, 1, 6, None).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let eqs: Vec<Vec<FqnElem>> = (0..2)
                .map(|_| (0..6).map(|_| ctx.elem(rng.gen_range(0..729)).unwrap()).collect())
                .collect();
            let g = ProjSubspace::from_equations(&ctx, &eqs);
            proptest::prop_assume!(g.dim() == 3 && meets_subgeometry(&ctx, &g).is_none());
            let k = g.dim();
            let r = intersection_number(&ctx, &g, 1).unwrap();
            let dims = conjugate_chain_dims(&ctx, &g, 1, r);
            for t in 0..r {
                proptest::prop_assert_eq!(dims[t], k - 2 * t as isize);
            }
            if 2 * r as isize != k + 3 {
                proptest::prop_assert_eq!(dims[r], k - 2 * r as isize + 1);
            }
            let gp = generating_point(&ctx, &g, 1).unwrap();
            let tstar = (k - r as isize + 1) as usize;
            proptest::prop_assert!(is_generating(&ctx, &g, &gp.point, 1, tstar));
        }
    }
}
