//! Claim registry and the reproduction harness.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use scatlab::catalog::{self, Family};
use scatlab::equiv::{self, EquivStatus, Strategy};
use scatlab::geometry::{self, LpVerdict};
use scatlab::linset::{self, LinePoint};
use scatlab::rmcode::{self, RmCode};
use scatlab::{Budget, Error, FieldCtx, FieldDescriptor, FqnElem, LinPoly, Result};
use serde::Serialize;
use serde_json::{json, Value};

use crate::emit;
use crate::parse::poly_to_json;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest q run without `--extended`.
pub const STANDARD_QMAX: u64 = 13;
/// Largest q any claim is registered for.
pub const EXTENDED_QMAX: u64 = 29;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Scattered,
    Equivalence,
    Geometry,
    Mrd,
    All,
}

/// A registered claim. Every claim is an exact statement.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Claim {
    pub id: &'static str,
    pub anchor: &'static str,
    pub suite: Suite,
    pub tolerance: &'static str,
}

const fn claim(id: &'static str, anchor: &'static str, suite: Suite) -> Claim {
    Claim { id, anchor, suite, tolerance: "exact" }
}

pub const REGISTRY: &[Claim] = &[
    claim("quadrinomial-scattered", "x^q - x^{q^2} + x^{q^4} + x^{q^5} is scattered for q = 1 mod 4, q <= 29", Suite::Scattered),
    claim("lp-binomial-dichotomy", "delta x^{q^s} + x^{q^{n-s}} is scattered iff N(delta) != 1", Suite::Scattered),
    claim("vertex-misses-subgeometry", "the quadrinomial vertex is disjoint from the canonical subgeometry", Suite::Geometry),
    claim("vertex-conjugate-chain", "dim(G cap G^s) = 1 and G cap G^s cap G^{s^2} is empty", Suite::Geometry),
    claim("vertex-intersection-number", "intn(G) = 3 for both generators s = 1 and s = n - 1", Suite::Geometry),
    claim("vertex-projection", "projecting the subgeometry from the vertex gives the quadrinomial linear set", Suite::Geometry),
    claim("lp-criterion-round-trip", "the LP criterion recovers (s, delta) from an LP vertex", Suite::Geometry),
    claim("pseudoregulus-criterion", "the pseudoregulus criterion accepts <e_2..e_{n-1}> and rejects LP and quadrinomial vertices", Suite::Geometry),
    claim("harmonic-criterion", "the harmonic-conjugate criterion holds iff N(delta) != 1 for odd n", Suite::Geometry),
    claim("trinomial-witness", "(a,b,c,d) = (-1,1,3,3) solves the trinomial system at q = 5, delta = 2", Suite::Equivalence),
    claim("quadrinomial-trinomial-equivalent", "for q = 0 mod 5 the quadrinomial set is equivalent to the trinomial set", Suite::Equivalence),
    claim("binomial14-system-empty", "the system against delta x^q + x^{q^4} has no invertible solution at q = 5", Suite::Equivalence),
    claim("trinomial-systems-empty", "both trinomial systems have no invertible solution for q != 0 mod 5", Suite::Equivalence),
    claim("catalog-inequivalent", "the quadrinomial set is new: inequivalent to all four known families", Suite::Equivalence),
    claim("quadrinomial-code-mrd", "the quadrinomial code is MRD with parameters (6,6,q;5) and left idealiser F_{q^6}", Suite::Mrd),
    claim("binomial-mrd-iff-scattered", "C_f is MRD iff f is scattered, binomials at n = 4, q = 3", Suite::Mrd),
    claim("gabidulin-recognized", "Gabidulin codes are recognized and twisted Gabidulin codes with eta != 0 are not", Suite::Mrd),
    claim("twisted-recognized", "twisted Gabidulin H_{3,1}(eta) is recognized at n = 6", Suite::Mrd),
    claim("idealiser-types", "twisted Gabidulin idealisers are F_{q^gcd(n,h)} and F_{q^gcd(n,sk-h)}", Suite::Mrd),
    claim("delsarte-duality", "dim C + dim C^perp = n^2, C^perp^perp = C, and the duals of binomial and Gabidulin codes", Suite::Mrd),
];

pub fn lookup(id: &str) -> Option<&'static Claim> {
    REGISTRY.iter().find(|c| c.id == id)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    BudgetExceeded,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimEntry {
    pub claim_id: &'static str,
    pub anchor: &'static str,
    pub tolerance: &'static str,
    pub q: u64,
    pub n: u32,
    pub field: Option<FieldDescriptor>,
    pub verdict: Verdict,
    pub runtime_ms: u64,
    pub certificate: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReproReport {
    pub schema_version: u32,
    pub suite: Suite,
    pub qmax: u64,
    pub extended: bool,
    pub budget: u128,
    pub fields: Vec<FieldDescriptor>,
    pub entries: Vec<ClaimEntry>,
    pub pass: bool,
}

type Check = fn(&FieldCtx, &Budget) -> Result<(bool, Value)>;

struct Task {
    claim: &'static Claim,
    q: u64,
    n: u32,
    run: Check,
}

fn task(id: &str, q: u64, n: u32, run: Check) -> Task {
    Task { claim: lookup(id).expect("registered claim"), q, n, run }
}

/// Odd prime powers `q = 1 mod 4` up to 29.
const SCATTERED_QS: [u64; 6] = [5, 9, 13, 17, 25, 29];
/// Values of q with q != 0 mod 5 for which inequivalence is claimed.
const INEQUIVALENCE_QS: [u64; 3] = [9, 13, 17];

fn tasks(suite: Suite, qmax: u64, extended: bool) -> Vec<Task> {
    let cap = if extended { qmax.min(EXTENDED_QMAX) } else { qmax.min(STANDARD_QMAX) };
    let within = |q: u64| q <= cap;
    let mut out = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Scattered) {
        for q in SCATTERED_QS.into_iter().filter(|&q| within(q)) {
            out.push(task("quadrinomial-scattered", q, 6, quadrinomial_scattered));
        }
        if within(3) {
            out.push(task("lp-binomial-dichotomy", 3, 5, lp_dichotomy));
        }
    }
    if want(Suite::Geometry) {
        for q in [5, 9].into_iter().filter(|&q| within(q)) {
            out.push(task("vertex-misses-subgeometry", q, 6, vertex_misses));
            out.push(task("vertex-conjugate-chain", q, 6, vertex_chain));
            out.push(task("vertex-intersection-number", q, 6, vertex_intn));
        }
        if within(5) {
            out.push(task("vertex-projection", 5, 6, vertex_projection));
        }
        for q in [3, 5].into_iter().filter(|&q| within(q)) {
            out.push(task("lp-criterion-round-trip", q, 6, lp_round_trip));
        }
        if within(5) {
            out.push(task("pseudoregulus-criterion", 5, 6, pseudoregulus_claim));
        }
        if within(3) {
            out.push(task("harmonic-criterion", 3, 5, harmonic_claim));
        }
    }
    if want(Suite::Equivalence) {
        if within(5) {
            out.push(task("trinomial-witness", 5, 6, trinomial_witness));
            out.push(task("quadrinomial-trinomial-equivalent", 5, 6, quadrinomial_equivalent));
            out.push(task("binomial14-system-empty", 5, 6, binomial14_empty));
        }
        for q in INEQUIVALENCE_QS.into_iter().filter(|&q| within(q)) {
            out.push(task("trinomial-systems-empty", q, 6, trinomial_systems_empty));
            out.push(task("catalog-inequivalent", q, 6, catalog_inequivalent));
        }
    }
    if want(Suite::Mrd) {
        if within(5) {
            out.push(task("quadrinomial-code-mrd", 5, 6, quadrinomial_code));
        }
        if within(3) {
            out.push(task("binomial-mrd-iff-scattered", 3, 4, binomial_mrd));
            for n in [4, 5, 6] {
                out.push(task("gabidulin-recognized", 3, n, gabidulin_claim));
            }
            out.push(task("twisted-recognized", 3, 6, twisted_claim));
            out.push(task("idealiser-types", 3, 4, idealiser_claim));
            out.push(task("delsarte-duality", 3, 4, duality_claim));
        }
    }
    out
}

/// Claims whose sweeps only run with `--extended`, with a rough size of each.
pub fn extended_plan(suite: Suite) -> Vec<(&'static str, u64, u128)> {
    let mut out = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    for q in SCATTERED_QS.into_iter().filter(|&q| q > STANDARD_QMAX && want(Suite::Scattered)) {
        out.push(("quadrinomial-scattered", q, (q as u128).pow(6)));
    }
    for q in INEQUIVALENCE_QS.into_iter().filter(|&q| q > STANDARD_QMAX && want(Suite::Equivalence)) {
        out.push(("trinomial-systems-empty", q, (q as u128).pow(6)));
    }
    out
}

fn field_for(q: u64, n: u32) -> Result<FieldCtx> {
    let (p, h) = crate::parse::prime_power(q).ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    FieldCtx::new(p, h, n, None)
}

fn run_task(t: &Task, budget: &Budget) -> ClaimEntry {
    let start = Instant::now();
    let ctx = field_for(t.q, t.n);
    let field = ctx.as_ref().ok().map(|c| c.descriptor());
    let res = ctx.and_then(|ctx| (t.run)(&ctx, budget));
    let (verdict, certificate) = match res {
        Ok((true, c)) => (Verdict::Pass, c),
        Ok((false, c)) => (Verdict::Fail, c),
        Err(e @ Error::BudgetExceeded { .. }) => (Verdict::BudgetExceeded, json!({"error": e.to_string()})),
        Err(e) => (Verdict::Error, json!({"error": e.to_string()})),
    };
    ClaimEntry {
        claim_id: t.claim.id,
        anchor: t.claim.anchor,
        tolerance: t.claim.tolerance,
        q: t.q,
        n: t.n,
        field,
        verdict,
        runtime_ms: start.elapsed().as_millis() as u64,
        certificate,
    }
}

pub fn run_reproduction(suite: Suite, qmax: u64, extended: bool, budget: &Budget) -> ReproReport {
    let ts = tasks(suite, qmax, extended);
    let entries: Vec<ClaimEntry> = ts.par_iter().map(|t| run_task(t, budget)).collect();
    let mut fields: Vec<FieldDescriptor> = entries.iter().filter_map(|e| e.field.clone()).collect();
    fields.sort_by_key(|d| (d.p, d.h, d.n));
    fields.dedup();
    let pass = entries.iter().all(|e| e.verdict == Verdict::Pass);
    ReproReport { schema_version: SCHEMA_VERSION, suite, qmax, extended, budget: budget.limit, fields, entries, pass }
}

// Claim checks.

fn quadrinomial_scattered(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let f = catalog::quadrinomial(ctx)?;
    let v = linset::is_scattered(ctx, &f, budget)?;
    Ok((v.is_scattered(), json!({"f": poly_to_json(ctx, &f), "result": emit::scatter(ctx, &v)})))
}

fn lp_dichotomy(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let n = ctx.n();
    let mut checked = 0u64;
    let mut scattered = 0u64;
    for s in geometry::coprime_generators(n) {
        for delta in ctx.elements().skip(1) {
            let f = LinPoly::from_terms(ctx, &[(s, delta), (n - s, FqnElem::ONE)]);
            let sc = linset::is_scattered(ctx, &f, budget)?.is_scattered();
            if sc != (ctx.norm(delta) != FqnElem::ONE) {
                return Ok((false, json!({"s": s, "delta": emit::elem(ctx, delta), "scattered": sc})));
            }
            checked += 1;
            scattered += sc as u64;
        }
    }
    Ok((true, json!({"checked": checked, "scattered": scattered})))
}

fn vertex_misses(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let (g, _) = geometry::quadrinomial_vertex(ctx)?;
    let hit = geometry::meets_subgeometry(ctx, &g);
    Ok((hit.is_none(), json!({"meets": hit.map(|x| ctx.encode(x))})))
}

fn vertex_chain(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let (g, _) = geometry::quadrinomial_vertex(ctx)?;
    let dims = geometry::conjugate_chain_dims(ctx, &g, 1, 2);
    Ok((dims[1] == 1 && dims[2] == -1, json!({"chain_dims": dims})))
}

fn vertex_intn(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let (g, _) = geometry::quadrinomial_vertex(ctx)?;
    let n = ctx.n() as i64;
    let a = geometry::intersection_number(ctx, &g, 1)?;
    let b = geometry::intersection_number(ctx, &g, n - 1)?;
    Ok((a == 3 && b == 3, json!({"intn_s1": a, "intn_s_last": b})))
}

fn vertex_projection(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let (g, l) = geometry::quadrinomial_vertex(ctx)?;
    let pr = geometry::project(ctx, &g, &l, budget)?;
    let f = catalog::quadrinomial(ctx)?;
    let pts = pr.points.clone().unwrap_or_default();
    // Independent enumeration of L_f.
    let mut direct: Vec<LinePoint> = ctx
        .elements()
        .skip(1)
        .map(|x| LinePoint::Affine(ctx.div(f.eval(ctx, x), x)))
        .collect();
    direct.sort_by_key(|p| match p {
        LinePoint::Affine(m) => ctx.encode(*m),
        LinePoint::Infinity => u64::MAX,
    });
    direct.dedup();
    let projected: Vec<LinePoint> = pts.iter().map(|(p, _)| *p).collect();
    let all_weight_one = pts.iter().all(|&(_, w)| w == 1);
    let ok = projected == direct && all_weight_one && pr.reconstructed(ctx).as_ref() == Some(&f);
    Ok((ok, json!({"points": projected.len(), "enumerated": direct.len(), "all_weight_one": all_weight_one})))
}

fn lp_round_trip(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let stride = if ctx.q() == 3 { 7 } else { 97 };
    let deltas: Vec<FqnElem> = ctx
        .elements()
        .step_by(stride)
        .filter(|&d| Family::LpBinomial.is_valid(ctx, d))
        .take(50)
        .collect();
    let n = ctx.n();
    for &delta in &deltas {
        for s in geometry::coprime_generators(n) {
            let (g, _) = geometry::lp_vertex(ctx, s, delta)?;
            match geometry::lp_criterion(ctx, &g, s as i64)? {
                LpVerdict::Lp { s: s2, delta: d, .. } if s2 == s && d == delta => {}
                other => {
                    return Ok((false, json!({"delta": emit::elem(ctx, delta), "s": s, "got": format!("{other:?}")})));
                }
            }
        }
    }
    Ok((deltas.len() == 50, json!({"deltas": deltas.len()})))
}

fn pseudoregulus_claim(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let (pr, _) = geometry::pseudoregulus_vertex(ctx);
    let accept = geometry::pseudoregulus_criterion(ctx, &pr)?;
    let delta = ctx.elements().find(|&d| Family::LpBinomial.is_valid(ctx, d)).expect("valid delta");
    let (lp, _) = geometry::lp_vertex(ctx, 1, delta)?;
    let lp_v = geometry::pseudoregulus_criterion(ctx, &lp)?;
    let (qv, _) = geometry::quadrinomial_vertex(ctx)?;
    let q_v = geometry::pseudoregulus_criterion(ctx, &qv)?;
    let ok = accept.holds && !lp_v.holds && !q_v.holds;
    Ok((ok, json!({"pseudoregulus": accept, "lp": lp_v, "quadrinomial": q_v})))
}

fn harmonic_claim(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let mut checked = 0u64;
    for s in geometry::coprime_generators(ctx.n()) {
        for delta in ctx.elements().skip(1) {
            let (g, _) = geometry::lp_vertex(ctx, s, delta)?;
            let v = geometry::charact2_criterion(ctx, &g, s as i64)?;
            if v.empty != (ctx.norm(delta) != FqnElem::ONE) {
                return Ok((false, json!({"s": s, "delta": emit::elem(ctx, delta), "empty": v.empty})));
            }
            checked += 1;
        }
    }
    Ok((true, json!({"checked": checked})))
}

fn trinomial_h(ctx: &FieldCtx, delta: FqnElem, second: bool) -> LinPoly {
    let one = FqnElem::ONE;
    if second {
        LinPoly::from_terms(ctx, &[(1, delta), (3, one), (5, one)])
    } else {
        LinPoly::from_terms(ctx, &[(1, one), (3, one), (5, delta)])
    }
}

fn trinomial_witness(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let f = catalog::quadrinomial(ctx)?;
    let delta = ctx.from_fp(2);
    let sys = equiv::build_system(ctx, &f, &trinomial_h(ctx, delta, false), 0);
    let w = [ctx.from_fp(-1), FqnElem::ONE, ctx.from_fp(3), ctx.from_fp(3)];
    let det = ctx.sub(ctx.mul(w[0], w[3]), ctx.mul(w[1], w[2]));
    let ok = sys.is_solution(ctx, &w) && !det.is_zero();
    Ok((ok, json!({"system": sys.render(ctx, &[(delta, "δ")]), "det": emit::elem(ctx, det)})))
}

fn quadrinomial_equivalent(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let f = catalog::quadrinomial(ctx)?;
    let delta = ctx.from_fp(2);
    let h = trinomial_h(ctx, delta, false);
    let v = equiv::pgl_linear_set_equivalent(ctx, &f, &h, Strategy::Kernel, budget);
    let verified = v.witnesses.iter().all(|w| {
        let src = if w.adjoint { f.adjoint(ctx) } else { f.clone() };
        equiv::verify_witness(ctx, &src, &h, w)
    });
    Ok((v.status == EquivStatus::Equivalent && verified, emit::equiv(ctx, &v)))
}

fn binomial14_empty(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let f = catalog::quadrinomial(ctx)?;
    let mut logs = Vec::new();
    let mut ok = true;
    for delta in catalog::delta_classes(ctx, Family::Binomial14) {
        let h = Family::Binomial14.instantiate(ctx, delta)?;
        for j in 0..equiv::automorphism_count(ctx) {
            let sol = equiv::solve_system(ctx, &equiv::build_system(ctx, &f, &h, j), Strategy::Kernel, budget);
            ok &= sol.witness.is_none() && sol.exhausted;
            logs.push(format!("delta={} sigma=p^{j}: {}", ctx.encode(delta), sol.log));
        }
    }
    Ok((ok, json!({"log": logs})))
}

fn trinomial_systems_empty(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let f = catalog::quadrinomial(ctx)?;
    let deltas = catalog::trinomial_parameters(ctx);
    let mut logs = Vec::new();
    let mut ok = deltas.len() == 2;
    for &delta in &deltas {
        for second in [false, true] {
            let h = trinomial_h(ctx, delta, second);
            for j in 0..equiv::automorphism_count(ctx) {
                let sol = equiv::solve_system(ctx, &equiv::build_system(ctx, &f, &h, j), Strategy::SweepB, budget);
                ok &= sol.witness.is_none() && sol.exhausted;
                let label = if second { "delta x^q + x^{q^3} + x^{q^5}" } else { "x^q + x^{q^3} + delta x^{q^5}" };
                logs.push(format!("{label}, delta={}, sigma=p^{j}: {}", ctx.encode(delta), sol.log));
            }
        }
    }
    Ok((ok, json!({"deltas": deltas.iter().map(|&d| ctx.encode(d)).collect::<Vec<_>>(), "log": logs})))
}

fn catalog_inequivalent(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let f = catalog::quadrinomial(ctx)?;
    let mut out = Vec::new();
    let mut ok = true;
    for fam in Family::ALL {
        let v = equiv::catalog_equivalence(ctx, &f, fam, Strategy::Kernel, budget)?;
        ok &= v.status == EquivStatus::InequivalentExhausted;
        out.push(json!({"family": fam.label(), "classes": v.classes, "status": v.status}));
    }
    Ok((ok, json!({"families": out})))
}

fn quadrinomial_code(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let f = catalog::quadrinomial(ctx)?;
    let c = rmcode::code_from_subspace(ctx, &f);
    let rep = rmcode::mrd_report(ctx, &c, budget)?;
    let l = rmcode::left_idealiser(ctx, &c);
    let ok = rep.is_mrd && rep.min_distance == Some(5) && l.field_degree == Some(6);
    Ok((ok, json!({"mrd": rep, "left_idealiser_degree": l.field_degree})))
}

fn binomial_mrd(ctx: &FieldCtx, budget: &Budget) -> Result<(bool, Value)> {
    let n = ctx.n();
    let mut checked = 0u64;
    let mut mrd = 0u64;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            for lam in ctx.elements().skip(1) {
                let f = LinPoly::from_terms(ctx, &[(a, FqnElem::ONE), (b, lam)]);
                let sc = linset::is_scattered(ctx, &f, budget)?.is_scattered();
                let m = rmcode::is_mrd(ctx, &rmcode::code_from_subspace(ctx, &f), budget)?;
                if sc != m {
                    return Ok((false, json!({"a": a, "b": b, "lambda": emit::elem(ctx, lam), "scattered": sc, "mrd": m})));
                }
                checked += 1;
                mrd += m as u64;
            }
        }
    }
    Ok((true, json!({"checked": checked, "mrd": mrd})))
}

fn valid_eta(ctx: &FieldCtx, k: usize) -> FqnElem {
    let sign = if (ctx.n() * k) % 2 == 0 { FqnElem::ONE } else { ctx.neg(FqnElem::ONE) };
    ctx.elements().skip(1).find(|&e| ctx.norm(e) != sign).expect("valid eta")
}

fn gabidulin_claim(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let n = ctx.n();
    let mut rows = Vec::new();
    let mut ok = true;
    for k in 1..n {
        for s in geometry::coprime_generators(n) {
            let g = rmcode::gabidulin(ctx, k, s)?;
            let hit = rmcode::gabidulin_recognize(ctx, &g)?.contains(&s);
            let mut twisted_rejected = None;
            if (2..n - 1).contains(&k) {
                let h = rmcode::twisted_gabidulin(ctx, k, s, valid_eta(ctx, k), 0)?;
                twisted_rejected = Some(rmcode::gabidulin_recognize(ctx, &h)?.is_empty());
            }
            ok &= hit && twisted_rejected != Some(false);
            rows.push(json!({"k": k, "s": s, "recognized": hit, "twisted_rejected": twisted_rejected}));
        }
    }
    Ok((ok, json!({"cases": rows})))
}

fn twisted_claim(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let eta = valid_eta(ctx, 3);
    let h = rmcode::twisted_gabidulin(ctx, 3, 1, eta, 0)?;
    let att = rmcode::twisted_recognize(ctx, &h)?;
    let m = att.iter().find_map(|a| a.matched.clone());
    let ok = m.as_ref().is_some_and(|m| {
        let plus = m.p.add(ctx, &m.p.twist(ctx, 3 * m.s as i64).scale(ctx, m.eta));
        !m.eta.is_zero() && h.contains(ctx, &plus)
    });
    Ok((ok, json!({"eta": emit::elem(ctx, eta), "attempts": emit::twisted(ctx, &att)})))
}

fn idealiser_claim(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let n = ctx.n();
    let (k, s) = (2usize, 1usize);
    let eta = valid_eta(ctx, k);
    let mut rows = Vec::new();
    let mut ok = true;
    for h in 0..n {
        let c = rmcode::twisted_gabidulin(ctx, k, s, eta, h)?;
        let l = rmcode::left_idealiser(ctx, &c).field_degree;
        let r = rmcode::right_idealiser(ctx, &c).field_degree;
        let el = gcd(n, h);
        let er = gcd(n, (s * k + n - h % n) % n);
        ok &= l == Some(el) && r == Some(er);
        rows.push(json!({"h": h, "left": l, "right": r, "expected": [el, er]}));
    }
    Ok((ok, json!({"k": k, "s": s, "eta": emit::elem(ctx, eta), "cases": rows})))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn duality_claim(ctx: &FieldCtx, _: &Budget) -> Result<(bool, Value)> {
    let n = ctx.n();
    let order = ctx.order() as u64;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5ca7_1ab);
    let mut random_ok = true;
    for _ in 0..200 {
        let m = rng.gen_range(0..2 * n + 1);
        let gens: Vec<LinPoly> = (0..m)
            .map(|_| LinPoly::new(ctx, (0..n).map(|_| ctx.elem(rng.gen_range(0..order)).unwrap()).collect()))
            .collect::<Result<_>>()?;
        let c = RmCode::fq_span(ctx, &gens);
        let d = rmcode::delsarte_dual(ctx, &c);
        random_ok &= c.dim_fq(ctx) + d.dim_fq(ctx) == n * n && rmcode::delsarte_dual(ctx, &d).same_code(ctx, &c);
    }
    let b3 = ctx.t_pow(1);
    let f = LinPoly::from_terms(ctx, &[(1, FqnElem::ONE), (3, b3)]);
    let dual = rmcode::delsarte_dual(ctx, &rmcode::code_from_subspace(ctx, &f));
    let expected =
        RmCode::fqn_span(ctx, &[LinPoly::monomial(ctx, 2, FqnElem::ONE), LinPoly::from_terms(ctx, &[(3, FqnElem::ONE), (1, ctx.neg(b3))])]);
    let binomial_ok = dual.same_code(ctx, &expected);
    let mut gab_ok = true;
    for k in 1..n {
        for s in geometry::coprime_generators(n) {
            let d = rmcode::delsarte_dual(ctx, &rmcode::gabidulin(ctx, k, s)?);
            gab_ok &= d.dim_fqn() == Some(n - k) && rmcode::gabidulin_recognize(ctx, &d)?.contains(&s);
        }
    }
    Ok((random_ok && binomial_ok && gab_ok, json!({"random_codes": random_ok, "binomial_dual": binomial_ok, "gabidulin_duals": gab_ok})))
}
