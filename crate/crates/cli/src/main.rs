use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scatlab::equiv::{self, EquivStatus, Strategy};
use scatlab::geometry::{self, LpVerdict};
use scatlab::rmcode::{self, RmCode};
use scatlab::{linset, Budget, Error, FieldCtx};
use scatlab_cli::parse::{self, poly_to_json, poly_to_string, subspace_to_json, vec_to_json};
use scatlab_cli::repro::{self, Suite};
use scatlab_cli::emit;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "scatlab", version, about = "Scattered linear sets of PG(1,q^n) and rank-metric codes")]
struct Cli {
    /// Field descriptor: JSON or key=value pairs such as `q=25,n=6`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Machine mode: JSON on stdout only, no summary on stderr.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Maximum number of enumerated items per sweep.
    #[arg(long, global = true)]
    budget: Option<u128>,
    /// Run the hours-scale extended claims.
    #[arg(long, global = true)]
    extended: bool,
    /// Ignore the budget.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether U_f = {(x, f(x))} is scattered.
    Scattered {
        #[arg(long)]
        f: String,
        /// Also compute the weight spectrum.
        #[arg(long)]
        spectrum: bool,
    },
    /// Weight spectrum of L_f.
    Spectrum {
        #[arg(long)]
        f: String,
    },
    /// Rank-metric code audits.
    Mrd {
        #[command(subcommand)]
        cmd: MrdCmd,
    },
    /// Delsarte dual of a code.
    Dual(CodeArgs),
    /// Left and right idealisers of a code.
    Idealiser(CodeArgs),
    /// Gabidulin and twisted Gabidulin recognition.
    Recognize(CodeArgs),
    /// Projective geometry of vertices in PG(n-1, q^n).
    Geometry {
        #[command(subcommand)]
        cmd: GeoCmd,
    },
    /// Semilinear equivalence of U_f and U_h.
    Equiv {
        #[arg(long)]
        f: String,
        #[arg(long)]
        h: String,
        /// Decide equivalence of the linear sets L_f and L_h instead.
        #[arg(long)]
        pgl: bool,
        #[arg(long, value_enum, default_value_t = StrategyArg::Kernel)]
        strategy: StrategyArg,
    },
    /// Re-run the registered claims and emit a report.
    Reproduce {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Largest q to run (default 13, or 29 with --extended).
        #[arg(long)]
        qmax: Option<u64>,
    },
}

#[derive(Subcommand)]
enum MrdCmd {
    /// Dimension, minimum distance, MRD verdict, idealisers and recognizers.
    Audit {
        #[command(flatten)]
        code: CodeArgs,
        /// Include the full rank distribution.
        #[arg(long)]
        distribution: bool,
    },
}

#[derive(Args)]
struct CodeArgs {
    /// JSON array of q-polynomials (coefficient arrays or term strings).
    #[arg(long)]
    gens: String,
    /// Take the F_{q^n}-span (left-linear code) instead of the F_q-span.
    #[arg(long)]
    left_linear: bool,
}

#[derive(Subcommand)]
enum GeoCmd {
    /// Intersection number of a vertex with respect to s.
    Intn {
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 1)]
        s: i64,
    },
    /// Project the canonical subgeometry from Γ onto Λ.
    Project {
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        lambda: String,
    },
    /// Pseudoregulus, LP and harmonic-conjugate criteria.
    Criteria {
        #[arg(long)]
        gamma: String,
        #[arg(long, default_value_t = 1)]
        s: i64,
    },
    /// Emit a standard vertex and axis.
    Vertex {
        #[arg(long, value_enum)]
        kind: VertexKind,
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Element encoding of δ for LP vertices.
        #[arg(long)]
        delta: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VertexKind {
    Quadrinomial,
    Lp,
    Pseudoregulus,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Kernel,
    SweepB,
}

struct Out {
    json: Value,
    summary: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (out, fail) = match run(&cli) {
        Ok(o) => (o, None),
        Err(e) => {
            let o = Out { json: json!({"error": error_json(&e)}), summary: format!("error: {e}") };
            (o, Some(2u8))
        }
    };
    let failed_claims = out.json.get("pass").and_then(Value::as_bool) == Some(false);
    // A closed stdout (e.g. piped into `head`) is not an error.
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
    if !cli.json || fail.is_some() {
        eprintln!("{}", out.summary);
    }
    ExitCode::from(fail.unwrap_or(if failed_claims { 1 } else { 0 }))
}

fn error_json(e: &Error) -> Value {
    match e {
        Error::Parse { at, msg } => json!({"kind": "parse", "at": at, "msg": msg}),
        other => json!({"kind": "input", "msg": other.to_string()}),
    }
}

fn budget(cli: &Cli) -> Budget {
    let mut b = cli.budget.map(Budget::new).unwrap_or_default();
    if cli.force {
        b.force = true;
    }
    b
}

fn field(cli: &Cli) -> Result<FieldCtx, Error> {
    let s = cli.field.as_deref().ok_or_else(|| Error::Parse { at: "--field".into(), msg: "a field descriptor is required".into() })?;
    Ok(parse::field_from_str(s)?)
}

fn code(ctx: &FieldCtx, a: &CodeArgs) -> Result<RmCode, Error> {
    let gens = parse::parse_polys(ctx, &a.gens)?;
    Ok(if a.left_linear { RmCode::fqn_span(ctx, &gens) } else { RmCode::fq_span(ctx, &gens) })
}

fn code_json(ctx: &FieldCtx, c: &RmCode) -> Value {
    json!({
        "left_linear": c.is_left_linear(),
        "dim_fq": c.dim_fq(ctx),
        "dim_fqn": c.dim_fqn(),
        "generators": c.generators().iter().map(|g| poly_to_json(ctx, g)).collect::<Vec<_>>(),
    })
}

fn recognizers(ctx: &FieldCtx, c: &RmCode) -> Value {
    let gab = match rmcode::gabidulin_recognize(ctx, c) {
        Ok(v) => json!(v),
        Err(e) => json!({"not_applicable": e.to_string()}),
    };
    let tw = match rmcode::twisted_recognize(ctx, c) {
        Ok(v) => emit::twisted(ctx, &v),
        Err(e) => json!({"not_applicable": e.to_string()}),
    };
    json!({"gabidulin_s": gab, "twisted": tw})
}

fn run(cli: &Cli) -> Result<Out, Error> {
    let budget = budget(cli);
    match &cli.cmd {
        Cmd::Scattered { f, spectrum } => {
            let ctx = field(cli)?;
            let f = parse::parse_poly(&ctx, f)?;
            let v = linset::is_scattered(&ctx, &f, &budget)?;
            let weights = if *spectrum { Some(emit::spectrum(&linset::weight_spectrum(&ctx, &f, &budget)?)) } else { None };
            let summary = format!("{}: {}", poly_to_string(&ctx, &f), if v.is_scattered() { "scattered" } else { "not scattered" });
            Ok(Out {
                json: json!({"field": emit::field(&ctx), "f": poly_to_json(&ctx, &f), "result": emit::scatter(&ctx, &v), "spectrum": weights}),
                summary,
            })
        }
        Cmd::Spectrum { f } => {
            let ctx = field(cli)?;
            let f = parse::parse_poly(&ctx, f)?;
            let s = linset::weight_spectrum(&ctx, &f, &budget)?;
            let summary = format!("rank {} linear set of size {}, weights {:?}", s.rank, s.size(), s.counts);
            Ok(Out { json: json!({"field": emit::field(&ctx), "f": poly_to_json(&ctx, &f), "spectrum": emit::spectrum(&s)}), summary })
        }
        Cmd::Mrd { cmd: MrdCmd::Audit { code: a, distribution } } => {
            let ctx = field(cli)?;
            let c = code(&ctx, a)?;
            let rep = rmcode::mrd_report(&ctx, &c, &budget)?;
            let dist = if *distribution { Some(rmcode::rank_distribution(&ctx, &c, &budget)?) } else { None };
            let l = rmcode::left_idealiser(&ctx, &c);
            let r = rmcode::right_idealiser(&ctx, &c);
            let summary = format!(
                "dim_Fq {} d {:?} {}; idealisers F_q^{:?} / F_q^{:?}",
                rep.dim_fq,
                rep.min_distance,
                if rep.is_mrd { "MRD" } else { "not MRD" },
                l.field_degree,
                r.field_degree
            );
            Ok(Out {
                json: json!({
                    "field": emit::field(&ctx),
                    "code": code_json(&ctx, &c),
                    "mrd": rep,
                    "distribution": dist.map(|d| d.counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>()),
                    "left_idealiser": {"dim_fq": l.dim_fq, "field_degree": l.field_degree},
                    "right_idealiser": {"dim_fq": r.dim_fq, "field_degree": r.field_degree},
                    "recognizers": recognizers(&ctx, &c),
                }),
                summary,
            })
        }
        Cmd::Dual(a) => {
            let ctx = field(cli)?;
            let c = code(&ctx, a)?;
            let d = rmcode::delsarte_dual(&ctx, &c);
            let summary = format!("dual has dim_Fq {} (code {})", d.dim_fq(&ctx), c.dim_fq(&ctx));
            Ok(Out { json: json!({"field": emit::field(&ctx), "code": code_json(&ctx, &c), "dual": code_json(&ctx, &d)}), summary })
        }
        Cmd::Idealiser(a) => {
            let ctx = field(cli)?;
            let c = code(&ctx, a)?;
            let l = rmcode::left_idealiser(&ctx, &c);
            let r = rmcode::right_idealiser(&ctx, &c);
            let summary = format!("left idealiser dim {} field {:?}; right dim {} field {:?}", l.dim_fq, l.field_degree, r.dim_fq, r.field_degree);
            Ok(Out { json: json!({"field": emit::field(&ctx), "left": emit::idealiser(&ctx, &l), "right": emit::idealiser(&ctx, &r)}), summary })
        }
        Cmd::Recognize(a) => {
            let ctx = field(cli)?;
            let c = code(&ctx, a)?;
            let rec = recognizers(&ctx, &c);
            let summary = format!("gabidulin s: {}; twisted: {}", rec["gabidulin_s"], rec["twisted"].as_array().map_or(0, |v| v.iter().filter(|x| !x["match"].is_null()).count()));
            Ok(Out { json: json!({"field": emit::field(&ctx), "code": code_json(&ctx, &c), "recognizers": rec}), summary })
        }
        Cmd::Geometry { cmd } => geometry_cmd(cli, cmd, &budget),
        Cmd::Equiv { f, h, pgl, strategy } => {
            let ctx = field(cli)?;
            let f = parse::parse_poly(&ctx, f)?;
            let h = parse::parse_poly(&ctx, h)?;
            let strategy = match strategy {
                StrategyArg::Kernel => Strategy::Kernel,
                StrategyArg::SweepB => Strategy::SweepB,
            };
            let v = if *pgl {
                equiv::pgl_linear_set_equivalent(&ctx, &f, &h, strategy, &budget)
            } else {
                equiv::gl_equivalent(&ctx, &f, &h, strategy, &budget)
            };
            let summary = format!(
                "{}: {} witness(es){}",
                match v.status {
                    EquivStatus::Equivalent => "equivalent",
                    EquivStatus::InequivalentExhausted => "inequivalent (exhaustive)",
                    EquivStatus::InconclusiveBudget => "inconclusive (budget)",
                },
                v.witnesses.len(),
                if v.one_sided { ", one-sided for this n" } else { "" }
            );
            Ok(Out { json: json!({"field": emit::field(&ctx), "f": poly_to_json(&ctx, &f), "h": poly_to_json(&ctx, &h), "verdict": emit::equiv(&ctx, &v)}), summary })
        }
        Cmd::Reproduce { suite, qmax } => {
            let qmax = qmax.unwrap_or(if cli.extended { repro::EXTENDED_QMAX } else { repro::STANDARD_QMAX });
            if !cli.json {
                for (id, q, size) in repro::extended_plan(*suite) {
                    if cli.extended && q <= qmax {
                        // About 3e6 points per second per core on a desktop.
                        eprintln!("extended: {id} at q={q}: ~{size} field elements, roughly {} s per core", size / 3_000_000);
                    } else if !cli.extended && q <= qmax {
                        eprintln!("skipped: {id} at q={q} needs --extended");
                    }
                }
            }
            let rep = repro::run_reproduction(*suite, qmax, cli.extended, &budget);
            let mut summary = String::new();
            for e in &rep.entries {
                summary.push_str(&format!("{:?} {} q={} n={} ({} ms)\n", e.verdict, e.claim_id, e.q, e.n, e.runtime_ms));
            }
            summary.push_str(if rep.pass { "all claims pass" } else { "some claims FAILED" });
            Ok(Out { json: serde_json::to_value(&rep).expect("serializable"), summary })
        }
    }
}

fn geometry_cmd(cli: &Cli, cmd: &GeoCmd, budget: &Budget) -> Result<Out, Error> {
    let ctx = field(cli)?;
    match cmd {
        GeoCmd::Intn { gamma, s } => {
            let g = parse::parse_subspace(&ctx, gamma)?;
            let r = geometry::intersection_number(&ctx, &g, *s)?;
            let dims = geometry::conjugate_chain_dims(&ctx, &g, *s, r + 1);
            Ok(Out { json: json!({"field": emit::field(&ctx), "s": s, "intn": r, "chain_dims": dims}), summary: format!("intn = {r}, chain dims {dims:?}") })
        }
        GeoCmd::Project { gamma, lambda } => {
            let g = parse::parse_subspace(&ctx, gamma)?;
            let l = parse::parse_subspace(&ctx, lambda)?;
            let pr = geometry::project(&ctx, &g, &l, budget)?;
            let f = pr.reconstructed(&ctx);
            let pts = pr.points.as_ref();
            let summary = format!(
                "projection g1 = {}, g2 = {}; {} points; f = {}",
                poly_to_string(&ctx, &pr.g1),
                poly_to_string(&ctx, &pr.g2),
                pts.map_or(0, |p| p.len()),
                f.as_ref().map_or("-".into(), |f| poly_to_string(&ctx, f))
            );
            Ok(Out {
                json: json!({
                    "field": emit::field(&ctx),
                    "g1": poly_to_json(&ctx, &pr.g1),
                    "g2": poly_to_json(&ctx, &pr.g2),
                    "f": f.map(|f| poly_to_json(&ctx, &f)),
                    "points": pts.map(|p| p.iter().map(|(pt, w)| json!({"point": emit::line_point(&ctx, pt), "weight": w})).collect::<Vec<_>>()),
                }),
                summary,
            })
        }
        GeoCmd::Criteria { gamma, s } => {
            let g = parse::parse_subspace(&ctx, gamma)?;
            let pr = geometry::pseudoregulus_criterion(&ctx, &g)?;
            let lp = match geometry::lp_criterion(&ctx, &g, *s)? {
                LpVerdict::NotApplicable { intn } => json!({"verdict": "not_applicable", "intn": intn}),
                LpVerdict::NotLp { r } => json!({"verdict": "not_lp", "r": vec_to_json(&ctx, &r)}),
                LpVerdict::Lp { s, delta, r, q_point } => json!({
                    "verdict": "lp", "s": s, "delta": emit::elem(&ctx, delta),
                    "r": vec_to_json(&ctx, &r), "q_point": vec_to_json(&ctx, &q_point),
                }),
            };
            let harmonic = match geometry::charact2_criterion(&ctx, &g, *s) {
                Ok(v) => json!({
                    "empty": v.empty,
                    "witness": v.witness.map(|u| ctx.encode(u)),
                    "delta": emit::elem(&ctx, v.delta),
                    "delta_norm": emit::elem(&ctx, v.delta_norm),
                }),
                Err(e) => json!({"not_applicable": e.to_string()}),
            };
            let summary = format!("pseudoregulus: {}; lp: {}; harmonic: {}", pr.holds, lp["verdict"], harmonic);
            Ok(Out { json: json!({"field": emit::field(&ctx), "pseudoregulus": pr, "lp": lp, "harmonic": harmonic}), summary })
        }
        GeoCmd::Vertex { kind, s, delta } => {
            let (g, l) = match kind {
                VertexKind::Quadrinomial => geometry::quadrinomial_vertex(&ctx)?,
                VertexKind::Pseudoregulus => geometry::pseudoregulus_vertex(&ctx),
                VertexKind::Lp => {
                    let d = delta.ok_or_else(|| Error::Parse { at: "--delta".into(), msg: "LP vertices need --delta".into() })?;
                    geometry::lp_vertex(&ctx, *s, ctx.elem(d).map_err(|e| Error::Parse { at: "--delta".into(), msg: e.to_string() })?)?
                }
            };
            let summary = format!("vertex of projective dimension {}, axis of dimension {}", g.dim(), l.dim());
            Ok(Out { json: json!({"field": emit::field(&ctx), "gamma": subspace_to_json(&ctx, &g), "lambda": subspace_to_json(&ctx, &l)}), summary })
        }
    }
}
