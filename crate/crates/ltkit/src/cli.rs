//! Command-line front end. `dispatch` returns the process exit status.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::building::{ball, ball_dot, ball_layers, BuildingVertex};
use crate::cells::{assemble_complex, cocycle_check, cocycle_report, constraint_model, integral_generators, triangles_at};
use crate::error::{Error, Result};
use crate::hecke::{canonical_quotient, conservation, reduce_to_domain, DEFAULT_BUDGET};
use crate::periods::{period_series, period_domains, valuation_identity};
use crate::polygon::{cm_polygon, NewtonPolygon};
use crate::valcore::{is_prime, q_json, Val, Q};
use crate::wittlab::{selftest as witt_selftest, WittPolys};

#[derive(Parser, Debug)]
#[command(name = "ltkit", version, about = "Lubin-Tate period maps, polygons, Hecke steps, cells and Witt vectors")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
    Dot,
    Svg,
}

#[derive(Args, Debug, Clone)]
pub struct PolyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub q: u64,
    /// Valuations `v(x_1), ..., v(x_{n-1})` as `a/b` or `inf`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub vals: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Period tuple `(f_0, ..., f_{n-1})` truncated at depth.
    Periods {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        depth: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Valuations of `f_i / f_0` at a point with prescribed coordinate valuations.
    Valuations {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
    /// Newton polygon of the torsion points.
    Polygon {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// CM polygon with ramification `e`.
    Cm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        e: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Canonical quotients and greedy reduction into the domain.
    #[command(subcommand)]
    Hecke(HeckeCmd),
    /// Ball around the standard vertex.
    Building {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cell complex over a building ball.
    #[command(subcommand)]
    Cells(CellsCmd),
    /// Witt vector structure polynomials and checks.
    #[command(subcommand)]
    Witt(WittCmd),
    /// Quick checks across all modules.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum HeckeCmd {
    /// Greedy reduction into the fundamental domain.
    Reduce {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Quotient by the canonical subgroup of rank `q^i`.
    Quotient {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        i: usize,
    },
    /// Random polygons: conservation and termination statistics.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CellsCmd {
    /// Cell complex on a ball, with gluing and cocycle results.
    Complex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Integral generators `x^e / pi^k` for the boundary strata.
    Generators {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum WittCmd {
    /// Identity suite and structure polynomials.
    Selftest {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        len: usize,
    },
}

fn parse_vals(v: &[String]) -> Result<Vec<Val>> {
    v.iter().map(|s| Val::parse(s)).collect()
}

fn polygon_of(a: &PolyArgs) -> Result<NewtonPolygon> {
    NewtonPolygon::from_vals(a.n, a.q, &parse_vals(&a.vals)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("p = {p} is not prime")))
    }
}

/// Status line bundle; the run fails if any check fails.
struct Checks(Vec<(String, bool)>);

impl Checks {
    fn add(&mut self, name: &str, ok: Result<bool>) {
        self.0.push((name.to_string(), ok.unwrap_or(false)));
    }
}

fn selftest() -> Result<(String, bool)> {
    let mut c = Checks(Vec::new());
    c.add("periods n=2 depth 2", (|| {
        let pt = period_series(2, 3, 2)?;
        Ok(pt.f[0].len() == 2 && pt.f[1].len() == 1)
    })());
    c.add("valuation identity", (|| {
        let v = vec![Val::Fin(Q::new(1, 2))];
        Ok(period_domains(2, 2, &v)?.source && valuation_identity(2, 2, &v, 3)? == v)
    })());
    c.add("polygon example", (|| {
        let poly = NewtonPolygon::from_vals(2, 3, &[Val::Fin(Q::new(1, 2))])?;
        Ok(poly.slopes == vec![Q::new(1, 4), Q::new(1, 12)] && poly.boundary_indices() == vec![1])
    })());
    c.add("hecke reduce example", (|| {
        let r = reduce_to_domain(&NewtonPolygon::from_vals(2, 3, &[Val::Fin(Q::new(3, 10))])?, DEFAULT_BUDGET)?;
        Ok(r.steps == vec![1] && r.fin.vertex_vals[1] == Q::new(7, 10))
    })());
    c.add("tree ball sizes", (|| Ok(ball_layers(&BuildingVertex::standard(2, 3), 2)? == vec![1, 4, 12])) ());
    c.add("cell gluing involutive", (|| {
        Ok(assemble_complex(&ball(&BuildingVertex::standard(2, 2), 2)?, 2)?.is_involutive())
    })());
    c.add("witt suite", (|| Ok(witt_selftest(2, 3)?.iter().all(|l| l.pass)))());
    let mut out = String::new();
    let mut all = true;
    for (name, ok) in &c.0 {
        all &= ok;
        out.push_str(&format!("{} {name}\n", if *ok { "PASS" } else { "FAIL" }));
    }
    Ok((out, all))
}

fn sample_vals(rng: &mut ChaCha8Rng, n: usize) -> Vec<Val> {
    (1..n).map(|_| Val::Fin(Q::new(rng.gen_range(1..=60), rng.gen_range(1..=30)))).collect()
}

fn run(cmd: &Command) -> Result<(String, bool)> {
    let ok = |s: String| Ok((s, true));
    match cmd {
        Command::Periods { n, q, depth, format } => {
            let pt = period_series(*n, *q, *depth)?;
            match format {
                Format::Text => ok(pt.to_string()),
                _ => ok(pretty(&pt.to_json())),
            }
        }
        Command::Valuations { poly, depth } => {
            let vals = parse_vals(&poly.vals)?;
            let dom = period_domains(poly.n, poly.q, &vals)?;
            let v = valuation_identity(poly.n, poly.q, &vals, *depth)?;
            ok(pretty(&json!({ "in_source": dom.source, "ratio_vals": v })))
        }
        Command::Polygon { poly, format } => {
            let pg = polygon_of(poly)?;
            ok(render_polygon(&pg, *format))
        }
        Command::Cm { n, q, e, format } => ok(render_polygon(&cm_polygon(*n, *q, *e)?, *format)),
        Command::Hecke(HeckeCmd::Reduce { poly, budget }) => ok(pretty(&reduce_to_domain(&polygon_of(poly)?, *budget)?.to_json())),
        Command::Hecke(HeckeCmd::Quotient { poly, i }) => {
            let step = canonical_quotient(&polygon_of(poly)?, *i)?;
            let (mass, count) = conservation(&step);
            let mut v = step.to_json();
            v["mass"] = q_json(&mass);
            v["count"] = json!(count.to_string());
            ok(pretty(&v))
        }
        Command::Hecke(HeckeCmd::Sample { n, q, count, seed, budget }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let (mut conserved, mut reduced, mut max_steps) = (0usize, 0usize, 0usize);
            let mut failures = Vec::new();
            let target = q_pow(*q, *n)? - 1;
            for _ in 0..*count {
                let vals = sample_vals(&mut rng, *n);
                let pg = NewtonPolygon::from_vals(*n, *q, &vals)?;
                let mut good = true;
                for i in pg.ruptures() {
                    let (m, c) = conservation(&canonical_quotient(&pg, i)?);
                    good &= m == Q::from_integer(1) && c == target;
                }
                conserved += good as usize;
                match reduce_to_domain(&pg, *budget) {
                    Ok(r) => {
                        reduced += 1;
                        max_steps = max_steps.max(r.steps.len());
                    }
                    Err(e) => failures.push(json!({ "vals": vals, "error": e.to_string() })),
                }
            }
            let all = conserved == *count && reduced == *count;
            let v = json!({ "count": count, "seed": seed, "conserved": conserved, "reduced": reduced, "max_steps": max_steps, "failures": failures });
            Ok((pretty(&v), all))
        }
        Command::Building { n, p, radius, format } => {
            check_prime(*p)?;
            let a = BuildingVertex::standard(*n, *p);
            let b = ball(&a, *radius)?;
            match format {
                Format::Dot => ok(ball_dot(&b)?),
                _ => ok(pretty(&json!({
                    "n": n, "p": p, "radius": radius,
                    "layers": ball_layers(&a, *radius)?,
                    "vertices": b.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
                }))),
            }
        }
        Command::Cells(CellsCmd::Complex { n, p, radius, level, format }) => {
            check_prime(*p)?;
            let a = BuildingVertex::standard(*n, *p);
            let b = ball(&a, *radius)?;
            let cx = assemble_complex(&b, *level)?;
            if *format == Format::Dot {
                return ok(cx.to_dot());
            }
            let (tested, passed, control) = cocycles(&cx, &b)?;
            let mut v = cx.to_json();
            v["involutive"] = json!(cx.is_involutive());
            v["cocycle"] = json!({ "triangles": tested, "passed": passed, "corrupted_rejected": control });
            Ok((pretty(&v), cx.is_involutive() && passed == tested && control == tested))
        }
        Command::Cells(CellsCmd::Generators { n, i }) => {
            let is: Vec<usize> = match i {
                Some(i) => vec![*i],
                None => (1..*n).collect(),
            };
            let mut rows = Vec::new();
            let mut alphas = Vec::new();
            for &i in &is {
                let g = integral_generators(*n, i)?;
                alphas.push(Q::new((*n - i) as i128, *n as i128));
                rows.push(json!({ "i": i, "generators": g.iter().map(|(e, k)| json!({ "x": e, "pi": k })).collect::<Vec<_>>() }));
            }
            let models = constraint_model(&alphas)?;
            let all = models.iter().all(|m| m.nonnegative && m.saturated);
            let v = json!({ "n": n, "strata": rows, "models": models.iter().map(|m| m.to_json()).collect::<Vec<_>>() });
            Ok((pretty(&v), all))
        }
        Command::Witt(WittCmd::Selftest { q, len }) => {
            let wp = WittPolys::new(*q, *len)?;
            let lines = witt_selftest(*q, *len)?;
            let mut s = String::new();
            for l in wp.render() {
                s.push_str(&l);
                s.push('\n');
            }
            let mut all = true;
            for l in &lines {
                all &= l.pass;
                let detail = if l.detail.is_empty() { String::new() } else { format!(" ({})", l.detail) };
                s.push_str(&format!("{} {}{detail}\n", if l.pass { "PASS" } else { "FAIL" }, l.name));
            }
            Ok((s, all))
        }
        Command::Selftest => selftest(),
    }
}

fn q_pow(q: u64, n: usize) -> Result<u128> {
    (q as u128).checked_pow(n as u32).ok_or_else(|| Error::Domain("q^n overflows".into()))
}

/// Every 2-simplex with all vertices in the ball: (tested, passed, corrupted copies rejected).
pub fn cocycles(cx: &crate::cells::CellComplex, b: &BTreeSet<BuildingVertex>) -> Result<(usize, usize, usize)> {
    let (mut t, mut pass, mut rej) = (0, 0, 0);
    for a in b {
        for tri in triangles_at(a)? {
            if !tri.vertices().iter().all(|v| cx.contains(v)) {
                continue;
            }
            t += 1;
            pass += cocycle_check(cx, &tri)? as usize;
            rej += !cocycle_report(cx, &tri, true)?.holds as usize;
        }
    }
    Ok((t, pass, rej))
}

fn render_polygon(pg: &NewtonPolygon, f: Format) -> String {
    match f {
        Format::Svg => pg.render_svg(),
        Format::Text => pg.render_ascii(60, 20),
        _ => pretty(&pg.to_json()),
    }
}

/// Parse, run, write. Status 0 on success, 1 on domain errors or failed checks, 2 on usage errors.
pub fn dispatch<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let msg = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(msg.as_bytes()) } else { stderr.write_all(msg.as_bytes()) };
            return code;
        }
    };
    match run(&cli.cmd) {
        Ok((text, all)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string()),
                None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            if all {
                0
            } else {
                let _ = writeln!(stderr, "error: some checks failed");
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
