//! The four subcommands. Each returns its rendered output and an exit code;
//! [`run`] writes the output and maps every error to its code.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use extsplash_core::bruckbose::{BruckBoseContext, Pt3};
use extsplash_core::curves;
use extsplash_core::projgeom::{self, format_subspace, format_vec, ProjSubspace};
use extsplash_core::splash;
use extsplash_core::verify::{self, CheckError};
use extsplash_core::GeomError;

use crate::config::{select_checks, Cli, CliConfig, Command, CommonArgs, ConfigError, DumpWhat, Format};
use crate::report::{Document, VerifyReport};
use crate::runner;

/// Process exit codes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    CheckFailed = 1,
    BadConfig = 2,
    Budget = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Rendered output plus exit code.
pub struct Output {
    pub text: String,
    pub exit: Exit,
}

#[derive(Debug)]
pub enum CmdError {
    Config(ConfigError),
    Budget(String),
    Internal(anyhow::Error),
}

impl CmdError {
    pub fn exit(&self) -> Exit {
        match self {
            CmdError::Config(_) => Exit::BadConfig,
            CmdError::Budget(_) => Exit::Budget,
            CmdError::Internal(_) => Exit::CheckFailed,
        }
    }
}

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CmdError::Config(e) => write!(f, "configuration error: {}", e),
            CmdError::Budget(e) => write!(f, "budget exceeded: {}", e),
            CmdError::Internal(e) => write!(f, "{:#}", e),
        }
    }
}

impl From<ConfigError> for CmdError {
    fn from(e: ConfigError) -> Self {
        CmdError::Config(e)
    }
}

impl From<anyhow::Error> for CmdError {
    fn from(e: anyhow::Error) -> Self {
        CmdError::Internal(e)
    }
}

impl From<GeomError> for CmdError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::BudgetExceeded { .. } => CmdError::Budget(e.to_string()),
            GeomError::QTooSmall => CmdError::Config(ConfigError::Field(e.to_string())),
            e => CmdError::Internal(anyhow::anyhow!(e.to_string())),
        }
    }
}

/// Parse-free entry point used by `main` and the tests.
pub fn run(cli: &Cli) -> i32 {
    let (common, res) = match &cli.command {
        Command::Verify(a) => (&a.common, with_config(&a.common, |c| cmd_verify(c, a.checks.as_deref()))),
        Command::Dump { what, common } => (common, with_config(common, |c| cmd_dump(*what, c))),
        Command::Construct(common) => (common, with_config(common, cmd_construct)),
        Command::Census(common) => (common, with_config(common, cmd_census)),
    };
    match res {
        Ok(o) => {
            if let Err(e) = emit(common.out.as_deref(), &o.text) {
                eprintln!("extsplash: {:#}", e);
                return Exit::CheckFailed.code();
            }
            o.exit.code()
        }
        Err(e) => {
            eprintln!("extsplash: {}", e);
            e.exit().code()
        }
    }
}

fn with_config(a: &CommonArgs, f: impl FnOnce(&CliConfig) -> Result<Output, CmdError>) -> Result<Output, CmdError> {
    f(&CliConfig::from_args(a)?)
}

/// Write to `path` through a temporary file and a rename, or to stdout.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(p) => {
            let mut tmp = p.as_os_str().to_owned();
            tmp.push(format!(".tmp{}", std::process::id()));
            fs::write(&tmp, text).with_context(|| format!("writing {:?}", tmp))?;
            fs::rename(&tmp, p).with_context(|| format!("renaming onto {}", p.display()))?;
            Ok(())
        }
    }
}

fn render_report(r: &VerifyReport, f: Format) -> Result<String> {
    match f {
        Format::Json => r.to_json(),
        Format::Csv => r.to_csv(),
        Format::Pretty => Ok(r.to_pretty()),
    }
}

fn render_doc(d: &Document, f: Format) -> Result<String> {
    match f {
        Format::Json => d.to_json(),
        Format::Csv => d.to_csv(),
        Format::Pretty => Ok(d.to_pretty()),
    }
}

/// Run the selected checks. Exit 1 if a non-conjecture check fails, else 3
/// if one was stopped by the budget, else 0.
pub fn cmd_verify(cfg: &CliConfig, checks: Option<&str>) -> Result<Output, CmdError> {
    let ids = select_checks(checks, cfg.q())?;
    let outcomes = runner::run_checks(&ids, &cfg.tower, cfg.opts, 0);
    let report = runner::to_report(&outcomes, &cfg.tower, cfg.opts).map_err(|e| match e {
        CheckError::Setup(g) => CmdError::from(g),
        e => CmdError::Internal(anyhow::anyhow!(e.to_string())),
    })?;
    let failed = report.entries.iter().any(|e| !e.conjecture && e.verdict == "fail");
    let budget = outcomes.iter().any(|o| o.budget_exceeded() && !o.id.is_conjecture());
    let exit = if failed {
        Exit::CheckFailed
    } else if budget {
        Exit::Budget
    } else {
        Exit::Ok
    };
    let passing = report.entries.iter().filter(|e| e.passed()).count();
    eprintln!("extsplash: q={} {} checks, {} pass", cfg.q(), report.entries.len(), passing);
    Ok(Output { text: render_report(&report, cfg.format)?, exit })
}

fn pt(ctx: &BruckBoseContext, p: &Pt3) -> String {
    format_vec(ctx.tower().cubic(), p)
}

fn sub5(ctx: &BruckBoseContext, s: &ProjSubspace) -> String {
    let f = if s.field_order() == ctx.tower().base().order() { ctx.tower().base() } else { ctx.tower().cubic() };
    format_subspace(f, s)
}

fn list(ctx: &BruckBoseContext, pts: &[Pt3]) -> String {
    pts.iter().map(|p| pt(ctx, p)).collect::<Vec<_>>().join(" ")
}

/// Serialize one canonical object.
pub fn dump_document(what: DumpWhat, cfg: &CliConfig) -> Result<Document, CmdError> {
    let ctx = BruckBoseContext::new(cfg.tower.clone());
    let t = ctx.tower();
    let f = t.base();
    let cf = t.cubic();
    let mut d = Document::new(&format!("dump {}", what.as_str()), cfg.q(), &cfg.field_text());
    let (b, s, frame) = splash::canonical_subplane(&ctx);
    d.push("field", "tau", cf.to_digits(t.tau()));
    d.push("field", "cubic_t0_t1_t2", format_vec(f, &t.t()));
    match what {
        DumpWhat::Subplane => {
            let k = b.generator().context("canonical subplane has a generator").map_err(CmdError::from)?;
            for (i, row) in k.matrix().iter().enumerate() {
                d.push("generator", format!("row{}", i), format_vec(cf, row));
            }
            for (i, p) in frame.points.iter().enumerate() {
                d.push("fixed_points", format!("E{}", i + 1), pt(&ctx, p));
            }
            for (i, l) in frame.lines.iter().enumerate() {
                d.push("fixed_lines", ["l", "m", "n"][i], pt(&ctx, l));
            }
            d.push("subplane", "exterior", b.is_exterior().to_string());
            for (i, p) in b.points().iter().enumerate() {
                d.push("points", i.to_string(), pt(&ctx, p));
                d.push("image", i.to_string(), projgeom::format_point(f, &ctx.eps(p)));
            }
            for (i, l) in b.lines().iter().enumerate() {
                d.push("lines", i.to_string(), pt(&ctx, &l.dual));
            }
        }
        DumpWhat::Splash => {
            if let Some((c1, c2)) = s.carriers() {
                d.push("carriers", "c1", pt(&ctx, &c1));
                d.push("carriers", "c2", pt(&ctx, &c2));
            }
            for (p, i) in s.points().iter().zip(s.indices()) {
                d.push("points", i.to_string(), pt(&ctx, p));
            }
            for i in s.indices() {
                d.push("planes", i.to_string(), sub5(&ctx, &ctx.spread()[*i]));
            }
        }
        DumpWhat::Covers => {
            let covers = splash::covers_of(&ctx, &s)?;
            let roles = splash::classify_covers(&ctx, &b, &frame, &covers)?;
            for (name, idx) in [("conic_cover", roles.conic), ("tangent_cover", roles.tangent)] {
                for (i, p) in covers[idx].planes.iter().enumerate() {
                    d.push(name, format!("plane{}", i), sub5(&ctx, p));
                }
                for (i, g) in covers[idx].transversals.iter().enumerate() {
                    d.push(name, format!("transversal{}", i), sub5(&ctx, g));
                }
            }
        }
        DumpWhat::Transversals => {
            for (i, g) in ctx.transversals().iter().enumerate() {
                d.push("spread", format!("g{}", i), sub5(&ctx, g));
            }
            let covers = splash::covers_of(&ctx, &s)?;
            let roles = splash::classify_covers(&ctx, &b, &frame, &covers)?;
            for (name, idx) in [("conic_cover", roles.conic), ("tangent_cover", roles.tangent)] {
                for (i, g) in covers[idx].transversals.iter().enumerate() {
                    d.push(name, format!("g{}", i), sub5(&ctx, g));
                }
            }
            let (a, g) = splash::canonical_conic_transversal(t);
            d.push("g_C", "p0", cf.to_digits(a[0]));
            d.push("g_C", "p1", cf.to_digits(a[1]));
            d.push("g_C", "p2", cf.to_digits(a[2]));
            d.push("g_C", "p0_formula", "t1 + t2*tau - tau^2");
            d.push("g_C", "line", sub5(&ctx, &g));
            d.push("g_C", "in_conic_cover", covers[roles.conic].transversals.contains(&g).to_string());
        }
        DumpWhat::SpecialConics => {
            for (i, c) in curves::special_conics_of(t, &b, &frame)?.iter().enumerate() {
                let g = format!("conic{}", i);
                d.push(&g, "form", format_vec(f, &c.form));
                d.push(&g, "points", list(&ctx, &c.points));
                let plane = curves::special_conic_plane(&ctx, c)?;
                d.push(&g, "cover_plane", sub5(&ctx, &plane));
            }
        }
        DumpWhat::Spread => {
            for (i, p) in ctx.spread().iter().enumerate() {
                d.push("spread", pt(&ctx, &ctx.inf_point(i)), sub5(&ctx, p));
            }
        }
    }
    Ok(d)
}

pub fn cmd_dump(what: DumpWhat, cfg: &CliConfig) -> Result<Output, CmdError> {
    let d = dump_document(what, cfg)?;
    Ok(Output { text: render_doc(&d, cfg.format)?, exit: Exit::Ok })
}

/// The common subline `{K(0,y,z)}` of the canonical subplane and its companion.
fn common_subline(ctx: &BruckBoseContext, b: &splash::Subplane) -> Result<Vec<Pt3>, CmdError> {
    let cf = ctx.tower().cubic();
    let k = b.generator().context("canonical subplane has a generator").map_err(CmdError::from)?;
    let mut out: Vec<Pt3> = splash::base_points(ctx.tower())
        .iter()
        .filter(|p| p[0].is_zero())
        .map(|p| {
            let w = k.apply_vec(cf, p);
            projgeom::normalize3(cf, [w[0], w[1], w[2]]).expect("nonsingular")
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Run the construction on the common subline of the canonical pair.
pub fn construct_document(cfg: &CliConfig) -> Result<Document, CmdError> {
    let ctx = BruckBoseContext::new(cfg.tower.clone());
    let f = ctx.tower().base();
    let (b, s, _) = splash::canonical_subplane(&ctx);
    let covers = splash::covers_of(&ctx, &s)?;
    let sub = common_subline(&ctx, &b)?;
    let (p1, p2, tr) = verify::construct_two_subplanes(&ctx, &s, &covers, &sub)?;
    let comp = splash::companion_subplane(&ctx);
    let mut d = Document::new("construct", cfg.q(), &cfg.field_text());
    d.push("input", "subline", list(&ctx, &tr.subline));
    d.push("input", "line_point", pt(&ctx, &tr.line_point));
    for (i, p) in tr.images.iter().enumerate() {
        d.push("images", i.to_string(), projgeom::format_point(f, p));
    }
    for ((i, j), p) in &tr.l_points {
        d.push("L", format!("{},{}", i, j), projgeom::format_point(f, p));
    }
    for (i, m) in tr.tangents.iter().enumerate() {
        d.push("m", i.to_string(), sub5(&ctx, m));
    }
    for (group, spaces) in [("alpha", &tr.alpha), ("beta", &tr.beta), ("Sigma", &tr.sigma), ("Gamma", &tr.gamma)] {
        for (k, x) in spaces.iter().enumerate() {
            let (i, j) = tr.l_points[k].0;
            d.push(group, format!("{},{}", i, j), sub5(&ctx, x));
        }
    }
    d.push("output", "pi1", list(&ctx, p1.points()));
    d.push("output", "pi2", list(&ctx, p2.points()));
    d.push("output", "distinct", (p1 != p2).to_string());
    let pair_ok = (p1 == b && p2 == comp) || (p1 == comp && p2 == b);
    d.push("output", "equals_canonical_pair", pair_ok.to_string());
    Ok(d)
}

pub fn cmd_construct(cfg: &CliConfig) -> Result<Output, CmdError> {
    let d = construct_document(cfg)?;
    Ok(Output { text: render_doc(&d, cfg.format)?, exit: Exit::Ok })
}

/// Every exterior splash and the spectrum of pairwise intersection sizes.
pub fn census_document(cfg: &CliConfig) -> Result<Document, CmdError> {
    let ctx = BruckBoseContext::new(cfg.tower.clone());
    let q = cfg.q() as u64;
    let recs = verify::enumerate_splashes(&ctx, cfg.opts.budget)?;
    let census = verify::splash_intersection_census(&recs, cfg.opts.budget)?;
    let mut d = Document::new("census", cfg.q(), &cfg.field_text());
    d.push("census", "planes_scanned", verify::census::plane_count(q).to_string());
    d.push("census", "splashes", census.splashes.to_string());
    d.push("census", "max", census.max.to_string());
    d.push("census", "bound_2q_plus_2", (2 * q + 2).to_string());
    d.push("census", "maximal_pairs", census.maximal_pairs.len().to_string());
    for (size, n) in &census.spectrum {
        d.push("spectrum", size.to_string(), n.to_string());
    }
    Ok(d)
}

pub fn cmd_census(cfg: &CliConfig) -> Result<Output, CmdError> {
    let d = census_document(cfg)?;
    Ok(Output { text: render_doc(&d, cfg.format)?, exit: Exit::Ok })
}
