//! The `schottky` command-line tool.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use crate::analysis::bounds::{c_value, exponent_bounds};
use crate::analysis::counting::{count_panels, CountSettings, CountingSeries};
use crate::analysis::fit::{concave_envelope_slope, fit_exponent_linear, mollified_local};
use crate::analysis::strip::{s_to_lambda, StripSpec};
use crate::error::{Error, Result};
use crate::io::cache::{default_cache_dir, load_or_build};
use crate::io::config::{parse_grid, parse_pair, JobConfig};
use crate::io::csv::{emit_csv, Cell, CsvTable};
use crate::io::manifest::RunManifest;
use crate::pressure::{hausdorff_delta_series, pressure_at, PressureCurve};
use crate::rootfind::{locate_known, QuadSettings, Rect};
use crate::schottky::{build_surface, validate_schottky, SchottkyGroup, SurfaceDescriptor};
use crate::symbolic::{estimate_lambda_max, WordTable};
use crate::zeta::ZetaSeries;

#[derive(Debug, Parser)]
#[command(name = "schottky", version, about = "Resonances of Schottky surfaces from the truncated Selberg zeta function")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON job configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Surface descriptor, e.g. `three_funnel:7,7,7`, `funneled_torus:7,7,pi/2`, `cylinder:2`.
    #[arg(long, global = true)]
    pub surface: Option<String>,
    /// Maximal word length of the cycle expansion.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true, env = "SCHOTTKY_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and validate the Schottky group of a surface.
    Surface,
    /// Evaluate the truncated zeta function at points `re,im`.
    ZetaEval {
        #[arg(long = "s", value_name = "RE,IM", allow_hyphen_values = true)]
        s: Vec<String>,
    },
    /// Sample the pressure function.
    Pressure {
        /// `start:stop:step` or a comma list of x values.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Hausdorff dimension of the limit set.
    Delta {
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Locate resonances with `Re λ` in a window and `Im λ ≥ -β`.
    Resonances {
        #[arg(long, value_name = "LO,HI")]
        window: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta_tilde: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Total and local resonance counts on a grid of `R`.
    Count {
        #[arg(long, value_name = "START:STOP:STEP")]
        r_grid: Option<String>,
        /// Comma-separated list of β̃ values.
        #[arg(long, allow_hyphen_values = true)]
        beta_tilde: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<f64>,
        /// Width `L` of the local counting window.
        #[arg(long)]
        local_window: Option<f64>,
        #[arg(long)]
        r_start: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        im_top: Option<f64>,
    },
    /// Fit growth exponents to a counts CSV.
    Fit {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_name = "RMIN,RMAX")]
        fit_range: Option<String>,
        #[arg(long, value_name = "RMIN,RMAX")]
        envelope_interval: Option<String>,
        #[arg(long)]
        mollifier_window: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Theoretical exponent curves.
    Bounds {
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long = "n")]
        dimension: Option<usize>,
        #[arg(long, value_name = "START:STOP:STEP")]
        beta_tilde_grid: Option<String>,
        #[arg(long, value_name = "START:STOP:STEP")]
        beta_grid: Option<String>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Surface => "surface",
            Command::ZetaEval { .. } => "zeta-eval",
            Command::Pressure { .. } => "pressure",
            Command::Delta { .. } => "delta",
            Command::Resonances { .. } => "resonances",
            Command::Count { .. } => "count",
            Command::Fit { .. } => "fit",
            Command::Bounds { .. } => "bounds",
        }
    }
}

/// Merges the config file and flags into one job description.
pub fn resolve_config(cli: &Cli) -> Result<JobConfig> {
    let mut c = match &cli.common.config {
        Some(p) => JobConfig::from_file(p)?,
        None => JobConfig::default(),
    };
    let cm = &cli.common;
    if cm.surface.is_some() {
        c.surface = cm.surface.clone();
    }
    if let Some(n) = cm.order {
        c.order = n;
    }
    if let Some(d) = &cm.out_dir {
        c.out_dir = d.clone();
    }
    if cm.cache_dir.is_some() {
        c.cache_dir = cm.cache_dir.clone();
    } else if c.cache_dir.is_none() {
        c.cache_dir = default_cache_dir();
    }
    match &cli.command {
        Command::Surface => {}
        Command::ZetaEval { s } => {
            if !s.is_empty() {
                c.s_points = s.iter().map(|t| parse_pair(t)).collect::<Result<_>>()?;
            }
        }
        Command::Pressure { grid } => {
            if let Some(g) = grid {
                c.pressure_grid = g.clone();
            }
        }
        Command::Delta { tol } => {
            if let Some(t) = tol {
                c.delta_tol = *t;
            }
        }
        Command::Resonances { window, beta_tilde, beta, tol } => {
            if let Some(w) = window {
                c.window = Some(parse_pair(w)?);
            }
            if let Some(b) = beta_tilde {
                c.beta_tilde = vec![*b];
            }
            if beta.is_some() {
                c.beta = *beta;
            }
            if let Some(t) = tol {
                c.tol = *t;
            }
        }
        Command::Count { r_grid, beta_tilde, beta, local_window, r_start, im_top } => {
            if r_grid.is_some() {
                c.r_grid = r_grid.clone();
            }
            if let Some(b) = beta_tilde {
                c.beta_tilde = parse_grid(b)?;
            }
            if beta.is_some() {
                c.beta = *beta;
            }
            if local_window.is_some() {
                c.local_window = *local_window;
            }
            if let Some(r) = r_start {
                c.r_start = *r;
            }
            if let Some(t) = im_top {
                c.im_top = *t;
            }
        }
        Command::Fit { input, fit_range, envelope_interval, mollifier_window, delta } => {
            if input.is_some() {
                c.input = input.clone();
            }
            if let Some(r) = fit_range {
                c.fit_range = Some(parse_pair(r)?);
            }
            if let Some(r) = envelope_interval {
                c.envelope_interval = Some(parse_pair(r)?);
            }
            if let Some(w) = mollifier_window {
                c.mollifier_window = *w;
            }
            if delta.is_some() {
                c.delta = *delta;
            }
        }
        Command::Bounds { delta, dimension, beta_tilde_grid, beta_grid } => {
            if delta.is_some() {
                c.delta = *delta;
            }
            if let Some(n) = dimension {
                c.dimension = *n;
            }
            if let Some(g) = beta_tilde_grid {
                c.beta_tilde_grid = g.clone();
            }
            if beta_grid.is_some() {
                c.beta_grid = beta_grid.clone();
            }
        }
    }
    c.validate()?;
    Ok(c)
}

struct Context {
    cfg: JobConfig,
    manifest: RunManifest,
    clock: Instant,
}

impl Context {
    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.manifest.timings.insert(phase.to_string(), (now - self.clock).as_secs_f64());
        self.clock = now;
    }

    fn emit(&mut self, name: &str, table: &CsvTable) -> Result<()> {
        let path = self.cfg.out_dir.join(name);
        emit_csv(table, &path)?;
        self.manifest.artifacts.push(path.display().to_string());
        Ok(())
    }

    fn emit_json(&mut self, name: &str, value: &serde_json::Value) -> Result<()> {
        let path = self.cfg.out_dir.join(name);
        let text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))? + "\n";
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        self.manifest.artifacts.push(path.display().to_string());
        Ok(())
    }
}

struct Surface {
    desc: SurfaceDescriptor,
    group: SchottkyGroup<f64>,
    table: WordTable,
    series: ZetaSeries,
}

fn load_surface(ctx: &mut Context) -> Result<Surface> {
    let desc = ctx.cfg.surface_descriptor()?;
    let group = build_surface(&desc)?;
    ctx.manifest.surface_id = Some(desc.id());
    ctx.manifest.group_hash = Some(group.hash_hex());
    ctx.lap("build_group");
    let (table, notes) = load_or_build(&group, ctx.cfg.order, ctx.cfg.cache_dir.as_deref())?;
    ctx.manifest.warnings.extend(notes);
    ctx.lap("word_table");
    let series = ZetaSeries::new(&table);
    Ok(Surface { desc, group, table, series })
}

fn delta_of(ctx: &mut Context, s: &Surface) -> Result<f64> {
    let d = hausdorff_delta_series(&s.series, ctx.cfg.delta_tol)?;
    ctx.lap("delta");
    Ok(d)
}

fn pressure_curve(s: &Surface, delta: f64, beta_tildes: &[f64]) -> Result<(PressureCurve, f64)> {
    let bt_min = beta_tildes.iter().copied().fold(0.5, f64::min);
    let x_max = 2.0 * delta * (1.0 - bt_min);
    let steps = (x_max / 0.02).ceil().max(1.0) as usize;
    let xs: Vec<f64> = (0..=steps).map(|k| 0.02 * k as f64).collect();
    let curve = PressureCurve::sample(&s.series, &xs)?.with_delta(delta);
    Ok((curve, estimate_lambda_max(&s.table, &s.group)))
}

fn strips_from(cfg: &JobConfig, delta: impl FnOnce() -> Result<f64>) -> Result<Vec<StripSpec>> {
    if let Some(b) = cfg.beta {
        return Ok(vec![StripSpec::with_beta(b)?]);
    }
    if cfg.beta_tilde.is_empty() {
        return Err(Error::Config("give --beta-tilde or --beta".into()));
    }
    let d = delta()?;
    cfg.beta_tilde.iter().map(|&bt| StripSpec::new(bt, d)).collect()
}

fn cmd_surface(ctx: &mut Context) -> Result<()> {
    let desc = ctx.cfg.surface_descriptor()?;
    let g = build_surface(&desc)?;
    let report = validate_schottky(&g);
    ctx.manifest.surface_id = Some(desc.id());
    ctx.manifest.group_hash = Some(g.hash_hex());
    let value = json!({
        "format_version": 1,
        "surface": desc.to_string(),
        "surface_id": desc.id(),
        "group_hash": g.hash_hex(),
        "rank": g.rank(),
        "generators": g.generators().iter().map(|m| m.entries()).collect::<Vec<_>>(),
        "disks": g.disks().iter().map(|d| [d.center, d.radius]).collect::<Vec<_>>(),
        "generator_lengths": g.generator_lengths(),
        "recomputed_lengths": g.recompute_lengths(),
        "convention": g.convention().map(|c| format!("{c:?}")),
        "min_gap": report.gaps.iter().map(|x| x.2).fold(f64::INFINITY, f64::min),
        "max_mapping_residual": report.max_mapping_residual(),
        "validated": report.passed(),
    });
    ctx.emit_json("surface.json", &value)?;
    println!("{}: rank {}, hash {}, validated {}", desc.id(), g.rank(), g.hash_hex(), report.passed());
    Ok(())
}

fn cmd_zeta_eval(ctx: &mut Context) -> Result<()> {
    if ctx.cfg.s_points.is_empty() {
        return Err(Error::Config("give at least one --s re,im".into()));
    }
    let s = load_surface(ctx)?;
    let mut t = CsvTable::new(&["re_s", "im_s", "re_value", "im_value", "re_derivative", "im_derivative", "tail"]);
    for &[re, im] in &ctx.cfg.s_points {
        let v = s.series.evaluate(Complex64::new(re, im));
        t.push(vec![
            re.into(),
            im.into(),
            v.value.re.into(),
            v.value.im.into(),
            v.derivative.re.into(),
            v.derivative.im.into(),
            v.tail.into(),
        ]);
        if v.tail > 1e-3 * v.value.norm().max(1e-300) {
            ctx.manifest.warnings.push(format!("truncation tail {:e} at s = {re}+{im}i is not small", v.tail));
        }
    }
    ctx.lap("evaluate");
    ctx.emit("zeta.csv", &t)
}

fn cmd_pressure(ctx: &mut Context) -> Result<()> {
    let s = load_surface(ctx)?;
    let xs = parse_grid(&ctx.cfg.pressure_grid)?;
    let curve = PressureCurve::sample(&s.series, &xs)?;
    let mut t = CsvTable::new(&["x", "pressure"]);
    for (x, p) in curve.xs.iter().zip(&curve.values) {
        t.push(vec![(*x).into(), (*p).into()]);
    }
    ctx.lap("pressure");
    if !curve.is_decreasing(0.0) {
        ctx.manifest.warnings.push("sampled pressure is not strictly decreasing".into());
    }
    ctx.emit("pressure.csv", &t)
}

fn cmd_delta(ctx: &mut Context) -> Result<()> {
    let s = load_surface(ctx)?;
    let delta = delta_of(ctx, &s)?;
    let value = json!({
        "format_version": 1,
        "surface_id": s.desc.id(),
        "order": s.series.order(),
        "delta": delta,
        "pressure_at_zero": pressure_at(&s.series, 0.0)?,
        "lambda_max": estimate_lambda_max(&s.table, &s.group),
    });
    ctx.emit_json("delta.json", &value)?;
    println!("delta = {delta}");
    Ok(())
}

fn cmd_resonances(ctx: &mut Context) -> Result<()> {
    let [lo, hi] = ctx.cfg.window.ok_or_else(|| Error::Config("give --window lo,hi".into()))?;
    if !(lo < hi) {
        return Err(Error::Config(format!("empty window [{lo}, {hi}]")));
    }
    let s = load_surface(ctx)?;
    let cfg = ctx.cfg.clone();
    let strips = strips_from(&cfg, || delta_of(ctx, &s))?;
    let strip = strips[0];
    let mut settings = CountSettings::for_series(&s.series);
    settings.im_top = cfg.im_top;
    settings.quad.seg_tol = cfg.seg_tol;
    let width = cfg.im_top + strip.beta();
    let panels = ((hi - lo) / (4.0 * width.max(0.05))).ceil().max(1.0) as usize;
    let breaks: Vec<f64> = (0..=panels).map(|k| lo + (hi - lo) * k as f64 / panels as f64).collect();
    let counted = count_panels(&s.series, &breaks, &strip, &settings)?;
    ctx.manifest.warnings.extend(counted.jitters.iter().cloned());
    ctx.lap("count");
    let f = |z: Complex64| {
        let v = s.series.evaluate(z);
        (v.value, v.derivative)
    };
    let q = QuadSettings { max_segment: settings.quad.max_segment, seg_tol: cfg.seg_tol, ..QuadSettings::default() };
    let mut zeros = Vec::new();
    for (k, &n) in counted.counts.iter().enumerate() {
        let rect = Rect::new(counted.re_lo, counted.re_hi, counted.breaks[k], counted.breaks[k + 1])?;
        zeros.extend(locate_known(&f, &rect, n, cfg.tol, &q)?);
    }
    ctx.lap("locate");
    zeros.sort_by(|a, b| a.location.im.total_cmp(&b.location.im).then(a.location.re.total_cmp(&b.location.re)));
    let mut t = CsvTable::new(&["re_lambda", "im_lambda", "re_s", "im_s", "multiplicity"]);
    for z in &zeros {
        let s_res = z.location.conj();
        let lambda = s_to_lambda(s_res);
        if !z.refined {
            ctx.manifest.warnings.push(format!("zero near s = {s_res} not polished by Newton"));
        }
        t.push(vec![lambda.re.into(), lambda.im.into(), s_res.re.into(), s_res.im.into(), z.multiplicity.into()]);
    }
    println!("{} resonances ({} with multiplicity)", zeros.len(), counted.total());
    ctx.emit("resonances.csv", &t)
}

fn cmd_count(ctx: &mut Context) -> Result<()> {
    let grid = parse_grid(ctx.cfg.r_grid.as_deref().ok_or_else(|| Error::Config("give --r-grid".into()))?)?;
    let s = load_surface(ctx)?;
    let cfg = ctx.cfg.clone();
    let strips = strips_from(&cfg, || delta_of(ctx, &s))?;
    let mut settings = CountSettings::for_series(&s.series);
    settings.im_top = cfg.im_top;
    settings.quad.seg_tol = cfg.seg_tol;
    let cs = CountingSeries::compute(&s.series, &s.desc.id(), cfg.r_start, &grid, &strips, cfg.local_window, &settings)?;
    ctx.manifest.warnings.extend(cs.jitters.iter().cloned());
    ctx.lap("count");
    let mut t = CsvTable::new(&["surface_id", "beta_tilde", "R", "L_or_total", "count"]);
    for st in &cs.strips {
        let bt: Cell = st.beta_tilde.into();
        for (i, &r) in cs.r_grid.iter().enumerate() {
            t.push(vec![cs.surface_id.clone().into(), bt.clone(), r.into(), "total".into(), st.total[i].into()]);
        }
        if let (Some(local), Some(l)) = (&st.local, cs.window) {
            for (i, &r) in cs.r_grid.iter().enumerate() {
                t.push(vec![cs.surface_id.clone().into(), bt.clone(), r.into(), l.into(), local[i].into()]);
            }
        }
    }
    ctx.emit("counts.csv", &t)
}

#[derive(Default)]
struct CountColumns {
    total: Vec<(f64, f64)>,
    local: Vec<(f64, f64)>,
}

fn read_counts(path: &Path) -> Result<BTreeMap<String, CountColumns>> {
    let bad = |why: String| Error::Config(format!("{}: {why}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => bad(format!("{other:?}")),
    })?;
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| header.iter().position(|h| h == name).ok_or_else(|| bad(format!("missing column {name}")));
    let (bt, r, kind, count) = (col("beta_tilde")?, col("R")?, col("L_or_total")?, col("count")?);
    let mut out: BTreeMap<String, CountColumns> = BTreeMap::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let num = |i: usize| rec[i].parse::<f64>().map_err(|_| bad(format!("bad number `{}`", &rec[i])));
        let entry = out.entry(rec[bt].to_string()).or_default();
        let point = (num(r)?, num(count)?);
        if &rec[kind] == "total" {
            entry.total.push(point);
        } else {
            entry.local.push(point);
        }
    }
    Ok(out)
}

fn cmd_fit(ctx: &mut Context) -> Result<()> {
    let input = ctx.cfg.input.clone().ok_or_else(|| Error::Config("give --input counts.csv".into()))?;
    let data = read_counts(&input)?;
    let surface = if ctx.cfg.surface.is_some() { Some(load_surface(ctx)?) } else { None };
    let delta = match (ctx.cfg.delta, &surface) {
        (Some(d), _) => Some(d),
        (None, Some(s)) => Some(delta_of(ctx, s)?),
        (None, None) => None,
    };
    let pressure = match (&surface, delta) {
        (Some(s), Some(d)) => {
            let bts: Vec<f64> = data.keys().filter_map(|k| k.parse().ok()).collect();
            Some(pressure_curve(s, d, &bts)?)
        }
        _ => None,
    };
    let cfg = ctx.cfg.clone();
    let mut ex = CsvTable::new(&["beta_tilde", "m_fit_N", "m_mean_n", "m_theory", "m_P_theory"]);
    let mut mol = CsvTable::new(&["beta_tilde", "R", "mollified_log10_n"]);
    for (key, cols) in &data {
        let bt: Option<f64> = key.parse().ok();
        let (rs, ns): (Vec<f64>, Vec<f64>) = cols.total.iter().copied().unzip();
        let m_fit = if rs.is_empty() {
            None
        } else {
            let [a, b] = cfg.fit_range.unwrap_or([rs[0], rs[rs.len() - 1]]);
            match fit_exponent_linear(&rs, &ns, a, b) {
                Ok(f) => Some(f.m_fit),
                Err(e) => {
                    ctx.manifest.warnings.push(format!("beta_tilde {key}: linear fit skipped: {e}"));
                    None
                }
            }
        };
        let (lr, ln): (Vec<f64>, Vec<f64>) = cols.local.iter().copied().unzip();
        let m_mean = if lr.is_empty() {
            None
        } else {
            let [a, b] = cfg.envelope_interval.unwrap_or([lr[0], lr[lr.len() - 1]]);
            for &r in &lr {
                let v = mollified_local(&lr, &ln, r, cfg.mollifier_window)?;
                mol.push(vec![key.as_str().into(), r.into(), if v.is_finite() { v.into() } else { Cell::Empty }]);
            }
            match concave_envelope_slope(&lr, &ln, (a.log10(), b.log10()), 0.25, 0.75) {
                Ok(m) => Some(m),
                Err(e) => {
                    ctx.manifest.warnings.push(format!("beta_tilde {key}: envelope fit skipped: {e}"));
                    None
                }
            }
        };
        let theory = match (bt, delta) {
            (Some(bt), Some(d)) => {
                let rows = exponent_bounds(&[bt], d, pressure.as_ref().map(|(p, l)| (p, *l)), cfg.dimension)?;
                Some(rows[0])
            }
            _ => None,
        };
        ex.push(vec![
            bt.map_or(Cell::Text(key.clone()), Cell::Real),
            m_fit.into(),
            m_mean.into(),
            theory.map(|t| t.m_theory).into(),
            theory.and_then(|t| t.m_p_theory).into(),
        ]);
    }
    ctx.lap("fit");
    ctx.emit("exponents.csv", &ex)?;
    if !mol.rows.is_empty() {
        ctx.emit("mollified.csv", &mol)?;
    }
    Ok(())
}

fn cmd_bounds(ctx: &mut Context) -> Result<()> {
    let surface = if ctx.cfg.surface.is_some() { Some(load_surface(ctx)?) } else { None };
    let delta = match (ctx.cfg.delta, &surface) {
        (Some(d), _) => d,
        (None, Some(s)) => delta_of(ctx, s)?,
        (None, None) => return Err(Error::Config("give --delta or --surface".into())),
    };
    let grid = parse_grid(&ctx.cfg.beta_tilde_grid)?;
    let pressure = match &surface {
        Some(s) => Some(pressure_curve(s, delta, &grid)?),
        None => {
            ctx.manifest.warnings.push("no surface given: m_P column left empty".into());
            None
        }
    };
    let n = ctx.cfg.dimension;
    let rows = exponent_bounds(&grid, delta, pressure.as_ref().map(|(p, l)| (p, *l)), n)?;
    let mut t = CsvTable::new(&["beta_tilde", "beta", "m_theory", "m_P_theory", "c"]);
    for r in &rows {
        t.push(vec![r.beta_tilde.into(), r.beta.into(), r.m_theory.into(), r.m_p_theory.into(), c_value(r.beta, delta, n).ok().into()]);
    }
    ctx.lap("bounds");
    ctx.emit("bounds.csv", &t)?;
    if let Some(g) = ctx.cfg.beta_grid.clone() {
        let mut ct = CsvTable::new(&["beta", "c"]);
        for b in parse_grid(&g)? {
            ct.push(vec![b.into(), c_value(b, delta, n).ok().into()]);
        }
        ctx.emit("c_curve.csv", &ct)?;
    }
    Ok(())
}

/// Runs one command. Artifacts and the manifest are written to the output directory.
pub fn run(cli: &Cli) -> Result<RunManifest> {
    let cfg = resolve_config(cli)?;
    let name = cli.command.name();
    let mut ctx = Context { manifest: RunManifest::new(name, &cfg), cfg, clock: Instant::now() };
    match &cli.command {
        Command::Surface => cmd_surface(&mut ctx),
        Command::ZetaEval { .. } => cmd_zeta_eval(&mut ctx),
        Command::Pressure { .. } => cmd_pressure(&mut ctx),
        Command::Delta { .. } => cmd_delta(&mut ctx),
        Command::Resonances { .. } => cmd_resonances(&mut ctx),
        Command::Count { .. } => cmd_count(&mut ctx),
        Command::Fit { .. } => cmd_fit(&mut ctx),
        Command::Bounds { .. } => cmd_bounds(&mut ctx),
    }?;
    let path = ctx.cfg.out_dir.join(format!("{}_manifest.json", name.replace('-', "_")));
    ctx.manifest.write(&path)?;
    Ok(ctx.manifest)
}

/// Parses `args`, runs, reports errors as JSON on stderr and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(_) => 0,
        Err(e) => {
            let report = json!({ "error": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() });
            eprintln!("{report}");
            e.exit_code()
        }
    }
}
