//! Command surface of the `qharmonic` binary.
//!
//! Every command renders its output into a `String` first, so output is
//! byte-deterministic for a fixed configuration and is written by a single
//! writer (a file given by `--out`, or standard output).
//!
//! Exit codes: 0 ok, 1 a verification check failed, 2 domain or usage
//! error, 3 truncation budget exceeded, 4 I/O error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::density::{jump, PiecewiseExpPolyDensity};
use crate::error::Error;
use crate::iteration::{fixed_point_m, k_distance, orbit_from_delta_q};
use crate::qkernel::{c_q, gamma_q, psi_q, Certified, CqMethod, QParam, TruncationBudget};
use crate::transforms::{f_q, h_q, mellin_nu_q, HalfPlanePoint};
use crate::verify::{run_suite, Check, Level};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Failure of a command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numeric(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Numeric(_) | CliError::Usage(_) => EXIT_DOMAIN,
            CliError::Io { .. } => EXIT_IO,
            CliError::VerifyFailed { .. } => EXIT_VERIFY_FAIL,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Csv,
    Svg,
    Json,
}

/// Settings shared by the commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q: f64,
    pub tol: f64,
    pub max_terms: u64,
    /// Window end in units of `L = log(1/q)`.
    pub x_max_l: f64,
    pub grid: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            q: 0.5,
            tol: 1e-13,
            max_terms: 1_000_000,
            x_max_l: 3.0,
            grid: 301,
            out: None,
            format: Format::Text,
        }
    }
}

impl RunConfig {
    pub fn budget(&self) -> Result<TruncationBudget, Error> {
        TruncationBudget::new(self.tol, self.max_terms)
    }

    pub fn qparam(&self) -> Result<QParam, Error> {
        QParam::with_budget(self.q, self.budget()?)
    }

    fn validate_window(&self) -> Result<(), CliError> {
        if self.grid < 2 {
            return Err(CliError::Usage(format!("--grid must be at least 2, got {}", self.grid)));
        }
        if !(self.x_max_l.is_finite() && self.x_max_l > 0.0) {
            return Err(CliError::Usage(format!("--x-max-l must be positive, got {}", self.x_max_l)));
        }
        Ok(())
    }

    fn expect_format(&self, allowed: &[Format]) -> Result<(), CliError> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(CliError::Usage(format!(
                "format {:?} is not available here; use one of {allowed:?}",
                self.format
            )))
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qharmonic", version, about = "q-digamma functions, the moment iteration and the density tau_q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, default_value_t = 0.5)]
    pub q: f64,
    /// Truncation tolerance for certified series.
    #[arg(long, default_value_t = 1e-13)]
    pub tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_terms: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct Window {
    #[arg(long = "x-max-l", default_value_t = 3.0)]
    pub x_max_l: f64,
    #[arg(long, default_value_t = 301)]
    pub grid: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    #[value(name = "psi_q")]
    PsiQ,
    #[value(name = "gamma_q")]
    GammaQ,
    #[value(name = "c_q")]
    CQ,
    #[value(name = "gamma_euler_q")]
    GammaEulerQ,
    #[value(name = "f_q")]
    FQ,
    #[value(name = "mellin_nu")]
    MellinNu,
    #[value(name = "h_q")]
    HQ,
    #[value(name = "jump")]
    Jump,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one function with its error bound.
    Eval {
        #[arg(value_enum)]
        function: Function,
        /// Real part of the argument (psi_q, gamma_q, f_q, mellin_nu).
        #[arg(long, allow_negative_numbers = true)]
        z: Option<f64>,
        /// Imaginary part of the argument (f_q, mellin_nu).
        #[arg(long = "z-im", default_value_t = 0.0, allow_negative_numbers = true)]
        z_im: f64,
        /// Argument of h_q.
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        /// Breakpoint index of jump.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate (1-q) tau_q on [0, x_max L] as CSV.
    Density {
        #[command(flatten)]
        window: Window,
        #[command(flatten)]
        common: Common,
    },
    /// Render (1-q) tau_q on [0, x_max L] as SVG.
    Figure {
        #[command(flatten)]
        window: Window,
        #[command(flatten)]
        common: Common,
    },
    /// Iterate T from the moments of delta_q.
    Iterate {
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Number of moments a_1..a_n shown.
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the self-check suite and print a JSON report.
    Verify {
        #[arg(long = "q-list", value_delimiter = ',', default_value = "0.3,0.5,0.9")]
        q_list: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
        #[arg(long, default_value_t = 1e-13)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn config(common: &Common, window: Option<&Window>, default_format: Format) -> RunConfig {
    let base = RunConfig::default();
    RunConfig {
        q: common.q,
        tol: common.tol,
        max_terms: common.max_terms,
        x_max_l: window.map_or(base.x_max_l, |w| w.x_max_l),
        grid: window.map_or(base.grid, |w| w.grid),
        out: common.out.clone(),
        format: common.format.unwrap_or(default_format),
    }
}

/// Parse `args` (program name first), run the command and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Eval {
            function,
            z,
            z_im,
            t,
            n,
            common,
        } => {
            let cfg = config(&common, None, Format::Text);
            let args = EvalArgs { z, z_im, t, n };
            emit(&cfg.out, stdout, &cmd_eval(function, &args, &cfg)?)
        }
        Command::Density { window, common } => {
            let cfg = config(&common, Some(&window), Format::Csv);
            emit(&cfg.out, stdout, &cmd_density(&cfg)?)
        }
        Command::Figure { window, common } => {
            let cfg = config(&common, Some(&window), Format::Svg);
            emit(&cfg.out, stdout, &cmd_figure(&cfg)?)
        }
        Command::Iterate { steps, n, common } => {
            let cfg = config(&common, None, Format::Text);
            emit(&cfg.out, stdout, &cmd_iterate(steps, n, &cfg)?)
        }
        Command::Verify {
            q_list,
            level,
            tol,
            out,
        } => {
            let budget = TruncationBudget::default().with_tol(tol);
            TruncationBudget::new(tol, budget.max_terms)?;
            let checks = run_suite(&q_list, level, &budget)?;
            let failed = checks.iter().filter(|c| !c.pass).count();
            emit(&out, stdout, &render_report(&checks))?;
            let _ = writeln!(stderr, "{} of {} checks passed", checks.len() - failed, checks.len());
            if failed > 0 {
                return Err(CliError::VerifyFailed {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
    }
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(content.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

/// Per-function arguments of `eval`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvalArgs {
    pub z: Option<f64>,
    pub z_im: f64,
    pub t: Option<f64>,
    pub n: Option<usize>,
}

#[derive(Debug, Serialize)]
struct EvalReport {
    function: &'static str,
    q: f64,
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    imag: Option<f64>,
    bound: f64,
}

fn need<T>(v: Option<T>, flag: &str, function: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{function} needs {flag}")))
}

/// Evaluate `function` and render value and error bound as text or JSON.
pub fn cmd_eval(function: Function, args: &EvalArgs, cfg: &RunConfig) -> Result<String, CliError> {
    cfg.expect_format(&[Format::Text, Format::Json])?;
    let qp = cfg.qparam()?;
    let b = cfg.budget()?;
    let real = |c: Certified<f64>| (c.value, None, c.bound);
    let complex = |c: Certified<Complex64>| (c.value.re, Some(c.value.im), c.bound);
    let (name, (value, imag, bound)) = match function {
        Function::PsiQ => ("psi_q", real(psi_q(need(args.z, "--z", "psi_q")?, &qp, &b)?)),
        Function::GammaQ => ("gamma_q", real(gamma_q(need(args.z, "--z", "gamma_q")?, &qp, &b)?)),
        Function::CQ => ("c_q", real(c_q(&qp, &b, CqMethod::Lambert)?)),
        Function::GammaEulerQ => {
            let c = c_q(&qp, &b, CqMethod::Lambert)?;
            let value = (1.0 - qp.q()).ln() + qp.step() * c.value;
            ("gamma_euler_q", (value, None, qp.step() * c.bound))
        }
        Function::FQ => {
            let z = HalfPlanePoint::new(need(args.z, "--z", "f_q")?, args.z_im)?;
            ("f_q", complex(f_q(z, &qp, &b)?))
        }
        Function::MellinNu => {
            let z = Complex64::new(need(args.z, "--z", "mellin_nu")?, args.z_im);
            ("mellin_nu", complex(mellin_nu_q(z, &qp, &b)?))
        }
        Function::HQ => ("h_q", real(h_q(need(args.t, "--t", "h_q")?, &qp, &b)?)),
        Function::Jump => {
            let n = need(args.n, "--n", "jump")?;
            if n == 0 {
                return Err(Error::Domain("jump needs n >= 1".into()).into());
            }
            ("jump", (jump(n, &qp), None, 0.0))
        }
    };
    let report = EvalReport {
        function: name,
        q: qp.q(),
        value,
        imag: if args.z_im == 0.0 { imag.filter(|v| *v != 0.0) } else { imag },
        bound,
    };
    Ok(match cfg.format {
        Format::Json => serde_json::to_string(&report).expect("plain struct serializes") + "\n",
        _ => {
            let mut s = String::new();
            match report.imag {
                Some(im) => writeln!(s, "{name} = {value:?} + {im:?}i"),
                None => writeln!(s, "{name} = {value:?}"),
            }
            .unwrap();
            writeln!(s, "bound = {bound:e}").unwrap();
            s
        }
    })
}

/// One row of the density table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRow {
    pub x: f64,
    pub tau_scaled: f64,
    pub piece_index: usize,
}

/// Uniform samples of `(1-q) tau_q` on `[0, x_max L]` with every breakpoint
/// `nL` in the window listed twice: first as the left limit (piece `n-1`),
/// then as the value of piece `n`.
pub fn density_rows(cfg: &RunConfig) -> Result<Vec<DensityRow>, CliError> {
    cfg.validate_window()?;
    let qp = cfg.qparam()?;
    let l = qp.step();
    let x_end = cfg.x_max_l * l;
    let d = PiecewiseExpPolyDensity::for_window(&qp, x_end, &cfg.budget()?)?;
    // breakpoints count as inside the window up to rounding of x_max_l * L
    let last_bp = (cfg.x_max_l * (1.0 + 1e-12)).floor() as usize;
    let mut rows = Vec::with_capacity(cfg.grid + 2 * last_bp);
    let push_bp = |rows: &mut Vec<DensityRow>, n: usize| {
        let x = n as f64 * l;
        rows.push(DensityRow {
            x,
            tau_scaled: d.left_limit(n),
            piece_index: n - 1,
        });
        rows.push(DensityRow {
            x,
            tau_scaled: d.right_limit(n),
            piece_index: n,
        });
    };
    let mut next_bp = 1;
    let last = cfg.grid - 1;
    for i in 0..cfg.grid {
        let x = if i == last {
            x_end
        } else {
            x_end * i as f64 / last as f64
        };
        let mut on_bp = false;
        while next_bp <= last_bp && next_bp as f64 * l <= x {
            on_bp |= next_bp as f64 * l == x;
            push_bp(&mut rows, next_bp);
            next_bp += 1;
        }
        if !on_bp {
            let n = d.piece_index(x);
            rows.push(DensityRow {
                x,
                tau_scaled: d.eval_piece(n, x),
                piece_index: n,
            });
        }
    }
    while next_bp <= last_bp {
        push_bp(&mut rows, next_bp);
        next_bp += 1;
    }
    Ok(rows)
}

/// CSV `x,tau_scaled,piece_index`, shortest round-trip decimals, LF endings.
pub fn cmd_density(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.expect_format(&[Format::Csv])?;
    let mut s = String::from("x,tau_scaled,piece_index\n");
    for r in density_rows(cfg)? {
        writeln!(s, "{},{:?},{}", r.x, r.tau_scaled, r.piece_index).unwrap();
    }
    Ok(s)
}

/// Parse a density CSV produced by [`cmd_density`].
pub fn parse_density_csv(text: &str) -> Result<Vec<DensityRow>, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some("x,tau_scaled,piece_index") {
        return Err(CliError::Usage("missing CSV header x,tau_scaled,piece_index".into()));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let bad = || CliError::Usage(format!("malformed CSV row {}: {line}", i + 2));
            let mut f = line.split(',');
            let (Some(x), Some(t), Some(p), None) = (f.next(), f.next(), f.next(), f.next()) else {
                return Err(bad());
            };
            Ok(DensityRow {
                x: x.parse().map_err(|_| bad())?,
                tau_scaled: t.parse().map_err(|_| bad())?,
                piece_index: p.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 48.0;

/// Polyline vertices of the figure: the density rows with each breakpoint once.
pub fn figure_vertices(cfg: &RunConfig) -> Result<Vec<(f64, f64)>, CliError> {
    let rows = density_rows(cfg)?;
    let mut v: Vec<(f64, f64)> = Vec::with_capacity(rows.len());
    for r in rows {
        match v.last_mut() {
            Some(last) if last.0 == r.x => last.1 = r.tau_scaled,
            _ => v.push((r.x, r.tau_scaled)),
        }
    }
    Ok(v)
}

/// Self-contained SVG of `(1-q) tau_q` with ticks at multiples of `L`.
///
/// The curve is drawn in data coordinates under a single transform, so the
/// `points` attribute holds the exact sampled values.
pub fn cmd_figure(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.expect_format(&[Format::Svg])?;
    let vertices = figure_vertices(cfg)?;
    let qp = cfg.qparam()?;
    let l = qp.step();
    let x_end = cfg.x_max_l * l;
    let peak = vertices.iter().fold(0.0f64, |m, v| m.max(v.1));
    let y_top = ((peak / 0.25).ceil() * 0.25).max(0.25);
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let base = HEIGHT - BOTTOM;
    let px = |x: f64| LEFT + plot_w * x / x_end;
    let py = |y: f64| base - plot_h * y / y_top;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(s, "<title>(1-q) tau_q on [0, {} log(1/q)] for q = {}</title>", cfg.x_max_l, cfg.q).unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(s, r##"<g stroke="#000" stroke-width="1" fill="none">"##).unwrap();
    writeln!(s, r#"<line x1="{LEFT}" y1="{base}" x2="{}" y2="{base}"/>"#, WIDTH - RIGHT).unwrap();
    writeln!(s, r#"<line x1="{LEFT}" y1="{base}" x2="{LEFT}" y2="{TOP}"/>"#).unwrap();
    let n_ticks = (cfg.x_max_l * (1.0 + 1e-12)).floor() as usize;
    for n in 0..=n_ticks {
        let x = px(n as f64 * l);
        writeln!(s, r#"<line x1="{x:.3}" y1="{base}" x2="{x:.3}" y2="{}"/>"#, base + 6.0).unwrap();
    }
    let y_ticks = (y_top / 0.25).round() as usize;
    for i in 0..=y_ticks {
        let y = py(i as f64 * 0.25);
        writeln!(s, r#"<line x1="{}" y1="{y:.3}" x2="{LEFT}" y2="{y:.3}"/>"#, LEFT - 6.0).unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(s, r#"<g font-family="sans-serif" font-size="12" fill="black">"#).unwrap();
    for n in 0..=n_ticks {
        let label = match n {
            0 => "0".to_string(),
            1 => "L".to_string(),
            n => format!("{n}L"),
        };
        writeln!(
            s,
            r#"<text x="{:.3}" y="{}" text-anchor="middle">{label}</text>"#,
            px(n as f64 * l),
            base + 20.0
        )
        .unwrap();
    }
    for i in 0..=y_ticks {
        writeln!(
            s,
            r#"<text x="{}" y="{:.3}" text-anchor="end">{}</text>"#,
            LEFT - 10.0,
            py(i as f64 * 0.25) + 4.0,
            i as f64 * 0.25
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">x (L = log(1/q) = {l:.6})</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 10.0
    )
    .unwrap();
    writeln!(s, r#"<text x="{LEFT}" y="{}">(1-q) tau_q(x), q = {}</text>"#, TOP - 14.0, cfg.q).unwrap();
    writeln!(s, "</g>").unwrap();
    writeln!(
        s,
        r#"<g transform="translate({LEFT} {base}) scale({:?} {:?})">"#,
        plot_w / x_end,
        -plot_h / y_top
    )
    .unwrap();
    s.push_str(r##"<polyline fill="none" stroke="#1f4e9a" stroke-width="2" vector-effect="non-scaling-stroke" points=""##);
    for (i, (x, y)) in vertices.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{x:?},{y:?}").unwrap();
    }
    s.push_str("\"/>\n</g>\n</svg>\n");
    Ok(s)
}

/// Parse the polyline vertices back out of an SVG produced by [`cmd_figure`].
pub fn parse_figure_vertices(svg: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let bad = || CliError::Usage("no polyline points in SVG".into());
    let start = svg.find("points=\"").ok_or_else(bad)? + "points=\"".len();
    let len = svg[start..].find('"').ok_or_else(bad)?;
    svg[start..start + len]
        .split(' ')
        .map(|pair| {
            let (x, y) = pair.split_once(',').ok_or_else(bad)?;
            Ok((x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?))
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct IterateReport {
    q: f64,
    steps: usize,
    moments: Vec<f64>,
    fixed_point: Vec<f64>,
    distance: f64,
    distance_tail_bound: f64,
}

/// Moments `a_0..a_n` of `T^steps(delta_q)` and their distance to `(m_n)`.
pub fn cmd_iterate(steps: usize, n: usize, cfg: &RunConfig) -> Result<String, CliError> {
    cfg.expect_format(&[Format::Text, Format::Json])?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let qp = cfg.qparam()?;
    let a = orbit_from_delta_q(&qp, steps, n);
    let m = fixed_point_m(n);
    let d = k_distance(&a.tail(), &m.tail())?;
    let report = IterateReport {
        q: qp.q(),
        steps,
        moments: a.moments().to_vec(),
        fixed_point: m.moments().to_vec(),
        distance: d.value,
        distance_tail_bound: d.tail_bound,
    };
    Ok(match cfg.format {
        Format::Json => serde_json::to_string(&report).expect("plain struct serializes") + "\n",
        _ => {
            let mut s = format!("q = {}, steps = {steps}\n", report.q);
            for (k, v) in report.moments.iter().enumerate() {
                writeln!(s, "a_{k} = {v:?}").unwrap();
            }
            writeln!(s, "distance_to_fixed_point = {:e}", d.value).unwrap();
            writeln!(s, "distance_tail_bound = {:e}", d.tail_bound).unwrap();
            s
        }
    })
}

/// JSON array of `{check_name, target, measured, tolerance, pass}`.
pub fn render_report(checks: &[Check]) -> String {
    serde_json::to_string_pretty(checks).expect("plain struct serializes") + "\n"
}
