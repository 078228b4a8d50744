use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use pqca::arith::{fmt_rat, parse_rat, Params, Rat, Word};
use pqca::ca::{g_local, render_rule, Rule};
use pqca::exec::{Exec, Options, DEFAULT_WORK_LIMIT};
use pqca::intervals::{build_i, build_j, build_x, build_y, IntervalReport, Kind};
use pqca::trace::{
    build_det_table, decode_prefix, is_trace_word_limited, language_census, pruned_size,
    trace_of_window, ArithmeticDeterminer, TraceWord, MAX_TABLE_BASE,
};
use pqca::verify::{
    escape_time_census, grid_resolution, mixing_bound, mixing_measure, verify_det_table,
    verify_local_lemmas, verify_multiplication, verify_odometer, verify_reversibility,
    witness_search, EscapeQuery, MixingMethod, MixingQuery, OrbitQuery, Report,
};
use pqca::Error;

#[derive(Parser)]
#[command(name = "pqca", version, about = "Base-pq cellular automata multiplying by p and p/q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the local rule g as a table.
    Table(TableArgs),
    /// Space-time diagram of F (or G, or the shift) from a word.
    Simulate(SimulateArgs),
    /// Extract a column trace from a window, decode a trace word, or test membership.
    Trace(TraceArgs),
    /// Sizes of the pruned trace language, with optional exact census.
    Language(LanguageArgs),
    /// Build one of the interval sets X, Y, I or J.
    Intervals(IntervalsArgs),
    /// Exact mixing measures against their bounds for a range of times.
    Mixing(MixingArgs),
    /// Run the exhaustive and sampled verifiers.
    Verify(VerifyArgs),
    /// Search for an orbit prefix that stays inside an interval set.
    Search(SearchArgs),
    /// Histogram of first hitting times of target cylinders.
    Escape(EscapeArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_WORK_LIMIT)]
    work_limit: u64,
    /// Leave timing fields empty so that repeated runs are byte-identical.
    #[arg(long)]
    no_timings: bool,
}

#[derive(Args)]
struct TableArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RuleName {
    F,
    G,
    Shift,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    word: String,
    /// Defaults to the largest time the word determines.
    #[arg(long)]
    t_max: Option<usize>,
    #[arg(long, value_enum, default_value = "f")]
    rule: RuleName,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    word: String,
    /// 0-based column of --word; defaults to the centre.
    #[arg(long)]
    column: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<i64>,
    #[arg(long)]
    t_max: Option<i64>,
    /// Treat --word as a trace word and decode it into a time-0 prefix.
    #[arg(long, conflicts_with = "member")]
    decode: bool,
    /// Treat --word as a trace word and test whether it occurs in a trace.
    #[arg(long)]
    member: bool,
}

#[derive(Args)]
struct LanguageArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    exact: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    X,
    Y,
    I,
    J,
}

#[derive(Args)]
struct IntervalsArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, ignore_case = true)]
    kind: KindArg,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    exact_filter: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Naive,
    Arithmetic,
}

#[derive(Args)]
struct MixingArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    v1: String,
    #[arg(long)]
    v2: String,
    #[arg(long, default_value_t = 0)]
    i: usize,
    #[arg(long)]
    t_max: usize,
    #[arg(long, value_enum, default_value = "arithmetic")]
    method: MethodArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Longest word length for the odometer scan.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    t_max: Option<usize>,
    /// Random rationals for the multiplication check; needs --seed.
    #[arg(long, requires = "seed")]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum, ignore_case = true, default_value = "x")]
    kind: KindArg,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    epsilon: Option<String>,
    /// Orbit horizon T.
    #[arg(long)]
    depth: usize,
    /// Number of fractional cells tracked; at least the grid resolution of the set.
    #[arg(long)]
    resolution: Option<usize>,
    /// Digits farther than this from the tracked cells stay zero; defaults to --depth.
    #[arg(long)]
    window_radius: Option<usize>,
}

#[derive(Args)]
struct EscapeArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated target words, each anchored at position 1.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    targets: Vec<String>,
    #[arg(long)]
    horizon: usize,
    #[arg(long)]
    samples: u64,
    #[arg(long)]
    seed: u64,
    /// Sampled digits occupy positions 1-radius ..= radius.
    #[arg(long, default_value_t = 8)]
    radius: usize,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonCoprime { .. }
            | Error::OutOfRange(_)
            | Error::DigitOutOfRange { .. }
            | Error::EmptyWord
            | Error::Negative(_)
            | Error::NonPositive(_)
            | Error::NonTerminating(_)
            | Error::TooShort { .. }
            | Error::OutOfCone
            | Error::PreconditionViolated(_)
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

struct Ctx {
    params: Params,
    format: Format,
    opts: Options,
    timings: bool,
}

impl Ctx {
    fn new(common: &Common, default_format: Format, command: &str, extra: Value) -> Result<Ctx, Failure> {
        let params = Params::new(common.p, common.q)?;
        let format = common.format.unwrap_or(default_format);
        let mut exec = Exec::default();
        if let Some(workers) = common.workers {
            if workers == 0 {
                return Err(Failure::Usage("--workers must be positive".into()));
            }
            if workers == 1 {
                exec = Exec::Sequential;
            } else {
                configure_pool(workers)?;
            }
        }
        let mut echo = json!({
            "command": command,
            "p": params.p(),
            "q": params.q(),
            "format": format_name(format),
            "workers": common.workers,
            "work_limit": common.work_limit,
        });
        if let (Value::Object(echo), Value::Object(extra)) = (&mut echo, extra) {
            echo.extend(extra);
        }
        eprintln!("{echo}");
        Ok(Ctx {
            params,
            format,
            opts: Options {
                exec,
                work_limit: common.work_limit,
            },
            timings: !common.no_timings,
        })
    }

    fn word(&self, text: &str) -> Result<Word, Failure> {
        Ok(Word::parse(&self.params, text)?)
    }

    fn render(&self, w: &Word) -> String {
        w.render(self.params.base())
    }
}

#[cfg(feature = "parallel")]
fn configure_pool(workers: usize) -> Result<(), Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

#[cfg(not(feature = "parallel"))]
fn configure_pool(_workers: usize) -> Result<(), Failure> {
    Ok(())
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Csv => "csv",
        Format::Text => "text",
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("output types serialize");
    s.push('\n');
    s
}

fn parse_epsilon(text: Option<&str>) -> Result<Option<Rat>, Failure> {
    text.map(|t| parse_rat(t).map_err(Failure::from)).transpose()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Table(a) => table(a),
        Command::Simulate(a) => simulate(a),
        Command::Trace(a) => trace(a),
        Command::Language(a) => language(a),
        Command::Intervals(a) => intervals(a),
        Command::Mixing(a) => mixing(a),
        Command::Verify(a) => verify(a),
        Command::Search(a) => search(a),
        Command::Escape(a) => escape(a),
    };
    match outcome {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn table(a: &TableArgs) -> Outcome {
    let ctx = Ctx::new(&a.common, Format::Text, "table", json!({}))?;
    let b = ctx.params.base();
    let rows: Vec<Vec<u32>> = (0..b).map(|x| (0..b).map(|y| g_local(&ctx.params, x, y)).collect()).collect();
    Ok(match ctx.format {
        Format::Json => to_json(&json!({ "p": ctx.params.p(), "q": ctx.params.q(), "g": rows })),
        Format::Csv => {
            let mut out = String::from("x,y,g\n");
            for (x, row) in rows.iter().enumerate() {
                for (y, g) in row.iter().enumerate() {
                    out.push_str(&format!("{x},{y},{g}\n"));
                }
            }
            out
        }
        Format::Text => {
            let cell = (b - 1).to_string().len();
            let mut out = String::from("x\\y |");
            for y in 0..b {
                out.push_str(&format!(" {y:>cell$}"));
            }
            out.push('\n');
            out.push_str(&format!("----+{}\n", "-".repeat((cell + 1) * b as usize)));
            for (x, row) in rows.iter().enumerate() {
                out.push_str(&format!("{x:>3} |"));
                for g in row {
                    out.push_str(&format!(" {g:>cell$}"));
                }
                out.push('\n');
            }
            out
        }
    })
}

fn simulate(a: &SimulateArgs) -> Outcome {
    let ctx = Ctx::new(
        &a.common,
        Format::Text,
        "simulate",
        json!({ "word": a.word, "t_max": a.t_max, "rule": match a.rule { RuleName::F => "F", RuleName::G => "G", RuleName::Shift => "shift" } }),
    )?;
    let w = ctx.word(&a.word)?;
    let (rule, shrink) = match a.rule {
        RuleName::F => (Rule::F(ctx.params), 2),
        RuleName::G => (Rule::G(ctx.params), 1),
        RuleName::Shift => (Rule::Shift, 1),
    };
    let t_max = a.t_max.unwrap_or(w.len().saturating_sub(1) / shrink);
    let diagram = render_rule(rule, &w, t_max)?;
    let b = ctx.params.base();
    Ok(match ctx.format {
        Format::Text => diagram.render_text(b),
        Format::Json => {
            let rows: Vec<Value> = diagram
                .rows
                .iter()
                .map(|r| json!({ "time": r.time, "leftmost": r.leftmost, "word": r.word.render(b) }))
                .collect();
            to_json(&json!({ "rows": rows }))
        }
        Format::Csv => {
            let mut out = String::from("time,leftmost,word\n");
            for r in &diagram.rows {
                out.push_str(&format!("{},{},\"{}\"\n", r.time, r.leftmost, r.word.render(b)));
            }
            out
        }
    })
}

fn trace(a: &TraceArgs) -> Outcome {
    let ctx = Ctx::new(
        &a.common,
        Format::Json,
        "trace",
        json!({ "word": a.word, "column": a.column, "t_min": a.t_min, "t_max": a.t_max, "decode": a.decode, "member": a.member }),
    )?;
    let w = ctx.word(&a.word)?;
    let value = if a.decode {
        let u = TraceWord(w);
        let prefix = if ctx.params.base() <= MAX_TABLE_BASE {
            decode_prefix(&build_det_table(&ctx.params, &ctx.opts)?, &u)?
        } else {
            decode_prefix(&ArithmeticDeterminer::new(&ctx.params), &u)?
        };
        json!({ "trace": ctx.render(&u.0), "prefix": ctx.render(&prefix) })
    } else if a.member {
        let member = is_trace_word_limited(&ctx.params, &TraceWord(w.clone()), ctx.opts.work_limit)?;
        json!({ "trace": ctx.render(&w), "member": member })
    } else {
        let column = a.column.unwrap_or(w.len() / 2);
        let reach = column.min(w.len().saturating_sub(column + 1)) as i64;
        let t_min = a.t_min.unwrap_or(-reach);
        let t_max = a.t_max.unwrap_or(reach);
        let u = trace_of_window(&ctx.params, &w, column, t_min, t_max)?;
        json!({ "column": column, "t_min": t_min, "t_max": t_max, "trace": ctx.render(&u.0) })
    };
    Ok(match ctx.format {
        Format::Json => to_json(&value),
        Format::Text | Format::Csv => {
            let obj = value.as_object().expect("object");
            let mut out = String::new();
            for (k, v) in obj {
                let v = v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string());
                out.push_str(&format!("{k}: {v}\n"));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct CensusRow {
    n: usize,
    bound: String,
    exact: Option<String>,
    elapsed_ms: Option<u64>,
}

fn language(a: &LanguageArgs) -> Outcome {
    let ctx = Ctx::new(&a.common, Format::Csv, "language", json!({ "n": a.n, "exact": a.exact }))?;
    let mut rows = Vec::new();
    for n in 1..=a.n {
        let started = Instant::now();
        let bound = pruned_size(&ctx.params, n);
        let exact = if a.exact {
            Some(language_census(&ctx.params, n, true, &ctx.opts)?.to_string())
        } else {
            language_census(&ctx.params, n, false, &ctx.opts)?;
            None
        };
        rows.push(CensusRow {
            n,
            bound: bound.to_string(),
            exact,
            elapsed_ms: ctx.timings.then(|| started.elapsed().as_millis() as u64),
        });
    }
    Ok(match ctx.format {
        Format::Json => to_json(&rows),
        Format::Csv | Format::Text => {
            let mut out = String::from("n,bound,exact,elapsed_ms\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.n,
                    r.bound,
                    r.exact.unwrap_or_default(),
                    r.elapsed_ms.map(|e| e.to_string()).unwrap_or_default()
                ));
            }
            out
        }
    })
}

fn intervals(a: &IntervalsArgs) -> Outcome {
    let ctx = Ctx::new(
        &a.common,
        Format::Json,
        "intervals",
        json!({ "kind": kind_name(a.kind), "k": a.k, "epsilon": a.epsilon, "exact_filter": a.exact_filter }),
    )?;
    let epsilon = parse_epsilon(a.epsilon.as_deref())?;
    let report = build_report(&ctx, a.kind, a.k, epsilon.as_ref(), a.exact_filter)?;
    Ok(match ctx.format {
        Format::Json => to_json(&report),
        Format::Csv => report.set()?.to_csv(),
        Format::Text => {
            let mut out = format!(
                "kind {} total_length {} word_count {} intervals {}\n",
                kind_name(a.kind),
                report.total_length,
                report.word_count,
                report.intervals.len()
            );
            for [lo, hi] in &report.intervals {
                out.push_str(&format!("[{lo}, {hi})\n"));
            }
            out
        }
    })
}

fn kind_name(kind: KindArg) -> &'static str {
    match kind {
        KindArg::X => "X",
        KindArg::Y => "Y",
        KindArg::I => "I",
        KindArg::J => "J",
    }
}

fn build_report(ctx: &Ctx, kind: KindArg, k: Option<usize>, epsilon: Option<&Rat>, exact: bool) -> Result<IntervalReport, Failure> {
    let params = &ctx.params;
    let need_k = || k.ok_or_else(|| Failure::Usage("--k is required for kind I".into()));
    Ok(match kind {
        KindArg::X => {
            let set = build_x(params)?;
            let count = set.len() as u64;
            IntervalReport::new(params, Kind::X, None, None, &set, count)
        }
        KindArg::Y => {
            let set = build_y(params)?;
            let count = set.len() as u64;
            IntervalReport::new(params, Kind::Y, None, None, &set, count)
        }
        KindArg::I => {
            let k = need_k()?;
            let built = build_i(params, k, exact, &ctx.opts)?;
            IntervalReport::new(params, Kind::I, Some(k), None, &built.set, built.word_count)
        }
        KindArg::J => {
            let eps = epsilon.ok_or_else(|| Failure::Usage("--epsilon is required for kind J".into()))?;
            let built = build_j(params, eps, &ctx.opts)?;
            IntervalReport::new(params, Kind::J, Some(built.plan.k), Some(eps), &built.set, built.word_count)
        }
    })
}

fn mixing(a: &MixingArgs) -> Outcome {
    let ctx = Ctx::new(
        &a.common,
        Format::Csv,
        "mixing",
        json!({ "v1": a.v1, "v2": a.v2, "i": a.i, "t_max": a.t_max, "method": match a.method { MethodArg::Naive => "naive", MethodArg::Arithmetic => "arithmetic" } }),
    )?;
    let (v1, v2) = (ctx.word(&a.v1)?, ctx.word(&a.v2)?);
    let method = match a.method {
        MethodArg::Naive => MixingMethod::Naive,
        MethodArg::Arithmetic => MixingMethod::Arithmetic,
    };
    let t_min = a.i + v2.len();
    if a.t_max < t_min {
        return Err(Failure::Usage(format!("--t-max must be at least i + |v2| = {t_min}")));
    }
    let mut rows = Vec::new();
    for t in t_min..=a.t_max {
        let query = MixingQuery { v1: v1.clone(), v2: v2.clone(), i: a.i, t };
        let mu = mixing_measure(&ctx.params, &query, method, &ctx.opts)?;
        let product = query.product(&ctx.params);
        let (lo, hi) = mixing_bound(&ctx.params, &query)?;
        rows.push((t, mu, product, lo, hi));
    }
    Ok(match ctx.format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(t, mu, product, lo, hi)| {
                    json!({ "t": t, "measure": fmt_rat(mu), "product": fmt_rat(product), "lo": fmt_rat(lo), "hi": fmt_rat(hi) })
                })
                .collect();
            to_json(&rows)
        }
        Format::Csv | Format::Text => {
            let mut out = String::from("t,measure_num,measure_den,product_num,product_den,lo,hi\n");
            for (t, mu, product, lo, hi) in rows {
                out.push_str(&format!(
                    "{t},{},{},{},{},{},{}\n",
                    mu.numer(),
                    mu.denom(),
                    product.numer(),
                    product.denom(),
                    fmt_rat(&lo),
                    fmt_rat(&hi)
                ));
            }
            out
        }
    })
}

/// Largest word length whose exhaustive scan stays under a few million words.
fn default_odometer_len(base: u64) -> usize {
    (3..=7).rev().find(|&k| base.pow(k as u32) <= 4_000_000).unwrap_or(3)
}

fn verify(a: &VerifyArgs) -> Outcome {
    let ctx = Ctx::new(
        &a.common,
        Format::Json,
        "verify",
        json!({ "k": a.k, "t_max": a.t_max, "samples": a.samples, "seed": a.seed }),
    )?;
    let params = &ctx.params;
    let base = params.base() as u64;
    let k = a.k.unwrap_or_else(|| default_odometer_len(base));
    let t_max = a.t_max.unwrap_or(((k.max(3) - 1) / 2).min(3));
    let mut reports = verify_local_lemmas(params, &ctx.opts);
    reports.push(verify_det_table(params, &ctx.opts));
    reports.push(verify_reversibility(params, 5, &ctx.opts)?);
    reports.push(verify_odometer(params, k, t_max, &ctx.opts)?);
    if let (Some(samples), Some(seed)) = (a.samples, a.seed) {
        reports.push(verify_multiplication(params, samples, seed, &ctx.opts));
    }
    if !ctx.timings {
        reports = reports.into_iter().map(Report::without_timing).collect();
    }
    let passed = reports.iter().all(Report::passed);
    let out = match ctx.format {
        Format::Json => to_json(&reports),
        Format::Csv => {
            let mut out = String::from("name,checked,violations,elapsed_ms\n");
            for r in &reports {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    r.name,
                    r.checked,
                    r.violation_count,
                    r.elapsed_ms.map(|e| e.to_string()).unwrap_or_default()
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                out.push_str(&format!("{verdict} {} checked={} violations={}\n", r.name, r.checked, r.violation_count));
                for v in &r.violations {
                    out.push_str(&format!("  {v}\n"));
                }
            }
            out
        }
    };
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn search(a: &SearchArgs) -> Outcome {
    let ctx = Ctx::new(
        &a.common,
        Format::Json,
        "search",
        json!({ "kind": kind_name(a.kind), "k": a.k, "epsilon": a.epsilon, "depth": a.depth, "resolution": a.resolution, "window_radius": a.window_radius }),
    )?;
    let epsilon = parse_epsilon(a.epsilon.as_deref())?;
    let report = build_report(&ctx, a.kind, a.k, epsilon.as_ref(), false)?;
    let set = report.set()?;
    let grid = grid_resolution(&ctx.params, &set).unwrap_or(1).max(1);
    let resolution = a.resolution.unwrap_or(grid);
    if resolution < grid {
        return Err(Failure::Usage(format!("--resolution must be at least {grid} for this set")));
    }
    let query = OrbitQuery {
        set,
        horizon: a.depth,
        window_radius: a.window_radius.unwrap_or(a.depth),
        resolution,
    };
    let found = witness_search(&ctx.params, &query, ctx.opts.work_limit)?;
    let b = ctx.params.base();
    let value = match &found {
        Some(c) => json!({
            "found": true,
            "horizon": a.depth,
            "offset": c.offset(),
            "digits": Word(c.digits().to_vec()).render(b),
            "value": fmt_rat(&pqca::arith::rat_of_config(&ctx.params, c)),
            "rendered": c.render(b),
        }),
        None => json!({ "found": false, "horizon": a.depth }),
    };
    let out = match ctx.format {
        Format::Json => to_json(&value),
        Format::Csv | Format::Text => match &found {
            Some(c) => format!("found {} at horizon {}\n", c.render(b), a.depth),
            None => format!("not found at horizon {}\n", a.depth),
        },
    };
    if found.is_some() {
        Ok(out)
    } else {
        print!("{out}");
        Err(Failure::Verification)
    }
}

fn escape(a: &EscapeArgs) -> Outcome {
    let ctx = Ctx::new(
        &a.common,
        Format::Json,
        "escape",
        json!({ "targets": a.targets, "horizon": a.horizon, "samples": a.samples, "seed": a.seed, "radius": a.radius }),
    )?;
    let targets = a.targets.iter().map(|t| ctx.word(t)).collect::<Result<Vec<_>, _>>()?;
    let query = EscapeQuery {
        targets,
        horizon: a.horizon,
        samples: a.samples,
        seed: a.seed,
        radius: a.radius,
    };
    let census = escape_time_census(&ctx.params, &query, &ctx.opts)?;
    Ok(match ctx.format {
        Format::Json => to_json(&census),
        Format::Csv | Format::Text => {
            let mut out = String::from("time,count\n");
            for (t, n) in &census.histogram {
                out.push_str(&format!("{t},{n}\n"));
            }
            out.push_str(&format!("no-hit,{}\n", census.no_hit));
            out
        }
    })
}
