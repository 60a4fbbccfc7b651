//! Command-line front end: solve, maxr, sample, table, validate.
//!
//! Exit codes are a stable contract: 0 success, 1 usage or malformed input,
//! 2 infeasible target, 3 rejection budget exhausted, 4 validation failed.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use corrbeta::{
    case_bounds, check_feasibility, efficiency, efficiency_grid, johnk_efficiency, max_feasible_r,
    round_half_up_3dp, solve_alphas, target_correlation, validate_sampler, CaseBounds,
    CorrelatedBetaTarget, EfficiencyGrid, Error, Method, RngStream, ValidationReport,
};

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_INFEASIBLE: i32 = 2;
const EXIT_REJECTIONS: i32 = 3;
const EXIT_VALIDATION: i32 = 4;

#[derive(Parser)]
#[command(
    name = "corrbeta",
    version,
    about = "Sample positively correlated beta pairs via a latent Dirichlet"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the Dirichlet shapes for a target and report feasibility.
    Solve {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the largest attainable correlation for given marginal shapes.
    Maxr {
        #[arg(long, allow_negative_numbers = true)]
        c1: f64,
        #[arg(long, allow_negative_numbers = true)]
        c2: f64,
        #[arg(long, allow_negative_numbers = true)]
        c3: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate n correlated pairs as CSV rows `y1,y2`.
    Sample {
        #[command(flatten)]
        target: TargetArgs,
        /// Number of pairs to draw.
        #[arg(short, long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Gamma)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// `text` and `csv` both emit the CSV rows; `json` emits the batch.
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write to this file instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Acceptance-probability table over (c1 = c3, c2) at fixed r.
    Table {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        /// Row values (c1 = c3); defaults to the published table rows.
        #[arg(long = "c1-list", value_delimiter = ',', allow_negative_numbers = true)]
        c1_list: Option<Vec<f64>>,
        /// Column values (c2); defaults to the published table columns.
        #[arg(long = "c2-list", value_delimiter = ',', allow_negative_numbers = true)]
        c2_list: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a batch and verify moments, correlation and marginal fit.
    Validate {
        #[command(flatten)]
        target: TargetArgs,
        /// Number of pairs to draw (at least 1000).
        #[arg(short, long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = MethodArg::Gamma)]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args)]
struct TargetArgs {
    /// First shape of the y1 marginal Be(c1, c2).
    #[arg(long, allow_negative_numbers = true)]
    c1: f64,
    /// Second shape of the y1 marginal Be(c1, c2).
    #[arg(long, allow_negative_numbers = true)]
    c2: f64,
    /// First shape of the y2 marginal Be(c3, c1 + c2 - c3).
    #[arg(long, allow_negative_numbers = true)]
    c3: f64,
    /// Target correlation in [0, 1).
    #[arg(long, allow_negative_numbers = true)]
    r: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Gamma,
    Johnk,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Gamma => Method::Gamma,
            MethodArg::Johnk => Method::Johnk,
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_usage_error = e.use_stderr();
            let _ = e.print();
            std::process::exit(if is_usage_error { EXIT_USAGE } else { EXIT_OK });
        }
    };
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Solve { target, format } => cmd_solve(&target, format),
        Command::Maxr { c1, c2, c3, format } => cmd_maxr(c1, c2, c3, format),
        Command::Sample {
            target,
            n,
            method,
            seed,
            stream,
            format,
            output,
        } => cmd_sample(&target, n, method.into(), seed, stream, format, output),
        Command::Table {
            r,
            c1_list,
            c2_list,
            format,
            output,
        } => cmd_table(r, c1_list, c2_list, format, output),
        Command::Validate {
            target,
            n,
            method,
            seed,
            stream,
            format,
        } => cmd_validate(&target, n, method.into(), seed, stream, format),
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidTarget(_) | Error::InvalidInput(_) | Error::InvalidShape(_) => EXIT_USAGE,
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::TooManyRejections { .. } => EXIT_REJECTIONS,
    }
}

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code_for(err)
}

fn build_target(args: &TargetArgs) -> Result<CorrelatedBetaTarget, Error> {
    CorrelatedBetaTarget::new(args.c1, args.c2, args.c3, args.r)
}

fn write_out(output: &Option<PathBuf>, content: &str) -> i32 {
    let result = match output {
        Some(path) => std::fs::write(path, content),
        None => std::io::stdout().write_all(content.as_bytes()),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: cannot write output: {e}");
            EXIT_USAGE
        }
    }
}

fn cmd_solve(args: &TargetArgs, format: Format) -> i32 {
    let target = match build_target(args) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let report = check_feasibility(&target);
    let bounds = case_bounds(&target);
    // Only defined when the implied c4 is positive.
    let max_r = target.c4().ok().map(|_| {
        max_feasible_r(target.c1(), target.c2(), target.c3())
            .expect("positive shapes with positive c4")
    });

    if !report.feasible {
        match format {
            Format::Json => {
                let doc = serde_json::json!({
                    "target": target,
                    "c4": target.c4().ok(),
                    "feasibility": report,
                    "case_bounds": bounds,
                    "max_feasible_r": max_r,
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            }
            _ => {
                print_target_line(&target);
                println!("case: {}", report.special_case);
                println!("infeasible: {}", report.violation_summary());
                if let Some(m) = report.margins {
                    println!(
                        "margins: a1={} a2={} a0={} a3={}",
                        m.alpha1, m.alpha2, m.alpha0, m.alpha3
                    );
                }
                if let Some(b) = bounds {
                    print_bounds_line(&b);
                }
                match max_r {
                    Some(m) => println!("max feasible r: {m}"),
                    None => println!("max feasible r: undefined (c4 <= 0)"),
                }
            }
        }
        return EXIT_INFEASIBLE;
    }

    let alphas = solve_alphas(&target).expect("feasible target solves");
    let roundtrip = target_correlation(&alphas);
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "target": target,
                "c4": target.c4().ok(),
                "feasibility": report,
                "case_bounds": bounds,
                "alphas": alphas,
                "gamma": alphas.gamma_sum(),
                "correlation_roundtrip": roundtrip,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        _ => {
            print_target_line(&target);
            println!("case: {}", report.special_case);
            println!(
                "alphas: a0={} a1={} a2={} a3={}",
                alphas.a0(),
                alphas.a1(),
                alphas.a2(),
                alphas.a3()
            );
            println!("gamma: {}", alphas.gamma_sum());
            if let Some(b) = bounds {
                print_bounds_line(&b);
            }
            println!("correlation roundtrip: {roundtrip}");
        }
    }
    EXIT_OK
}

fn print_target_line(target: &CorrelatedBetaTarget) {
    let c4 = target
        .c4()
        .map(|v| v.to_string())
        .unwrap_or_else(|_| format!("{} (nonpositive)", target.c1() + target.c2() - target.c3()));
    println!(
        "target: c1={} c2={} c3={} c4={} r={}",
        target.c1(),
        target.c2(),
        target.c3(),
        c4,
        target.r()
    );
}

fn print_bounds_line(bounds: &CaseBounds) {
    match bounds {
        CaseBounds::Unrestricted { .. } => {
            println!("bounds: none (feasible for every r in [0, 1))");
        }
        CaseBounds::Interval {
            value,
            lower,
            upper,
            feasible,
            ..
        } => {
            let upper = upper.map(|u| u.to_string()).unwrap_or_else(|| "inf".into());
            println!(
                "bounds: {lower} < {value} < {upper} ({})",
                if *feasible { "satisfied" } else { "violated" }
            );
        }
    }
}

fn cmd_maxr(c1: f64, c2: f64, c3: f64, format: Format) -> i32 {
    // Report a nonpositive implied c4 as infeasibility, consistent with
    // `solve` on the same shapes.
    let target = match CorrelatedBetaTarget::new(c1, c2, c3, 0.0) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    if target.c4().is_err() {
        let report = check_feasibility(&target);
        eprintln!("error: {}", Error::Infeasible(report));
        return EXIT_INFEASIBLE;
    }
    let max_r = max_feasible_r(c1, c2, c3).expect("validated shapes");
    match format {
        Format::Json => {
            let doc = serde_json::json!({
                "c1": c1,
                "c2": c2,
                "c3": c3,
                "special_case": target.special_case(),
                "max_feasible_r": max_r,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        _ => {
            println!("max feasible r: {max_r} ({})", target.special_case());
        }
    }
    EXIT_OK
}

fn cmd_sample(
    args: &TargetArgs,
    n: u64,
    method: Method,
    seed: u64,
    stream_id: u64,
    format: Format,
    output: Option<PathBuf>,
) -> i32 {
    let target = match build_target(args) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let mut stream = RngStream::new(seed, stream_id);
    let batch = match corrbeta::sample_correlated_beta(&mut stream, &target, n, method) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };

    if let Some(stats) = batch.johnk {
        let alphas = solve_alphas(&target).expect("sampled target is feasible");
        eprintln!(
            "johnk: attempts={} accepts={} rate={} analytic={}",
            stats.attempts,
            stats.accepts,
            stats.acceptance_rate(),
            johnk_efficiency(&alphas)
        );
    }

    let content = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&batch).unwrap();
            s.push('\n');
            s
        }
        _ => {
            let mut out = String::with_capacity(batch.pairs.len() * 40 + 8);
            out.push_str("y1,y2\n");
            for p in &batch.pairs {
                let _ = writeln!(out, "{},{}", p.y1, p.y2);
            }
            out
        }
    };
    write_out(&output, &content)
}

fn cmd_table(
    r: f64,
    c1_list: Option<Vec<f64>>,
    c2_list: Option<Vec<f64>>,
    format: Format,
    output: Option<PathBuf>,
) -> i32 {
    let c1_values = c1_list.unwrap_or_else(|| efficiency::DEFAULT_C1_VALUES.to_vec());
    let c2_values = c2_list.unwrap_or_else(|| efficiency::DEFAULT_C2_VALUES.to_vec());
    let grid = match efficiency_grid(r, &c1_values, &c2_values) {
        Ok(g) => g,
        Err(e) => return fail(&e),
    };
    let content = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&grid).unwrap();
            s.push('\n');
            s
        }
        Format::Csv => render_grid_csv(&grid),
        Format::Text => render_grid_text(&grid),
    };
    write_out(&output, &content)
}

fn render_grid_csv(grid: &EfficiencyGrid) -> String {
    let mut out = String::new();
    for c2 in &grid.c2_values {
        let _ = write!(out, ",{c2}");
    }
    out.push('\n');
    for (c1, row) in grid.c1_values.iter().zip(&grid.cells) {
        let _ = write!(out, "{c1}");
        for cell in row {
            let _ = write!(out, ",{:.3}", round_half_up_3dp(*cell));
        }
        out.push('\n');
    }
    out
}

fn render_grid_text(grid: &EfficiencyGrid) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "acceptance probability, r = {}, scenario {}",
        grid.r, grid.constraint
    );
    let _ = write!(out, "{:>7}", "c1\\c2");
    for c2 in &grid.c2_values {
        let _ = write!(out, "{c2:>7.2}");
    }
    out.push('\n');
    for (c1, row) in grid.c1_values.iter().zip(&grid.cells) {
        let _ = write!(out, "{c1:>7.2}");
        for cell in row {
            let _ = write!(out, "{:>7.3}", round_half_up_3dp(*cell));
        }
        out.push('\n');
    }
    out
}

fn cmd_validate(
    args: &TargetArgs,
    n: u64,
    method: Method,
    seed: u64,
    stream_id: u64,
    format: Format,
) -> i32 {
    let target = match build_target(args) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let mut stream = RngStream::new(seed, stream_id);
    let report = match validate_sampler(&mut stream, &target, n, method) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
        _ => print_report_text(&report, method),
    }
    if report.pass {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    }
}

fn print_report_text(report: &ValidationReport, method: Method) {
    let t = &report.tolerance_spec;
    println!("validation: n={} method={}", report.n, method);
    println!(
        "  mean y1: {} (expected {}, band {})",
        report.mean_y1, report.expected_mean_y1, t.mean_band_y1
    );
    println!(
        "  mean y2: {} (expected {}, band {})",
        report.mean_y2, report.expected_mean_y2, t.mean_band_y2
    );
    println!(
        "  var y1: {} (expected {}, band {})",
        report.var_y1, report.expected_var_y1, t.var_band_y1
    );
    println!(
        "  var y2: {} (expected {}, band {})",
        report.var_y2, report.expected_var_y2, t.var_band_y2
    );
    println!(
        "  corr: {} (expected {}, band {})",
        report.corr, report.expected_corr, t.corr_band
    );
    println!("  ks y1: {} (threshold {})", report.ks_y1, t.ks_threshold);
    println!("  ks y2: {} (threshold {})", report.ks_y2, t.ks_threshold);
    println!("verdict: {}", if report.pass { "PASS" } else { "FAIL" });
}
