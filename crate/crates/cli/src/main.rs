//! Command-line front end: single solves, benchmark-table reproduction,
//! convergence studies, and the analytic-oracle cross-check, with text, CSV
//! and JSON output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use tesphere::oracle::oracle_roots;
use tesphere::reference::{table, BenchmarkTable};
use tesphere::te::{TeProblem, DEFAULT_BRANCHES};
use tesphere::tm::TmProblem;
use tesphere::{Error, Mode, RefractiveIndex, TransmissionEigenvalue};

const USAGE_EXIT: u8 = 2;
const CONTRAST_EXIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "tesphere",
    about = "Maxwell transmission eigenvalues of a ball with radial refractive index",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the lowest transmission eigenvalues of one configuration.
    Solve(SolveArgs),
    /// Reproduce one published benchmark table and report the differences.
    Table(TableArgs),
    /// Eigenvalue error against a high-order reference, per truncation degree.
    Converge(ConvergeArgs),
    /// Roots of the analytic characteristic determinant vs the TE solver.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Te,
    Tm,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Te => Mode::Te,
            ModeArg::Tm => Mode::Tm,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Output path (standard output when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Harmonic degree: a single value `2`, a list `1,2,3`, or a range `1-3`.
    #[arg(long)]
    l: String,
    /// Truncation degree of the Galerkin basis.
    #[arg(long = "N")]
    n_trunc: usize,
    /// Ball radius.
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    /// Refractive index n(r): comma-separated ascending power coefficients
    /// (`16` is constant, `8,0,4` means 8 + 4r²).
    #[arg(long = "n")]
    index: String,
    /// How many eigenvalues to report per degree.
    #[arg(long, default_value_t = 4)]
    count: usize,
    /// Upper end of the wavenumber range.
    #[arg(long = "k-max")]
    k_max: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TableArgs {
    /// Benchmark table id: 6.1–6.6, 6.8 or 6.9.
    #[arg(long)]
    id: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConvergeArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    l: usize,
    /// Truncation degrees to study, ascending (e.g. `10,15,20,25,30`).
    #[arg(long = "N-list")]
    n_list: String,
    /// Reference truncation degree; must exceed every entry of --N-list.
    #[arg(long = "ref-N")]
    ref_n: usize,
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    #[arg(long = "n")]
    index: String,
    /// How many eigenvalues to track.
    #[arg(long, default_value_t = 4)]
    count: usize,
    #[arg(long = "k-max")]
    k_max: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Mode to cross-check; only the TE mode has an analytic determinant.
    #[arg(long, value_enum, default_value = "te")]
    mode: ModeArg,
    #[arg(long)]
    l: usize,
    /// Constant refractive index.
    #[arg(long = "n")]
    index: String,
    #[arg(long = "R", default_value_t = 1.0)]
    radius: f64,
    #[arg(long = "N", default_value_t = 30)]
    n_trunc: usize,
    #[arg(long = "k-max")]
    k_max: f64,
    #[command(flatten)]
    output: OutputArgs,
}

/// One reported eigenvalue, as serialized to CSV/JSON.
#[derive(Serialize)]
struct Record {
    mode: String,
    l: usize,
    #[serde(rename = "N")]
    n: usize,
    index: usize,
    k: f64,
    tau: f64,
    multiplicity: usize,
}

impl Record {
    fn new(n: usize, e: &TransmissionEigenvalue, index: usize) -> Record {
        Record {
            mode: e.mode.to_string(),
            l: e.l,
            n,
            index,
            k: e.k,
            tau: e.tau,
            multiplicity: e.multiplicity_3d,
        }
    }
}

fn fail_usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE_EXIT)
}

fn fail_solver(err: Error) -> ExitCode {
    eprintln!("error: {err}");
    match err {
        Error::ContrastViolation(_) => ExitCode::from(CONTRAST_EXIT),
        _ => ExitCode::FAILURE,
    }
}

fn parse_l_spec(spec: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    if let Some((a, b)) = spec.split_once('-') {
        let lo: usize = a.trim().parse().map_err(|_| format!("bad l range: {spec}"))?;
        let hi: usize = b.trim().parse().map_err(|_| format!("bad l range: {spec}"))?;
        if lo > hi {
            return Err(format!("empty l range: {spec}"));
        }
        out.extend(lo..=hi);
    } else {
        for part in spec.split(',') {
            out.push(
                part.trim()
                    .parse()
                    .map_err(|_| format!("bad l value: {part}"))?,
            );
        }
    }
    if out.iter().any(|&l| l < 1) {
        return Err("l must be >= 1".into());
    }
    Ok(out)
}

fn parse_coeffs(spec: &str) -> Result<Vec<f64>, String> {
    spec.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad coefficient: {p}"))
        })
        .collect()
}

fn parse_n_list(spec: &str) -> Result<Vec<usize>, String> {
    let list: Vec<usize> = spec
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad N value: {p}"))
        })
        .collect::<Result<_, _>>()?;
    if list.is_empty() || !list.windows(2).all(|w| w[0] < w[1]) {
        return Err("--N-list must be ascending".into());
    }
    Ok(list)
}

fn emit(output: &OutputArgs, content: String) -> ExitCode {
    match &output.out {
        None => {
            print!("{content}");
            ExitCode::SUCCESS
        }
        Some(path) => match std::fs::write(path, content) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                ExitCode::FAILURE
            }
        },
    }
}

fn solve_one(
    mode: Mode,
    radius: f64,
    l: usize,
    coeffs: &[f64],
    n_trunc: usize,
    k_max: f64,
    count: usize,
) -> Result<Vec<TransmissionEigenvalue>, Error> {
    let index = RefractiveIndex::new(coeffs.to_vec(), radius)?;
    match mode {
        Mode::Te => TeProblem::new(radius, l, index, n_trunc)?
            .find_eigenvalues(k_max, DEFAULT_BRANCHES, count),
        Mode::Tm => TmProblem::new(radius, l, index, n_trunc)?.solve(k_max, count),
    }
}

fn records_to_text(records: &[Record]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<4} {:>2} {:>3} {:>5}  {:<22} {:<22} {:>4}",
        "mode", "l", "N", "index", "k", "tau", "mult"
    )
    .unwrap();
    for r in records {
        writeln!(
            out,
            "{:<4} {:>2} {:>3} {:>5}  {:<22} {:<22} {:>4}",
            r.mode,
            r.l,
            r.n,
            r.index,
            format!("{:.15e}", r.k),
            format!("{:.15e}", r.tau),
            r.multiplicity
        )
        .unwrap();
    }
    out
}

fn records_to_csv(records: &[Record]) -> String {
    let mut out = String::from("mode,l,N,index,k,tau,multiplicity\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{:.16e},{:.16e},{}",
            r.mode, r.l, r.n, r.index, r.k, r.tau, r.multiplicity
        )
        .unwrap();
    }
    out
}

fn records_to_json(records: &[Record]) -> String {
    let mut s = serde_json::to_string_pretty(records).expect("serializable");
    s.push('\n');
    s
}

fn cmd_solve(args: SolveArgs) -> ExitCode {
    let ls = match parse_l_spec(&args.l) {
        Ok(v) => v,
        Err(m) => return fail_usage(&m),
    };
    let coeffs = match parse_coeffs(&args.index) {
        Ok(v) => v,
        Err(m) => return fail_usage(&m),
    };
    if args.count < 1 {
        return fail_usage("--count must be at least 1");
    }
    if !args.k_max.is_finite() || args.k_max <= 0.0 {
        return fail_usage("--k-max must be positive");
    }
    let min_n = match args.mode {
        ModeArg::Te => 5,
        ModeArg::Tm => 2,
    };
    if args.n_trunc < min_n {
        return fail_usage(&format!("--N must be at least {min_n} for this mode"));
    }

    // independent degrees solve concurrently; output order stays sorted
    let solved: Result<Vec<Vec<TransmissionEigenvalue>>, Error> = ls
        .par_iter()
        .map(|&l| {
            solve_one(
                args.mode.into(),
                args.radius,
                l,
                &coeffs,
                args.n_trunc,
                args.k_max,
                args.count,
            )
        })
        .collect();
    let solved = match solved {
        Ok(v) => v,
        Err(e) => return fail_solver(e),
    };
    let mut records = Vec::new();
    for per_l in solved {
        for (i, e) in per_l.iter().enumerate() {
            records.push(Record::new(args.n_trunc, e, i + 1));
        }
    }
    let content = match args.output.format {
        Format::Text => records_to_text(&records),
        Format::Csv => records_to_csv(&records),
        Format::Json => records_to_json(&records),
    };
    emit(&args.output, content)
}

#[derive(Serialize)]
struct TableRowReport {
    #[serde(rename = "N")]
    n: usize,
    computed: Vec<f64>,
    published: Vec<f64>,
    abs_diff: Vec<f64>,
}

#[derive(Serialize)]
struct TableReport {
    id: String,
    mode: String,
    l: usize,
    index_coeffs: Vec<f64>,
    rows: Vec<TableRowReport>,
    /// Largest |computed - published| over the rows with N >= 20 (the
    /// published low-N rows are themselves unconverged).
    max_abs_diff_converged: f64,
}

fn reproduce_table(t: &BenchmarkTable) -> Result<TableReport, Error> {
    let rows: Result<Vec<TableRowReport>, Error> = t
        .rows
        .par_iter()
        .map(|&(n, published)| {
            let index = RefractiveIndex::new(t.index_coeffs.to_vec(), t.radius)?;
            let eigs = match t.mode {
                Mode::Te => TeProblem::new(t.radius, t.l, index, n)?
                    .find_eigenvalues(t.k_max, DEFAULT_BRANCHES, 4)?,
                Mode::Tm => TmProblem::new(t.radius, t.l, index, n)?.solve(t.k_max, 4)?,
            };
            let computed: Vec<f64> = eigs.iter().map(|e| e.k).collect();
            let abs_diff: Vec<f64> = computed
                .iter()
                .zip(published)
                .map(|(c, p)| (c - p).abs())
                .collect();
            Ok(TableRowReport {
                n,
                computed,
                published: published.to_vec(),
                abs_diff,
            })
        })
        .collect();
    let rows = rows?;
    let max_abs_diff_converged = rows
        .iter()
        .filter(|r| r.n >= 20)
        .flat_map(|r| r.abs_diff.iter())
        .fold(0.0f64, |m, &d| m.max(d));
    Ok(TableReport {
        id: t.id.to_string(),
        mode: t.mode.to_string(),
        l: t.l,
        index_coeffs: t.index_coeffs.to_vec(),
        rows,
        max_abs_diff_converged,
    })
}

fn cmd_table(args: TableArgs) -> ExitCode {
    let Some(t) = table(&args.id) else {
        return fail_usage(&format!(
            "unknown table id {:?} (expected one of 6.1-6.6, 6.8, 6.9)",
            args.id
        ));
    };
    let report = match reproduce_table(t) {
        Ok(r) => r,
        Err(e) => return fail_solver(e),
    };
    let content = match args.output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("N,k1,k2,k3,k4\n");
            for r in &report.rows {
                write!(out, "{}", r.n).unwrap();
                for k in &r.computed {
                    write!(out, ",{k:.16e}").unwrap();
                }
                out.push('\n');
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "table {} ({} mode, l = {}, n(r) coefficients {:?})",
                report.id, report.mode, report.l, report.index_coeffs
            )
            .unwrap();
            writeln!(
                out,
                "{:>3}  {:<21} {:<21} {:<21} {:<21}",
                "N", "1st", "2nd", "3rd", "4th"
            )
            .unwrap();
            for r in &report.rows {
                write!(out, "{:>3}", r.n).unwrap();
                for k in &r.computed {
                    write!(out, "  {:<21}", format!("{k:.15e}")).unwrap();
                }
                out.push('\n');
            }
            writeln!(
                out,
                "max |computed - published| over rows N >= 20: {:.2e}",
                report.max_abs_diff_converged
            )
            .unwrap();
            out
        }
    };
    emit(&args.output, content)
}

fn cmd_converge(args: ConvergeArgs) -> ExitCode {
    let n_list = match parse_n_list(&args.n_list) {
        Ok(v) => v,
        Err(m) => return fail_usage(&m),
    };
    if args.ref_n <= *n_list.last().unwrap() {
        return fail_usage("--ref-N must be strictly larger than every --N-list entry");
    }
    if args.l < 1 {
        return fail_usage("l must be >= 1");
    }
    let coeffs = match parse_coeffs(&args.index) {
        Ok(v) => v,
        Err(m) => return fail_usage(&m),
    };
    let mode: Mode = args.mode.into();

    let solve = |n: usize| -> Result<Vec<f64>, Error> {
        Ok(
            solve_one(mode, args.radius, args.l, &coeffs, n, args.k_max, args.count)?
                .iter()
                .map(|e| e.k)
                .collect(),
        )
    };
    let reference = match solve(args.ref_n) {
        Ok(v) => v,
        Err(e) => return fail_solver(e),
    };
    if reference.len() < args.count {
        return fail_usage(&format!(
            "reference run found only {} eigenvalues below k-max; lower --count or raise --k-max",
            reference.len()
        ));
    }
    let per_n: Result<Vec<Vec<f64>>, Error> = n_list.par_iter().map(|&n| solve(n)).collect();
    let per_n = match per_n {
        Ok(v) => v,
        Err(e) => return fail_solver(e),
    };

    // error columns, floored at 1e-16 to keep log plots finite
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (&n, ks) in n_list.iter().zip(&per_n) {
        let errs: Vec<f64> = reference
            .iter()
            .take(args.count)
            .enumerate()
            .map(|(i, r)| {
                let e = ks.get(i).map_or(f64::NAN, |k| (k - r).abs());
                if e == 0.0 {
                    1e-16
                } else {
                    e
                }
            })
            .collect();
        rows.push((n, errs));
    }

    let content = match args.output.format {
        Format::Json => {
            #[derive(Serialize)]
            struct ConvergenceRow {
                #[serde(rename = "N")]
                n: usize,
                errors: Vec<f64>,
            }
            let rows: Vec<ConvergenceRow> = rows
                .into_iter()
                .map(|(n, errors)| ConvergenceRow { n, errors })
                .collect();
            let mut s = serde_json::to_string_pretty(&rows).expect("serializable");
            s.push('\n');
            s
        }
        _ => {
            // text and CSV share the tabular layout
            let mut out = String::from("N");
            for i in 1..=args.count {
                write!(out, ",err{i}").unwrap();
            }
            out.push('\n');
            for (n, errs) in &rows {
                write!(out, "{n}").unwrap();
                for e in errs {
                    write!(out, ",{e:.16e}").unwrap();
                }
                out.push('\n');
            }
            out
        }
    };
    emit(&args.output, content)
}

fn cmd_oracle(args: OracleArgs) -> ExitCode {
    if args.mode != ModeArg::Te {
        return fail_usage("oracle covers TE only");
    }
    let coeffs = match parse_coeffs(&args.index) {
        Ok(v) => v,
        Err(m) => return fail_usage(&m),
    };
    if coeffs.len() != 1 {
        return fail_usage("oracle requires constant n");
    }
    if args.l < 1 {
        return fail_usage("l must be >= 1");
    }
    let n_const = coeffs[0];
    if !n_const.is_finite() || n_const <= 0.0 || n_const == 1.0 {
        return fail_usage("constant n must be positive and different from 1");
    }
    let roots = oracle_roots(args.l, n_const, args.radius, args.k_max);
    let solver = match solve_one(
        Mode::Te,
        args.radius,
        args.l,
        &coeffs,
        args.n_trunc,
        args.k_max,
        roots.len().max(1),
    ) {
        Ok(v) => v,
        Err(e) => return fail_solver(e),
    };
    let max_diff = roots
        .iter()
        .zip(&solver)
        .map(|(r, e)| (r - e.k).abs())
        .fold(0.0f64, f64::max);

    #[derive(Serialize)]
    struct OracleReport {
        l: usize,
        n: f64,
        #[serde(rename = "R")]
        radius: f64,
        oracle_roots: Vec<f64>,
        solver_roots: Vec<f64>,
        count_matches: bool,
        max_abs_diff: f64,
    }
    let report = OracleReport {
        l: args.l,
        n: n_const,
        radius: args.radius,
        solver_roots: solver.iter().map(|e| e.k).collect(),
        count_matches: solver.len() == roots.len(),
        oracle_roots: roots,
        max_abs_diff: max_diff,
    };
    let content = match args.output.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::from("index,oracle_k,solver_k,abs_diff\n");
            for (i, r) in report.oracle_roots.iter().enumerate() {
                let s = report.solver_roots.get(i);
                writeln!(
                    out,
                    "{},{:.16e},{},{}",
                    i + 1,
                    r,
                    s.map_or(String::new(), |v| format!("{v:.16e}")),
                    s.map_or(String::new(), |v| format!("{:.16e}", (v - r).abs()))
                )
                .unwrap();
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            writeln!(
                out,
                "characteristic-determinant roots for l = {}, n = {}, R = {}:",
                report.l, report.n, report.radius
            )
            .unwrap();
            for (i, r) in report.oracle_roots.iter().enumerate() {
                match report.solver_roots.get(i) {
                    Some(s) => writeln!(
                        out,
                        "  {:>2}: oracle {:<21} solver {:<21} diff {:.2e}",
                        i + 1,
                        format!("{r:.15e}"),
                        format!("{s:.15e}"),
                        (s - r).abs()
                    )
                    .unwrap(),
                    None => writeln!(
                        out,
                        "  {:>2}: oracle {:<21} solver (missing)",
                        i + 1,
                        format!("{r:.15e}")
                    )
                    .unwrap(),
                }
            }
            writeln!(out, "max |solver - oracle| = {:.2e}", report.max_abs_diff).unwrap();
            if !report.count_matches {
                writeln!(
                    out,
                    "warning: solver found {} roots, oracle {}",
                    report.solver_roots.len(),
                    report.oracle_roots.len()
                )
                .unwrap();
            }
            out
        }
    };
    emit(&args.output, content)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Table(args) => cmd_table(args),
        Command::Converge(args) => cmd_converge(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}
