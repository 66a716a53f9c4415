use circinv::asymptotics::{jacobi_conjugation, kernel_g, EntryConvention, JacobiSymbol};
use circinv::harness::{
    exit_code, fmt_f64, load_symbol, rows_to_csv, run, write_results, ExperimentConfig, Formula,
    IndexRule,
};
use circinv::inversion::{apply_inversion, eval_f};
use circinv::symbol::{symbol_fourier, FourierMethod, FourierTable};
use circinv::toeplitz::{build_system, predictor, verify_polpred};
use circinv::{Error, Result, C64};
use clap::{Parser, Subcommand, ValueEnum};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "circinv", version, about = "Toeplitz inverses for weights with two conjugate zeros")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Analytic,
    Quadrature,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColumnArg {
    First,
    Last,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    AsPrinted,
    CosineAveraged,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fourier coefficients of the weight.
    Fourier {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "analytic")]
        method: MethodArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// First or last column of T_N⁻¹.
    Solve {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, value_enum, default_value = "first")]
        column: ColumnArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the Fourier coefficients of 1/|P_N|² with those of the weight.
    PolpredCheck {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// One prediction against the exact value, printed as a results row.
    Predict {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        formula: String,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: Option<f64>,
        #[arg(long, value_enum, default_value = "as-printed")]
        convention: ConventionArg,
    },
    /// The kernel G_α(x, y).
    Kernel {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// T_N⁻¹χ^k by the Hankel series, next to the Levinson solution.
    SeriesInvert {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long = "N")]
        n: usize,
        #[arg(long = "M")]
        m: usize,
        #[arg(long)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        column: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The nested-sum function F at one point.
    FFunction {
        #[arg(long)]
        alpha: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 5000)]
        m_max: usize,
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Compare the inverse for zeros at θ₁, θ₂ with the conjugated centered inverse.
    Jacobi {
        #[arg(long)]
        symbol: PathBuf,
        #[arg(long)]
        theta1: f64,
        #[arg(long)]
        theta2: f64,
        #[arg(long = "N")]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Run a sweep from a config file.
    Converge {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path` and a JSON mirror next to it.
fn write_with_mirror(path: &Path, text: &str, json: &serde_json::Value) -> Result<()> {
    write_file(path, text)?;
    let mirror = serde_json::to_string_pretty(json).map_err(|e| Error::Config(e.to_string()))?;
    write_file(&path.with_extension("json"), &mirror)
}

fn complex_rows(header: &str, cols: &[&[C64]]) -> (String, serde_json::Value) {
    let mut text = format!("{header}\n");
    let mut json = Vec::new();
    let len = cols.iter().map(|c| c.len()).min().unwrap_or(0);
    for i in 0..len {
        let _ = write!(text, "{i}");
        let mut vals = Vec::new();
        for c in cols {
            let _ = write!(text, ",{},{}", fmt_f64(c[i].re), fmt_f64(c[i].im));
            vals.push(serde_json::json!([c[i].re, c[i].im]));
        }
        text.push('\n');
        json.push(serde_json::json!({"index": i, "values": vals}));
    }
    (text, serde_json::Value::Array(json))
}

fn fourier(symbol: &Path, nmax: usize, method: MethodArg, out: &Path) -> Result<()> {
    let sym = load_symbol(symbol)?;
    let methods: &[FourierMethod] = match method {
        MethodArg::Analytic => &[FourierMethod::Analytic],
        MethodArg::Quadrature => &[FourierMethod::Quadrature],
        MethodArg::Both => &[FourierMethod::Analytic, FourierMethod::Quadrature],
    };
    let tables: Vec<FourierTable> =
        methods.iter().map(|&m| symbol_fourier(&sym, nmax, m)).collect::<Result<_>>()?;
    let mut header = String::from("s");
    for m in methods {
        let name = match m {
            FourierMethod::Analytic => "analytic",
            FourierMethod::Quadrature => "quadrature",
        };
        let _ = write!(header, ",{name}_re,{name}_im");
    }
    let cols: Vec<&[C64]> = tables.iter().map(|t| t.coeffs.as_slice()).collect();
    let (text, json) = complex_rows(&header, &cols);
    write_with_mirror(out, &text, &json)?;
    if let [a, b] = tables.as_slice() {
        println!("max |analytic - quadrature| = {}", fmt_f64(a.max_diff(b)));
    }
    Ok(())
}

fn solve(symbol: &Path, n: usize, column: ColumnArg, out: &Path) -> Result<()> {
    let sym = load_symbol(symbol)?;
    let first = build_system(&sym, n)?.first_column_inverse()?;
    let col: Vec<C64> = match column {
        ColumnArg::First => first,
        // persymmetry: (T⁻¹)_{k,N} = conj((T⁻¹)_{N−k,0})
        ColumnArg::Last => (0..=n).map(|k| first[n - k].conj()).collect(),
    };
    let (text, json) = complex_rows("k,re,im", &[&col]);
    write_with_mirror(out, &text, &json)
}

fn polpred_check(symbol: &Path, n: usize, tol: f64) -> Result<()> {
    let sym = load_symbol(symbol)?;
    let sys = build_system(&sym, n)?;
    let err = verify_polpred(&predictor(&sys)?, &sys)?;
    println!("max_dev={}", fmt_f64(err));
    if err > tol {
        return Err(Error::NoConvergence(format!("deviation {err:e} above {tol:e}")));
    }
    Ok(())
}

fn predict(symbol: &Path, n: usize, formula: &str, x: f64, y: Option<f64>, conv: ConventionArg) -> Result<()> {
    let spec = load_symbol(symbol)?.spec();
    let formula = Formula::parse(formula)?;
    let indices = match (formula, y) {
        (Formula::Coef2, _) => IndexRule::Indices { values: vec![(x * n as f64).round() as usize] },
        (f, Some(y)) if f.is_pair() => IndexRule::Pairs { values: vec![(x, y)] },
        (f, None) if f.is_pair() => return Err(Error::Config("--y is required for this formula".into())),
        _ => IndexRule::Fractions { values: vec![x] },
    };
    let convention = match conv {
        ConventionArg::AsPrinted => EntryConvention::AsPrinted,
        ConventionArg::CosineAveraged => EntryConvention::CosineAveraged,
    };
    let cfg = ExperimentConfig {
        symbol: spec,
        sizes: vec![n],
        indices,
        formula,
        tolerance: 0.1,
        convention,
        timing: false,
    };
    let rows = run(&cfg)?;
    print!("{}", rows_to_csv(&rows)?);
    match rows.iter().find(|r| !r.is_ok()) {
        Some(r) => Err(Error::NoConvergence(format!("row status {}", r.status))),
        None => Ok(()),
    }
}

fn series_invert(symbol: &Path, n: usize, m: usize, tol: f64, column: usize, out: Option<&Path>) -> Result<()> {
    let sym = load_symbol(symbol)?;
    if column > n {
        return Err(Error::Config(format!("--column {column} above N")));
    }
    let mut p = vec![C64::new(0.0, 0.0); column + 1];
    p[column] = C64::new(1.0, 0.0);
    let series = apply_inversion(&sym, n, &p, m, tol)?;
    let sys = build_system(&sym, n)?;
    let pred = predictor(&sys)?;
    let reference: Vec<C64> =
        (0..=n).map(|k| circinv::toeplitz::gs_entry(&pred, k, column)).collect::<Result<_>>()?;
    let diff = series.iter().zip(&reference).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let (text, json) = complex_rows("k,series_re,series_im,levinson_re,levinson_im", &[&series, &reference]);
    match out {
        Some(path) => {
            write_with_mirror(path, &text, &json)?;
            println!("max_diff={}", fmt_f64(diff));
        }
        None => {
            print!("{text}");
            eprintln!("max_diff={}", fmt_f64(diff));
        }
    }
    Ok(())
}

fn jacobi(symbol: &Path, theta1: f64, theta2: f64, n: usize, tol: f64) -> Result<()> {
    let sym = load_symbol(symbol)?;
    let js = JacobiSymbol::new(sym.alpha, theta1, theta2, sym.regular.clone())
        .map_err(|e| Error::Config(format!("zeros: {e}")))?;
    let chk = jacobi_conjugation(&js, n)?;
    println!("max_diff={}", fmt_f64(chk.max_diff));
    if chk.max_diff > tol {
        return Err(Error::NoConvergence(format!("conjugation mismatch {:e}", chk.max_diff)));
    }
    Ok(())
}

fn converge(config: &Path, out: &Path) -> Result<()> {
    let cfg = ExperimentConfig::load(config)?;
    let rows = run(&cfg)?;
    let trends = write_results(&cfg, &rows, out)?;
    for t in &trends {
        let errs: Vec<String> = t.errors.iter().map(|e| e.map(fmt_f64).unwrap_or_else(|| "NaN".into())).collect();
        println!(
            "x={} errors=[{}] decreasing={} within_tol={}",
            t.k_frac,
            errs.join(","),
            t.decreasing,
            t.final_within_tolerance
        );
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Fourier { symbol, nmax, method, out } => fourier(&symbol, nmax, method, &out),
        Cmd::Solve { symbol, n, column, out } => solve(&symbol, n, column, &out),
        Cmd::PolpredCheck { symbol, n, tol } => polpred_check(&symbol, n, tol),
        Cmd::Predict { symbol, n, formula, x, y, convention } => predict(&symbol, n, &formula, x, y, convention),
        Cmd::Kernel { alpha, x, y } => {
            println!("{}", fmt_f64(kernel_g(alpha, x, y)?));
            Ok(())
        }
        Cmd::SeriesInvert { symbol, n, m, tol, column, out } => series_invert(&symbol, n, m, tol, column, out.as_deref()),
        Cmd::FFunction { alpha, n, z, m_max, trunc } => {
            println!("{}", fmt_f64(eval_f(n, alpha, z, m_max, trunc.unwrap_or(n.max(64)))?));
            Ok(())
        }
        Cmd::Jacobi { symbol, theta1, theta2, n, tol } => jacobi(&symbol, theta1, theta2, n, tol),
        Cmd::Converge { config, out } => converge(&config, &out),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
