//! Experiment runner behind the `circinv` binary: config parsing, sweeps over sizes and
//! indices, and CSV/JSON output that does not depend on the thread count.

use crate::asymptotics::{
    predict_first_column, predict_first_column_via_baseline, predict_gegenbauer_coeff, predict_half,
    predict_inverse_entry, predict_small_k, ColumnBaseline, EntryBaseline, EntryConvention,
};
use crate::envelope::{fit_fn, rel_err};
use crate::error::{Error, Result};
use crate::par;
use crate::symbol::{GegenbauerSymbol, SymbolSpec};
use crate::toeplitz::{build_system, gs_entry, PredictorPolynomial};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

pub const CSV_HEADER: [&str; 11] =
    ["N", "k", "l", "exact_re", "exact_im", "pred", "env_exact", "env_pred", "rel_env_err", "status", "ms"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Deux,
    Coef,
    Coef2,
    Demi,
    Toep1,
    Toep2,
    Gegen,
}

impl Formula {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| Error::Config(format!("unknown formula `{s}`")))
    }

    pub fn is_pair(self) -> bool {
        matches!(self, Formula::Toep1 | Formula::Toep2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
pub enum IndexRule {
    /// k = round(xN).
    Fractions { values: Vec<f64> },
    /// Absolute indices, for the small-k formula.
    Indices { values: Vec<usize> },
    /// (k, l) = (⌊xN⌋, ⌊yN⌋).
    Pairs { values: Vec<(f64, f64)> },
    /// `count` pairs drawn in [0.1, 0.9]² with |x − y| ≥ 0.05.
    RandomPairs { count: usize, seed: u64 },
}

fn default_tolerance() -> f64 {
    0.1
}

fn default_convention() -> EntryConvention {
    EntryConvention::AsPrinted
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub symbol: SymbolSpec,
    pub sizes: Vec<usize>,
    pub indices: IndexRule,
    pub formula: Formula,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_convention")]
    pub convention: EntryConvention,
    /// Wall time in the `ms` column; off by default so that outputs compare byte for byte.
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.sizes.is_empty() {
            return bad("sizes: empty".into());
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("sizes: must be strictly increasing".into());
        }
        if self.sizes[0] < 2 {
            return bad("sizes: N must be at least 2".into());
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance: must be positive".into());
        }
        let frac = |x: f64| x > 0.0 && x < 1.0;
        match (&self.indices, self.formula) {
            (IndexRule::Indices { values }, Formula::Coef2) => {
                if values.is_empty() {
                    return bad("indices.values: empty".into());
                }
                let n0 = self.sizes[0];
                if let Some(k) = values.iter().find(|&&k| k > n0) {
                    return bad(format!("indices.values: {k} exceeds the smallest N"));
                }
            }
            (_, Formula::Coef2) => return bad("indices: the coef2 formula takes rule `indices`".into()),
            (IndexRule::Fractions { values }, f) if !f.is_pair() => {
                if values.is_empty() {
                    return bad("indices.values: empty".into());
                }
                if let Some(x) = values.iter().find(|&&x| !frac(x)) {
                    return bad(format!("indices.values: fraction {x} outside (0,1)"));
                }
            }
            (IndexRule::Pairs { values }, f) if f.is_pair() => {
                if values.is_empty() {
                    return bad("indices.values: empty".into());
                }
                for &(x, y) in values {
                    if !frac(x) || !frac(y) {
                        return bad(format!("indices.values: pair ({x}, {y}) outside (0,1)"));
                    }
                    if x == y {
                        return bad(format!("indices.values: pair ({x}, {y}) on the diagonal"));
                    }
                }
            }
            (IndexRule::RandomPairs { count, .. }, f) if f.is_pair() => {
                if *count == 0 {
                    return bad("indices.count: must be positive".into());
                }
            }
            (_, f) => {
                let want = if f.is_pair() { "`pairs` or `random_pairs`" } else { "`fractions`" };
                return bad(format!("indices: formula {f:?} takes rule {want}"));
            }
        }
        GegenbauerSymbol::from_spec(&self.symbol).map_err(|e| Error::Config(format!("symbol: {e}")))?;
        Ok(())
    }

    /// (k, l) for order N, l = −1 for single-index formulas.
    pub fn index_pairs(&self, n: usize) -> Vec<(i64, i64)> {
        let nf = n as f64;
        let mut out: Vec<(i64, i64)> = match &self.indices {
            IndexRule::Fractions { values } => values.iter().map(|x| ((x * nf).round() as i64, -1)).collect(),
            IndexRule::Indices { values } => values.iter().map(|&k| (k as i64, -1)).collect(),
            IndexRule::Pairs { values } => {
                values.iter().map(|(x, y)| ((x * nf).floor() as i64, (y * nf).floor() as i64)).collect()
            }
            IndexRule::RandomPairs { count, seed } => random_fractions(*count, *seed)
                .into_iter()
                .map(|(x, y)| ((x * nf).floor() as i64, (y * nf).floor() as i64))
                .collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

pub fn random_fractions(count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x: f64 = rng.gen_range(0.1..0.9);
        let y: f64 = rng.gen_range(0.1..0.9);
        if (x - y).abs() >= 0.05 {
            out.push((x, y));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: i64,
    pub l: i64,
    pub exact_re: Option<f64>,
    pub exact_im: Option<f64>,
    pub pred: Option<f64>,
    pub env_exact: Option<f64>,
    pub env_pred: Option<f64>,
    pub rel_env_err: Option<f64>,
    pub status: String,
    pub ms: u64,
}

impl ResultRow {
    fn failed(n: usize, k: i64, l: i64, err: &Error) -> Self {
        ResultRow {
            n,
            k,
            l,
            exact_re: None,
            exact_im: None,
            pred: None,
            env_exact: None,
            env_pred: None,
            rel_env_err: None,
            status: status_of(err),
            ms: 0,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    pub fn check(&self) -> Result<()> {
        if !self.is_ok() {
            return Ok(());
        }
        let fields = [self.exact_re, self.exact_im, self.pred, self.env_exact, self.env_pred, self.rel_env_err];
        if fields.iter().any(|v| !v.is_some_and(f64::is_finite)) {
            return Err(Error::Config(format!("row N={} k={} l={}: non-finite value", self.n, self.k, self.l)));
        }
        if self.rel_env_err.unwrap() < 0.0 {
            return Err(Error::Config(format!("row N={} k={}: negative error", self.n, self.k)));
        }
        Ok(())
    }
}

pub fn status_of(err: &Error) -> String {
    let s = format!("{err:?}");
    let tag: String = s.chars().take_while(|c| c.is_alphanumeric()).collect();
    tag.to_lowercase()
}

/// 17 significant digits, with −0 written as 0.
pub fn fmt_f64(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_else(|| "NaN".into())
}

fn parse_opt(s: &str) -> Result<Option<f64>> {
    if s == "NaN" {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| Error::Config(format!("bad number `{s}`")))
}

/// Solver output for one order, shared by all rows of that order.
struct SizeContext {
    n: usize,
    column: Vec<C64>,
    predictor: PredictorPolynomial,
    column_baseline: Option<ColumnBaseline>,
    entry_baseline: Option<EntryBaseline>,
}

fn size_context(sym: &GegenbauerSymbol, formula: Formula, n: usize) -> Result<SizeContext> {
    let column = build_system(sym, n)?.first_column_inverse()?;
    let predictor = PredictorPolynomial::from_first_column(&column);
    let column_baseline = match formula {
        Formula::Coef => Some(ColumnBaseline::exact(sym.alpha, n)?),
        _ => None,
    };
    let entry_baseline = match formula {
        Formula::Toep1 => Some(EntryBaseline::exact(sym.alpha, n)?),
        Formula::Toep2 => Some(EntryBaseline::Kernel),
        _ => None,
    };
    Ok(SizeContext { n, column, predictor, column_baseline, entry_baseline })
}

struct Evaluated {
    exact: C64,
    pred: f64,
    env_exact: f64,
    env_pred: f64,
    rel: f64,
}

fn eval_row(
    sym: &GegenbauerSymbol,
    formula: Formula,
    convention: EntryConvention,
    ctx: &SizeContext,
    k: i64,
    l: i64,
) -> Result<Evaluated> {
    let n = ctx.n;
    if k < 0 || k as usize > n || l > n as i64 {
        return Err(Error::IndexOutOfRange(k.max(0) as usize, n));
    }
    let k = k as usize;
    let theta = sym.theta0;
    let envelope = |exact: &dyn Fn(usize) -> f64, pred: &dyn Fn(usize) -> Result<f64>| -> Result<(f64, f64)> {
        // probe the prediction over the window first so that errors surface as row status
        for i in crate::envelope::window_indices(k, theta, 1, n) {
            pred(i)?;
        }
        let e = fit_fn(k, theta, 1, n, exact).amplitude;
        let p = fit_fn(k, theta, 1, n, &|i| pred(i).unwrap()).amplitude;
        Ok((e, p))
    };
    let col = &ctx.column;
    let single = |pred: &dyn Fn(usize) -> Result<f64>| -> Result<Evaluated> {
        let p = pred(k)?;
        let (e, q) = envelope(&|i| col[i].re, pred)?;
        Ok(Evaluated { exact: col[k], pred: p, env_exact: e, env_pred: q, rel: rel_err(e, q) })
    };
    match formula {
        Formula::Deux => single(&|i| predict_first_column(sym, i, n)),
        Formula::Demi => single(&|i| predict_half(sym, i, n)),
        Formula::Coef => {
            let base = ctx.column_baseline.as_ref().expect("baseline");
            single(&|i| predict_first_column_via_baseline(sym, i, n, base))
        }
        Formula::Gegen => {
            let poly = ctx.predictor.orthogonal();
            let p = predict_gegenbauer_coeff(sym, k, n)?;
            let (e, q) = envelope(&|j| poly.coeffs[j].re, &|j| predict_gegenbauer_coeff(sym, j, n))?;
            Ok(Evaluated { exact: poly.coeffs[k], pred: p, env_exact: e, env_pred: q, rel: rel_err(e, q) })
        }
        Formula::Coef2 => {
            let p = predict_small_k(sym, k);
            let e = col[k];
            let diff = (e - p).norm();
            let rel = if diff == 0.0 { 0.0 } else { diff / p.norm() };
            Ok(Evaluated { exact: e, pred: p.re, env_exact: e.norm(), env_pred: p.norm(), rel })
        }
        Formula::Toep1 | Formula::Toep2 => {
            let l = l as usize;
            let base = ctx.entry_baseline.as_ref().expect("baseline");
            let pred = |i: usize| predict_inverse_entry(sym, i, l, n, base, convention);
            let exact = gs_entry(&ctx.predictor, k, l)?;
            let p = pred(k)?;
            let window = crate::envelope::window_indices(k, theta, 1, n);
            if window.contains(&l) {
                return Err(Error::DiagonalSingularity);
            }
            let (e, q) = envelope(&|i| gs_entry(&ctx.predictor, i, l).map(|v| v.re).unwrap_or(f64::NAN), &pred)?;
            Ok(Evaluated { exact, pred: p, env_exact: e, env_pred: q, rel: rel_err(e, q) })
        }
    }
}

/// All rows of a sweep, sorted by (N, k, l).
pub fn run(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let sym = GegenbauerSymbol::from_spec(&cfg.symbol)?;
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let pairs = cfg.index_pairs(n);
        let ctx = match size_context(&sym, cfg.formula, n) {
            Ok(c) => c,
            Err(e) => {
                rows.extend(pairs.iter().map(|&(k, l)| ResultRow::failed(n, k, l, &e)));
                continue;
            }
        };
        rows.extend(par::map_slice(&pairs, |&(k, l)| {
            let start = Instant::now();
            match eval_row(&sym, cfg.formula, cfg.convention, &ctx, k, l) {
                Ok(ev) => ResultRow {
                    n,
                    k,
                    l,
                    exact_re: Some(ev.exact.re),
                    exact_im: Some(ev.exact.im),
                    pred: Some(ev.pred),
                    env_exact: Some(ev.env_exact),
                    env_pred: Some(ev.env_pred),
                    rel_env_err: Some(ev.rel),
                    status: "ok".into(),
                    ms: if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 },
                },
                Err(e) => ResultRow::failed(n, k, l, &e),
            }
        }));
    }
    rows.sort_by_key(|r| (r.n, r.k, r.l));
    Ok(rows)
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.k.to_string(),
            r.l.to_string(),
            fmt_opt(r.exact_re),
            fmt_opt(r.exact_im),
            fmt_opt(r.pred),
            fmt_opt(r.env_exact),
            fmt_opt(r.env_pred),
            fmt_opt(r.rel_env_err),
            r.status.clone(),
            r.ms.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

/// Parse and re-validate a results CSV.
pub fn rows_from_csv(text: &str) -> Result<Vec<ResultRow>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header = rd.headers().map_err(|e| Error::Config(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Config("unexpected CSV header".into()));
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| Error::Config(e.to_string()))?;
        let int = |i: usize| rec[i].parse::<i64>().map_err(|_| Error::Config(format!("bad integer `{}`", &rec[i])));
        let row = ResultRow {
            n: int(0)? as usize,
            k: int(1)?,
            l: int(2)?,
            exact_re: parse_opt(&rec[3])?,
            exact_im: parse_opt(&rec[4])?,
            pred: parse_opt(&rec[5])?,
            env_exact: parse_opt(&rec[6])?,
            env_pred: parse_opt(&rec[7])?,
            rel_env_err: parse_opt(&rec[8])?,
            status: rec[9].to_string(),
            ms: int(10)? as u64,
        };
        row.check()?;
        rows.push(row);
    }
    if rows.windows(2).any(|w| (w[0].n, w[0].k, w[0].l) >= (w[1].n, w[1].k, w[1].l)) {
        return Err(Error::Config("rows not sorted by (N, k, l)".into()));
    }
    Ok(rows)
}

pub fn rows_to_json(rows: &[ResultRow]) -> Result<String> {
    serde_json::to_string_pretty(rows).map_err(|e| Error::Config(e.to_string()))
}

/// Per (k, l): whether the error falls strictly with N, and the error at the largest N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trend {
    pub k_frac: String,
    pub errors: Vec<Option<f64>>,
    pub decreasing: bool,
    pub final_within_tolerance: bool,
}

/// Rows grouped by their position in the index rule, which keeps k/N fixed across sizes.
pub fn trends(cfg: &ExperimentConfig, rows: &[ResultRow]) -> Vec<Trend> {
    let per_size: Vec<Vec<(i64, i64)>> = cfg.sizes.iter().map(|&n| cfg.index_pairs(n)).collect();
    let count = per_size.iter().map(Vec::len).min().unwrap_or(0);
    (0..count)
        .map(|i| {
            let errors: Vec<Option<f64>> = cfg
                .sizes
                .iter()
                .zip(&per_size)
                .map(|(&n, pairs)| {
                    let (k, l) = pairs[i];
                    rows.iter().find(|r| r.n == n && r.k == k && r.l == l).and_then(|r| r.rel_env_err)
                })
                .collect();
            let decreasing = errors.iter().all(Option::is_some)
                && errors.windows(2).all(|w| w[1].unwrap() < w[0].unwrap());
            let last = errors.last().copied().flatten();
            let (k, l) = per_size[per_size.len() - 1][i];
            let n = *cfg.sizes.last().unwrap() as f64;
            let mut label = String::new();
            let _ = write!(label, "{:.4}", k as f64 / n);
            if l >= 0 {
                let _ = write!(label, ",{:.4}", l as f64 / n);
            }
            Trend {
                k_frac: label,
                errors,
                decreasing,
                final_within_tolerance: last.is_some_and(|e| e <= cfg.tolerance),
            }
        })
        .collect()
}

/// Writes `results.csv`, `results.json` and `summary.json` into `dir`.
pub fn write_results(cfg: &ExperimentConfig, rows: &[ResultRow], dir: &Path) -> Result<Vec<Trend>> {
    let io = |e: std::io::Error| Error::Config(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let csv = rows_to_csv(rows)?;
    std::fs::write(dir.join("results.csv"), &csv).map_err(io)?;
    std::fs::write(dir.join("results.json"), rows_to_json(rows)?).map_err(io)?;
    let back = rows_from_csv(&std::fs::read_to_string(dir.join("results.csv")).map_err(io)?)?;
    if back.len() != rows.len() {
        return Err(Error::Config("CSV round trip lost rows".into()));
    }
    let tr = trends(cfg, rows);
    let summary = serde_json::to_string_pretty(&tr).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(dir.join("summary.json"), summary).map_err(io)?;
    Ok(tr)
}

/// Exit code for an error: 2 for configuration and argument problems, 3 for numerical failures.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::Domain(_)
        | Error::DiagonalSingularity
        | Error::DegenerateZeros
        | Error::IndexOutOfRange(..) => 2,
        _ => 3,
    }
}

pub fn load_symbol(path: &Path) -> Result<GegenbauerSymbol> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    let spec: SymbolSpec = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    GegenbauerSymbol::from_spec(&spec).map_err(|e| Error::Config(format!("symbol: {e}")))
}
