//! The `blockdelta` command line.
//!
//! Exit codes: 0 success, 1 failed verification or oracle mismatch,
//! 2 invalid pattern or argument, 3 resource limit exceeded.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::cache;
use crate::cfengine::{default_eps, engine};
use crate::direct::{empirical_dist_default, ExactDensities};
use crate::error::{Error, Result};
use crate::gauss::{self, Constants};
use crate::moments::{mean_vec, q_case, q_within_bounds, MomentTables};
use crate::rational::{self, Q};
use crate::report::{self, CheckRow, Meta, ScalingRow, VarRow, F17};
use crate::tspec::{self, Family};
use crate::words::{blocks01, Pattern};

#[derive(Parser, Debug)]
#[command(name = "blockdelta", version, about = "Distributions of occ_w(n+t) - occ_w(n) in base 2")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact distribution δ_t.
    Dist(DistArgs),
    /// Variance v_t, increment q_t and the bounds in occ01(t).
    Var(VarArgs),
    /// Comparison with the Gaussian main term, or a scaling experiment over a family.
    Gauss(GaussArgs),
    /// Runs the invariant checks for one pattern.
    Verify(VerifyArgs),
    /// Brute-force counts over one period, checked against `dist`.
    Oracle(OracleArgs),
    /// One scalar field as a function of t.
    Scan(ScanArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Field {
    Cusick,
    Variance,
    Q,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Binary pattern, e.g. 011.
    #[arg(short = 'w', long = "pattern")]
    pub w: String,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Omit the timestamped `meta` block from JSON output.
    #[arg(long)]
    pub no_meta: bool,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// A set of `t`: one value, `0..tmax`, or a family over a range of `N`.
#[derive(Args, Debug, Clone)]
pub struct TSelect {
    /// Decimal, 0b…, 0x… or a family member such as (10)^8.
    #[arg(short, long)]
    pub t: Option<String>,
    /// All t < tmax.
    #[arg(long)]
    pub tmax: Option<u64>,
    /// Repeated-block family such as (10)^N; needs --n.
    #[arg(long)]
    pub family: Option<String>,
    /// Exponents for --family: a..b, a..=b or a comma list.
    #[arg(long)]
    pub n: Option<String>,
}

impl TSelect {
    /// The selected values in order, each with its family exponent if any.
    fn resolve(&self) -> Result<Vec<(Option<u32>, u128)>> {
        match (&self.t, self.tmax, &self.family) {
            (Some(t), _, None) if self.tmax.is_none() => Ok(vec![(None, tspec::parse_t(t)?)]),
            (None, _, Some(f)) if self.tmax.is_none() => {
                let family: Family = f.parse()?;
                let ns = self
                    .n
                    .as_deref()
                    .ok_or_else(|| Error::InvalidArgument("--family needs --n".into()))?;
                tspec::parse_range(ns)?
                    .into_iter()
                    .map(|n| Ok((Some(n), family.member(n)?)))
                    .collect()
            }
            (None, Some(tmax), None) => {
                if tmax == 0 {
                    return Err(Error::InvalidArgument("--tmax must be positive".into()));
                }
                Ok((0..tmax as u128).map(|t| (None, t)).collect())
            }
            _ => Err(Error::InvalidArgument("give exactly one of -t, --tmax, --family".into())),
        }
    }
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short, long)]
    pub t: String,
    /// Tail tolerance for 0^ℓ and 1^ℓ: p/q, a decimal, or 2^-e.
    #[arg(long)]
    pub eps: Option<String>,
    /// For 0^ℓ and 1^ℓ, always expand at least |k| <= kmax.
    #[arg(long, default_value_t = 0)]
    pub kmax: i64,
}

#[derive(Args, Debug)]
pub struct VarArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub select: TSelect,
}

#[derive(Args, Debug)]
pub struct GaussArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub select: TSelect,
    /// Limit the comparison to |k| <= kmax.
    #[arg(long)]
    pub kmax: Option<i64>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1024)]
    pub tmax: u64,
    #[arg(long, default_value_t = 1.0)]
    pub theta0: f64,
    #[arg(long, default_value_t = 2001)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(short, long)]
    pub t: String,
    /// Period exponent; defaults to the smallest exact one.
    #[arg(long)]
    pub lambda: Option<u32>,
    /// Window |k| <= kmax on which 0^ℓ and 1^ℓ are checked.
    #[arg(long, default_value_t = 10)]
    pub kmax: i64,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub select: TSelect,
    #[arg(long, value_enum, default_value = "cusick")]
    pub field: Field,
}

/// Runs the command line and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidPattern(..) | Error::InvalidArgument(_) => 2,
        Error::Resource(_) => 3,
        _ => 1,
    }
}

pub fn run(command: Command) -> Result<i32> {
    let common = match &command {
        Command::Dist(a) => &a.common,
        Command::Var(a) => &a.common,
        Command::Gauss(a) => &a.common,
        Command::Verify(a) => &a.common,
        Command::Oracle(a) => &a.common,
        Command::Scan(a) => &a.common,
    }
    .clone();
    let w: Pattern = common.w.parse()?;
    if let Some(n) = common.threads {
        // Fails only if the pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let cache_dir = std::env::var_os(cache::CACHE_ENV).map(PathBuf::from);
    if let Some(dir) = &cache_dir {
        cache::load(dir, &*engine(&w)?)?;
    }
    let meta = (!common.no_meta).then(Meta::now);
    let meta = meta.as_ref();
    let (text, code) = match command {
        Command::Dist(a) => (cmd_dist(&w, &a, meta)?, 0),
        Command::Var(a) => (cmd_var(&w, &a, meta)?, 0),
        Command::Gauss(a) => (cmd_gauss(&w, &a, meta)?, 0),
        Command::Verify(a) => cmd_verify(&w, &a, meta)?,
        Command::Oracle(a) => cmd_oracle(&w, &a, meta)?,
        Command::Scan(a) => (cmd_scan(&w, &a, meta)?, 0),
    };
    write_output(common.output.as_ref(), &text)?;
    if let Some(dir) = &cache_dir {
        cache::save(dir, &*engine(&w)?)?;
    }
    Ok(code)
}

fn write_output(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// `p/q`, a decimal such as `1e-12`, or `2^-e`; must lie in (0, 1).
pub fn parse_eps(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse epsilon {s:?}"));
    let q = if let Some(e) = s.strip_prefix("2^") {
        rational::pow2(e.parse().map_err(|_| bad())?)
    } else if let Some(q) = rational::parse_fraction(s) {
        q
    } else {
        let x: f64 = s.parse().map_err(|_| bad())?;
        Q::from_float(x).ok_or_else(bad)?
    };
    if !q.is_positive() || q >= rational::int(1) {
        return Err(Error::InvalidArgument(format!("epsilon {s} must lie in (0, 1)")));
    }
    Ok(q)
}

fn cmd_dist(w: &Pattern, a: &DistArgs, meta: Option<&Meta>) -> Result<String> {
    let t = tspec::parse_t(&a.t)?;
    let eps = a.eps.as_deref().map(parse_eps).transpose()?.unwrap_or_else(default_eps);
    if a.kmax < 0 {
        return Err(Error::InvalidArgument("--kmax must be nonnegative".into()));
    }
    let dist = engine(w)?.dist(t, &eps, a.kmax)?;
    match a.common.format {
        Format::Json => report::dist_json(w, t, &dist, meta),
        Format::Csv => report::dist_csv(&dist),
    }
}

fn var_rows(w: &Pattern, ts: &[u128]) -> Result<Vec<VarRow>> {
    let tables = MomentTables::new(w)?;
    let contiguous = ts.iter().enumerate().all(|(i, &t)| t == i as u128);
    let vs = if contiguous {
        tables.variance_table(ts.len())?
    } else {
        ts.par_iter().map(|&t| tables.variance(t)).collect::<Result<_>>()?
    };
    let c = Constants::new(w.len());
    Ok(ts
        .iter()
        .zip(vs)
        .map(|(&t, v)| {
            let occ01 = blocks01(t);
            let n = rational::int(occ01 as i64);
            VarRow {
                t,
                v_float: F17(rational::to_f64(&v)),
                v: report::Frac(v),
                q: report::Frac(tables.q(t).clone()),
                q_case: q_case(w, t),
                occ01,
                lower_bound: report::Frac(c.m_exact() * &n),
                upper_bound: report::Frac(c.big_m_exact() * &n),
            }
        })
        .collect())
}

fn cmd_var(w: &Pattern, a: &VarArgs, meta: Option<&Meta>) -> Result<String> {
    let ts: Vec<u128> = a.select.resolve()?.into_iter().map(|(_, t)| t).collect();
    let rows = var_rows(w, &ts)?;
    match a.common.format {
        Format::Json => report::rows_json(w, &rows, meta),
        Format::Csv => report::var_csv(&rows),
    }
}

fn cmd_gauss(w: &Pattern, a: &GaussArgs, meta: Option<&Meta>) -> Result<String> {
    let krange = a.kmax.map(|k| (-k.abs(), k.abs()));
    let selected = a.select.resolve()?;
    if let [(None, t)] = selected.as_slice() {
        let report = gauss::compare(w, *t, krange)?;
        return match a.common.format {
            Format::Csv => report::gauss_csv(&report),
            Format::Json => {
                let budget = gauss::error_budget(w, *t).ok();
                report::gauss_json(&report, budget.as_ref(), meta)
            }
        };
    }
    let rows: Vec<ScalingRow> = selected
        .par_iter()
        .map(|&(n, t)| {
            let r = gauss::compare(w, t, krange)?;
            let nf = n.unwrap_or(r.n) as f64;
            let scaled = r.max_error * nf / nf.ln().powi(2);
            Ok(ScalingRow {
                n: n.unwrap_or(r.n),
                t,
                v: F17(rational::to_f64(&r.v)),
                max_error: F17(r.max_error),
                scaled: F17(scaled),
            })
        })
        .collect::<Result<_>>()?;
    match a.common.format {
        Format::Json => report::rows_json(w, &rows, meta),
        Format::Csv => report::scaling_csv(&rows),
    }
}

fn cmd_oracle(w: &Pattern, a: &OracleArgs, meta: Option<&Meta>) -> Result<(String, i32)> {
    let t = tspec::parse_t(&a.t)?;
    let result = empirical_dist_default(w, t, a.kmax, a.lambda)?;
    let dist = engine(w)?.dist(t, &default_eps(), a.kmax)?;
    let ok = result.exact && result.matches(&dist);
    if !ok {
        eprintln!("oracle and characteristic-function distributions differ for w = {w}, t = {t}");
    }
    let text = match a.common.format {
        Format::Json => report::oracle_json(&result, ok, meta)?,
        Format::Csv => report::oracle_csv(&result)?,
    };
    Ok((text, if ok { 0 } else { 1 }))
}

fn cmd_scan(w: &Pattern, a: &ScanArgs, meta: Option<&Meta>) -> Result<String> {
    let ts: Vec<u128> = a.select.resolve()?.into_iter().map(|(_, t)| t).collect();
    let values: Vec<String> = match a.field {
        Field::Cusick => {
            let eng = engine(w)?;
            ts.par_iter()
                .map(|&t| {
                    let d = eng.dist(t, &default_eps(), 0)?;
                    Ok(report::cusick_text(&gauss::cusick_from_dist(&d)))
                })
                .collect::<Result<_>>()?
        }
        Field::Variance => var_rows(w, &ts)?
            .into_iter()
            .map(|r| rational::to_fraction_string(&r.v.0))
            .collect(),
        Field::Q => {
            let tables = MomentTables::new(w)?;
            ts.iter().map(|&t| rational::to_fraction_string(tables.q(t))).collect()
        }
    };
    let rows: Vec<(u128, String)> = ts.into_iter().zip(values).collect();
    let field = match a.field {
        Field::Cusick => "cusick",
        Field::Variance => "variance",
        Field::Q => "q",
    };
    match a.common.format {
        Format::Csv => report::scan_csv(&rows),
        Format::Json => report::scan_json(w, field, &rows, meta),
    }
}

fn count_failures(items: impl ParallelIterator<Item = Result<bool>>) -> Result<(usize, usize)> {
    let flags: Vec<bool> = items.collect::<Result<_>>()?;
    Ok((flags.len(), flags.iter().filter(|ok| !**ok).count()))
}

/// Invariant checks for `t < tmax`; expensive families use smaller prefixes.
pub fn verify_checks(w: &Pattern, tmax: usize, theta0: f64, grid_size: usize) -> Result<Vec<CheckRow>> {
    let l = w.len() as i64;
    let dim = w.residues();
    let tables = MomentTables::new(w)?;
    let eng = engine(w)?;
    let mut rows = Vec::new();

    let vs = tables.variance_table(tmax)?;
    let (n, bad) = count_failures(
        vs.par_iter()
            .enumerate()
            .map(|(t, v)| Ok(gauss::prop_a_from(w, t as u128, v).holds)),
    )?;
    rows.push(CheckRow::new("variance sandwich m*N <= v_t <= M*N", n, bad, false));

    let step = rational::pow2(4 - l);
    let bad = vs.windows(2).filter(|p| (&p[1] - &p[0]).abs() > step).count();
    rows.push(CheckRow::new("|v_{t+1} - v_t| <= 2^(4-l)", vs.len() - 1, bad, false));

    let vv = tables.v_vec_table(tmax)?;
    let sixteen = rational::int(16);
    let bad = vv.iter().filter(|v| v.spread() > sixteen).count();
    rows.push(CheckRow::new("|v_{t,j} - v_{t,k}| <= 16", vv.len(), bad, false));

    let (n, bad) = count_failures(
        (0..tmax as u128)
            .into_par_iter()
            .map(|t| Ok(q_within_bounds(w, t, tables.q(t)))),
    )?;
    rows.push(CheckRow::new("q_t bounds", n, bad, false));

    let qz = (0..tmax as u128)
        .step_by(1 << l)
        .filter(|&t| !tables.q(t).is_zero())
        .count();
    rows.push(CheckRow::new("q_t = 0 for t = 0 mod 2^l", tmax.div_ceil(1 << l), qz, false));

    let mbound = rational::int(1) - rational::pow2(1 - l);
    let residues = (4usize << l).min(tmax.max(1 << l));
    let (n, bad) = count_failures((0..residues as u128).into_par_iter().map(|t| {
        let direct = mean_vec(w, t);
        let rec = tables.mean_vec_rec(t)?;
        Ok(direct == rec && direct.sum().is_zero() && direct.max_abs() <= mbound)
    }))?;
    rows.push(CheckRow::new("mean vector identities", n, bad, false));

    let v1 = tables.v1();
    let bad = (0..dim)
        .filter(|&j| {
            eng.conditional_moment(1, j, 2)
                .map(|m| m != v1[j])
                .unwrap_or(true)
        })
        .count();
    rows.push(CheckRow::new("V_1 equals conditional second moments", dim, bad, false));

    if w.to_string() == "01" || w.to_string() == "10" {
        let quarter = rational::frac(1, 4);
        let bad = vs
            .iter()
            .enumerate()
            .filter(|(t, v)| **v < &quarter * rational::int(blocks01(*t as u128) as i64))
            .count();
        rows.push(CheckRow::new("v_t >= occ01(t)/4", vs.len(), bad, false));
        let half = tmax.div_ceil(2);
        let bad = (0..half).filter(|&t| vs[2 * t] != vs[t]).count();
        rows.push(CheckRow::new("v_{2t} = v_t", half, bad, false));
    }

    let kmax = 10;
    let oracle_n = tmax.min(64) as u128;
    let (n, bad) = count_failures((0..oracle_n).into_par_iter().map(|t| {
        let o = empirical_dist_default(w, t, kmax, None)?;
        let d = eng.dist(t, &default_eps(), kmax)?;
        Ok(o.exact && o.matches(&d))
    }))?;
    rows.push(CheckRow::new("oracle equals characteristic-function route", n, bad, false));

    let partition_n = tmax.min(256) as u128;
    let (n, bad) = count_failures((0..partition_n).into_par_iter().map(|t| {
        let exact = ExactDensities::compute(w, t)?.to_dist(None, kmax);
        let d = eng.dist(t, &default_eps(), kmax)?;
        Ok(exact.window(kmax) == d.window(kmax))
    }))?;
    rows.push(CheckRow::new("progression densities equal characteristic-function route", n, bad, false));

    let wbar = w.negate();
    let eng_bar = engine(&wbar)?;
    let (n, bad) = count_failures((0..partition_n).into_par_iter().map(|t| {
        let d = eng.dist(t, &default_eps(), kmax)?;
        let e = eng_bar.dist(t, &default_eps(), kmax)?;
        Ok(d.reflect().window(kmax) == e.window(kmax))
    }))?;
    rows.push(CheckRow::new("symmetry under complement", n, bad, false));

    let grid_n = tmax.min(512);
    let sweep = gauss::grid_sweep(w, grid_n, theta0, grid_size)?;
    let bad = sweep.iter().filter(|g| g.prop_b > 0.0).count();
    rows.push(CheckRow::new("characteristic function near the Gaussian", sweep.len(), bad, true));
    let applicable: Vec<f64> = sweep.iter().filter_map(|g| g.prop_c).collect();
    let bad = applicable.iter().filter(|&&x| x > 0.0).count();
    rows.push(CheckRow::new("characteristic function decay", applicable.len(), bad, true));

    Ok(rows)
}

fn cmd_verify(w: &Pattern, a: &VerifyArgs, meta: Option<&Meta>) -> Result<(String, i32)> {
    if a.tmax < 2 {
        return Err(Error::InvalidArgument("--tmax must be at least 2".into()));
    }
    if !(a.theta0 > 0.0 && a.theta0 <= std::f64::consts::PI) {
        return Err(Error::InvalidArgument("--theta0 must lie in (0, π]".into()));
    }
    if a.grid < 2 {
        return Err(Error::InvalidArgument("--grid must be at least 2".into()));
    }
    let tmax = usize::try_from(a.tmax).map_err(|_| Error::Resource("--tmax too large".into()))?;
    if tmax > 1 << 24 {
        return Err(Error::Resource(format!("--tmax {tmax} exceeds 2^24")));
    }
    let rows = verify_checks(w, tmax, a.theta0, a.grid)?;
    let failed = rows.iter().any(|r| r.failures > 0);
    for r in &rows {
        eprintln!("{:<60} {:>7} checked  {}", r.check, r.checked, r.status);
    }
    let text = match a.common.format {
        Format::Json => report::rows_json(w, &rows, meta)?,
        Format::Csv => report::checks_csv(&rows)?,
    };
    Ok((text, if failed { 1 } else { 0 }))
}
