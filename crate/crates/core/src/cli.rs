//! Command-line front end: argument parsing, dispatch, and the JSON envelope.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::coinvariants::{coinvariants_h, coinvariants_s, Sign};
use crate::error::{Error, Result};
use crate::frobenius::frobenius_on_coinvariants;
use crate::laurent::{FormParameter, ParamVariant};
use crate::quadratic::QuadraticModule;
use crate::tables::{
    bp_order, gw_rational, k_z_rational, l_even_z, l_symmetric_shaneson, l_symmetric_table, mttheta_rational_homotopy, pi_so_rational,
    stable_stem, theorem_a_report, theorem_b_report,
};
use crate::unitary::{check_conditions, membership_by_form, preserves_phi, random_word, BlockMatrix};
use crate::whitehead::phi_omega_defect;

pub const SCHEMA: &str = "torus-forms/1";
pub const SEED_ENV: &str = "TORUS_FORMS_SEED";

/// Length of the random word used when no matrix file is given.
const DEFAULT_WORD_LENGTH: usize = 6;
const MAX_WINDOW: i64 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "torus-forms", version, about = "Exact algebra for quadratic forms over Z[t, t^-1] and their unitary groups")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for random inputs; the TORUS_FORMS_SEED environment variable takes precedence.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format (defaults to text for `coinv` and JSON elsewhere).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Coinvariants of the elementary unitary group on S+ or S- (and on H).
    Coinv {
        #[arg(long, value_parser = parse_sign, allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 3)]
        g: usize,
        #[arg(long, default_value_t = 4)]
        window: i64,
        /// Emit JSON.
        #[arg(long)]
        json: bool,
    },
    /// Check the unitary conditions on a block matrix.
    UnitaryCheck {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        g: usize,
        /// Matrix file (nested arrays of [exponent, coefficient] pairs); a seeded random word if omitted.
        #[arg(long = "json")]
        matrix: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ParamArg::Min)]
        param: ParamArg,
    },
    /// Compare the boundary-class defect with the unitary conditions.
    OmegaCheck {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        g: usize,
        /// Matrix file; a seeded random word if omitted.
        matrix: Option<PathBuf>,
    },
    /// Frobenius operator on the torsion coinvariants, by formula and through the cover.
    Frobenius {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        g: usize,
        #[arg(long, default_value_t = 6)]
        window: i64,
    },
    /// Print a lookup table over an inclusive range `a..b`.
    Tables {
        #[arg(long)]
        name: String,
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        /// Needed by `gw-rational` and `mttheta`.
        #[arg(long)]
        n: Option<i64>,
    },
    /// Bookkeeping reports.
    Report {
        #[command(subcommand)]
        kind: ReportKind,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum ReportKind {
    TheoremA {
        #[arg(long)]
        n: i64,
    },
    TheoremB {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        g: usize,
        #[arg(long, default_value_t = 4)]
        window: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParamArg {
    Min,
    Full,
    Max,
}

impl From<ParamArg> for ParamVariant {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::Min => ParamVariant::Min,
            ParamArg::Full => ParamVariant::Full,
            ParamArg::Max => ParamVariant::Max,
        }
    }
}

fn parse_sign(s: &str) -> std::result::Result<Sign, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// The result of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub command: String,
    pub pass: bool,
    pub result: Value,
    pub text: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self, seed: u64) -> String {
        let v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "seed": seed,
            "pass": self.pass,
            "result": self.result,
        });
        serde_json::to_string_pretty(&v).expect("values serialize")
    }
}

/// The seed in effect: the environment variable wins over `--seed`.
pub fn effective_seed(config: &RunConfig) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Error::Usage(format!("{SEED_ENV} must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(config.seed),
    }
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

fn check_n(n: i64) -> Result<()> {
    if n < 3 {
        return Err(usage(format!("n must be at least 3, got {n}")));
    }
    Ok(())
}

fn check_genus(g: usize, min: usize) -> Result<()> {
    if g < min {
        return Err(usage(format!("g must be at least {min}, got {g}")));
    }
    Ok(())
}

fn check_window(w: i64) -> Result<()> {
    if !(1..=MAX_WINDOW).contains(&w) {
        return Err(usage(format!("window must lie in 1..={MAX_WINDOW}, got {w}")));
    }
    Ok(())
}

fn load_matrix(path: Option<&Path>, g: usize, n: i64, seed: u64) -> Result<BlockMatrix> {
    let m = match path {
        Some(p) => BlockMatrix::from_json(&std::fs::read_to_string(p)?)?,
        None => random_word(g, n, DEFAULT_WORD_LENGTH, seed)?,
    };
    if m.genus() != g {
        return Err(usage(format!("matrix has genus {}, but --g is {g}", m.genus())));
    }
    Ok(m)
}

/// Parses `a..b` or `a..=b`, both inclusive.
pub fn parse_range(s: &str) -> Result<(i64, i64)> {
    let (a, b) = s.split_once("..").ok_or_else(|| usage(format!("range must look like a..b, got {s:?}")))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let parse = |x: &str| x.trim().parse::<i64>().map_err(|_| usage(format!("bad range bound {x:?}")));
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return Err(usage(format!("empty range {s:?}")));
    }
    if b - a > 1000 {
        return Err(usage("range spans more than 1000 entries"));
    }
    Ok((a, b))
}

pub fn dispatch(config: &RunConfig) -> Result<Outcome> {
    let seed = effective_seed(config)?;
    match &config.command {
        Command::Coinv { sign, n, g, window, .. } => coinv(*sign, *n, *g, *window),
        Command::UnitaryCheck { n, g, matrix, param } => unitary_check(*n, *g, matrix.as_deref(), *param, seed),
        Command::OmegaCheck { n, g, matrix } => omega_check(*n, *g, matrix.as_deref(), seed),
        Command::Frobenius { d, n, g, window } => frobenius(*d, *n, *g, *window),
        Command::Tables { name, range, n } => tables(name, range, *n),
        Command::Report { kind: ReportKind::TheoremA { n } } => report_a(*n),
        Command::Report { kind: ReportKind::TheoremB { n, p, g, window } } => report_b(*n, *p, *g, *window),
    }
}

fn coinv(sign: Sign, n: i64, g: usize, window: i64) -> Result<Outcome> {
    check_n(n)?;
    check_genus(g, 2)?;
    check_window(window)?;
    let s = coinvariants_s(sign, n, g, window)?;
    let h = coinvariants_h(n, g, window)?;
    let witnesses: Vec<Value> = s
        .witnesses
        .iter()
        .map(|w| json!({ "tensor": w.description, "lambda": w.lambda.to_string(), "phi": w.phi }))
        .collect();
    let pass = !s.asserted || (s.matches && h.matches);
    let text = format!(
        "S{sign} coinvariants (n = {n}, g = {g}, window = {window})\n  computed:  {}\n  predicted: {}\n  match:     {}{}\nH coinvariants: {}\n",
        s.computed,
        s.predicted,
        s.matches,
        if s.asserted { "" } else { " (not asserted below genus 3)" },
        h.computed
    );
    Ok(Outcome {
        command: "coinv".into(),
        pass,
        result: json!({
            "sign": sign.to_string(),
            "n": n,
            "g": g,
            "window": window,
            "computed": s.computed.to_string(),
            "predicted": s.predicted.to_string(),
            "match": s.matches,
            "asserted": s.asserted,
            "witness": witnesses,
            "relations_used": s.relations_used,
            "relations_discarded": s.relations_discarded,
            "h_coinvariants": h.computed.to_string(),
        }),
        text,
    })
}

fn unitary_check(n: i64, g: usize, path: Option<&Path>, param: ParamArg, seed: u64) -> Result<Outcome> {
    check_n(n)?;
    check_genus(g, 1)?;
    let m = load_matrix(path, g, n, seed)?;
    let parameter = FormParameter::new(n, param.into());
    let report = check_conditions(&m, n, parameter)?;
    let by_form = membership_by_form(&m, &QuadraticModule::hyperbolic(g, n, parameter))?;
    let pass = report.all();
    let failed = report.failed();
    let text = if pass {
        format!("matrix is unitary (n = {n}, g = {g})\n")
    } else {
        format!("matrix is not unitary: failed {}\n", failed.join(", "))
    };
    Ok(Outcome {
        command: "unitary-check".into(),
        pass,
        result: json!({
            "n": n,
            "g": g,
            "parameter": format!("{param:?}").to_lowercase(),
            "conditions": serde_json::to_value(report)?,
            "failed": failed,
            "member": pass,
            "member_by_form": by_form,
            "preserves_lambda": preserves_phi(&m, n),
            "matrix": m.matrix(),
        }),
        text,
    })
}

fn omega_check(n: i64, g: usize, path: Option<&Path>, seed: u64) -> Result<Outcome> {
    check_n(n)?;
    check_genus(g, 1)?;
    let m = load_matrix(path, g, n, seed)?;
    let defect = phi_omega_defect(&m, n)?;
    let conditions_pass = check_conditions(&m, n, FormParameter::full(n))?.all();
    let defect_zero = defect.is_zero();
    let agree = defect_zero == conditions_pass;
    let text = format!("defect: {defect}\ndefect zero: {defect_zero}\nconditions pass: {conditions_pass}\nagree: {agree}\n");
    Ok(Outcome {
        command: "omega-check".into(),
        pass: agree,
        result: json!({
            "n": n,
            "g": g,
            "defect": defect.to_string(),
            "defect_zero": defect_zero,
            "conditions_pass": conditions_pass,
            "agree": agree,
        }),
        text,
    })
}

fn frobenius(d: u64, n: i64, g: usize, window: i64) -> Result<Outcome> {
    check_n(n)?;
    check_genus(g, 1)?;
    check_window(window)?;
    if d < 1 {
        return Err(usage("d must be positive"));
    }
    let r = frobenius_on_coinvariants(d, n, g, window)?;
    let text = format!("F_{d} on t^a - t^-a, a = 1..{window}\n  formula: {:?}\n  oracle:  {:?}\n  agree: {}\n", r.formula, r.oracle, r.agree);
    Ok(Outcome {
        command: "frobenius".into(),
        pass: r.agree,
        result: json!({ "d": d, "n": n, "g": g, "window": window, "formula": r.formula, "oracle": r.oracle, "agree": r.agree }),
        text,
    })
}

fn table_row(name: &str, i: i64, n: Option<i64>) -> Result<(String, &'static str)> {
    let need_n = || n.ok_or_else(|| usage(format!("table {name} needs --n")));
    Ok(match name {
        "stable-stems" => {
            let e = stable_stem(i)?;
            (e.value.to_string(), e.provenance)
        }
        "pi-so-rational" => {
            let e = pi_so_rational(i);
            (e.value.to_string(), e.provenance)
        }
        "l-even-z" => {
            let e = l_even_z(i);
            (e.value.to_string(), e.provenance)
        }
        "l-symmetric-z" => {
            let e = l_symmetric_table(i);
            (e.value.to_string(), e.provenance)
        }
        "l-symmetric-shaneson" => {
            let e = l_symmetric_shaneson(i);
            (e.value.to_string(), e.provenance)
        }
        "k-z-rational" => {
            let e = k_z_rational(i);
            (e.value.to_string(), e.provenance)
        }
        "bp-order" => {
            let e = bp_order(i)?;
            (e.value.to_string(), e.provenance)
        }
        "gw-rational" => (gw_rational(need_n()?, i).to_string(), "K-part plus L-part"),
        "mttheta" => {
            let n = need_n()?;
            (mttheta_rational_homotopy(n, i.max(0))?.dim(i).to_string(), "Poincare series")
        }
        _ => return Err(usage(format!("unknown table {name}"))),
    })
}

fn tables(name: &str, range: &str, n: Option<i64>) -> Result<Outcome> {
    let name = name.to_lowercase().replace('_', "-");
    let (a, b) = parse_range(range)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for i in a..=b {
        let (value, provenance) = table_row(&name, i, n)?;
        text.push_str(&format!("{i:>4}  {value}\n"));
        rows.push(json!({ "index": i, "value": value, "provenance": provenance }));
    }
    Ok(Outcome { command: "tables".into(), pass: true, result: json!({ "name": name, "n": n, "rows": rows }), text })
}

fn report_a(n: i64) -> Result<Outcome> {
    check_n(n)?;
    let mut rows = Vec::new();
    let mut text = format!("rational comparison for n = {n}\n   k  bott  les  diff\n");
    let mut pass = true;
    for k in 1..n - 2 {
        let r = theorem_a_report(n, k)?;
        pass &= r.difference == 0;
        text.push_str(&format!("{k:>4}  {:>4}  {:>3}  {:>4}\n", r.bott_side, r.les_side, r.difference));
        rows.push(serde_json::to_value(r)?);
    }
    Ok(Outcome { command: "report theorem-a".into(), pass, result: json!({ "n": n, "rows": rows }), text })
}

fn report_b(n: i64, p: u64, g: usize, window: i64) -> Result<Outcome> {
    check_n(n)?;
    check_genus(g, 2)?;
    check_window(window)?;
    let r = theorem_b_report(n, p, g, window).map_err(|e| match e {
        Error::OutOfRange(m) => usage(m),
        other => other,
    })?;
    let text = format!(
        "degree {}: {} (from coinvariants {})\nfrobenius agrees: {}\nmultiplicative: {}\nno tame submodule: {} (q = {})\ncertified: {}\n",
        r.degree,
        r.module,
        r.coinvariants,
        r.frobenius_agree.iter().all(|(_, ok)| *ok),
        r.multiplicative,
        r.no_tame.holds,
        r.no_tame.q.map_or("none".to_string(), |q| q.to_string()),
        r.certified
    );
    Ok(Outcome {
        command: "report theorem-b".into(),
        pass: r.certified,
        result: json!({
            "n": r.n,
            "p": r.p,
            "g": r.g,
            "window": r.window,
            "degree": r.degree,
            "coinvariants": r.coinvariants.to_string(),
            "module": r.module.to_string(),
            "expected_module": r.expected_module.to_string(),
            "frobenius_agree": r.frobenius_agree,
            "multiplicative": r.multiplicative,
            "tame": r.tameness.tame,
            "tameness_failing_d": r.tameness.failing,
            "no_tame_submodule": r.no_tame.holds,
            "no_tame_witness": r.no_tame.q,
            "extra_summand_fixed": r.extra_summand_fixed,
            "certified": r.certified,
        }),
        text,
    })
}

/// Exit status for an error: 2 for bad input, 1 otherwise.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_)
        | Error::BadParameters(_)
        | Error::OutOfRange(_)
        | Error::Parse(_)
        | Error::Json(_)
        | Error::Io(_)
        | Error::DimensionMismatch { .. } => 2,
        _ => 1,
    }
}

fn output_format(config: &RunConfig) -> Format {
    match (&config.format, &config.command) {
        (Some(f), _) => *f,
        (None, Command::Coinv { json: true, .. }) => Format::Json,
        (None, Command::Coinv { .. }) => Format::Text,
        (None, _) => Format::Json,
    }
}

/// Runs the command line and returns `(exit code, stdout, stderr)`.
pub fn run_to_strings<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let msg = e.render().to_string();
            return if code == 0 { (0, msg, String::new()) } else { (2, String::new(), msg) };
        }
    };
    match dispatch(&config) {
        Ok(out) => {
            let body = match output_format(&config) {
                Format::Text => out.text.clone(),
                Format::Json => out.to_json(effective_seed(&config).unwrap_or(config.seed)) + "\n",
            };
            (out.exit_code(), body, String::new())
        }
        Err(e) => (error_exit_code(&e), String::new(), format!("error: {e}\n")),
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let (code, out, err) = run_to_strings(args);
    print!("{out}");
    eprint!("{err}");
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-8..8").unwrap(), (-8, 8));
        assert_eq!(parse_range("0..=3").unwrap(), (0, 3));
        assert!(parse_range("3..1").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_to_strings(["torus-forms", "coinv", "--sign", "+", "--n", "2"]);
        assert_eq!(code, 2);
        assert!(err.contains("n must be at least 3"));
        assert_eq!(run_to_strings(["torus-forms", "bogus"]).0, 2);
        assert_eq!(run_to_strings(["torus-forms", "tables", "--name", "nope", "--range", "0..1"]).0, 2);
    }

    #[test]
    fn coinv_small() {
        let (code, out, _) = run_to_strings(["torus-forms", "coinv", "--sign", "-", "--n", "4", "--g", "3", "--window", "2", "--json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["result"]["computed"], "Z^2 + Z/2");
    }

    #[test]
    fn report_a_passes() {
        let (code, out, _) = run_to_strings(["torus-forms", "report", "theorem-a", "--n", "5"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"pass\": true"));
    }

    #[test]
    fn report_b_out_of_range_is_usage() {
        assert_eq!(run_to_strings(["torus-forms", "report", "theorem-b", "--n", "5", "--p", "3"]).0, 2);
    }
}
