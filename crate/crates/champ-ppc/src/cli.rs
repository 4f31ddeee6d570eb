//! Command-line front end: experiments, curves, formula tables, reports.
//!
//! Every subcommand is a pure function of its arguments: identical
//! invocations produce byte-identical output, seeds included. Persisted
//! numbers are exact integers or directed-rounded decimal strings — no
//! floating point ever reaches an output file.
//!
//! Exit status: 0 on success, 1 on usage or domain errors, 2 when `verify
//! --strict` finds a deviation between a formula and the block scan.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde_json::json;

use crate::champernowne::{Champernowne, StreamPosition};
use crate::numeric;
use crate::oracle::{self, BlockBits, Scope};
use crate::paircorr::{self, PairCountResult};
use crate::patterncount::{
    self, AppendixBranch, AppendixMode, BlockParams, FormulaForm, FormulaValue,
};
use crate::shifts::{self, SequenceKind, SequenceSample};
use crate::{Error, Result};

/// Fractional digits in rendered normalized statistics. The two bounds are
/// rounded outward (floor below, ceiling above), so the printed interval
/// always contains the true value.
pub const NORM_DIGITS: usize = 9;

/// Column layout shared by `ppc`, `weak-ppc`, `curve` and `theorem1`.
pub const PPC_HEADER: &str =
    "s_num,s_den,beta_num,beta_den,N,count_lower,count_upper,norm_lower,norm_upper";

#[derive(Parser)]
#[command(
    name = "champ-ppc",
    version,
    about = "Pair-correlation laboratory for binary digit-shift sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a slice of the concatenated-integers digit stream
    Digits(DigitsArgs),
    /// Dump the w-bit shift sequence (or a reference sequence)
    Shifts(ShiftsArgs),
    /// Pair-correlation statistic at threshold s/N
    Ppc(PpcArgs),
    /// Weak pair-correlation statistic at threshold s/N^beta
    WeakPpc(WeakPpcArgs),
    /// Statistic along an increasing grid of s values
    Curve(CurveArgs),
    /// Exact pattern-counting formula table at one (d, e)
    Formulas(FormulasArgs),
    /// Compare every formula against a brute-force block scan
    Verify(VerifyArgs),
    /// Preset replicating the divergence experiment: d = 2^e, N = 2^(d+e)
    Theorem1(Theorem1Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Champernowne,
    Uniform,
    Kronecker,
    SqrtN,
}

impl KindArg {
    fn kind(self) -> SequenceKind {
        match self {
            KindArg::Champernowne => SequenceKind::Champernowne,
            KindArg::Uniform => SequenceKind::Uniform,
            KindArg::Kronecker => SequenceKind::Kronecker,
            KindArg::SqrtN => SequenceKind::SqrtN,
        }
    }
}

fn ratio_arg(text: &str) -> std::result::Result<Ratio<u64>, String> {
    numeric::parse_ratio(text).map_err(|e| e.to_string())
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SequenceArgs {
    /// Sample length N
    #[arg(long)]
    n: u64,
    /// Truncation width w in bits
    #[arg(long, default_value_t = 32)]
    width: u32,
    #[arg(long, value_enum, default_value_t = KindArg::Champernowne)]
    kind: KindArg,
    /// RNG seed (required for --kind uniform)
    #[arg(long)]
    seed: Option<u64>,
    /// Rotation numerator (optional for --kind kronecker; default golden ratio)
    #[arg(long)]
    parameter: Option<u64>,
}

impl SequenceArgs {
    fn build(&self) -> Result<SequenceSample> {
        shifts::reference_sequence(
            self.kind.kind(),
            self.n,
            self.width,
            self.seed,
            self.parameter,
        )
    }
}

#[derive(Args)]
struct DigitsArgs {
    /// First stream position (1-based)
    #[arg(long, default_value_t = 1)]
    start: u64,
    /// Number of digits to print
    #[arg(long)]
    len: u64,
    #[arg(long, default_value_t = 2)]
    base: u32,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ShiftsArgs {
    #[command(flatten)]
    sequence: SequenceArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PpcArgs {
    #[command(flatten)]
    sequence: SequenceArgs,
    /// Threshold scale s, as an integer, fraction "p/q" or decimal
    #[arg(long, value_parser = ratio_arg, default_value = "1")]
    s: Ratio<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct WeakPpcArgs {
    #[command(flatten)]
    sequence: SequenceArgs,
    #[arg(long, value_parser = ratio_arg, default_value = "1")]
    s: Ratio<u64>,
    /// Exponent beta in (0, 1], as a fraction "u/v"
    #[arg(long, value_parser = ratio_arg)]
    beta: Ratio<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    sequence: SequenceArgs,
    /// Strictly increasing comma-separated s values, e.g. "1/4,1/2,1,2"
    #[arg(long)]
    grid: String,
    #[arg(long, value_parser = ratio_arg, default_value = "1")]
    beta: Ratio<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct FormulasArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    e: u32,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScopeArg {
    Interior,
    WithContext,
}

impl ScopeArg {
    fn scope(self) -> Scope {
        match self {
            ScopeArg::Interior => Scope::Interior,
            ScopeArg::WithContext => Scope::WithContext,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    d: u32,
    #[arg(long)]
    e: u32,
    /// Window scan scope for the block comparison
    #[arg(long, value_enum, default_value_t = ScopeArg::WithContext)]
    scope: ScopeArg,
    /// Exit with status 2 if any comparison row logs a deviation
    #[arg(long)]
    strict: bool,
    /// Also export the raw block bits (8 bits/byte, big-endian in byte)
    #[arg(long)]
    export_block: Option<PathBuf>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct Theorem1Args {
    /// Overlap e; 3 or 4 (e = 5 would need N = 2^37, beyond desk scale)
    #[arg(long)]
    e: u32,
    #[arg(long, default_value_t = 32)]
    width: u32,
    #[command(flatten)]
    out: OutputArgs,
}

/// Parse arguments, run, and translate errors into exit codes. Usage
/// problems (including unparseable values) exit 1; `--help`/`--version`
/// exit 0; strict verification deviations exit 2.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Digits(args) => digits(args),
        Command::Shifts(args) => shifts_cmd(args),
        Command::Ppc(args) => ppc(args),
        Command::WeakPpc(args) => weak_ppc(args),
        Command::Curve(args) => curve(args),
        Command::Formulas(args) => formulas(args),
        Command::Verify(args) => verify(args),
        Command::Theorem1(args) => theorem1(args),
    }
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn digits(args: DigitsArgs) -> Result<i32> {
    if args.base > 36 {
        return Err(Error::Usage(format!(
            "cannot render digits in base {} (max 36)",
            args.base
        )));
    }
    let champ = Champernowne::new(args.base)?;
    let start = StreamPosition::new(args.start)?;
    let mut line = String::with_capacity(args.len as usize + 1);
    for digit in champ.stream_from(&start).take(args.len as usize) {
        line.push(char::from_digit(u32::from(digit), args.base).expect("digit below base"));
    }
    line.push('\n');
    emit(&args.output, &line)?;
    Ok(0)
}

fn seed_field(sample: &SequenceSample) -> serde_json::Value {
    match sample.seed {
        Some(s) => json!(s),
        None => json!(null),
    }
}

fn parameter_field(sample: &SequenceSample) -> serde_json::Value {
    match sample.parameter {
        Some(p) => json!(p.to_string()),
        None => json!(null),
    }
}

fn shifts_cmd(args: ShiftsArgs) -> Result<i32> {
    let sample = args.sequence.build()?;
    let content = match args.out.format {
        Format::Csv => {
            let mut text = format!(
                "# kind={} N={} width={}",
                sample.kind.name(),
                sample.len(),
                sample.width
            );
            if let Some(seed) = sample.seed {
                let _ = write!(text, " seed={seed}");
            }
            if let Some(parameter) = sample.parameter {
                let _ = write!(text, " parameter={parameter}");
            }
            text.push('\n');
            text.push_str("n,numerator\n");
            for (i, value) in sample.values.iter().enumerate() {
                let _ = writeln!(text, "{},{}", i as u64 + 1, value);
            }
            text
        }
        Format::Json => {
            // numerators as strings: they exceed 2^53 at large widths
            let numerators: Vec<String> = sample.values.iter().map(|v| v.to_string()).collect();
            let value = json!({
                "kind": sample.kind.name(),
                "n": sample.len(),
                "width": sample.width,
                "seed": seed_field(&sample),
                "parameter": parameter_field(&sample),
                "numerators": numerators,
            });
            format!("{value:#}\n")
        }
    };
    emit(&args.out.output, &content)?;
    Ok(0)
}

fn ppc_csv_row(r: &PairCountResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{}",
        r.s.numer(),
        r.s.denom(),
        r.beta.numer(),
        r.beta.denom(),
        r.n_len,
        r.count_lower,
        r.count_upper,
        r.norm_lower_string(NORM_DIGITS),
        r.norm_upper_string(NORM_DIGITS),
    )
}

fn ppc_json(r: &PairCountResult) -> serde_json::Value {
    json!({
        "s_num": r.s.numer(),
        "s_den": r.s.denom(),
        "beta_num": r.beta.numer(),
        "beta_den": r.beta.denom(),
        "N": r.n_len,
        "count_lower": r.count_lower,
        "count_upper": r.count_upper,
        "norm_lower": r.norm_lower_string(NORM_DIGITS),
        "norm_upper": r.norm_upper_string(NORM_DIGITS),
    })
}

fn emit_ppc_rows(out: &OutputArgs, rows: &[PairCountResult]) -> Result<()> {
    let content = match out.format {
        Format::Csv => {
            let mut text = String::from(PPC_HEADER);
            text.push('\n');
            for row in rows {
                text.push_str(&ppc_csv_row(row));
                text.push('\n');
            }
            text
        }
        Format::Json => {
            let value = if rows.len() == 1 {
                ppc_json(&rows[0])
            } else {
                json!({ "rows": rows.iter().map(ppc_json).collect::<Vec<_>>() })
            };
            format!("{value:#}\n")
        }
    };
    emit(&out.output, &content)
}

fn ppc(args: PpcArgs) -> Result<i32> {
    let sample = args.sequence.build()?;
    let result = paircorr::ppc_statistic(&sample, args.s)?;
    emit_ppc_rows(&args.out, &[result])?;
    Ok(0)
}

fn weak_ppc(args: WeakPpcArgs) -> Result<i32> {
    let sample = args.sequence.build()?;
    let result = paircorr::weak_ppc_statistic(&sample, args.s, args.beta)?;
    emit_ppc_rows(&args.out, &[result])?;
    Ok(0)
}

fn curve(args: CurveArgs) -> Result<i32> {
    let grid: Vec<Ratio<u64>> = args
        .grid
        .split(',')
        .map(|part| numeric::parse_ratio(part.trim()))
        .collect::<Result<_>>()?;
    let sample = args.sequence.build()?;
    let rows = paircorr::ppc_curve(&sample, &grid, args.beta)?;
    emit_ppc_rows(&args.out, &rows)?;
    Ok(0)
}

/// Every formula whose domain covers `(d, e)`, in a fixed order.
fn formula_table(params: &BlockParams) -> Result<Vec<FormulaValue>> {
    let d = params.d();
    let e = params.e();
    let mut rows = vec![
        patterncount::main_pair_count(params),
        patterncount::main_pair_count_alt(params),
        patterncount::dominant_term(params),
    ];
    if e >= 2 {
        rows.push(patterncount::carry_chain_pair_count(
            params,
            FormulaForm::Sum,
        )?);
        rows.push(patterncount::carry_chain_pair_count(
            params,
            FormulaForm::Closed,
        )?);
    }
    if params.middle_len() >= 3 {
        rows.push(patterncount::all_ones_pair_count(params)?);
    }
    rows.push(patterncount::appendix_match_count(
        params,
        d,
        AppendixBranch::JEqDOne,
    )?);
    rows.push(patterncount::appendix_match_count(
        params,
        d,
        AppendixBranch::JEqDZero,
    )?);
    for j in (d + 1)..=(d + e - 1) {
        rows.push(patterncount::appendix_match_count(
            params,
            j,
            AppendixBranch::JGtDOne,
        )?);
        rows.push(patterncount::appendix_match_count(
            params,
            j,
            AppendixBranch::JGtDZero,
        )?);
    }
    if params.middle_len() >= 5 {
        let pair = patterncount::appendix_pair_count(params, AppendixMode::JEqD)?;
        rows.push(pair.sum_form);
        rows.push(pair.closed_form);
    }
    if e >= 2 {
        let pair = patterncount::appendix_pair_count(params, AppendixMode::JGtD)?;
        rows.push(pair.sum_form);
        rows.push(pair.closed_form);
    }
    Ok(rows)
}

fn formulas(args: FormulasArgs) -> Result<i32> {
    let params = BlockParams::new(args.d, args.e)?;
    let rows = formula_table(&params)?;
    let content = match args.out.format {
        Format::Csv => {
            let mut text = String::from("formula,form,j,value\n");
            for row in &rows {
                let j = row.j.map(|j| j.to_string()).unwrap_or_default();
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    row.name,
                    row.form.name(),
                    j,
                    row.value_string()
                );
            }
            text
        }
        Format::Json => {
            let json_rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    json!({
                        "formula": row.name,
                        "form": row.form.name(),
                        "j": row.j,
                        "value": row.value_string(),
                    })
                })
                .collect();
            let value = json!({ "d": args.d, "e": args.e, "rows": json_rows });
            format!("{value:#}\n")
        }
    };
    emit(&args.out.output, &content)?;
    Ok(0)
}

fn verify(args: VerifyArgs) -> Result<i32> {
    let report = oracle::verify_in_scope(args.d, args.e, args.scope.scope())?;
    if let Some(path) = &args.export_block {
        let bits = BlockBits::build(args.d, 0)?;
        fs::write(path, bits.export_interior())?;
    }
    let content = match args.format {
        Format::Json => {
            let mut text = report.to_json();
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut text = String::from("row,formula_value,oracle_value,verdict\n");
            for (name, row) in &report.totals {
                let _ = writeln!(
                    text,
                    "{},{},{},{}",
                    name,
                    row.formula_value,
                    row.oracle_value,
                    row.verdict.name()
                );
            }
            text
        }
    };
    emit(&args.output, &content)?;
    if args.strict && !report.clean() {
        return Ok(2);
    }
    Ok(0)
}

fn theorem1(args: Theorem1Args) -> Result<i32> {
    if args.e != 3 && args.e != 4 {
        return Err(Error::Usage(format!(
            "the preset supports e = 3 (N = 2^11) and e = 4 (N = 2^20); \
             e = {} is out of desk scale",
            args.e
        )));
    }
    let d = 1u32 << args.e;
    let n_len = 1u64 << (d + args.e);
    let s = Ratio::from_integer(1);
    let sample = shifts::champernowne_sequence(n_len, args.width)?;
    let result = paircorr::ppc_statistic(&sample, s)?;
    let content = match args.out.format {
        Format::Csv => {
            let mut text = format!("# preset=theorem1 e={} d={d} N={n_len}\n", args.e);
            text.push_str(PPC_HEADER);
            text.push('\n');
            text.push_str(&ppc_csv_row(&result));
            text.push('\n');
            text
        }
        Format::Json => {
            let mut value = ppc_json(&result);
            let obj = value.as_object_mut().expect("object");
            obj.insert("preset".into(), json!("theorem1"));
            obj.insert("e".into(), json!(args.e));
            obj.insert("d".into(), json!(d));
            format!("{value:#}\n")
        }
    };
    emit(&args.out.output, &content)?;
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(line: &[&str]) -> Cli {
        Cli::try_parse_from(line).expect("arguments parse")
    }

    #[test]
    fn digit_defaults() {
        let cli = parse(&["champ-ppc", "digits", "--len", "16"]);
        match cli.command {
            Command::Digits(args) => {
                assert_eq!(args.start, 1);
                assert_eq!(args.base, 2);
                assert_eq!(args.len, 16);
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn ratio_arguments_parse() {
        let cli = parse(&[
            "champ-ppc",
            "weak-ppc",
            "--n",
            "100",
            "--s",
            "3/2",
            "--beta",
            "1/2",
        ]);
        match cli.command {
            Command::WeakPpc(args) => {
                assert_eq!(args.s, Ratio::new(3, 2));
                assert_eq!(args.beta, Ratio::new(1, 2));
            }
            _ => panic!("wrong subcommand"),
        }
        assert!(Cli::try_parse_from(["champ-ppc", "ppc", "--n", "10", "--s", "x"]).is_err());
    }

    #[test]
    fn formula_table_covers_domains() {
        // e = 1: no carry chain, no j > d branches, no appendix pair rows
        let narrow = formula_table(&BlockParams::new(8, 1).unwrap()).unwrap();
        assert!(narrow.iter().all(|r| r.name != "carry_chain_pair_count"));
        // wide case carries every family
        let wide = formula_table(&BlockParams::new(12, 3).unwrap()).unwrap();
        let names: Vec<&str> = wide.iter().map(|r| r.name).collect();
        assert!(names.contains(&"main_pair_count"));
        assert!(names.contains(&"carry_chain_pair_count"));
        assert!(names.contains(&"appendix_pairs_j_gt_d"));
        // appendix match rows cover j = 12, 13, 14
        let js: Vec<Option<u32>> = wide
            .iter()
            .filter(|r| r.name.starts_with("appendix_match_count"))
            .map(|r| r.j)
            .collect();
        assert_eq!(js.len(), 6);
        assert!(js.contains(&Some(13)) && js.contains(&Some(14)));
    }

    #[test]
    fn csv_row_is_exact_strings() {
        let sample = shifts::champernowne_sequence(64, 32).unwrap();
        let result = paircorr::ppc_statistic(&sample, Ratio::from_integer(1)).unwrap();
        let row = ppc_csv_row(&result);
        assert!(row.starts_with("1,1,1,1,64,"));
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 9);
        // norm fields carry exactly NORM_DIGITS fractional digits
        for field in &fields[7..] {
            let (_, frac) = field.split_once('.').expect("decimal point");
            assert_eq!(frac.len(), NORM_DIGITS);
        }
    }

    #[test]
    fn theorem1_rejects_large_e() {
        let args = Theorem1Args {
            e: 5,
            width: 32,
            out: OutputArgs {
                output: None,
                format: Format::Csv,
            },
        };
        assert!(matches!(theorem1(args), Err(Error::Usage(_))));
    }
}
