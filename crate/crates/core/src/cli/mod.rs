//! The `bhht` command line: single-instance commands and batch catalogs.

pub mod document;
pub mod result;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::engine::{
    orbifold_euler_bruteforce, proposition_checks, reduced_orbifold_euler, verify_duality,
    Instance, DEFAULT_ORACLE_CAP,
};
use crate::error::Error;
use crate::invertible::dual_subgroup;
use document::{canonical_hash, GeneratorDoc, InstanceDocument};
use result::{CatalogRecord, FailureRecord, OracleRecord, OracleValue, ResultDocument, Timings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_ORACLE: i32 = 3;
pub const EXIT_REGRESSION: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "bhht",
    version,
    about = "Orbifold Euler characteristics of Milnor fibres and their BHHT duals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Also evaluate the defining sum by brute force.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Largest |G⋊S| the brute-force oracle accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP)]
    pub max_oracle_order: usize,
    /// Write the output document here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Include wall-clock timings in result documents.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every instance invariant and print the atomic decomposition.
    Validate { input: PathBuf },
    /// Print the BH transpose as an instance document fragment.
    Transpose { input: PathBuf },
    /// Print generators and order of G_f.
    SymmetryGroup { input: PathBuf },
    /// Print generators and order of the dual group G̃.
    DualGroup { input: PathBuf },
    /// Reduced and unreduced orbifold Euler characteristics.
    Euler { input: PathBuf },
    /// Compare the instance with its BHHT dual.
    VerifyDuality { input: PathBuf },
    /// Brute-force oracle and enumeration checks of the closed form.
    OracleCheck { input: PathBuf },
    /// Process one instance document per line.
    Catalog {
        input: PathBuf,
        /// Merge the new results into this existing result stream.
        #[arg(long)]
        merge: Option<PathBuf>,
    },
}

/// Exit code, output document and diagnostics of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub diagnostics: Vec<String>,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome {
            code: EXIT_OK,
            output,
            diagnostics: Vec::new(),
        }
    }

    fn failed(code: i32, diagnostic: String) -> Self {
        Outcome {
            code,
            output: String::new(),
            diagnostics: vec![diagnostic],
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::OracleInapplicable(_) | Error::OracleCapExceeded { .. } => EXIT_ORACLE,
        Error::Internal(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn read_input(path: &Path) -> Result<String, Error> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }
}

fn load(path: &Path) -> Result<Instance, Error> {
    InstanceDocument::parse(&read_input(path)?)?.to_instance()
}

fn render_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("documents serialize");
    s.push('\n');
    s
}

fn oracle_record(
    inst: &Instance,
    dual: Option<&Instance>,
    cap: usize,
    pipeline: (i64, Option<i64>),
) -> (OracleRecord, i32) {
    let run = |i: &Instance| orbifold_euler_bruteforce(i, cap).map(|b| b.reduced);
    let mut record = OracleRecord {
        ran: true,
        ..OracleRecord::default()
    };
    let mut code = EXIT_OK;
    let mut agrees = true;
    let mut reasons = Vec::new();
    let mut eval = |i: &Instance, expected: i64| match run(i) {
        Ok(v) => {
            agrees &= v == expected;
            OracleValue::Value(v)
        }
        Err(e) => {
            code = code.max(exit_code(&e));
            reasons.push(e.to_string());
            OracleValue::inapplicable()
        }
    };
    record.value = Some(eval(inst, pipeline.0));
    if let (Some(d), Some(expected)) = (dual, pipeline.1) {
        record.dual_value = Some(eval(d, expected));
    }
    if reasons.is_empty() {
        record.agrees = Some(agrees);
        if !agrees {
            code = EXIT_REGRESSION;
        }
    } else {
        record.reason = Some(reasons.join("; "));
    }
    (record, code)
}

/// Result document for one instance. With `dual` the BHHT side and the
/// duality verdict are included.
fn evaluate(inst: &Instance, with_dual: bool, cli: &Cli) -> Result<(ResultDocument, i32), Error> {
    let start = Instant::now();
    let (report, dual) = if with_dual {
        (verify_duality(inst)?, Some(inst.bhht_dual()?))
    } else {
        (reduced_orbifold_euler(inst)?, None)
    };
    let mut doc = ResultDocument::new(inst, &report, dual.as_ref());
    let mut code = EXIT_OK;
    if cli.oracle {
        let dual_reduced = report.dual_report.as_ref().map(|r| r.reduced);
        let (record, c) = oracle_record(
            inst,
            dual.as_ref(),
            cli.max_oracle_order,
            (report.reduced, dual_reduced),
        );
        doc.oracle = record;
        code = code.max(c);
    }
    if doc.pc && doc.duality_equal == Some(false) {
        code = EXIT_REGRESSION;
    }
    if cli.timings {
        doc.timings = Some(Timings {
            total_ms: start.elapsed().as_millis() as u64,
        });
    }
    Ok((doc, code))
}

fn text_result(doc: &ResultDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "name: {}", doc.name);
    let _ = writeln!(s, "hash: {}", doc.hash);
    let _ = writeln!(
        s,
        "|G| = {}, |S| = {}, PC: {}",
        doc.group_order, doc.symmetry_order, doc.pc
    );
    let _ = writeln!(s, "reduced: {}", doc.reduced);
    let _ = writeln!(s, "unreduced: {}", doc.unreduced);
    let _ = writeln!(s, "point term: {}", doc.point_term);
    let _ = writeln!(s, "relative: {}", doc.relative);
    for o in doc.per_orbit.iter().filter(|o| o.contribution != "0/1") {
        let _ = writeln!(
            s,
            "  orbit {:?} (size {}, |S^I| = {}): {}",
            o.representative, o.orbit_size, o.isotropy_order, o.contribution
        );
    }
    if let Some(d) = &doc.dual {
        let _ = writeln!(
            s,
            "dual |G̃| = {}: reduced {}, unreduced {}",
            d.order, d.reduced, d.unreduced
        );
    }
    if let Some(eq) = doc.duality_equal {
        let _ = writeln!(s, "duality equal: {eq}");
    }
    if doc.oracle.ran {
        let _ = writeln!(s, "oracle: {}", serde_json::to_string(&doc.oracle).unwrap());
    }
    if let Some(t) = &doc.timings {
        let _ = writeln!(s, "time: {} ms", t.total_ms);
    }
    s
}

fn group_output(cli: &Cli, name: &str, generators: Vec<GeneratorDoc>, order: usize) -> String {
    match cli.format {
        Format::Structured => render_json(&json!({
            "name": name,
            "generators": generators,
            "order": order,
        })),
        Format::Text => {
            let gens: Vec<String> = generators
                .iter()
                .map(|g| serde_json::to_string(g).unwrap())
                .collect();
            format!("{name}\norder: {order}\ngenerators: {}\n", gens.join(", "))
        }
    }
}

fn single(cli: &Cli, input: &Path) -> Outcome {
    let inst = match load(input) {
        Ok(i) => i,
        Err(e) => return Outcome::failed(exit_code(&e), format!("{}: {e}", input.display())),
    };
    let result = match &cli.command {
        Command::Validate { .. } => Ok(validate_output(cli, &inst)),
        Command::Transpose { .. } => {
            let t = inst.matrix().transpose();
            let fragment = json!({
                "name": format!("{}~", inst.name()),
                "n": t.n(),
                "monomials": t.rows(),
            });
            Ok(Outcome::ok(match cli.format {
                Format::Structured => render_json(&fragment),
                Format::Text => format!("f~ = {t}\n{}", render_json(&fragment)),
            }))
        }
        Command::SymmetryGroup { .. } => {
            let g = inst.full_group().canonical();
            let gens = g
                .generators()
                .iter()
                .map(GeneratorDoc::from_vector)
                .collect();
            Ok(Outcome::ok(group_output(cli, inst.name(), gens, g.order())))
        }
        Command::DualGroup { .. } => dual_subgroup(inst.matrix(), inst.group()).map(|g| {
            let gens = g
                .generators()
                .iter()
                .map(GeneratorDoc::from_vector)
                .collect();
            Outcome::ok(group_output(cli, inst.name(), gens, g.order()))
        }),
        Command::Euler { .. } | Command::VerifyDuality { .. } => {
            let with_dual = matches!(cli.command, Command::VerifyDuality { .. });
            evaluate(&inst, with_dual, cli).map(|(doc, code)| {
                let output = match cli.format {
                    Format::Structured => render_json(&doc),
                    Format::Text => text_result(&doc),
                };
                let mut diagnostics = Vec::new();
                if code == EXIT_REGRESSION {
                    diagnostics.push(format!("{}: duality or oracle regression", doc.name));
                }
                if let Some(r) = &doc.oracle.reason {
                    diagnostics.push(format!("{}: {r}", doc.name));
                }
                Outcome {
                    code,
                    output,
                    diagnostics,
                }
            })
        }
        Command::OracleCheck { .. } => oracle_check(cli, &inst),
        Command::Catalog { .. } => unreachable!("catalog is dispatched separately"),
    };
    result.unwrap_or_else(|e| Outcome::failed(exit_code(&e), format!("{}: {e}", inst.name())))
}

fn validate_output(cli: &Cli, inst: &Instance) -> Outcome {
    let blocks: Vec<String> = inst
        .decomposition()
        .blocks
        .iter()
        .map(|b| b.to_string())
        .collect();
    let actions: Vec<String> = inst
        .block_actions()
        .generator
        .iter()
        .map(|a| {
            format!(
                "block {}: return power {}, {:?}",
                a.block + 1,
                a.return_power,
                a.action
            )
        })
        .collect();
    let output = match cli.format {
        Format::Structured => render_json(&json!({
            "name": inst.name(),
            "hash": canonical_hash(inst),
            "valid": true,
            "blocks": blocks,
            "block_actions": actions,
            "group_order": inst.group().order(),
            "full_group_order": inst.full_group().order(),
            "symmetry_generator": inst.symmetry().generator().to_string(),
            "symmetry_order": inst.symmetry().order(),
            "pc": inst.pc_holds(),
        })),
        Format::Text => {
            let mut s = format!("{}\nf = {}\n", inst.name(), inst.matrix());
            let _ = writeln!(s, "atoms: {}", blocks.join(", "));
            let _ = writeln!(
                s,
                "G = {}, |G_f| = {}",
                inst.group(),
                inst.full_group().order()
            );
            let _ = writeln!(
                s,
                "S = <{}> (order {}), PC: {}",
                inst.symmetry().generator(),
                inst.symmetry().order(),
                inst.pc_holds()
            );
            for a in &actions {
                let _ = writeln!(s, "  {a}");
            }
            s.push_str("valid\n");
            s
        }
    };
    Outcome::ok(output)
}

fn oracle_check(cli: &Cli, inst: &Instance) -> Result<Outcome, Error> {
    let report = reduced_orbifold_euler(inst)?;
    let checks = proposition_checks(inst)?;
    let mut code = EXIT_OK;
    let mut diagnostics = Vec::new();
    let oracle = match orbifold_euler_bruteforce(inst, cli.max_oracle_order) {
        Ok(b) => {
            if b.reduced != report.reduced || b.point_term != report.point_term {
                code = EXIT_REGRESSION;
                diagnostics.push(format!(
                    "oracle {} (point {}) vs pipeline {} (point {})",
                    b.reduced, b.point_term, report.reduced, report.point_term
                ));
            }
            json!({"ran": true, "value": b.reduced, "point_term": b.point_term, "agrees": code == EXIT_OK})
        }
        Err(e) => {
            code = exit_code(&e);
            diagnostics.push(e.to_string());
            json!({"ran": true, "value": "inapplicable", "reason": e.to_string()})
        }
    };
    for c in checks.iter().filter(|c| !c.passed) {
        code = code.max(EXIT_REGRESSION);
        diagnostics.push(format!("{}: {}", c.name, c.detail));
    }
    let output = match cli.format {
        Format::Structured => render_json(&json!({
            "name": inst.name(),
            "hash": canonical_hash(inst),
            "reduced": report.reduced,
            "oracle": oracle,
            "checks": checks,
        })),
        Format::Text => {
            let mut s = format!(
                "{}: pipeline reduced {}\noracle: {oracle}\n",
                inst.name(),
                report.reduced
            );
            for c in &checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                let _ = writeln!(s, "[{mark}] {} ({})", c.name, c.detail);
            }
            s
        }
    };
    Ok(Outcome {
        code,
        output,
        diagnostics,
    })
}

fn catalog_line(cli: &Cli, line_no: usize, text: &str) -> (CatalogRecord, i32) {
    let failure = |name: Option<String>, hash: Option<String>, e: &Error| {
        (
            CatalogRecord::Failure(FailureRecord {
                line: line_no,
                name,
                hash,
                error: e.to_string(),
                exit_code: exit_code(e),
            }),
            exit_code(e),
        )
    };
    let doc = match InstanceDocument::parse(text) {
        Ok(d) => d,
        Err(e) => return failure(None, None, &e),
    };
    let inst = match doc.to_instance() {
        Ok(i) => i,
        Err(e) => return failure(Some(doc.name.clone()), None, &e),
    };
    match evaluate(&inst, true, cli) {
        Ok((result, code)) => (CatalogRecord::Result(Box::new(result)), code),
        Err(e) => failure(Some(doc.name), Some(canonical_hash(&inst)), &e),
    }
}

/// Union of two result streams keyed by canonical hash, sorted by hash.
/// Failure records follow, existing ones first. Records with the same
/// hash must agree on every computed value.
pub fn catalog_merge(
    existing: Vec<CatalogRecord>,
    new: Vec<CatalogRecord>,
) -> Result<Vec<CatalogRecord>, Vec<String>> {
    let mut keyed: BTreeMap<String, CatalogRecord> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut conflicts = Vec::new();
    for record in existing.into_iter().chain(new) {
        let CatalogRecord::Result(r) = &record else {
            if !failures.contains(&record) {
                failures.push(record);
            }
            continue;
        };
        match keyed.get(&r.hash) {
            None => {
                keyed.insert(r.hash.clone(), record);
            }
            Some(CatalogRecord::Result(old)) if old.numeric_key() == r.numeric_key() => {}
            Some(old) => conflicts.push(format!(
                "conflict for {}:\n  {}\n  {}",
                r.hash,
                serde_json::to_string(old).unwrap(),
                serde_json::to_string(&record).unwrap()
            )),
        }
    }
    if !conflicts.is_empty() {
        return Err(conflicts);
    }
    Ok(keyed.into_values().chain(failures).collect())
}

fn parse_records(text: &str, origin: &str) -> Result<Vec<CatalogRecord>, Error> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse(format!("{origin}:{}: {e}", i + 1)))
        })
        .collect()
}

fn catalog(cli: &Cli, input: &Path, merge: Option<&Path>) -> Outcome {
    let text = match read_input(input) {
        Ok(t) => t,
        Err(e) => return Outcome::failed(EXIT_INVALID, e.to_string()),
    };
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l))
        .collect();
    let processed: Vec<(CatalogRecord, i32)> = lines
        .par_iter()
        .map(|&(no, l)| catalog_line(cli, no, l))
        .collect();
    let code = processed.iter().map(|(_, c)| *c).max().unwrap_or(EXIT_OK);
    let mut diagnostics: Vec<String> = processed
        .iter()
        .filter_map(|(r, c)| match r {
            CatalogRecord::Failure(f) => Some(format!("line {}: {}", f.line, f.error)),
            CatalogRecord::Result(d) if *c != EXIT_OK => Some(format!("{}: exit {c}", d.name)),
            _ => None,
        })
        .collect();
    let mut records: Vec<CatalogRecord> = processed.into_iter().map(|(r, _)| r).collect();
    if let Some(path) = merge {
        let existing =
            match read_input(path).and_then(|t| parse_records(&t, &path.display().to_string())) {
                Ok(r) => r,
                Err(e) => return Outcome::failed(EXIT_INVALID, e.to_string()),
            };
        match catalog_merge(existing, records) {
            Ok(merged) => records = merged,
            Err(conflicts) => {
                diagnostics.extend(conflicts);
                return Outcome {
                    code: EXIT_REGRESSION,
                    output: String::new(),
                    diagnostics,
                };
            }
        }
    }
    let output: String = records.iter().map(render_json).collect();
    Outcome {
        code,
        output,
        diagnostics,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Catalog { input, merge } => catalog(cli, input, merge.as_deref()),
        Command::Validate { input }
        | Command::Transpose { input }
        | Command::SymmetryGroup { input }
        | Command::DualGroup { input }
        | Command::Euler { input }
        | Command::VerifyDuality { input }
        | Command::OracleCheck { input } => single(cli, input),
    }
}

/// Runs the command and writes its output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    let outcome = run(&cli);
    for d in &outcome.diagnostics {
        eprintln!("bhht: {d}");
    }
    let written = match &cli.output {
        // a failed command leaves an existing output file untouched
        Some(_) if outcome.output.is_empty() && outcome.code != EXIT_OK => Ok(()),
        Some(path) => std::fs::write(path, &outcome.output),
        None => {
            print!("{}", outcome.output);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("bhht: cannot write output: {e}");
        return EXIT_INTERNAL.max(outcome.code);
    }
    outcome.code
}
