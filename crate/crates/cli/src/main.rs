//! Command-line surface for the discrete phase-space pipeline: enumerate
//! epistemic states, check Frobenius/groupoid structure, quantize states to
//! stabilizer projectors, and compare the two theories numerically.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use epistrict::epistricted::{enumerate_pure_states_guarded, to_ontic, EpistemicState};
use epistrict::fplinalg::{
    enumerate_lagrangians_guarded, rref, FpSubspace, FpVector, PrimeField,
};
use epistrict::groupoids::groupoid_from_frobenius;
use epistrict::quantize::{
    lagrangian_pvm, operational_equivalence_report_guarded, stabilizer_projector, wigner,
    wigner_csv, CMatrix, PhaseFn,
};
use epistrict::relcat::{build_spek_algebra, read_algebra, verify_compact, verify_frobenius};
use epistrict::ENUMERATION_GUARD;

const EXIT_AXIOM_FAILURE: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;
const EXIT_OBSTRUCTION: u8 = 3;

/// Exact toy theory over odd prime fields and its quantization.
///
/// ASCII grids draw the phase space with momentum rows descending and
/// position columns ascending; `X` marks a supported point. Wigner CSV grids
/// use rows = position ascending, columns = momentum ascending. The
/// environment variable EPISTRICT_GUARD overrides the enumeration guard
/// (default 10^6 phase-space points). Exit codes: 0 success, 1 axiom or
/// equivalence failure, 2 invalid input or parse error, 3 even-field
/// obstruction (the construction divides by two, which is impossible in
/// characteristic 2).
#[derive(Parser)]
#[command(name = "epistrict", version, about)]
struct Cli {
    /// Field order (an odd prime)
    #[arg(long, global = true, default_value_t = 3)]
    d: u64,
    /// Degrees of freedom
    #[arg(long, global = true, default_value_t = 1)]
    n: usize,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    /// Tolerance for floating-point checks and stored matrix tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Ascii,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate all pure epistemic states (and the quadrature subspaces)
    States,
    /// Verify the Frobenius axioms (F)(M)(A)(U) and compactness (C), then
    /// summarize the extracted groupoid
    Check {
        /// Algebra file (two REL blocks: m then e); defaults to the built-in
        /// block algebra for the chosen d
        #[arg(long)]
        algebra: Option<PathBuf>,
        /// Write the extracted groupoid as edge-list text (OBJ/ARR/CMP lines)
        #[arg(long)]
        export_groupoid: Option<PathBuf>,
    },
    /// Emit stabilizer projectors, the subspace PVM and Wigner grids
    Quantize {
        /// State selector `b1,b2,...[|b1,b2,...];v1,v2,...`: basis vectors of
        /// the known subspace, then the valuation vector
        #[arg(long, conflicts_with = "all")]
        state: Option<String>,
        /// Quantize every pure state
        #[arg(long)]
        all: bool,
    },
    /// Compare Wigner functions and Born probabilities against the exact toy
    /// theory over every pure state and Lagrangian observable
    Equivalence,
}

enum CliError {
    Obstruction(String),
    Input(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Obstruction(_) => EXIT_OBSTRUCTION,
            CliError::Input(_) => EXIT_INPUT_ERROR,
            CliError::Failure(_) => EXIT_AXIOM_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Obstruction(m) | CliError::Input(m) | CliError::Failure(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn field_of(d: u64) -> Result<PrimeField, CliError> {
    if d.is_multiple_of(2) {
        return Err(CliError::Obstruction(format!(
            "d = {d} rejected: the construction requires division by two, which has no inverse in characteristic 2; choose an odd prime"
        )));
    }
    PrimeField::new(d).map_err(|e| CliError::Input(e.to_string()))
}

fn guard() -> u64 {
    std::env::var("EPISTRICT_GUARD")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(ENUMERATION_GUARD)
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let field = field_of(cli.d)?;
    match &cli.command {
        Command::States => cmd_states(cli, field),
        Command::Check { algebra, export_groupoid } => {
            cmd_check(cli, field, algebra.as_deref(), export_groupoid.as_deref())
        }
        Command::Quantize { state, all } => cmd_quantize(cli, field, state.as_deref(), *all),
        Command::Equivalence => cmd_equivalence(cli, field),
    }
}

// ---------------------------------------------------------------------------
// states
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct StateJson {
    basis: Vec<Vec<u64>>,
    valuation: Vec<u64>,
    support: Vec<Vec<u64>>,
}

#[derive(Serialize)]
struct StatesJson {
    d: u64,
    n: usize,
    lagrangian_count: usize,
    state_count: usize,
    states: Vec<StateJson>,
}

fn state_json(state: &EpistemicState) -> StateJson {
    let support = to_ontic(state)
        .support()
        .iter()
        .map(|m| m.coords().to_vec())
        .collect();
    StateJson {
        basis: state.known().basis().iter().map(|b| b.coords().to_vec()).collect(),
        valuation: state.valuation().coords().to_vec(),
        support,
    }
}

/// Phase-space grid for one degree of freedom: momentum rows descending,
/// position columns ascending.
fn ascii_grid(field: PrimeField, support: &[FpVector]) -> String {
    let d = field.order();
    let marked: Vec<(u64, u64)> = support.iter().map(|m| (m.coords()[0], m.coords()[1])).collect();
    let mut out = String::new();
    for p in (0..d).rev() {
        for q in 0..d {
            out.push(if marked.contains(&(q, p)) { 'X' } else { '.' });
        }
        out.push('\n');
    }
    out
}

fn cmd_states(cli: &Cli, field: PrimeField) -> Result<(), CliError> {
    let lagrangians = enumerate_lagrangians_guarded(field, cli.n, guard())
        .map_err(|e| CliError::Input(e.to_string()))?;
    let states = enumerate_pure_states_guarded(field, cli.n, guard())
        .map_err(|e| CliError::Input(e.to_string()))?;
    match cli.format {
        Format::Json => {
            let doc = StatesJson {
                d: field.order(),
                n: cli.n,
                lagrangian_count: lagrangians.len(),
                state_count: states.len(),
                states: states.iter().map(state_json).collect(),
            };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Csv => {
            println!("index,basis,valuation,support");
            for (i, s) in states.iter().enumerate() {
                let j = state_json(s);
                println!(
                    "{i},{},{},{}",
                    join_vecs(&j.basis, "|"),
                    join_u64(&j.valuation),
                    join_vecs(&j.support, "|")
                );
            }
        }
        Format::Ascii => {
            println!(
                "d={} n={}: {} quadrature subspaces, {} pure epistemic states",
                field.order(),
                cli.n,
                lagrangians.len(),
                states.len()
            );
            for (i, s) in states.iter().enumerate() {
                println!("state {i}: V = {}, v = {}", s.known(), s.valuation());
                if cli.n == 1 {
                    print!("{}", ascii_grid(field, &to_ontic(s).support()));
                } else {
                    let pts = to_ontic(s)
                        .support()
                        .iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    println!("support: {pts}");
                }
            }
        }
    }
    Ok(())
}

fn join_u64(v: &[u64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn join_vecs(vs: &[Vec<u64>], sep: &str) -> String {
    vs.iter().map(|v| join_u64(v)).collect::<Vec<_>>().join(sep)
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CheckJson {
    source: String,
    carrier: usize,
    axioms: BTreeMap<String, bool>,
    groupoid: Option<GroupoidJson>,
}

#[derive(Serialize)]
struct GroupoidJson {
    objects: usize,
    arrows: usize,
    object_labels: Vec<String>,
}

fn cmd_check(
    cli: &Cli,
    field: PrimeField,
    algebra: Option<&std::path::Path>,
    export_groupoid: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let (source, alg) = match algebra {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            let alg = read_algebra(&text).map_err(|e| CliError::Input(e.to_string()))?;
            (path.display().to_string(), alg)
        }
        None => ("builtin".to_string(), build_spek_algebra(field)),
    };
    let report = verify_frobenius(&alg);
    let compact = verify_compact(&alg);
    let mut axioms = BTreeMap::new();
    axioms.insert("F".to_string(), report.frobenius);
    axioms.insert("M".to_string(), report.special);
    axioms.insert("A".to_string(), report.associative);
    axioms.insert("U".to_string(), report.unital);
    axioms.insert("C".to_string(), compact);
    let all_pass = report.all() && compact;
    let groupoid = if all_pass {
        let g = groupoid_from_frobenius(&alg).map_err(|e| CliError::Failure(e.to_string()))?;
        if let Some(path) = export_groupoid {
            std::fs::write(path, epistrict::groupoids::write_groupoid(&g))
                .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        Some(GroupoidJson {
            objects: g.objects().size(),
            arrows: g.arrows().size(),
            object_labels: g.objects().labels().to_vec(),
        })
    } else {
        None
    };
    let doc = CheckJson { source, carrier: alg.carrier().size(), axioms, groupoid };
    match cli.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).expect("serializable")),
        Format::Csv => {
            println!("axiom,pass");
            for (name, pass) in &doc.axioms {
                println!("{name},{pass}");
            }
            if let Some(g) = &doc.groupoid {
                println!("objects,{}", g.objects);
                println!("arrows,{}", g.arrows);
            }
        }
        Format::Ascii => {
            println!("algebra: {} (carrier {})", doc.source, doc.carrier);
            for name in ["F", "M", "A", "U", "C"] {
                println!("({name}) {}", if doc.axioms[name] { "pass" } else { "FAIL" });
            }
            if let Some(g) = &doc.groupoid {
                println!(
                    "groupoid: {} objects {{{}}}, {} arrows",
                    g.objects,
                    g.object_labels.join(", "),
                    g.arrows
                );
            }
        }
    }
    if all_pass {
        Ok(())
    } else {
        let failed: Vec<&str> = [
            ("F", report.frobenius),
            ("M", report.special),
            ("A", report.associative),
            ("U", report.unital),
            ("C", compact),
        ]
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(name, _)| *name)
        .collect();
        Err(CliError::Failure(format!("axioms failed: {}", failed.join(", "))))
    }
}

// ---------------------------------------------------------------------------
// quantize
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct QuantizedStateJson {
    basis: Vec<Vec<u64>>,
    valuation: Vec<u64>,
    projector: serde_json::Value,
    pvm_labels: Vec<Vec<u64>>,
    pvm_projectors: Vec<serde_json::Value>,
    /// Wigner grid, rows = position ascending, columns = momentum ascending.
    wigner: Vec<Vec<f64>>,
}

fn parse_state_spec(
    field: PrimeField,
    n: usize,
    spec: &str,
) -> Result<(FpSubspace, FpVector), CliError> {
    let bad = |msg: &str| CliError::Input(format!("bad --state {spec:?}: {msg}"));
    let (basis_part, valuation_part) = spec
        .split_once(';')
        .ok_or_else(|| bad("expected `basis;valuation`"))?;
    let parse_vec = |text: &str| -> Result<FpVector, CliError> {
        let coords: Vec<u64> = text
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|e| bad(&e.to_string())))
            .collect::<Result<_, _>>()?;
        if coords.len() != 2 * n {
            return Err(bad(&format!("vector {text:?} must have {} coordinates", 2 * n)));
        }
        FpVector::new(field, coords).map_err(|e| bad(&e.to_string()))
    };
    let basis: Vec<FpVector> = basis_part
        .split('|')
        .map(parse_vec)
        .collect::<Result<_, _>>()?;
    let v_sub = rref(field, 2 * n, &basis).map_err(|e| bad(&e.to_string()))?;
    let valuation = parse_vec(valuation_part)?;
    Ok((v_sub, valuation))
}

struct QuantizedState {
    state: EpistemicState,
    projector: CMatrix,
    pvm_labels: Vec<Vec<u64>>,
    pvm_projectors: Vec<CMatrix>,
    wigner: PhaseFn,
}

fn quantize_one(
    cli: &Cli,
    field: PrimeField,
    v_sub: &FpSubspace,
    valuation: &FpVector,
) -> Result<QuantizedState, CliError> {
    if !v_sub.is_isotropic() {
        return Err(CliError::Input(format!(
            "subspace {v_sub} is not isotropic; its variables are not jointly knowable"
        )));
    }
    let state = EpistemicState::new(v_sub.clone(), valuation.clone())
        .map_err(|e| CliError::Input(e.to_string()))?;
    let projector = stabilizer_projector(state.known(), state.valuation())
        .map_err(|e| CliError::Input(e.to_string()))?
        .with_tol(cli.tol);
    let pvm = lagrangian_pvm(state.known()).map_err(|e| CliError::Input(e.to_string()))?;
    let wigner = wigner(&projector, field, cli.n).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(QuantizedState {
        state,
        projector,
        pvm_labels: pvm.labels().to_vec(),
        pvm_projectors: pvm.projectors().to_vec(),
        wigner,
    })
}

fn wigner_rows(w: &PhaseFn) -> Vec<Vec<f64>> {
    let field = w.field();
    let d = field.order();
    (0..d)
        .map(|x| (0..d).map(|b| w.at(&[x], &[b]).re).collect())
        .collect()
}

fn cmd_quantize(cli: &Cli, field: PrimeField, spec: Option<&str>, all: bool) -> Result<(), CliError> {
    let selected: Vec<(FpSubspace, FpVector)> = if all {
        enumerate_pure_states_guarded(field, cli.n, guard())
            .map_err(|e| CliError::Input(e.to_string()))?
            .into_iter()
            .map(|s| (s.known().clone(), s.valuation().clone()))
            .collect()
    } else {
        let spec = spec.ok_or_else(|| {
            CliError::Input("pass --state `basis;valuation` or --all".to_string())
        })?;
        vec![parse_state_spec(field, cli.n, spec)?]
    };

    let mut docs = Vec::new();
    for (v_sub, valuation) in &selected {
        docs.push(quantize_one(cli, field, v_sub, valuation)?);
    }

    match cli.format {
        Format::Json => {
            let states: Vec<QuantizedStateJson> = docs
                .iter()
                .map(|q| QuantizedStateJson {
                    basis: q.state.known().basis().iter().map(|b| b.coords().to_vec()).collect(),
                    valuation: q.state.valuation().coords().to_vec(),
                    projector: q.projector.to_json(),
                    pvm_labels: q.pvm_labels.clone(),
                    pvm_projectors: q
                        .pvm_projectors
                        .iter()
                        .map(|p| p.clone().with_tol(cli.tol).to_json())
                        .collect(),
                    wigner: wigner_rows(&q.wigner),
                })
                .collect();
            let doc = serde_json::json!({
                "d": field.order(),
                "n": cli.n,
                "states": states,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Csv => {
            for q in &docs {
                println!("# V = {}, v = {}", q.state.known(), q.state.valuation());
                print!("{}", wigner_csv(&q.wigner).map_err(|e| CliError::Input(e.to_string()))?);
            }
        }
        Format::Ascii => {
            for q in &docs {
                println!("state: V = {}, v = {}", q.state.known(), q.state.valuation());
                println!(
                    "projector (dim {}, rank {}):",
                    q.projector.dim(),
                    q.projector.projector_rank()
                );
                for r in 0..q.projector.dim() {
                    let row: Vec<String> = (0..q.projector.dim())
                        .map(|c| {
                            let z = q.projector.get(r, c);
                            format!("{:+.4}{:+.4}i", z.re, z.im)
                        })
                        .collect();
                    println!("  [{}]", row.join(", "));
                }
                println!("pvm outcomes: {}", join_vecs(&q.pvm_labels, " | "));
                println!("wigner (rows = position, cols = momentum):");
                for row in wigner_rows(&q.wigner) {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:+.6}")).collect();
                    println!("  {}", cells.join(" "));
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// equivalence
// ---------------------------------------------------------------------------

fn cmd_equivalence(cli: &Cli, field: PrimeField) -> Result<(), CliError> {
    let report = operational_equivalence_report_guarded(field, cli.n, cli.tol, guard())
        .map_err(|e| CliError::Input(e.to_string()))?;
    match cli.format {
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"))
        }
        Format::Csv => {
            println!("key,value");
            println!("d,{}", report.d);
            println!("n,{}", report.n);
            println!("states,{}", report.states);
            println!("observables,{}", report.observables);
            println!("born_cases,{}", report.born_cases);
            println!("max_wigner_dev,{:e}", report.max_wigner_dev);
            println!("max_born_dev,{:e}", report.max_born_dev);
            println!("min_wigner,{:e}", report.min_wigner);
            println!("pass,{}", report.pass);
        }
        Format::Ascii => {
            println!(
                "operational equivalence at d={}, n={}: {} states x {} observables ({} born cases)",
                report.d, report.n, report.states, report.observables, report.born_cases
            );
            println!(
                "max wigner deviation {:.3e}, max born deviation {:.3e}, min wigner value {:.3e}",
                report.max_wigner_dev, report.max_born_dev, report.min_wigner
            );
            println!("{}", if report.pass { "PASS" } else { "FAIL" });
        }
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "equivalence failed: wigner dev {:.3e}, born dev {:.3e} exceed tol {:.1e}",
            report.max_wigner_dev, report.max_born_dev, report.tol
        )))
    }
}
