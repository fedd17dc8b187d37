//! Command-line front end: JSON problem files in, JSON reports out.
//!
//! Exit codes: 0 success, 1 engine obstruction, 2 input error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{ArithError, Poly, WeightSystem};
use crate::dgalgebra::{check_differential_squares_to_zero, koszul_resolution, DgaError, KoszulData};
use crate::homology::{canonical_homology_dims, milnor_algebra, HomologyError};
use crate::multivec::{index_tuples, MultivecError, Multivector};
use crate::poisson::{build_reduced_structure, jacobi_defect, solve_q, PTensor, PoissonError, QTensor};
use crate::schouten::{is_homotopy_poisson, HomotopyPoisson, SchoutenError};

pub const SCHEMA_VERSION: u64 = 1;
pub const DEFAULT_ORDER: usize = 4;
pub const DEFAULT_DEGREE: u32 = 6;
pub const DEFAULT_WEIGHT_CEILING: u64 = 16;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    KoszulCheck,
    McCheck,
    Lift,
    Defect,
    Milnor,
    CanonicalHomology,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::KoszulCheck => "koszul-check",
            Command::McCheck => "mc-check",
            Command::Lift => "lift",
            Command::Defect => "defect",
            Command::Milnor => "milnor",
            Command::CanonicalHomology => "canonical-homology",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "poisson-koszul", version, about = "Homotopy Poisson structures on complete intersections")]
pub struct Cli {
    pub command: Command,
    /// Problem file (JSON)
    #[arg(long)]
    pub input: PathBuf,
    /// Highest order S of the structure
    #[arg(long)]
    pub order: Option<usize>,
    /// Coefficient degree bound D for unweighted searches
    #[arg(long)]
    pub degree: Option<u32>,
    /// Highest weight examined by milnor, koszul-check and canonical-homology
    #[arg(long)]
    pub weight_ceiling: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid problem file: {0}")]
    Schema(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Dga(#[from] DgaError),
    #[error(transparent)]
    Multivec(#[from] MultivecError),
    #[error(transparent)]
    Schouten(#[from] SchoutenError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Poisson(e) if e.is_obstruction() => 1,
            CliError::Homology(HomologyError::InfiniteDimensional { .. })
            | CliError::Homology(HomologyError::BracketDoesNotDescend { .. }) => 1,
            CliError::Homology(HomologyError::Poisson(e)) if e.is_obstruction() => 1,
            _ => 2,
        }
    }

    fn kind(&self) -> &'static str {
        if self.exit_code() == 1 {
            "obstructed"
        } else {
            "input"
        }
    }
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IndexedEntry {
    /// 1-based, strictly increasing
    pub indices: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TupleEntry {
    pub args: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Options {
    pub order: Option<usize>,
    pub degree: Option<u32>,
    pub weight_ceiling: Option<u64>,
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub variables: Vec<String>,
    #[serde(default)]
    pub odd_names: Option<Vec<String>>,
    #[serde(default)]
    pub weights: Option<Vec<u64>>,
    #[serde(default)]
    pub equations: Vec<String>,
    #[serde(default)]
    pub p: Option<Vec<IndexedEntry>>,
    #[serde(default)]
    pub q: Option<Vec<IndexedEntry>>,
    /// Keyed by order, e.g. `"2"`.
    #[serde(default)]
    pub components: Option<BTreeMap<String, Vec<TupleEntry>>>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub order: usize,
    pub degree: u32,
    pub weight_ceiling: u64,
}

impl Settings {
    /// Command-line flags override file options, which override defaults.
    pub fn resolve(file: &Options, order: Option<usize>, degree: Option<u32>, ceiling: Option<u64>) -> Self {
        Settings {
            order: order.or(file.order).unwrap_or(DEFAULT_ORDER),
            degree: degree.or(file.degree).unwrap_or(DEFAULT_DEGREE),
            weight_ceiling: ceiling.or(file.weight_ceiling).unwrap_or(DEFAULT_WEIGHT_CEILING),
        }
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings::resolve(&Options::default(), None, None, None)
    }
}

/// A report and the exit code it should be emitted with.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, CliError> {
    Ok(serde_json::from_str(text)?)
}

impl ProblemFile {
    pub fn algebra(&self) -> Result<Arc<KoszulData>, CliError> {
        let eqs = self
            .equations
            .iter()
            .map(|s| Poly::parse(s, &self.variables))
            .collect::<Result<Vec<_>, _>>()?;
        let weights = self.weights.clone().map(WeightSystem::new).transpose()?;
        let alg = match &self.odd_names {
            Some(names) => {
                if names.len() != eqs.len() {
                    return Err(CliError::Schema(format!(
                        "{} odd names for {} equations",
                        names.len(),
                        eqs.len()
                    )));
                }
                KoszulData::with_names(eqs, self.variables.clone(), names.clone(), weights)?
            }
            None => koszul_resolution(eqs, self.variables.clone(), weights)?,
        };
        Ok(Arc::new(alg))
    }

    fn tensor(&self, entries: &[IndexedEntry], arity: usize, what: &str) -> Result<PTensor, CliError> {
        let n = self.variables.len();
        let mut t = PTensor::new(arity, n);
        for e in entries {
            if e.indices.len() != arity {
                return Err(CliError::Schema(format!(
                    "{what} entry {:?} needs {arity} indices",
                    e.indices
                )));
            }
            let increasing = e.indices.windows(2).all(|w| w[0] < w[1]);
            if !increasing || e.indices.iter().any(|&i| i == 0 || i > n) {
                return Err(CliError::Schema(format!(
                    "{what} indices {:?} must be strictly increasing in 1..={n}",
                    e.indices
                )));
            }
            let idx: Vec<usize> = e.indices.iter().map(|i| i - 1).collect();
            t.add(&idx, Poly::parse(&e.value, &self.variables)?)?;
        }
        Ok(t)
    }

    /// `p` with arity `2 + m`; zero when absent.
    pub fn p_tensor(&self) -> Result<PTensor, CliError> {
        self.tensor(self.p.as_deref().unwrap_or(&[]), 2 + self.equations.len(), "p")
    }

    pub fn q_tensor(&self) -> Result<QTensor, CliError> {
        self.tensor(self.q.as_deref().unwrap_or(&[]), 3 + self.equations.len(), "q")
    }

    pub fn structure(&self, alg: &Arc<KoszulData>) -> Result<HomotopyPoisson, CliError> {
        let mut pi = HomotopyPoisson::new(alg.clone());
        for (key, entries) in self.components.iter().flatten() {
            let order: usize = key
                .parse()
                .map_err(|_| CliError::Schema(format!("component key `{key}` is not an order")))?;
            let mut table = Vec::new();
            for e in entries {
                let tuple = e
                    .args
                    .iter()
                    .map(|a| {
                        alg.generator_index(a)
                            .ok_or_else(|| CliError::Schema(format!("unknown generator `{a}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                table.push((tuple, alg.parse(&e.value)?));
            }
            pi.insert(Multivector::from_values(alg.clone(), order, 2, table)?)?;
        }
        Ok(pi)
    }
}

fn weights_of(alg: &KoszulData) -> Result<&WeightSystem, CliError> {
    alg.weights()
        .ok_or_else(|| CliError::Schema("this command needs `weights`".into()))
}

fn index_list(idx: &[usize]) -> Value {
    json!(idx.iter().map(|i| i + 1).collect::<Vec<_>>())
}

fn tensor_json(t: &PTensor, alg: &KoszulData) -> Value {
    Value::Array(
        t.values()
            .iter()
            .map(|(idx, v)| json!({"indices": index_list(idx), "value": alg.format_poly(v)}))
            .collect(),
    )
}

fn multivector_json(pi: &Multivector) -> Value {
    let alg = pi.algebra();
    Value::Array(
        pi.values()
            .iter()
            .map(|(t, v)| json!({"args": pi.format_tuple(t), "value": alg.format(v)}))
            .collect(),
    )
}

fn structure_json(pi: &HomotopyPoisson) -> Value {
    let mut out = serde_json::Map::new();
    for (s, c) in pi.components() {
        out.insert(s.to_string(), multivector_json(c));
    }
    Value::Object(out)
}

fn koszul_check(file: &ProblemFile, st: Settings) -> Result<Outcome, CliError> {
    let alg = file.algebra()?;
    weights_of(&alg)?;
    let bad = check_differential_squares_to_zero(&alg, st.weight_ceiling)?;
    let mut rows = Vec::new();
    let mut acyclic = true;
    for k in 0..=alg.nodd() {
        for w in 0..=st.weight_ceiling {
            let r = alg.homology_rank(k, w)?;
            if k > 0 && r > 0 {
                acyclic = false;
            }
            if r > 0 {
                rows.push(json!({"k": k, "w": w, "rank": r}));
            }
        }
    }
    Ok(Outcome {
        report: json!({
            "acyclic": acyclic,
            "differential_squares_to_zero": bad.is_none(),
            "homology": rows,
            "weight_ceiling": st.weight_ceiling,
        }),
        code: if bad.is_none() { 0 } else { 1 },
    })
}

fn mc_check(file: &ProblemFile, st: Settings) -> Result<Outcome, CliError> {
    let alg = file.algebra()?;
    let pi = file.structure(&alg)?;
    let report = is_homotopy_poisson(&pi, st.order);
    let residuals: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            json!({
                "args": alg_tuple(&alg, &e.tuple),
                "order": e.order,
                "value": alg.format(&e.value),
            })
        })
        .collect();
    Ok(Outcome {
        report: json!({"holds": report.holds(), "max_order": st.order, "residuals": residuals}),
        code: if report.holds() { 0 } else { 1 },
    })
}

fn alg_tuple(alg: &KoszulData, t: &[usize]) -> Vec<String> {
    t.iter().map(|&g| alg.generator_name(g).to_string()).collect()
}

fn lift(file: &ProblemFile, st: Settings) -> Result<Outcome, CliError> {
    let alg = file.algebra()?;
    let p = file.p_tensor()?;
    let pi = build_reduced_structure(&p, alg, st.order, st.degree)?;
    let report = is_homotopy_poisson(&pi, st.order);
    let mut checks = Vec::new();
    for s in 2..=st.order {
        let zero = report.entries.iter().all(|e| e.order != s);
        checks.push(json!({"order": s, "residual_zero": zero}));
    }
    Ok(Outcome {
        report: json!({
            "components": structure_json(&pi),
            "degree_bound": st.degree,
            "max_order": st.order,
            "residuals": checks,
        }),
        code: 0,
    })
}

fn defect(file: &ProblemFile, st: Settings) -> Result<Outcome, CliError> {
    let alg = file.algebra()?;
    let p = file.p_tensor()?;
    let h = alg.equations();
    let mut defects = Vec::new();
    for t in index_tuples(alg.nvars(), 3) {
        let d = jacobi_defect(&p, h, [t[0], t[1], t[2]])?;
        if !d.is_zero() {
            defects.push(json!({"indices": index_list(&t), "value": alg.format_poly(&d)}));
        }
    }
    let mut report = json!({"defects": defects});
    let code = match solve_q(&p, h, alg.weights(), st.degree) {
        Ok(q) => {
            report["q"] = tensor_json(&q, &alg);
            0
        }
        Err(e) if e.is_obstruction() => {
            report["obstruction"] = json!(e.to_string());
            1
        }
        Err(e) => return Err(e.into()),
    };
    Ok(Outcome { report, code })
}

fn milnor(file: &ProblemFile, st: Settings) -> Result<Outcome, CliError> {
    let alg = file.algebra()?;
    let w = weights_of(&alg)?;
    let [h] = alg.equations() else {
        return Err(CliError::Schema("milnor needs exactly one equation".into()));
    };
    let m = milnor_algebra(h, w, st.weight_ceiling)?;
    let blocks: Vec<Value> = m
        .blocks
        .iter()
        .map(|(wt, b)| {
            let basis: Vec<String> = b
                .iter()
                .map(|mono| alg.format_poly(&Poly::term(mono.clone(), num_traits::One::one())))
                .collect();
            json!({"w": wt, "basis": basis})
        })
        .collect();
    Ok(Outcome {
        report: json!({"blocks": blocks, "mu": m.mu(), "stabilized_at": m.stabilized_at}),
        code: 0,
    })
}

fn canonical_homology(file: &ProblemFile, st: Settings) -> Result<Outcome, CliError> {
    let alg = file.algebra()?;
    weights_of(&alg)?;
    let p = file.p_tensor()?;
    let hc = canonical_homology_dims(&alg, &p, 0..=alg.nvars(), st.weight_ceiling)?;
    let rows: Vec<Value> = hc
        .rows
        .iter()
        .map(|(k, w, d)| json!({"k": k, "w": w, "dim": d}))
        .collect();
    let totals: Vec<Value> = hc
        .totals
        .iter()
        .map(|(k, t)| json!({"k": k, "total_dim_up_to_w": t}))
        .collect();
    Ok(Outcome {
        report: json!({
            "rows": rows,
            "shift": hc.shift,
            "totals": totals,
            "weight_ceiling": st.weight_ceiling,
        }),
        code: 0,
    })
}

/// Runs one command; errors become an error report with their exit code.
pub fn execute(command: Command, file: &ProblemFile, st: Settings) -> Outcome {
    let result = match command {
        Command::KoszulCheck => koszul_check(file, st),
        Command::McCheck => mc_check(file, st),
        Command::Lift => lift(file, st),
        Command::Defect => defect(file, st),
        Command::Milnor => milnor(file, st),
        Command::CanonicalHomology => canonical_homology(file, st),
    };
    let mut out = result.unwrap_or_else(error_outcome);
    out.report["schema"] = json!(SCHEMA_VERSION);
    out.report["command"] = json!(command.name());
    out
}

fn error_outcome(e: CliError) -> Outcome {
    Outcome {
        report: json!({"error": {"kind": e.kind(), "message": e.to_string()}}),
        code: e.exit_code(),
    }
}

/// Serializes with sorted keys and a trailing newline.
pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("values serialize");
    s.push('\n');
    s
}

/// Full command-line entry point; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match std::fs::read_to_string(&cli.input)
        .map_err(|e| CliError::Io {
            path: cli.input.display().to_string(),
            message: e.to_string(),
        })
        .and_then(|text| parse_problem(&text))
    {
        Ok(file) => {
            let st = Settings::resolve(&file.options, cli.order, cli.degree, cli.weight_ceiling);
            execute(cli.command, &file, st)
        }
        Err(e) => {
            let mut o = error_outcome(e);
            o.report["schema"] = json!(SCHEMA_VERSION);
            o.report["command"] = json!(cli.command.name());
            o
        }
    };
    if let Some(msg) = outcome.report.get("error").and_then(|e| e.get("message")) {
        eprintln!("error: {}", msg.as_str().unwrap_or_default());
    }
    let text = render(&outcome.report);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    outcome.code
}
