//! Problem files.
//!
//! A problem is one TOML document: a semiring name, the variables with
//! their frames, the factors, and optional solver options. Dense factor
//! tables are flat lists in the declared scope order, row-major with the
//! last scope variable varying fastest; sparse factors list explicit
//! `(assignment, value)` entries instead.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;

use valuation::{
    Configuration, Domain, EliminationOrder, Picker, RealSparse, RealTable, Semiring, Var,
    VariableSystem, SOLUTION_CAP,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    semiring: String,
    variables: Vec<VariableDecl>,
    factors: Vec<FactorDecl>,
    #[serde(default)]
    options: OptionsDecl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VariableDecl {
    name: String,
    frame: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorDecl {
    scope: Vec<String>,
    table: Option<Vec<f64>>,
    entries: Option<Vec<EntryDecl>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryDecl {
    assignment: Vec<String>,
    value: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsDecl {
    heuristic: Option<String>,
    elimination_order: Option<Vec<String>>,
    picker: Option<String>,
    cap: Option<usize>,
}

/// Solver options after validation.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub order: EliminationOrder,
    pub picker: Picker,
    pub cap: usize,
}

/// A loaded problem, bound to one concrete algebra.
pub enum Problem {
    Dense {
        system: Arc<VariableSystem>,
        semiring: Semiring,
        factors: Vec<RealTable>,
        options: SolverOptions,
    },
    Sparse {
        system: Arc<VariableSystem>,
        factors: Vec<RealSparse>,
        options: SolverOptions,
    },
}

impl Problem {
    pub fn system(&self) -> &Arc<VariableSystem> {
        match self {
            Problem::Dense { system, .. } | Problem::Sparse { system, .. } => system,
        }
    }

    pub fn options(&self) -> &SolverOptions {
        match self {
            Problem::Dense { options, .. } | Problem::Sparse { options, .. } => options,
        }
    }
}

pub fn load(path: &Path) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file: ProblemFile = toml::from_str(&text)
        .map_err(|e| format!("parse error in {}:\n{e}", path.display()))?;
    build(file).map_err(|e| format!("invalid problem in {}: {e}", path.display()))
}

fn build(file: ProblemFile) -> Result<Problem, String> {
    let mut seen = BTreeMap::new();
    for decl in &file.variables {
        if seen.insert(decl.name.clone(), ()).is_some() {
            return Err(format!("variable '{}' is declared twice", decl.name));
        }
        if decl.frame.is_empty() {
            return Err(format!("variable '{}' has an empty frame", decl.name));
        }
    }
    let system = Arc::new(
        VariableSystem::new(
            file.variables
                .iter()
                .map(|d| (Var::new(d.name.clone()), d.frame.clone())),
        )
        .map_err(|e| e.to_string())?,
    );

    let options = build_options(&file.options, &system)?;

    if file.semiring == "sparse-max-times" {
        let mut factors = Vec::new();
        for (k, decl) in file.factors.iter().enumerate() {
            factors.push(build_sparse_factor(k, decl, &system)?);
        }
        return Ok(Problem::Sparse { system, factors, options });
    }

    let semiring: Semiring = file.semiring.parse().map_err(|e: String| {
        format!("{e}; expected boolean, max-plus, min-plus, max-times or sparse-max-times")
    })?;
    let mut factors = Vec::new();
    for (k, decl) in file.factors.iter().enumerate() {
        factors.push(build_dense_factor(k, decl, semiring, &system)?);
    }
    Ok(Problem::Dense { system, semiring, factors, options })
}

fn build_options(
    decl: &OptionsDecl,
    system: &Arc<VariableSystem>,
) -> Result<SolverOptions, String> {
    let given_order = match &decl.elimination_order {
        None => None,
        Some(names) => {
            let mut vars = Vec::new();
            for name in names {
                let var = Var::new(name.clone());
                if !system.contains(&var) {
                    return Err(format!("elimination order names unknown variable '{name}'"));
                }
                vars.push(var);
            }
            Some(EliminationOrder::Given(vars))
        }
    };
    let order = match decl.heuristic.as_deref() {
        None => given_order.unwrap_or(EliminationOrder::MinDegree),
        Some("min-degree") => EliminationOrder::MinDegree,
        Some("min-fill") => EliminationOrder::MinFill,
        Some("given") => given_order
            .ok_or("heuristic 'given' requires options.elimination_order".to_string())?,
        Some(other) => {
            return Err(format!(
                "unknown heuristic '{other}'; expected min-degree, min-fill or given"
            ))
        }
    };
    let picker = match decl.picker.as_deref() {
        None | Some("lexicographic") => Picker::Lexicographic,
        Some("first-found") => Picker::FirstFound,
        Some(other) => {
            return Err(format!(
                "unknown picker '{other}'; expected lexicographic or first-found"
            ))
        }
    };
    Ok(SolverOptions { order, picker, cap: decl.cap.unwrap_or(SOLUTION_CAP) })
}

/// The declared scope as variables, rejecting unknown names and repeats.
fn scope_vars(k: usize, decl: &FactorDecl, system: &VariableSystem) -> Result<Vec<Var>, String> {
    let mut vars = Vec::new();
    for name in &decl.scope {
        let var = Var::new(name.clone());
        if !system.contains(&var) {
            return Err(format!("factor #{k} names unknown variable '{name}'"));
        }
        if vars.contains(&var) {
            return Err(format!("factor #{k} repeats variable '{name}' in its scope"));
        }
        vars.push(var);
    }
    Ok(vars)
}

fn build_dense_factor(
    k: usize,
    decl: &FactorDecl,
    semiring: Semiring,
    system: &Arc<VariableSystem>,
) -> Result<RealTable, String> {
    if decl.entries.is_some() {
        return Err(format!(
            "factor #{k} has sparse entries but the semiring is dense; use semiring = \"sparse-max-times\""
        ));
    }
    let table = decl
        .table
        .as_ref()
        .ok_or(format!("factor #{k} is missing its table"))?;
    let vars = scope_vars(k, decl, system)?;
    let sizes: Vec<usize> = vars
        .iter()
        .map(|v| system.frame_size(v).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let expected: usize = sizes.iter().product();
    if table.len() != expected {
        return Err(format!(
            "factor #{k} over ({}) needs {expected} values, got {}",
            decl.scope.join(", "),
            table.len()
        ));
    }

    // decode the file layout (declared order, last variable fastest) into
    // per-configuration values, then rebuild in canonical layout
    let mut values = BTreeMap::new();
    for (idx, &value) in table.iter().enumerate() {
        let mut rem = idx;
        let mut cfg = Vec::with_capacity(vars.len());
        for (v, &size) in vars.iter().zip(&sizes).rev() {
            cfg.push((v.clone(), rem % size));
            rem /= size;
        }
        values.insert(Configuration::new(cfg), value);
    }
    let scope: Domain = vars.into_iter().collect();
    RealTable::from_fn(system.clone(), semiring, scope, |cfg| values[cfg])
        .map_err(|e| format!("factor #{k}: {e}"))
}

fn build_sparse_factor(
    k: usize,
    decl: &FactorDecl,
    system: &Arc<VariableSystem>,
) -> Result<RealSparse, String> {
    if decl.table.is_some() {
        return Err(format!(
            "factor #{k} has a dense table but the semiring is sparse-max-times; list entries instead"
        ));
    }
    let vars = scope_vars(k, decl, system)?;
    let mut entries = Vec::new();
    for (e, entry) in decl.entries.as_deref().unwrap_or(&[]).iter().enumerate() {
        if entry.assignment.len() != vars.len() {
            return Err(format!(
                "factor #{k} entry #{e} assigns {} values to {} variables",
                entry.assignment.len(),
                vars.len()
            ));
        }
        let mut cfg = Vec::new();
        for (v, label) in vars.iter().zip(&entry.assignment) {
            let idx = system
                .value_index(v, label)
                .map_err(|err| format!("factor #{k} entry #{e}: {err}"))?;
            cfg.push((v.clone(), idx));
        }
        entries.push((Configuration::new(cfg), entry.value));
    }
    let scope: Domain = vars.into_iter().collect();
    RealSparse::new(system.clone(), scope, entries).map_err(|e| format!("factor #{k}: {e}"))
}
