//! Command dispatch: every check and computation of the core library,
//! exposed over the problem-document format with deterministic JSON output
//! and the exit-status contract (0 = true/success, 1 = false/absent,
//! 2 = input error).

use crate::document::{matrix_to_strings, vector_to_strings, CompiledDocument};
use rba_core::cohomology::{self, Cochain};
use rba_core::deformation::{self, DeformationSeries};
use rba_core::fixtures::pseudo_random_cochain;
use rba_core::graded_lie;
use rba_core::linalg::{format_rat, parse_rat, Rat};
use rba_core::rota_baxter::{self, LinearOperator, SearchOptions};
use serde_json::{json, Value};
use thiserror::Error;

/// Options shared by every command.
#[derive(Debug, Clone)]
pub struct GlobalOptions {
    pub max_degree: usize,
    pub order_cap: usize,
    pub workers: usize,
}

impl Default for GlobalOptions {
    fn default() -> Self {
        GlobalOptions {
            max_degree: cohomology::DEFAULT_MAX_DEGREE,
            order_cap: deformation::DEFAULT_ORDER_CAP,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone)]
pub struct CommandOutcome {
    pub command: &'static str,
    pub args: Value,
    pub verdict: Verdict,
    pub result: Value,
}

#[derive(Debug, Clone, Error)]
pub enum CommandError {
    #[error("unknown operator `{name}`; available: {available:?}")]
    UnknownOperator {
        name: String,
        available: Vec<String>,
    },
    #[error("no operator named and the document defines {count}, not exactly one")]
    AmbiguousOperator { count: usize },
    #[error("unknown series `{name}`; available: {available:?}")]
    UnknownSeries {
        name: String,
        available: Vec<String>,
    },
    #[error("element `{text}` is neither a named element nor a {dim}-coordinate vector: {detail}")]
    BadElement {
        text: String,
        dim: usize,
        detail: String,
    },
    #[error("bad value list `{text}`: {detail}")]
    BadValueList { text: String, detail: String },
    #[error("bad free-entry list `{text}`: {detail}")]
    BadFreeEntries { text: String, detail: String },
    #[error("{0}")]
    Core(String),
}

macro_rules! core_err {
    ($expr:expr) => {
        $expr.map_err(|e| CommandError::Core(e.to_string()))
    };
}

fn resolve_operator<'a>(
    doc: &'a CompiledDocument,
    name: Option<&str>,
) -> Result<(&'a str, &'a LinearOperator), CommandError> {
    match name {
        Some(name) => doc
            .operators
            .get_key_value(name)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| CommandError::UnknownOperator {
                name: name.to_string(),
                available: doc.operators.keys().cloned().collect(),
            }),
        None => {
            if doc.operators.len() == 1 {
                let (k, v) = doc.operators.iter().next().expect("len checked");
                Ok((k.as_str(), v))
            } else {
                Err(CommandError::AmbiguousOperator {
                    count: doc.operators.len(),
                })
            }
        }
    }
}

fn resolve_series<'a>(
    doc: &'a CompiledDocument,
    name: &str,
) -> Result<&'a DeformationSeries, CommandError> {
    doc.series
        .get(name)
        .ok_or_else(|| CommandError::UnknownSeries {
            name: name.to_string(),
            available: doc.series.keys().cloned().collect(),
        })
}

/// An element argument is either the name of a document element or an inline
/// comma-separated coordinate vector.
fn resolve_element(doc: &CompiledDocument, text: &str) -> Result<Vec<Rat>, CommandError> {
    if let Some(v) = doc.elements.get(text) {
        return Ok(v.clone());
    }
    let dim = doc.algebra.dim();
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != dim {
        return Err(CommandError::BadElement {
            text: text.to_string(),
            dim,
            detail: format!("got {} coordinates", parts.len()),
        });
    }
    parts
        .iter()
        .map(|p| parse_rat(p))
        .collect::<Result<Vec<Rat>, _>>()
        .map_err(|e| CommandError::BadElement {
            text: text.to_string(),
            dim,
            detail: e.to_string(),
        })
}

fn parse_value_list(text: &str) -> Result<Vec<Rat>, CommandError> {
    text.split(',')
        .map(parse_rat)
        .collect::<Result<Vec<Rat>, _>>()
        .map_err(|e| CommandError::BadValueList {
            text: text.to_string(),
            detail: e.to_string(),
        })
}

/// Free entries come as 1-based `"row,col"` pairs separated by `;`.
fn parse_free_entries(text: &str) -> Result<Vec<(usize, usize)>, CommandError> {
    let bad = |detail: &str| CommandError::BadFreeEntries {
        text: text.to_string(),
        detail: detail.to_string(),
    };
    text.split(';')
        .map(|pair| {
            let (r, c) = pair
                .split_once(',')
                .ok_or_else(|| bad("expected `row,col`"))?;
            let r: usize = r.trim().parse().map_err(|_| bad("row is not a number"))?;
            let c: usize = c
                .trim()
                .parse()
                .map_err(|_| bad("column is not a number"))?;
            if r == 0 || c == 0 {
                return Err(bad("entries are 1-based"));
            }
            Ok((r - 1, c - 1))
        })
        .collect()
}

fn cochain_to_json(c: &Cochain) -> Value {
    json!({
        "degree": c.degree(),
        "source_dim": c.source_dim(),
        "target_dim": c.target_dim(),
        "coefficients": c.flatten().iter().map(format_rat).collect::<Vec<_>>(),
    })
}

fn verdict_of(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

pub fn check_leibniz(doc: &CompiledDocument) -> Result<CommandOutcome, CommandError> {
    let check = doc.algebra.check_leibniz_identity();
    let violations: Vec<Value> = check
        .violations
        .iter()
        .map(
            |v| json!({ "i": v.i, "j": v.j, "k": v.k, "residual": vector_to_strings(&v.residual) }),
        )
        .collect();
    Ok(CommandOutcome {
        command: "check-leibniz",
        args: json!({}),
        verdict: verdict_of(check.ok()),
        result: json!({ "verdict": check.ok(), "violations": violations }),
    })
}

pub fn check_rep(doc: &CompiledDocument) -> Result<CommandOutcome, CommandError> {
    let check = doc.representation.check();
    let violations: Vec<Value> = check
        .violations
        .iter()
        .map(|v| {
            json!({
                "axiom": v.axiom.to_string(),
                "i": v.i,
                "j": v.j,
                "residual": matrix_to_strings(&v.residual),
            })
        })
        .collect();
    Ok(CommandOutcome {
        command: "check-rep",
        args: json!({}),
        verdict: verdict_of(check.ok()),
        result: json!({ "verdict": check.ok(), "violations": violations }),
    })
}

pub fn check_rb(
    doc: &CompiledDocument,
    operator: Option<&str>,
) -> Result<CommandOutcome, CommandError> {
    let (name, op) = resolve_operator(doc, operator)?;
    let defect = core_err!(op.rb_defect())?;
    let ok = defect.is_zero();
    let m = op.rep().dim();
    let mut residuals = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let value = defect.value(&[i, j]);
            if !rba_core::linalg::vec_is_zero(value) {
                residuals.push(json!({
                    "i": i + 1,
                    "j": j + 1,
                    "value": vector_to_strings(value),
                }));
            }
        }
    }
    Ok(CommandOutcome {
        command: "check-rb",
        args: json!({ "operator": name }),
        verdict: verdict_of(ok),
        result: json!({ "operator": name, "verdict": ok, "defect_residuals": residuals }),
    })
}

fn variable_names(n: usize, m: usize) -> Vec<String> {
    let wide = n > 9 || m > 9;
    (1..=n)
        .flat_map(|p| {
            (1..=m).map(move |q| {
                if wide {
                    format!("a{p}_{q}")
                } else {
                    format!("a{p}{q}")
                }
            })
        })
        .collect()
}

pub fn rb_system(doc: &CompiledDocument) -> Result<CommandOutcome, CommandError> {
    let system = rota_baxter::rb_polynomial_system(&doc.representation);
    let equations: Vec<Value> = system
        .equations
        .iter()
        .map(|eq| {
            let terms: Vec<Value> = eq
                .polynomial
                .terms()
                .iter()
                .map(|(expo, coeff)| json!({ "exponents": expo, "coefficient": format_rat(coeff) }))
                .collect();
            json!({
                "pair": [eq.pair.0, eq.pair.1],
                "coordinate": eq.coordinate,
                "terms": terms,
            })
        })
        .collect();
    Ok(CommandOutcome {
        command: "rb-system",
        args: json!({}),
        verdict: Verdict::Pass,
        result: json!({
            "algebra_dim": system.algebra_dim,
            "module_dim": system.module_dim,
            "variables": variable_names(system.algebra_dim, system.module_dim),
            "equations": equations,
        }),
    })
}

pub fn rb_search(
    doc: &CompiledDocument,
    values: &str,
    free: Option<&str>,
    budget: Option<u128>,
    globals: &GlobalOptions,
) -> Result<CommandOutcome, CommandError> {
    let value_set = parse_value_list(values)?;
    let mut options = SearchOptions::new(value_set.clone()).with_workers(globals.workers);
    if let Some(budget) = budget {
        options = options.with_budget(budget);
    }
    let free_entries = free.map(parse_free_entries).transpose()?;
    if let Some(entries) = free_entries.clone() {
        options = options.with_free_entries(entries);
    }
    let found = core_err!(rota_baxter::brute_force_search(
        &doc.representation,
        &options
    ))?;
    let solutions: Vec<Value> = found
        .iter()
        .map(|op| json!(matrix_to_strings(op.matrix())))
        .collect();
    Ok(CommandOutcome {
        command: "rb-search",
        args: json!({
            "values": value_set.iter().map(format_rat).collect::<Vec<_>>(),
            "free_entries": free_entries.map(|list| {
                list.into_iter().map(|(r, c)| json!([r + 1, c + 1])).collect::<Vec<_>>()
            }),
            "budget": options.budget.to_string(),
        }),
        verdict: Verdict::Pass,
        result: json!({ "count": solutions.len(), "solutions": solutions }),
    })
}

pub fn cohomology_cmd(
    doc: &CompiledDocument,
    operator: Option<&str>,
    degree: usize,
    globals: &GlobalOptions,
) -> Result<CommandOutcome, CommandError> {
    let (name, op) = resolve_operator(doc, operator)?;
    let report = core_err!(cohomology::cohomology_report(
        op,
        degree,
        globals.max_degree
    ))?;
    let basis: Vec<Value> = report.cocycle_basis.iter().map(cochain_to_json).collect();
    Ok(CommandOutcome {
        command: "cohomology",
        args: json!({ "operator": name, "degree": degree }),
        verdict: Verdict::Pass,
        result: json!({
            "operator": name,
            "degree": report.degree,
            "dim_cochains": report.dim_cochains,
            "dim_cocycles": report.dim_cocycles,
            "dim_coboundaries": report.dim_coboundaries,
            "dim_cohomology": report.dim_cohomology,
            "cocycle_basis": basis,
        }),
    })
}

pub fn nijenhuis(
    doc: &CompiledDocument,
    operator: Option<&str>,
    element: &str,
) -> Result<CommandOutcome, CommandError> {
    let (name, op) = resolve_operator(doc, operator)?;
    let x = resolve_element(doc, element)?;
    let check = core_err!(deformation::check_nijenhuis_element(op, &x))?;
    Ok(CommandOutcome {
        command: "nijenhuis",
        args: json!({ "operator": name, "element": element }),
        verdict: verdict_of(check.ok()),
        result: json!({
            "operator": name,
            "element": vector_to_strings(&x),
            "verdict": check.ok(),
            "failed_conditions": check.failed.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }),
    })
}

fn residuals_to_json(residuals: &[deformation::PairResidual]) -> Vec<Value> {
    residuals
        .iter()
        .map(|r| json!({ "i": r.i, "j": r.j, "residual": vector_to_strings(&r.residual) }))
        .collect()
}

pub fn linear_deform(
    doc: &CompiledDocument,
    operator: Option<&str>,
    tau: &str,
) -> Result<CommandOutcome, CommandError> {
    let (name, op) = resolve_operator(doc, operator)?;
    let (tau_name, tau_op) = resolve_operator(doc, Some(tau))?;
    let check = core_err!(deformation::check_linear_deformation(op, tau_op))?;
    Ok(CommandOutcome {
        command: "linear-deform",
        args: json!({ "operator": name, "tau": tau_name }),
        verdict: verdict_of(check.ok()),
        result: json!({
            "operator": name,
            "tau": tau_name,
            "verdict": check.ok(),
            "cocycle_residuals": residuals_to_json(&check.cocycle_residuals),
            "rota_baxter_residuals": residuals_to_json(&check.rota_baxter_residuals),
        }),
    })
}

pub fn equivalence(
    doc: &CompiledDocument,
    operator: Option<&str>,
    tau1: &str,
    tau2: &str,
    element: &str,
) -> Result<CommandOutcome, CommandError> {
    let (name, op) = resolve_operator(doc, operator)?;
    let (tau1_name, tau1_op) = resolve_operator(doc, Some(tau1))?;
    let (tau2_name, tau2_op) = resolve_operator(doc, Some(tau2))?;
    let x = resolve_element(doc, element)?;
    let ok = core_err!(deformation::check_linear_equivalence(
        op, tau1_op, tau2_op, &x
    ))?;
    Ok(CommandOutcome {
        command: "equivalence",
        args: json!({ "operator": name, "tau1": tau1_name, "tau2": tau2_name, "element": element }),
        verdict: verdict_of(ok),
        result: json!({ "verdict": ok, "element": vector_to_strings(&x) }),
    })
}

/// Formal variant: coefficientwise equivalence of two named series via a
/// named witness pair.
pub fn formal_equivalence(
    doc: &CompiledDocument,
    target: &str,
    source: &str,
    pair: &str,
) -> Result<CommandOutcome, CommandError> {
    let target_series = resolve_series(doc, target)?;
    let source_series = resolve_series(doc, source)?;
    let witness = doc
        .equivalence_pairs
        .get(pair)
        .ok_or_else(|| CommandError::BadElement {
            text: pair.to_string(),
            dim: doc.algebra.dim(),
            detail: "no equivalence pair with this name".into(),
        })?;
    let ok = core_err!(deformation::check_formal_equivalence(
        target_series,
        source_series,
        witness
    ))?;
    Ok(CommandOutcome {
        command: "equivalence",
        args: json!({ "series1": target, "series2": source, "pair": pair }),
        verdict: verdict_of(ok),
        result: json!({ "verdict": ok, "order": target_series.order() }),
    })
}

pub fn obstruction(doc: &CompiledDocument, series: &str) -> Result<CommandOutcome, CommandError> {
    let s = resolve_series(doc, series)?;
    let ob = core_err!(deformation::obstruction_cocycle(s))?;
    let is_zero = ob.is_zero();
    let is_cocycle = core_err!(cohomology::is_cocycle(s.base(), &ob))?;
    Ok(CommandOutcome {
        command: "obstruction",
        args: json!({ "series": series }),
        verdict: Verdict::Pass,
        result: json!({
            "series": series,
            "order": s.order(),
            "obstruction": cochain_to_json(&ob),
            "is_zero": is_zero,
            "is_cocycle": is_cocycle,
        }),
    })
}

pub fn extend(
    doc: &CompiledDocument,
    series: &str,
    to_order: usize,
    globals: &GlobalOptions,
) -> Result<CommandOutcome, CommandError> {
    if to_order > globals.order_cap {
        return Err(CommandError::Core(
            deformation::DeformationError::OrderCapExceeded {
                requested: to_order,
                cap: globals.order_cap,
            }
            .to_string(),
        ));
    }
    let mut s = resolve_series(doc, series)?.clone();
    let from_order = s.order();
    while s.order() < to_order {
        match core_err!(deformation::check_extendable(&s, globals.max_degree))? {
            Some(next) => s.push_term(next),
            None => {
                let ob = core_err!(deformation::obstruction_cocycle(&s))?;
                return Ok(CommandOutcome {
                    command: "extend",
                    args: json!({ "series": series, "to_order": to_order }),
                    verdict: Verdict::Fail,
                    result: json!({
                        "series": series,
                        "from_order": from_order,
                        "verdict": false,
                        "blocked_at_order": s.order(),
                        "obstruction": cochain_to_json(&ob),
                    }),
                });
            }
        }
    }
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|t| json!(matrix_to_strings(t.matrix())))
        .collect();
    Ok(CommandOutcome {
        command: "extend",
        args: json!({ "series": series, "to_order": to_order }),
        verdict: Verdict::Pass,
        result: json!({
            "series": series,
            "from_order": from_order,
            "verdict": true,
            "order": s.order(),
            "terms": terms,
        }),
    })
}

pub fn rigidity(
    doc: &CompiledDocument,
    operator: Option<&str>,
    elements: Option<&str>,
    globals: &GlobalOptions,
) -> Result<CommandOutcome, CommandError> {
    let (name, op) = resolve_operator(doc, operator)?;
    let n = op.rep().algebra_dim();
    // Basis probe plus any user-supplied candidates.
    let mut generators = core_err!(deformation::nijenhuis_basis_elements(op))?;
    // User-supplied candidates must themselves be Nijenhuis; the core call
    // rejects them otherwise.
    if let Some(named) = elements {
        for part in named.split(',') {
            let x =
                doc.elements
                    .get(part.trim())
                    .cloned()
                    .ok_or_else(|| CommandError::BadElement {
                        text: part.trim().to_string(),
                        dim: n,
                        detail: "rigidity generators must be named elements".into(),
                    })?;
            generators.push(x);
        }
    }
    let certified = core_err!(deformation::rigidity_certificate(
        op,
        &generators,
        globals.max_degree
    ))?;
    Ok(CommandOutcome {
        command: "rigidity",
        args: json!({ "operator": name, "elements": elements }),
        verdict: verdict_of(certified),
        result: json!({
            "operator": name,
            "verdict": certified,
            "generators": generators.iter().map(|g| vector_to_strings(g)).collect::<Vec<_>>(),
        }),
    })
}

pub fn mc_check(
    doc: &CompiledDocument,
    operator: Option<&str>,
) -> Result<CommandOutcome, CommandError> {
    let (name, op) = resolve_operator(doc, operator)?;
    let ok = graded_lie::maurer_cartan_check(op);
    Ok(CommandOutcome {
        command: "mc-check",
        args: json!({ "operator": name }),
        verdict: verdict_of(ok),
        result: json!({ "operator": name, "verdict": ok }),
    })
}

/// Number of pseudo-random probe cochains per degree in `sign-check`.
const SIGN_CHECK_PROBES: u64 = 4;

pub fn sign_check(
    doc: &CompiledDocument,
    operator: Option<&str>,
    degree: Option<usize>,
    globals: &GlobalOptions,
) -> Result<CommandOutcome, CommandError> {
    let (name, op) = resolve_operator(doc, operator)?;
    let degrees: Vec<usize> = match degree {
        Some(d) => vec![d],
        None => (1..=2.min(globals.max_degree.saturating_sub(1))).collect(),
    };
    let m = op.rep().dim();
    let g_dim = op.rep().algebra_dim();
    let mut ok = true;
    for &d in &degrees {
        let zero = Cochain::zero(d, m, g_dim);
        ok &= core_err!(graded_lie::sign_relation_check(op, &zero))?;
        for seed in 0..SIGN_CHECK_PROBES {
            let f = pseudo_random_cochain(d, m, g_dim, seed);
            ok &= core_err!(graded_lie::sign_relation_check(op, &f))?;
        }
    }
    Ok(CommandOutcome {
        command: "sign-check",
        args: json!({ "operator": name, "degrees": degrees }),
        verdict: verdict_of(ok),
        result: json!({
            "operator": name,
            "degrees": degrees,
            "probes_per_degree": SIGN_CHECK_PROBES + 1,
            "verdict": ok,
        }),
    })
}
