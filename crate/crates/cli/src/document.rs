//! The JSON problem-document format: algebras by sparse brackets,
//! representations (the `"regular"` keyword or explicit action matrices),
//! named operators, deformation series, and elements. All rationals travel
//! as strings `"p"` or `"p/q"` and are re-canonicalised on output.

use rba_core::deformation::DeformationSeries;
use rba_core::leibniz::{LeibnizAlgebra, Representation};
use rba_core::linalg::{format_rat, parse_rat, Matrix, Rat};
use rba_core::rota_baxter::LinearOperator;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub algebra: AlgebraSpec,
    pub representation: RepresentationSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operators: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, SeriesSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub equivalence_pairs: BTreeMap<String, EquivalencePairSpec>,
}

/// Witness for a formal equivalence: the driving element plus optional
/// higher coefficients of the two intertwining maps (index `i + 2`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivalencePairSpec {
    pub x: Vec<String>,
    #[serde(default, rename = "higherPhi")]
    pub higher_phi: Vec<Vec<Vec<String>>>,
    #[serde(default, rename = "higherVarphi")]
    pub higher_varphi: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

/// One nonzero structure constant: `[e_i, e_j] += c * e_k`, 1-based.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepresentationSpec {
    /// The keyword `"regular"`: the algebra acting on itself.
    Keyword(String),
    Explicit(ExplicitRepresentation),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplicitRepresentation {
    pub dim: usize,
    #[serde(rename = "rhoL")]
    pub rho_l: Vec<Vec<Vec<String>>>,
    #[serde(rename = "rhoR")]
    pub rho_r: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesSpec {
    /// Name of the base operator.
    pub base: String,
    /// Names of the order-1..n coefficient operators.
    pub terms: Vec<String>,
}

/// One schema or validation failure, with the JSON path it occurred at.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// A fully validated document: every named entity built as a core object.
#[derive(Debug, Clone)]
pub struct CompiledDocument {
    pub algebra: LeibnizAlgebra,
    pub representation: Arc<Representation>,
    pub operators: BTreeMap<String, LinearOperator>,
    pub series: BTreeMap<String, DeformationSeries>,
    pub elements: BTreeMap<String, Vec<Rat>>,
    pub equivalence_pairs: BTreeMap<String, rba_core::deformation::EquivalencePair>,
}

struct Errors(Vec<SchemaError>);

impl Errors {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(SchemaError {
            path: path.into(),
            message: message.into(),
        });
    }
}

fn parse_rat_at(text: &str, path: &str, errors: &mut Errors) -> Rat {
    match parse_rat(text) {
        Ok(value) => value,
        Err(err) => {
            errors.push(path, err.to_string());
            Rat::from_integer(0.into())
        }
    }
}

fn parse_matrix_at(
    rows: &[Vec<String>],
    expected_rows: usize,
    expected_cols: usize,
    path: &str,
    errors: &mut Errors,
) -> Matrix {
    if rows.len() != expected_rows || rows.iter().any(|r| r.len() != expected_cols) {
        errors.push(
            path,
            format!(
                "expected a {expected_rows}x{expected_cols} matrix, got {}x{}",
                rows.len(),
                rows.first().map_or(0, Vec::len)
            ),
        );
        return Matrix::zeros(expected_rows, expected_cols);
    }
    let mut out = Matrix::zeros(expected_rows, expected_cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, cell) in row.iter().enumerate() {
            out.set(
                r,
                c,
                parse_rat_at(cell, &format!("{path}[{r}][{c}]"), errors),
            );
        }
    }
    out
}

/// Parses and validates a JSON problem document, returning either the
/// compiled document or every schema error found, each with its JSON path.
pub fn parse_document(text: &str) -> Result<CompiledDocument, Vec<SchemaError>> {
    let raw: ProblemDocument = match serde_json::from_str(text) {
        Ok(doc) => doc,
        Err(err) => {
            return Err(vec![SchemaError {
                path: format!("$ (line {}, column {})", err.line(), err.column()),
                message: err.to_string(),
            }]);
        }
    };
    compile_document(&raw)
}

/// Validates an already-deserialized document.
pub fn compile_document(raw: &ProblemDocument) -> Result<CompiledDocument, Vec<SchemaError>> {
    let mut errors = Errors(Vec::new());
    let n = raw.algebra.dim;

    let mut brackets = Vec::with_capacity(raw.algebra.brackets.len());
    for (idx, entry) in raw.algebra.brackets.iter().enumerate() {
        let path = format!("algebra.brackets[{idx}]");
        for (field, value) in [("i", entry.i), ("j", entry.j), ("k", entry.k)] {
            if value == 0 || value > n {
                errors.push(
                    format!("{path}.{field}"),
                    format!("index {value} out of range 1..={n}"),
                );
            }
        }
        let c = parse_rat_at(&entry.c, &format!("{path}.c"), &mut errors);
        if entry.i >= 1
            && entry.i <= n
            && entry.j >= 1
            && entry.j <= n
            && entry.k >= 1
            && entry.k <= n
        {
            brackets.push((entry.i, entry.j, entry.k, c));
        }
    }
    let algebra =
        LeibnizAlgebra::from_sparse_brackets(n, &brackets).expect("indices validated above");

    let representation = match &raw.representation {
        RepresentationSpec::Keyword(word) if word == "regular" => {
            match algebra.regular_representation() {
                Ok(rep) => Some(rep),
                Err(err) => {
                    errors.push(
                        "representation",
                        format!("regular representation unavailable: {err}"),
                    );
                    None
                }
            }
        }
        RepresentationSpec::Keyword(word) => {
            errors.push(
                "representation",
                format!("unknown keyword `{word}`, expected \"regular\""),
            );
            None
        }
        RepresentationSpec::Explicit(spec) => {
            let m = spec.dim;
            for (side, list) in [("rhoL", &spec.rho_l), ("rhoR", &spec.rho_r)] {
                if list.len() != n {
                    errors.push(
                        format!("representation.{side}"),
                        format!("expected {n} action matrices, got {}", list.len()),
                    );
                }
            }
            let build_side = |list: &[Vec<Vec<String>>], side: &str, errors: &mut Errors| {
                (0..n)
                    .map(|i| match list.get(i) {
                        Some(rows) => parse_matrix_at(
                            rows,
                            m,
                            m,
                            &format!("representation.{side}[{i}]"),
                            errors,
                        ),
                        None => Matrix::zeros(m, m),
                    })
                    .collect::<Vec<Matrix>>()
            };
            let rho_l = build_side(&spec.rho_l, "rhoL", &mut errors);
            let rho_r = build_side(&spec.rho_r, "rhoR", &mut errors);
            match Representation::new(algebra.clone(), m, rho_l, rho_r) {
                Ok(rep) => Some(rep),
                Err(err) => {
                    errors.push("representation", err.to_string());
                    None
                }
            }
        }
    };

    let Some(representation) = representation else {
        return Err(errors.0);
    };
    let representation = Arc::new(representation);
    let m = representation.dim();

    let mut operators = BTreeMap::new();
    for (name, rows) in &raw.operators {
        let path = format!("operators.{name}");
        let matrix = parse_matrix_at(rows, n, m, &path, &mut errors);
        match LinearOperator::new(representation.clone(), matrix) {
            Ok(op) => {
                operators.insert(name.clone(), op);
            }
            Err(err) => errors.push(path, err.to_string()),
        }
    }

    let mut series = BTreeMap::new();
    for (name, spec) in &raw.series {
        let path = format!("series.{name}");
        let base = match operators.get(&spec.base) {
            Some(op) => op.clone(),
            None => {
                errors.push(
                    format!("{path}.base"),
                    format!("unknown operator `{}`", spec.base),
                );
                continue;
            }
        };
        let mut terms = Vec::with_capacity(spec.terms.len());
        let mut ok = true;
        for (idx, term_name) in spec.terms.iter().enumerate() {
            match operators.get(term_name) {
                Some(op) => terms.push(op.clone()),
                None => {
                    errors.push(
                        format!("{path}.terms[{idx}]"),
                        format!("unknown operator `{term_name}`"),
                    );
                    ok = false;
                }
            }
        }
        if ok {
            match DeformationSeries::new(base, terms) {
                Ok(s) => {
                    series.insert(name.clone(), s);
                }
                Err(err) => errors.push(path, err.to_string()),
            }
        }
    }

    let mut elements = BTreeMap::new();
    for (name, coords) in &raw.elements {
        let path = format!("elements.{name}");
        if coords.len() != n {
            errors.push(
                &path,
                format!("expected {n} coordinates, got {}", coords.len()),
            );
            continue;
        }
        let vector: Vec<Rat> = coords
            .iter()
            .enumerate()
            .map(|(idx, cell)| parse_rat_at(cell, &format!("{path}[{idx}]"), &mut errors))
            .collect();
        elements.insert(name.clone(), vector);
    }

    let mut equivalence_pairs = BTreeMap::new();
    for (name, spec) in &raw.equivalence_pairs {
        let path = format!("equivalence_pairs.{name}");
        if spec.x.len() != n {
            errors.push(
                format!("{path}.x"),
                format!("expected {n} coordinates, got {}", spec.x.len()),
            );
            continue;
        }
        let x: Vec<Rat> = spec
            .x
            .iter()
            .enumerate()
            .map(|(idx, cell)| parse_rat_at(cell, &format!("{path}.x[{idx}]"), &mut errors))
            .collect();
        let higher_phi: Vec<Matrix> = spec
            .higher_phi
            .iter()
            .enumerate()
            .map(|(idx, rows)| {
                parse_matrix_at(rows, n, n, &format!("{path}.higherPhi[{idx}]"), &mut errors)
            })
            .collect();
        let higher_varphi: Vec<Matrix> = spec
            .higher_varphi
            .iter()
            .enumerate()
            .map(|(idx, rows)| {
                parse_matrix_at(
                    rows,
                    m,
                    m,
                    &format!("{path}.higherVarphi[{idx}]"),
                    &mut errors,
                )
            })
            .collect();
        equivalence_pairs.insert(
            name.clone(),
            rba_core::deformation::EquivalencePair {
                x,
                higher_phi,
                higher_varphi,
            },
        );
    }

    if errors.0.is_empty() {
        Ok(CompiledDocument {
            algebra,
            representation,
            operators,
            series,
            elements,
            equivalence_pairs,
        })
    } else {
        Err(errors.0)
    }
}

pub fn matrix_to_strings(matrix: &Matrix) -> Vec<Vec<String>> {
    (0..matrix.rows())
        .map(|r| {
            (0..matrix.cols())
                .map(|c| format_rat(matrix.get(r, c)))
                .collect()
        })
        .collect()
}

pub fn vector_to_strings(vector: &[Rat]) -> Vec<String> {
    vector.iter().map(format_rat).collect()
}

impl CompiledDocument {
    /// Rebuilds a raw document with canonicalised rational strings; parsing
    /// the result yields a semantically identical compiled document.
    pub fn canonical_document(&self) -> ProblemDocument {
        let n = self.algebra.dim();
        let zero = rba_core::linalg::rat_int(0);
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let c = self.algebra.structure_constant(i, j, k);
                    if *c != zero {
                        brackets.push(BracketEntry {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            c: format_rat(c),
                        });
                    }
                }
            }
        }
        let m = self.representation.dim();
        let representation = RepresentationSpec::Explicit(ExplicitRepresentation {
            dim: m,
            rho_l: (0..n)
                .map(|i| matrix_to_strings(self.representation.rho_l_basis(i)))
                .collect(),
            rho_r: (0..n)
                .map(|i| matrix_to_strings(self.representation.rho_r_basis(i)))
                .collect(),
        });
        ProblemDocument {
            algebra: AlgebraSpec { dim: n, brackets },
            representation,
            operators: self
                .operators
                .iter()
                .map(|(name, op)| (name.clone(), matrix_to_strings(op.matrix())))
                .collect(),
            series: self
                .series
                .iter()
                .map(|(name, s)| {
                    // Series reference operators by name; emit the names that
                    // still resolve, which is all of them for compiled docs.
                    let base = self
                        .operators
                        .iter()
                        .find(|(_, op)| op.matrix() == s.base().matrix())
                        .map(|(n, _)| n.clone())
                        .unwrap_or_default();
                    let terms = s
                        .terms()
                        .iter()
                        .map(|t| {
                            self.operators
                                .iter()
                                .find(|(_, op)| op.matrix() == t.matrix())
                                .map(|(n, _)| n.clone())
                                .unwrap_or_default()
                        })
                        .collect();
                    (name.clone(), SeriesSpec { base, terms })
                })
                .collect(),
            elements: self
                .elements
                .iter()
                .map(|(name, v)| (name.clone(), vector_to_strings(v)))
                .collect(),
            equivalence_pairs: self
                .equivalence_pairs
                .iter()
                .map(|(name, pair)| {
                    (
                        name.clone(),
                        EquivalencePairSpec {
                            x: vector_to_strings(&pair.x),
                            higher_phi: pair.higher_phi.iter().map(matrix_to_strings).collect(),
                            higher_varphi: pair
                                .higher_varphi
                                .iter()
                                .map(matrix_to_strings)
                                .collect(),
                        },
                    )
                })
                .collect(),
        }
    }
}
