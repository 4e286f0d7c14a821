//! Relative Rota-Baxter operators: defect evaluation and verification, the
//! induced Leibniz structure on the module, the induced representation on the
//! algebra, the quadratic polynomial system cut out by the defining equation,
//! and a finite brute-force grid searcher.
//!
//! A linear map `T : V -> g` is a relative Rota-Baxter operator when
//! `[Tu, Tv] = T(rho_l(Tu) v + rho_r(Tv) u)` for all `u, v` in `V`.

use crate::cohomology::Cochain;
use crate::leibniz::{LeibnizAlgebra, Representation};
use crate::linalg::{vec_sub, Matrix, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

/// Default ceiling on the number of grid candidates a single search may visit.
pub const DEFAULT_SEARCH_BUDGET: u128 = 2_000_000;

#[derive(Debug, Clone, Error)]
pub enum OperatorError {
    #[error(
        "operator matrix is {rows}x{cols}, representation needs {expected_rows}x{expected_cols}"
    )]
    Shape {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("representation fails its axioms ({violations} violating instances)")]
    InvalidRepresentation { violations: usize },
    #[error(
        "operator is not a relative Rota-Baxter operator (defect nonzero at basis pair ({i}, {j}))"
    )]
    NotRotaBaxter { i: usize, j: usize },
    #[error("search needs {required} candidates, over the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("free entry ({row}, {col}) invalid for a {rows}x{cols} operator grid")]
    BadFreeEntry {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
}

/// Linear map `V -> g` over a fixed representation. Columns of `matrix` are
/// the images of the `V`-basis vectors in the `g`-basis. Candidate and
/// verified Rota-Baxter operators, and deformation directions, all live here.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearOperator {
    rep: Arc<Representation>,
    matrix: Matrix,
}

impl LinearOperator {
    pub fn new(rep: Arc<Representation>, matrix: Matrix) -> Result<Self, OperatorError> {
        let (n, m) = (rep.algebra_dim(), rep.dim());
        if matrix.rows() != n || matrix.cols() != m {
            return Err(OperatorError::Shape {
                expected_rows: n,
                expected_cols: m,
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        Ok(LinearOperator { rep, matrix })
    }

    pub fn zero(rep: Arc<Representation>) -> Self {
        let m = Matrix::zeros(rep.algebra_dim(), rep.dim());
        LinearOperator { rep, matrix: m }
    }

    pub fn rep(&self) -> &Arc<Representation> {
        &self.rep
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `T u` for a coordinate vector `u` in `V`.
    pub fn apply(&self, u: &[Rat]) -> Vec<Rat> {
        self.matrix.mul_vec(u)
    }

    /// `T` applied to the `j`-th basis vector of `V` (0-based).
    pub fn apply_basis(&self, j: usize) -> Vec<Rat> {
        self.matrix.column(j)
    }

    /// Same-representation linear combination `self + c * other`.
    pub fn add_scaled(&self, c: &Rat, other: &LinearOperator) -> LinearOperator {
        LinearOperator {
            rep: self.rep.clone(),
            matrix: self.matrix.add(&other.matrix.scale(c)),
        }
    }

    pub fn sub(&self, other: &LinearOperator) -> LinearOperator {
        LinearOperator {
            rep: self.rep.clone(),
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    fn ensure_valid_representation(&self) -> Result<(), OperatorError> {
        let check = self.rep.check();
        if !check.ok() {
            return Err(OperatorError::InvalidRepresentation {
                violations: check.violations.len(),
            });
        }
        Ok(())
    }

    /// Defect of the defining equation on one 0-based basis pair:
    /// `[T f_i, T f_j] - T(rho_l(T f_i) f_j + rho_r(T f_j) f_i)`.
    fn defect_on_pair(&self, i: usize, j: usize) -> Vec<Rat> {
        defect_on_pair(&self.rep, &self.matrix, i, j)
    }

    /// The full defect as a degree-2 cochain; `T` is a relative Rota-Baxter
    /// operator iff this vanishes identically.
    pub fn rb_defect(&self) -> Result<Cochain, OperatorError> {
        self.ensure_valid_representation()?;
        let m = self.rep.dim();
        let n = self.rep.algebra_dim();
        let mut out = Cochain::zero(2, m, n);
        for i in 0..m {
            for j in 0..m {
                out.set_value(&[i, j], self.defect_on_pair(i, j));
            }
        }
        Ok(out)
    }

    /// True iff the defect vanishes on every basis pair.
    pub fn check_rota_baxter(&self) -> Result<bool, OperatorError> {
        self.ensure_valid_representation()?;
        Ok(self.first_defective_pair().is_none())
    }

    fn first_defective_pair(&self) -> Option<(usize, usize)> {
        let m = self.rep.dim();
        for i in 0..m {
            for j in 0..m {
                if !crate::linalg::vec_is_zero(&self.defect_on_pair(i, j)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Errors with the first failing basis pair (1-based) unless the operator
    /// satisfies the defining equation.
    pub fn ensure_rota_baxter(&self) -> Result<(), OperatorError> {
        self.ensure_valid_representation()?;
        match self.first_defective_pair() {
            None => Ok(()),
            Some((i, j)) => Err(OperatorError::NotRotaBaxter { i: i + 1, j: j + 1 }),
        }
    }

    /// The Leibniz bracket `[u, v]_T = rho_l(Tu) v + rho_r(Tv) u` on `V`.
    /// Only defined for verified Rota-Baxter operators.
    pub fn induced_bracket(&self) -> Result<LeibnizAlgebra, OperatorError> {
        self.ensure_rota_baxter()?;
        let m = self.rep.dim();
        let mut constants = vec![Rat::zero(); m * m * m];
        for i in 0..m {
            let t_i = self.apply_basis(i);
            for j in 0..m {
                let t_j = self.apply_basis(j);
                let mut value = self.rep.rho_l_column(&t_i, j);
                for (v, r) in value.iter_mut().zip(self.rep.rho_r_column(&t_j, i)) {
                    *v = &*v + r;
                }
                for (k, v) in value.into_iter().enumerate() {
                    constants[(i * m + j) * m + k] = v;
                }
            }
        }
        Ok(LeibnizAlgebra::from_structure_constants(m, constants).expect("table has m^3 entries"))
    }

    /// The representation of `(V, [.,.]_T)` on `g` given by
    /// `rho_l_bar(u) x = [Tu, x] - T rho_r(x) u` and
    /// `rho_r_bar(u) x = [x, Tu] - T rho_l(x) u`.
    pub fn induced_representation(&self) -> Result<Representation, OperatorError> {
        let induced_algebra = self.induced_bracket()?;
        let algebra = self.rep.algebra();
        let m = self.rep.dim();
        let n = self.rep.algebra_dim();
        let mut rho_l_bar = Vec::with_capacity(m);
        let mut rho_r_bar = Vec::with_capacity(m);
        for i in 0..m {
            let t_i = self.apply_basis(i);
            let mut left = Matrix::zeros(n, n);
            let mut right = Matrix::zeros(n, n);
            for k in 0..n {
                let e_k = crate::linalg::basis_vec(n, k);
                let col = vec_sub(
                    &algebra.bracket(&t_i, &e_k).expect("shape"),
                    &self.apply(&self.rep.rho_r_basis(k).column(i)),
                );
                for (r, value) in col.into_iter().enumerate() {
                    left.set(r, k, value);
                }
                let col = vec_sub(
                    &algebra.bracket(&e_k, &t_i).expect("shape"),
                    &self.apply(&self.rep.rho_l_basis(k).column(i)),
                );
                for (r, value) in col.into_iter().enumerate() {
                    right.set(r, k, value);
                }
            }
            rho_l_bar.push(left);
            rho_r_bar.push(right);
        }
        Ok(
            Representation::new(induced_algebra, n, rho_l_bar, rho_r_bar)
                .expect("induced shapes are consistent"),
        )
    }
}

fn defect_on_pair(rep: &Representation, t: &Matrix, i: usize, j: usize) -> Vec<Rat> {
    let t_i = t.column(i);
    let t_j = t.column(j);
    let lhs = rep.algebra().bracket(&t_i, &t_j).expect("shape");
    let mut inner = rep.rho_l_column(&t_i, j);
    for (v, r) in inner.iter_mut().zip(rep.rho_r_column(&t_j, i)) {
        *v = &*v + r;
    }
    vec_sub(&lhs, &t.mul_vec(&inner))
}

/// Polynomial in the operator entries, stored as a sorted list of
/// `(exponent vector, coefficient)` pairs over `n * m` variables. Variable
/// `p * m + q` is the entry in row `p`, column `q` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    num_vars: usize,
    terms: Vec<(Vec<u32>, Rat)>,
}

impl Polynomial {
    fn from_map(num_vars: usize, map: BTreeMap<Vec<u32>, Rat>) -> Self {
        let terms = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Polynomial { num_vars, terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// duplicate monomials. Mostly used to state expected systems in tests.
    pub fn from_terms(num_vars: usize, terms: &[(Vec<u32>, Rat)]) -> Self {
        let mut map: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
        for (expo, coeff) in terms {
            assert_eq!(expo.len(), num_vars, "exponent vector length mismatch");
            let slot = map.entry(expo.clone()).or_insert_with(Rat::zero);
            *slot = &*slot + coeff;
        }
        Polynomial::from_map(num_vars, map)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> &[(Vec<u32>, Rat)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.num_vars, "value vector length mismatch");
        let mut total = Rat::zero();
        for (expo, coeff) in &self.terms {
            let mut term = coeff.clone();
            for (value, &e) in values.iter().zip(expo) {
                for _ in 0..e {
                    term = &term * value;
                }
            }
            total += term;
        }
        total
    }

    /// Scales so the leading coefficient (first monomial in the fixed order)
    /// is one; zero polynomials are returned unchanged. Two polynomials with
    /// the same vanishing locus up to a scalar normalize identically.
    pub fn normalized(&self) -> Polynomial {
        match self.terms.first() {
            None => self.clone(),
            Some((_, lead)) => {
                let inv = lead.recip();
                Polynomial {
                    num_vars: self.num_vars,
                    terms: self
                        .terms
                        .iter()
                        .map(|(e, c)| (e.clone(), c * &inv))
                        .collect(),
                }
            }
        }
    }
}

/// One equation of the quadratic system: the polynomial that must vanish for
/// the stated (1-based) module basis pair and algebra coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemEquation {
    pub pair: (usize, usize),
    pub coordinate: usize,
    pub polynomial: Polynomial,
}

/// The full system: simultaneous vanishing of all equations over the
/// `n * m` unknown operator entries is equivalent to the defining equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialSystem {
    pub algebra_dim: usize,
    pub module_dim: usize,
    pub equations: Vec<SystemEquation>,
}

impl PolynomialSystem {
    /// Deduplicated scale-normalized nonzero polynomials; the canonical shape
    /// for comparing against a hand-derived system.
    pub fn normalized_set(&self) -> Vec<Polynomial> {
        let mut set: Vec<Polynomial> = Vec::new();
        for eq in &self.equations {
            if eq.polynomial.is_zero() {
                continue;
            }
            let norm = eq.polynomial.normalized();
            if !set.contains(&norm) {
                set.push(norm);
            }
        }
        set.sort_by(|a, b| a.terms.cmp(&b.terms));
        set
    }

    /// Evaluates every equation at the entries of a candidate matrix.
    pub fn evaluate_at(&self, candidate: &Matrix) -> Vec<Rat> {
        let values: Vec<Rat> = (0..candidate.rows())
            .flat_map(|r| (0..candidate.cols()).map(move |c| candidate.get(r, c).clone()))
            .collect();
        self.equations
            .iter()
            .map(|eq| eq.polynomial.evaluate(&values))
            .collect()
    }
}

/// Emits, for each module basis pair `(i, j)` and algebra coordinate `k`, the
/// quadratic polynomial in the operator entries whose vanishing expresses the
/// defining equation at that slot.
pub fn rb_polynomial_system(rep: &Representation) -> PolynomialSystem {
    let n = rep.algebra_dim();
    let m = rep.dim();
    let num_vars = n * m;
    let var = |p: usize, q: usize| p * m + q;
    let mut equations = Vec::with_capacity(m * m * n);
    for i in 0..m {
        for j in 0..m {
            let mut per_coordinate: Vec<BTreeMap<Vec<u32>, Rat>> = vec![BTreeMap::new(); n];
            let mut add = |k: usize, va: usize, vb: usize, coeff: &Rat| {
                if coeff.is_zero() {
                    return;
                }
                let mut expo = vec![0u32; num_vars];
                expo[va] += 1;
                expo[vb] += 1;
                let slot = per_coordinate[k].entry(expo).or_insert_with(Rat::zero);
                *slot = &*slot + coeff;
            };
            // [T f_i, T f_j] picks up structure constants.
            for p in 0..n {
                for r in 0..n {
                    for k in 0..n {
                        let c = rep.algebra().structure_constant(p, r, k);
                        add(k, var(p, i), var(r, j), c);
                    }
                }
            }
            // -T(rho_l(T f_i) f_j): entry (s, j) of rho_l(e_p) feeds T f_s.
            for p in 0..n {
                for s in 0..m {
                    let c = rep.rho_l_basis(p).get(s, j);
                    if c.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        add(k, var(p, i), var(k, s), &-c);
                    }
                }
            }
            // -T(rho_r(T f_j) f_i).
            for r in 0..n {
                for s in 0..m {
                    let c = rep.rho_r_basis(r).get(s, i);
                    if c.is_zero() {
                        continue;
                    }
                    for k in 0..n {
                        add(k, var(r, j), var(k, s), &-c);
                    }
                }
            }
            for (k, map) in per_coordinate.into_iter().enumerate() {
                equations.push(SystemEquation {
                    pair: (i + 1, j + 1),
                    coordinate: k + 1,
                    polynomial: Polynomial::from_map(num_vars, map),
                });
            }
        }
    }
    PolynomialSystem {
        algebra_dim: n,
        module_dim: m,
        equations,
    }
}

/// Configuration for [`brute_force_search`].
#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Values each free entry ranges over.
    pub value_set: Vec<Rat>,
    /// 0-based `(row, col)` entries allowed to vary; the rest stay zero.
    /// `None` frees every entry.
    pub free_entries: Option<Vec<(usize, usize)>>,
    /// Hard ceiling on `|value_set| ^ free_entries`.
    pub budget: u128,
    /// Worker threads to partition the grid across; the result is identical
    /// for any worker count.
    pub workers: usize,
}

impl SearchOptions {
    pub fn new(value_set: Vec<Rat>) -> Self {
        SearchOptions {
            value_set,
            free_entries: None,
            budget: DEFAULT_SEARCH_BUDGET,
            workers: 1,
        }
    }

    pub fn with_free_entries(mut self, entries: Vec<(usize, usize)>) -> Self {
        self.free_entries = Some(entries);
        self
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

/// Enumerates every operator matrix whose free entries take values in the
/// given set and returns exactly those passing the Rota-Baxter check, sorted
/// lexicographically by matrix entries. Refuses grids over the budget,
/// reporting the size the run would need.
pub fn brute_force_search(
    rep: &Arc<Representation>,
    options: &SearchOptions,
) -> Result<Vec<LinearOperator>, OperatorError> {
    let n = rep.algebra_dim();
    let m = rep.dim();
    let check = rep.check();
    if !check.ok() {
        return Err(OperatorError::InvalidRepresentation {
            violations: check.violations.len(),
        });
    }
    let all_entries: Vec<(usize, usize)> =
        (0..n).flat_map(|r| (0..m).map(move |c| (r, c))).collect();
    let free = options.free_entries.as_deref().unwrap_or(&all_entries);
    for &(row, col) in free {
        if row >= n || col >= m || free.iter().filter(|&&e| e == (row, col)).count() > 1 {
            return Err(OperatorError::BadFreeEntry {
                row,
                col,
                rows: n,
                cols: m,
            });
        }
    }
    let base = options.value_set.len() as u128;
    let required = base
        .checked_pow(free.len() as u32)
        .ok_or(OperatorError::BudgetExceeded {
            required: u128::MAX,
            budget: options.budget,
        })?;
    if required > options.budget {
        return Err(OperatorError::BudgetExceeded {
            required,
            budget: options.budget,
        });
    }
    if options.value_set.is_empty() {
        return Ok(Vec::new());
    }

    let candidate = |index: u128| -> Matrix {
        let mut t = Matrix::zeros(n, m);
        let mut rest = index;
        for &(row, col) in free.iter().rev() {
            let digit = (rest % base) as usize;
            rest /= base;
            t.set(row, col, options.value_set[digit].clone());
        }
        t
    };
    let scan = |from: u128, to: u128| -> Vec<Matrix> {
        let mut found = Vec::new();
        for index in from..to {
            let t = candidate(index);
            let ok = (0..m).all(|i| {
                (0..m).all(|j| crate::linalg::vec_is_zero(&defect_on_pair(rep, &t, i, j)))
            });
            if ok {
                found.push(t);
            }
        }
        found
    };

    let workers = options
        .workers
        .max(1)
        .min(usize::try_from(required).unwrap_or(usize::MAX).max(1));
    let mut matrices: Vec<Matrix> = if workers <= 1 {
        scan(0, required)
    } else {
        let chunk = required.div_ceil(workers as u128);
        let ranges: Vec<(u128, u128)> = (0..workers as u128)
            .map(|w| (w * chunk, ((w + 1) * chunk).min(required)))
            .filter(|(a, b)| a < b)
            .collect();
        let mut parts: Vec<Vec<Matrix>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = ranges
                .iter()
                .map(|&(a, b)| scope.spawn(move || scan(a, b)))
                .collect();
            for handle in handles {
                parts.push(handle.join().expect("search worker panicked"));
            }
        });
        parts.into_iter().flatten().collect()
    };
    matrices.sort();
    Ok(matrices
        .into_iter()
        .map(|t| LinearOperator::new(rep.clone(), t).expect("grid matrices have the right shape"))
        .collect())
}
