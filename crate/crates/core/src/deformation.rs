//! Linear, truncated formal, and order-n deformations of a relative
//! Rota-Baxter operator: equivalences, Nijenhuis elements and operators,
//! trivial deformations, obstruction classes, and extendability.
//!
//! A linear deformation direction is an operator `tau` such that `T + t tau`
//! stays Rota-Baxter for every scalar `t`; this splits into a cocycle
//! condition and `tau` being Rota-Baxter itself. Higher-order deformations
//! are finite series checked coefficientwise; the obstruction to extending
//! an order-n series one step further is an explicit 2-cocycle, and
//! extendability is exactly solvability of `d_T X = -obstruction`.

use crate::cohomology::{coboundary_matrix, is_cocycle, rb_coboundary, Cochain, CohomologyError};
use crate::leibniz::{AlgebraError, LeibnizAlgebra};
use crate::linalg::{basis_vec, vec_add, vec_is_zero, vec_sub, Matrix, Rat};
use crate::rota_baxter::{LinearOperator, OperatorError};
use thiserror::Error;

/// Default cap on the order of any truncated deformation series.
pub const DEFAULT_ORDER_CAP: usize = 6;

#[derive(Debug, Clone, Error)]
pub enum DeformationError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element is not Nijenhuis for the operator ({failed} failing conditions)")]
    NotNijenhuis { failed: usize },
    #[error("direction is not a 1-cocycle for the operator")]
    NotCocycle,
    #[error("series is not an order-{order} deformation (first failure at order {first_failing})")]
    InvalidSeries { order: usize, first_failing: usize },
    #[error("order {requested} exceeds the configured cap {cap}")]
    OrderCapExceeded { requested: usize, cap: usize },
}

/// Truncated deformation series `T + tau_1 t + ... + tau_n t^n`; the order is
/// the number of higher terms.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationSeries {
    base: LinearOperator,
    terms: Vec<LinearOperator>,
}

impl DeformationSeries {
    pub fn new(base: LinearOperator, terms: Vec<LinearOperator>) -> Result<Self, DeformationError> {
        for (idx, term) in terms.iter().enumerate() {
            if term.rep() != base.rep()
                || term.matrix().rows() != base.matrix().rows()
                || term.matrix().cols() != base.matrix().cols()
            {
                return Err(DeformationError::ShapeMismatch(format!(
                    "series term {} does not share the base operator's representation",
                    idx + 1
                )));
            }
        }
        Ok(DeformationSeries { base, terms })
    }

    /// The series with all higher terms zero.
    pub fn constant(base: LinearOperator, order: usize) -> Self {
        let zero = LinearOperator::zero(base.rep().clone());
        DeformationSeries {
            base,
            terms: vec![zero; order],
        }
    }

    pub fn base(&self) -> &LinearOperator {
        &self.base
    }

    pub fn terms(&self) -> &[LinearOperator] {
        &self.terms
    }

    pub fn order(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient operator of `t^i`; index 0 is the base.
    pub fn coefficient(&self, i: usize) -> &LinearOperator {
        if i == 0 {
            &self.base
        } else {
            &self.terms[i - 1]
        }
    }

    pub fn push_term(&mut self, term: LinearOperator) {
        self.terms.push(term);
    }

    /// Evaluates the series at a scalar, `T + t tau_1 + t^2 tau_2 + ...`.
    pub fn evaluate_at(&self, t: &Rat) -> LinearOperator {
        let mut acc = self.base.clone();
        let mut power = t.clone();
        for term in &self.terms {
            acc = acc.add_scaled(&power, term);
            power = &power * t;
        }
        acc
    }
}

/// Residual of one defining equation on a 1-based basis pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairResidual {
    pub i: usize,
    pub j: usize,
    pub residual: Vec<Rat>,
}

/// Outcome of the linear-deformation check: the direction must be a
/// 1-cocycle for the base operator and a Rota-Baxter operator itself.
#[derive(Debug, Clone)]
pub struct LinearDeformationCheck {
    pub cocycle_residuals: Vec<PairResidual>,
    pub rota_baxter_residuals: Vec<PairResidual>,
}

impl LinearDeformationCheck {
    pub fn ok(&self) -> bool {
        self.cocycle_residuals.is_empty() && self.rota_baxter_residuals.is_empty()
    }
}

fn expect_same_shape(a: &LinearOperator, b: &LinearOperator) -> Result<(), DeformationError> {
    if a.rep() != b.rep() {
        return Err(DeformationError::ShapeMismatch(
            "operators live over different representations".into(),
        ));
    }
    Ok(())
}

/// Checks whether `tau` generates a linear deformation of `t`, reporting the
/// residuals of both defining equations on every basis pair. Equivalent to
/// `t + s * tau` being Rota-Baxter for every scalar `s`.
pub fn check_linear_deformation(
    t: &LinearOperator,
    tau: &LinearOperator,
) -> Result<LinearDeformationCheck, DeformationError> {
    expect_same_shape(t, tau)?;
    t.ensure_rota_baxter()?;
    let rep = t.rep();
    let m = rep.dim();
    let mut cocycle_residuals = Vec::new();
    let mut rota_baxter_residuals = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let residual = crate::cohomology::degree_one_cocycle_residual(t, tau.matrix(), i, j);
            if !vec_is_zero(&residual) {
                cocycle_residuals.push(PairResidual {
                    i: i + 1,
                    j: j + 1,
                    residual,
                });
            }
        }
    }
    let defect = tau.rb_defect()?;
    for i in 0..m {
        for j in 0..m {
            let residual = defect.value(&[i, j]);
            if !vec_is_zero(residual) {
                rota_baxter_residuals.push(PairResidual {
                    i: i + 1,
                    j: j + 1,
                    residual: residual.to_vec(),
                });
            }
        }
    }
    Ok(LinearDeformationCheck {
        cocycle_residuals,
        rota_baxter_residuals,
    })
}

/// Checks whether `(phi_g, phi_v)` is a homomorphism of Rota-Baxter operators
/// from `source` to `target`: `phi_g` is an algebra endomorphism,
/// `target . phi_v = phi_g . source`, and `phi_v` intertwines both actions
/// along `phi_g`.
pub fn check_homomorphism(
    target: &LinearOperator,
    source: &LinearOperator,
    phi_g: &Matrix,
    phi_v: &Matrix,
) -> Result<bool, DeformationError> {
    expect_same_shape(target, source)?;
    let rep = target.rep();
    let algebra = rep.algebra();
    let n = rep.algebra_dim();
    let m = rep.dim();
    if phi_g.rows() != n || phi_g.cols() != n || phi_v.rows() != m || phi_v.cols() != m {
        return Err(DeformationError::ShapeMismatch(format!(
            "homomorphism maps must be {n}x{n} and {m}x{m}"
        )));
    }
    // Algebra endomorphism on basis pairs.
    for i in 0..n {
        for j in 0..n {
            let lhs = phi_g.mul_vec(&algebra.bracket_basis(i, j));
            let rhs = algebra
                .bracket(&phi_g.column(i), &phi_g.column(j))
                .expect("shape");
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    // Operator intertwining.
    if target.matrix().mul(phi_v) != phi_g.mul(source.matrix()) {
        return Ok(false);
    }
    // Action intertwining along phi_g.
    for i in 0..n {
        let image = phi_g.column(i);
        if phi_v.mul(rep.rho_l_basis(i)) != rep.rho_l(&image).mul(phi_v) {
            return Ok(false);
        }
        if phi_v.mul(rep.rho_r_basis(i)) != rep.rho_r(&image).mul(phi_v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks equivalence of the linear deformations generated by `tau1` (target)
/// and `tau2` (source) via the witness `x`: the pair
/// `(id + t L_x, id + t rho_l(x))` must be a homomorphism from `T + t tau2`
/// to `T + t tau1` identically in `t`, which reduces to five polynomial
/// identities on basis elements.
pub fn check_linear_equivalence(
    t: &LinearOperator,
    tau1: &LinearOperator,
    tau2: &LinearOperator,
    x: &[Rat],
) -> Result<bool, DeformationError> {
    expect_same_shape(t, tau1)?;
    expect_same_shape(t, tau2)?;
    let rep = t.rep();
    let algebra = rep.algebra();
    let n = rep.algebra_dim();
    let m = rep.dim();
    if x.len() != n {
        return Err(DeformationError::ShapeMismatch(format!(
            "witness vector has length {}, algebra dimension is {n}",
            x.len()
        )));
    }
    // t^2 coefficient of the endomorphism condition: [[x,y],[x,z]] = 0.
    for j in 0..n {
        let xj = algebra.bracket(x, &basis_vec(n, j)).expect("shape");
        for k in 0..n {
            let xk = algebra.bracket(x, &basis_vec(n, k)).expect("shape");
            if !vec_is_zero(&algebra.bracket(&xj, &xk).expect("shape")) {
                return Ok(false);
            }
        }
    }
    // t^1 of the intertwining: (tau2 - tau1)(u) = T rho_l(x) u - [x, T u].
    for u in 0..m {
        let lhs = vec_sub(&tau2.apply_basis(u), &tau1.apply_basis(u));
        let rhs = vec_sub(
            &t.apply(&rep.rho_l_column(x, u)),
            &algebra.bracket(x, &t.apply_basis(u)).expect("shape"),
        );
        if lhs != rhs {
            return Ok(false);
        }
    }
    // t^2 of the intertwining: tau1 rho_l(x) u = [x, tau2 u].
    for u in 0..m {
        let lhs = tau1.apply(&rep.rho_l_column(x, u));
        let rhs = algebra.bracket(x, &tau2.apply_basis(u)).expect("shape");
        if lhs != rhs {
            return Ok(false);
        }
    }
    // t^2 of the action conditions: rho_l([x,y]) rho_l(x) = 0 and
    // rho_r([x,y]) rho_l(x) = 0.
    let rho_l_x = rep.rho_l(x);
    for j in 0..n {
        let bracket = algebra.bracket(x, &basis_vec(n, j)).expect("shape");
        if !rep.rho_l(&bracket).mul(&rho_l_x).is_zero() {
            return Ok(false);
        }
        if !rep.rho_r(&bracket).mul(&rho_l_x).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The four conditions an element must satisfy to be Nijenhuis for an
/// operator, in reporting order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NijenhuisCondition {
    /// `[[x,y], [x,z]] = 0` for all basis `y, z`.
    BracketOfImages,
    /// `rho_l([x,y]) rho_l(x) = 0` for all basis `y`.
    LeftActionProduct,
    /// `rho_r([x,y]) rho_l(x) = 0` for all basis `y`.
    RightActionProduct,
    /// `[x, T rho_l(x) u - [x, T u]] = 0` for all basis `u`.
    DeformationCompatibility,
}

impl std::fmt::Display for NijenhuisCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            NijenhuisCondition::BracketOfImages => "bracket-of-images",
            NijenhuisCondition::LeftActionProduct => "left-action-product",
            NijenhuisCondition::RightActionProduct => "right-action-product",
            NijenhuisCondition::DeformationCompatibility => "deformation-compatibility",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone)]
pub struct NijenhuisCheck {
    pub failed: Vec<NijenhuisCondition>,
}

impl NijenhuisCheck {
    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Checks the four Nijenhuis-element conditions on all basis instantiations.
pub fn check_nijenhuis_element(
    t: &LinearOperator,
    x: &[Rat],
) -> Result<NijenhuisCheck, DeformationError> {
    t.ensure_rota_baxter()?;
    let rep = t.rep();
    let algebra = rep.algebra();
    let n = rep.algebra_dim();
    let m = rep.dim();
    if x.len() != n {
        return Err(DeformationError::ShapeMismatch(format!(
            "element has length {}, algebra dimension is {n}",
            x.len()
        )));
    }
    let mut failed = Vec::new();
    let images: Vec<Vec<Rat>> = (0..n)
        .map(|j| algebra.bracket(x, &basis_vec(n, j)).expect("shape"))
        .collect();
    if images.iter().any(|xj| {
        images
            .iter()
            .any(|xk| !vec_is_zero(&algebra.bracket(xj, xk).expect("shape")))
    }) {
        failed.push(NijenhuisCondition::BracketOfImages);
    }
    let rho_l_x = rep.rho_l(x);
    if images.iter().any(|b| !rep.rho_l(b).mul(&rho_l_x).is_zero()) {
        failed.push(NijenhuisCondition::LeftActionProduct);
    }
    if images.iter().any(|b| !rep.rho_r(b).mul(&rho_l_x).is_zero()) {
        failed.push(NijenhuisCondition::RightActionProduct);
    }
    let compat_fails = (0..m).any(|u| {
        let shift = vec_sub(
            &t.apply(&rep.rho_l_column(x, u)),
            &algebra.bracket(x, &t.apply_basis(u)).expect("shape"),
        );
        !vec_is_zero(&algebra.bracket(x, &shift).expect("shape"))
    });
    if compat_fails {
        failed.push(NijenhuisCondition::DeformationCompatibility);
    }
    Ok(NijenhuisCheck { failed })
}

/// The degree-0 coboundary of a Nijenhuis element, as an operator. It
/// generates a trivial linear deformation of `t`.
pub fn trivial_deformation_from_nijenhuis(
    t: &LinearOperator,
    x: &[Rat],
) -> Result<LinearOperator, DeformationError> {
    let check = check_nijenhuis_element(t, x)?;
    if !check.ok() {
        return Err(DeformationError::NotNijenhuis {
            failed: check.failed.len(),
        });
    }
    let cochain = Cochain::from_target_vector(x.to_vec(), t.rep().dim());
    let image = rb_coboundary(t, &cochain)?;
    Ok(
        LinearOperator::new(t.rep().clone(), image.to_operator_matrix())
            .expect("coboundary preserves shape"),
    )
}

/// Checks `[Nx, Ny] = N([Nx, y] + [x, Ny] - N[x, y])` on all basis pairs.
pub fn check_nijenhuis_operator(
    algebra: &LeibnizAlgebra,
    n_matrix: &Matrix,
) -> Result<bool, DeformationError> {
    let n = algebra.dim();
    if n_matrix.rows() != n || n_matrix.cols() != n {
        return Err(DeformationError::ShapeMismatch(format!(
            "operator is {}x{}, algebra dimension is {n}",
            n_matrix.rows(),
            n_matrix.cols()
        )));
    }
    for i in 0..n {
        let n_i = n_matrix.column(i);
        for j in 0..n {
            let n_j = n_matrix.column(j);
            let lhs = algebra.bracket(&n_i, &n_j).expect("shape");
            let mut inner = vec_add(
                &algebra.bracket(&n_i, &basis_vec(n, j)).expect("shape"),
                &algebra.bracket(&basis_vec(n, i), &n_j).expect("shape"),
            );
            inner = vec_sub(&inner, &n_matrix.mul_vec(&algebra.bracket_basis(i, j)));
            if lhs != n_matrix.mul_vec(&inner) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Result of checking the order-n deformation equations coefficientwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCheck {
    pub order: usize,
    pub first_failing_order: Option<usize>,
}

impl OrderCheck {
    pub fn ok(&self) -> bool {
        self.first_failing_order.is_none()
    }
}

/// Coefficient of `t^i` in the deformation equation, evaluated on one
/// 0-based basis pair: `sum_{k+l=i} ([tau_k u, tau_l v] - tau_k(rho_l(tau_l u) v + rho_r(tau_l v) u))`.
fn deformation_coefficient(series: &DeformationSeries, i: usize, u: usize, v: usize) -> Vec<Rat> {
    let rep = series.base().rep();
    let algebra = rep.algebra();
    let mut acc = crate::linalg::zero_vec(rep.algebra_dim());
    for k in 0..=i {
        let l = i - k;
        if k > series.order() || l > series.order() {
            continue;
        }
        let tk = series.coefficient(k);
        let tl = series.coefficient(l);
        let term = algebra
            .bracket(&tk.apply_basis(u), &tl.apply_basis(v))
            .expect("shape");
        acc = vec_add(&acc, &term);
        let mut inner = rep.rho_l_column(&tl.apply_basis(u), v);
        for (a, b) in inner
            .iter_mut()
            .zip(rep.rho_r_column(&tl.apply_basis(v), u))
        {
            *a = &*a + b;
        }
        acc = vec_sub(&acc, &tk.apply(&inner));
    }
    acc
}

/// Checks the coefficientwise deformation equations for every order up to
/// the series order, reporting the smallest failing order.
pub fn check_order_n_deformation(
    series: &DeformationSeries,
) -> Result<OrderCheck, DeformationError> {
    series.base().ensure_rota_baxter()?;
    let m = series.base().rep().dim();
    for i in 0..=series.order() {
        for u in 0..m {
            for v in 0..m {
                if !vec_is_zero(&deformation_coefficient(series, i, u, v)) {
                    return Ok(OrderCheck {
                        order: series.order(),
                        first_failing_order: Some(i),
                    });
                }
            }
        }
    }
    if series.order() >= 1 {
        // The order-1 equation says the infinitesimal is a 1-cocycle.
        debug_assert!(is_cocycle(
            series.base(),
            &Cochain::from_operator_matrix(series.coefficient(1).matrix())
        )
        .unwrap_or(false));
    }
    Ok(OrderCheck {
        order: series.order(),
        first_failing_order: None,
    })
}

fn expect_valid_series(series: &DeformationSeries) -> Result<(), DeformationError> {
    let check = check_order_n_deformation(series)?;
    match check.first_failing_order {
        None => Ok(()),
        Some(first_failing) => Err(DeformationError::InvalidSeries {
            order: series.order(),
            first_failing,
        }),
    }
}

/// The obstruction to extending an order-n deformation one order further:
/// `Ob(u, v) = sum_{i+j=n+1, i,j>=1} ([tau_i u, tau_j v] - tau_i(rho_l(tau_j u) v + rho_r(tau_j v) u))`.
/// Always a 2-cocycle of the base operator.
pub fn obstruction_cocycle(series: &DeformationSeries) -> Result<Cochain, DeformationError> {
    expect_valid_series(series)?;
    let rep = series.base().rep();
    let algebra = rep.algebra();
    let m = rep.dim();
    let n = series.order();
    let mut out = Cochain::zero(2, m, rep.algebra_dim());
    for u in 0..m {
        for v in 0..m {
            let mut acc = crate::linalg::zero_vec(rep.algebra_dim());
            for i in 1..=n {
                let j = n + 1 - i;
                if j < 1 || j > n {
                    continue;
                }
                let ti = series.coefficient(i);
                let tj = series.coefficient(j);
                let term = algebra
                    .bracket(&ti.apply_basis(u), &tj.apply_basis(v))
                    .expect("shape");
                acc = vec_add(&acc, &term);
                let mut inner = rep.rho_l_column(&tj.apply_basis(u), v);
                for (a, b) in inner
                    .iter_mut()
                    .zip(rep.rho_r_column(&tj.apply_basis(v), u))
                {
                    *a = &*a + b;
                }
                acc = vec_sub(&acc, &ti.apply(&inner));
            }
            out.set_value(&[u, v], acc);
        }
    }
    Ok(out)
}

/// Decides extendability of an order-n deformation by solving
/// `d_T X = -obstruction` exactly. Returns the next term when the
/// obstruction is a coboundary and `None` when its class is nonzero.
pub fn check_extendable(
    series: &DeformationSeries,
    max_degree: usize,
) -> Result<Option<LinearOperator>, DeformationError> {
    let ob = obstruction_cocycle(series)?;
    let mat = coboundary_matrix(series.base(), 1, max_degree)?;
    let rhs: Vec<Rat> = ob.flatten().iter().map(|c| -c).collect();
    Ok(mat.solve(&rhs).map(|(particular, _)| {
        let rep = series.base().rep();
        let cochain = Cochain::from_flat(1, rep.dim(), rep.algebra_dim(), particular)
            .expect("solution has cochain length");
        LinearOperator::new(rep.clone(), cochain.to_operator_matrix())
            .expect("coboundary preserves shape")
    }))
}

/// Outcome of iterated extension: either the requested order was reached, or
/// extension is blocked at some order by a nonzero obstruction class.
#[derive(Debug, Clone)]
pub enum ExtensionOutcome {
    Extended(DeformationSeries),
    Blocked { order: usize, obstruction: Cochain },
}

/// Greedily extends `t + t tau1` order by order. Returns the first series of
/// the requested order, or the blocking order with its obstruction
/// representative.
pub fn extend_to_order(
    t: &LinearOperator,
    tau1: &LinearOperator,
    target_order: usize,
    order_cap: usize,
    max_degree: usize,
) -> Result<ExtensionOutcome, DeformationError> {
    if target_order > order_cap {
        return Err(DeformationError::OrderCapExceeded {
            requested: target_order,
            cap: order_cap,
        });
    }
    expect_same_shape(t, tau1)?;
    t.ensure_rota_baxter()?;
    if !is_cocycle(t, &Cochain::from_operator_matrix(tau1.matrix()))? {
        return Err(DeformationError::NotCocycle);
    }
    if target_order == 0 {
        return Ok(ExtensionOutcome::Extended(DeformationSeries::constant(
            t.clone(),
            0,
        )));
    }
    let mut series = DeformationSeries::new(t.clone(), vec![tau1.clone()])?;
    while series.order() < target_order {
        match check_extendable(&series, max_degree)? {
            Some(next) => series.push_term(next),
            None => {
                let obstruction = obstruction_cocycle(&series)?;
                return Ok(ExtensionOutcome::Blocked {
                    order: series.order(),
                    obstruction,
                });
            }
        }
    }
    Ok(ExtensionOutcome::Extended(series))
}

/// Witness data for a formal equivalence: the element `x` driving the
/// degree-1 coefficients, plus optional higher coefficients of the two
/// intertwining maps (index `i + 2` in the series; missing entries are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalencePair {
    pub x: Vec<Rat>,
    pub higher_phi: Vec<Matrix>,
    pub higher_varphi: Vec<Matrix>,
}

impl EquivalencePair {
    pub fn from_element(x: Vec<Rat>) -> Self {
        EquivalencePair {
            x,
            higher_phi: Vec::new(),
            higher_varphi: Vec::new(),
        }
    }
}

/// Checks whether the pair `(phi_t, varphi_t)` built from the witness makes
/// `source` and `target` equivalent as truncated deformations: the four
/// homomorphism conditions must hold coefficientwise in `t` up to the series
/// order, with `target_t . varphi_t = phi_t . source_t` as the intertwining.
/// When true, the source infinitesimal differs from the target one by the
/// degree-0 coboundary of `x`.
pub fn check_formal_equivalence(
    target: &DeformationSeries,
    source: &DeformationSeries,
    pair: &EquivalencePair,
) -> Result<bool, DeformationError> {
    if target.base() != source.base() {
        return Err(DeformationError::ShapeMismatch(
            "series have different base operators".into(),
        ));
    }
    if target.order() != source.order() {
        return Err(DeformationError::ShapeMismatch(
            "series have different orders".into(),
        ));
    }
    let rep = target.base().rep();
    let algebra = rep.algebra();
    let n = rep.algebra_dim();
    let m = rep.dim();
    if pair.x.len() != n {
        return Err(DeformationError::ShapeMismatch(format!(
            "witness element has length {}, algebra dimension is {n}",
            pair.x.len()
        )));
    }
    for phi in &pair.higher_phi {
        if phi.rows() != n || phi.cols() != n {
            return Err(DeformationError::ShapeMismatch(format!(
                "higher phi must be {n}x{n}"
            )));
        }
    }
    for varphi in &pair.higher_varphi {
        if varphi.rows() != m || varphi.cols() != m {
            return Err(DeformationError::ShapeMismatch(format!(
                "higher varphi must be {m}x{m}"
            )));
        }
    }
    let order = target.order();
    // Coefficient ladders of phi_t and varphi_t.
    let mut phi: Vec<Matrix> = vec![Matrix::identity(n), algebra.left_multiplication(&pair.x)?];
    let mut varphi: Vec<Matrix> = vec![Matrix::identity(m), rep.rho_l(&pair.x)];
    for s in 2..=order {
        phi.push(
            pair.higher_phi
                .get(s - 2)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(n, n)),
        );
        varphi.push(
            pair.higher_varphi
                .get(s - 2)
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(m, m)),
        );
    }

    for s in 0..=order {
        // (i) phi_t is an algebra endomorphism coefficientwise.
        for y in 0..n {
            for z in 0..n {
                let mut lhs = crate::linalg::zero_vec(n);
                for a in 0..=s {
                    let term = algebra
                        .bracket(&phi[a].column(y), &phi[s - a].column(z))
                        .expect("shape");
                    lhs = vec_add(&lhs, &term);
                }
                if lhs != phi[s].mul_vec(&algebra.bracket_basis(y, z)) {
                    return Ok(false);
                }
            }
        }
        // (ii)/(iii) varphi_t intertwines the actions along phi_t.
        for y in 0..n {
            let lhs = varphi[s].mul(rep.rho_l_basis(y));
            let mut rhs = Matrix::zeros(m, m);
            for a in 0..=s {
                rhs = rhs.add(&rep.rho_l(&phi[a].column(y)).mul(&varphi[s - a]));
            }
            if lhs != rhs {
                return Ok(false);
            }
            let lhs = varphi[s].mul(rep.rho_r_basis(y));
            let mut rhs = Matrix::zeros(m, m);
            for a in 0..=s {
                rhs = rhs.add(&rep.rho_r(&phi[a].column(y)).mul(&varphi[s - a]));
            }
            if lhs != rhs {
                return Ok(false);
            }
        }
        // (iv) target_t . varphi_t = phi_t . source_t.
        let mut lhs = Matrix::zeros(n, m);
        let mut rhs = Matrix::zeros(n, m);
        for a in 0..=s {
            lhs = lhs.add(&target.coefficient(a).matrix().mul(&varphi[s - a]));
            rhs = rhs.add(&phi[a].mul(source.coefficient(s - a).matrix()));
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search utility: the basis vectors of the algebra that satisfy the
/// Nijenhuis conditions for `t`. A full description of the Nijenhuis set is
/// a variety; the probe plus user-supplied candidates is what the rigidity
/// certificate consumes.
pub fn nijenhuis_basis_elements(t: &LinearOperator) -> Result<Vec<Vec<Rat>>, DeformationError> {
    let n = t.rep().algebra_dim();
    let mut found = Vec::new();
    for i in 0..n {
        let x = basis_vec(n, i);
        if check_nijenhuis_element(t, &x)?.ok() {
            found.push(x);
        }
    }
    Ok(found)
}

/// One-sided rigidity certificate: true when the span of the degree-0
/// coboundaries of the supplied Nijenhuis elements is all of the degree-1
/// cocycle space. False is inconclusive (the generators may merely be
/// insufficient).
pub fn rigidity_certificate(
    t: &LinearOperator,
    nijenhuis_generators: &[Vec<Rat>],
    max_degree: usize,
) -> Result<bool, DeformationError> {
    t.ensure_rota_baxter()?;
    let rep = t.rep();
    let m = rep.dim();
    let n = rep.algebra_dim();
    let mut columns = Vec::with_capacity(nijenhuis_generators.len());
    for x in nijenhuis_generators {
        let check = check_nijenhuis_element(t, x)?;
        if !check.ok() {
            return Err(DeformationError::NotNijenhuis {
                failed: check.failed.len(),
            });
        }
        let cochain = Cochain::from_target_vector(x.clone(), m);
        columns.push(rb_coboundary(t, &cochain)?.flatten().to_vec());
    }
    let dim_z1 = coboundary_matrix(t, 1, max_degree)?.kernel_basis().len();
    let span = Matrix::from_columns(n * m, &columns);
    Ok(span.rank() == dim_z1)
}

/// The bracket coefficients induced on the module by a deformation series:
/// `omega_i(u, v) = rho_l(tau_i u) v + rho_r(tau_i v) u` per order, together
/// with a coefficientwise verification that the truncated sum satisfies the
/// Leibniz identity modulo `t^(order+1)`.
#[derive(Debug, Clone)]
pub struct DeformedBracketExpansion {
    pub per_order: Vec<Cochain>,
    pub leibniz_coefficientwise: bool,
}

pub fn induced_deformed_bracket(
    series: &DeformationSeries,
) -> Result<DeformedBracketExpansion, DeformationError> {
    expect_valid_series(series)?;
    let rep = series.base().rep();
    let m = rep.dim();
    let mut per_order = Vec::with_capacity(series.order() + 1);
    for i in 0..=series.order() {
        let op = series.coefficient(i);
        let mut omega = Cochain::zero(2, m, m);
        for u in 0..m {
            for v in 0..m {
                let mut value = rep.rho_l_column(&op.apply_basis(u), v);
                for (a, b) in value
                    .iter_mut()
                    .zip(rep.rho_r_column(&op.apply_basis(v), u))
                {
                    *a = &*a + b;
                }
                omega.set_value(&[u, v], value);
            }
        }
        per_order.push(omega);
    }
    // Leibniz identity coefficientwise:
    // sum_{a+b=s} ( omega_a(u, omega_b(v,w)) - omega_a(omega_b(u,v), w)
    //             - omega_a(v, omega_b(u,w)) ) = 0.
    let mut leibniz_ok = true;
    'outer: for s in 0..=series.order() {
        for u in 0..m {
            for v in 0..m {
                for w in 0..m {
                    let mut acc = crate::linalg::zero_vec(m);
                    for a in 0..=s {
                        let b = s - a;
                        let oa = &per_order[a];
                        let ob = &per_order[b];
                        acc = vec_add(&acc, &oa.eval_insert(&[u], ob.value(&[v, w]), &[]));
                        acc = vec_sub(&acc, &oa.eval_insert(&[], ob.value(&[u, v]), &[w]));
                        acc = vec_sub(&acc, &oa.eval_insert(&[v], ob.value(&[u, w]), &[]));
                    }
                    if !vec_is_zero(&acc) {
                        leibniz_ok = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(DeformedBracketExpansion {
        per_order,
        leibniz_coefficientwise: leibniz_ok,
    })
}
