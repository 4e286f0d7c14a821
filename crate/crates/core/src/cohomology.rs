//! Cochain complexes of Leibniz algebras and the complex attached to a
//! relative Rota-Baxter operator, with exact cohomology dimensions.
//!
//! A degree-`k` cochain is a multilinear map from `k` copies of the source
//! space to the target space, stored as a dense rational tensor. The flat
//! layout is fixed so every matrix this module produces is bit-reproducible:
//! basis cochains are ordered tuple-major (lexicographically on the argument
//! tuple), then by target coordinate; see `flat_index`.
//!
//! Two independent implementations of the operator coboundary are provided:
//! [`rb_coboundary`] evaluates the explicit formula, while
//! [`rb_coboundary_via_induced`] runs the generic [`lp_coboundary`] on the
//! induced algebra/representation pair. The test suites hold them equal.

use crate::leibniz::Representation;
use crate::linalg::{vec_sub, zero_vec, Matrix, Rat};
use crate::rota_baxter::{LinearOperator, OperatorError};
use num_traits::Zero;
use thiserror::Error;

/// Default cap on the degree of any cochain space materialised as a matrix;
/// `C^k` grows as `target_dim * source_dim^k`.
pub const DEFAULT_MAX_DEGREE: usize = 4;

#[derive(Debug, Clone, Error)]
pub enum CohomologyError {
    #[error("cochain shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("degree {requested} exceeds the configured cap {cap}")]
    DegreeCapExceeded { requested: usize, cap: usize },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Multilinear map `source^(x k) -> target` as a dense coefficient tensor.
/// Degree 0 is a single target vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    source_dim: usize,
    target_dim: usize,
    coeffs: Vec<Rat>,
}

impl std::fmt::Debug for Cochain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Cochain(degree {}, {}^x{} -> {}, coeffs {:?})",
            self.degree,
            self.source_dim,
            self.degree,
            self.target_dim,
            self.coeffs
                .iter()
                .map(crate::linalg::format_rat)
                .collect::<Vec<_>>()
        )
    }
}

/// All argument tuples of length `k` over `0..dim`, in lexicographic order.
pub fn index_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; k];
    if k == 0 {
        out.push(current);
        return out;
    }
    if dim == 0 {
        return out;
    }
    loop {
        out.push(current.clone());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < dim {
                break;
            }
            current[pos] = 0;
        }
    }
}

impl Cochain {
    pub fn zero(degree: usize, source_dim: usize, target_dim: usize) -> Self {
        let count = source_dim.pow(degree as u32) * target_dim;
        Cochain {
            degree,
            source_dim,
            target_dim,
            coeffs: vec![Rat::zero(); count],
        }
    }

    /// Degree-0 cochain: a single element of the target space.
    pub fn from_target_vector(value: Vec<Rat>, source_dim: usize) -> Self {
        Cochain {
            degree: 0,
            source_dim,
            target_dim: value.len(),
            coeffs: value,
        }
    }

    /// Degree-1 cochain from the matrix of a linear map (columns are the
    /// images of source basis vectors).
    pub fn from_operator_matrix(matrix: &Matrix) -> Self {
        let (rows, cols) = (matrix.rows(), matrix.cols());
        let mut c = Cochain::zero(1, cols, rows);
        for j in 0..cols {
            c.set_value(&[j], matrix.column(j));
        }
        c
    }

    /// Matrix of a degree-1 cochain.
    pub fn to_operator_matrix(&self) -> Matrix {
        assert_eq!(self.degree, 1, "only degree-1 cochains are linear maps");
        Matrix::from_fn(self.target_dim, self.source_dim, |r, c| {
            self.coeffs[c * self.target_dim + r].clone()
        })
    }

    pub fn from_flat(
        degree: usize,
        source_dim: usize,
        target_dim: usize,
        coeffs: Vec<Rat>,
    ) -> Result<Self, CohomologyError> {
        let expected = source_dim.pow(degree as u32) * target_dim;
        if coeffs.len() != expected {
            return Err(CohomologyError::ShapeMismatch(format!(
                "flat cochain has {} coefficients, expected {expected}",
                coeffs.len()
            )));
        }
        Ok(Cochain {
            degree,
            source_dim,
            target_dim,
            coeffs,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// Lexicographic rank of an argument tuple.
    fn tuple_rank(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.degree);
        tuple.iter().fold(0usize, |acc, &t| {
            debug_assert!(t < self.source_dim);
            acc * self.source_dim + t
        })
    }

    /// Flat coefficient index of `(tuple, target coordinate)`.
    pub fn flat_index(&self, tuple: &[usize], target: usize) -> usize {
        self.tuple_rank(tuple) * self.target_dim + target
    }

    /// Value on a basis tuple, as a slice of target coordinates.
    pub fn value(&self, tuple: &[usize]) -> &[Rat] {
        let base = self.tuple_rank(tuple) * self.target_dim;
        &self.coeffs[base..base + self.target_dim]
    }

    pub fn set_value(&mut self, tuple: &[usize], value: Vec<Rat>) {
        assert_eq!(value.len(), self.target_dim, "target length mismatch");
        let base = self.tuple_rank(tuple) * self.target_dim;
        self.coeffs[base..base + self.target_dim].clone_from_slice(&value);
    }

    /// Evaluates with basis arguments except for one general vector inserted
    /// between `before` and `after`, by linearity in that slot.
    pub fn eval_insert(&self, before: &[usize], vector: &[Rat], after: &[usize]) -> Vec<Rat> {
        assert_eq!(
            before.len() + 1 + after.len(),
            self.degree,
            "argument count mismatch"
        );
        assert_eq!(
            vector.len(),
            self.source_dim,
            "inserted vector length mismatch"
        );
        let mut out = zero_vec(self.target_dim);
        let mut tuple = Vec::with_capacity(self.degree);
        for (b, coeff) in vector.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            tuple.clear();
            tuple.extend_from_slice(before);
            tuple.push(b);
            tuple.extend_from_slice(after);
            for (o, v) in out.iter_mut().zip(self.value(&tuple)) {
                if !v.is_zero() {
                    *o = &*o + coeff * v;
                }
            }
        }
        out
    }

    /// Full multilinear evaluation on general vectors.
    pub fn evaluate(&self, args: &[&[Rat]]) -> Vec<Rat> {
        assert_eq!(args.len(), self.degree, "argument count mismatch");
        let mut out = zero_vec(self.target_dim);
        for tuple in index_tuples(self.source_dim, self.degree) {
            let mut scale = Rat::from_integer(1.into());
            let mut zero = false;
            for (slot, &b) in tuple.iter().enumerate() {
                let c = &args[slot][b];
                if c.is_zero() {
                    zero = true;
                    break;
                }
                scale = &scale * c;
            }
            if zero {
                continue;
            }
            for (o, v) in out.iter_mut().zip(self.value(&tuple)) {
                if !v.is_zero() {
                    *o = &*o + &scale * v;
                }
            }
        }
        out
    }

    pub fn flatten(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Cochain, f: impl Fn(&Rat, &Rat) -> Rat) -> Cochain {
        assert_eq!(
            (self.degree, self.source_dim, self.target_dim),
            (other.degree, other.source_dim, other.target_dim),
            "cochain shape mismatch"
        );
        Cochain {
            degree: self.degree,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Cochain {
        Cochain {
            degree: self.degree,
            source_dim: self.source_dim,
            target_dim: self.target_dim,
            coeffs: self.coeffs.iter().map(|a| c * a).collect(),
        }
    }

    pub fn neg(&self) -> Cochain {
        self.scale(&-Rat::from_integer(1.into()))
    }
}

fn sign(exponent: usize) -> Rat {
    if exponent.is_multiple_of(2) {
        Rat::from_integer(1.into())
    } else {
        Rat::from_integer((-1).into())
    }
}

fn add_scaled(acc: &mut [Rat], sign: &Rat, v: &[Rat]) {
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + sign * x;
        }
    }
}

/// Coboundary of the cochain complex of a Leibniz algebra with coefficients
/// in a representation. The cochain's source must be the algebra underlying
/// `rep` and its target the module of `rep`.
///
/// For a degree-`k` cochain `f`,
/// `(df)(x_1..x_{k+1}) = sum_i (-1)^{i+1} rho_l(x_i) f(..x_i omitted..)
///  + (-1)^{k+1} rho_r(x_{k+1}) f(x_1..x_k)
///  + sum_{i<j} (-1)^i f(.., x_i omitted, .., [x_i,x_j] at slot j, ..)`.
/// At degree 0 only the middle term survives: `(dv)(x) = -rho_r(x) v`.
pub fn lp_coboundary(rep: &Representation, f: &Cochain) -> Result<Cochain, CohomologyError> {
    let algebra = rep.algebra();
    let n = algebra.dim();
    let m = rep.dim();
    if f.source_dim() != n || f.target_dim() != m {
        return Err(CohomologyError::ShapeMismatch(format!(
            "cochain is {}^x{} -> {}, complex needs {}^x{} -> {}",
            f.source_dim(),
            f.degree(),
            f.target_dim(),
            n,
            f.degree(),
            m
        )));
    }
    let k = f.degree();
    let mut out = Cochain::zero(k + 1, n, m);
    for tuple in index_tuples(n, k + 1) {
        let mut acc = zero_vec(m);
        // Action terms with one argument omitted.
        for i in 0..k {
            let mut sub = tuple.clone();
            sub.remove(i);
            let fv = f.value(&sub);
            let applied = rep.rho_l_basis(tuple[i]).mul_vec(fv);
            add_scaled(&mut acc, &sign(i), &applied); // (-1)^{(i+1)+1}
        }
        // Trailing right-action term.
        let applied = rep.rho_r_basis(tuple[k]).mul_vec(f.value(&tuple[..k]));
        add_scaled(&mut acc, &sign(k + 1), &applied);
        // Bracket-insertion terms.
        for p in 0..k + 1 {
            for q in p + 1..k + 1 {
                let bracket = algebra.bracket_basis(tuple[p], tuple[q]);
                let mut before = Vec::with_capacity(k);
                before.extend_from_slice(&tuple[..p]);
                before.extend_from_slice(&tuple[p + 1..q]);
                let inserted = f.eval_insert(&before, &bracket, &tuple[q + 1..]);
                add_scaled(&mut acc, &sign(p + 1), &inserted);
            }
        }
        out.set_value(&tuple, acc);
    }
    Ok(out)
}

fn expect_operator_cochain(op: &LinearOperator, f: &Cochain) -> Result<(), CohomologyError> {
    let m = op.rep().dim();
    let n = op.rep().algebra_dim();
    if f.source_dim() != m || f.target_dim() != n {
        return Err(CohomologyError::ShapeMismatch(format!(
            "cochain is {}^x{} -> {}, operator complex needs {}^x{} -> {}",
            f.source_dim(),
            f.degree(),
            f.target_dim(),
            m,
            f.degree(),
            n
        )));
    }
    Ok(())
}

/// Coboundary of the complex attached to a relative Rota-Baxter operator,
/// computed from the explicit formula. For `f` of degree `d`,
///
/// `(d_T f)(v_1..v_{d+1}) =
///    sum_i (-1)^{i+1} ( [T v_i, f(..v_i omitted..)] - T rho_r(f(..v_i omitted..)) v_i )
///  + (-1)^{d+1} [f(v_1..v_d), T v_{d+1}] + (-1)^d T rho_l(f(v_1..v_d)) v_{d+1}
///  + sum_{i<j} (-1)^i f(.., v_i omitted, .., rho_l(T v_i) v_j + rho_r(T v_j) v_i at slot j, ..)`.
///
/// At degree 0 this is `(d_T x)(u) = T rho_l(x) u - [x, T u]`, the direction
/// used throughout the deformation module.
pub fn rb_coboundary(op: &LinearOperator, f: &Cochain) -> Result<Cochain, CohomologyError> {
    op.ensure_rota_baxter()?;
    expect_operator_cochain(op, f)?;
    let rep = op.rep();
    let algebra = rep.algebra();
    let m = rep.dim();
    let n = rep.algebra_dim();
    let d = f.degree();
    let mut out = Cochain::zero(d + 1, m, n);
    for tuple in index_tuples(m, d + 1) {
        let mut acc = zero_vec(n);
        for i in 0..d {
            let mut sub = tuple.clone();
            sub.remove(i);
            let fv = f.value(&sub).to_vec();
            let t_vi = op.apply_basis(tuple[i]);
            let s = sign(i); // (-1)^{(i+1)+1}
            add_scaled(&mut acc, &s, &algebra.bracket(&t_vi, &fv).expect("shape"));
            let inner = rep.rho_r_column(&fv, tuple[i]);
            add_scaled(&mut acc, &-s, &op.apply(&inner));
        }
        let front = f.value(&tuple[..d]).to_vec();
        let t_last = op.apply_basis(tuple[d]);
        add_scaled(
            &mut acc,
            &sign(d + 1),
            &algebra.bracket(&front, &t_last).expect("shape"),
        );
        let inner = rep.rho_l_column(&front, tuple[d]);
        add_scaled(&mut acc, &sign(d), &op.apply(&inner));
        for p in 0..d + 1 {
            for q in p + 1..d + 1 {
                let t_p = op.apply_basis(tuple[p]);
                let t_q = op.apply_basis(tuple[q]);
                let mut arg = rep.rho_l_column(&t_p, tuple[q]);
                let right = rep.rho_r_column(&t_q, tuple[p]);
                for (a, r) in arg.iter_mut().zip(&right) {
                    *a = &*a + r;
                }
                let mut before = Vec::with_capacity(d);
                before.extend_from_slice(&tuple[..p]);
                before.extend_from_slice(&tuple[p + 1..q]);
                let inserted = f.eval_insert(&before, &arg, &tuple[q + 1..]);
                add_scaled(&mut acc, &sign(p + 1), &inserted);
            }
        }
        out.set_value(&tuple, acc);
    }
    Ok(out)
}

/// Second, independent route to the same coboundary: the generic
/// [`lp_coboundary`] of the induced bracket on `V` with coefficients in the
/// induced representation on `g`.
pub fn rb_coboundary_via_induced(
    op: &LinearOperator,
    f: &Cochain,
) -> Result<Cochain, CohomologyError> {
    expect_operator_cochain(op, f)?;
    let induced = op.induced_representation()?;
    lp_coboundary(&induced, f)
}

/// Matrix of the operator coboundary `C^k -> C^{k+1}` in the standard basis,
/// shape `(n m^{k+1}) x (n m^k)` where `m` is the module dimension and `n`
/// the algebra dimension. Columns and rows use the flat layout of
/// [`Cochain::flat_index`]. Degrees above `max_degree` are refused.
pub fn coboundary_matrix(
    op: &LinearOperator,
    k: usize,
    max_degree: usize,
) -> Result<Matrix, CohomologyError> {
    if k + 1 > max_degree {
        return Err(CohomologyError::DegreeCapExceeded {
            requested: k + 1,
            cap: max_degree,
        });
    }
    op.ensure_rota_baxter()?;
    let m = op.rep().dim();
    let n = op.rep().algebra_dim();
    let domain = m.pow(k as u32) * n;
    let codomain = m.pow(k as u32 + 1) * n;
    let mut out = Matrix::zeros(codomain, domain);
    for col in 0..domain {
        let mut basis = Cochain::zero(k, m, n);
        {
            let coeffs = basis.coeffs.as_mut_slice();
            coeffs[col] = Rat::from_integer(1.into());
        }
        let image = rb_coboundary(op, &basis)?;
        for (row, value) in image.flatten().iter().enumerate() {
            if !value.is_zero() {
                out.set(row, col, value.clone());
            }
        }
    }
    Ok(out)
}

/// Exact dimension data of one cohomology group of the operator complex.
#[derive(Debug, Clone)]
pub struct CohomologyReport {
    pub degree: usize,
    pub dim_cochains: usize,
    pub dim_cocycles: usize,
    pub dim_coboundaries: usize,
    pub dim_cohomology: usize,
    pub cocycle_basis: Vec<Cochain>,
}

/// Computes `dim Z^k` (nullity of the degree-`k` coboundary matrix),
/// `dim B^k` (rank of the degree-`k-1` matrix, zero at `k = 0`) and their
/// difference, together with an explicit kernel basis.
pub fn cohomology_report(
    op: &LinearOperator,
    k: usize,
    max_degree: usize,
) -> Result<CohomologyReport, CohomologyError> {
    let m = op.rep().dim();
    let n = op.rep().algebra_dim();
    let mat = coboundary_matrix(op, k, max_degree)?;
    let kernel = mat.kernel_basis();
    let dim_cocycles = kernel.len();
    let dim_coboundaries = if k == 0 {
        0
    } else {
        coboundary_matrix(op, k - 1, max_degree)?.rank()
    };
    let cocycle_basis = kernel
        .into_iter()
        .map(|flat| Cochain::from_flat(k, m, n, flat).expect("kernel vector has cochain length"))
        .collect::<Vec<_>>();
    Ok(CohomologyReport {
        degree: k,
        dim_cochains: m.pow(k as u32) * n,
        dim_cocycles,
        dim_coboundaries,
        dim_cohomology: dim_cocycles - dim_coboundaries,
        cocycle_basis,
    })
}

/// True iff the operator coboundary of `f` vanishes identically.
pub fn is_cocycle(op: &LinearOperator, f: &Cochain) -> Result<bool, CohomologyError> {
    Ok(rb_coboundary(op, f)?.is_zero())
}

/// Exact preimage under the coboundary: some degree-`k` cochain `f` with
/// `d_T f = g`, or `None` when `g` is not a coboundary.
pub fn coboundary_preimage(
    op: &LinearOperator,
    g: &Cochain,
    max_degree: usize,
) -> Result<Option<Cochain>, CohomologyError> {
    expect_operator_cochain(op, g)?;
    if g.degree() == 0 {
        return Err(CohomologyError::ShapeMismatch(
            "degree-0 cochains have no preimage degree".into(),
        ));
    }
    let k = g.degree() - 1;
    let mat = coboundary_matrix(op, k, max_degree)?;
    Ok(mat.solve(g.flatten()).map(|(particular, _)| {
        Cochain::from_flat(k, g.source_dim(), g.target_dim(), particular)
            .expect("solution vector has cochain length")
    }))
}

/// Residual of the explicit degree-1 cocycle criterion,
/// `[Tu, f(v)] + [f(u), Tv] - T(rho_l(f(u))v + rho_r(f(v))u) - f(rho_l(Tu)v + rho_r(Tv)u)`,
/// evaluated on one basis pair. Used to cross-check `is_cocycle` at degree 1.
pub fn degree_one_cocycle_residual(
    op: &LinearOperator,
    f: &Matrix,
    u: usize,
    v: usize,
) -> Vec<Rat> {
    let rep = op.rep();
    let algebra = rep.algebra();
    let fu = f.column(u);
    let fv = f.column(v);
    let tu = op.apply_basis(u);
    let tv = op.apply_basis(v);
    let mut acc = algebra.bracket(&tu, &fv).expect("shape");
    acc = crate::linalg::vec_add(&acc, &algebra.bracket(&fu, &tv).expect("shape"));
    let mut inner = rep.rho_l_column(&fu, v);
    for (a, b) in inner.iter_mut().zip(rep.rho_r_column(&fv, u)) {
        *a = &*a + b;
    }
    acc = vec_sub(&acc, &op.apply(&inner));
    let mut arg = rep.rho_l_column(&tu, v);
    for (a, b) in arg.iter_mut().zip(rep.rho_r_column(&tv, u)) {
        *a = &*a + b;
    }
    let f_cochain = Cochain::from_operator_matrix(f);
    vec_sub(&acc, &f_cochain.eval_insert(&[], &arg, &[]))
}
