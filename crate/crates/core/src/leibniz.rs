//! Finite-dimensional Leibniz algebras given by rational structure constants,
//! their representations, and exhaustive axiom verification on basis tuples.
//!
//! A Leibniz algebra carries a bilinear bracket satisfying
//! `[x,[y,z]] = [[x,y],z] + [y,[x,z]]`. A representation is a pair of linear
//! actions `rho_l, rho_r : g -> gl(V)` compatible with the bracket. Since all
//! axioms are multilinear, checking them on basis tuples is a finite
//! certificate for the whole space.

use crate::linalg::{basis_vec, vec_is_zero, vec_sub, zero_vec, Matrix, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum AlgebraError {
    #[error("vector has length {got}, algebra dimension is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basis index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("bracket does not satisfy the Leibniz identity ({violations} violating triples)")]
    NotLeibniz { violations: usize },
    #[error("representation shape invalid: {0}")]
    BadRepresentationShape(String),
}

/// Leibniz algebra of dimension `n` with bracket
/// `[e_i, e_j] = sum_k c[i][j][k] e_k` stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizAlgebra {
    dim: usize,
    // (i * dim + j) * dim + k, all 0-based
    constants: Vec<Rat>,
}

/// One failing instance of the Leibniz identity, with 1-based basis indices
/// and the residual `[e_i,[e_j,e_k]] - [[e_i,e_j],e_k] - [e_j,[e_i,e_k]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub residual: Vec<Rat>,
}

/// Outcome of checking the Leibniz identity on every basis triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizCheck {
    pub violations: Vec<LeibnizViolation>,
}

impl LeibnizCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl LeibnizAlgebra {
    /// Algebra with the zero bracket.
    pub fn zero(dim: usize) -> Self {
        LeibnizAlgebra {
            dim,
            constants: vec![Rat::zero(); dim * dim * dim],
        }
    }

    /// Builds an algebra from sparse nonzero brackets `[e_i, e_j] += c * e_k`
    /// with 1-based indices, the convention used in all I/O.
    pub fn from_sparse_brackets(
        dim: usize,
        brackets: &[(usize, usize, usize, Rat)],
    ) -> Result<Self, AlgebraError> {
        let mut algebra = LeibnizAlgebra::zero(dim);
        for &(i, j, k, ref c) in brackets {
            for index in [i, j, k] {
                if index == 0 || index > dim {
                    return Err(AlgebraError::IndexOutOfRange { index, dim });
                }
            }
            let slot = ((i - 1) * dim + (j - 1)) * dim + (k - 1);
            algebra.constants[slot] = &algebra.constants[slot] + c;
        }
        Ok(algebra)
    }

    /// Builds an algebra from a dense `dim^3` constant table laid out as
    /// `(i * dim + j) * dim + k`.
    pub fn from_structure_constants(dim: usize, constants: Vec<Rat>) -> Result<Self, AlgebraError> {
        if constants.len() != dim * dim * dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim * dim * dim,
                got: constants.len(),
            });
        }
        Ok(LeibnizAlgebra { dim, constants })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `c^k_{ij}` with 0-based indices.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// `[e_i, e_j]` as a coordinate vector, 0-based indices.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        let base = (i * self.dim + j) * self.dim;
        self.constants[base..base + self.dim].to_vec()
    }

    fn expect_dim(&self, v: &[Rat]) -> Result<(), AlgebraError> {
        if v.len() != self.dim {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>, AlgebraError> {
        self.expect_dim(x)?;
        self.expect_dim(y)?;
        let mut out = zero_vec(self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let scale = xi * yj;
                let base = (i * self.dim + j) * self.dim;
                for (o, c) in out.iter_mut().zip(&self.constants[base..base + self.dim]) {
                    if !c.is_zero() {
                        *o = &*o + &scale * c;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of the left multiplication `L_x : y -> [x, y]`.
    pub fn left_multiplication(&self, x: &[Rat]) -> Result<Matrix, AlgebraError> {
        self.expect_dim(x)?;
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(x, &basis_vec(self.dim, j))?;
            for (k, value) in col.into_iter().enumerate() {
                m.set(k, j, value);
            }
        }
        Ok(m)
    }

    /// Matrix of the right multiplication `R_x : y -> [y, x]`.
    pub fn right_multiplication(&self, x: &[Rat]) -> Result<Matrix, AlgebraError> {
        self.expect_dim(x)?;
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(&basis_vec(self.dim, j), x)?;
            for (k, value) in col.into_iter().enumerate() {
                m.set(k, j, value);
            }
        }
        Ok(m)
    }

    /// Checks `[e_i,[e_j,e_k]] = [[e_i,e_j],e_k] + [e_j,[e_i,e_k]]` on every
    /// basis triple, reporting each violating triple with its residual.
    pub fn check_leibniz_identity(&self) -> LeibnizCheck {
        let mut violations = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let lhs = self.bracket_with_basis_left(i, &self.bracket_basis(j, k));
                    let rhs_a = self.bracket_with_basis_right(&self.bracket_basis(i, j), k);
                    let rhs_b = self.bracket_with_basis_left(j, &self.bracket_basis(i, k));
                    let mut residual = vec_sub(&lhs, &rhs_a);
                    residual = vec_sub(&residual, &rhs_b);
                    if !vec_is_zero(&residual) {
                        violations.push(LeibnizViolation {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            residual,
                        });
                    }
                }
            }
        }
        LeibnizCheck { violations }
    }

    // [e_i, v]
    fn bracket_with_basis_left(&self, i: usize, v: &[Rat]) -> Vec<Rat> {
        let mut out = zero_vec(self.dim);
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            let base = (i * self.dim + j) * self.dim;
            for (o, c) in out.iter_mut().zip(&self.constants[base..base + self.dim]) {
                if !c.is_zero() {
                    *o = &*o + vj * c;
                }
            }
        }
        out
    }

    // [v, e_j]
    fn bracket_with_basis_right(&self, v: &[Rat], j: usize) -> Vec<Rat> {
        let mut out = zero_vec(self.dim);
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            let base = (i * self.dim + j) * self.dim;
            for (o, c) in out.iter_mut().zip(&self.constants[base..base + self.dim]) {
                if !c.is_zero() {
                    *o = &*o + vi * c;
                }
            }
        }
        out
    }

    /// The algebra acting on itself by left/right multiplications.
    /// Refuses algebras that fail the Leibniz identity.
    pub fn regular_representation(&self) -> Result<Representation, AlgebraError> {
        let check = self.check_leibniz_identity();
        if !check.ok() {
            return Err(AlgebraError::NotLeibniz {
                violations: check.violations.len(),
            });
        }
        let rho_l: Result<Vec<Matrix>, AlgebraError> = (0..self.dim)
            .map(|i| self.left_multiplication(&basis_vec(self.dim, i)))
            .collect();
        let rho_r: Result<Vec<Matrix>, AlgebraError> = (0..self.dim)
            .map(|i| self.right_multiplication(&basis_vec(self.dim, i)))
            .collect();
        Representation::new(self.clone(), self.dim, rho_l?, rho_r?)
    }
}

/// The three compatibility axioms a representation must satisfy, named by
/// their shape. The operator bracket is the matrix commutator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepresentationAxiom {
    /// `rho_l([x,y]) = [rho_l(x), rho_l(y)]`
    LeftCompatibility,
    /// `rho_r([x,y]) = [rho_l(x), rho_r(y)]`
    RightCompatibility,
    /// `rho_r(y) . rho_l(x) = -rho_r(y) . rho_r(x)`
    RightAnnihilation,
}

impl std::fmt::Display for RepresentationAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            RepresentationAxiom::LeftCompatibility => "left-compatibility",
            RepresentationAxiom::RightCompatibility => "right-compatibility",
            RepresentationAxiom::RightAnnihilation => "right-annihilation",
        };
        f.write_str(name)
    }
}

/// One failing axiom instance at the 1-based basis pair `(i, j)`, with the
/// residual matrix (left side minus right side).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationViolation {
    pub axiom: RepresentationAxiom,
    pub i: usize,
    pub j: usize,
    pub residual: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepresentationCheck {
    pub violations: Vec<RepresentationViolation>,
}

impl RepresentationCheck {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Representation of a Leibniz algebra on a space `V`: one `m x m` matrix per
/// basis vector for each of the two actions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    algebra: LeibnizAlgebra,
    dim: usize,
    rho_l: Vec<Matrix>,
    rho_r: Vec<Matrix>,
}

impl Representation {
    /// Validates shapes only; the axioms are checked by [`Representation::check`].
    pub fn new(
        algebra: LeibnizAlgebra,
        dim: usize,
        rho_l: Vec<Matrix>,
        rho_r: Vec<Matrix>,
    ) -> Result<Self, AlgebraError> {
        let n = algebra.dim();
        if rho_l.len() != n || rho_r.len() != n {
            return Err(AlgebraError::BadRepresentationShape(format!(
                "need {n} action matrices per side, got {} and {}",
                rho_l.len(),
                rho_r.len()
            )));
        }
        for (side, list) in [("rho_l", &rho_l), ("rho_r", &rho_r)] {
            for (idx, m) in list.iter().enumerate() {
                if m.rows() != dim || m.cols() != dim {
                    return Err(AlgebraError::BadRepresentationShape(format!(
                        "{side}[{}] is {}x{}, expected {dim}x{dim}",
                        idx + 1,
                        m.rows(),
                        m.cols()
                    )));
                }
            }
        }
        Ok(Representation {
            algebra,
            dim,
            rho_l,
            rho_r,
        })
    }

    /// Zero actions over the given algebra; valid for every algebra.
    pub fn zero(algebra: LeibnizAlgebra, dim: usize) -> Self {
        let n = algebra.dim();
        Representation {
            algebra,
            dim,
            rho_l: vec![Matrix::zeros(dim, dim); n],
            rho_r: vec![Matrix::zeros(dim, dim); n],
        }
    }

    pub fn algebra(&self) -> &LeibnizAlgebra {
        &self.algebra
    }

    /// Dimension of the module `V`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the acting algebra.
    pub fn algebra_dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn rho_l_basis(&self, i: usize) -> &Matrix {
        &self.rho_l[i]
    }

    pub fn rho_r_basis(&self, i: usize) -> &Matrix {
        &self.rho_r[i]
    }

    /// `rho_l(x)` for a general `x`, by linearity.
    pub fn rho_l(&self, x: &[Rat]) -> Matrix {
        self.combine(&self.rho_l, x)
    }

    /// `rho_r(x)` for a general `x`, by linearity.
    pub fn rho_r(&self, x: &[Rat]) -> Matrix {
        self.combine(&self.rho_r, x)
    }

    fn combine(&self, mats: &[Matrix], x: &[Rat]) -> Matrix {
        assert_eq!(
            x.len(),
            self.algebra.dim(),
            "coefficient vector length mismatch"
        );
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (xi, m) in x.iter().zip(mats) {
            if !xi.is_zero() {
                out = out.add(&m.scale(xi));
            }
        }
        out
    }

    /// `rho_l(x) u` without materialising the combined matrix.
    pub fn apply_rho_l(&self, x: &[Rat], u: &[Rat]) -> Vec<Rat> {
        self.apply_combined(&self.rho_l, x, u)
    }

    /// `rho_r(x) u` without materialising the combined matrix.
    pub fn apply_rho_r(&self, x: &[Rat], u: &[Rat]) -> Vec<Rat> {
        self.apply_combined(&self.rho_r, x, u)
    }

    /// Column `col` of `rho_l(x)`, i.e. `rho_l(x)` applied to a basis vector.
    pub fn rho_l_column(&self, x: &[Rat], col: usize) -> Vec<Rat> {
        self.combined_column(&self.rho_l, x, col)
    }

    /// Column `col` of `rho_r(x)`.
    pub fn rho_r_column(&self, x: &[Rat], col: usize) -> Vec<Rat> {
        self.combined_column(&self.rho_r, x, col)
    }

    fn combined_column(&self, mats: &[Matrix], x: &[Rat], col: usize) -> Vec<Rat> {
        assert_eq!(
            x.len(),
            self.algebra.dim(),
            "coefficient vector length mismatch"
        );
        let mut out = zero_vec(self.dim);
        for (xi, m) in x.iter().zip(mats) {
            if xi.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let e = m.get(r, col);
                if !e.is_zero() {
                    *o = &*o + xi * e;
                }
            }
        }
        out
    }

    fn apply_combined(&self, mats: &[Matrix], x: &[Rat], u: &[Rat]) -> Vec<Rat> {
        assert_eq!(
            x.len(),
            self.algebra.dim(),
            "coefficient vector length mismatch"
        );
        assert_eq!(u.len(), self.dim, "module vector length mismatch");
        let mut out = zero_vec(self.dim);
        for (xi, m) in x.iter().zip(mats) {
            if xi.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                for (c, uc) in u.iter().enumerate() {
                    if !uc.is_zero() {
                        let e = m.get(r, c);
                        if !e.is_zero() {
                            *o = &*o + xi * e * uc;
                        }
                    }
                }
            }
        }
        out
    }

    /// Checks all three axioms on every basis pair; bilinearity makes basis
    /// pairs a sufficient certificate.
    pub fn check(&self) -> RepresentationCheck {
        let n = self.algebra.dim();
        let mut violations = Vec::new();
        let commutator = |a: &Matrix, b: &Matrix| a.mul(b).sub(&b.mul(a));
        for i in 0..n {
            for j in 0..n {
                let bracket_ij = self.algebra.bracket_basis(i, j);
                let rho_l_bracket = self.rho_l(&bracket_ij);
                let rho_r_bracket = self.rho_r(&bracket_ij);

                let lhs = rho_l_bracket;
                let rhs = commutator(&self.rho_l[i], &self.rho_l[j]);
                let residual = lhs.sub(&rhs);
                if !residual.is_zero() {
                    violations.push(RepresentationViolation {
                        axiom: RepresentationAxiom::LeftCompatibility,
                        i: i + 1,
                        j: j + 1,
                        residual,
                    });
                }

                let rhs = commutator(&self.rho_l[i], &self.rho_r[j]);
                let residual = rho_r_bracket.sub(&rhs);
                if !residual.is_zero() {
                    violations.push(RepresentationViolation {
                        axiom: RepresentationAxiom::RightCompatibility,
                        i: i + 1,
                        j: j + 1,
                        residual,
                    });
                }

                let lhs = self.rho_r[j].mul(&self.rho_l[i]);
                let rhs = self.rho_r[j].mul(&self.rho_r[i]).neg();
                let residual = lhs.sub(&rhs);
                if !residual.is_zero() {
                    violations.push(RepresentationViolation {
                        axiom: RepresentationAxiom::RightAnnihilation,
                        i: i + 1,
                        j: j + 1,
                        residual,
                    });
                }
            }
        }
        RepresentationCheck { violations }
    }
}
