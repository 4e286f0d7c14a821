//! Small algebras, operator families, and deterministic pseudo-random data
//! shared across the unit, property, and acceptance test suites.
//!
//! The dim-3 algebra here has the single bracket `[e1, e1] = e3`; over its
//! regular representation the Rota-Baxter operators form exactly two
//! families, both provided as constructors and membership predicates. The
//! dim-2 algebra `[e2, e2] = e1` plays the same role one dimension down.

use crate::cohomology::Cochain;
use crate::leibniz::{LeibnizAlgebra, Representation};
use crate::linalg::{rat, rat_int, Matrix, Rat};
use crate::rota_baxter::LinearOperator;
use num_traits::Zero;
use std::sync::Arc;

/// Dim-3 Leibniz algebra with `[e1, e1] = e3` and all other brackets zero.
pub fn g3() -> LeibnizAlgebra {
    LeibnizAlgebra::from_sparse_brackets(3, &[(1, 1, 3, rat_int(1))]).expect("valid indices")
}

/// Dim-2 Leibniz algebra with `[e2, e2] = e1`.
pub fn dim2_nilpotent() -> LeibnizAlgebra {
    LeibnizAlgebra::from_sparse_brackets(2, &[(2, 2, 1, rat_int(1))]).expect("valid indices")
}

/// Dim-2 Leibniz algebra with `[e1, e2] = e2` (and `[e2, e1] = 0`, so it is
/// not a Lie algebra). Unlike the nilpotent fixtures this one admits
/// non-Nijenhuis elements.
pub fn dim2_solvable() -> LeibnizAlgebra {
    LeibnizAlgebra::from_sparse_brackets(2, &[(1, 2, 2, rat_int(1))]).expect("valid indices")
}

/// Regular representation of [`g3`].
pub fn g3_rep() -> Arc<Representation> {
    Arc::new(g3().regular_representation().expect("g3 is Leibniz"))
}

/// Regular representation of [`dim2_nilpotent`].
pub fn dim2_rep() -> Arc<Representation> {
    Arc::new(
        dim2_nilpotent()
            .regular_representation()
            .expect("dim2 is Leibniz"),
    )
}

/// Regular representation of [`dim2_solvable`].
pub fn dim2_solvable_rep() -> Arc<Representation> {
    Arc::new(
        dim2_solvable()
            .regular_representation()
            .expect("dim2 solvable is Leibniz"),
    )
}

/// Regular representation of the zero-bracket algebra; every operator over
/// it is Rota-Baxter.
pub fn zero_bracket_rep(dim: usize) -> Arc<Representation> {
    Arc::new(
        LeibnizAlgebra::zero(dim)
            .regular_representation()
            .expect("zero bracket is Leibniz"),
    )
}

/// Non-regular representation: [`dim2_solvable`] acting on a 1-dimensional
/// module by `rho_l(e1) = 1`, `rho_r(e1) = -1`, `rho_l(e2) = rho_r(e2) = 0`.
/// An operator `(t1, t2)` over it is Rota-Baxter iff `t1 t2 = 0`; the
/// operator `(1, 0)` has vanishing first and second cohomology, making this
/// the rigid fixture of the test suites.
pub fn one_dim_module_rep() -> Arc<Representation> {
    let scalar = |v: i64| {
        let mut m = Matrix::zeros(1, 1);
        m.set(0, 0, rat_int(v));
        m
    };
    Arc::new(
        Representation::new(
            dim2_solvable(),
            1,
            vec![scalar(1), scalar(0)],
            vec![scalar(-1), scalar(0)],
        )
        .expect("shapes match"),
    )
}

/// The rigid operator `(1, 0)` over [`one_dim_module_rep`].
pub fn rigid_operator() -> LinearOperator {
    let mut t = Matrix::zeros(2, 1);
    t.set(0, 0, rat_int(1));
    LinearOperator::new(one_dim_module_rep(), t).expect("2x1 matrix")
}

/// Operator over the regular representation of [`g3`].
pub fn g3_operator(matrix: Matrix) -> LinearOperator {
    LinearOperator::new(g3_rep(), matrix).expect("3x3 matrix")
}

/// Matrix unit `E_{rc}` (0-based) of the given shape.
pub fn unit_matrix(rows: usize, cols: usize, r: usize, c: usize) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    m.set(r, c, rat_int(1));
    m
}

/// First family of solutions over [`g3_rep`]: zero first row, the six
/// remaining entries `[a21, a22, a23, a31, a32, a33]` free.
pub fn g3_family_i(lower: &[i64; 6]) -> Matrix {
    g3_family_i_rat(&lower.map(rat_int))
}

pub fn g3_family_i_rat(lower: &[Rat; 6]) -> Matrix {
    Matrix::from_rows(vec![
        vec![Rat::zero(), Rat::zero(), Rat::zero()],
        vec![lower[0].clone(), lower[1].clone(), lower[2].clone()],
        vec![lower[3].clone(), lower[4].clone(), lower[5].clone()],
    ])
}

/// Second family over [`g3_rep`]: `a12 = a13 = a23 = 0`, `a33 = a11 / 2`,
/// with `a11` and `[a21, a22, a31, a32]` free.
pub fn g3_family_ii(a11: i64, rest: &[i64; 4]) -> Matrix {
    g3_family_ii_rat(rat_int(a11), &rest.map(rat_int))
}

pub fn g3_family_ii_rat(a11: Rat, rest: &[Rat; 4]) -> Matrix {
    let a33 = &a11 * rat(1, 2);
    Matrix::from_rows(vec![
        vec![a11, Rat::zero(), Rat::zero()],
        vec![rest[0].clone(), rest[1].clone(), Rat::zero()],
        vec![rest[2].clone(), rest[3].clone(), a33],
    ])
}

/// Membership in the zero-first-row family.
pub fn g3_family_i_contains(t: &Matrix) -> bool {
    (0..3).all(|c| t.get(0, c).is_zero())
}

/// Membership in the second family: `a12 = a13 = a23 = 0`, `a11 != 0`,
/// `a33 = a11 / 2`.
pub fn g3_family_ii_contains(t: &Matrix) -> bool {
    !t.get(0, 0).is_zero()
        && t.get(0, 1).is_zero()
        && t.get(0, 2).is_zero()
        && t.get(1, 2).is_zero()
        && t.get(2, 2) == &(t.get(0, 0) * rat(1, 2))
}

/// Dim-2 solution family with zero second row: `[[a, b], [0, 0]]`.
pub fn dim2_family_a(a: i64, b: i64) -> Matrix {
    Matrix::from_rows(vec![
        vec![rat_int(a), rat_int(b)],
        vec![Rat::zero(), Rat::zero()],
    ])
}

/// Dim-2 solution family `[[a, b], [0, 2a]]`.
pub fn dim2_family_b(a: i64, b: i64) -> Matrix {
    Matrix::from_rows(vec![
        vec![rat_int(a), rat_int(b)],
        vec![Rat::zero(), rat_int(2 * a)],
    ])
}

/// Closed-form Rota-Baxter test over [`dim2_rep`], derived by expanding the
/// defining equation on basis pairs: writing `[[a, b], [c, d]]`, the operator
/// works iff `c = 0` and `d (d - 2a) = 0`.
pub fn dim2_is_rota_baxter_closed_form(t: &Matrix) -> bool {
    let a = t.get(0, 0);
    let d = t.get(1, 1);
    t.get(1, 0).is_zero() && (d.is_zero() || *d == a * rat_int(2))
}

/// Closed-form Rota-Baxter test over [`dim2_solvable_rep`]: writing
/// `[[a, b], [c, d]]`, expanding the defining equation on basis pairs gives
/// `b = d = 0` and `a c = 0`.
pub fn dim2_solvable_is_rota_baxter_closed_form(t: &Matrix) -> bool {
    t.get(0, 1).is_zero()
        && t.get(1, 1).is_zero()
        && (t.get(0, 0).is_zero() || t.get(1, 0).is_zero())
}

/// A spread of verified Rota-Baxter operators over [`g3_rep`], covering the
/// zero operator and interior points of both families.
pub fn g3_rota_baxter_gallery() -> Vec<LinearOperator> {
    vec![
        g3_operator(Matrix::zeros(3, 3)),
        g3_operator(unit_matrix(3, 3, 1, 0)),
        g3_operator(g3_family_i(&[1, -2, 3, 0, 5, 7])),
        g3_operator(g3_family_ii(2, &[5, 7, 4, 9])),
        g3_operator(g3_family_ii_rat(
            rat_int(-3),
            &[rat(1, 2), rat_int(0), rat_int(2), rat(-5, 3)],
        )),
    ]
}

/// Deterministic xorshift generator for reproducible "random" fixtures.
#[derive(Debug, Clone)]
pub struct SeededRng(u64);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        // Avoid the all-zero state; mix the seed so nearby seeds diverge.
        SeededRng(
            seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(0x2545_F491_4F6C_DD1D)
                | 1,
        )
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform-ish integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }

    /// Small rational with numerator in `-max_num..=max_num` and denominator
    /// in `1..=max_den`.
    pub fn small_rat(&mut self, max_num: i64, max_den: i64) -> Rat {
        rat(self.int_in(-max_num, max_num), self.int_in(1, max_den))
    }
}

/// Cochain with deterministic pseudo-random small-rational coefficients.
pub fn pseudo_random_cochain(
    degree: usize,
    source_dim: usize,
    target_dim: usize,
    seed: u64,
) -> Cochain {
    let mut rng = SeededRng::new(
        seed ^ ((degree as u64) << 32) ^ ((source_dim as u64) << 16) ^ target_dim as u64,
    );
    let count = source_dim.pow(degree as u32) * target_dim;
    let coeffs: Vec<Rat> = (0..count).map(|_| rng.small_rat(4, 3)).collect();
    Cochain::from_flat(degree, source_dim, target_dim, coeffs).expect("constructed length")
}

/// Matrix with deterministic pseudo-random small-rational entries.
pub fn pseudo_random_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = SeededRng::new(seed ^ 0xABCD ^ ((rows as u64) << 8) ^ cols as u64);
    Matrix::from_fn(rows, cols, |_, _| rng.small_rat(4, 3))
}

/// Vector with deterministic pseudo-random small-rational entries.
pub fn pseudo_random_vec(len: usize, seed: u64) -> Vec<Rat> {
    let mut rng = SeededRng::new(seed ^ 0x5151 ^ len as u64);
    (0..len).map(|_| rng.small_rat(4, 3)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gallery_members_verify() {
        for op in g3_rota_baxter_gallery() {
            assert!(op.check_rota_baxter().unwrap());
        }
    }

    #[test]
    fn family_predicates_match_constructors() {
        assert!(g3_family_i_contains(&g3_family_i(&[1, 2, 3, 4, 5, 6])));
        assert!(g3_family_ii_contains(&g3_family_ii(4, &[1, 2, 3, 4])));
        assert!(!g3_family_ii_contains(&g3_family_i(&[1, 2, 3, 4, 5, 6])));
        // a33 != a11/2 leaves the second family.
        let mut t = g3_family_ii(4, &[1, 2, 3, 4]);
        t.set(2, 2, rat_int(1));
        assert!(!g3_family_ii_contains(&t));
    }

    #[test]
    fn seeded_rng_is_reproducible() {
        let a: Vec<u64> = {
            let mut r = SeededRng::new(42);
            (0..5).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = SeededRng::new(42);
            (0..5).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
        assert_eq!(
            pseudo_random_cochain(2, 3, 3, 9),
            pseudo_random_cochain(2, 3, 3, 9)
        );
    }
}
