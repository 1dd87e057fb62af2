//! q-difference modules over Q(q)(x) in a fixed basis, with the standard
//! constructions: dual, tensor, direct sum, prolongation, iterates and gauge
//! transformations.
//!
//! We store the matrix A of `Sigma_q e = e A`; the associated system reads
//! `Y(qx) = A(x)^{-1} Y(x)` and `A^{-1}` is exposed as [`QDiffModule::system_matrix`].

use thiserror::Error;

use crate::cyclotomic::{x_field, RatFun};
use crate::expr::{dlog_derive, sigma_q};
use crate::field::FieldCtx;
use crate::matrix::Mat;

#[derive(Error, Clone, Debug, PartialEq)]
pub enum ModuleError {
    #[error("matrix is singular over Q(q)(x)")]
    SingularMatrix,
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Construction {
    Dual,
    Tensor,
    DirectSum,
}

/// A q-difference module of rank `dim`, given by the invertible matrix of
/// `Sigma_q` in a fixed basis. `sigma_step` is 1 for a plain module and `t`
/// for a t-th iterate, whose operator substitutes `x -> q^t x`.
#[derive(Clone, PartialEq, Debug)]
pub struct QDiffModule {
    pub dim: usize,
    pub sigma_matrix: Mat<RatFun>,
    pub sigma_step: u32,
}

impl QDiffModule {
    pub fn new(sigma_matrix: Mat<RatFun>) -> Result<Self, ModuleError> {
        Self::with_step(sigma_matrix, 1)
    }

    fn with_step(sigma_matrix: Mat<RatFun>, sigma_step: u32) -> Result<Self, ModuleError> {
        if !sigma_matrix.is_square() {
            return Err(ModuleError::NotSquare {
                rows: sigma_matrix.rows,
                cols: sigma_matrix.cols,
            });
        }
        let xf = x_field();
        if xf.is_zero(&sigma_matrix.det(&xf)) {
            return Err(ModuleError::SingularMatrix);
        }
        Ok(QDiffModule {
            dim: sigma_matrix.rows,
            sigma_matrix,
            sigma_step,
        })
    }

    /// The matrix of the associated system `sigma_q(Y) = A^{-1} Y`.
    pub fn system_matrix(&self) -> Mat<RatFun> {
        self.sigma_matrix.inverse(&x_field()).expect("det != 0")
    }

    pub fn dual(&self) -> Self {
        let inv = self.system_matrix();
        QDiffModule {
            dim: self.dim,
            sigma_matrix: inv.transpose(),
            sigma_step: self.sigma_step,
        }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        assert_eq!(self.sigma_step, other.sigma_step);
        QDiffModule {
            dim: self.dim * other.dim,
            sigma_matrix: self.sigma_matrix.kronecker(&x_field(), &other.sigma_matrix),
            sigma_step: self.sigma_step,
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.sigma_step, other.sigma_step);
        QDiffModule {
            dim: self.dim + other.dim,
            sigma_matrix: self
                .sigma_matrix
                .direct_sum(&x_field(), &other.sigma_matrix),
            sigma_step: self.sigma_step,
        }
    }

    pub fn construct(kind: Construction, operands: &[&QDiffModule]) -> QDiffModule {
        match kind {
            Construction::Dual => {
                assert_eq!(operands.len(), 1);
                operands[0].dual()
            }
            Construction::Tensor => {
                assert_eq!(operands.len(), 2);
                operands[0].tensor(operands[1])
            }
            Construction::DirectSum => {
                assert_eq!(operands.len(), 2);
                operands[0].direct_sum(operands[1])
            }
        }
    }

    /// Prolongation F_d: the rank-2v module with block matrix
    /// [[A, dA], [0, A]], where d = x d/dx acts entrywise.
    pub fn prolong(&self) -> Self {
        let xf = x_field();
        let a = &self.sigma_matrix;
        let da = a.map(dlog_derive);
        let zero = Mat::from_fn(self.dim, self.dim, |_, _| xf.zero());
        QDiffModule {
            dim: 2 * self.dim,
            sigma_matrix: Mat::block2(a, &da, &zero, a),
            sigma_step: self.sigma_step,
        }
    }

    /// The t-th iterate: the module over sigma_{q^t} with matrix
    /// A(x) A(qx) ... A(q^(t-1) x).
    pub fn iterate(&self, t: u32) -> Self {
        assert!(t >= 1);
        let xf = x_field();
        let mut prod = self.sigma_matrix.clone();
        for i in 1..t {
            let shifted = self
                .sigma_matrix
                .map(|e| sigma_q(e, (i * self.sigma_step) as i64));
            prod = prod.mul(&xf, &shifted);
        }
        QDiffModule {
            dim: self.dim,
            sigma_matrix: prod,
            sigma_step: self.sigma_step * t,
        }
    }

    /// Basis change by an invertible P: the new matrix is
    /// P^{-1} A sigma_q(P).
    pub fn gauge(&self, p: &Mat<RatFun>) -> Result<Self, ModuleError> {
        assert_eq!((p.rows, p.cols), (self.dim, self.dim));
        let xf = x_field();
        // adj(P)·A·σ(P) stays polynomial when the inputs are; dividing by
        // det(P) only at the end avoids fraction normalization in every
        // intermediate product.
        let (adj, det) = p.adjugate_det(&xf);
        let det_inv = xf.inv(&det).ok_or(ModuleError::SingularMatrix)?;
        let sp = p.map(|e| sigma_q(e, self.sigma_step as i64));
        let a = adj
            .mul(&xf, &self.sigma_matrix)
            .mul(&xf, &sp)
            .map(|e| xf.mul(e, &det_inv));
        Ok(QDiffModule {
            dim: self.dim,
            sigma_matrix: a,
            sigma_step: self.sigma_step,
        })
    }
}

/// Convenience: parse a matrix of expression strings into a module.
pub fn module_from_strings(entries: &[Vec<String>]) -> Result<QDiffModule, String> {
    let rows = entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| crate::expr::parse_ratfun(s).map_err(|e| e.to_string()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    QDiffModule::new(Mat::from_rows(rows)).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_ratfun;
    use crate::testutil::{mat_of, module_of};
    use rand::SeedableRng;

    #[test]
    fn identity_module() {
        let m = QDiffModule::new(Mat::identity(&x_field(), 2)).unwrap();
        assert_eq!(m.dim, 2);
    }

    #[test]
    fn theta_module_and_system_matrix() {
        let m = module_of(&[&["q*x"]]);
        assert_eq!(
            m.system_matrix().at(0, 0),
            &parse_ratfun("1/(q*x)").unwrap()
        );
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = mat_of(&[&["x", "x"], &["x", "x"]]);
        assert_eq!(QDiffModule::new(a), Err(ModuleError::SingularMatrix));
    }

    #[test]
    fn dual_of_theta() {
        let m = module_of(&[&["q*x"]]);
        assert_eq!(m.dual().sigma_matrix, mat_of(&[&["1/(q*x)"]]));
    }

    #[test]
    fn rank_one_tensor_and_direct_sum() {
        let c = module_of(&[&["q^2+1"]]);
        let d = module_of(&[&["3"]]);
        assert_eq!(c.tensor(&d).sigma_matrix, mat_of(&[&["3*q^2+3"]]));
        assert_eq!(
            c.direct_sum(&d).sigma_matrix,
            mat_of(&[&["q^2+1", "0"], &["0", "3"]])
        );
    }

    #[test]
    fn double_dual_is_identity_on_matrices() {
        let m = module_of(&[&["q*x", "1"], &["x^2", "q"]]);
        assert_eq!(m.dual().dual().sigma_matrix, m.sigma_matrix);
    }

    #[test]
    fn prolong_examples() {
        // constant: derivative block vanishes
        let c = module_of(&[&["q^2"]]);
        assert_eq!(
            c.prolong().sigma_matrix,
            mat_of(&[&["q^2", "0"], &["0", "q^2"]])
        );
        // theta module: d(qx) = qx
        let th = module_of(&[&["q*x"]]);
        assert_eq!(
            th.prolong().sigma_matrix,
            mat_of(&[&["q*x", "q*x"], &["0", "q*x"]])
        );
        // identity
        let id = QDiffModule::new(Mat::identity(&x_field(), 2)).unwrap();
        assert!(id.prolong().sigma_matrix.is_identity(&x_field()));
    }

    #[test]
    fn iterate_examples() {
        let th = module_of(&[&["q*x"]]);
        assert_eq!(th.iterate(1).sigma_matrix, th.sigma_matrix);
        // (qx)(q * qx) = q^3 x^2
        assert_eq!(th.iterate(2).sigma_matrix, mat_of(&[&["q^3*x^2"]]));
        assert_eq!(th.iterate(2).sigma_step, 2);
        let c = module_of(&[&["q+2"]]);
        assert_eq!(c.iterate(4).sigma_matrix, mat_of(&[&["(q+2)^4"]]));
    }

    #[test]
    fn iterate_composes() {
        // iterate(M, s*t) equals iterating the t-iterate s times
        let m = module_of(&[&["q*x", "1"], &["0", "q"]]);
        let direct = m.iterate(6);
        let staged = m.iterate(2).iterate(3);
        assert_eq!(direct.sigma_matrix, staged.sigma_matrix);
        assert_eq!(direct.sigma_step, staged.sigma_step);
    }

    #[test]
    fn gauge_examples() {
        let xf = x_field();
        let id = QDiffModule::new(Mat::identity(&xf, 1)).unwrap();
        let p = mat_of(&[&["x"]]);
        assert_eq!(id.gauge(&p).unwrap().sigma_matrix, mat_of(&[&["q"]]));

        let m = module_of(&[&["q*x", "x"], &["0", "2"]]);
        let i2 = Mat::identity(&xf, 2);
        assert_eq!(m.gauge(&i2).unwrap(), m);

        let p = mat_of(&[&["1", "x"], &["0", "1"]]);
        let pinv = p.inverse(&xf).unwrap();
        let back = m.gauge(&p).unwrap().gauge(&pinv).unwrap();
        assert_eq!(back, m);

        let sing = mat_of(&[&["x", "x"], &["1", "1"]]);
        assert_eq!(m.gauge(&sing), Err(ModuleError::SingularMatrix));
    }

    #[test]
    fn prolong_commutes_with_gauge() {
        let xf = x_field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..15 {
            let m = crate::testutil::random_module(&mut rng, 2, 2, 3);
            let p = crate::testutil::random_invertible(&mut rng, 2, 2, 3);
            let dp = p.map(crate::expr::dlog_derive);
            let zero = Mat::from_fn(2, 2, |_, _| xf.zero());
            let big_p = Mat::block2(&p, &dp, &zero, &p);
            let lhs = m.prolong().gauge(&big_p).unwrap();
            let rhs = m.gauge(&p).unwrap().prolong();
            assert_eq!(lhs.sigma_matrix, rhs.sigma_matrix);
        }
    }
}
