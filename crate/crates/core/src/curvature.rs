//! v-curvatures at cyclotomic places and the curvature-based triviality scan.
//!
//! At the place attached to Phi_n the curvature is the matrix of Sigma_q^n
//! acting on the reduction: the ordered product
//! `A(x) A(zeta x) ... A(zeta^(n-1) x)` in Q(zeta_n)(x), with zeta the image
//! of q. The module is trivial iff the curvature is the identity at almost
//! all places, so a finite scan can only report "consistent with trivial" or,
//! past a failure threshold, a nontrivial verdict.

use rayon::prelude::*;
use thiserror::Error;

use crate::cyclotomic::{cyc_x_field, reduce_at_place, x_field, CycField, CycFun, RatFun, ReduceError};
use crate::expr::sigma_q;
use crate::field::FieldCtx;
use crate::matrix::Mat;
use crate::qmodule::QDiffModule;

#[derive(Error, Clone, Debug, PartialEq)]
pub enum CurvatureError {
    #[error("place n={n} is bad: {witness}")]
    BadPlace { n: u32, witness: String },
    #[error("no good place in the range {n_min}..={n_max}")]
    NoGoodPlaces { n_min: u32, n_max: u32 },
    #[error("curvatures are defined for sigma_step = 1, this module is a {step}-th iterate")]
    IteratedModule { step: u32 },
}

/// Whether a module has good reduction at a place, with the failing
/// denominator or determinant as witness otherwise.
#[derive(Clone, Debug, PartialEq)]
pub enum PlaceState {
    Good,
    Bad { witness: String },
}

#[derive(Clone, Debug)]
pub struct PlaceStatus {
    pub n: u32,
    pub state: PlaceState,
}

#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub n: u32,
    pub matrix: Mat<CycFun>,
    pub is_identity: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Conclusion {
    ConsistentWithTrivial,
    NontrivialHeuristic { threshold: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub n_min: u32,
    pub n_max: u32,
    pub good_places: u32,
    pub bad_places: Vec<(u32, String)>,
    pub identity_places: u32,
    pub failure_places: Vec<u32>,
    pub conclusion: Conclusion,
}

impl Verdict {
    pub(crate) fn aggregate(
        n_min: u32,
        n_max: u32,
        threshold: u32,
        outcomes: Vec<(u32, Result<bool, String>)>,
    ) -> Result<Verdict, CurvatureError> {
        let mut bad_places = Vec::new();
        let mut failure_places = Vec::new();
        let mut good_places = 0;
        let mut identity_places = 0;
        for (n, outcome) in outcomes {
            match outcome {
                Ok(true) => {
                    good_places += 1;
                    identity_places += 1;
                }
                Ok(false) => {
                    good_places += 1;
                    failure_places.push(n);
                }
                Err(witness) => bad_places.push((n, witness)),
            }
        }
        if good_places == 0 {
            return Err(CurvatureError::NoGoodPlaces { n_min, n_max });
        }
        let conclusion = if failure_places.len() as u32 >= threshold {
            Conclusion::NontrivialHeuristic { threshold }
        } else {
            Conclusion::ConsistentWithTrivial
        };
        Ok(Verdict {
            n_min,
            n_max,
            good_places,
            bad_places,
            identity_places,
            failure_places,
            conclusion,
        })
    }
}

fn require_plain(module: &QDiffModule) -> Result<(), CurvatureError> {
    if module.sigma_step != 1 {
        return Err(CurvatureError::IteratedModule {
            step: module.sigma_step,
        });
    }
    Ok(())
}

/// Reduce the sigma-matrix at a place and check the determinant stays
/// invertible there.
pub(crate) fn reduce_module(
    module: &QDiffModule,
    field: &CycField,
) -> Result<Mat<CycFun>, String> {
    let reduced = module
        .sigma_matrix
        .try_map(|e| reduce_at_place(e, field))
        .map_err(|ReduceError::BadReduction { witness, .. }| witness)?;
    let cx = cyc_x_field(field);
    let det = reduced.det(&cx);
    if cx.is_zero(&det) {
        return Err("determinant vanishes at this place".to_string());
    }
    Ok(reduced)
}

pub fn good_place(module: &QDiffModule, n: u32) -> Result<PlaceStatus, CurvatureError> {
    require_plain(module)?;
    let field = CycField::new(n);
    let state = match reduce_module(module, &field) {
        Ok(_) => PlaceState::Good,
        Err(witness) => PlaceState::Bad { witness },
    };
    Ok(PlaceStatus { n, state })
}

/// Ordered product of `count` sigma-shifted copies of `m` starting at shift
/// `offset`: m(zeta^offset x) m(zeta^(offset+1) x) ... Divide-and-conquer
/// halves the number of matrix products for telescoping inputs.
fn shifted_product(
    cx: &crate::cyclotomic::CycXField,
    field: &CycField,
    m: &Mat<CycFun>,
    offset: u32,
    count: u32,
) -> Mat<CycFun> {
    if count == 1 {
        let s = field.pow(&field.zeta(), offset as i64).unwrap();
        return m.map(|e| cx.scale_var(e, &s));
    }
    let half = count / 2;
    let left = shifted_product(cx, field, m, offset, half);
    let right = shifted_product(cx, field, m, offset + half, count - half);
    left.mul(cx, &right)
}

/// The curvature of `module` at the place Phi_n.
pub fn curvature_at(module: &QDiffModule, n: u32) -> Result<CurvatureReport, CurvatureError> {
    require_plain(module)?;
    let field = CycField::new(n);
    let reduced = reduce_module(module, &field)
        .map_err(|witness| CurvatureError::BadPlace { n, witness })?;
    let cx = cyc_x_field(&field);
    let matrix = shifted_product(&cx, &field, &reduced, 0, n);
    let is_identity = matrix.is_identity(&cx);
    Ok(CurvatureReport {
        n,
        matrix,
        is_identity,
    })
}

/// Curvature of the prolongation F_d(module); by the Leibniz telescoping
/// identity this equals [[C, dC], [0, C]] for C the curvature of `module`.
pub fn prolongation_curvature(
    module: &QDiffModule,
    n: u32,
) -> Result<CurvatureReport, CurvatureError> {
    curvature_at(&module.prolong(), n)
}

/// Scan places n_min..=n_max, skipping bad places, and aggregate the
/// identity failures into a verdict. `parallel` only changes the execution
/// strategy; the report is always in ascending-n order.
pub fn triviality_scan(
    module: &QDiffModule,
    n_min: u32,
    n_max: u32,
    threshold: u32,
    parallel: bool,
) -> Result<Verdict, CurvatureError> {
    require_plain(module)?;
    assert!(n_min >= 1 && n_min <= n_max);
    // One product chain B_n = A(x) A(qx) ... A(q^(n-1) x) over Q(q)(x) serves
    // every place at once: reduction mod Phi_n is a ring homomorphism wherever
    // denominators stay nonzero, which holds at every good place because the
    // denominators of B_n divide a product of shifted denominators of A. This
    // shares the (often telescoping) cancellation work across places instead
    // of redoing the product in each cyclotomic field.
    let xf = x_field();
    let a = &module.sigma_matrix;
    let mut chain: Vec<(u32, Mat<RatFun>)> = Vec::new();
    // B_n = A(x) sigma(B_{n-1}): shifting the already-normalized partial
    // product by a single power of q keeps the q-degrees of intermediates
    // small, where shifting A by q^(n-1) would inflate them by (n-1) times
    // the x-degree.
    let mut b = a.clone();
    for n in 1..=n_max {
        if n > 1 {
            b = a.mul(&xf, &b.map(|e| sigma_q(e, 1)));
        }
        if n >= n_min {
            chain.push((n, b.clone()));
        }
    }
    let place_outcome = |(n, bn): &(u32, Mat<RatFun>)| -> (u32, Result<bool, String>) {
        let n = *n;
        let field = CycField::new(n);
        if let Err(witness) = reduce_module(module, &field) {
            return (n, Err(witness));
        }
        let cx = cyc_x_field(&field);
        match bn.try_map(|e| reduce_at_place(e, &field)) {
            Ok(c) => (n, Ok(c.is_identity(&cx))),
            // Unreachable at a good place, but keep the witness if it happens.
            Err(ReduceError::BadReduction { witness, .. }) => (n, Err(witness)),
        }
    };
    let outcomes: Vec<_> = if parallel {
        chain.par_iter().map(place_outcome).collect()
    } else {
        chain.iter().map(place_outcome).collect()
    };
    Verdict::aggregate(n_min, n_max, threshold, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::{cyc_x_field, x_field, CycField};
    use crate::matrix::Mat;
    use crate::poly::Poly;
    use crate::testutil::{mat_of, module_of};
    use rand::SeedableRng;

    #[test]
    fn good_place_examples() {
        let bad = module_of(&[&["1/(q-1)"]]);
        match good_place(&bad, 1).unwrap().state {
            PlaceState::Bad { witness } => assert!(witness.contains("q - 1"), "{witness}"),
            s => panic!("expected bad place, got {s:?}"),
        }

        let theta = module_of(&[&["q*x"]]);
        for n in 1..=8 {
            assert_eq!(good_place(&theta, n).unwrap().state, PlaceState::Good);
        }

        // det = q^2+1 vanishes mod Phi_4
        let m = module_of(&[&["q^2+1"]]);
        match good_place(&m, 4).unwrap().state {
            PlaceState::Bad { witness } => assert!(witness.contains("determinant")),
            s => panic!("expected bad place, got {s:?}"),
        }
    }

    #[test]
    fn curvature_identity_module() {
        let id = crate::qmodule::QDiffModule::new(Mat::identity(&x_field(), 2)).unwrap();
        for n in [1, 2, 5] {
            assert!(curvature_at(&id, n).unwrap().is_identity);
        }
    }

    #[test]
    fn curvature_theta_at_three() {
        // (qx)(q*qx)(q^2*qx) = q^6 x^3 = x^3 mod Phi_3
        let theta = module_of(&[&["q*x"]]);
        let report = curvature_at(&theta, 3).unwrap();
        let field = CycField::new(3);
        let cx = cyc_x_field(&field);
        let x3 = cx.from_poly(Poly::monomial(&field, field.one(), 3));
        assert_eq!(report.matrix.at(0, 0), &x3);
        assert!(!report.is_identity);
    }

    #[test]
    fn curvature_constant_q_squared_at_five() {
        let m = module_of(&[&["q^2"]]);
        let report = curvature_at(&m, 5).unwrap();
        assert!(report.is_identity, "q^10 = 1 mod Phi_5");
    }

    #[test]
    fn curvature_matches_bruteforce_product() {
        // independent oracle: multiply the factors one by one, left to right
        // det = x(q^2 - 1) vanishes mod Phi_1 and Phi_2, so start at n = 3
        let m = module_of(&[&["q*x", "1"], &["x", "q"]]);
        for n in 3..=8u32 {
            let field = CycField::new(n);
            let cx = cyc_x_field(&field);
            let reduced = reduce_module(&m, &field).unwrap();
            let mut expect = Mat::identity(&cx, 2);
            for i in 0..n {
                let s = field.pow(&field.zeta(), i as i64).unwrap();
                expect = expect.mul(&cx, &reduced.map(|e| cx.scale_var(e, &s)));
            }
            assert_eq!(curvature_at(&m, n).unwrap().matrix, expect, "n={n}");
        }
    }

    #[test]
    fn bad_place_is_an_error_for_curvature() {
        let m = module_of(&[&["1/(q-1)"]]);
        assert!(matches!(
            curvature_at(&m, 1),
            Err(CurvatureError::BadPlace { n: 1, .. })
        ));
    }

    #[test]
    fn prolongation_curvature_examples() {
        let id = crate::qmodule::QDiffModule::new(Mat::identity(&x_field(), 1)).unwrap();
        assert!(prolongation_curvature(&id, 4).unwrap().is_identity);

        // theta at n=3: [[x^3, 3x^3], [0, x^3]]
        let theta = module_of(&[&["q*x"]]);
        let r = prolongation_curvature(&theta, 3).unwrap();
        let field = CycField::new(3);
        let cx = cyc_x_field(&field);
        let x3 = cx.from_poly(Poly::monomial(&field, field.one(), 3));
        let three_x3 = cx.mul(&cx.from_int(3), &x3);
        assert_eq!(r.matrix.at(0, 0), &x3);
        assert_eq!(r.matrix.at(0, 1), &three_x3);
        assert!(cx.is_zero(r.matrix.at(1, 0)));
        assert_eq!(r.matrix.at(1, 1), &x3);

        // constant: diag(c^n, c^n)
        let c = module_of(&[&["q+3"]]);
        let r = prolongation_curvature(&c, 4).unwrap();
        let base = curvature_at(&c, 4).unwrap();
        assert_eq!(r.matrix.at(0, 0), base.matrix.at(0, 0));
        assert_eq!(r.matrix.at(1, 1), base.matrix.at(0, 0));
        let field = CycField::new(4);
        assert!(cyc_x_field(&field).is_zero(r.matrix.at(0, 1)));
    }

    #[test]
    fn telescoping_invariant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let m = crate::testutil::random_module(&mut rng, 2, 1, 3);
            for n in [2u32, 3, 5] {
                let (pr, base) = match (prolongation_curvature(&m, n), curvature_at(&m, n)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => continue,
                };
                let field = CycField::new(n);
                let cx = cyc_x_field(&field);
                let dc = base.matrix.map(|e| {
                    let x = cx.var_elem();
                    cx.mul(&x, &cx.derivative(e))
                });
                for i in 0..m.dim {
                    for j in 0..m.dim {
                        assert_eq!(pr.matrix.at(i, j), base.matrix.at(i, j));
                        assert_eq!(pr.matrix.at(i, j + m.dim), dc.at(i, j));
                        assert!(cx.is_zero(pr.matrix.at(i + m.dim, j)));
                        assert_eq!(pr.matrix.at(i + m.dim, j + m.dim), base.matrix.at(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn iterate_coherence() {
        // curvature mod Phi_n equals the reduction of the n-th iterate matrix
        let m = module_of(&[&["q*x", "x+1"], &["0", "q^2"]]);
        for n in [2u32, 3, 4] {
            let field = CycField::new(n);
            let iter = m.iterate(n);
            let reduced = iter
                .sigma_matrix
                .try_map(|e| crate::cyclotomic::reduce_at_place(e, &field))
                .unwrap();
            assert_eq!(curvature_at(&m, n).unwrap().matrix, reduced, "n={n}");
        }
    }

    #[test]
    fn scan_q_cubed_consistent() {
        let m = module_of(&[&["q^3"]]);
        let v = triviality_scan(&m, 1, 50, 3, false).unwrap();
        assert_eq!(v.conclusion, Conclusion::ConsistentWithTrivial);
        assert!(v.failure_places.is_empty());
        assert_eq!(v.good_places, 50);
        assert_eq!(v.identity_places, 50);
    }

    #[test]
    fn scan_constant_two_fails_everywhere() {
        let m = module_of(&[&["2"]]);
        let v = triviality_scan(&m, 1, 50, 3, false).unwrap();
        assert_eq!(
            v.conclusion,
            Conclusion::NontrivialHeuristic { threshold: 3 }
        );
        assert_eq!(v.failure_places.len(), 50);
        assert_eq!(v.good_places, 50);
    }

    #[test]
    fn scan_gauge_of_identity() {
        let xf = x_field();
        let id = crate::qmodule::QDiffModule::new(Mat::identity(&xf, 2)).unwrap();
        let p = mat_of(&[&["1", "x"], &["0", "1"]]);
        let m = id.gauge(&p).unwrap();
        let v = triviality_scan(&m, 1, 20, 3, false).unwrap();
        assert_eq!(v.conclusion, Conclusion::ConsistentWithTrivial);
        assert!(v.failure_places.is_empty());
    }

    #[test]
    fn scan_no_good_places() {
        let m = module_of(&[&["1/(q-1)"]]);
        assert_eq!(
            triviality_scan(&m, 1, 1, 3, false),
            Err(CurvatureError::NoGoodPlaces { n_min: 1, n_max: 1 })
        );
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let m = module_of(&[&["q*x", "1"], &["0", "2"]]);
        let seq = triviality_scan(&m, 1, 12, 3, false).unwrap();
        let par = triviality_scan(&m, 1, 12, 3, true).unwrap();
        assert_eq!(seq.failure_places, par.failure_places);
        assert_eq!(seq.good_places, par.good_places);
        assert_eq!(seq.conclusion, par.conclusion);
    }

    #[test]
    fn tensor_and_dual_multiplicativity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..8 {
            let a = crate::testutil::random_module(&mut rng, 2, 1, 2);
            let b = crate::testutil::random_module(&mut rng, 1, 1, 2);
            for n in [2u32, 3, 4] {
                let (ca, cb, cab) = match (
                    curvature_at(&a, n),
                    curvature_at(&b, n),
                    curvature_at(&a.tensor(&b), n),
                ) {
                    (Ok(x), Ok(y), Ok(z)) => (x, y, z),
                    _ => continue,
                };
                let field = CycField::new(n);
                let cx = cyc_x_field(&field);
                assert_eq!(cab.matrix, ca.matrix.kronecker(&cx, &cb.matrix));

                if let Ok(cd) = curvature_at(&a.dual(), n) {
                    let expect = ca.matrix.inverse(&cx).unwrap().transpose();
                    assert_eq!(cd.matrix, expect);
                }
            }
        }
    }

    #[test]
    fn curvature_rejects_iterates() {
        let m = module_of(&[&["q*x"]]).iterate(2);
        assert!(matches!(
            curvature_at(&m, 3),
            Err(CurvatureError::IteratedModule { step: 2 })
        ));
    }
}
