//! Bridge between differential modules and q-difference modules: the
//! deformation A = I + (q-1) x G, its specialization back at q = 1, and the
//! curvature test run directly on the deformed family.

use num_traits::Zero;
use thiserror::Error;

use crate::curvature::{self, CurvatureError, CurvatureReport, Verdict};
use crate::cyclotomic::{cyc_x_field, x_field, CycField, CycFun, RatFun};
use crate::field::{FieldCtx, Rat, QQ};
use crate::frac::{Frac, FracField};
use crate::matrix::Mat;
use crate::qmodule::{ModuleError, QDiffModule};

/// Rational function of x with rational coefficients.
pub type QxFun = Frac<Rat>;
/// The field Q(x).
pub type QxField = FracField<QQ>;

pub fn qx_field() -> QxField {
    FracField::new(QQ, "x")
}

/// A differential module over Q(x), presented through the matrix G of the
/// operator x d/dx in a fixed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffModule {
    pub dim: usize,
    pub g: Mat<QxFun>,
}

#[derive(Error, Clone, Debug, PartialEq)]
pub enum DeformError {
    #[error("matrix has a pole at q = 1; module does not specialize")]
    NotSpecializable,
    #[error("matrix is singular or not deformable: {0}")]
    Module(#[from] ModuleError),
    #[error("matrix has a pole at q = {0}")]
    BadSpecialization(String),
}

impl DiffModule {
    pub fn new(g: Mat<QxFun>) -> Result<Self, ModuleError> {
        if g.rows != g.cols {
            return Err(ModuleError::NotSquare {
                rows: g.rows,
                cols: g.cols,
            });
        }
        Ok(DiffModule { dim: g.rows, g })
    }
}

/// A q-difference module with the deformation parameter specialized to a
/// rational value a; entries live in Q(x) again.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializedModule {
    pub dim: usize,
    pub matrix: Mat<QxFun>,
    pub at: Rat,
}

fn embed_qx(f: &QxFun) -> RatFun {
    let xf = x_field();
    let lift = |p: &crate::poly::Poly<Rat>| {
        crate::poly::Poly::from_coeffs(
            &xf.base,
            p.coeffs
                .iter()
                .map(|c| xf.base.constant(c.clone()))
                .collect(),
        )
    };
    xf.from_parts(lift(&f.num), lift(&f.den))
        .expect("denominator stays nonzero under coefficient embedding")
}

/// Deform a differential module into the q-difference module with matrix
/// A = I + (q-1) x G.
pub fn deform(d: &DiffModule) -> Result<QDiffModule, ModuleError> {
    let xf = x_field();
    let qf = xf.base.clone();
    let q_minus_1 = xf.constant(qf.sub(&qf.var_elem(), &qf.one()));
    let x = xf.var_elem();
    let scale = xf.mul(&q_minus_1, &x);
    let g = d.g.map(embed_qx);
    let a = Mat::identity(&xf, d.dim).add(&xf, &g.scale(&xf, &scale));
    QDiffModule::new(a)
}

fn eval_q_at(f: &RatFun, a: &Rat) -> Result<QxFun, DeformError> {
    let qxf = qx_field();
    let eval_poly = |p: &crate::poly::Poly<crate::cyclotomic::RatQ>| -> Result<crate::poly::Poly<Rat>, DeformError> {
        let coeffs = p
            .coeffs
            .iter()
            .map(|c| {
                let num = c.num.eval(&QQ, a);
                let den = c.den.eval(&QQ, a);
                if den.is_zero() {
                    Err(DeformError::BadSpecialization(a.to_string()))
                } else {
                    Ok(num / den)
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(crate::poly::Poly::from_coeffs(&QQ, coeffs))
    };
    let num = eval_poly(&f.num)?;
    let den = eval_poly(&f.den)?;
    qxf.from_parts(num, den)
        .ok_or_else(|| DeformError::BadSpecialization(a.to_string()))
}

/// Specialize the deformation parameter q to a rational value a.
pub fn specialize_q_value(m: &QDiffModule, a: &Rat) -> Result<SpecializedModule, DeformError> {
    let matrix = m.sigma_matrix.try_map(|e| eval_q_at(e, a))?;
    Ok(SpecializedModule {
        dim: m.dim,
        matrix,
        at: a.clone(),
    })
}

/// Recover the differential matrix G = [(A - I)/((q-1) x)] at q = 1. Fails
/// when A - I is not divisible by q - 1 or when entries have a pole at
/// q = 1.
pub fn specialize_q1(m: &QDiffModule) -> Result<DiffModule, DeformError> {
    let xf = x_field();
    let qf = xf.base.clone();
    let q_minus_1 = xf.constant(qf.sub(&qf.var_elem(), &qf.one()));
    let x = xf.var_elem();
    let scale = xf
        .inv(&xf.mul(&q_minus_1, &x))
        .expect("(q-1)x is invertible in Q(q)(x)");
    let id = Mat::identity(&xf, m.dim);
    let diff = m.sigma_matrix.sub(&xf, &id).scale(&xf, &scale);
    let one = Rat::from_integer(1.into());
    let g = diff.try_map(|e| eval_q_at(e, &one))?;
    Ok(DiffModule { dim: m.dim, g })
}

fn reduce_qx(field: &CycField, f: &QxFun) -> CycFun {
    let cx = cyc_x_field(field);
    let lift = |p: &crate::poly::Poly<Rat>| {
        crate::poly::Poly::from_coeffs(
            &cx.base,
            p.coeffs.iter().map(|c| field.from_rat(c)).collect(),
        )
    };
    cx.from_parts(lift(&f.num), lift(&f.den))
        .expect("denominator of a rational-coefficient function stays nonzero")
}

/// Curvature of the deformed family at the place n, computed without
/// constructing the q-side module: the ordered product
/// prod_{i=0}^{n-1} (I + (zeta - 1) zeta^i x G(zeta^i x)).
pub fn diff_curvature(d: &DiffModule, n: u32) -> Result<CurvatureReport, CurvatureError> {
    let field = CycField::new(n);
    let cx = cyc_x_field(&field);
    let zeta = field.zeta();
    let zeta_minus_1 = field.sub(&zeta, &field.one());
    let g = d.g.map(|e| reduce_qx(&field, e));
    let mut acc = Mat::identity(&cx, d.dim);
    let mut zpow = field.one();
    for _ in 0..n {
        let scale = cx.mul(
            &cx.constant(field.mul(&zeta_minus_1, &zpow)),
            &cx.var_elem(),
        );
        let gi = g.map(|e| cx.scale_var(e, &zpow));
        let step = Mat::identity(&cx, d.dim).add(&cx, &gi.scale(&cx, &scale));
        acc = acc.mul(&cx, &step);
        zpow = field.mul(&zpow, &zeta);
    }
    let is_identity = acc.is_identity(&cx);
    Ok(CurvatureReport {
        n,
        matrix: acc,
        is_identity,
    })
}

/// Scan the v-curvatures of the deformed family over a range of places.
pub fn diff_triviality_scan(
    d: &DiffModule,
    n_min: u32,
    n_max: u32,
    threshold: u32,
    parallel: bool,
) -> Result<Verdict, CurvatureError> {
    // det(I + (q-1)xG) specializes to 1 at q = 1, so it cannot vanish
    let m = deform(d).expect("deformed matrix is invertible");
    curvature::triviality_scan(&m, n_min, n_max, threshold, parallel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::curvature_at;
    use crate::field::Prec;
    use crate::testutil::mat_of;

    fn qx(s: &str) -> QxFun {
        // reuse the q,x parser, then check no q appears and specialize
        let f = crate::expr::parse_ratfun(s).unwrap();
        eval_q_at(&f, &Rat::from_integer(1.into())).unwrap()
    }

    fn diff_of(entries: &[&[&str]]) -> DiffModule {
        let rows: Vec<Vec<QxFun>> = entries
            .iter()
            .map(|r| r.iter().map(|s| qx(s)).collect())
            .collect();
        DiffModule::new(Mat::from_rows(rows)).unwrap()
    }

    #[test]
    fn deform_then_specialize_roundtrip() {
        let d = diff_of(&[&["1/(2*x)", "x"], &["0", "3"]]);
        let m = deform(&d).unwrap();
        let back = specialize_q1(&m).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn deform_of_inverse_x_is_q_like() {
        // G = [1/x] deforms to A = [1 + (q-1)] = [q]
        let d = diff_of(&[&["1/x"]]);
        let m = deform(&d).unwrap();
        let xf = x_field();
        let qf = xf.base.clone();
        let expect = xf.constant(qf.var_elem());
        assert_eq!(*m.sigma_matrix.at(0, 0), expect);
    }

    #[test]
    fn specialize_at_value() {
        let d = diff_of(&[&["1/x"]]);
        let m = deform(&d).unwrap();
        let two = Rat::from_integer(2.into());
        let s = specialize_q_value(&m, &two).unwrap();
        assert_eq!(*s.matrix.at(0, 0), qx("2"));
    }

    #[test]
    fn specialize_detects_pole() {
        // A = [1/(q-1)] has a pole at q = 1
        let m = crate::testutil::module_of(&[&["1/(q-1)"]]);
        assert!(matches!(
            specialize_q1(&m),
            Err(DeformError::BadSpecialization(_))
        ));
    }

    #[test]
    fn not_deformation_shaped_still_specializes_when_finite() {
        // A = [x]: (A - I)/((q-1)x) has a q-pole at 1, so specialization
        // of the recovered G fails
        let m = crate::testutil::module_of(&[&["x"]]);
        assert!(specialize_q1(&m).is_err());
    }

    #[test]
    fn bridge_matches_module_curvature() {
        let d = diff_of(&[&["1/(2*x)", "1"], &["x", "0"]]);
        let m = deform(&d).unwrap();
        for n in 1..=6u32 {
            let a = diff_curvature(&d, n).unwrap();
            let b = curvature_at(&m, n).unwrap();
            assert_eq!(a.matrix, b.matrix, "place {n}");
            assert_eq!(a.is_identity, b.is_identity);
        }
    }

    #[test]
    fn half_inverse_x_witness() {
        // G = [1/(2x)], n = 3: the scalar curvature is
        // prod (1 + (z-1)/2) over z in {1, zeta, zeta^2} = -1/8
        let d = diff_of(&[&["1/(2*x)"]]);
        let rep = diff_curvature(&d, 3).unwrap();
        let field = CycField::new(3);
        let cx = cyc_x_field(&field);
        let val = rep.matrix.at(0, 0);
        let minus_eighth = cx.constant(field.from_rat(&Rat::new((-1).into(), 8.into())));
        assert_eq!(val, &minus_eighth, "got {}", cx.print(val, Prec::Add));
        assert!(!rep.is_identity);
    }

    #[test]
    fn nilpotent_constant_g_unipotent_curvature() {
        // G = [[0, 1/x], [0, 0]]: each factor is I + (zeta-1)N, so the
        // curvature at n is I + n(zeta-1)N.  (With G = [[0, 1], [0, 0]] the
        // off-diagonal sums (zeta-1)x * sum zeta^i = 0 mod Phi_n instead.)
        let d = diff_of(&[&["0", "1/x"], &["0", "0"]]);
        for n in [2u32, 3, 5] {
            let field = CycField::new(n);
            let cx = cyc_x_field(&field);
            let rep = diff_curvature(&d, n).unwrap();
            let zeta = field.zeta();
            let coeff = field.mul(
                &field.from_rat(&Rat::from_integer((n as i64).into())),
                &field.sub(&zeta, &field.one()),
            );
            assert_eq!(*rep.matrix.at(0, 1), cx.constant(coeff), "place {n}");
            assert!(cx.is_one(rep.matrix.at(0, 0)));
            assert!(cx.is_zero(rep.matrix.at(1, 0)));
        }

        let constant_n = diff_of(&[&["0", "1"], &["0", "0"]]);
        let rep = diff_curvature(&constant_n, 5).unwrap();
        assert!(rep.is_identity, "constant nilpotent telescopes to I");
    }

    #[test]
    fn scan_of_zero_g_trivial() {
        let d = diff_of(&[&["0"]]);
        let v = diff_triviality_scan(&d, 1, 20, 3, false).unwrap();
        assert!(matches!(
            v.conclusion,
            crate::curvature::Conclusion::ConsistentWithTrivial
        ));
    }

    #[test]
    fn deform_keeps_strings_readable() {
        let d = diff_of(&[&["1/x"]]);
        let m = deform(&d).unwrap();
        let xf = x_field();
        assert_eq!(xf.print(m.sigma_matrix.at(0, 0), Prec::Add), "q");
        let _ = mat_of(&[&["q"]]);
    }
}
