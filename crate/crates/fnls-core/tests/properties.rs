//! Property tests for the algebraic invariants of the discretization layer.

use proptest::prelude::*;

use fnls_core::dynamics::nonlinear_step;
use fnls_core::fft::Fft;
use fnls_core::fracops;
use fnls_core::functional::{mass, Params, State};
use fnls_core::grid::{inner_product, Field, Grid};
use fnls_core::Complex64;

fn grid_1d() -> Grid {
    Grid::new(1, 64, 24.0).unwrap()
}

fn field_from(values: &[(f64, f64)]) -> Field {
    let grid = grid_1d();
    Field::new(grid, values.iter().map(|&(re, im)| Complex64::new(re, im)).collect()).unwrap()
}

fn value_vec() -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fft_round_trip_is_identity(values in value_vec()) {
        let mut data: Vec<Complex64> =
            values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
        let original = data.clone();
        let plan = Fft::new(64);
        plan.forward(&mut data);
        plan.inverse(&mut data);
        let scale = original.iter().map(|v| v.norm()).fold(1.0, f64::max);
        for (a, b) in data.iter().zip(original.iter()) {
            prop_assert!((a - b).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn inner_product_sesquilinear(a in value_vec(), b in value_vec(), c in value_vec(),
                                  s_re in -3.0f64..3.0, s_im in -3.0f64..3.0) {
        let (fa, fb, fc) = (field_from(&a), field_from(&b), field_from(&c));
        let s = Complex64::new(s_re, s_im);
        // Linear in the second argument.
        let lhs = inner_product(&fa, &{
            Field::new(
                fa.grid().clone(),
                fb.values().iter().zip(fc.values()).map(|(x, y)| s * x + y).collect(),
            ).unwrap()
        }).unwrap();
        let rhs = s * inner_product(&fa, &fb).unwrap() + inner_product(&fa, &fc).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
        // Conjugate-linear in the first argument.
        let lhs2 = inner_product(&{
            Field::new(
                fa.grid().clone(),
                fa.values().iter().map(|x| s * x).collect(),
            ).unwrap()
        }, &fb).unwrap();
        let rhs2 = s.conj() * inner_product(&fa, &fb).unwrap();
        prop_assert!((lhs2 - rhs2).norm() <= 1e-10 * (1.0 + rhs2.norm()));
        // Conjugate symmetry.
        let ab = inner_product(&fa, &fb).unwrap();
        let ba = inner_product(&fb, &fa).unwrap();
        prop_assert!((ab - ba.conj()).norm() <= 1e-10 * (1.0 + ab.norm()));
    }

    #[test]
    fn mass_positive_definite_and_parseval(values in value_vec()) {
        let f = field_from(&values);
        let m = mass(&f);
        prop_assert!(m >= 0.0);
        let all_zero = values.iter().all(|&(re, im)| re == 0.0 && im == 0.0);
        if !all_zero {
            prop_assert!(m > 0.0);
        }
        // Parseval under the crate normalization.
        let ones = vec![1.0; f.grid().node_count()];
        let spectral = fracops::spectral_norm_sq(&f, &ones);
        prop_assert!((m - spectral).abs() <= 1e-12 * m.max(1e-30));
    }

    #[test]
    fn seminorm_quadratic_homogeneity(values in value_vec(),
                                      c_re in -3.0f64..3.0, c_im in -3.0f64..3.0) {
        let f = field_from(&values);
        let c = Complex64::new(c_re, c_im);
        let alpha = 0.55;
        let base = fracops::gagliardo_seminorm_sq(&f, alpha).unwrap();
        let scaled = Field::new(
            f.grid().clone(),
            f.values().iter().map(|v| c * v).collect(),
        ).unwrap();
        let got = fracops::gagliardo_seminorm_sq(&scaled, alpha).unwrap();
        prop_assert!((got - c.norm_sqr() * base).abs() <= 1e-10 * (1.0 + base));
    }

    #[test]
    fn nonlinear_substep_preserves_pointwise_modulus(a in value_vec(), b in value_vec(),
                                                     dt in -0.5f64..0.5) {
        let params = Params {
            alpha: 0.75, mu1: 1.0, mu2: 1.3, p1: 2.5, p2: 2.3,
            beta: 0.8, r1: 1.2, r2: 1.4, tau1: 1.0, tau2: 1.0,
        };
        let state = State::new(field_from(&a), field_from(&b)).unwrap();
        let out = nonlinear_step(&state, dt, &params);
        for (x, y) in out.u1.values().iter().zip(state.u1.values()) {
            prop_assert!((x.norm() - y.norm()).abs() <= 1e-13 * y.norm().max(1e-30));
        }
        for (x, y) in out.u2.values().iter().zip(state.u2.values()) {
            prop_assert!((x.norm() - y.norm()).abs() <= 1e-13 * y.norm().max(1e-30));
        }
    }
}
