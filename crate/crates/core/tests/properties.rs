use std::sync::Arc;

use fuzzy_coulomb::fock::{build_basis, coordinate_matrix, radius_matrix, Axis, LengthScale};
use fuzzy_coulomb::sparse::{SparseMatrix, C64};
use fuzzy_coulomb::spectrum::{
    bound_energies, build_eigenstate, casimir_quantization, complex_log_gamma, hypergeom_terminating, scattering_tau,
    smatrix, smatrix_poles, Branch,
};
use fuzzy_coulomb::superops::HatOperators;
use fuzzy_coulomb::symbolic::{normal_order, Letter, OperatorExpr, RawExpr, Scalar};
use proptest::prelude::*;

fn letters() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0u8..8).prop_map(Letter::from_index), 0..=8)
}

fn raw_word(ls: &[Letter]) -> RawExpr {
    RawExpr {
        terms: vec![(Scalar::one(), ls.to_vec())],
    }
}

fn lam(l: f64) -> LengthScale {
    LengthScale::new(l).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    // rewriting and the closed-form product must reach the same normal form
    #[test]
    fn normal_order_is_confluent(ls in letters()) {
        let rewritten = normal_order(&raw_word(&ls));
        let multiplied = ls.iter().fold(OperatorExpr::scalar(Scalar::one()), |acc, l| {
            acc.mul(&OperatorExpr::letter(*l))
        });
        prop_assert_eq!(rewritten, multiplied);
    }

    #[test]
    fn normal_order_is_idempotent(ls in letters()) {
        let once = normal_order(&raw_word(&ls));
        let raw = RawExpr {
            terms: once.terms().map(|(w, c)| (c.clone(), w.letters())).collect(),
        };
        prop_assert_eq!(normal_order(&raw), once);
    }

    #[test]
    fn commutator_is_antisymmetric(a in letters(), b in letters()) {
        let x = normal_order(&raw_word(&a));
        let y = normal_order(&raw_word(&b));
        prop_assert!(x.commutator(&y).add(&y.commutator(&x)).is_zero());
    }

    #[test]
    fn branches_sum_to_band_edge(l in 0.01f64..3.0, q in -5.0f64..5.0, n in 1u32..20) {
        let r = bound_energies(lam(l), q, n).unwrap();
        let edge = 2.0 / (l * l);
        prop_assert!((r.e_i + r.e_ii - edge).abs() <= 1e-12 * edge);
        prop_assert!(r.e_i <= 0.0 && r.e_ii >= edge);
        prop_assert!(r.omega_n > 0.0 && r.omega_n <= 1.0);
    }

    #[test]
    fn casimir_value_is_n_squared(l in 0.01f64..3.0, q in 0.05f64..5.0, n in 1u32..20) {
        let r = bound_energies(lam(l), q, n).unwrap();
        let n2 = (n * n) as f64;
        for e in [r.e_i, r.e_ii] {
            let c = casimir_quantization(lam(l), q, e).unwrap();
            prop_assert!((c - n2).abs() <= 1e-10 * n2, "{} vs {}", c, n2);
        }
    }

    #[test]
    fn log_gamma_recurrence(re in 0.5f64..10.0, im in -50.0f64..50.0) {
        let z = C64::new(re, im);
        let d = complex_log_gamma(z + 1.0).unwrap() - complex_log_gamma(z).unwrap() - z.ln();
        // equal up to a multiple of 2πi
        let k = (d.im / std::f64::consts::TAU).round();
        let d = d - C64::new(0.0, k * std::f64::consts::TAU);
        prop_assert!(d.norm() <= 1e-13 * complex_log_gamma(z).unwrap().norm().max(1.0), "{}", d);
    }

    #[test]
    fn smatrix_is_unitary_and_symmetric(l in 0.05f64..2.0, q in -4.0f64..4.0, j in 0u32..=5, t in 0.001f64..0.999) {
        let edge = 2.0 / (l * l);
        let e = t * edge;
        let s = smatrix(lam(l), q, j, e).unwrap().value;
        prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
        let mirror = smatrix(lam(l), q, j, edge - e).unwrap().value;
        prop_assert!((s - mirror).norm() <= 1e-9);
        let tau = scattering_tau(lam(l), q, e).unwrap();
        if q != 0.0 {
            prop_assert!(tau > 1.0);
        }
    }

    #[test]
    fn poles_match_bound_energies(l in 0.05f64..2.0, q in 0.1f64..4.0, j in 0u32..4) {
        let poles = smatrix_poles(lam(l), q, j, 4);
        prop_assert_eq!(poles.len(), 8);
        for k in 0..4u32 {
            let r = bound_energies(lam(l), q, j + 1 + k).unwrap();
            prop_assert!((poles[2 * k as usize] - r.e_i).abs() <= 1e-9 * r.e_i.abs().max(1.0));
            prop_assert!((poles[2 * k as usize + 1] - r.e_ii).abs() <= 1e-9 * r.e_ii);
        }
    }

    #[test]
    fn hypergeometric_trivial_arguments(n in 0u32..10, big_n in 0u32..40, c in 0.5f64..12.0, z in -5.0f64..5.0) {
        prop_assert_eq!(hypergeom_terminating(0, big_n, c, z).unwrap(), 1.0);
        prop_assert_eq!(hypergeom_terminating(n, 0, c, z).unwrap(), 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // the closed form solves the recurrence; only the outermost levels of a
    // cut profile carry a residual
    #[test]
    fn eigenstate_residual_sits_at_the_cut(l in 0.3f64..1.5, q in 0.5f64..2.0, n_r in 0u32..3, j in 0u32..3, repulsive in any::<bool>()) {
        let (branch, q) = if repulsive { (Branch::II, -q) } else { (Branch::I, q) };
        let st = build_eigenstate(branch, lam(l), q, n_r, j, 0, 40, 2, 1.0).unwrap();
        let hat = HatOperators::new(Arc::clone(st.psi.basis()), lam(l));
        let out = hat.hamiltonian(q).apply(&st.psi).unwrap().sub(&st.psi.scale(C64::new(st.radial.energy, 0.0))).unwrap();
        let basis = st.psi.basis();
        let cut = st.profile_nmax;
        let mut inner = 0.0;
        for (r, c, v) in out.matrix().iter() {
            if basis.level(r) < cut {
                inner += (basis.level(c) + 1) as f64 * v.norm_sqr();
            }
        }
        let norm = st.psi.weighted_norm_sq_unchecked() / (4.0 * std::f64::consts::PI * l.powi(3));
        prop_assert!((inner / norm).sqrt() <= 1e-11, "{}", (inner / norm).sqrt());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn fuzzy_coordinates_close(l in 0.05f64..3.0, nmax in 1usize..14) {
        let basis = build_basis(nmax);
        let x = Axis::ALL.map(|a| coordinate_matrix(&basis, a, lam(l)).matrix().clone());
        let scale = x[0].max_abs().max(l);
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let c = x[i].matmul(&x[j]).sub(&x[j].matmul(&x[i]));
            let d = c.sub(&x[k].scale(C64::new(0.0, 2.0 * l)));
            prop_assert!(d.max_abs() <= 1e-13 * scale * scale, "{}", d.max_abs());
        }
        let r = radius_matrix(&basis, lam(l)).matrix().clone();
        let sq = x.iter().fold(r.matmul(&r), |acc, xi| acc.sub(&xi.matmul(xi)));
        let d = sq.sub(&SparseMatrix::identity(basis.dim()).scale(C64::new(l * l, 0.0)));
        prop_assert!(d.max_abs() <= 1e-13 * scale * scale);
    }
}
