mod common;

use common::raw_curve;
use frobmon::builders::{
    build_from_av, build_from_curve, check_curve_jacobian_agreement, jacobian_data, monodromy_pairing_by_residues,
    UniformizationData,
};
use frobmon::linalg::{big, char_poly, int, QMatrix, Rational};
use frobmon::module::{
    assemble, hodge_newton, monodromy_pairing_matrix, verify_relations, verify_thm31, DualityPairing,
};
use num::BigInt;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn assembled_modules_satisfy_relations(raw in raw_curve()) {
        let c = raw.instance();
        let m = build_from_curve(&c).unwrap();
        let r = verify_relations(&m);
        prop_assert!(r.all_pass(), "{:?}", r);
        let b1 = c.graph().betti_one().unwrap();
        prop_assert_eq!(r.rank_n, b1);
        prop_assert_eq!(m.dim() as u64, 2 * (c.graph().total_genus() + b1 as u64));
    }

    #[test]
    fn image_and_kernel_of_n(raw in raw_curve()) {
        let m = build_from_curve(&raw.instance()).unwrap();
        let d = m.dims();
        // image lies in the weight-0 block
        let n = m.n();
        prop_assert!(n.submatrix(d.w0, m.dim(), 0, m.dim()).is_zero());
        prop_assert_eq!(n.rank(), d.w0);
        // weight-0 and weight-1 blocks are killed
        prop_assert!(n.submatrix(0, m.dim(), 0, d.w0 + d.w1).is_zero());
        // the kernel has dimension w0 + w1 exactly
        prop_assert_eq!(n.kernel().len(), d.w0 + d.w1);
    }

    #[test]
    fn endpoints_and_symmetry(raw in raw_curve()) {
        let c = raw.instance();
        let m = build_from_curve(&c).unwrap();
        let hn = hodge_newton(&m).unwrap();
        let expected = c.graph().total_genus() as i64 + c.graph().betti_one().unwrap() as i64;
        prop_assert_eq!(&hn.t_newton, &int(expected));
        prop_assert_eq!(hn.t_hodge as i64, expected);
        prop_assert!(hn.endpoints_equal);
        prop_assert!(hn.newton_above_hodge);
        prop_assert!(hn.newton.is_symmetric_about(&int(1)));
    }

    #[test]
    fn thm31_and_agreement(raw in raw_curve()) {
        let c = raw.instance();
        let m = build_from_curve(&c).unwrap();
        prop_assert!(verify_thm31(&m));
        prop_assert!(DualityPairing::for_module(&m).is_nondegenerate());
        prop_assert!(check_curve_jacobian_agreement(&c).unwrap());
        prop_assert_eq!(monodromy_pairing_by_residues(c.graph()).unwrap(), m.gram().clone());
    }

    #[test]
    fn thm31_scales_with_gram(raw in raw_curve(), scale in 1i64..6) {
        let c = raw.instance();
        let u = jacobian_data(&c).unwrap();
        let scaled_gram = u.gram().scale(&int(scale));
        let scaled = UniformizationData::new(u.torus_rank(), scaled_gram, u.b_frobenius().clone(), u.p(), u.f()).unwrap();
        let (m, ms) = (build_from_av(&u).unwrap(), build_from_av(&scaled).unwrap());
        prop_assert!(verify_thm31(&ms));
        let lhs = |m: &frobmon::PhiNModule| &DualityPairing::for_module(m).matrix * m.n();
        prop_assert_eq!(lhs(&ms), lhs(&m).scale(&int(scale)));
        prop_assert_eq!(monodromy_pairing_matrix(&ms), monodromy_pairing_matrix(&m).scale(&int(scale)));
    }

    #[test]
    fn relabeling_preserves_invariants(raw in raw_curve()) {
        let n = raw.genera.len();
        let e = raw.edges().len();
        let a = build_from_curve(&raw.instance()).unwrap();
        let b = build_from_curve(&raw.instance_labelled(|v| format!("w{:02}", n - 1 - v), |i| format!("f{:02}", e - 1 - i))).unwrap();
        prop_assert_eq!(a.dims(), b.dims());
        prop_assert_eq!(char_poly(a.phi()).unwrap(), char_poly(b.phi()).unwrap());
        prop_assert_eq!(a.gram().det().unwrap(), b.gram().det().unwrap());
        prop_assert_eq!(a.n().rank(), b.n().rank());
    }

    #[test]
    fn tree_instances_are_pure_good_reduction(raw in raw_curve()) {
        let mut tree = raw.clone();
        tree.extra.clear();
        let c = tree.instance();
        let m = build_from_curve(&c).unwrap();
        prop_assert!(m.n().is_zero());
        let hn = hodge_newton(&m).unwrap();
        prop_assert_eq!(hn.t_newton, big(BigInt::from(c.graph().total_genus())));
    }
}

#[test]
fn corrupted_toric_frobenius_breaks_commutation_for_every_gram() {
    for g in [QMatrix::from_i64(&[&[1]]), QMatrix::from_i64(&[&[2, 1], &[1, 2]])] {
        let m = assemble(5, 1, &g, &frobmon::WeilMatrix::empty(5, 1).unwrap()).unwrap();
        let t = g.rows();
        let mut phi = m.phi().clone();
        for i in 0..t {
            phi.set(t + i, t + i, Rational::from_integer(1.into()));
        }
        let bad = frobmon::PhiNModule::from_parts(5, 1, m.dims(), phi, m.n().clone(), m.fil1_dim(), g.clone()).unwrap();
        let r = verify_relations(&bad);
        assert!(!r.commutation);
        assert!(!(&(bad.n() * bad.phi()) - &(bad.phi() * bad.n()).scale(&int(5))).is_zero());
    }
}
