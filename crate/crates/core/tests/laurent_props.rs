use frobmon::laurent::{check_hypercocycle, LaurentForm, LaurentPoly};
use frobmon::linalg::Rational;
use num::Zero;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-10i64..=10, rational()), 0..8).prop_map(LaurentPoly::from_terms)
}

proptest! {
    #[test]
    fn d_after_integrate_is_identity(w in laurent()) {
        let w = LaurentForm(w);
        prop_assert_eq!(w.integrate().d(), w);
    }

    #[test]
    fn integrate_after_d_recovers_function_mod_constants(f in laurent()) {
        let s = f.d().integrate();
        prop_assert!(s.log_coeff().is_zero());
        prop_assert_eq!(s.poly(), &f.without_constant());
    }

    #[test]
    fn exact_forms_have_no_residue(f in laurent()) {
        prop_assert!(f.d().residue().is_zero());
    }

    #[test]
    fn residue_and_integrate_are_linear(a in laurent(), b in laurent(), c in rational()) {
        let (wa, wb) = (LaurentForm(a), LaurentForm(b.scale(&c)));
        let sum = &wa + &wb;
        prop_assert_eq!(sum.residue(), wa.residue() + wb.residue());
        prop_assert_eq!(sum.integrate(), &wa.integrate() + &wb.integrate());
    }

    #[test]
    fn hypercocycle_forces_equal_residues(wb in laurent(), fe in laurent(), extra in rational()) {
        let wb = LaurentForm(wb);
        let wa = &wb + &fe.d();
        prop_assert!(check_hypercocycle(&wa, &wb, &fe));
        prop_assert_eq!(wa.residue(), wb.residue());
        let bumped = &wa + &LaurentForm(LaurentPoly::monomial(-1, extra.clone()));
        prop_assert_eq!(check_hypercocycle(&bumped, &wb, &fe), extra.is_zero());
    }

    #[test]
    fn correction_is_constant_for_hypercocycles(wb in laurent(), fe in laurent()) {
        let wb = LaurentForm(wb);
        let wa = &wb + &fe.d();
        let c = frobmon::laurent::splitting_correction(&fe, &wa.integrate(), &wb.integrate());
        prop_assert!(c.constant);
    }
}
