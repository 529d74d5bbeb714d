//! Property tests of the kernel and the derivation contexts.

use std::collections::BTreeMap;

use proptest::prelude::*;

use moment_core::derivation::{Context, ContextKind, Dir};
use moment_core::symkernel::{parse_expr, ratio_eq, Poly, Ratio, VarId};

/// Small random polynomials over a handful of variables.
fn arb_poly(vars: &'static [VarId]) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (
            prop::collection::vec(0u16..3, vars.len()),
            -5i64..=5,
        ),
        0..4,
    )
    .prop_map(move |terms| {
        let mut poly = Poly::zero();
        for (exps, coeff) in terms {
            let mut mono = Poly::constant(num_rational::BigRational::from_integer(coeff.into()));
            for (v, e) in vars.iter().zip(exps) {
                if e > 0 {
                    mono = mono.mul(&Poly::var(*v).pow(e as u32).unwrap()).unwrap();
                }
            }
            poly = poly.add(&mono).unwrap();
        }
        poly
    })
}

fn arb_ratio(vars: &'static [VarId]) -> impl Strategy<Value = Ratio> {
    (arb_poly(vars), arb_poly(vars)).prop_map(|(num, den)| {
        let den = if den.is_zero() { Poly::one() } else { den };
        Ratio::new(num, den).unwrap()
    })
}

const KERNEL_VARS: [VarId; 3] = [VarId::KAPPA1, VarId::GAUSS, VarId::PHI_SQ];
// symbols over which every context can differentiate
const CMC_VARS: [VarId; 2] = [VarId::PHI_SQ, VarId::N_PHI];

proptest! {
    #[test]
    fn parse_print_parse_is_identity(text in arb_ratio(&KERNEL_VARS).prop_map(|r| r.to_dsl())) {
        let ast = parse_expr(&text).unwrap();
        let printed = ast.to_string();
        prop_assert_eq!(&parse_expr(&printed).unwrap(), &ast);
    }

    #[test]
    fn cross_multiplication_invariance(
        r in arb_ratio(&KERNEL_VARS),
        c in arb_poly(&KERNEL_VARS),
    ) {
        prop_assume!(!c.is_zero());
        let scaled = Ratio::new(
            r.num().mul(&c).unwrap(),
            r.den().unwrap().mul(&c).unwrap(),
        )
        .unwrap();
        prop_assert!(ratio_eq(&r, &scaled).unwrap());
    }

    #[test]
    fn substitution_passes_unbound_variables_through(r in arb_ratio(&KERNEL_VARS)) {
        let out = r.substitute(&BTreeMap::new()).unwrap();
        prop_assert!(ratio_eq(&out, &r).unwrap());
    }

    #[test]
    fn derivations_are_linear(
        x in arb_ratio(&CMC_VARS),
        y in arb_ratio(&CMC_VARS),
    ) {
        let ctx = Context::shared(ContextKind::Cmc);
        for dir in [Dir::E1, Dir::E2] {
            let lhs = ctx.derive(dir, &x.add(&y).unwrap()).unwrap();
            let rhs = ctx.derive(dir, &x).unwrap().add(&ctx.derive(dir, &y).unwrap()).unwrap();
            prop_assert!(ratio_eq(&lhs, &rhs).unwrap());
        }
    }

    #[test]
    fn derivations_satisfy_leibniz(
        x in arb_ratio(&CMC_VARS),
        y in arb_ratio(&CMC_VARS),
    ) {
        let ctx = Context::shared(ContextKind::Cmc);
        for dir in [Dir::E1, Dir::E2] {
            let lhs = ctx.derive(dir, &x.mul(&y).unwrap()).unwrap();
            let rhs = ctx
                .derive(dir, &x)
                .unwrap()
                .mul(&y)
                .unwrap()
                .add(&x.mul(&ctx.derive(dir, &y).unwrap()).unwrap())
                .unwrap();
            prop_assert!(ratio_eq(&lhs, &rhs).unwrap());
        }
    }

    #[test]
    fn constants_have_zero_derivative(c in -20i64..=20) {
        let ctx = Context::shared(ContextKind::KNonzeroClosed);
        let r = Ratio::int(c);
        for dir in [Dir::E1, Dir::E2] {
            prop_assert!(ctx.derive(dir, &r).unwrap().is_zero());
        }
    }
}
