//! Worked examples against independent oracles: the closed-form pieces of
//! the replay corpus exercised directly through the kernel API.

use moment_core::symkernel::{parse_ratio, ratio_eq, Ratio, VarId};

fn rt(t: &str) -> Ratio {
    parse_ratio(t).unwrap()
}

/// The |x|^2 closed form of the K != 0 chain: M4 / (4 (a+3)(a+4) k^4 K^3).
const M4: &str = "-(a^2+4*a+3)*k^8 - 2*(a^2+3*a+2)*k^6*K - 2*(a^2+8*a+7)*k^4*K^2 \
                  + 2*(a-2)*k^2*K^3 + 3*K^4";
const M3_DEN: &str = "4*(a+3)*(a+4)*k^4*K^3";

#[test]
fn m3_partial_derivative_matches_hand_expansion() {
    // Engine side: quotient-rule derivative of M3 = M4 / D in k.
    let m3 = rt(M4).div(&rt(M3_DEN)).unwrap();
    let engine = m3.partial_derivative(VarId::KAPPA1).unwrap();

    // Oracle side, written out by hand. Term-by-term power rule:
    //   M4' = -8(a^2+4a+3)k^7 - 12(a^2+3a+2)k^5 K - 8(a^2+8a+7)k^3 K^2
    //         + 4(a-2)k K^3
    //   D'  = 16 (a+3)(a+4) k^3 K^3
    // and the quotient rule (M4' D - M4 D')/D^2 assembled explicitly.
    let m4_prime = rt("-8*(a^2+4*a+3)*k^7 - 12*(a^2+3*a+2)*k^5*K - 8*(a^2+8*a+7)*k^3*K^2 \
                       + 4*(a-2)*k*K^3");
    let den = rt(M3_DEN);
    let den_prime = rt("16*(a+3)*(a+4)*k^3*K^3");
    let hand = m4_prime
        .mul(&den)
        .unwrap()
        .sub(&rt(M4).mul(&den_prime).unwrap())
        .unwrap()
        .div(&den.mul(&den).unwrap())
        .unwrap();

    assert!(ratio_eq(&engine, &hand).unwrap());
}

#[test]
fn gamma_times_its_denominator_recovers_the_numerator() {
    // gamma = |x|^2 (K - k^2) e1(k) / (2 k K + (a+2) k^3)
    let gamma = rt("(w*(K-k^2)*p)/(2*k*K+(a+2)*k^3)");
    let product = gamma.mul(&rt("2*k*K+(a+2)*k^3")).unwrap();
    assert!(ratio_eq(&product, &rt("w*(K-k^2)*p")).unwrap());
}

#[test]
fn collect_examples_from_the_final_polynomials() {
    // degree-10 polynomial of the e1(k1) = 0 branch: leading coefficient
    let deg10 = rt("-1*(a+5)*k^10 + (2*a*(a+9)+37)*K*k^8 + 2*(a*(a*(a+13)+47)+47)*K^2*k^6 \
                    + 2*(a*(a*(a+6)+14)+29)*K^3*k^4 - (a+1)*(a*(a+4)-7)*K^4*k^2 + (a+1)^2*K^5");
    let coeffs = deg10.num().collect_coefficients(VarId::KAPPA1);
    assert_eq!(coeffs.len(), 11);
    let lead = Ratio::from_poly(coeffs[10].clone());
    assert!(ratio_eq(&lead, &rt("-(a+5)")).unwrap());
    assert!(coeffs[10].support().iter().all(|v| *v == VarId::ALPHA));

    // the constant-principal-curvature final condition is linear in k with
    // leading coefficient c(3a+8) - 2
    let linear = rt("k*(c*(3*a+8)-2) - c*(a+2)*(2*c+1)");
    let coeffs = linear.num().collect_coefficients(VarId::KAPPA1);
    assert_eq!(coeffs.len(), 2);
    assert!(ratio_eq(
        &Ratio::from_poly(coeffs[1].clone()),
        &rt("c*(3*a+8)-2")
    )
    .unwrap());
}
