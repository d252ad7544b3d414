use num_bigint::BigInt;
use num_traits::One;

use super::Basis;
use crate::coeff::{Coeff, CoeffRing};

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `x^a y^b * x^c y^d`, using `y^b x^c = sum_k k! C(b,k) C(c,k) x^(c-k) y^(b-k)`.
pub(super) fn monomial_product(k: CoeffRing, a: u32, b: u32, c: u32, d: u32) -> Vec<(Basis, Coeff)> {
    let mut out = Vec::new();
    let mut fact = BigInt::one();
    for j in 0..=b.min(c) {
        if j > 0 {
            fact *= j;
        }
        let v = &fact * binomial(b, j) * binomial(c, j);
        let coeff = k.from_bigint(&v);
        if !k.is_zero(&coeff) {
            out.push((Basis::Weyl(a + c - j, b + d - j), coeff));
        }
    }
    out
}
