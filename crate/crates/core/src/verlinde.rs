//! Rank-2 Verlinde numbers and the dimension counts built on them.
//!
//! The level-k genus-g number is the trigonometric sum
//! ((k+2)/2)^(g-1) sum_{j=1}^{k+1} sin(j pi/(k+2))^(2-2g). It is evaluated
//! exactly: writing x = e^(2 pi i j/(k+2)), each term is a rational function
//! of x, and the sum over the nontrivial (k+2)-nd roots of unity is a
//! symmetric function of the roots of a known integer polynomial, so Newton's
//! identities reduce everything to exact rational arithmetic. The integrality
//! gate is then a denominator check rather than a floating-point residual.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::comb::binomial;
use crate::error::{Error, Result};

fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// dim of the level-k rank-2 theta space for genus g, exact.
pub fn verlinde_su2(g: usize, k: usize) -> Result<BigInt> {
    if g < 2 {
        return Err(Error::GenusOutOfRange {
            got: g,
            min: 2,
            max: usize::MAX,
        });
    }
    if !(1..=64).contains(&k) {
        return Err(Error::InvalidArgument(format!(
            "level {k} out of range [1, 64]"
        )));
    }
    let n = k + 2;
    // 1 - cos(2 pi j/n) = -(x-1)^2 / (2x) for x = e^(2 pi i j/n), so the sum
    // becomes n^(g-1) (-2)^(g-1) sum_x x^(g-1)/(x-1)^(2g-2) over x^n = 1, x != 1.
    //
    // With y = x-1, the y's are the roots of ((1+y)^n - 1)/y; expanding
    // x^(g-1) = (1+y)^(g-1) binomially leaves power sums of 1/y, i.e. power
    // sums of the roots of the reversed polynomial.
    let big_n = n - 1; // degree
                       // reversed polynomial R(z) = sum_l C(n, n-l) z^l, made monic by dividing
                       // by the leading coefficient n
    let monic: Vec<BigRational> = (0..=big_n)
        .map(|l| rat_int(&binomial(n, n - l)) / rat_int(&BigInt::from_usize(n).unwrap()))
        .collect();
    let max_m = 2 * g - 2;
    let q = power_sums_of_monic(&monic, big_n, max_m);

    let mut s = BigRational::zero();
    for i in 0..=g - 1 {
        s += rat_int(&binomial(g - 1, i)) * &q[max_m - i];
    }
    let mut scale = rat_int(&BigInt::from_usize(n).unwrap().pow((g - 1) as u32));
    let minus_two = BigInt::from_i64(-2).unwrap().pow((g - 1) as u32);
    scale *= rat_int(&minus_two);
    let v = scale * s;
    if !v.is_integer() {
        return Err(Error::NonIntegral(v.to_string()));
    }
    let value = v.to_integer();
    if !value.is_positive() {
        return Err(Error::NonIntegral(format!(
            "nonpositive Verlinde number {value}"
        )));
    }
    Ok(value)
}

/// Power sums q_1..q_max of the roots of a monic polynomial given by its
/// coefficient list c_0..c_N (c_N = 1), via Newton's identities.
fn power_sums_of_monic(c: &[BigRational], degree: usize, max_m: usize) -> Vec<BigRational> {
    assert!(c[degree].is_one());
    let mut q = vec![BigRational::zero(); max_m + 1];
    for m in 1..=max_m {
        let mut acc = BigRational::zero();
        for i in 1..m.min(degree + 1) {
            acc += &c[degree - i] * &q[m - i];
        }
        if m <= degree {
            acc += rat_int(&BigInt::from_usize(m).unwrap()) * &c[degree - m];
        }
        q[m] = -acc;
    }
    q
}

/// dim S^n of a 2^g-dimensional space: C(2^g + n - 1, n).
pub fn sym_power_dim(g: usize, n: usize) -> BigInt {
    binomial((1 << g) + n - 1, n)
}

/// Count of independent invariant quartics on the moduli space: (3^g + 1)/2.
pub fn invariant_quartic_count(g: usize) -> Result<BigInt> {
    if g < 2 {
        return Err(Error::GenusOutOfRange {
            got: g,
            min: 2,
            max: usize::MAX,
        });
    }
    let v = (BigInt::from_usize(3).unwrap().pow(g as u32) + 1) / 2;
    Ok(v)
}

/// dim of the even part of the level-n theta space, n even: n^g/2 + 2^(g-1).
pub fn even_theta_dim(g: usize, n: usize) -> Result<BigInt> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "level {n} must be even and >= 2"
        )));
    }
    let v = BigInt::from_usize(n).unwrap().pow(g as u32) / 2 + (BigInt::from(1) << (g - 1) as u32);
    Ok(v)
}

/// The dimension block reported by the CLI for a given genus.
#[derive(Clone, Debug, serde::Serialize)]
pub struct DimensionReport {
    pub g: usize,
    #[serde(rename = "symCube")]
    pub sym_cube: String,
    #[serde(rename = "verlinde3")]
    pub verlinde3: String,
    #[serde(rename = "kInvCubics")]
    pub k_inv_cubics: usize,
    #[serde(rename = "invariantQuartics")]
    pub invariant_quartics: String,
    #[serde(rename = "evenTheta6")]
    pub even_theta6: String,
}

pub fn dimension_report(g: usize) -> Result<DimensionReport> {
    Ok(DimensionReport {
        g,
        sym_cube: sym_power_dim(g, 3).to_string(),
        verlinde3: verlinde_su2(g, 3)?.to_string(),
        k_inv_cubics: crate::invariants::k_invariant_cubic_count(g),
        invariant_quartics: invariant_quartic_count(g)?.to_string(),
        even_theta6: even_theta_dim(g, 6)?.to_string(),
    })
}
