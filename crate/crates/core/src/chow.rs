//! Exact intersection theory on the Jacobian and on symmetric products.
//!
//! `JacClass` models the truncated ring `Q[theta]/(theta^(g+1))` with
//! integral theta^g = g!. `SymClass` models the truncated ring
//! Q[s, eta]/(s eta - g eta^2, eta^(d+1), s^(min(d,g)+1)) used for the
//! symmetric-product class bookkeeping, with integrals eta^d = 1 and
//! s^d = d! C(g,d). Everything is exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::comb::{binomial, factorial, falling};
use crate::error::{Error, Result};

fn rat_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

fn rat_i64(n: i64) -> BigRational {
    BigRational::from_i64(n).expect("i64 embeds in Q")
}

/// Element of `Q[theta]/(theta^(g+1))`: coefficients of theta^0..theta^g.
#[derive(Clone, PartialEq, Debug)]
pub struct JacClass {
    g: usize,
    c: Vec<BigRational>,
}

impl JacClass {
    pub fn zero(g: usize) -> Self {
        JacClass {
            g,
            c: vec![BigRational::zero(); g + 1],
        }
    }

    pub fn one(g: usize) -> Self {
        let mut x = JacClass::zero(g);
        x.c[0] = BigRational::one();
        x
    }

    /// c * theta^k.
    pub fn theta_power(g: usize, k: usize, coeff: BigRational) -> Self {
        let mut x = JacClass::zero(g);
        if k <= g {
            x.c[k] = coeff;
        }
        x
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.c[k]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &JacClass) -> JacClass {
        assert_eq!(self.g, other.g, "genus mismatch");
        JacClass {
            g: self.g,
            c: self.c.iter().zip(&other.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &JacClass) -> JacClass {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, r: &BigRational) -> JacClass {
        JacClass {
            g: self.g,
            c: self.c.iter().map(|a| a * r).collect(),
        }
    }

    /// Product, truncated at theta^g.
    pub fn mul(&self, other: &JacClass) -> JacClass {
        assert_eq!(self.g, other.g, "genus mismatch");
        let mut out = JacClass::zero(self.g);
        for i in 0..=self.g {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=self.g - i {
                if other.c[j].is_zero() {
                    continue;
                }
                out.c[i + j] += &self.c[i] * &other.c[j];
            }
        }
        out
    }

    /// exp of a class with zero constant term (nilpotent, so a finite sum).
    pub fn exp(&self) -> Result<JacClass> {
        if !self.c[0].is_zero() {
            return Err(Error::InvalidArgument(
                "exp needs vanishing constant term".into(),
            ));
        }
        let mut out = JacClass::one(self.g);
        let mut pow = JacClass::one(self.g);
        for k in 1..=self.g {
            pow = pow.mul(self);
            out = out.add(&pow.scale(&rat_int(&factorial(k)).recip()));
        }
        Ok(out)
    }

    /// Multiplicative inverse; requires nonzero constant term.
    pub fn inverse(&self) -> Result<JacClass> {
        if self.c[0].is_zero() {
            return Err(Error::InvalidArgument(
                "inverse needs nonzero constant term".into(),
            ));
        }
        let c0 = self.c[0].clone();
        let mut inv = JacClass::zero(self.g);
        inv.c[0] = c0.recip();
        // Newton-free direct recurrence: (f * inv)_k = 0 for k >= 1
        for k in 1..=self.g {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += &self.c[j] * &inv.c[k - j];
            }
            inv.c[k] = -(acc / &c0);
        }
        Ok(inv)
    }

    /// Integral over the abelian variety: coefficient of theta^g times g!.
    pub fn integral(&self) -> BigRational {
        &self.c[self.g] * rat_int(&factorial(self.g))
    }
}

/// ch(Q_1) = (g+1 - 4 theta) e^(2 theta), truncated at theta^g.
pub fn jac_chern_character_q1(g: usize) -> Result<JacClass> {
    if g < 2 {
        return Err(Error::GenusOutOfRange {
            got: g,
            min: 2,
            max: usize::MAX,
        });
    }
    let linear = JacClass::theta_power(g, 0, rat_i64((g + 1) as i64)).add(&JacClass::theta_power(
        g,
        1,
        rat_i64(-4),
    ));
    let e2t = JacClass::theta_power(g, 1, rat_i64(2)).exp()?;
    Ok(linear.mul(&e2t))
}

/// Power sums of the Chern roots of Q_1: p_n = (g+1-2n)(2 theta)^n.
pub fn power_sums_q1(g: usize) -> Vec<JacClass> {
    (1..=g)
        .map(|n| {
            let coeff = rat_i64((g as i64 + 1 - 2 * n as i64) * (1i64 << n));
            JacClass::theta_power(g, n, coeff)
        })
        .collect()
}

/// Newton's recursion c_n = (1/n)(c_{n-1} p_1 - c_{n-2} p_2 + ... +
/// (-1)^(n-1) p_n), given p_1..p_g. Returns c_1..c_g.
pub fn newton_chern(p: &[JacClass]) -> Vec<JacClass> {
    let g = match p.first() {
        Some(x) => x.genus(),
        None => return Vec::new(),
    };
    let mut c: Vec<JacClass> = Vec::with_capacity(p.len());
    for n in 1..=p.len() {
        let mut acc = JacClass::zero(g);
        for i in 1..n {
            let term = c[n - i - 1].mul(&p[i - 1]);
            acc = if i % 2 == 1 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        let last = if n % 2 == 1 {
            p[n - 1].clone()
        } else {
            p[n - 1].scale(&-BigRational::one())
        };
        acc = acc.add(&last);
        c.push(acc.scale(&rat_i64(n as i64).recip()));
    }
    c
}

/// Inverse Newton: recovers power sums from Chern classes,
/// p_n = c_1 p_{n-1} - c_2 p_{n-2} + ... + (-1)^n n c_n.
pub fn newton_power_sums(c: &[JacClass]) -> Vec<JacClass> {
    let g = match c.first() {
        Some(x) => x.genus(),
        None => return Vec::new(),
    };
    let mut p: Vec<JacClass> = Vec::with_capacity(c.len());
    for n in 1..=c.len() {
        let mut acc = JacClass::zero(g);
        for i in 1..n {
            let term = c[i - 1].mul(&p[n - i - 1]);
            acc = if i % 2 == 1 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        let nc = c[n - 1].scale(&rat_i64(n as i64));
        acc = if n % 2 == 1 {
            acc.add(&nc)
        } else {
            acc.sub(&nc)
        };
        p.push(acc);
    }
    p
}

/// Top Chern number of Q_1 via the Newton recursion; exact integer.
pub fn top_chern_q1(g: usize) -> Result<BigInt> {
    if !(3..=12).contains(&g) {
        return Err(Error::GenusOutOfRange {
            got: g,
            min: 3,
            max: 12,
        });
    }
    let c = newton_chern(&power_sums_q1(g));
    let v = c[g - 1].integral();
    if !v.is_integer() {
        return Err(Error::NonIntegral(v.to_string()));
    }
    Ok(v.to_integer())
}

/// Independent route to the same integer: total Chern class as
/// exp(sum (-1)^(n-1) p_n / n), no Newton recursion involved.
pub fn top_chern_q1_via_exp(g: usize) -> Result<BigInt> {
    if !(3..=12).contains(&g) {
        return Err(Error::GenusOutOfRange {
            got: g,
            min: 3,
            max: 12,
        });
    }
    let mut s = JacClass::zero(g);
    for (n, p) in power_sums_q1(g).iter().enumerate() {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        s = s.add(&p.scale(&(rat_i64(sign) / rat_i64((n + 1) as i64))));
    }
    let total = s.exp()?;
    let v = total.integral();
    if !v.is_integer() {
        return Err(Error::NonIntegral(v.to_string()));
    }
    Ok(v.to_integer())
}

/// `g, c_g(Q_1)` rows for a genus range.
pub fn chern_table(gmin: usize, gmax: usize) -> Result<Vec<(usize, BigInt)>> {
    if gmin > gmax {
        return Err(Error::InvalidArgument("gmin > gmax".into()));
    }
    let rows = crate::par::par_map((gmin..=gmax).collect(), |g| top_chern_q1(g).map(|v| (g, v)));
    rows.into_iter().collect()
}

/// Checks s_g(N_1) = c_g(Q_1) through the dual exact sequence: with the
/// middle term trivial, c(N_1) c(Q_1) = 1 so s(N_1) = c(N_1)^(-1); the top
/// pieces are compared after two independent ring inversions.
pub fn segre_equals_chern(g: usize) -> Result<bool> {
    let c = newton_chern(&power_sums_q1(g));
    segre_check_from_chern(g, &c)
}

fn segre_check_from_chern(g: usize, c: &[JacClass]) -> Result<bool> {
    let mut total = JacClass::one(g);
    for cls in c {
        total = total.add(cls);
    }
    let c_n1 = total.inverse()?;
    let s_n1 = c_n1.inverse()?;
    Ok(s_n1.coeff(g) == total.coeff(g))
}

/// Degenerate variant with all power sums zero; trivially true and kept as a
/// cheap guard on the inversion path.
pub fn segre_equals_chern_degenerate(g: usize) -> Result<bool> {
    let zeros = vec![JacClass::zero(g); g];
    segre_check_from_chern(g, &zeros)
}

/// Element of the truncated symmetric-product ring: a polynomial in the
/// divisor classes s (sum of the sigma_i) and eta, stored in the normal form
/// with no mixed monomials. Mixed products reduce through s eta = g eta^2.
#[derive(Clone, PartialEq, Debug)]
pub struct SymClass {
    g: usize,
    d: usize,
    /// coefficients of s^0..s^min(d,g)
    s_pows: Vec<BigRational>,
    /// coefficients of eta^1..eta^d (index 0 unused)
    eta_pows: Vec<BigRational>,
}

impl SymClass {
    pub fn zero(g: usize, d: usize) -> Self {
        let smax = d.min(g);
        SymClass {
            g,
            d,
            s_pows: vec![BigRational::zero(); smax + 1],
            eta_pows: vec![BigRational::zero(); d + 1],
        }
    }

    pub fn one(g: usize, d: usize) -> Self {
        let mut x = SymClass::zero(g, d);
        x.s_pows[0] = BigRational::one();
        x
    }

    /// a * s^k.
    pub fn s_power(g: usize, d: usize, k: usize, coeff: BigRational) -> Self {
        let mut x = SymClass::zero(g, d);
        if k < x.s_pows.len() {
            if k == 0 {
                x.s_pows[0] = coeff;
            } else {
                x.s_pows[k] = coeff;
            }
        }
        x
    }

    /// a * eta^k (k >= 1).
    pub fn eta_power(g: usize, d: usize, k: usize, coeff: BigRational) -> Self {
        let mut x = SymClass::zero(g, d);
        if k >= 1 && k <= d {
            x.eta_pows[k] = coeff;
        }
        x
    }

    pub fn s_coeff(&self, k: usize) -> BigRational {
        self.s_pows
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eta_coeff(&self, k: usize) -> BigRational {
        if k == 0 {
            BigRational::zero()
        } else {
            self.eta_pows
                .get(k)
                .cloned()
                .unwrap_or_else(BigRational::zero)
        }
    }

    pub fn add(&self, other: &SymClass) -> SymClass {
        assert_eq!((self.g, self.d), (other.g, other.d), "ring mismatch");
        let mut out = self.clone();
        for k in 0..out.s_pows.len() {
            out.s_pows[k] += &other.s_pows[k];
        }
        for k in 1..=out.d {
            out.eta_pows[k] += &other.eta_pows[k];
        }
        out
    }

    pub fn sub(&self, other: &SymClass) -> SymClass {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, r: &BigRational) -> SymClass {
        let mut out = self.clone();
        for v in out.s_pows.iter_mut().chain(out.eta_pows.iter_mut()) {
            *v *= r;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.s_pows.iter().all(Zero::is_zero) && self.eta_pows.iter().all(Zero::is_zero)
    }

    /// Product in the quotient ring. Pure powers multiply as powers; a mixed
    /// product s^a eta^b (a, b >= 1) reduces to g^a eta^(a+b); everything
    /// beyond the truncation degrees is dropped.
    pub fn mul(&self, other: &SymClass) -> SymClass {
        assert_eq!((self.g, self.d), (other.g, other.d), "ring mismatch");
        let mut out = SymClass::zero(self.g, self.d);
        let smax = out.s_pows.len() - 1;
        let gpow = |a: usize| rat_int(&BigInt::from_usize(self.g).unwrap().pow(a as u32));
        // s^a * s^a'
        for a in 0..=smax {
            if self.s_pows[a].is_zero() {
                continue;
            }
            for b in 0..=smax {
                if other.s_pows[b].is_zero() {
                    continue;
                }
                if a + b <= smax {
                    out.s_pows[a + b] += &self.s_pows[a] * &other.s_pows[b];
                }
            }
        }
        // eta^a * eta^b
        for a in 1..=self.d {
            if self.eta_pows[a].is_zero() {
                continue;
            }
            for b in 1..=self.d {
                if other.eta_pows[b].is_zero() {
                    continue;
                }
                if a + b <= self.d {
                    out.eta_pows[a + b] += &self.eta_pows[a] * &other.eta_pows[b];
                }
            }
        }
        // cross terms, both orders
        let mut cross = |sc: &[BigRational], ec: &[BigRational]| {
            for a in 0..=smax {
                if sc[a].is_zero() {
                    continue;
                }
                for b in 1..=self.d {
                    if ec[b].is_zero() {
                        continue;
                    }
                    let coeff = &sc[a] * &ec[b];
                    if a == 0 {
                        out.eta_pows[b] += coeff;
                    } else if a + b <= self.d {
                        out.eta_pows[a + b] += coeff * gpow(a);
                    }
                }
            }
        };
        cross(&self.s_pows, &other.eta_pows);
        cross(&other.s_pows, &self.eta_pows);
        out
    }

    pub fn pow(&self, n: usize) -> SymClass {
        let mut acc = SymClass::one(self.g, self.d);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Integral over the symmetric product: reads the top coefficients only,
/// eta^d integrating to 1 and s^d to d! C(g,d).
pub fn sym_integrate(c: &SymClass) -> BigRational {
    let mut acc = c.eta_coeff(c.d);
    acc += c.s_coeff(c.d) * rat_int(&factorial(c.d)) * rat_int(&binomial(c.g, c.d));
    acc
}

fn check_gd(g: usize, d: usize) -> Result<()> {
    if d < 1 || d > g {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= d <= g, got d={d}, g={g}"
        )));
    }
    Ok(())
}

/// First Chern class of the diagonal divisor: 2(d+g-1) eta - 2s.
pub fn c1_diagonal(g: usize, d: usize) -> Result<SymClass> {
    check_gd(g, d)?;
    Ok(
        SymClass::eta_power(g, d, 1, rat_i64(2 * (d + g - 1) as i64)).add(&SymClass::s_power(
            g,
            d,
            1,
            rat_i64(-2),
        )),
    )
}

/// First Chern class of the ample tautological bundle: the difference
/// (2g-2+2d) eta - c1(diagonal), which must collapse to 2s exactly.
pub fn c1_lx(g: usize, d: usize) -> Result<SymClass> {
    check_gd(g, d)?;
    let sdl = SymClass::eta_power(g, d, 1, rat_i64((2 * g - 2 + 2 * d) as i64));
    let c1 = sdl.sub(&c1_diagonal(g, d)?);
    let expected = SymClass::s_power(g, d, 1, rat_i64(2));
    if c1 != expected {
        return Err(Error::ConsistencyCheck(
            "eta part of c1(L_x) failed to cancel".into(),
        ));
    }
    Ok(c1)
}

/// c1 of the tangent bundle, read off from the total Chern class
/// (1+eta)^(d-2g+1) prod_i (1+eta-sigma_i): the degree-1 part is
/// (d-2g+1) eta + g eta - s.
pub fn c1_tangent(g: usize, d: usize) -> Result<SymClass> {
    check_gd(g, d)?;
    let eta_coeff = (d as i64 - 2 * g as i64 + 1) + g as i64;
    Ok(
        SymClass::eta_power(g, d, 1, rat_i64(eta_coeff)).add(&SymClass::s_power(
            g,
            d,
            1,
            rat_i64(-1),
        )),
    )
}

/// Report of the ample-class self-intersection computed two ways.
#[derive(Clone, Debug)]
pub struct SelfIntersection {
    pub g: usize,
    pub d: usize,
    /// d-fold self-product of s - (g-d-1) eta, integrated in the ring.
    pub ring_route: BigInt,
    /// Closed form g!/(g-d)! + (d+1)^d - g^d.
    pub closed_form: BigInt,
}

/// Closed form g!/(g-d)! + (d+1)^d - g^d.
pub fn self_intersection_closed_form(g: usize, d: usize) -> BigInt {
    falling(g, d) + BigInt::from_usize(d + 1).unwrap().pow(d as u32)
        - BigInt::from_usize(g).unwrap().pow(d as u32)
}

/// Self-intersection number of c1(L_x K^-1) = s - (g-d-1) eta: raises it to
/// the d-th power in the ring and integrates, then asserts agreement with the
/// closed form.
pub fn ample_self_intersection(g: usize, d: usize) -> Result<SelfIntersection> {
    check_gd(g, d)?;
    let c1k = c1_tangent(g, d)?.scale(&-BigRational::one());
    let c1 = c1_lx(g, d)?.sub(&c1k);
    // sanity: the class is s - (g-d-1) eta
    debug_assert_eq!(c1.s_coeff(1), BigRational::one());
    debug_assert_eq!(c1.eta_coeff(1), rat_i64(-(g as i64 - d as i64 - 1)));
    let v = sym_integrate(&c1.pow(d));
    if !v.is_integer() {
        return Err(Error::NonIntegral(v.to_string()));
    }
    let ring_route = v.to_integer();
    let closed_form = self_intersection_closed_form(g, d);
    if ring_route != closed_form {
        return Err(Error::ConsistencyCheck(format!(
            "self-intersection routes disagree at g={g}, d={d}: ring {ring_route} vs closed {closed_form}"
        )));
    }
    Ok(SelfIntersection {
        g,
        d,
        ring_route,
        closed_form,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn rint(v: &BigRational) -> i64 {
        assert!(v.is_integer());
        let s = v.to_integer().to_string();
        s.parse().unwrap()
    }

    #[test]
    fn chern_character_expansion_g3() {
        // (4 - 4 theta) e^(2 theta) = 4 + 4 theta + 0 theta^2 - 8/3 theta^3
        let ch = jac_chern_character_q1(3).unwrap();
        assert_eq!(rint(ch.coeff(0)), 4);
        assert_eq!(rint(ch.coeff(1)), 4);
        assert!(ch.coeff(2).is_zero());
        assert_eq!(ch.coeff(3), &BigRational::new((-8).into(), 3.into()));
    }

    #[test]
    fn chern_character_rank_and_linear_term() {
        for g in 2..=8 {
            let ch = jac_chern_character_q1(g).unwrap();
            assert_eq!(rint(ch.coeff(0)), (g + 1) as i64);
            assert_eq!(rint(ch.coeff(1)), (2 * g - 2) as i64);
        }
    }

    #[test]
    fn chern_character_components_match_power_sums() {
        // ch_n = p_n / n!, with p_n = (g+1-2n)(2 theta)^n
        for g in [3usize, 5] {
            let ch = jac_chern_character_q1(g).unwrap();
            for (n, p) in power_sums_q1(g).iter().enumerate() {
                let n = n + 1;
                let expected = p.coeff(n) / rat_int(&factorial(n));
                assert_eq!(ch.coeff(n), &expected);
            }
        }
    }

    #[test]
    fn newton_recursion_g3_by_hand() {
        let c = newton_chern(&power_sums_q1(3));
        assert_eq!(rint(c[0].coeff(1)), 4);
        assert_eq!(rint(c[1].coeff(2)), 8);
        assert_eq!(c[2].coeff(3), &BigRational::new(16.into(), 3.into()));
    }

    #[test]
    fn newton_zero_power_sums_give_zero() {
        let zeros = vec![JacClass::zero(4); 4];
        for c in newton_chern(&zeros) {
            assert!(c.is_zero());
        }
    }

    #[test]
    fn newton_round_trip() {
        for g in 3..=8 {
            let p = power_sums_q1(g);
            let c = newton_chern(&p);
            let p_back = newton_power_sums(&c);
            assert_eq!(p, p_back);
        }
    }

    #[test]
    fn top_chern_table_matches_reference() {
        let expected: [(usize, i64); 6] = [
            (3, 32),
            (4, 384),
            (5, 4096),
            (6, 56320),
            (7, 872448),
            (8, 15368192),
        ];
        for (g, v) in expected {
            assert_eq!(top_chern_q1(g).unwrap(), BigInt::from_i64(v).unwrap());
        }
    }

    #[test]
    fn exp_log_route_agrees_with_recursion() {
        for g in 3..=8 {
            assert_eq!(top_chern_q1(g).unwrap(), top_chern_q1_via_exp(g).unwrap());
        }
    }

    #[test]
    fn segre_duality() {
        for g in 3..=8 {
            assert!(segre_equals_chern(g).unwrap());
        }
        assert!(segre_equals_chern_degenerate(5).unwrap());
    }

    #[test]
    fn jac_inverse_is_inverse() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        for _ in 0..20 {
            let g = rng.gen_range(2..7);
            let mut x = JacClass::one(g);
            for k in 1..=g {
                x.c[k] = BigRational::new(
                    rng.gen_range(-5i64..=5).into(),
                    rng.gen_range(1i64..=4).into(),
                );
            }
            let inv = x.inverse().unwrap();
            assert_eq!(x.mul(&inv), JacClass::one(g));
        }
    }

    #[test]
    fn exp_requires_nilpotent_input() {
        assert!(JacClass::one(3).exp().is_err());
        assert!(JacClass::zero(3).inverse().is_err());
    }

    #[test]
    fn c1_diagonal_values() {
        let c = c1_diagonal(3, 2).unwrap();
        assert_eq!(rint(&c.eta_coeff(1)), 8);
        assert_eq!(rint(&c.s_coeff(1)), -2);
        let c = c1_diagonal(1, 1).unwrap();
        assert_eq!(rint(&c.eta_coeff(1)), 2);
        assert_eq!(rint(&c.s_coeff(1)), -2);
    }

    #[test]
    fn c1_lx_is_2s_for_all_gd() {
        for g in 1..=8 {
            for d in 1..=g {
                let c = c1_lx(g, d).unwrap();
                assert_eq!(rint(&c.s_coeff(1)), 2);
                assert!(c.eta_coeff(1).is_zero());
            }
        }
    }

    #[test]
    fn sym_integrals() {
        // eta^d -> 1
        let g = 5;
        let d = 3;
        assert_eq!(
            sym_integrate(&SymClass::eta_power(g, d, d, BigRational::one())),
            BigRational::one()
        );
        // s^2 at g=3, d=2 -> 6
        assert_eq!(
            rint(&sym_integrate(&SymClass::s_power(
                3,
                2,
                2,
                BigRational::one()
            ))),
            6
        );
        // degree below d integrates to zero
        assert!(sym_integrate(&SymClass::eta_power(g, d, 1, BigRational::one())).is_zero());
        // (2s)^d / d! = 2^d C(g,d)
        for g in 2..=6 {
            for d in 1..=g {
                let c = SymClass::s_power(g, d, 1, rat_i64(2)).pow(d);
                let got = sym_integrate(&c) / rat_int(&factorial(d));
                assert_eq!(
                    got,
                    rat_int(&binomial(g, d)) * rat_int(&BigInt::from(2).pow(d as u32))
                );
            }
        }
    }

    #[test]
    fn sym_mul_associative_commutative_randomized() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        let random_class = |rng: &mut ChaCha20Rng, g: usize, d: usize| {
            let mut x = SymClass::zero(g, d);
            for k in 0..x.s_pows.len() {
                x.s_pows[k] = BigRational::new(
                    rng.gen_range(-4i64..=4).into(),
                    rng.gen_range(1i64..=3).into(),
                );
            }
            for k in 1..=d {
                x.eta_pows[k] = BigRational::new(
                    rng.gen_range(-4i64..=4).into(),
                    rng.gen_range(1i64..=3).into(),
                );
            }
            x
        };
        for _ in 0..50 {
            let g = rng.gen_range(2..6);
            let d = rng.gen_range(1..=g);
            let a = random_class(&mut rng, g, d);
            let b = random_class(&mut rng, g, d);
            let c = random_class(&mut rng, g, d);
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            // distributivity
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }
    }

    #[test]
    fn self_intersection_examples() {
        // g=3,d=2: both routes 6; g=4,d=2: 12 - 8 + 1 = 5; g=5,d=3: -1
        for (g, d, v) in [(3usize, 2usize, 6i64), (4, 2, 5), (5, 3, -1)] {
            let si = ample_self_intersection(g, d).unwrap();
            assert_eq!(si.ring_route, BigInt::from_i64(v).unwrap());
            assert_eq!(si.closed_form, BigInt::from_i64(v).unwrap());
        }
    }

    #[test]
    fn self_intersection_hand_expansion_g4_d2() {
        // (s - eta)^2 = s^2 - 2 s eta + eta^2 -> s^2 - 2 g eta^2 + eta^2,
        // integral 12 - 8 + 1
        let g = 4;
        let d = 2;
        let c1 = SymClass::s_power(g, d, 1, BigRational::one()).add(&SymClass::eta_power(
            g,
            d,
            1,
            rat_i64(-1),
        ));
        let sq = c1.pow(2);
        assert_eq!(rint(&sq.s_coeff(2)), 1);
        assert_eq!(rint(&sq.eta_coeff(2)), -7);
        assert_eq!(rint(&sym_integrate(&sq)), 5);
    }

    #[test]
    fn self_intersection_negativity_pattern() {
        for g in 5..=8 {
            for d in 1..=g {
                let si = ample_self_intersection(g, d).unwrap();
                let negative = si.closed_form.is_negative();
                let covered = d == 1 || d == 2 || d == g - 1 || d == g;
                assert_eq!(negative, !covered, "g={g} d={d}");
            }
        }
    }
}
