//! Sparse multivariate polynomials in the 2^g variables X_sigma.
//!
//! Coefficients are generic: exact rationals for the symbolic work, complex
//! doubles for the numeric reconstructions. Both instantiations share all of
//! the structural code. Monomials carry a fixed total order (degree, then
//! sorted variable indices, then exponents) so serialized polynomials are
//! byte-stable across runs.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::bits::BitVec;
use crate::error::{Error, Result};
use crate::heis::HeisElem;

/// Coefficient field for [`ThetaPoly`].
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + fmt::Debug
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: &BigRational) -> Self;

    fn from_usize_exact(n: usize) -> Self;
}

impl Coeff for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn from_usize_exact(n: usize) -> Self {
        BigRational::from_usize(n).expect("usize embeds in Q")
    }
}

impl Coeff for Complex64 {
    fn from_rational(r: &BigRational) -> Self {
        let num = r.numer().to_f64().expect("rational numerator fits f64");
        let den = r.denom().to_f64().expect("rational denominator fits f64");
        Complex64::new(num / den, 0.0)
    }

    fn from_usize_exact(n: usize) -> Self {
        Complex64::new(n as f64, 0.0)
    }
}

/// A monomial: sorted list of (variable index, positive exponent) pairs.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    vars: Vec<(u16, u8)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { vars: Vec::new() }
    }

    /// Builds a monomial from a list of variable indices (with repetition).
    pub fn from_indices(indices: &[u32]) -> Self {
        let mut sorted: Vec<u32> = indices.to_vec();
        sorted.sort_unstable();
        let mut vars: Vec<(u16, u8)> = Vec::new();
        for &v in &sorted {
            match vars.last_mut() {
                Some((last, e)) if *last == v as u16 => *e += 1,
                _ => vars.push((v as u16, 1)),
            }
        }
        Monomial { vars }
    }

    pub fn degree(&self) -> usize {
        self.vars.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn exponents(&self) -> &[(u16, u8)] {
        &self.vars
    }

    /// Variable indices with multiplicity, ascending.
    pub fn indices(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.degree());
        for &(v, e) in &self.vars {
            for _ in 0..e {
                out.push(v as u32);
            }
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut merged: BTreeMap<u16, u16> = BTreeMap::new();
        for &(v, e) in self.vars.iter().chain(other.vars.iter()) {
            *merged.entry(v).or_insert(0) += e as u16;
        }
        Monomial {
            vars: merged.into_iter().map(|(v, e)| (v, e as u8)).collect(),
        }
    }

    /// XOR sum of the variable indices with multiplicity; this is the
    /// character by which the level subgroup scales the monomial.
    pub fn index_sum(&self, g: usize) -> BitVec {
        let mut acc = 0u32;
        for &(v, e) in &self.vars {
            if e % 2 == 1 {
                acc ^= v as u32;
            }
        }
        BitVec::new(acc, g).expect("variable indices fit the genus")
    }

    /// Exponent of a given variable (0 if absent).
    pub fn exponent_of(&self, var: u32) -> u8 {
        self.vars
            .iter()
            .find(|&&(v, _)| v as u32 == var)
            .map_or(0, |&(_, e)| e)
    }

    /// Applies an injective variable relabeling; `None` if any variable is
    /// dropped by the map.
    fn map_vars(&self, f: impl Fn(u32) -> Option<u32>) -> Option<Monomial> {
        let mut pairs: Vec<(u16, u8)> = Vec::with_capacity(self.vars.len());
        for &(v, e) in &self.vars {
            let w = f(v as u32)?;
            pairs.push((w as u16, e));
        }
        pairs.sort_unstable();
        Some(Monomial { vars: pairs })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |m: &Monomial| {
            (
                m.degree(),
                m.vars.iter().map(|&(v, _)| v).collect::<Vec<_>>(),
                m.vars.iter().map(|&(_, e)| e).collect::<Vec<_>>(),
            )
        };
        key(self).cmp(&key(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in the variables X_sigma, sigma in F_2^g.
#[derive(Clone, PartialEq, Debug)]
pub struct ThetaPoly<C: Coeff> {
    g: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coeff> ThetaPoly<C> {
    pub fn zero(g: usize) -> Self {
        ThetaPoly {
            g,
            terms: BTreeMap::new(),
        }
    }

    /// The variable X_sigma as a polynomial.
    pub fn variable(sigma: &BitVec) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::from_indices(&[sigma.bits()]), C::one());
        ThetaPoly {
            g: sigma.genus(),
            terms,
        }
    }

    pub fn from_terms(g: usize, iter: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = ThetaPoly::zero(g);
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn num_vars(&self) -> usize {
        1 << self.g
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ThetaPoly {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return ThetaPoly::zero(self.g);
        }
        ThetaPoly {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_genus(other)?;
        let mut out = ThetaPoly::zero(self.g);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    /// Formal partial derivative with respect to X_sigma.
    pub fn partial_derivative(&self, sigma: &BitVec) -> Self {
        let var = sigma.bits();
        let mut out = ThetaPoly::zero(self.g);
        for (m, c) in &self.terms {
            let e = m.exponent_of(var);
            if e == 0 {
                continue;
            }
            let mut vars: Vec<(u16, u8)> = Vec::with_capacity(m.vars.len());
            for &(v, exp) in &m.vars {
                if v as u32 == var {
                    if exp > 1 {
                        vars.push((v, exp - 1));
                    }
                } else {
                    vars.push((v, exp));
                }
            }
            out.add_term(
                Monomial { vars },
                c.clone() * C::from_usize_exact(e as usize),
            );
        }
        out
    }

    /// Image of the polynomial under a Heisenberg element, extending the
    /// basis action X_b -> s chi(a+b) X_{a+b} multiplicatively.
    pub fn heis_act(&self, x: &HeisElem) -> Result<Self> {
        if x.genus() != self.g {
            return Err(Error::GenusMismatch(x.genus(), self.g));
        }
        let n_vars = self.num_vars() as u32;
        // per-variable scalar and target index
        let mut scalars = Vec::with_capacity(n_vars as usize);
        let mut targets = Vec::with_capacity(n_vars as usize);
        for v in 0..n_vars {
            let (s, t) = x.act_basis(&BitVec::new(v, self.g)?)?;
            scalars.push(s);
            targets.push(t.bits());
        }
        let mut out = ThetaPoly::zero(self.g);
        for (m, c) in &self.terms {
            let mut coeff_rat = BigRational::one();
            for &(v, e) in &m.vars {
                for _ in 0..e {
                    coeff_rat *= &scalars[v as usize];
                }
            }
            let target = m
                .map_vars(|v| Some(targets[v as usize]))
                .expect("translation is total");
            out.add_term(target, c.clone() * C::from_rational(&coeff_rat));
        }
        Ok(out)
    }

    /// Evaluates the polynomial at a full coordinate vector (length 2^g).
    pub fn eval(&self, coords: &[C]) -> C
    where
        C: std::ops::Mul<Output = C>,
    {
        debug_assert_eq!(coords.len(), self.num_vars());
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in &m.vars {
                for _ in 0..e {
                    t = t * coords[v as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    fn check_genus(&self, other: &Self) -> Result<()> {
        if self.g != other.g {
            return Err(Error::GenusMismatch(self.g, other.g));
        }
        Ok(())
    }
}

impl ThetaPoly<BigRational> {
    /// Reinterprets an exact polynomial with complex coefficients.
    pub fn to_complex(&self) -> ThetaPoly<Complex64> {
        ThetaPoly {
            g: self.g,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), Complex64::from_rational(c)))
                .collect(),
        }
    }
}

/// Canonical text form: terms in monomial order, coefficients as `p/q`,
/// variables as `X[bitmask]` with caret exponents.
impl fmt::Display for ThetaPoly<BigRational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            write!(f, "{}/{}", a.numer(), a.denom())?;
            for &(v, e) in &m.vars {
                if e == 1 {
                    write!(f, " X[{v}]")?;
                } else {
                    write!(f, " X[{v}]^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// All monomials of total degree `n` in the 2^g variables, in canonical order.
pub fn monomials_of_degree(g: usize, n: usize) -> Vec<Monomial> {
    let n_vars = 1u32 << g;
    let mut out = Vec::new();
    let mut stack: Vec<u32> = Vec::with_capacity(n);
    fn rec(out: &mut Vec<Monomial>, stack: &mut Vec<u32>, from: u32, left: usize, n_vars: u32) {
        if left == 0 {
            out.push(Monomial::from_indices(stack));
            return;
        }
        for v in from..n_vars {
            stack.push(v);
            rec(out, stack, v, left - 1, n_vars);
            stack.pop();
        }
    }
    rec(&mut out, &mut stack, 0, n, n_vars);
    out.sort();
    out
}

/// Exact basis of the joint fixed space of the generators acting on degree-n
/// forms.
///
/// Each generator sends a monomial to +- another monomial, so the fixed space
/// decomposes along orbits: an orbit contributes its signed sum when the signs
/// close up consistently and nothing otherwise. Cost is linear in the number
/// of monomials. An empty generator list returns the full monomial basis.
pub fn invariant_subspace(
    generators: &[HeisElem],
    degree: usize,
    g: usize,
) -> Result<Vec<ThetaPoly<BigRational>>> {
    let monomials = monomials_of_degree(g, degree);
    if generators.is_empty() {
        return Ok(monomials
            .into_iter()
            .map(|m| ThetaPoly::from_terms(g, [(m, BigRational::one())]))
            .collect());
    }
    for x in generators {
        if x.genus() != g {
            return Err(Error::GenusMismatch(x.genus(), g));
        }
    }
    let index: BTreeMap<&Monomial, usize> = monomials.iter().zip(0..).collect();

    // images[k][i] = (sign, target index) of generator k applied to monomial i
    let mut images: Vec<Vec<(i8, usize)>> = Vec::with_capacity(generators.len());
    for x in generators {
        let mut scalars = Vec::with_capacity(1 << g);
        let mut targets = Vec::with_capacity(1 << g);
        for v in 0..1u32 << g {
            let (s, t) = x.act_basis(&BitVec::new(v, g)?)?;
            scalars.push(s);
            targets.push(t.bits());
        }
        let mut row = Vec::with_capacity(monomials.len());
        for m in &monomials {
            let mut sc = BigRational::one();
            for &(v, e) in m.exponents() {
                for _ in 0..e {
                    sc *= &scalars[v as usize];
                }
            }
            let sign = if sc.is_one() {
                1i8
            } else if (-sc.clone()).is_one() {
                -1i8
            } else {
                return Err(Error::InvalidArgument(
                    "generator does not act by +-1 on monomials of this degree".into(),
                ));
            };
            let target = m
                .map_vars(|v| Some(targets[v as usize]))
                .expect("translation is total");
            row.push((sign, index[&target]));
        }
        images.push(row);
    }

    // signed orbit analysis
    let n = monomials.len();
    let mut seen = vec![false; n];
    let mut sign_rel: Vec<i8> = vec![0; n];
    let mut basis = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut orbit = vec![root];
        let mut stack = vec![root];
        seen[root] = true;
        sign_rel[root] = 1;
        let mut consistent = true;
        while let Some(i) = stack.pop() {
            for row in &images {
                let (s, j) = row[i];
                let implied = s * sign_rel[i];
                if seen[j] {
                    if sign_rel[j] != implied {
                        consistent = false;
                    }
                } else {
                    seen[j] = true;
                    sign_rel[j] = implied;
                    orbit.push(j);
                    stack.push(j);
                }
            }
        }
        if consistent {
            let p = ThetaPoly::from_terms(
                g,
                orbit.iter().map(|&i| {
                    let c = BigRational::from_i64(sign_rel[i] as i64).expect("small int");
                    (monomials[i].clone(), c)
                }),
            );
            basis.push(p);
        }
    }
    Ok(basis)
}
