//! The finite Heisenberg group of level 2 and its action on the canonical
//! basis {X_sigma}.
//!
//! Elements are triples (scalar, a, chi) with the law
//! (s,a,chi)(t,b,gamma) = (s t gamma(a), a+b, chi gamma) and the basis action
//! X_b -> s chi(a+b) X_{a+b}. Scalars are restricted to nonzero rationals:
//! every action in scope uses only +-1 character values times rational
//! multiples, so nothing is lost.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::{char_eval, BitVec};
use crate::error::{Error, Result};

/// A Heisenberg group element (scalar, translation part, character code).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeisElem {
    pub scalar: BigRational,
    pub a: BitVec,
    pub chi: BitVec,
}

impl HeisElem {
    pub fn new(scalar: BigRational, a: BitVec, chi: BitVec) -> Result<Self> {
        a.check_genus(&chi)?;
        if scalar.is_zero() {
            return Err(Error::InvalidArgument(
                "Heisenberg scalar must be nonzero".into(),
            ));
        }
        Ok(HeisElem { scalar, a, chi })
    }

    /// Element with scalar 1.
    pub fn unit(a: BitVec, chi: BitVec) -> Result<Self> {
        HeisElem::new(BigRational::one(), a, chi)
    }

    pub fn identity(g: usize) -> Self {
        HeisElem {
            scalar: BigRational::one(),
            a: BitVec::zero(g),
            chi: BitVec::zero(g),
        }
    }

    pub fn genus(&self) -> usize {
        self.a.genus()
    }

    /// Group law: (s,a,chi)(t,b,gamma) = (s t gamma(a), a+b, chi gamma).
    pub fn mul(&self, other: &HeisElem) -> Result<HeisElem> {
        self.a.check_genus(&other.a)?;
        let sign = char_eval(&other.chi, &self.a)?;
        let mut scalar = &self.scalar * &other.scalar;
        if sign < 0 {
            scalar = -scalar;
        }
        Ok(HeisElem {
            scalar,
            a: self.a.add(&other.a)?,
            chi: self.chi.add(&other.chi)?,
        })
    }

    /// Inverse: (s,a,chi)^-1 = (s^-1 chi(a), a, chi).
    pub fn inverse(&self) -> HeisElem {
        let sign = char_eval(&self.chi, &self.a).expect("same genus by construction");
        let mut scalar = self.scalar.recip();
        if sign < 0 {
            scalar = -scalar;
        }
        HeisElem {
            scalar,
            a: self.a,
            chi: self.chi,
        }
    }

    /// Action on the basis vector X_b: returns the scalar s chi(a+b) and the
    /// target index a+b.
    pub fn act_basis(&self, b: &BitVec) -> Result<(BigRational, BitVec)> {
        self.a.check_genus(b)?;
        let target = self.a.add(b)?;
        let sign = char_eval(&self.chi, &target)?;
        let mut scalar = self.scalar.clone();
        if sign < 0 {
            scalar = -scalar;
        }
        Ok((scalar, target))
    }

    /// True if the scalar is +1 or -1.
    pub fn has_unit_scalar(&self) -> bool {
        self.scalar.abs().is_one()
    }
}

/// The standard lift generators of `J[2]`: the translations (1, e_i, 1) and the
/// characters (1, 0, chi_{e_j}).
pub fn two_torsion_lift_generators(g: usize) -> Vec<HeisElem> {
    let mut gens = Vec::with_capacity(2 * g);
    for i in 0..g {
        let e = BitVec::basis(i, g).expect("i < g");
        gens.push(HeisElem::unit(e, BitVec::zero(g)).expect("valid"));
    }
    for i in 0..g {
        let e = BitVec::basis(i, g).expect("i < g");
        gens.push(HeisElem::unit(BitVec::zero(g), e).expect("valid"));
    }
    gens
}

/// Lift generators of the maximal level subgroup K (characters only).
pub fn level_subgroup_generators(g: usize) -> Vec<HeisElem> {
    (0..g)
        .map(|i| {
            let e = BitVec::basis(i, g).expect("i < g");
            HeisElem::unit(BitVec::zero(g), e).expect("valid")
        })
        .collect()
}

/// A 2-torsion point of the abelian variety, written in the product
/// coordinates fixed by the theta structure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TwoTorsionPoint {
    pub a: BitVec,
    pub chi: BitVec,
}

impl TwoTorsionPoint {
    pub fn new(a: BitVec, chi: BitVec) -> Result<Self> {
        a.check_genus(&chi)?;
        Ok(TwoTorsionPoint { a, chi })
    }

    pub fn zero(g: usize) -> Self {
        TwoTorsionPoint {
            a: BitVec::zero(g),
            chi: BitVec::zero(g),
        }
    }

    pub fn add(&self, other: &TwoTorsionPoint) -> Result<TwoTorsionPoint> {
        Ok(TwoTorsionPoint {
            a: self.a.add(&other.a)?,
            chi: self.chi.add(&other.chi)?,
        })
    }

    /// The canonical unit-scalar lift to the Heisenberg group.
    pub fn lift(&self) -> HeisElem {
        HeisElem::unit(self.a, self.chi).expect("same genus by construction")
    }
}

/// Weil pairing e(p,q) = chi_p(a_q) chi_q(a_p), equal to the scalar part of
/// the commutator of any lifts of p and q.
pub fn weil_pairing(p: &TwoTorsionPoint, q: &TwoTorsionPoint) -> Result<i32> {
    p.a.check_genus(&q.a)?;
    Ok(char_eval(&p.chi, &q.a)? * char_eval(&q.chi, &p.a)?)
}
