//! Vectors over F_2 of width `g`, used both as basis indices and as
//! character codes.
//!
//! A character chi_c of F_2^g is coded by a vector `c` through
//! chi_c(a) = (-1)^(c.a); this pins the isomorphism with the dual group
//! once and for all. Addition is bitwise XOR.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Maximum supported genus; indices must fit a machine word comfortably.
pub const MAX_GENUS: usize = 16;

/// An element of F_2^g stored as a bitmask of width `g`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitVec {
    bits: u32,
    g: u8,
}

impl BitVec {
    /// Builds a vector from a bitmask, checking `bits < 2^g`.
    pub fn new(bits: u32, g: usize) -> Result<Self> {
        if !(1..=MAX_GENUS).contains(&g) {
            return Err(Error::GenusOutOfRange {
                got: g,
                min: 1,
                max: MAX_GENUS,
            });
        }
        if bits >> g != 0 {
            return Err(Error::InvalidArgument(format!(
                "bitmask {bits} does not fit in {g} bits"
            )));
        }
        Ok(BitVec { bits, g: g as u8 })
    }

    /// The zero vector.
    pub fn zero(g: usize) -> Self {
        BitVec::new(0, g).expect("genus checked by callers")
    }

    /// The i-th standard basis vector.
    pub fn basis(i: usize, g: usize) -> Result<Self> {
        if i >= g {
            return Err(Error::InvalidArgument(format!(
                "basis index {i} >= g = {g}"
            )));
        }
        BitVec::new(1 << i, g)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn genus(&self) -> usize {
        self.g as usize
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    /// All 2^g vectors, in increasing bitmask order.
    pub fn all(g: usize) -> impl Iterator<Item = BitVec> {
        let g8 = g as u8;
        (0u32..1 << g).map(move |bits| BitVec { bits, g: g8 })
    }

    /// XOR sum, i.e. addition in F_2^g.
    pub fn add(&self, other: &BitVec) -> Result<BitVec> {
        self.check_genus(other)?;
        Ok(BitVec {
            bits: self.bits ^ other.bits,
            g: self.g,
        })
    }

    /// Dot product in F_2.
    pub fn dot(&self, other: &BitVec) -> Result<u32> {
        self.check_genus(other)?;
        Ok((self.bits & other.bits).count_ones() & 1)
    }

    pub fn check_genus(&self, other: &BitVec) -> Result<()> {
        if self.g != other.g {
            return Err(Error::GenusMismatch(self.genus(), other.genus()));
        }
        Ok(())
    }

    /// Position of the lowest set bit; `None` on the zero vector.
    pub fn lowest_bit(&self) -> Option<usize> {
        if self.bits == 0 {
            None
        } else {
            Some(self.bits.trailing_zeros() as usize)
        }
    }

    /// Deletes the coordinate at `pos`, shifting higher bits down.
    /// The result lives in F_2^(g-1).
    pub fn delete_bit(&self, pos: usize) -> BitVec {
        debug_assert!(pos < self.genus());
        let low = self.bits & ((1 << pos) - 1);
        let high = (self.bits >> (pos + 1)) << pos;
        BitVec {
            bits: low | high,
            g: self.g - 1,
        }
    }
}

/// Evaluates the character coded by `chi` at `a`: +1 if the bit overlap is
/// even, -1 otherwise.
pub fn char_eval(chi: &BitVec, a: &BitVec) -> Result<i32> {
    Ok(if chi.dot(a)? == 0 { 1 } else { -1 })
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVec({:0width$b})", self.bits, width = self.genus())
    }
}

impl std::fmt::Display for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: u32, g: usize) -> BitVec {
        BitVec::new(bits, g).unwrap()
    }

    #[test]
    fn xor_group_law() {
        let a = bv(0b101, 3);
        let b = bv(0b011, 3);
        assert_eq!(a.add(&b).unwrap(), bv(0b110, 3));
        assert_eq!(a.add(&a).unwrap(), BitVec::zero(3));
        assert_eq!(a.add(&BitVec::zero(3)).unwrap(), a);
    }

    #[test]
    fn char_eval_trivial_character() {
        for a in BitVec::all(4) {
            assert_eq!(char_eval(&BitVec::zero(4), &a).unwrap(), 1);
        }
    }

    #[test]
    fn char_eval_single_overlap() {
        // g=2, chi=(0,1) coded as bit 1, a=(1,1)
        assert_eq!(char_eval(&bv(0b10, 2), &bv(0b11, 2)).unwrap(), -1);
    }

    #[test]
    fn char_eval_even_overlap() {
        // g=3, chi=(1,1,0), a=(1,1,1): overlap popcount 2
        assert_eq!(char_eval(&bv(0b011, 3), &bv(0b111, 3)).unwrap(), 1);
    }

    #[test]
    fn characters_are_multiplicative() {
        for chi in BitVec::all(3) {
            for a in BitVec::all(3) {
                for b in BitVec::all(3) {
                    let lhs = char_eval(&chi, &a.add(&b).unwrap()).unwrap();
                    let rhs = char_eval(&chi, &a).unwrap() * char_eval(&chi, &b).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn genus_mismatch_rejected() {
        assert!(bv(1, 2).add(&bv(1, 3)).is_err());
        assert!(char_eval(&bv(1, 2), &bv(1, 3)).is_err());
    }

    #[test]
    fn oversized_bitmask_rejected() {
        assert!(BitVec::new(0b100, 2).is_err());
    }

    #[test]
    fn delete_bit_compresses() {
        let v = bv(0b1101, 4);
        assert_eq!(v.delete_bit(0), bv(0b110, 3));
        assert_eq!(v.delete_bit(2), bv(0b101, 3));
        assert_eq!(v.delete_bit(3), bv(0b101, 3));
    }
}
