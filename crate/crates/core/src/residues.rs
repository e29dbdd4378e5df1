//! Sets of n-th power residues with least witnesses.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{self, check_modulus, gcd, is_prime, pow_mod};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Residue sets are stored densely; moduli above this are rejected.
pub const DENSE_LIMIT: u64 = 1 << 24;

const NONE: u64 = u64::MAX;

/// A subset of `Z/m` of n-th powers, each member carrying the least base `x`
/// with `x^n = member (mod m)`.
///
/// When `m = p^j` is a prime power, members additionally record the least
/// base coprime to `p` (the unit witness). For other moduli unit
/// information is not tracked.
#[derive(Clone, PartialEq, Eq)]
pub struct ResidueSet {
    exponent: u32,
    modulus: u64,
    prime: Option<u64>,
    members: BitSet,
    witness: Vec<u64>,
    unit_witness: Vec<u64>,
}

impl ResidueSet {
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The prime `p` when the modulus is `p^j`, `j >= 1`.
    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn members(&self) -> &BitSet {
        &self.members
    }

    pub fn contains(&self, r: u64) -> bool {
        self.members.contains(r as usize)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.members.iter().map(|r| r as u64)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Least base attaining `r`.
    pub fn witness(&self, r: u64) -> Option<u64> {
        self.witness.get(r as usize).copied().filter(|&x| x != NONE)
    }

    /// Least base coprime to the modulus' prime attaining `r`.
    pub fn unit_witness(&self, r: u64) -> Option<u64> {
        self.unit_witness.get(r as usize).copied().filter(|&x| x != NONE)
    }

    /// Least base divisible by the modulus' prime attaining `r`. Without a
    /// tracked prime every witness counts as non-unit.
    pub fn nonunit_witness(&self, r: u64) -> Option<u64> {
        let x = self.witness(r)?;
        match self.prime {
            None => Some(x),
            // a unit's power is a unit, so r = 0 mod p is exactly the non-unit case
            Some(p) if r % p == 0 => Some(x),
            Some(_) => None,
        }
    }

    /// Whether some witness of `r` is a unit; `None` when unit information is
    /// not tracked for this modulus.
    pub fn has_unit_witness(&self, r: u64) -> Option<bool> {
        self.prime.map(|_| self.unit_witness(r).is_some())
    }
}

impl core::fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ResidueSet")
            .field("exponent", &self.exponent)
            .field("modulus", &self.modulus)
            .field("members", &self.members)
            .finish()
    }
}

fn prime_of_power(m: u64) -> Result<Option<u64>> {
    if m == 1 {
        return Ok(None);
    }
    Ok(arith::factorize(m)?.as_prime_power().map(|(p, _)| p))
}

fn check_dense(m: u64) -> Result<()> {
    check_modulus(m)?;
    if m > DENSE_LIMIT {
        return Err(Error::OutOfRange(m as u128));
    }
    Ok(())
}

/// `{ x^n mod m : 0 <= x < m }` with least witnesses.
pub fn power_residues(n: u32, m: u64) -> Result<ResidueSet> {
    if n == 0 {
        return Err(Error::Domain("exponent must be at least 1"));
    }
    check_dense(m)?;
    let prime = prime_of_power(m)?;
    let size = m as usize;
    let mut members = BitSet::new(size);
    let mut witness = vec![NONE; size];
    let mut unit_witness = if prime.is_some() { vec![NONE; size] } else { Vec::new() };
    for x in 0..m {
        let r = pow_mod(x, n as u64, m) as usize;
        if members.insert(r) {
            witness[r] = x;
        }
        if let Some(p) = prime {
            if x % p != 0 && unit_witness[r] == NONE {
                unit_witness[r] = x;
            }
        }
    }
    Ok(ResidueSet {
        exponent: n,
        modulus: m,
        prime,
        members,
        witness,
        unit_witness,
    })
}

/// `{ x^n mod p^j : gcd(x, p) = 1 }`; every member is unit-witnessed.
pub fn unit_power_residues(n: u32, p: u64, j: u32) -> Result<ResidueSet> {
    if n == 0 {
        return Err(Error::Domain("exponent must be at least 1"));
    }
    if !is_prime(p) {
        return Err(Error::Domain("unit residues need a prime base"));
    }
    if j == 0 {
        return Err(Error::Domain("prime power exponent must be at least 1"));
    }
    let m = arith::checked_pow(p, j)?;
    check_dense(m)?;
    let size = m as usize;
    let mut members = BitSet::new(size);
    let mut witness = vec![NONE; size];
    for x in (1..m).filter(|x| x % p != 0) {
        let r = pow_mod(x, n as u64, m) as usize;
        if members.insert(r) {
            witness[r] = x;
        }
    }
    Ok(ResidueSet {
        exponent: n,
        modulus: m,
        prime: Some(p),
        members,
        unit_witness: witness.clone(),
        witness,
    })
}

/// `gcd(n, p - 1)`: the n-th and d-th powers agree modulo an odd prime `p`.
pub fn exponent_reduction(n: u32, p: u64) -> Result<u32> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain("exponent reduction needs an odd prime"));
    }
    Ok(gcd(n as u64, p - 1) as u32)
}

/// `|A_d| = (p - 1)/d + 1` for `d | p - 1`.
pub fn residue_count(p: u64, d: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain("residue count needs an odd prime"));
    }
    if d == 0 || (p - 1) % d != 0 {
        return Err(Error::Domain("d must divide p - 1"));
    }
    Ok((p - 1) / d + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn members(n: u32, m: u64) -> Vec<u64> {
        power_residues(n, m).unwrap().to_vec()
    }

    #[test]
    fn listed_residue_sets() {
        assert_eq!(members(3, 7), [0, 1, 6]);
        assert_eq!(members(3, 9), [0, 1, 8]);
        assert_eq!(members(4, 5), [0, 1]);
        assert_eq!(members(4, 16), [0, 1]);
        assert_eq!(members(5, 25), [0, 1, 7, 18, 24]);
        assert_eq!(members(5, 11), [0, 1, 10]);
        assert_eq!(members(6, 13), [0, 1, 12]);
        assert_eq!(members(7, 49), [0, 1, 18, 19, 30, 31, 48]);
        assert_eq!(members(1, 10), (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn least_witnesses() {
        let cubes = power_residues(3, 9).unwrap();
        assert_eq!(cubes.witness(8), Some(2));
        assert_eq!(cubes.witness(0), Some(0));
        assert_eq!(cubes.unit_witness(0), None);
        assert_eq!(cubes.nonunit_witness(0), Some(0));
        assert_eq!(cubes.nonunit_witness(8), None);
        assert_eq!(cubes.has_unit_witness(1), Some(true));
        assert_eq!(cubes.witness(4), None);

        let mixed = power_residues(2, 15).unwrap();
        assert_eq!(mixed.prime(), None);
        assert_eq!(mixed.has_unit_witness(1), None);
    }

    #[test]
    fn zero_modulus_rejected() {
        assert_eq!(power_residues(3, 0).unwrap_err(), Error::ZeroModulus);
        assert!(power_residues(3, DENSE_LIMIT + 1).is_err());
    }

    #[test]
    fn modulus_one() {
        let r = power_residues(5, 1).unwrap();
        assert_eq!(r.to_vec(), [0]);
    }

    #[test]
    fn unit_residues() {
        // odd x have x^4 = 1 mod 16
        assert_eq!(unit_power_residues(4, 2, 4).unwrap().to_vec(), [1]);
        assert_eq!(unit_power_residues(3, 7, 1).unwrap().to_vec(), [1, 6]);
        // gcd(5, 6) = 1: fifth powers permute the units mod 7
        assert_eq!(unit_power_residues(5, 7, 1).unwrap().to_vec(), [1, 2, 3, 4, 5, 6]);
        let u = unit_power_residues(3, 7, 1).unwrap();
        assert!(u.iter().all(|r| u.has_unit_witness(r) == Some(true)));
        assert!(unit_power_residues(3, 9, 1).is_err());
    }

    #[test]
    fn reduction_and_counts() {
        assert_eq!(exponent_reduction(6, 13), Ok(6));
        assert_eq!(exponent_reduction(5, 7), Ok(1));
        assert_eq!(exponent_reduction(4, 13), Ok(4));
        assert_eq!(members(4, 13), members(exponent_reduction(4, 13).unwrap(), 13));
        assert_eq!(residue_count(13, 6), Ok(3));
        assert_eq!(residue_count(7, 3), Ok(3));
        assert_eq!(residue_count(11, 1), Ok(11));
        assert!(residue_count(13, 5).is_err());
    }
}
