//! Solving `x_1^n + ... + x_l^n = k (mod m)` with witnesses.

use alloc::vec::Vec;

use crate::arith::{self, checked_pow, nth_root_floor, pow_mod, reduce, Factorization};
use crate::error::{Error, Result};
use crate::residues::power_residues;
use crate::sumsets::iterated_sumset;

/// The form `x_1^n + ... + x_l^n - k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiagonalForm {
    exponent: u32,
    arity: usize,
    target: i64,
}

impl DiagonalForm {
    pub fn new(exponent: u32, arity: usize, target: i64) -> Result<Self> {
        if exponent < 2 {
            return Err(Error::Domain("exponent must be at least 2"));
        }
        if arity < 1 {
            return Err(Error::Domain("arity must be at least 1"));
        }
        Ok(Self {
            exponent,
            arity,
            target,
        })
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    pub fn with_target(self, target: i64) -> Self {
        Self { target, ..self }
    }

    pub fn with_arity(self, arity: usize) -> Result<Self> {
        Self::new(self.exponent, arity, self.target)
    }

    /// `sum x_i^n mod m`.
    pub fn power_sum_mod(&self, coords: &[u64], m: u64) -> u64 {
        coords.iter().fold(0u64, |acc, &x| {
            ((acc as u128 + pow_mod(x, self.exponent as u64, m) as u128) % m as u128) as u64
        })
    }

    /// `sum x_i^n = k (mod m)`.
    pub fn is_root_mod(&self, coords: &[u64], m: u64) -> bool {
        m >= 1 && self.power_sum_mod(coords, m) == reduce(self.target, m)
    }
}

/// A tuple solving the form modulo `modulus`. At prime-power moduli `p^j`,
/// `unit_index` points at the first coordinate coprime to `p`.
///
/// Fields are declared in sorted order so serialized objects have sorted keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Witness {
    pub coords: Vec<u64>,
    pub modulus: u64,
    pub unit_index: Option<usize>,
}

impl Witness {
    /// Builds a witness, locating a unit coordinate when `prime` is given.
    pub fn new(modulus: u64, coords: Vec<u64>, prime: Option<u64>) -> Self {
        let unit_index = prime.and_then(|p| coords.iter().position(|&x| x % p != 0));
        Self {
            coords,
            modulus,
            unit_index,
        }
    }

    pub fn verify(&self, form: &DiagonalForm) -> bool {
        self.coords.len() == form.arity() && form.is_root_mod(&self.coords, self.modulus)
    }
}

/// A witness modulo `m`, or `None` when `k mod m` is not a sum of `l` n-th
/// powers modulo `m` (definitive).
pub fn solvable_mod(form: &DiagonalForm, m: u64) -> Result<Option<Witness>> {
    arith::check_modulus(m)?;
    let residues = power_residues(form.exponent(), m)?;
    let acc = iterated_sumset(&residues, form.arity())?;
    let target = reduce(form.target(), m);
    Ok(acc
        .witness(target)
        .map(|coords| Witness::new(m, coords, residues.prime())))
}

/// A witness modulo `p^j` with some coordinate coprime to `p`.
pub fn solvable_mod_with_unit(form: &DiagonalForm, p: u64, j: u32) -> Result<Option<Witness>> {
    if !arith::is_prime(p) {
        return Err(Error::Domain("unit-coordinate search needs a prime"));
    }
    let m = checked_pow(p, j)?;
    let residues = power_residues(form.exponent(), m)?;
    let acc = iterated_sumset(&residues, form.arity())?;
    let target = reduce(form.target(), m);
    Ok(acc
        .unit_witness(target)
        .map(|coords| Witness::new(m, coords, Some(p))))
}

/// The check at one prime of the exponent: modulus `p^(a+1)` for odd `p`,
/// `2^(a+2)` for `p = 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NiceEntry {
    pub prime: u64,
    pub multiplicity: u32,
    pub modulus: u64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NiceReport {
    pub entries: Vec<NiceEntry>,
}

impl NiceReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.witness.is_some())
    }
}

/// Modulus at which a unit-coordinate solution lifts to all powers of a
/// prime `p` with `p^a || n`.
pub fn lifting_threshold(p: u64, a: u32) -> Result<(u32, u64)> {
    let j = if p == 2 { a + 2 } else { a + 1 };
    Ok((j, checked_pow(p, j)?))
}

/// "Solvable nicely": for every prime `p^a || n`, a solution modulo the
/// lifting threshold with a coordinate coprime to `p`.
pub fn nicely_solvable(form: &DiagonalForm, n_factorization: &Factorization) -> Result<NiceReport> {
    if n_factorization.value() != form.exponent() as u64 {
        return Err(Error::Domain("factorization does not match the exponent"));
    }
    let mut entries = Vec::new();
    for &(p, a) in n_factorization.factors() {
        let (j, modulus) = lifting_threshold(p, a)?;
        entries.push(NiceEntry {
            prime: p,
            multiplicity: a,
            modulus,
            witness: solvable_mod_with_unit(form, p, j)?,
        });
    }
    Ok(NiceReport { entries })
}

/// Nonnegative integers `x_1 >= ... >= x_l` with `sum x_i^n = k` exactly, for
/// even `n`. Even powers are nonnegative, so the search is finite.
pub fn representation_search(form: &DiagonalForm) -> Result<Option<Vec<u64>>> {
    let n = form.exponent();
    if n % 2 == 1 {
        return Err(Error::Domain("exact representation search needs an even exponent"));
    }
    let Ok(target) = u64::try_from(form.target()) else {
        return Ok(None);
    };
    let mut coords = Vec::with_capacity(form.arity());
    let found = descend(target, form.arity(), u64::MAX, n, &mut coords);
    Ok(found.then(|| {
        coords.resize(form.arity(), 0);
        coords
    }))
}

fn descend(rest: u64, slots: usize, cap: u64, n: u32, coords: &mut Vec<u64>) -> bool {
    if rest == 0 {
        return true;
    }
    if slots == 0 {
        return false;
    }
    let hi = cap.min(nth_root_floor(rest, n));
    // the largest remaining coordinate carries at least rest/slots
    let share = rest.div_ceil(slots as u64);
    let mut lo = nth_root_floor(share, n);
    if (lo as u128).pow(n) < share as u128 {
        lo += 1;
    }
    let mut x = hi;
    while x >= lo && x >= 1 {
        coords.push(x);
        if descend(rest - x.pow(n), slots - 1, x, n, coords) {
            return true;
        }
        coords.pop();
        x -= 1;
    }
    false
}

/// Scale a witness for `k` modulo `m` into one for `p^(n t) k` modulo
/// `p^(n t) m` by multiplying every coordinate by `p^t`.
pub(crate) fn scale_witness(w: &Witness, p: u64, t: u32, n: u32) -> Result<Witness> {
    if t == 0 {
        return Ok(w.clone());
    }
    let factor = checked_pow(p, t)?;
    let lift = checked_pow(p, n.checked_mul(t).ok_or(Error::Overflow("descent exponent"))?)?;
    let modulus = w
        .modulus
        .checked_mul(lift)
        .filter(|&v| v <= arith::MAX_VALUE)
        .ok_or(Error::Overflow("descended modulus"))?;
    let coords = w
        .coords
        .iter()
        .map(|&x| ((x as u128 * factor as u128) % modulus as u128) as u64)
        .collect();
    Ok(Witness {
        coords,
        modulus,
        unit_index: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use alloc::vec;

    fn form(n: u32, l: usize, k: i64) -> DiagonalForm {
        DiagonalForm::new(n, l, k).unwrap()
    }

    #[test]
    fn form_validation() {
        assert!(DiagonalForm::new(1, 2, 0).is_err());
        assert!(DiagonalForm::new(3, 0, 0).is_err());
    }

    #[test]
    fn solvable_mod_examples() {
        assert_eq!(solvable_mod(&form(3, 2, 4), 9).unwrap(), None);
        let w = solvable_mod(&form(3, 2, 2), 63).unwrap().unwrap();
        assert_eq!(w.coords, [1, 1]);
        assert!(w.verify(&form(3, 2, 2)));
        let w = solvable_mod(&form(6, 6, 6), 13).unwrap().unwrap();
        assert_eq!(w.coords.len(), 6);
        assert!(w.verify(&form(6, 6, 6)));
        for k in -30..30 {
            assert!(solvable_mod(&form(5, 4, k), 25).unwrap().is_some(), "k={k}");
        }
        assert_eq!(solvable_mod(&form(3, 2, 1), 0), Err(Error::ZeroModulus));
    }

    #[test]
    fn negative_targets_reduce() {
        let w = solvable_mod(&form(3, 2, -1), 9).unwrap().unwrap();
        assert!(w.verify(&form(3, 2, -1)));
        assert_eq!(w.coords, [0, 2]);
    }

    #[test]
    fn nicely_examples() {
        let f4 = factorize(4).unwrap();
        let report = nicely_solvable(&form(4, 3, 2), &f4).unwrap();
        assert!(report.holds());
        assert_eq!(report.entries[0].modulus, 16);
        let w = report.entries[0].witness.as_ref().unwrap();
        assert!(w.coords.iter().any(|x| x % 2 == 1));
        assert!(w.verify(&form(4, 3, 2)));

        // (0,0,0) solves k = 0 mod 16 but has no odd coordinate; three
        // odd-based fourth powers give 1..=3 mod 16
        let report = nicely_solvable(&form(4, 3, 0), &f4).unwrap();
        assert!(!report.holds());

        let report = nicely_solvable(&form(3, 2, 2), &factorize(3).unwrap()).unwrap();
        assert!(report.entries.iter().all(|e| e.prime != 2));
        assert!(nicely_solvable(&form(3, 2, 2), &f4).is_err());
    }

    #[test]
    fn representation_examples() {
        assert_eq!(representation_search(&form(4, 3, 18)).unwrap(), Some(vec![2, 1, 1]));
        assert_eq!(representation_search(&form(4, 3, -5)).unwrap(), None);
        assert_eq!(representation_search(&form(2, 4, 7)).unwrap(), Some(vec![2, 1, 1, 1]));
        assert_eq!(representation_search(&form(4, 3, 0)).unwrap(), Some(vec![0, 0, 0]));
        // 7 needs four squares
        assert_eq!(representation_search(&form(2, 3, 7)).unwrap(), None);
        assert!(representation_search(&form(3, 3, 7)).is_err());
    }
}
