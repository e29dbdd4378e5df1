//! Lifting solutions of `sum x_i^n = k` from `p^j` to `p^(j+1)`.
//!
//! For `p` not dividing `n` a unit coordinate makes the partial derivative a
//! unit and the ordinary Hensel step applies. For `p^a || n` with `a >= 1`
//! the derivative vanishes mod `p`, but a solution modulo `p^j` with a unit
//! coordinate still lifts once `j >= a + 1` (odd `p`) or `j >= a + 2`
//! (`p = 2`): replace the unit coordinate `x` by `x + c p^(j-a)` where
//! `c = -alpha / (c0 x^(n-1)) mod p`, `c0 = n / p^a` and
//! `sum x_i^n - k = alpha p^j`.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{self, checked_pow, is_prime, mod_inverse, mul_mod, pow_mod, reduce};
use crate::error::{Error, Result};
use crate::residues::power_residues;
use crate::solver::{lifting_threshold, representation_search, DiagonalForm, Witness};
use crate::sumsets::iterated_sumset;

/// Evidence moduli are searched only up to this size.
const EVIDENCE_LIMIT: u64 = 1 << 13;

/// A solution of the form modulo `p^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LiftState {
    form: DiagonalForm,
    prime: u64,
    power: u32,
    coords: Vec<u64>,
    unit_index: Option<usize>,
}

impl LiftState {
    /// Validates the congruence and locates the first unit coordinate.
    pub fn new(form: DiagonalForm, prime: u64, power: u32, coords: Vec<u64>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Domain("lift state needs a prime"));
        }
        if power == 0 {
            return Err(Error::Domain("lift state power must be at least 1"));
        }
        if coords.len() != form.arity() {
            return Err(Error::Domain("coordinate count differs from the arity"));
        }
        let m = checked_pow(prime, power)?;
        let coords: Vec<u64> = coords.into_iter().map(|x| x % m).collect();
        if !form.is_root_mod(&coords, m) {
            return Err(Error::Domain("coordinates do not solve the form at this power"));
        }
        let unit_index = coords.iter().position(|&x| x % prime != 0);
        Ok(Self {
            form,
            prime,
            power,
            coords,
            unit_index,
        })
    }

    pub fn form(&self) -> &DiagonalForm {
        &self.form
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn unit_index(&self) -> Option<usize> {
        self.unit_index
    }

    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.power)
    }

    pub fn witness(&self) -> Witness {
        Witness::new(self.modulus(), self.coords.clone(), Some(self.prime))
    }

    /// Whether the coordinates solve the form over the integers.
    pub fn is_exact(&self) -> bool {
        let n = self.form.exponent();
        let total = self.coords.iter().try_fold(0i128, |acc, &x| {
            (x as i128).checked_pow(n).and_then(|v| acc.checked_add(v))
        });
        total == Some(self.form.target() as i128)
    }

    /// One lift to `p^(j+1)`, choosing the Hensel step or the constructive
    /// lift depending on whether `p` divides `n`. Exact solutions are kept.
    pub fn lift(&self) -> Result<Self> {
        if self.is_exact() {
            return self.at_power(self.power + 1, self.coords.clone());
        }
        if self.form.exponent() as u64 % self.prime == 0 {
            constructive_lift(self)
        } else {
            hensel_step(self)
        }
    }

    fn at_power(&self, power: u32, coords: Vec<u64>) -> Result<Self> {
        let m = checked_pow(self.prime, power)?;
        let coords: Vec<u64> = coords.into_iter().map(|x| x % m).collect();
        let unit_index = coords.iter().position(|&x| x % self.prime != 0);
        Ok(Self {
            form: self.form,
            prime: self.prime,
            power,
            coords,
            unit_index,
        })
    }

    /// Move the unit coordinate by `c p^shift` with `c` chosen to cancel the
    /// error term mod `p^(j+1)`; `c0` is `n / p^a` reduced mod `p`.
    fn adjust(&self, unit: usize, shift: u32, c0: u64) -> Result<Self> {
        let p = self.prime;
        let n = self.form.exponent() as u64;
        let next = checked_pow(p, self.power + 1)?;
        let current = checked_pow(p, self.power)?;
        let sum = self.form.power_sum_mod(&self.coords, next);
        let diff = (sum + next - reduce(self.form.target(), next)) % next;
        if diff % current != 0 {
            return Err(Error::Internal("lift state does not solve the form at its power"));
        }
        let alpha = diff / current;
        let x = self.coords[unit];
        let slope = mul_mod(c0 % p, pow_mod(x, n - 1, p), p);
        let inv = mod_inverse(slope, p).ok_or(Error::Internal("lift slope is not a unit"))?;
        let c = mul_mod((p - alpha % p) % p, inv, p);
        let step = checked_pow(p, shift)?;
        let mut coords = self.coords.clone();
        coords[unit] = ((x as u128 + c as u128 * step as u128) % next as u128) as u64;
        let lifted = self.at_power(self.power + 1, coords)?;
        if !lifted.form.is_root_mod(&lifted.coords, next) {
            return Err(Error::Internal("lifted coordinates fail the congruence"));
        }
        Ok(lifted)
    }
}

/// Hensel step for `p` not dividing `n`, moving the unit coordinate.
pub fn hensel_step(state: &LiftState) -> Result<LiftState> {
    let p = state.prime;
    let n = state.form.exponent() as u64;
    if n % p == 0 {
        return Err(Error::Inapplicable("p divides n: use the constructive lift"));
    }
    let unit = state
        .unit_index
        .ok_or(Error::Inapplicable("no coordinate is coprime to p"))?;
    state.adjust(unit, state.power, n % p)
}

/// The explicit lift for `p^a || n`, `a >= 1`.
///
/// For odd `n` and odd `p` a solution with every coordinate divisible by `p`
/// is first replaced by `(1, p^(a+1) - 1, 0, ..., 0)` and lifted back up.
pub fn constructive_lift(state: &LiftState) -> Result<LiftState> {
    let p = state.prime;
    let n = state.form.exponent();
    let a = arith::valuation(p, n as i128)?;
    if a == 0 {
        return Err(Error::Inapplicable("p does not divide n: use the Hensel step"));
    }
    let (threshold, _) = lifting_threshold(p, a)?;
    if state.power < threshold {
        return Err(Error::Domain("power is below the lifting threshold"));
    }
    let c0 = (n as u64 / p.pow(a)) % p;
    match state.unit_index {
        Some(unit) => state.adjust(unit, state.power - a, c0),
        None if n % 2 == 1 && p != 2 && state.form.arity() >= 2 => {
            let base = checked_pow(p, a + 1)?;
            let mut coords = vec![0u64; state.form.arity()];
            coords[0] = 1;
            coords[1] = base - 1;
            let mut repaired = LiftState::new(state.form, p, a + 1, coords)?;
            while repaired.power <= state.power {
                repaired = constructive_lift(&repaired)?;
            }
            Ok(repaired)
        }
        None => Err(Error::Inapplicable("no coordinate is coprime to p")),
    }
}

/// Which rule certified solvability modulo every power of a prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CriterionBranch {
    /// `k` is a sum of `l` integer n-th powers.
    ExactRepresentation,
    /// Odd `p | n`, odd `n`: any solution modulo `p^(a+1)`.
    OddPrimeOddExponent,
    /// Odd `p | n`, even `n`: a unit-coordinate solution modulo `p^(a+1)`.
    OddPrimeEvenExponent,
    /// `p = 2 | n`: an odd-coordinate solution modulo `2^(a+2)`.
    PrimeTwo,
    /// `p` does not divide `n`: a unit-coordinate solution modulo `p`.
    Hensel,
}

/// A modulus at which the target misses the relevant sumset.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LocalFailure {
    pub modulus: u64,
    pub residue: u64,
    /// Sorted sumset at `modulus`; restricted to unit-coordinate sums when
    /// `unit_restricted` is set.
    pub reachable: Vec<u64>,
    pub unit_restricted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriterionResult {
    pub prime: u64,
    /// `a` with `p^a || n`.
    pub multiplicity: u32,
    /// The modulus whose solutions decide every power of `p`.
    pub threshold: u64,
    pub liftable: bool,
    pub branch: Option<CriterionBranch>,
    /// How many times `k` was divided by `p^n` before a lifting solution
    /// appeared: a solution for `k / p^(n t)` scales by `p^t` to one for `k`.
    pub descent: u32,
    /// Starting point for lifting, solving the form with target
    /// `k / p^(n * descent)`.
    pub state: Option<LiftState>,
    pub failure: Option<LocalFailure>,
}

/// Decide solvability modulo every power of a prime `p | n`.
pub fn lift_criterion(n: u32, k: i64, p: u64, l: usize) -> Result<CriterionResult> {
    if !is_prime(p) || n as u64 % p != 0 {
        return Err(Error::Domain("lift criterion needs a prime dividing n; use the Hensel criterion"));
    }
    local_criterion(&DiagonalForm::new(n, l, k)?, p)
}

/// Decide solvability modulo every power of a prime `p` not dividing `n`.
pub fn hensel_criterion(form: &DiagonalForm, p: u64) -> Result<CriterionResult> {
    if !is_prime(p) || form.exponent() as u64 % p == 0 {
        return Err(Error::Domain("Hensel criterion needs a prime not dividing n"));
    }
    local_criterion(form, p)
}

/// Solvability of the form modulo `p^i` for every `i >= 1`, for any prime.
///
/// Rules, in order: `k = 0` or (even `n`) an exact representation; a
/// solution at the threshold modulus (with a unit coordinate for even `n`);
/// for even `n`, if `p^n | k`, the same question for `k / p^n`, since any
/// solution with all coordinates divisible by `p` is `p` times a solution for
/// `k / p^n`. Odd `n` never needs the unit condition because `-1` is an
/// n-th power.
pub fn local_criterion(form: &DiagonalForm, p: u64) -> Result<CriterionResult> {
    if !is_prime(p) {
        return Err(Error::Domain("local criterion needs a prime"));
    }
    let n = form.exponent();
    let a = arith::valuation(p, n as i128)?;
    let (power, threshold) = if a == 0 { (1, p) } else { lifting_threshold(p, a)? };
    let branch = match (a, p, n % 2) {
        (0, _, _) => CriterionBranch::Hensel,
        (_, 2, _) => CriterionBranch::PrimeTwo,
        (_, _, 1) => CriterionBranch::OddPrimeOddExponent,
        _ => CriterionBranch::OddPrimeEvenExponent,
    };
    let mut result = CriterionResult {
        prime: p,
        multiplicity: a,
        threshold,
        liftable: true,
        branch: None,
        descent: 0,
        state: None,
        failure: None,
    };

    let exact = if form.target() == 0 {
        Some(vec![0; form.arity()])
    } else if n % 2 == 0 {
        representation_search(form)?
    } else {
        None
    };
    if let Some(coords) = exact {
        result.branch = Some(CriterionBranch::ExactRepresentation);
        // start high enough that reducing mod p^j keeps the integer solution
        let top = coords.iter().copied().max().unwrap_or(0);
        let mut exact_power = power;
        while checked_pow(p, exact_power)? <= top {
            exact_power += 1;
        }
        result.state = Some(LiftState::new(*form, p, exact_power, coords)?);
        return Ok(result);
    }

    let residues = power_residues(n, threshold)?;
    let sums = iterated_sumset(&residues, form.arity())?;
    let descent_step = (p as i128).checked_pow(n);
    let mut target = form.target();
    loop {
        let current = form.with_target(target);
        let r = reduce(target, threshold);
        let coords = if n % 2 == 1 {
            sums.witness(r).map(|w| {
                if w.iter().all(|x| x % p == 0) && form.arity() >= 2 {
                    // r = 0 here; (1, -1, 0, ..., 0) has a unit coordinate
                    let mut fixed = vec![0; form.arity()];
                    fixed[0] = 1;
                    fixed[1] = threshold - 1;
                    fixed
                } else {
                    w
                }
            })
        } else {
            sums.unit_witness(r)
        };
        if let Some(coords) = coords {
            result.branch = Some(branch);
            result.state = Some(LiftState::new(current, p, power, coords)?);
            return Ok(result);
        }
        match descent_step {
            Some(q) if n % 2 == 0 && target != 0 && (target as i128) % q == 0 => {
                target = ((target as i128) / q) as i64;
                result.descent += 1;
            }
            _ => break,
        }
    }

    result.liftable = false;
    result.failure = Some(failure_evidence(form, p, power, result.descent, target, threshold, &sums)?);
    Ok(result)
}

/// Least power of `p` where the original target is not a sum of `l` n-th
/// powers at all, searched while the modulus stays small. Otherwise the
/// unit-restricted sumset at the threshold is reported for the descended
/// target.
fn failure_evidence(
    form: &DiagonalForm,
    p: u64,
    power: u32,
    descent: u32,
    descended_target: i64,
    threshold: u64,
    threshold_sums: &crate::sumsets::SumsetAccumulator,
) -> Result<LocalFailure> {
    let n = form.exponent();
    // beyond this exponent the target is provably missed
    let guaranteed = n * descent + power.max(n);
    let mut m = 1u64;
    for _ in 1..=guaranteed {
        m = match m.checked_mul(p) {
            Some(v) if v <= EVIDENCE_LIMIT => v,
            _ => break,
        };
        let sums = iterated_sumset(&power_residues(n, m)?, form.arity())?;
        let r = reduce(form.target(), m);
        if !sums.contains(r) {
            return Ok(LocalFailure {
                modulus: m,
                residue: r,
                reachable: sums.reachable().iter().map(|x| x as u64).collect(),
                unit_restricted: false,
            });
        }
    }
    let units = threshold_sums
        .unit_reachable()
        .ok_or(Error::Internal("threshold modulus is a prime power"))?;
    Ok(LocalFailure {
        modulus: threshold,
        residue: reduce(descended_target, threshold),
        reachable: units.iter().map(|x| x as u64).collect(),
        unit_restricted: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(n: u32, l: usize, k: i64) -> DiagonalForm {
        DiagonalForm::new(n, l, k).unwrap()
    }

    #[test]
    fn hensel_step_cubes_mod_7() {
        let s = LiftState::new(form(3, 2, 2), 7, 1, vec![1, 1]).unwrap();
        let t = hensel_step(&s).unwrap();
        assert_eq!(t.power(), 2);
        assert!(t.form().is_root_mod(t.coords(), 49));
        assert!(t.coords().iter().zip(s.coords()).all(|(a, b)| a % 7 == *b));
    }

    #[test]
    fn hensel_step_fifth_powers_mod_11() {
        let s = LiftState::new(form(5, 3, 3), 11, 1, vec![1, 1, 1]).unwrap();
        let t = hensel_step(&s).unwrap();
        assert!(t.form().is_root_mod(t.coords(), 121));
        // exact solution 1+1+1 = 3 is kept by lift()
        assert_eq!(s.lift().unwrap().coords(), &[1, 1, 1]);
    }

    #[test]
    fn hensel_step_rejects_dividing_prime() {
        let s = LiftState::new(form(3, 2, 2), 3, 2, vec![1, 1]).unwrap();
        assert!(matches!(hensel_step(&s), Err(Error::Inapplicable(_))));
        let z = LiftState::new(form(4, 2, 0), 5, 1, vec![0, 0]).unwrap();
        assert!(matches!(hensel_step(&z), Err(Error::Inapplicable(_))));
    }

    #[test]
    fn constructive_lift_cubes_at_three() {
        // 1 + 1 = 2 is exact, so perturb: 1 + 4^3 = 65 = 2 mod 9
        let s = LiftState::new(form(3, 2, 2), 3, 2, vec![4, 1]).unwrap();
        assert!(!s.is_exact());
        let t = constructive_lift(&s).unwrap();
        assert_eq!(t.power(), 3);
        assert!(t.form().is_root_mod(t.coords(), 27));
        assert_eq!(t.coords()[0] % 3, 1);
        assert_eq!(t.coords()[1], 1);
    }

    #[test]
    fn constructive_lift_fourth_powers_at_two() {
        let s = LiftState::new(form(4, 3, 2), 2, 4, vec![1, 1, 0]).unwrap();
        let t = constructive_lift(&s).unwrap();
        assert!(t.form().is_root_mod(t.coords(), 32));
        // k = 34 = 1 + 1 + 0 + 32: not exact with these coordinates
        let s = LiftState::new(form(4, 3, 34), 2, 4, vec![1, 1, 0]).unwrap();
        let mut state = s;
        for _ in 0..8 {
            state = constructive_lift(&state).unwrap();
            assert!(state.form().is_root_mod(state.coords(), state.modulus()));
        }
    }

    #[test]
    fn constructive_lift_below_threshold() {
        let s = LiftState::new(form(4, 3, 2), 2, 3, vec![1, 1, 0]).unwrap();
        assert!(matches!(constructive_lift(&s), Err(Error::Domain(_))));
    }

    #[test]
    fn constructive_lift_repairs_all_divisible() {
        // k = 27: (0, 0) solves mod 9 with both coordinates divisible by 3
        let s = LiftState::new(form(3, 2, 27), 3, 2, vec![0, 0]).unwrap();
        assert_eq!(s.unit_index(), None);
        let t = constructive_lift(&s).unwrap();
        assert_eq!(t.power(), 3);
        assert!(t.unit_index().is_some());
        assert!(t.form().is_root_mod(t.coords(), 27));
    }

    #[test]
    fn criterion_examples() {
        let r = lift_criterion(3, 4, 3, 2).unwrap();
        assert!(!r.liftable);
        let failure = r.failure.unwrap();
        assert_eq!(failure.modulus, 9);
        assert_eq!(failure.reachable, [0, 1, 2, 7, 8]);

        let r = lift_criterion(3, 2, 3, 2).unwrap();
        assert!(r.liftable);
        assert_eq!(r.branch, Some(CriterionBranch::OddPrimeOddExponent));

        let r = lift_criterion(4, 15, 2, 3).unwrap();
        assert!(!r.liftable);
        assert_eq!(r.threshold, 16);

        let r = lift_criterion(4, 2, 2, 3).unwrap();
        assert_eq!(r.branch, Some(CriterionBranch::ExactRepresentation));

        assert!(lift_criterion(4, 2, 3, 3).is_err());
    }

    #[test]
    fn criterion_descends_through_p_to_the_n() {
        // -208 = 16 * -13 and -13 = 3 mod 16 is a sum of three odd fourth powers
        let r = lift_criterion(4, -208, 2, 3).unwrap();
        assert!(r.liftable);
        assert_eq!(r.descent, 1);
        assert_eq!(r.branch, Some(CriterionBranch::PrimeTwo));
        assert_eq!(r.state.unwrap().form().target(), -13);
    }

    #[test]
    fn hensel_criterion_needs_unit_at_extra_prime() {
        // 305 = 0 mod 5 but only (0,0,0) reaches it; fails mod 25
        let r = hensel_criterion(&form(4, 3, 305), 5).unwrap();
        assert!(!r.liftable);
        assert_eq!(r.failure.unwrap().modulus, 25);
        assert!(hensel_criterion(&form(4, 3, 305), 2).is_err());
    }
}
