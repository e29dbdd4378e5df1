//! Brute-force verification: for every `m` up to a bound, is
//! `x_1^n + ... + x_l^n = k (mod m)` solvable?
//!
//! Each modulus is enumerated directly, without CRT or lifting, so the
//! oracle can catch mistakes in either. Powers come from repeated
//! multiplication and sumsets from cyclic bit rotations. Any failure is
//! confirmed by a second enumeration over plain boolean tables before it is
//! reported.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::{BitSet, Translates};
use crate::characterize::{decide, Certificate, Decision};
use crate::error::{Error, Result};
use crate::solver::DiagonalForm;

/// Default work budget, in 64-bit word operations.
pub const DEFAULT_BUDGET: u64 = 1 << 36;

/// CRT consistency is asserted for moduli up to this size.
const CRT_CHECK_LIMIT: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "outcome", rename_all = "snake_case"))]
pub enum OracleOutcome {
    /// Solvable modulo every `m <= bound`.
    Pass,
    /// Least unsolvable modulus, confirmed twice.
    Fail { modulus: u64, residue: u64 },
    /// Budget ran out; every `m <= verified_up_to` is solvable.
    Partial { verified_up_to: u64 },
}

fn power_by_multiplication(x: u64, n: u32, m: u64) -> u64 {
    let mut acc = 1 % m;
    for _ in 0..n {
        acc = ((acc as u128 * x as u128) % m as u128) as u64;
    }
    acc
}

/// `{ x^n mod m }` by stepping a forward-difference table of `x^n`: each
/// step is `n` modular additions. The table starts from `0^n, ..., n^n`.
fn power_set(n: u32, m: u64) -> BitSet {
    let n = n as usize;
    let mut diffs: Vec<u64> = (0..=n as u64).map(|x| power_by_multiplication(x, n as u32, m)).collect();
    for order in 1..=n {
        for i in (order..=n).rev() {
            diffs[i] = (diffs[i] + m - diffs[i - 1]) % m;
        }
    }
    // diffs[j] is now the j-th difference at 0
    let mut set = BitSet::new(m as usize);
    for _ in 0..m {
        set.insert(diffs[0] as usize);
        for j in 0..n {
            let v = diffs[j] + diffs[j + 1];
            diffs[j] = if v >= m { v - m } else { v };
        }
    }
    set
}

/// `arity`-fold sums of `powers` modulo its universe, with the work spent.
fn fold_sumset(powers: &BitSet, arity: usize) -> (BitSet, u64) {
    let size = powers.universe();
    let words = size.div_ceil(64) as u64;
    let mut work = words;
    let mut current = powers.clone();
    for _ in 1..arity {
        if current.is_full() {
            break;
        }
        // cur + A is a union of translates of whichever set is larger
        let (spread, by) = if current.len() >= powers.len() {
            (&current, powers)
        } else {
            (powers, &current)
        };
        let mut next = BitSet::new(size);
        // pre-shifted copies pay off once there are many translates
        let translates = (by.len() >= 128).then(|| {
            work += 128 * words;
            Translates::new(spread)
        });
        for (i, shift) in by.iter().enumerate() {
            match &translates {
                Some(t) => t.or_into(&mut next, shift),
                None => next.or_translate(spread, shift),
            }
            work += words;
            if i % 32 == 31 && next.is_full() {
                break;
            }
        }
        current = next;
    }
    (current, work)
}

/// `l`-fold sums of n-th powers modulo `m`, with the work spent.
fn reachable_counted(n: u32, arity: usize, m: u64) -> (BitSet, u64) {
    let (set, work) = fold_sumset(&power_set(n, m), arity);
    (set, work + m * n as u64 / 64)
}

/// Whether `r` is a sum of `arity` n-th powers mod `m`, meeting in the
/// middle: some `r - y` with `y` an `h`-fold sum must be an
/// `(arity - h)`-fold sum, `h = arity / 2`.
fn reaches_counted(n: u32, arity: usize, m: u64, r: u64) -> (bool, u64) {
    let powers = power_set(n, m);
    let half = arity / 2;
    let (big, mut work) = fold_sumset(&powers, arity - half);
    work += m * n as u64 / 64;
    if half == 0 {
        return (big.contains(r as usize), work);
    }
    let small = if half == arity - half {
        big.clone()
    } else {
        let (set, w) = fold_sumset(&powers, half);
        work += w;
        set
    };
    work += small.len() as u64 / 64;
    let hit = small.iter().any(|y| big.contains(((r + m - y as u64) % m) as usize));
    (hit, work)
}

/// Residues mod `m` that are sums of `arity` n-th powers.
pub fn reachable_mod(n: u32, arity: usize, m: u64) -> Result<BitSet> {
    check_args(n, arity, m)?;
    Ok(reachable_counted(n, arity, m).0)
}

fn check_args(n: u32, arity: usize, m: u64) -> Result<()> {
    if n == 0 || arity == 0 {
        return Err(Error::Domain("exponent and arity must be at least 1"));
    }
    if m == 0 {
        return Err(Error::ZeroModulus);
    }
    if m > crate::residues::DENSE_LIMIT {
        return Err(Error::OutOfRange(m as u128));
    }
    Ok(())
}

/// Second, independent check that `k` is not a sum of `arity` n-th powers
/// mod `m`: a layered table over distinct power values.
pub fn confirm_unsolvable(n: u32, arity: usize, k: i64, m: u64) -> Result<bool> {
    check_args(n, arity, m)?;
    let size = m as usize;
    let mut is_power = vec![false; size];
    for x in 0..m {
        is_power[crate::arith::pow_mod(x, n as u64, m) as usize] = true;
    }
    let values: Vec<usize> = (0..size).filter(|&r| is_power[r]).collect();
    let mut layer = vec![false; size];
    layer[0] = true;
    for _ in 0..arity {
        let mut next = vec![false; size];
        for r in (0..size).filter(|&r| layer[r]) {
            for &v in &values {
                next[(r + v) % size] = true;
            }
        }
        layer = next;
    }
    let target = k.rem_euclid(m as i64) as usize;
    Ok(!layer[target])
}

/// `reach_m(r)` iff `reach_a(r mod a)` and `reach_b(r mod b)` for one
/// coprime split `m = a b`.
fn crt_consistent(sets: &[BitSet], m: u64) -> bool {
    let Some((a, b)) = coprime_split(m) else {
        return true;
    };
    let (sa, sb, sm) = (&sets[a as usize - 1], &sets[b as usize - 1], &sets[m as usize - 1]);
    (0..m as usize).all(|r| sm.contains(r) == (sa.contains(r % a as usize) && sb.contains(r % b as usize)))
}

fn coprime_split(m: u64) -> Option<(u64, u64)> {
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut q = 1;
            while m % (q * p) == 0 {
                q *= p;
            }
            return (q != m).then_some((q, m / q));
        }
        p += 1;
    }
    None
}

/// Reachable sets for every `m <= bound`, reusable across targets.
#[derive(Debug, Clone)]
pub struct ReachabilityTable {
    n: u32,
    arity: usize,
    sets: Vec<BitSet>,
}

impl ReachabilityTable {
    pub fn build(n: u32, arity: usize, bound: u64) -> Result<Self> {
        check_args(n, arity, bound.max(1))?;
        let sets = (1..=bound).map(|m| reachable_counted(n, arity, m).0).collect();
        Self::from_sets(n, arity, sets)
    }

    /// Assemble from precomputed sets; `sets[i]` must come from
    /// [`reachable_mod`] with modulus `i + 1`.
    pub fn from_sets(n: u32, arity: usize, sets: Vec<BitSet>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Domain("bound must be at least 1"));
        }
        if sets.iter().enumerate().any(|(i, s)| s.universe() != i + 1) {
            return Err(Error::Domain("reachable sets must cover moduli 1..=bound in order"));
        }
        let limit = (sets.len() as u64).min(CRT_CHECK_LIMIT);
        if !(2..=limit).all(|m| crt_consistent(&sets, m)) {
            return Err(Error::Internal("oracle sumsets are not CRT-consistent"));
        }
        Ok(Self { n, arity, sets })
    }

    pub fn bound(&self) -> u64 {
        self.sets.len() as u64
    }

    pub fn check(&self, k: i64) -> Result<OracleOutcome> {
        for (i, set) in self.sets.iter().enumerate() {
            let m = i as u64 + 1;
            let r = k.rem_euclid(m as i64) as u64;
            if !set.contains(r as usize) {
                if !confirm_unsolvable(self.n, self.arity, k, m)? {
                    return Err(Error::Internal("oracle enumerations disagree"));
                }
                return Ok(OracleOutcome::Fail { modulus: m, residue: r });
            }
        }
        Ok(OracleOutcome::Pass)
    }
}

pub fn exhaustive_check(form: &DiagonalForm, bound: u64) -> Result<OracleOutcome> {
    exhaustive_check_with_budget(form, bound, DEFAULT_BUDGET)
}

/// Least `m <= bound` without a root, stopping early once `budget` word
/// operations are spent.
pub fn exhaustive_check_with_budget(form: &DiagonalForm, bound: u64, budget: u64) -> Result<OracleOutcome> {
    if bound == 0 {
        return Err(Error::Domain("bound must be at least 1"));
    }
    check_args(form.exponent(), form.arity(), bound)?;
    let (n, l, k) = (form.exponent(), form.arity(), form.target());
    let mut kept: Vec<BitSet> = Vec::new();
    let mut spent = 0u64;
    for m in 1..=bound {
        if spent > budget {
            return Ok(OracleOutcome::Partial { verified_up_to: m - 1 });
        }
        let r = k.rem_euclid(m as i64) as u64;
        let missed = if m <= CRT_CHECK_LIMIT {
            let (set, work) = reachable_counted(n, l, m);
            spent += work;
            let missed = !set.contains(r as usize);
            kept.push(set);
            if !crt_consistent(&kept, m) {
                return Err(Error::Internal("oracle sumsets are not CRT-consistent"));
            }
            missed
        } else {
            let (hit, work) = reaches_counted(n, l, m, r);
            spent += work;
            !hit
        };
        if missed {
            if !confirm_unsolvable(n, l, k, m)? {
                return Err(Error::Internal("oracle enumerations disagree"));
            }
            return Ok(OracleOutcome::Fail { modulus: m, residue: r });
        }
    }
    Ok(OracleOutcome::Pass)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AgreementReport {
    pub n: u32,
    pub l: usize,
    pub k: i64,
    pub bound: u64,
    pub agree: bool,
    pub detail: String,
}

fn is_power_of(m: u64, p: u64) -> bool {
    let mut v = m;
    while v > 1 && v % p == 0 {
        v /= p;
    }
    v == 1 && m > 1
}

/// Whether a decision and an oracle outcome at `bound` are consistent, with
/// an explanation. A negative decision whose least failing modulus lies
/// beyond the bound agrees with a passing oracle.
pub fn agreement(decision: &Decision, outcome: &OracleOutcome, bound: u64) -> (bool, String) {
    let failing = decision.failing_modulus();
    let failure_primes: Vec<u64> = decision
        .failures()
        .filter_map(|c| match c {
            Certificate::Failure { prime, .. } => Some(*prime),
            Certificate::Witness { .. } => None,
        })
        .collect();
    let (agree, summary) = match (decision.intersective, *outcome) {
        (true, OracleOutcome::Pass) => (true, String::from("both solvable")),
        (true, OracleOutcome::Partial { verified_up_to }) => {
            (true, format!("solvable; oracle verified m <= {verified_up_to}"))
        }
        (true, OracleOutcome::Fail { modulus, .. }) => {
            (false, format!("decided intersective but oracle fails at {modulus}"))
        }
        (false, OracleOutcome::Fail { modulus, .. }) => match failing {
            Some(f) => (f == modulus, format!("failing modulus {f}, oracle {modulus}")),
            None => (
                failure_primes.iter().any(|&p| is_power_of(modulus, p)),
                format!("failing modulus beyond evidence range, oracle {modulus}"),
            ),
        },
        (false, OracleOutcome::Pass) => match failing {
            Some(f) => (f > bound, format!("failing modulus {f}, oracle passes up to {bound}")),
            None => (true, String::from("failing modulus beyond evidence range")),
        },
        (false, OracleOutcome::Partial { verified_up_to }) => (
            failing.is_none_or(|f| f > verified_up_to),
            format!("oracle verified m <= {verified_up_to}"),
        ),
    };
    if agree {
        (true, summary)
    } else {
        (false, format!("{summary}; decision: {decision:?}; oracle: {outcome:?}"))
    }
}

/// Run [`decide`] and [`exhaustive_check`] on one form.
pub fn compare(form: &DiagonalForm, bound: u64) -> Result<AgreementReport> {
    let decision = decide(form.exponent(), form.target(), Some(form.arity()))?;
    let outcome = exhaustive_check(form, bound)?;
    let (agree, detail) = agreement(&decision, &outcome, bound);
    Ok(AgreementReport {
        n: form.exponent(),
        l: form.arity(),
        k: form.target(),
        bound,
        agree,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(n: u32, l: usize, k: i64) -> DiagonalForm {
        DiagonalForm::new(n, l, k).unwrap()
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(
            exhaustive_check(&form(3, 2, 4), 100).unwrap(),
            OracleOutcome::Fail { modulus: 7, residue: 4 }
        );
        assert_eq!(exhaustive_check(&form(2, 4, 7), 1000).unwrap(), OracleOutcome::Pass);
        let table = ReachabilityTable::build(3, 4, 1000).unwrap();
        for k in -100..=100 {
            assert_eq!(table.check(k).unwrap(), OracleOutcome::Pass, "k={k}");
        }
    }

    #[test]
    fn budget_gives_partial() {
        let out = exhaustive_check_with_budget(&form(3, 4, 5), 1000, 10).unwrap();
        assert!(matches!(out, OracleOutcome::Partial { verified_up_to } if verified_up_to < 1000));
    }

    #[test]
    fn confirmation_matches() {
        assert!(confirm_unsolvable(3, 2, 4, 9).unwrap());
        assert!(!confirm_unsolvable(3, 2, 2, 9).unwrap());
        assert!(confirm_unsolvable(4, 3, 15, 16).unwrap());
    }

    #[test]
    fn splits() {
        assert_eq!(coprime_split(12), Some((4, 3)));
        assert_eq!(coprime_split(16), None);
        assert_eq!(coprime_split(7), None);
    }

    #[test]
    fn compare_examples() {
        for (n, l, k) in [(5, 3, 13), (4, 3, 31), (6, 4, 1), (3, 2, 4)] {
            let report = compare(&form(n, l, k), 10_000).unwrap();
            assert!(report.agree, "{report:?}");
        }
    }
}
