//! Default arity, critical moduli, the intersectivity decision and the
//! per-arity summary table.
//!
//! `x_1^n + ... + x_l^n - k` is intersective when it has a root modulo every
//! positive integer. By CRT this is a question per prime. Sumset covering
//! bounds settle every prime except a handful, which [`local_criterion`]
//! decides exactly: the primes of `n`, the extra primes among `n + 1` and
//! `2n + 1`, any small prime that a direct scan finds outside `l`-fold
//! coverage, and (for even `n`) prime divisors of `k` where `0` is not a sum
//! with a nonzero addend.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{crt, factorize, is_prime};
use crate::error::{Error, Result};
use crate::lifting::{local_criterion, CriterionResult};
use crate::residues::power_residues;
use crate::solver::{lifting_threshold, representation_search, scale_witness, DiagonalForm, Witness};
use crate::sumsets::{iterated_sumset, zero_has_unit_sum};

/// `l(n)`: `ceil((n+1)/2)` for odd `n`, `max(ceil(2n/3), ceil((n+2)/2))`
/// for even `n`.
pub fn default_arity(n: u32) -> Result<usize> {
    if n < 2 {
        return Err(Error::Domain("exponent must be at least 2"));
    }
    let n = n as usize;
    Ok(if n % 2 == 1 {
        (n + 1).div_ceil(2)
    } else {
        (2 * n).div_ceil(3).max((n + 2).div_ceil(2))
    })
}

/// `N` and the extra primes for an exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalModuli {
    exponent: u32,
    base: u64,
    extra_primes: Vec<u64>,
    components: Vec<(u64, u64)>,
}

impl CriticalModuli {
    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `N = prod p^(a+1)`, with `2^(a+2)` in place of `2^(a+1)` for even `n`.
    pub fn base(&self) -> u64 {
        self.base
    }

    /// Primes among `2n + 1` (odd `n`) or `n + 1, 2n + 1` (even `n`).
    pub fn extra_primes(&self) -> &[u64] {
        &self.extra_primes
    }

    /// `(prime, prime-power modulus)` pairs: the factors of `N` followed by
    /// the extra primes.
    pub fn components(&self) -> &[(u64, u64)] {
        &self.components
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.components.iter().map(|&(p, _)| p)
    }

    /// `N` times the extra primes.
    pub fn combined(&self) -> Result<u64> {
        self.extra_primes.iter().try_fold(self.base, |acc, &p| {
            acc.checked_mul(p).ok_or(Error::Overflow("combined critical modulus"))
        })
    }
}

pub fn critical_moduli(n: u32) -> Result<CriticalModuli> {
    if n < 2 {
        return Err(Error::Domain("exponent must be at least 2"));
    }
    let mut components = Vec::new();
    let mut base = 1u64;
    for &(p, a) in factorize(n as u64)?.factors() {
        // the prime 2 divides only even n, where its threshold is 2^(a+2)
        let (_, modulus) = lifting_threshold(p, a)?;
        base = base.checked_mul(modulus).ok_or(Error::Overflow("critical modulus"))?;
        components.push((p, modulus));
    }
    let candidates: &[u64] = if n % 2 == 1 {
        &[2 * n as u64 + 1]
    } else {
        &[n as u64 + 1, 2 * n as u64 + 1]
    };
    let extra_primes: Vec<u64> = candidates.iter().copied().filter(|&q| is_prime(q)).collect();
    components.extend(extra_primes.iter().map(|&q| (q, q)));
    Ok(CriticalModuli {
        exponent: n,
        base,
        extra_primes,
        components,
    })
}

/// Whether every residue mod `modulus` (a prime power) is an `arity`-fold sum
/// of n-th powers; for even `n` with some coordinate coprime to the prime.
fn component_universal(n: u32, modulus: u64, arity: usize) -> Result<bool> {
    let sums = iterated_sumset(&power_residues(n, modulus)?, arity)?;
    if n % 2 == 1 {
        return Ok(sums.is_full());
    }
    sums.unit_reachable()
        .map(|units| units.is_full())
        .ok_or(Error::Internal("component modulus is not a prime power"))
}

/// Primes below `2n + 1`, outside `n`'s factors and the extra primes, whose
/// residues escape `arity`-fold coverage. The covering bounds leave these
/// cases to direct computation; they are checked like critical primes.
fn uncovered_small_primes(n: u32, arity: usize, crit: &CriticalModuli) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for p in (2..2 * n as u64 + 1).filter(|&p| is_prime(p)) {
        if crit.primes().any(|q| q == p) {
            continue;
        }
        if !component_universal(n, p, arity)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Primes `p > 2n + 1` dividing `k` at which `0` has no `l`-fold
/// representation with a nonzero addend. There `k = 0 (mod p)` cannot be
/// lifted by Hensel's lemma, so these primes need the exact local check.
/// All other primes above `2n + 1` are covered by the sumset bounds.
fn zero_blocking_divisors(n: u32, l: usize, k: i64) -> Result<Vec<u64>> {
    if k == 0 {
        return Ok(Vec::new());
    }
    let magnitude = k.unsigned_abs();
    let odd_part = magnitude >> magnitude.trailing_zeros();
    if odd_part == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for p in factorize(odd_part)?.primes() {
        if p > 2 * n as u64 + 1 && !zero_has_unit_sum(n, l, p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Which rule decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DecisionBranch {
    /// `k = 0`: the all-zero tuple.
    ZeroTarget,
    /// Even `n` and `k` is a sum of `l` integer n-th powers.
    ExactRepresentation,
    /// Odd `n`: solvability modulo `N` and, when prime, `2n + 1`.
    OddLocalConditions,
    /// Even `n`: unit-coordinate solvability at each critical prime power,
    /// after dividing out `p^n` from `k` where needed.
    EvenLocalConditions,
}

/// A verified witness, or an uncovered residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Certificate {
    Witness {
        /// The prime whose powers this witness settles; `None` for the
        /// combined CRT witness and exact representations.
        prime: Option<u64>,
        /// Times `p^n` was divided out of `k` before lifting.
        descent: u32,
        witness: Witness,
    },
    Failure {
        prime: u64,
        modulus: u64,
        residue: u64,
        /// Sorted residues reachable modulo `modulus`.
        reachable: Vec<u64>,
        /// `reachable` counts only sums with a coordinate coprime to
        /// `prime`, and `residue` is the descended target.
        unit_restricted: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Decision {
    pub n: u32,
    pub k: i64,
    pub arity: usize,
    pub intersective: bool,
    pub branch: DecisionBranch,
    pub certificates: Vec<Certificate>,
    pub checked_moduli: Vec<u64>,
}

impl Decision {
    pub fn form(&self) -> Result<DiagonalForm> {
        DiagonalForm::new(self.n, self.arity, self.k)
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &Witness> {
        self.certificates.iter().filter_map(|c| match c {
            Certificate::Witness { witness, .. } => Some(witness),
            Certificate::Failure { .. } => None,
        })
    }

    pub fn failures(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates
            .iter()
            .filter(|c| matches!(c, Certificate::Failure { .. }))
    }

    /// Least modulus without a root, when it was located. For negative
    /// decisions `None` means it exceeds the evidence search range.
    pub fn failing_modulus(&self) -> Option<u64> {
        self.certificates
            .iter()
            .filter_map(|c| match c {
                Certificate::Failure {
                    modulus,
                    unit_restricted: false,
                    ..
                } => Some(*modulus),
                _ => None,
            })
            .min()
    }
}

fn to_certificate(form: &DiagonalForm, r: CriterionResult) -> Result<Certificate> {
    match (r.state, r.failure) {
        (Some(state), _) if r.liftable => {
            let witness = scale_witness(&state.witness(), r.prime, r.descent, form.exponent())?;
            let witness = Witness::new(witness.modulus, witness.coords, Some(r.prime));
            if !witness.verify(form) {
                return Err(Error::Internal("local witness does not verify"));
            }
            Ok(Certificate::Witness {
                prime: Some(r.prime),
                descent: r.descent,
                witness,
            })
        }
        (_, Some(f)) => Ok(Certificate::Failure {
            prime: r.prime,
            modulus: f.modulus,
            residue: f.residue,
            reachable: f.reachable,
            unit_restricted: f.unit_restricted,
        }),
        _ => Err(Error::Internal("criterion result carries no evidence")),
    }
}

/// Combine local witnesses into one modulo the product of their moduli.
fn combine(form: &DiagonalForm, local: &[&Witness]) -> Result<Option<Witness>> {
    let Some(modulus) = local
        .iter()
        .try_fold(1u64, |acc, w| acc.checked_mul(w.modulus).filter(|&v| v <= crate::arith::MAX_VALUE))
    else {
        return Ok(None);
    };
    let mut coords = Vec::with_capacity(form.arity());
    for i in 0..form.arity() {
        let system: Vec<(u64, u64)> = local.iter().map(|w| (w.coords[i], w.modulus)).collect();
        coords.push(crt(&system)?.0);
    }
    let w = Witness::new(modulus, coords, None);
    if !w.verify(form) {
        return Err(Error::Internal("combined witness does not verify"));
    }
    Ok(Some(w))
}

/// Decide whether `x_1^n + ... + x_l^n - k` has a root modulo every positive
/// integer. `arity` defaults to `l(n)` and may not go below it.
pub fn decide(n: u32, k: i64, arity: Option<usize>) -> Result<Decision> {
    let minimum = default_arity(n)?;
    let l = arity.unwrap_or(minimum);
    if l < minimum {
        return Err(Error::ArityBelowDefault {
            exponent: n,
            arity: l,
            minimum,
        });
    }
    let form = DiagonalForm::new(n, l, k)?;
    let crit = critical_moduli(n)?;

    let exact = if k == 0 {
        Some((DecisionBranch::ZeroTarget, vec![0; l]))
    } else if n % 2 == 0 {
        representation_search(&form)?.map(|c| (DecisionBranch::ExactRepresentation, c))
    } else {
        None
    };
    if let Some((branch, coords)) = exact {
        let modulus = crit.combined()?;
        let witness = Witness::new(modulus, coords, None);
        return Ok(Decision {
            n,
            k,
            arity: l,
            intersective: true,
            branch,
            certificates: vec![Certificate::Witness {
                prime: None,
                descent: 0,
                witness,
            }],
            checked_moduli: vec![modulus],
        });
    }

    let mut primes: Vec<u64> = crit.primes().collect();
    primes.extend(uncovered_small_primes(n, l, &crit)?);
    primes.extend(zero_blocking_divisors(n, l, k)?);
    primes.sort_unstable();
    primes.dedup();

    let mut certificates = Vec::with_capacity(primes.len() + 1);
    let mut checked_moduli = Vec::with_capacity(primes.len() + 1);
    for p in primes {
        let result = local_criterion(&form, p)?;
        checked_moduli.push(result.threshold);
        let cert = to_certificate(&form, result)?;
        if let Certificate::Witness { witness, .. } = &cert {
            *checked_moduli.last_mut().expect("pushed above") = witness.modulus;
        }
        certificates.push(cert);
    }
    let intersective = certificates
        .iter()
        .all(|c| matches!(c, Certificate::Witness { .. }));
    if intersective {
        let local: Vec<&Witness> = certificates
            .iter()
            .filter_map(|c| match c {
                Certificate::Witness { witness, .. } => Some(witness),
                Certificate::Failure { .. } => None,
            })
            .collect();
        if local.len() > 1 {
            if let Some(w) = combine(&form, &local)? {
                checked_moduli.push(w.modulus);
                certificates.push(Certificate::Witness {
                    prime: None,
                    descent: 0,
                    witness: w,
                });
            }
        }
    }
    Ok(Decision {
        n,
        k,
        arity: l,
        intersective,
        branch: if n % 2 == 1 {
            DecisionBranch::OddLocalConditions
        } else {
            DecisionBranch::EvenLocalConditions
        },
        certificates,
        checked_moduli,
    })
}

/// Arities `arity_from..=arity_to` sharing one solvability condition.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TableRow {
    pub arity_from: usize,
    pub arity_to: usize,
    /// `None` once every component is covered.
    pub condition_modulus: Option<u64>,
    pub nicely: bool,
    pub always_intersective: bool,
}

impl TableRow {
    pub fn arity_label(&self) -> String {
        if self.arity_from == self.arity_to {
            format!("{}", self.arity_from)
        } else {
            format!("{}-{}", self.arity_from, self.arity_to)
        }
    }

    pub fn condition(&self) -> String {
        match self.condition_modulus {
            None => String::from("always intersective for every k"),
            Some(d) if self.nicely => format!("intersective iff solvable mod {d} nicely"),
            Some(d) => format!("intersective iff solvable mod {d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Table {
    pub n: u32,
    /// Set for exponents outside 3..=7, whose rows have no published
    /// counterpart to compare with.
    pub extrapolated: bool,
    pub rows: Vec<TableRow>,
}

/// For each arity from `l(n)` until every residue class is covered, the
/// product of the critical components that are not yet universal.
///
/// Rows describe the critical components only. For a given `k`, [`decide`]
/// also examines large prime divisors of `k` (e.g. 29 for `n = 4, l = 3`).
pub fn table(n: u32) -> Result<Table> {
    let minimum = default_arity(n)?;
    let crit = critical_moduli(n)?;
    let mut components: Vec<u64> = crit.components().iter().map(|&(_, m)| m).collect();
    components.extend(uncovered_small_primes(n, minimum, &crit)?);

    let mut rows: Vec<TableRow> = Vec::new();
    let mut arity = minimum;
    loop {
        let mut modulus = 1u64;
        for &m in &components {
            if !component_universal(n, m, arity)? {
                modulus = modulus.checked_mul(m).ok_or(Error::Overflow("condition modulus"))?;
            }
        }
        let condition_modulus = (modulus > 1).then_some(modulus);
        match rows.last_mut() {
            Some(row) if row.condition_modulus == condition_modulus => row.arity_to = arity,
            _ => rows.push(TableRow {
                arity_from: arity,
                arity_to: arity,
                condition_modulus,
                nicely: n % 2 == 0 && condition_modulus.is_some(),
                always_intersective: condition_modulus.is_none(),
            }),
        }
        if condition_modulus.is_none() {
            break;
        }
        arity += 1;
    }
    Ok(Table {
        n,
        extrapolated: !(3..=7).contains(&n),
        rows,
    })
}
