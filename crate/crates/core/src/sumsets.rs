//! Iterated sumsets `hA = { a_1 + ... + a_h }` of residue sets, with one
//! witness tuple per reachable class, plus the lower bounds that guarantee
//! an iterated sumset covers `Z/p`.
//!
//! Unit tracking: at prime-power moduli every reachable class also records
//! whether it is reachable by a sum in which at least one addend comes from
//! a base coprime to `p`. That is the property a Hensel-type lift needs.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{gcd, is_prime};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::residues::ResidueSet;

const UNSEEN: u32 = u32::MAX;
const ORIGIN: u32 = u32::MAX - 1;

/// How a state was first reached: from `prev` by adding `addend` through a
/// unit or non-unit base. States are `2 * residue + unit_flag`.
#[derive(Clone, Copy)]
struct Step {
    prev: u32,
    addend: u32,
    unit: bool,
}

const UNSEEN_STEP: Step = Step {
    prev: UNSEEN,
    addend: 0,
    unit: false,
};

#[derive(Clone)]
enum Trace {
    /// `0` is a non-unit addend, so reachability is monotone in the arity and
    /// the first time a state is reached is enough.
    FirstReach(Vec<Step>),
    /// One step table per layer `1..=h`.
    Layered(Vec<Vec<Step>>),
}

/// The `h`-fold sumset of a [`ResidueSet`] with witnesses.
#[derive(Clone)]
pub struct SumsetAccumulator {
    residues: ResidueSet,
    arity: usize,
    reachable: BitSet,
    unit_reachable: Option<BitSet>,
    trace: Trace,
}

struct Addend {
    residue: u64,
    nonunit: bool,
    unit: bool,
}

/// Breadth-first over arity: `reachable_{h+1} = reachable_h + A`, storing a
/// back-pointer per newly reached class.
pub fn iterated_sumset(a: &ResidueSet, h: usize) -> Result<SumsetAccumulator> {
    if h == 0 {
        return Err(Error::Domain("sumset arity must be at least 1"));
    }
    if a.is_empty() {
        return Err(Error::Domain("sumset of an empty residue set"));
    }
    let m = a.modulus();
    let addends: Vec<Addend> = a
        .iter()
        .map(|r| Addend {
            residue: r,
            nonunit: a.nonunit_witness(r).is_some(),
            unit: a.unit_witness(r).is_some(),
        })
        .collect();
    let zero_is_free = a.nonunit_witness(0).is_some();
    let states = 2 * m as usize;
    let trace = if zero_is_free {
        first_reach(&addends, m, h, states)
    } else {
        layered(&addends, m, h, states)
    };
    let final_layer = match &trace {
        Trace::FirstReach(steps) => steps.as_slice(),
        Trace::Layered(layers) => layers.last().map(Vec::as_slice).unwrap_or(&[]),
    };
    let mut reachable = BitSet::new(m as usize);
    let mut unit_reachable = BitSet::new(m as usize);
    for (state, step) in final_layer.iter().enumerate() {
        if step.prev != UNSEEN {
            reachable.insert(state / 2);
            if state % 2 == 1 {
                unit_reachable.insert(state / 2);
            }
        }
    }
    Ok(SumsetAccumulator {
        arity: h,
        reachable,
        unit_reachable: a.prime().map(|_| unit_reachable),
        trace,
        residues: a.clone(),
    })
}

fn targets(state: usize, add: &Addend, m: u64) -> [Option<(usize, bool)>; 2] {
    let r = (state / 2) as u64;
    let flag = state % 2;
    let t = ((r + add.residue) % m) as usize;
    [
        add.nonunit.then_some((2 * t + flag, false)),
        add.unit.then_some((2 * t + 1, true)),
    ]
}

fn first_reach(addends: &[Addend], m: u64, h: usize, states: usize) -> Trace {
    let mut steps = vec![UNSEEN_STEP; states];
    steps[0] = Step {
        prev: ORIGIN,
        addend: 0,
        unit: false,
    };
    let mut frontier = vec![0usize];
    for _ in 0..h {
        let mut next = Vec::new();
        for &s in &frontier {
            for add in addends {
                for (t, unit) in targets(s, add, m).into_iter().flatten() {
                    if steps[t].prev == UNSEEN {
                        steps[t] = Step {
                            prev: s as u32,
                            addend: add.residue as u32,
                            unit,
                        };
                        next.push(t);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Trace::FirstReach(steps)
}

fn layered(addends: &[Addend], m: u64, h: usize, states: usize) -> Trace {
    let mut layers: Vec<Vec<Step>> = Vec::with_capacity(h);
    let mut current = vec![0usize];
    for _ in 0..h {
        let mut layer = vec![UNSEEN_STEP; states];
        let mut next = Vec::new();
        for &s in &current {
            for add in addends {
                for (t, unit) in targets(s, add, m).into_iter().flatten() {
                    if layer[t].prev == UNSEEN {
                        layer[t] = Step {
                            prev: s as u32,
                            addend: add.residue as u32,
                            unit,
                        };
                        next.push(t);
                    }
                }
            }
        }
        layers.push(layer);
        current = next;
    }
    Trace::Layered(layers)
}

impl SumsetAccumulator {
    pub fn modulus(&self) -> u64 {
        self.residues.modulus()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn residues(&self) -> &ResidueSet {
        &self.residues
    }

    pub fn reachable(&self) -> &BitSet {
        &self.reachable
    }

    pub fn contains(&self, r: u64) -> bool {
        self.reachable.contains(r as usize)
    }

    pub fn is_full(&self) -> bool {
        self.reachable.is_full()
    }

    /// Classes reachable with at least one unit-based addend; `None` when the
    /// modulus is not a prime power.
    pub fn unit_reachable(&self) -> Option<&BitSet> {
        self.unit_reachable.as_ref()
    }

    pub fn has_unit(&self, r: u64) -> Option<bool> {
        self.unit_reachable.as_ref().map(|u| u.contains(r as usize))
    }

    /// Bases `(x_1, ..., x_h)` with `sum x_i^n = r (mod m)`.
    pub fn witness(&self, r: u64) -> Option<Vec<u64>> {
        let r = r as usize;
        if !self.reachable.contains(r) {
            return None;
        }
        // prefer the plain state; fall back to the unit state
        let plain = self.walk(2 * r);
        plain.or_else(|| self.walk(2 * r + 1))
    }

    /// Like [`witness`](Self::witness) but with some coordinate coprime to
    /// the modulus' prime.
    pub fn unit_witness(&self, r: u64) -> Option<Vec<u64>> {
        if self.has_unit(r) != Some(true) {
            return None;
        }
        self.walk(2 * r as usize + 1)
    }

    fn walk(&self, state: usize) -> Option<Vec<u64>> {
        let mut coords = Vec::with_capacity(self.arity);
        let base = |addend: u32, unit: bool| {
            let res = &self.residues;
            if unit {
                res.unit_witness(addend as u64)
            } else {
                res.nonunit_witness(addend as u64)
            }
        };
        match &self.trace {
            Trace::FirstReach(steps) => {
                let mut s = state;
                loop {
                    let step = steps[s];
                    match step.prev {
                        UNSEEN => return None,
                        ORIGIN => break,
                        prev => {
                            coords.push(base(step.addend, step.unit)?);
                            s = prev as usize;
                        }
                    }
                }
                coords.resize(self.arity, 0);
            }
            Trace::Layered(layers) => {
                let mut s = state;
                for layer in layers.iter().rev() {
                    let step = layer[s];
                    if step.prev == UNSEEN {
                        return None;
                    }
                    coords.push(base(step.addend, step.unit)?);
                    s = step.prev as usize;
                }
            }
        }
        coords.reverse();
        Some(coords)
    }
}

impl core::fmt::Debug for SumsetAccumulator {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SumsetAccumulator")
            .field("modulus", &self.modulus())
            .field("arity", &self.arity)
            .field("reachable", &self.reachable)
            .finish()
    }
}

/// `hA` for an arbitrary subset `A` of `Z/m`, without witnesses.
pub fn plain_sumset(a: &BitSet, h: usize) -> Result<BitSet> {
    if h == 0 {
        return Err(Error::Domain("sumset arity must be at least 1"));
    }
    if a.is_empty() {
        return Err(Error::Domain("sumset of an empty set"));
    }
    let mut current = a.clone();
    for _ in 1..h {
        if current.is_full() {
            break;
        }
        let mut next = BitSet::new(a.universe());
        for shift in a.iter() {
            next.or_translate(&current, shift);
        }
        current = next;
    }
    Ok(current)
}

/// Generalized Cauchy-Davenport: `|hA| >= min(p, h|A| - h + 1)`.
pub fn cauchy_davenport_bound(h: u64, set_size: u64, p: u64) -> u64 {
    (h * set_size).saturating_sub(h).saturating_add(1).min(p)
}

/// Lower bound on `|lA_n|` in `Z/p` for sums of power residues:
/// `min(p, (2l - 1)(p - 1)/d + 1)` with `d = gcd(n, p - 1)`.
///
/// The unit-restricted variant bounds the classes reachable with at least
/// one nonzero addend by `min(p - 1, (2l - 1)s)`, `s = (p - 1)/d`: every
/// nonzero class in the sumset qualifies, but `0` need not, so the bound
/// cannot reach `p`. (Three fourth powers mod 29 reach every class, but 0
/// only as `0 + 0 + 0`.)
///
/// Requires `p > 3` prime and `1 < d < (p - 1)/2`.
pub fn range_bound(l: u64, n: u32, p: u64, unit_restricted: bool) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Domain("range bound needs a prime modulus"));
    }
    if l == 0 {
        return Err(Error::Domain("arity must be at least 1"));
    }
    if p <= 3 {
        return Err(Error::Inapplicable("range bound needs p > 3"));
    }
    let d = gcd(n as u64, p - 1);
    if d <= 1 || 2 * d >= p - 1 {
        return Err(Error::Inapplicable("range bound needs 1 < gcd(n, p-1) < (p-1)/2"));
    }
    let s = (p - 1) / d;
    let base = (2 * l - 1) * s;
    Ok(if unit_restricted { base.min(p - 1) } else { (base + 1).min(p) })
}

/// Whether `0` is a sum of `l` n-th powers mod `p` with at least one addend
/// nonzero, i.e. whether `-1` is a sum of `l - 1` n-th powers.
///
/// Decided by the power-residue sumset bound or the Weil bound
/// `|N - p^(t-1)| <= (d-1)^t p^((t-1)/2)` on the number of solutions of
/// `x_1^d + ... + x_t^d = -1` when they apply, and by direct computation for
/// primes up to `2^20` otherwise.
pub fn zero_has_unit_sum(n: u32, l: usize, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::Domain("zero-sum test needs a prime"));
    }
    if l == 0 || n == 0 {
        return Err(Error::Domain("exponent and arity must be at least 1"));
    }
    if p == 2 {
        // 1 + 1 = 0
        return Ok(l >= 2);
    }
    let d = gcd(n as u64, p - 1);
    let s = (p - 1) / d;
    let t = (l - 1) as u64;
    if t == 0 {
        return Ok(false);
    }
    if s % 2 == 0 {
        return Ok(true);
    }
    if t == 1 {
        // -1 would have to be an n-th power itself
        return Ok(false);
    }
    if d > 1 && p > 2 * d + 1 && 2 * t > d {
        return Ok(true);
    }
    // p^(t-1) > (d-1)^(2t) leaves room for a solution
    let lhs = (p as u128).checked_pow((t - 1) as u32);
    let rhs = ((d - 1) as u128).checked_pow(2 * t as u32);
    match (lhs, rhs) {
        (None, Some(_)) => return Ok(true),
        (Some(a), Some(b)) if a > b => return Ok(true),
        _ => {}
    }
    if p > 1 << 20 {
        return Err(Error::Inapplicable("zero-sum test needs direct computation at a large prime"));
    }
    let mut powers = BitSet::new(p as usize);
    for x in 0..p {
        powers.insert(crate::arith::pow_mod(x, n as u64, p) as usize);
    }
    Ok(plain_sumset(&powers, t as usize)?.contains(p as usize - 1))
}

/// An arity `h` guaranteed to make the `h`-fold sums of n-th powers cover
/// `Z/p` (with at least one unit addend when `unit_restricted`). The least of
/// the applicable guarantees is returned; this need not be the true minimum.
///
/// Requires `p` an odd prime not dividing `n`.
pub fn covering_arity(n: u32, p: u64, unit_restricted: bool) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        return Err(Error::Domain("covering arity needs an odd prime"));
    }
    if n == 0 {
        return Err(Error::Domain("exponent must be at least 1"));
    }
    if n as u64 % p == 0 {
        return Err(Error::Domain("p divides n: covering is decided by lifting, not by sumsets"));
    }
    let d = gcd(n as u64, p - 1);
    let s = (p - 1) / d;
    let mut plain = u64::MAX;
    if d == 1 {
        plain = 1;
    } else {
        // Cauchy-Davenport with |A_d| = s + 1
        plain = plain.min(d);
        if p > 2 * d + 1 {
            plain = plain.min((d + 1).div_ceil(2));
        }
    }
    if n % 2 == 1 {
        // 0 and +-1 are n-th powers
        plain = plain.min((p - 1) / 2);
    }
    if !unit_restricted {
        return Ok(plain);
    }

    // Nonzero classes in the plain sumset come with a nonzero addend; 0 does
    // exactly when -1 is a sum of h - 1 n-th powers.
    let mut best = if s >= 2 {
        // Cauchy-Davenport on the s nonzero residues
        (d * s).div_ceil(s - 1)
    } else {
        // only nonzero residue is 1: sums 1..h need h >= p
        p
    };
    if s % 2 == 0 {
        // -1 is itself an n-th power
        best = best.min(plain.max(2));
    }
    if d > 1 && p > 2 * d + 1 {
        // (h - 1)-fold sums already cover Z/p, so -1 is among them
        best = best.min((d + 3).div_ceil(2));
    }
    Ok(best)
}
