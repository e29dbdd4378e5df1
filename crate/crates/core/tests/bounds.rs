use intersective_core::arith::{gcd, is_prime};
use intersective_core::residues::power_residues;
use intersective_core::sumsets::{
    cauchy_davenport_bound, covering_arity, iterated_sumset, plain_sumset, range_bound,
};
use intersective_core::BitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn odd_primes(limit: u64) -> Vec<u64> {
    (3..=limit).filter(|&p| is_prime(p)).collect()
}

#[test]
fn cauchy_davenport_holds_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in (2..=101).filter(|&p| is_prime(p)) {
        for _ in 0..200 {
            let mut a = BitSet::new(p as usize);
            let density = rng.gen_range(0.02..0.6);
            for r in 0..p as usize {
                if rng.gen_bool(density) {
                    a.insert(r);
                }
            }
            if a.is_empty() {
                a.insert(rng.gen_range(0..p as usize));
            }
            for h in 2..=6usize {
                let size = plain_sumset(&a, h).unwrap().len() as u64;
                let bound = cauchy_davenport_bound(h as u64, a.len() as u64, p);
                assert!(size >= bound, "p={p} h={h} |A|={}", a.len());
            }
        }
    }
}

#[test]
fn power_residue_range_bounds_hold() {
    for p in odd_primes(101).into_iter().filter(|&p| p > 3) {
        for n in 1..=20u32 {
            let set = power_residues(n, p).unwrap();
            for l in 1..=6u64 {
                let Ok(plain) = range_bound(l, n, p, false) else { continue };
                let unit = range_bound(l, n, p, true).unwrap();
                let sums = iterated_sumset(&set, l as usize).unwrap();
                assert!(sums.reachable().len() as u64 >= plain, "p={p} n={n} l={l}");
                let units = sums.unit_reachable().unwrap().len() as u64;
                assert!(units >= unit, "p={p} n={n} l={l}: {units} < {unit}");
            }
        }
    }
}

fn exact_covering_arity(n: u32, p: u64, unit_restricted: bool) -> u64 {
    // test-only search: first h with h-fold sums covering Z/p
    let powers: Vec<u64> = (0..p).map(|x| intersective_core::arith::pow_mod(x, n as u64, p)).collect();
    let mut plain = vec![false; p as usize];
    let mut unit = vec![false; p as usize];
    plain[0] = true;
    for h in 1..=p + 1 {
        let (mut np, mut nu) = (vec![false; p as usize], vec![false; p as usize]);
        for r in 0..p as usize {
            for (x, &v) in powers.iter().enumerate() {
                let t = (r + v as usize) % p as usize;
                if plain[r] {
                    np[t] = true;
                    if x != 0 {
                        nu[t] = true;
                    }
                }
                if unit[r] {
                    nu[t] = true;
                }
            }
        }
        plain = np;
        unit = nu;
        let covered = if unit_restricted { &unit } else { &plain };
        if covered.iter().all(|&b| b) {
            return h;
        }
    }
    unreachable!("p + 1 terms always cover")
}

#[test]
fn covering_arity_never_undercuts_truth() {
    for p in odd_primes(61) {
        for n in (1..=16u32).filter(|&n| n as u64 % p != 0) {
            for unit in [false, true] {
                let guaranteed = covering_arity(n, p, unit).unwrap();
                let truth = exact_covering_arity(n, p, unit);
                assert!(guaranteed >= truth, "n={n} p={p} unit={unit}: {guaranteed} < {truth}");
            }
        }
    }
}

#[test]
fn covering_arity_is_tight_for_units_mod_29() {
    assert_eq!(exact_covering_arity(4, 29, true), 4);
    assert_eq!(covering_arity(4, 29, true).unwrap(), 4);
    assert_eq!(gcd(4, 28), 4);
}
