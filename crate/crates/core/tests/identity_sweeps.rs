use intersective_core::arith::{binomial_valuation, binomial_valuation_bound, is_prime, pow_mod, valuation};
use intersective_core::residues::{exponent_reduction, power_residues, residue_count};
use intersective_core::sumsets::iterated_sumset;
use num_bigint::BigUint;

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

fn biguint_valuation(mut v: BigUint, p: u64) -> u32 {
    let p = BigUint::from(p);
    let zero = BigUint::from(0u32);
    let mut count = 0;
    while &v % &p == zero {
        v /= &p;
        count += 1;
    }
    count
}

#[test]
fn binomial_valuations_match_exact_coefficients() {
    for p in primes_up_to(13) {
        for n in (p..=240).step_by(p as usize) {
            let a = valuation(p, n as i128).unwrap();
            // walk row n with C(n, i) = C(n, i-1) (n-i+1) / i
            let mut c = BigUint::from(1u32);
            for i in 1..=n {
                c = c * BigUint::from(n - i + 1) / BigUint::from(i);
                let exact = biguint_valuation(c.clone(), p);
                assert_eq!(binomial_valuation(n, i, p).unwrap(), exact, "n={n} i={i} p={p}");
                if valuation(p, i as i128).unwrap() <= a {
                    assert!(binomial_valuation_bound(n, i, p).unwrap() <= exact, "n={n} i={i} p={p}");
                }
            }
        }
    }
}

#[test]
fn binomial_valuation_small_cases() {
    // C(9, 2) = 36, C(6, 4) = 15, C(6, 3) = 20
    assert_eq!(binomial_valuation(9, 2, 2).unwrap(), 2);
    assert_eq!(binomial_valuation(6, 4, 2).unwrap(), 0);
    assert_eq!(binomial_valuation(6, 3, 2).unwrap(), 2);
}

#[test]
fn residue_counts_for_every_divisor() {
    for p in primes_up_to(199).into_iter().filter(|&p| p > 2) {
        for d in (1..p).filter(|d| (p - 1) % d == 0) {
            let size = power_residues(d as u32, p).unwrap().len() as u64;
            assert_eq!(residue_count(p, d).unwrap(), size, "p={p} d={d}");
        }
    }
}

#[test]
fn exponent_reduces_to_gcd() {
    for p in primes_up_to(101).into_iter().filter(|&p| p > 2) {
        for n in 1..=50u32 {
            let d = exponent_reduction(n, p).unwrap();
            assert_eq!(
                power_residues(n, p).unwrap().to_vec(),
                power_residues(d, p).unwrap().to_vec(),
                "p={p} n={n}"
            );
        }
    }
}

#[test]
fn half_prime_sums_of_odd_powers_cover() {
    for n in (1..=15u32).step_by(2) {
        for p in primes_up_to(101).into_iter().filter(|&p| p > 2) {
            let sums = iterated_sumset(&power_residues(n, p).unwrap(), ((p - 1) / 2) as usize).unwrap();
            assert!(sums.is_full(), "n={n} p={p}");
        }
    }
}

#[test]
fn witnesses_reproduce_members() {
    for m in [7u64, 9, 16, 25, 49, 63, 80, 275] {
        for n in 2..=7u32 {
            let set = power_residues(n, m).unwrap();
            for r in set.iter() {
                assert_eq!(pow_mod(set.witness(r).unwrap(), n as u64, m), r);
            }
        }
    }
}
