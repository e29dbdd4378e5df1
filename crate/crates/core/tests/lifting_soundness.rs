use intersective_core::arith::is_prime;
use intersective_core::lifting::{local_criterion, LiftState};
use intersective_core::{default_arity, DiagonalForm};
use num_bigint::BigInt;

fn exact_root_mod(state: &LiftState) -> bool {
    let form = state.form();
    let m = BigInt::from(state.modulus());
    let sum: BigInt = state
        .coords()
        .iter()
        .map(|&x| BigInt::from(x).pow(form.exponent()))
        .sum();
    let diff: BigInt = sum - BigInt::from(form.target());
    let r = ((diff % &m) + &m) % &m;
    r == BigInt::from(0)
}

#[test]
fn ten_lifts_stay_exact() {
    let mut lifted = 0;
    for n in 2..=8u32 {
        let l = default_arity(n).unwrap();
        for p in (2..=n as u64).filter(|&p| is_prime(p) && n as u64 % p == 0) {
            for k in -200..=200 {
                let form = DiagonalForm::new(n, l, k).unwrap();
                let result = local_criterion(&form, p).unwrap();
                let Some(mut state) = result.state else { continue };
                assert!(exact_root_mod(&state));
                for _ in 0..10 {
                    state = state.lift().unwrap_or_else(|e| panic!("n={n} p={p} k={k}: {e:?} {state:?}"));
                    assert!(exact_root_mod(&state), "n={n} p={p} k={k} j={}", state.power());
                }
                lifted += 1;
            }
        }
    }
    assert!(lifted > 1000);
}

#[test]
fn hensel_lifts_at_extra_primes() {
    for (n, p) in [(3u32, 7u64), (4, 5), (5, 11), (6, 7), (6, 13)] {
        let l = default_arity(n).unwrap();
        for k in -60..=60 {
            let form = DiagonalForm::new(n, l, k).unwrap();
            let Some(mut state) = local_criterion(&form, p).unwrap().state else { continue };
            for _ in 0..8 {
                state = state.lift().unwrap();
                assert!(exact_root_mod(&state), "n={n} p={p} k={k}");
            }
        }
    }
}

#[test]
fn criterion_agrees_with_prime_power_enumeration() {
    use intersective_core::oracle::reachable_mod;
    const LIMIT: u64 = 100_000;
    for n in 2..=8u32 {
        let l = default_arity(n).unwrap();
        for p in (2..=n as u64).filter(|&p| is_prime(p) && n as u64 % p == 0) {
            let powers: Vec<u64> = (1..).map(|i| p.pow(i)).take_while(|&q| q <= LIMIT).collect();
            let sets: Vec<_> = powers.iter().map(|&q| reachable_mod(n, l, q).unwrap()).collect();
            for k in -200i64..=200 {
                let result = local_criterion(&DiagonalForm::new(n, l, k).unwrap(), p).unwrap();
                let first_miss = powers
                    .iter()
                    .zip(&sets)
                    .find(|(&q, set)| !set.contains(k.rem_euclid(q as i64) as usize))
                    .map(|(&q, _)| q);
                match (result.liftable, first_miss) {
                    (true, miss) => assert_eq!(miss, None, "n={n} p={p} k={k}"),
                    (false, Some(q)) => {
                        let failure = result.failure.unwrap();
                        if !failure.unit_restricted {
                            assert_eq!(failure.modulus, q, "n={n} p={p} k={k}");
                        }
                    }
                    // the obstruction sits above the enumeration limit
                    (false, None) => assert!(result.failure.unwrap().unit_restricted, "n={n} p={p} k={k}"),
                }
            }
        }
    }
}

#[test]
fn fourth_powers_consult_sixteen() {
    use intersective_core::solver::solvable_mod_with_unit;
    let l = default_arity(4).unwrap();
    let sharp: Vec<i64> = (-200..=200)
        .filter(|&k| {
            let form = DiagonalForm::new(4, l, k).unwrap();
            solvable_mod_with_unit(&form, 2, 3).unwrap().is_some()
                && solvable_mod_with_unit(&form, 2, 4).unwrap().is_none()
        })
        .collect();
    for &k in &sharp {
        let result = local_criterion(&DiagonalForm::new(4, l, k).unwrap(), 2).unwrap();
        assert_eq!(result.threshold, 16);
        if result.descent == 0 && result.branch.is_none() {
            assert!(!result.liftable, "k={k}");
        }
    }
    // odd fourth powers are 1 mod 16: 9 = 1 (mod 8) but 9 is out of reach mod 16
    assert!(sharp.contains(&9), "{sharp:?}");
}
