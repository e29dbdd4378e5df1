use intersective_core::oracle::{agreement, ReachabilityTable};
use intersective_core::{decide, default_arity, Certificate, DiagonalForm};

fn sweep(n: u32, arity: usize, k_max: i64, bound: u64) {
    let table = ReachabilityTable::build(n, arity, bound).unwrap();
    for k in -k_max..=k_max {
        let decision = decide(n, k, Some(arity)).unwrap();
        let outcome = table.check(k).unwrap();
        let (agree, detail) = agreement(&decision, &outcome, bound);
        assert!(agree, "n={n} l={arity} k={k}: {detail}");
    }
}

#[test]
fn small_exponents_agree_with_brute_force() {
    for n in 3..=6 {
        let l = default_arity(n).unwrap();
        sweep(n, l, 150, 2048);
        sweep(n, l + 1, 60, 2048);
    }
}

#[test]
fn larger_exponents_agree_with_brute_force() {
    for n in [7, 8] {
        sweep(n, default_arity(n).unwrap(), 60, 1024);
    }
}

#[test]
fn squares_with_two_terms() {
    // l(2) = 2: local obstructions come from primes 3 mod 4 dividing k
    sweep(2, 2, 120, 1024);
}

#[test]
fn certificates_cover_checked_moduli() {
    for n in 3..=7 {
        for k in -40..=40 {
            let d = decide(n, k, None).unwrap();
            let form = d.form().unwrap();
            if d.intersective {
                let moduli: Vec<u64> = d.witnesses().map(|w| w.modulus).collect();
                assert_eq!(moduli, d.checked_moduli, "n={n} k={k}");
                assert!(d.witnesses().all(|w| w.verify(&form)), "n={n} k={k}");
            } else {
                for c in d.failures() {
                    let Certificate::Failure { modulus, residue, reachable, unit_restricted, .. } = c else {
                        unreachable!()
                    };
                    assert!(!reachable.contains(residue));
                    if !unit_restricted {
                        assert_eq!(*residue, k.rem_euclid(*modulus as i64) as u64);
                    }
                }
            }
        }
    }
}

#[test]
fn arity_is_monotone() {
    for n in 3..=6 {
        let l = default_arity(n).unwrap();
        for k in -80..=80 {
            let mut previous = false;
            for arity in l..l + 4 {
                let now = decide(n, k, Some(arity)).unwrap().intersective;
                assert!(!previous || now, "n={n} k={k} arity={arity}");
                previous = now;
            }
        }
    }
}

#[test]
fn combined_witness_reduces_to_locals() {
    let d = (1..200)
        .map(|k| decide(6, k, None).unwrap())
        .find(|d| d.intersective && d.witnesses().count() > 2)
        .unwrap();
    let form = DiagonalForm::new(6, 4, d.k).unwrap();
    let combined = d.witnesses().last().unwrap();
    for w in d.witnesses() {
        assert_eq!(combined.modulus % w.modulus, 0);
        let reduced: Vec<u64> = combined.coords.iter().map(|x| x % w.modulus).collect();
        assert!(form.is_root_mod(&reduced, w.modulus));
    }
}
