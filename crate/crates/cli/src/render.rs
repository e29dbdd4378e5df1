//! Human-readable and tabular output.

use std::fmt::Write as _;

use intersective_core::{Certificate, Decision, Table, Witness};

fn tuple(coords: &[u64]) -> String {
    let parts: Vec<String> = coords.iter().map(u64::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn witness(w: &Witness) -> String {
    let mut s = format!("{} mod {}", tuple(&w.coords), w.modulus);
    if let Some(i) = w.unit_index {
        let _ = write!(s, ", unit coordinate {}", i + 1);
    }
    s
}

/// Failing moduli named by the certificates, without unit-restricted
/// evidence, sorted and deduplicated.
fn failing_moduli(d: &Decision) -> Vec<u64> {
    let mut moduli: Vec<u64> = d
        .failures()
        .filter_map(|c| match c {
            Certificate::Failure {
                modulus,
                unit_restricted: false,
                ..
            } => Some(*modulus),
            _ => None,
        })
        .collect();
    moduli.sort_unstable();
    moduli.dedup();
    moduli
}

pub fn decision(d: &Decision) -> String {
    let mut s = String::new();
    let moduli = failing_moduli(d);
    let _ = match (d.intersective, moduli.as_slice()) {
        (true, _) => writeln!(s, "intersective"),
        (false, []) => writeln!(s, "not intersective, failing modulus beyond the evidence range"),
        (false, [m]) => writeln!(s, "not intersective, failing modulus {m}"),
        (false, many) => {
            let list: Vec<String> = many.iter().map(u64::to_string).collect();
            writeln!(s, "not intersective, failing moduli {}", list.join(", "))
        }
    };
    let _ = writeln!(s, "  n = {}, l = {}, k = {}", d.n, d.arity, d.k);
    for c in &d.certificates {
        let _ = match c {
            Certificate::Witness {
                prime: Some(p),
                descent: 0,
                witness: w,
            } => writeln!(s, "  root at prime {p}: {}", witness(w)),
            Certificate::Witness {
                prime: Some(p),
                descent,
                witness: w,
            } => writeln!(s, "  root at prime {p} after dividing k by {p}^{}: {}", d.n * descent, witness(w)),
            Certificate::Witness { prime: None, witness: w, .. } => writeln!(s, "  root: {}", witness(w)),
            Certificate::Failure {
                prime,
                modulus,
                residue,
                unit_restricted: false,
                ..
            } => writeln!(s, "  no root mod {modulus} (prime {prime}): {residue} is not reachable"),
            Certificate::Failure {
                prime,
                modulus,
                residue,
                unit_restricted: true,
                ..
            } => writeln!(
                s,
                "  no root mod high powers of {prime}: {residue} has no sum mod {modulus} with a coordinate prime to {prime}"
            ),
        };
    }
    s
}

pub fn table_markdown(t: &Table) -> String {
    let mut s = format!("| l | condition (n = {}) |\n|---|---|\n", t.n);
    for row in &t.rows {
        let _ = writeln!(s, "| {} | {} |", row.arity_label(), row.condition());
    }
    s
}

pub fn table_csv(t: &Table) -> String {
    let mut s = String::from("arity,condition_modulus,nicely,always_intersective\n");
    for row in &t.rows {
        let modulus = row.condition_modulus.map(|m| m.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{}",
            row.arity_label(),
            modulus,
            row.nicely,
            row.always_intersective
        );
    }
    s
}

pub fn residues(members: &[u64]) -> String {
    let parts: Vec<String> = members.iter().map(u64::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}
