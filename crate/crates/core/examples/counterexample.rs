//! Six terminals see the XOR of every pair of four uniform bits; terminals
//! 1, 2, 3 are active. The secret-key capacity falls strictly below the
//! mutual-dependence bound.
//!
//! The same arithmetic is repeated on the cardinality-only conditional
//! entropy table that is usually quoted for this source, and the two
//! descriptions are compared entry by entry.

use omniscio::cli::audit_section;
use omniscio::rational::pretty;
use omniscio::{capacity, dependence, source, EntropyOracle};

fn main() -> omniscio::Result<()> {
    let (src, active) = source::make_counterexample();
    for (t, rows) in src.rows_as_strings().iter().enumerate() {
        println!("X{} = {}", t + 1, rows.join(" "));
    }

    let oracle = EntropyOracle::from_linear(src);
    let cap = capacity::r_co(&oracle, active)?;
    let bound = dependence::mutual_dependence_bound(&oracle, active)?;
    println!();
    println!("H(X_M) = {}", pretty(&cap.h_full));
    println!("R_CO   = {}", pretty(&cap.r_co));
    println!("C_SK   = {}", pretty(&cap.c_sk));
    println!("I(A)   = {}", pretty(&bound.value));
    println!("gap    = {}", pretty(&(&bound.value - &cap.c_sk)));
    println!("optimum unique: {}", cap.is_unique());
    println!("dual support:");
    for (b, y) in cap
        .rows
        .iter()
        .zip(&cap.dual)
        .filter(|(_, y)| **y != omniscio::rational::zero())
    {
        println!("  {b}: {y}");
    }

    let audit = audit_section()?;
    println!();
    println!(
        "{} of {} table entries differ from the XOR source:",
        audit.differing,
        audit.rows.len()
    );
    for row in audit.rows.iter().filter(|r| r.differs) {
        println!(
            "  {:?}: table {} vs source {}",
            row.subset, row.h_quoted, row.h_generative
        );
    }
    println!("table validity: {}", audit.quoted.validity.first_violation);
    println!(
        "table numbers: C_SK = {}, I(A) = {}",
        audit.quoted.capacity.c_sk, audit.quoted.dependence.i_a
    );
    Ok(())
}
