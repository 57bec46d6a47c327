//! A source given by its joint pmf. Entropies are irrational, so they are
//! rounded to a rational grid and comparisons use the oracle tolerance.
//!
//! `X1, X2` are uniform bits and `X3 = X1 AND X2` observed through a
//! flip with probability 1/8.

use omniscio::rational::{frac, pretty};
use omniscio::{capacity, dependence, tightness, EntropyOracle, SubsetMask, TabularSource};

fn main() -> omniscio::Result<()> {
    let mut pmf = Vec::new();
    for x1 in 0..2 {
        for x2 in 0..2 {
            let and = x1 & x2;
            for x3 in 0..2 {
                let p = if x3 == and { frac(7, 32) } else { frac(1, 32) };
                pmf.push((vec![x1, x2, x3], p));
            }
        }
    }
    let oracle = EntropyOracle::from_tabular(TabularSource::new(vec![2, 2, 2], pmf)?, 1e-9)?;
    println!(
        "validity: {}",
        oracle.check_validity().first_violation(None)
    );
    for active in [&[1, 2, 3][..], &[1, 2], &[1, 3]] {
        let a = SubsetMask::from_terminals(3, active.iter().copied())?;
        let cap = capacity::r_co(&oracle, a)?;
        let bound = dependence::mutual_dependence_bound(&oracle, a)?;
        let tight = tightness::check_bound(&oracle, a)?.tight;
        println!(
            "A = {a}: C_SK = {}, I(A) = {}, tight = {tight}",
            pretty(&cap.c_sk),
            pretty(&bound.value)
        );
    }
    Ok(())
}
