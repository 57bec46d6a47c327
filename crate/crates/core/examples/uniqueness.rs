//! Uniqueness of the optimal rate vector.
//!
//! Three rows `{1}, {2}, {3}` with bound 0 and the three pairs with bound 1.
//! The optimum is 2 on the whole segment `R_3 = 1, R_1 + R_2 = 1`, so the
//! vertex returned by the simplex is not the only optimum and the test
//! exhibits a second one. The six-terminal XOR system, in contrast, has a
//! unique optimum.

use omniscio::lp::{self, ConstraintSystem, Verdict};
use omniscio::rational::{int, zero};
use omniscio::{capacity, source, EntropyOracle, SubsetMask};

fn show(v: &[omniscio::Rational]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn main() -> omniscio::Result<()> {
    let rows: Vec<SubsetMask> = [&[1][..], &[2], &[3], &[1, 2], &[1, 3], &[2, 3]]
        .iter()
        .map(|t| SubsetMask::from_terminals(3, t.iter().copied()))
        .collect::<omniscio::Result<_>>()?;
    let b = vec![zero(), zero(), int(1), int(1), int(1), int(1)];
    let system = ConstraintSystem::new(3, rows, b)?;
    let sol = lp::solve(&system)?;
    let cert = lp::uniqueness_test(&system, &sol)?;
    println!(
        "degenerate system: optimum {} at ({})",
        sol.objective,
        show(&sol.x)
    );
    println!(
        "  verdict {:?}, auxiliary objective {}",
        cert.verdict, cert.auxiliary_objective
    );
    if let Some(alt) = &cert.alternative {
        let value = alt.iter().fold(zero(), |a, v| a + v);
        println!(
            "  another optimal vertex: ({}) with objective {}",
            show(alt),
            value
        );
    }
    assert_eq!(cert.verdict, Verdict::NotUnique);

    let (src, active) = source::make_counterexample();
    let rep = capacity::r_co(&EntropyOracle::from_linear(src), active)?;
    println!(
        "xor system: optimum {} at ({}), verdict {:?}",
        rep.r_co,
        show(&rep.rates.0),
        rep.uniqueness.verdict
    );
    Ok(())
}
