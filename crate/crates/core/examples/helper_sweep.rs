//! Random sweep over sources with helpers: three terminals with two active,
//! and four terminals with two or three active. Loose instances are printed.

use omniscio::source::random_linear_source;
use omniscio::tightness::check_bound;
use omniscio::{EntropyOracle, SubsetMask};

fn sweep(m: usize, actives: &[&[usize]], trials: u64) -> omniscio::Result<()> {
    let mut gaps = 0;
    let mut total = 0;
    for seed in 0..trials {
        let oracle =
            EntropyOracle::from_linear(random_linear_source(m, 4, 1 + seed as usize % 2, seed)?);
        for a in actives {
            let active = SubsetMask::from_terminals(m, a.iter().copied())?;
            let v = check_bound(&oracle, active)?;
            total += 1;
            if !v.tight {
                gaps += 1;
                if gaps <= 5 {
                    println!(
                        "  m={m} seed {seed} A={active}: C_SK = {}, I(A) = {}",
                        v.c_sk.unwrap(),
                        v.i_a.unwrap()
                    );
                }
            }
        }
    }
    println!("m={m}: {gaps} loose of {total} instances");
    Ok(())
}

fn main() -> omniscio::Result<()> {
    sweep(3, &[&[1, 2], &[1, 3], &[2, 3]], 200)?;
    sweep(4, &[&[1, 2], &[1, 2, 3]], 200)?;
    Ok(())
}
