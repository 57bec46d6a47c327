//! With every terminal active the bound is always tight. For a handful of
//! random linear sources this rebuilds the optimal partition from the dual
//! solution and checks it against the enumerated minimum.

use omniscio::source::random_linear_source;
use omniscio::tightness::{check_bound, construct_partition_from_dual};
use omniscio::{capacity, ConstraintFamily, EntropyOracle, SubsetMask};

fn main() -> omniscio::Result<()> {
    for seed in 0..8 {
        let m = 3 + (seed as usize % 3);
        let src = random_linear_source(m, 4, 2, seed)?;
        let oracle = EntropyOracle::from_linear(src);
        let all = SubsetMask::full(m);
        let family = ConstraintFamily::build(m, all)?;
        let cap = capacity::r_co_with_family(&oracle, &family)?;
        let verdict = check_bound(&oracle, all)?;
        print!(
            "seed {seed} m={m}: C_SK = {:<5} tight = {:<5}",
            cap.c_sk.to_string(),
            verdict.tight
        );
        match construct_partition_from_dual(&oracle, &family, &cap.solution) {
            Ok(built) => println!(
                " dual partition {} from {} rows, I = {}",
                built.partition,
                built.retained.len(),
                built.dependence
            ),
            Err(e) => println!(" no dual partition: {e}"),
        }
    }
    Ok(())
}
