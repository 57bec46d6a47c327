//! Terminals sharing a core of `c` bits plus private petals: every admissible
//! partition has dependence exactly `c`.

use omniscio::dependence::mutual_dependence_bound;
use omniscio::source::make_sunflower;
use omniscio::{EntropyOracle, SubsetMask};

fn main() -> omniscio::Result<()> {
    for m in 2..=4 {
        for c in 0..=2 {
            for p in 0..=1 {
                let oracle = EntropyOracle::from_linear(make_sunflower(m, c, p)?);
                let b = mutual_dependence_bound(&oracle, SubsetMask::full(m))?;
                println!(
                    "m={m} core={c} petals={p}: I(M) = {}, {}/{} partitions minimize",
                    b.value,
                    b.minimizers.len(),
                    b.partitions_examined
                );
            }
        }
    }
    Ok(())
}
