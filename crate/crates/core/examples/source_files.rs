//! Writes the builtin sources as JSON source files accepted by the
//! `omniscio` binary, then reads each back.
//!
//! `cargo run --example source_files -- <dir>` (defaults to the current
//! directory).

use std::path::PathBuf;

use omniscio::cli::{parse_source_file, SourceFile};
use omniscio::source::{make_counterexample, quoted_cardinality_table, LinearGF2Source};
use omniscio::{Source, SubsetMask};

fn main() -> omniscio::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let (xor, active) = make_counterexample();
    let shared = LinearGF2Source::from_bit_strings(1, &[vec!["1"], vec!["1"]])?;
    let files = [
        ("xor_pairs.json", Source::Linear(xor), active, true),
        (
            "cardinality_table.json",
            Source::Vector(quoted_cardinality_table()),
            active,
            false,
        ),
        (
            "shared_bit.json",
            Source::Linear(shared),
            SubsetMask::full(2),
            true,
        ),
    ];
    for (name, source, active, valid) in files {
        let path = dir.join(name);
        std::fs::write(
            &path,
            SourceFile::from_source(&source, active).to_json() + "\n",
        )?;
        let (oracle, _) = parse_source_file(&path, valid)?;
        println!(
            "{}: m = {}, H(X_M) = {}",
            path.display(),
            oracle.m(),
            oracle.h_full()
        );
    }
    Ok(())
}
