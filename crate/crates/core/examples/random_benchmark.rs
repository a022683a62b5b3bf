//! A small batch comparing cpe, cpe-d and hidden, written as CSV to stdout.
//! `beliefcnf bench --spec F --csv OUT` runs the same thing from a file.

use std::path::Path;

use beliefcnf::bench::{run_bench, write_csv, BenchSpec};

const SPEC: &str = r#"
seed = 100
instances = 5
vars = 25
max_family = 4
det_frac = 0.2
clauses = 8
obs = 3

[[runs]]
alg = "cpe"

[[runs]]
alg = "cpe"
i_bound = 3

[[runs]]
alg = "cpe-d"

[[runs]]
alg = "hidden"
"#;

fn main() -> beliefcnf::Result<()> {
    let spec = BenchSpec::parse(SPEC)?;
    let rows = run_bench(&spec, Path::new("."))?;
    write_csv(&rows, std::io::stdout().lock())
}
