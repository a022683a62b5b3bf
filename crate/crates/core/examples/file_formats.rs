//! The network text format and DIMACS, written and read back.

use beliefcnf::io::{parse_dimacs_file, serialize_cnf_with, serialize_network_with};
use beliefcnf::{gen_instance, parse_network, NetworkParams, QueryParams};

fn main() -> beliefcnf::Result<()> {
    let (net, phi) = gen_instance(
        NetworkParams {
            vars: 5,
            max_family: 3,
            det_frac: 0.4,
        },
        QueryParams {
            clauses: 2,
            observations: 1,
        },
        7,
    )?;
    let header = vec!["example instance".to_string()];

    let net_text = serialize_network_with(&net, &header);
    let cnf_text = serialize_cnf_with(&phi, net.len(), &header);
    println!("{net_text}\n{cnf_text}");

    let dir = std::env::temp_dir().join("beliefcnf-file-formats");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("example.net"), &net_text)?;
    std::fs::write(dir.join("example.cnf"), &cnf_text)?;

    let back = parse_network(&std::fs::read_to_string(dir.join("example.net"))?)?;
    let cnf = parse_dimacs_file(&std::fs::read_to_string(dir.join("example.cnf"))?)?;
    assert_eq!(back, net);
    assert_eq!(cnf.formula, phi);
    println!("round trip ok, files in {}", dir.display());
    Ok(())
}
