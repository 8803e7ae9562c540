//! π_m on a cube by two routes, and the recursion they feed.
//!
//! `cargo run --release --example recursion -- 3 7`

use cubesaw::lace::{pi_alternating, pi_direct_oracle, verify_recursion};
use cubesaw::saw::EnumConfig;
use cubesaw::Dim;

fn main() -> cubesaw::Result<()> {
    let args: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n = args.first().copied().unwrap_or(3);
    let steps = args.get(1).copied().unwrap_or(7);
    let dim = Dim::new(n)?;
    let cfg = EnumConfig::default();
    for m in 2..=steps.min(6) {
        let laces = pi_alternating(dim, m, &cfg)?;
        let graphs = pi_direct_oracle(dim, m, &cfg)?;
        let w: Vec<String> = laces.by_weight.iter().map(|v| v.to_string()).collect();
        println!("π_{m} by weight [{}]  agrees with connected graphs: {}", w.join(", "), laces == graphs);
    }
    let report = verify_recursion(dim, steps, &cfg)?;
    println!("recursion on Q^{n} up to n = {steps}: {} checks, passed = {}", report.checked, report.passed());
    Ok(())
}
