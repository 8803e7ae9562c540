//! 1/N expansions of z_N, μ_N and A_N.
//!
//! `cargo run --release --example expansion -- [order] [builtin|enumerated]`

use std::time::Instant;

use cubesaw::expansion::{expand_amplitude_with, expand_mu_with, expand_z_with, CountSource};

fn main() -> cubesaw::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let order: usize = args.get(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    let source = match args.get(2).map(String::as_str) {
        Some("enumerated") => CountSource::Enumerated,
        _ => CountSource::Builtin,
    };
    let start = Instant::now();
    let z = expand_z_with(order, source)?;
    let z: Vec<String> = z.iter().map(|c| c.to_string()).collect();
    println!("z_N coefficients of N^-1..N^-{order}: [{}]", z.join(", "));
    println!("mu_N = {}", expand_mu_with(order, source)?.series);
    let a = expand_amplitude_with(order - 1, source)?;
    let a: Vec<String> = a.iter().map(|c| c.to_string()).collect();
    println!("A_N coefficients of N^0..N^-{}: [{}]", order - 1, a.join(", "));
    eprintln!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
