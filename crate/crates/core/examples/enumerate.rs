//! Count self-avoiding walks on a hypercube and print the per-length totals.
//!
//! `cargo run --release --example enumerate -- 4 15`

use cubesaw::saw::{count_saw, EnumConfig};
use cubesaw::Dim;

fn main() -> cubesaw::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: u32 = args.next().and_then(|a| a.parse().ok()).unwrap_or(4);
    let dim = Dim::new(n)?;
    let steps: usize = args
        .next()
        .and_then(|a| a.parse().ok())
        .unwrap_or((dim.volume() - 1) as usize);
    let start = std::time::Instant::now();
    let series = count_saw(dim, steps, &EnumConfig::default())?;
    for (i, c) in series.coefficients().iter().enumerate() {
        println!("c_{i} = {c}");
    }
    eprintln!("elapsed: {:.2?}", start.elapsed());
    Ok(())
}
