//! Critical point, linearization and bootstrap functions on a small cube.
//!
//! `cargo run --release --example critical -- 3 1 1/3`

use cubesaw::cli::parse_rational;
use cubesaw::critical::{bootstrap_diagnostics, linearize, solve_critical, DEFAULT_TOL};
use cubesaw::saw::{count_saw_by_endpoint, EnumConfig, Truncation};
use cubesaw::Dim;
use num_traits::ToPrimitive;

fn main() -> cubesaw::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: u32 = args.first().and_then(|a| a.parse().ok()).unwrap_or(3);
    let lambda = args.get(1).and_then(|a| parse_rational(a)).unwrap_or_else(|| num_rational::BigRational::from_integer(1.into()));
    let p = args.get(2).and_then(|a| parse_rational(a)).unwrap_or_else(|| num_rational::BigRational::new(1.into(), 3.into()));
    let dim = Dim::new(n)?;
    let profile = count_saw_by_endpoint(dim, Truncation::Full.max_steps(dim)?, &EnumConfig::default())?;
    let series = profile.series();
    let cp = solve_critical(&series, &lambda, DEFAULT_TOL)?;
    println!("N = {n}, λ = {lambda}");
    let width = &cp.bracket.1 - &cp.bracket.0;
    println!("z_N = {:.15}  (bracket width {})", cp.z, width);
    println!("μ_N = {:.15}", cp.mu);
    let lin = linearize(&series, &cp, &p)?;
    println!("ζ_p = {:.15}  exact: {}", lin.zeta_p.to_f64(), lin.zeta_p.exact);
    println!("A_N = {:.12}", lin.amplitude.to_f64().unwrap_or(f64::NAN));
    println!("(β/α) z_N = {:.12}", lin.growth_over_mu(&cp));
    let boot = bootstrap_diagnostics(&cp, &profile, &lin.zeta_p.value)?;
    println!("f_1 = {:.6}  f_2 = {:.6}  f_3 = {:.6}  p_z = {:.6}", boot.f1, boot.f2, boot.f3, boot.p_z);
    Ok(())
}
