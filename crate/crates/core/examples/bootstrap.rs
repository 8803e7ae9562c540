//! Bootstrap functions f_1, f_2, f_3 along z up to z_N.

use cubesaw::critical::{bootstrap_diagnostics, solve_critical, DEFAULT_TOL};
use cubesaw::saw::{count_saw_by_endpoint, EnumConfig, Truncation};
use cubesaw::Dim;
use num_rational::BigRational;

fn main() -> cubesaw::Result<()> {
    let dim = Dim::new(4)?;
    let profile = count_saw_by_endpoint(dim, Truncation::Full.max_steps(dim)?, &EnumConfig::default())?;
    let cp = solve_critical(&profile.series(), &BigRational::from_integer(1.into()), DEFAULT_TOL)?;
    println!("Q^4, λ = 1, z_N = {:.12}", cp.z);
    println!("   z/z_N      f_1       f_2       f_3");
    for i in 1..=5 {
        let z = &cp.z_exact * BigRational::new(i.into(), 5.into());
        let b = bootstrap_diagnostics(&cp, &profile, &z)?;
        println!("   {:.1}    {:.6}  {:.6}  {:.6}", i as f64 / 5.0, b.f1, b.f2, b.f3);
    }
    Ok(())
}
