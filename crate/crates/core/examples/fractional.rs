//! The fractional derivative z^ε-weighted series against its integral form.

use cubesaw::critical::fractional_integral_check;

fn main() -> cubesaw::Result<()> {
    let coeffs: Vec<f64> = (0..=10).map(|n| 1.0 + 0.5 * n as f64).collect();
    for eps in [0.25, 0.5, 0.75] {
        let c = fractional_integral_check(&coeffs, eps, 0.6)?;
        println!(
            "ε = {eps}: series {:.12}, integral {:.12}, relative error {:.1e}",
            c.direct, c.integral, c.relative_error
        );
    }
    Ok(())
}
