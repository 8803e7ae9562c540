//! Walsh transform of the one-step distribution and of the random walk Green function.

use cubesaw::cube::{d_hat, inverse_walsh, rw_green, step_distribution, walsh_transform};
use cubesaw::Dim;
use num_rational::BigRational;

fn main() -> cubesaw::Result<()> {
    let dim = Dim::new(4)?;
    let dhat = walsh_transform(&step_distribution(dim)?);
    for k in dim.vertices().take(6) {
        println!("D̂({:04b}) = {:>5}   closed form {}", k.bits(), dhat.get(k).to_string(), d_hat(dim, k));
    }
    let p = BigRational::new(1.into(), 8.into());
    let c = rw_green(dim, &p)?;
    println!("C_p(0) at p = {p}: {}", c.get(cubesaw::Vertex(0)));
    let back = inverse_walsh(&walsh_transform(&c))?;
    println!("round trip exact: {}", back == c);
    Ok(())
}
