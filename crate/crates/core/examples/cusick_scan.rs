//! The density Σ_{k>=0} δ_t(k) over a range of t, and its complement identity.

use blockdelta::cfengine::dist_window;
use blockdelta::gauss::cusick_density;
use blockdelta::rational::to_f64;
use blockdelta::Pattern;

fn main() -> blockdelta::Result<()> {
    let w: Pattern = "11".parse()?;
    let mut min = (f64::INFINITY, 0u128);
    for t in 0..1024u128 {
        let c = to_f64(&cusick_density(&w, t)?.lower);
        if c < min.0 {
            min = (c, t);
        }
    }
    println!("w = {w}: min over t < 1024 of c_t is {:.6} at t = {}", min.0, min.1);

    let w: Pattern = "011".parse()?;
    let wbar = w.negate();
    for t in [1u128, 7, 37, 100] {
        let a = cusick_density(&w, t)?.lower;
        let b = cusick_density(&wbar, t)?.lower;
        let zero = dist_window(&w, t, 0)?.remove(&0).unwrap_or_default();
        println!("w = {w}, t = {t:>3}: c = {a}, c̄ = {b}, c + c̄ - δ(0) = {}", &a + &b - zero);
    }

    // With a constant complement the density is an interval.
    let w: Pattern = "11".parse()?;
    let c = cusick_density(&w.negate(), 37)?;
    println!("w = 00, t = 37: c in [{:.12}, {:.12}]", to_f64(&c.lower), to_f64(&c.upper));
    Ok(())
}
