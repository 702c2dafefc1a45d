//! Exact distributions δ_t and their moments, including the infinite-support
//! case w = 0^ℓ where the expansion is truncated with a certified tail.

use blockdelta::cfengine::{default_eps, engine};
use blockdelta::rational::{to_f64, to_fraction_string};
use blockdelta::Pattern;

fn main() -> blockdelta::Result<()> {
    let w: Pattern = "011".parse()?;
    let eng = engine(&w)?;
    let t = 37;
    let dist = eng.dist(t, &default_eps(), 0)?;
    println!("δ_{t} for w = {w}:");
    for (k, p) in dist.support() {
        println!("  {k:>3}  {:>12}  {:.6}", to_fraction_string(p), to_f64(p));
    }
    println!("mean = {}, second moment = {}", eng.moment(t, 1)?, eng.moment(t, 2)?);
    println!("γ_t = {}", eng.char_fun(t)?);

    let zeros: Pattern = "00".parse()?;
    let d = engine(&zeros)?.dist(3, &default_eps(), 4)?;
    println!(
        "\nw = 00, t = 3: {} listed values, k in [{}, {}], tail {} on the {:?} side",
        d.support().len(),
        d.min_k().unwrap_or(0),
        d.max_k().unwrap_or(0),
        d.tail_bound(),
        d.tail_side()
    );
    Ok(())
}
