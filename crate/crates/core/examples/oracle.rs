//! The brute-force oracle over one period, checked against the
//! characteristic-function computation.

use blockdelta::cfengine::{default_eps, engine};
use blockdelta::direct::{empirical_dist_default, exact_lambda};
use blockdelta::Pattern;

fn main() -> blockdelta::Result<()> {
    for (w, t) in [("10", 5u128), ("011", 37), ("0110", 200), ("111", 6)] {
        let w: Pattern = w.parse()?;
        let lambda = exact_lambda(&w, t, 10)?;
        let oracle = empirical_dist_default(&w, t, 10, None)?;
        let dist = engine(&w)?.dist(t, &default_eps(), 10)?;
        println!(
            "w = {w:<5} t = {t:<4} λ = {lambda:<3} support = {:<3} agrees = {}",
            oracle.counts.len(),
            oracle.matches(&dist)
        );
    }
    let w: Pattern = "10".parse()?;
    println!("\n{}", empirical_dist_default(&w, 5, 0, None)?.to_json()?);
    Ok(())
}
