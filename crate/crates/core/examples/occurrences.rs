//! Block counts and the differences d_t(n) for a few small cases.

use blockdelta::direct::d;
use blockdelta::words::{blocks01, occ};
use blockdelta::Pattern;

fn main() -> blockdelta::Result<()> {
    let w: Pattern = "011".parse()?;
    println!("occ_{w}(n) for n < 16:");
    for n in 0..16u128 {
        println!("  n = {n:>2} = {n:>5b}   occ = {}", occ(&w, n));
    }

    let t = 5;
    println!("\nd_t(n) = occ(n + {t}) - occ(n):");
    let row: Vec<String> = (0..24).map(|n| d(&w, t, n).to_string()).collect();
    println!("  {}", row.join(" "));

    // 0^ℓ includes a length correction, so d_t(n) stays bounded.
    let zeros: Pattern = "00".parse()?;
    let row: Vec<String> = (0..24).map(|n| d(&zeros, 1, n).to_string()).collect();
    println!("\nw = 00, t = 1:\n  {}", row.join(" "));

    for t in [0u128, 5, 0b1011_0111, 0b10_1010_1010] {
        println!("occ01({t:b}) = {}", blocks01(t));
    }
    Ok(())
}
