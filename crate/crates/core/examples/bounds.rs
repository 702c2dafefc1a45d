//! Grid checks of the characteristic-function bounds and the error budget.

use blockdelta::gauss::{check_prop_c, error_budget, grid_sweep, Constants};
use blockdelta::Pattern;

fn alternating(n: u32) -> u128 {
    (0..n).fold(0u128, |acc, _| (acc << 2) | 0b10)
}

fn main() -> blockdelta::Result<()> {
    for w in ["01", "011"] {
        let w: Pattern = w.parse()?;
        let c = Constants::new(w.len());
        println!("w = {w}: m = {:.3e}, M = {:.3}, L = {:.3e}, K(1) = {:.3}", c.m, c.big_m, c.l, c.k(1.0));
        let sweep = grid_sweep(&w, 256, 1.0, 501)?;
        let worst_b = sweep.iter().map(|g| g.prop_b).fold(f64::NEG_INFINITY, f64::max);
        let worst_c = sweep.iter().filter_map(|g| g.prop_c).fold(f64::NEG_INFINITY, f64::max);
        println!("  t < 256: worst near-zero margin {worst_b:.3e}, worst decay margin {worst_c:.3e} (<= 0 means verified on grid)");
        for n in [6u32, 9, 12] {
            let t = alternating(n);
            if let Some(margin) = check_prop_c(&w, t, 2001)? {
                println!("  t = (10)^{n}: decay margin {margin:.3e}");
            }
        }
    }
    let w: Pattern = "11".parse()?;
    for n in [4u32, 16, 64] {
        let b = error_budget(&w, alternating(n))?;
        println!(
            "N = {n:>2}: θ₀ = {:.4}, terms {:.3e} + {:.3e} + {:.3e} = {:.3e}",
            b.theta0, b.gaussian_tail, b.approximation, b.cf_tail, b.total
        );
    }
    Ok(())
}
