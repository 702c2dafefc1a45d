//! Gaussian approximation along t = (10)^N: the maximal pointwise error and
//! its normalization by (log N)² / N.

use blockdelta::gauss::compare;
use blockdelta::Pattern;

fn alternating(n: u32) -> u128 {
    (0..n).fold(0u128, |acc, _| (acc << 2) | 0b10)
}

fn main() -> blockdelta::Result<()> {
    for w in ["11", "011"] {
        let w: Pattern = w.parse()?;
        println!("w = {w}");
        println!("{:>4} {:>14} {:>14} {:>14}", "N", "v_t", "E_N", "E_N N/log²N");
        for n in [8u32, 16, 32, 64] {
            let report = compare(&w, alternating(n), None)?;
            let nf = n as f64;
            println!(
                "{n:>4} {:>14.6} {:>14.6e} {:>14.6e}",
                blockdelta::rational::to_f64(&report.v),
                report.max_error,
                report.max_error * nf / nf.ln().powi(2)
            );
        }
    }
    Ok(())
}
