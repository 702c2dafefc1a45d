//! Variances v_t, the increments q_t and the bounds in terms of occ01(t).

use blockdelta::gauss::Constants;
use blockdelta::moments::{q_case, MomentTables};
use blockdelta::rational::{int, to_f64};
use blockdelta::words::blocks01;
use blockdelta::Pattern;

fn main() -> blockdelta::Result<()> {
    for w in ["01", "011", "0110"] {
        let w: Pattern = w.parse()?;
        let tables = MomentTables::new(&w)?;
        let c = Constants::new(w.len());
        let vs = tables.variance_table(64)?;
        println!("w = {w}   V_1 = {:?}", tables.v1().iter().map(|x| x.to_string()).collect::<Vec<_>>());
        for t in [1usize, 5, 21, 42, 63] {
            let n = int(blocks01(t as u128) as i64);
            println!(
                "  t = {t:>2}  v = {:<10} ({:.5})  q = {:<6} [{}]  {:.4} <= v <= {:.4}",
                vs[t].to_string(),
                to_f64(&vs[t]),
                tables.q(t as u128).to_string(),
                q_case(&w, t as u128),
                to_f64(&(c.m_exact() * &n)),
                to_f64(&(c.big_m_exact() * &n)),
            );
        }
    }
    Ok(())
}
