//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test --release --test acceptance`.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use blockdelta::cfengine::{build_a, build_b, build_c, default_eps, engine};
use blockdelta::direct::empirical_dist_default;
use blockdelta::gauss::{compare, grid_sweep};
use blockdelta::moments::{mean_vec, q_case, MomentTables, QCase};
use blockdelta::rational::{frac, int, pow2, to_f64, Q};
use blockdelta::words::blocks01;
use blockdelta::{Pattern, TailSide};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn patterns(lens: impl IntoIterator<Item = usize>) -> Vec<Pattern> {
    lens.into_iter().flat_map(Pattern::all_of_length).collect()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: blockdelta::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn oracle_equivalence() -> Outcome {
    let ws = patterns([2, 3, 4]);
    ensure(ws.len() == 28, || format!("expected 28 patterns, got {}", ws.len()))?;
    let kmax = 10;
    let cases: Vec<(Pattern, u128)> = ws.iter().flat_map(|w| (0..256u128).map(move |t| (w.clone(), t))).collect();
    cases.par_iter().try_for_each(|(w, t)| -> Result<(), String> {
        let oracle = lib(empirical_dist_default(w, *t, kmax, None))?;
        let dist = lib(lib(engine(w))?.dist(*t, &default_eps(), kmax))?;
        ensure(oracle.exact, || format!("oracle inexact for w={w}, t={t}"))?;
        ensure(oracle.matches(&dist), || format!("mismatch for w={w}, t={t}"))?;
        let expected_side = if *t == 0 || !w.is_constant() {
            TailSide::None
        } else if w.is_zeros() {
            TailSide::Above
        } else {
            TailSide::Below
        };
        ensure(dist.tail_side() == expected_side, || {
            format!("tail side {:?} for w={w}, t={t}", dist.tail_side())
        })?;
        ensure(&dist.total() + dist.tail_bound() == int(1), || format!("mass for w={w}, t={t}"))?;
        Ok(())
    })?;
    Ok(format!("{} (w, t) pairs equal exactly", cases.len()))
}

fn moment_identities() -> Outcome {
    let ws = patterns(2..=5);
    let mut checked = 0;
    for w in &ws {
        let l = w.len() as i64;
        let tables = lib(MomentTables::new(w))?;
        let bound = int(1) - pow2(1 - l);
        for t in 0..(1u128 << l) {
            let direct = mean_vec(w, t);
            let rec = lib(tables.mean_vec_rec(t))?;
            ensure(direct == rec, || format!("mean vectors differ for w={w}, t={t}"))?;
            ensure(direct.sum().is_zero(), || format!("sum of means nonzero for w={w}, t={t}"))?;
            ensure(direct.max_abs() <= bound, || format!("mean too large for w={w}, t={t}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (w, t) pairs"))
}

fn q_values() -> Outcome {
    let mut checked = 0;
    let mut seen_ii = 0;
    let mut seen_iii = 0;
    for w in patterns(2..=6) {
        let l = w.len() as i64;
        let tables = lib(MomentTables::new(&w))?;
        let modulus = 1u128 << l;
        for t in (0..4 * modulus).step_by(modulus as usize) {
            ensure(tables.q(t).is_zero(), || format!("q_{t} nonzero for w={w}"))?;
        }
        if w.to_string() == "01" || w.to_string() == "10" {
            let got: Vec<Q> = (0..4).map(|t| tables.q(t).clone()).collect();
            let want = vec![int(0), frac(1, 4), int(0), frac(1, 4)];
            ensure(got == want, || format!("q_0..q_3 for w={w} are {got:?}"))?;
        }
        for t in 0..modulus {
            let q = tables.q(t);
            ensure(q < &(int(3) * pow2(1 - l)), || format!("q_{t} = {q} too large for w={w}"))?;
            match q_case(&w, t) {
                QCase::Generic => ensure(q >= &pow2(-(l + 1)), || format!("q_{t} = {q} too small for w={w}"))?,
                QCase::Ii if (3..=5).contains(&l) => {
                    let want = pow2(1 - l) * (pow2(2 - l) - int(1));
                    ensure(q == &want, || format!("case (ii) q_{t} = {q} for w={w}, want {want}"))?;
                    seen_ii += 1;
                }
                QCase::Iii if (3..=5).contains(&l) => {
                    ensure(q == &pow2(2 - 2 * l), || format!("case (iii) q_{t} = {q} for w={w}"))?;
                    seen_iii += 1;
                }
                _ => {}
            }
            checked += 1;
        }
    }
    ensure(seen_ii > 0 && seen_iii > 0, || "cases (ii)/(iii) never occurred".into())?;
    Ok(format!("{checked} residues, {seen_ii} in case (ii), {seen_iii} in case (iii)"))
}

const TMAX: usize = 10_000;

fn variance_bounds() -> Outcome {
    let ws = patterns(2..=5);
    let checked: usize = ws
        .par_iter()
        .map(|w| -> Result<usize, String> {
            let l = w.len() as i64;
            let vs = lib(lib(MomentTables::new(w))?.variance_table(TMAX))?;
            let lower = pow2(-2 * (l - 1));
            let upper = int(3 * (l + 2)) * pow2(2 - l);
            let special = w.to_string() == "01" || w.to_string() == "10";
            for (t, v) in vs.iter().enumerate() {
                let n = int(blocks01(t as u128) as i64);
                ensure(&lower * &n <= *v && *v <= &upper * &n, || format!("v_{t} = {v} outside bounds for w={w}"))?;
                if special {
                    ensure(*v >= &n * frac(1, 4), || format!("v_{t} < occ01/4 for w={w}"))?;
                    if 2 * t < TMAX {
                        ensure(vs[2 * t] == *v, || format!("v_{{2t}} != v_t at t={t}, w={w}"))?;
                    }
                }
            }
            Ok(vs.len())
        })
        .sum::<Result<usize, String>>()?;
    Ok(format!("{checked} (w, t) pairs, {} patterns", ws.len()))
}

fn stability_bounds() -> Outcome {
    let ws = patterns(2..=5);
    let checked: usize = ws
        .par_iter()
        .map(|w| -> Result<usize, String> {
            let l = w.len() as i64;
            let tables = lib(MomentTables::new(w))?;
            let vs = lib(tables.variance_table(TMAX))?;
            let step = pow2(4 - l);
            for (t, pair) in vs.windows(2).enumerate() {
                let diff = (&pair[1] - &pair[0]).abs();
                ensure(diff <= step, || format!("|v_{} - v_{t}| = {diff} for w={w}", t + 1))?;
            }
            let vv = lib(tables.v_vec_table(TMAX))?;
            for (t, v) in vv.iter().enumerate() {
                ensure(v.spread() <= int(16), || format!("spread of V_{t} is {} for w={w}", v.spread()))?;
            }
            Ok(vs.len())
        })
        .sum::<Result<usize, String>>()?;
    Ok(format!("{checked} (w, t) pairs"))
}

fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Q::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                .collect()
        })
        .collect()
}

fn cf_checks() -> Outcome {
    // Characteristic function against its coefficients.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let ws = patterns(2..=5);
    let mut worst = 0f64;
    let tight = pow2(-60);
    for _ in 0..50 {
        let w = &ws[rng.gen_range(0..ws.len())];
        let t: u128 = rng.gen_range(0..1u128 << 20);
        let eng = lib(engine(w))?;
        let dist = lib(eng.dist(t, &tight, 0))?;
        let coeffs: Vec<(f64, f64)> = dist.support().iter().map(|(&k, p)| (k as f64, to_f64(p))).collect();
        for i in 0..1000 {
            let theta = -PI + 2.0 * PI * i as f64 / 999.0;
            let direct: Complex64 = coeffs.iter().map(|&(k, p)| Complex64::from_polar(p, k * theta)).sum();
            let err = (lib(eng.eval_cf(t, theta))? - direct).norm();
            worst = worst.max(err);
        }
    }
    ensure(worst <= 1e-10, || format!("eval_cf differs from coefficient sum by {worst:e}"))?;

    // Products of B and C at z = 1.
    let mut products = 0;
    for l in 2..=4usize {
        let w = &Pattern::all_of_length(l)[0];
        let dim = 1usize << (l - 1);
        let b = build_b(w, 0).at_one();
        let c = build_c(w, 0).at_one();
        for h in 1..=6u32 {
            for eps in 0..(1usize << h) {
                let mut prod = if eps & 1 == 0 { b.clone() } else { c.clone() };
                for i in 1..h {
                    prod = mat_mul(&prod, if (eps >> i) & 1 == 0 { &b } else { &c });
                }
                let weight = pow2(-(h as i64));
                for (j, row) in prod.iter().enumerate() {
                    for (k, x) in row.iter().enumerate() {
                        let hit = j == ((k << h) + eps) % dim;
                        let want = if hit { weight.clone() } else { Q::zero() };
                        ensure(*x == want, || format!("product entry ({j},{k}) for l={l}, h={h}, eps={eps:b}"))?;
                    }
                }
                products += 1;
            }
            if h as usize >= l - 1 {
                let a = build_a(w, 0).at_one();
                let mut power = a.clone();
                for _ in 1..h {
                    power = mat_mul(&power, &a);
                }
                let want = pow2(1 - l as i64);
                ensure(power.iter().flatten().all(|x| *x == want), || format!("A^{h} not flat for l={l}"))?;
            }
        }
    }

    // Entries of Γ_{2^k t} coincide once k >= 2ℓ - 2.
    let mut vectors = 0;
    for w in patterns(2..=4) {
        let eng = lib(engine(&w))?;
        let k0 = 2 * w.len() as u32 - 2;
        for t in 1..40u128 {
            for k in k0..k0 + 3 {
                let g = lib(eng.gamma(t << k))?;
                let first = &g.entries()[0];
                ensure(g.entries().iter().all(|e| e == first), || {
                    format!("Γ entries differ for w={w}, t={t}, k={k}")
                })?;
                vectors += 1;
            }
        }
    }
    Ok(format!(
        "max |eval_cf - sum| = {worst:.2e}; {products} matrix products; {vectors} vectors Γ_(2^k t)"
    ))
}

fn grid_bounds() -> Outcome {
    let ws = patterns([2, 3]);
    let mut checked_b = 0;
    let mut checked_c = 0;
    for w in &ws {
        let sweep = lib(grid_sweep(w, 512, 1.0, 2001))?;
        for g in &sweep {
            ensure(g.prop_b <= 0.0, || format!("near-zero bound violated by {:e} for w={w}, t={}", g.prop_b, g.t))?;
            checked_b += 1;
            if let Some(c) = g.prop_c {
                ensure(c <= 0.0, || format!("decay bound violated by {c:e} for w={w}, t={}", g.t))?;
                checked_c += 1;
            }
        }
    }
    Ok(format!(
        "verified on grid: {checked_b} near-zero checks, {checked_c} decay checks (others have occ01(t) < l+3)"
    ))
}

fn alternating(n: u32) -> u128 {
    (0..n).fold(0u128, |acc, _| (acc << 2) | 0b10)
}

fn scaling() -> Outcome {
    let mut lines = Vec::new();
    for w in ["11", "011"] {
        let w: Pattern = w.parse().unwrap();
        let ns = [8u32, 16, 32, 64];
        let errors: Vec<f64> = ns
            .par_iter()
            .map(|&n| lib(compare(&w, alternating(n), None)).map(|r| r.max_error))
            .collect::<Result<_, _>>()?;
        let scaled: Vec<f64> = ns
            .iter()
            .zip(&errors)
            .map(|(&n, e)| e * n as f64 / (n as f64).ln().powi(2))
            .collect();
        for i in 1..scaled.len() {
            ensure(scaled[i] <= 1.5 * scaled[i - 1], || {
                format!("w={w}: scaled error rises from {:.3e} to {:.3e}", scaled[i - 1], scaled[i])
            })?;
        }
        ensure(errors[3] < errors[0], || format!("w={w}: E_64 = {:.3e} >= E_8 = {:.3e}", errors[3], errors[0]))?;
        let cells: Vec<String> = scaled.iter().map(|s| format!("{s:.2e}")).collect();
        lines.push(format!("w={w} E_N N/log^2 N = [{}]", cells.join(", ")));
    }
    Ok(lines.join("; "))
}

fn symmetry() -> Outcome {
    let ws = patterns(2..=4);
    let radius = 10;
    let cases: Vec<(Pattern, u128)> = ws.iter().flat_map(|w| (0..256u128).map(move |t| (w.clone(), t))).collect();
    cases.par_iter().try_for_each(|(w, t)| -> Result<(), String> {
        let wbar = w.negate();
        let a = lib(engine(w))?;
        let b = lib(engine(&wbar))?;
        let d = lib(a.dist(*t, &default_eps(), radius))?;
        let e = lib(b.dist(*t, &default_eps(), radius))?;
        if w.is_constant() {
            ensure(d.reflect().window(radius) == e.window(radius), || format!("w={w}, t={t}"))?;
            let m1 = (lib(a.moment(*t, 1))?, lib(b.moment(*t, 1))?);
            let m2 = (lib(a.moment(*t, 2))?, lib(b.moment(*t, 2))?);
            ensure(m1.0 == -m1.1 && m2.0 == m2.1, || format!("moments for w={w}, t={t}"))?;
        } else {
            ensure(d.reflect() == e, || format!("w={w}, t={t}"))?;
        }
        Ok(())
    })?;
    Ok(format!("{} (w, t) pairs", cases.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 oracle equivalence", oracle_equivalence),
        ("2 moment identities", moment_identities),
        ("3 q_t values", q_values),
        ("4 variance bounds", variance_bounds),
        ("5 stability bounds", stability_bounds),
        ("6 characteristic function checks", cf_checks),
        ("7 analytic bounds on grids", grid_bounds),
        ("8 scaling along (10)^N", scaling),
        ("9 symmetry", symmetry),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
