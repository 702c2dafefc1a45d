//! On-disk persistence of `Γ` descent tables.
//!
//! Layout (little endian):
//!
//! ```text
//! "BDLT1"  pattern:str  count:u64  { t:u128  Γ_t  Γ_{t+1} }*
//! vector   = dim:u32 { d:u8 σ:i8 terms:u32 { exp:i64 num:int den:int }* }*
//! str, int = len:u32 bytes   (int as signed little-endian two's complement)
//! ```

use std::fs;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use crate::cfengine::{CFVector, CfEngine};
use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, RationalCF};
use crate::rational::Q;
use crate::words::Pattern;

pub const MAGIC: &[u8; 5] = b"BDLT1";
/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "BLOCKDELTA_CACHE_DIR";

pub fn cache_path(dir: &Path, w: &Pattern) -> PathBuf {
    dir.join(format!("gamma-{w}.bdlt"))
}

fn put_bytes(out: &mut impl Write, b: &[u8]) -> io::Result<()> {
    out.write_all(&(b.len() as u32).to_le_bytes())?;
    out.write_all(b)
}

fn put_vector(out: &mut impl Write, v: &CFVector) -> io::Result<()> {
    out.write_all(&(v.dim() as u32).to_le_bytes())?;
    for e in v.entries() {
        out.write_all(&[e.denom_exponent(), e.denom_sign() as u8])?;
        let coeffs = e.numerator().coeffs();
        out.write_all(&(coeffs.len() as u32).to_le_bytes())?;
        for (&k, c) in coeffs {
            out.write_all(&k.to_le_bytes())?;
            put_bytes(out, &c.numer().to_signed_bytes_le())?;
            put_bytes(out, &c.denom().to_signed_bytes_le())?;
        }
    }
    Ok(())
}

pub fn write_table(out: &mut impl Write, w: &Pattern, entries: &[(u128, (CFVector, CFVector))]) -> Result<()> {
    out.write_all(MAGIC)?;
    put_bytes(out, w.to_string().as_bytes())?;
    out.write_all(&(entries.len() as u64).to_le_bytes())?;
    for (t, (a, b)) in entries {
        out.write_all(&t.to_le_bytes())?;
        put_vector(out, a)?;
        put_vector(out, b)?;
    }
    Ok(())
}

fn corrupt(what: &str) -> Error {
    Error::InvalidArgument(format!("corrupt cache file: {what}"))
}

fn take<const N: usize>(input: &mut impl Read) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    input.read_exact(&mut buf).map_err(|_| corrupt("truncated"))?;
    Ok(buf)
}

fn take_bytes(input: &mut impl Read) -> Result<Vec<u8>> {
    let len = u32::from_le_bytes(take(input)?) as usize;
    if len > 1 << 24 {
        return Err(corrupt("oversized field"));
    }
    let mut buf = vec![0u8; len];
    input.read_exact(&mut buf).map_err(|_| corrupt("truncated"))?;
    Ok(buf)
}

fn take_vector(input: &mut impl Read, dim: usize) -> Result<CFVector> {
    let stored = u32::from_le_bytes(take(input)?) as usize;
    if stored != dim {
        return Err(corrupt("vector dimension"));
    }
    let mut entries = Vec::with_capacity(dim);
    for _ in 0..dim {
        let [d, s] = take::<2>(input)?;
        let terms = u32::from_le_bytes(take(input)?);
        let mut coeffs = Vec::with_capacity(terms as usize);
        for _ in 0..terms {
            let k = i64::from_le_bytes(take(input)?);
            let num = BigInt::from_signed_bytes_le(&take_bytes(input)?);
            let den = BigInt::from_signed_bytes_le(&take_bytes(input)?);
            if den == BigInt::from(0) {
                return Err(corrupt("zero denominator"));
            }
            coeffs.push((k, Q::new(num, den)));
        }
        entries.push(RationalCF::from_parts(LaurentPoly::from_coeffs(coeffs), d, s as i8)?);
    }
    Ok(CFVector::from_entries(entries))
}

pub fn read_table(input: &mut impl Read, w: &Pattern) -> Result<Vec<(u128, (CFVector, CFVector))>> {
    if &take::<5>(input)? != MAGIC {
        return Err(corrupt("bad magic"));
    }
    if take_bytes(input)? != w.to_string().as_bytes() {
        return Err(corrupt("pattern mismatch"));
    }
    let count = u64::from_le_bytes(take(input)?);
    let dim = w.residues();
    let mut out = Vec::new();
    for _ in 0..count {
        let t = u128::from_le_bytes(take(input)?);
        let a = take_vector(input, dim)?;
        let b = take_vector(input, dim)?;
        out.push((t, (a, b)));
    }
    Ok(out)
}

/// Loads a saved table into `engine`; a missing file is not an error.
pub fn load(dir: &Path, engine: &CfEngine) -> Result<usize> {
    let path = cache_path(dir, engine.pattern());
    let file = match fs::File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
        Err(e) => return Err(e.into()),
    };
    let entries = read_table(&mut BufReader::new(file), engine.pattern())?;
    let n = entries.len();
    for (t, pair) in entries {
        engine.cache_insert(t, pair);
    }
    Ok(n)
}

/// Writes the engine's table, replacing the file atomically.
pub fn save(dir: &Path, engine: &CfEngine) -> Result<usize> {
    fs::create_dir_all(dir)?;
    let mut entries = engine.cache_snapshot();
    entries.sort_by_key(|(t, _)| *t);
    let path = cache_path(dir, engine.pattern());
    let tmp = path.with_extension("bdlt.tmp");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        write_table(&mut out, engine.pattern(), &entries)?;
        out.flush()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(entries.len())
}
