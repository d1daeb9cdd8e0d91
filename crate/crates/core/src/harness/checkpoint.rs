//! Binary snapshots: `BMHD1`, then little-endian `u32 d, u32 n, f64 L,
//! f64 t, u32 field_count`, then per field a `u32` name length, the ASCII
//! name and `n^d` physical samples (`f64`, row-major).

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::models::{CompressibleState, IncompressibleState};
use crate::spectral::{dealias, project_p, GridSpec, SpectralField, VectorField};

pub const MAGIC: &[u8; 5] = b"BMHD1";

/// Named physical-space fields on one grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub d: u32,
    pub n: u32,
    pub period: f64,
    pub t: f64,
    pub fields: Vec<(String, Vec<f64>)>,
}

impl Checkpoint {
    pub fn field(&self, name: &str) -> Option<&[f64]> {
        self.fields
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_slice())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&self.d.to_le_bytes());
        out.extend_from_slice(&self.n.to_le_bytes());
        out.extend_from_slice(&self.period.to_le_bytes());
        out.extend_from_slice(&self.t.to_le_bytes());
        out.extend_from_slice(&(self.fields.len() as u32).to_le_bytes());
        for (name, data) in &self.fields {
            out.extend_from_slice(&(name.len() as u32).to_le_bytes());
            out.extend_from_slice(name.as_bytes());
            for x in data {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(MAGIC.len(), "magic")? != MAGIC {
            return Err(Error::BadMagic);
        }
        let d = r.u32("d")?;
        let n = r.u32("n")?;
        let period = r.f64("L")?;
        let t = r.f64("t")?;
        let count = r.u32("field_count")?;
        if d != 2 {
            return Err(Error::DimensionMismatch(format!("d = {d}, expected 2")));
        }
        let len = (n as usize)
            .checked_pow(d)
            .ok_or_else(|| Error::DimensionMismatch(format!("n = {n} overflows")))?;
        let mut fields = Vec::with_capacity(count as usize);
        for i in 0..count {
            let name_len = r.u32("name length")? as usize;
            let name = std::str::from_utf8(r.take(name_len, "name")?)
                .ok()
                .filter(|s| s.is_ascii())
                .ok_or_else(|| Error::Truncated(format!("field {i} name is not ASCII")))?
                .to_string();
            let raw = r.take(len * 8, &format!("samples of `{name}`"))?;
            let data = raw
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
                .collect();
            fields.push((name, data));
        }
        Ok(Checkpoint {
            d,
            n,
            period,
            t,
            fields,
        })
    }

    pub fn grid(&self, dealias_fraction: f64) -> Result<GridSpec> {
        GridSpec::new(self.n as usize, self.period)?.with_dealias_fraction(dealias_fraction)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, k: usize, what: &str) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(k).filter(|&e| e <= self.bytes.len());
        match end {
            Some(e) => {
                let s = &self.bytes[self.pos..e];
                self.pos = e;
                Ok(s)
            }
            None => Err(Error::Truncated(format!(
                "need {k} bytes for {what} at offset {}, file has {}",
                self.pos,
                self.bytes.len()
            ))),
        }
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(
            self.take(4, what)?.try_into().expect("4 bytes"),
        ))
    }

    fn f64(&mut self, what: &str) -> Result<f64> {
        Ok(f64::from_le_bytes(
            self.take(8, what)?.try_into().expect("8 bytes"),
        ))
    }
}

pub fn checkpoint_write(ck: &Checkpoint, path: impl AsRef<Path>) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(&ck.to_bytes())?;
    Ok(())
}

pub fn checkpoint_read(path: impl AsRef<Path>) -> Result<Checkpoint> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    Checkpoint::from_bytes(&bytes)
}

const NAMES: [&str; 9] = ["a", "u0", "u1", "b0", "b1", "U0", "U1", "B0", "B1"];

/// Snapshot of both systems at their shared time.
pub fn pair_checkpoint(comp: &CompressibleState, inc: &IncompressibleState) -> Result<Checkpoint> {
    let g = comp.grid();
    let fields = [
        &comp.a,
        comp.u.component(0),
        comp.u.component(1),
        comp.b.component(0),
        comp.b.component(1),
        inc.u.component(0),
        inc.u.component(1),
        inc.b.component(0),
        inc.b.component(1),
    ];
    let mut out = Vec::with_capacity(NAMES.len());
    for (name, f) in NAMES.iter().zip(fields) {
        out.push((name.to_string(), f.to_samples()?));
    }
    Ok(Checkpoint {
        d: g.d as u32,
        n: g.n as u32,
        period: g.period,
        t: comp.t,
        fields: out,
    })
}

/// Rebuilds both states, truncating and re-projecting as after a step.
pub fn states_from_checkpoint(
    ck: &Checkpoint,
    grid: &GridSpec,
) -> Result<(CompressibleState, IncompressibleState)> {
    if ck.n as usize != grid.n || ck.d as usize != grid.d || ck.period != grid.period {
        return Err(Error::DimensionMismatch(format!(
            "checkpoint grid (d={}, n={}, L={}) differs from configured (d={}, n={}, L={})",
            ck.d, ck.n, ck.period, grid.d, grid.n, grid.period
        )));
    }
    let get = |name: &str| -> Result<SpectralField> {
        let s = ck
            .field(name)
            .ok_or_else(|| Error::DimensionMismatch(format!("missing field `{name}`")))?;
        Ok(dealias(&SpectralField::from_samples(grid, s)?))
    };
    let pair = |x: &str, y: &str| -> Result<VectorField> {
        VectorField::from_components(vec![get(x)?, get(y)?])
    };
    let comp = CompressibleState {
        a: get("a")?,
        u: pair("u0", "u1")?,
        b: project_p(&pair("b0", "b1")?),
        t: ck.t,
    };
    let inc = IncompressibleState {
        u: project_p(&pair("U0", "U1")?),
        b: project_p(&pair("B0", "B1")?),
        t: ck.t,
    };
    Ok((comp, inc))
}
