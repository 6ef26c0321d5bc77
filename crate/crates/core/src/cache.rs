//! On-disk cache of mod-`p` power tables, one JSON document per `(p, m, e)`.
//! Entries are validated on load and rebuilt when they do not check out.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padic::{find_generator, DlogTable, GeneratorPair, PrecisionContext};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub p: u64,
    pub m: u32,
    pub e: u64,
    /// Modulus of the stored table (`p`).
    pub modulus: u64,
    pub order: u64,
    pub powers: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Built,
    /// A stored file failed validation and was replaced.
    Rebuilt,
}

/// Summary line for `cache inspect`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CacheListing {
    pub file: String,
    pub valid: bool,
    pub p: Option<u64>,
    pub m: Option<u32>,
    pub e: Option<u64>,
    pub order: Option<u64>,
}

pub struct DlogCache {
    dir: PathBuf,
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

impl DlogCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DlogCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn file_name(p: u64, m: u32, e: u64) -> String {
        format!("dlog_p{p}_m{m}_e{e}.json")
    }

    pub fn path(&self, p: u64, m: u32, e: u64) -> PathBuf {
        self.dir.join(Self::file_name(p, m, e))
    }

    fn read(&self, p: u64, m: u32, e: u64) -> Option<DlogTable> {
        let text = fs::read_to_string(self.path(p, m, e)).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        if entry.p != p || entry.m != m || entry.e != e || entry.modulus != p {
            return None;
        }
        let table = DlogTable::from_powers(e % p, p, entry.powers).ok()?;
        (table.order() == entry.order && entry.order == p - 1).then_some(table)
    }

    fn write(&self, p: u64, m: u32, e: u64, table: &DlogTable) -> Result<()> {
        fs::create_dir_all(&self.dir).map_err(io)?;
        let entry = CacheEntry { p, m, e, modulus: p, order: table.order(), powers: table.powers.clone() };
        let path = self.path(p, m, e);
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, serde_json::to_string(&entry).expect("entry serializes")).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }

    /// Generator pair for `ctx` with its table loaded from, or stored to, the cache.
    pub fn generator(&self, ctx: &PrecisionContext) -> Result<(GeneratorPair, CacheStatus)> {
        let gp = find_generator(ctx)?;
        let (p, m, e) = (ctx.p, ctx.m, gp.e.rep());
        let existed = self.path(p, m, e).exists();
        if let Some(table) = self.read(p, m, e) {
            return Ok((gp.with_table(table)?, CacheStatus::Hit));
        }
        let table = gp.dlog_table().clone();
        self.write(p, m, e, &table)?;
        Ok((gp, if existed { CacheStatus::Rebuilt } else { CacheStatus::Built }))
    }

    pub fn inspect(&self) -> Result<Vec<CacheListing>> {
        let mut out = Vec::new();
        let rd = match fs::read_dir(&self.dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(io(e)),
        };
        for ent in rd {
            let ent = ent.map_err(io)?;
            let name = ent.file_name().to_string_lossy().into_owned();
            if !name.starts_with("dlog_") || !name.ends_with(".json") {
                continue;
            }
            let parsed: Option<CacheEntry> =
                fs::read_to_string(ent.path()).ok().and_then(|t| serde_json::from_str(&t).ok());
            let valid = parsed.as_ref().is_some_and(|c| self.read(c.p, c.m, c.e).is_some() && name == Self::file_name(c.p, c.m, c.e));
            out.push(CacheListing {
                file: name,
                valid,
                p: parsed.as_ref().map(|c| c.p),
                m: parsed.as_ref().map(|c| c.m),
                e: parsed.as_ref().map(|c| c.e),
                order: parsed.as_ref().map(|c| c.order),
            });
        }
        out.sort_by(|a, b| a.file.cmp(&b.file));
        Ok(out)
    }

    /// Removes every cache file; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let listing = self.inspect()?;
        for l in &listing {
            fs::remove_file(self.dir.join(&l.file)).map_err(io)?;
        }
        Ok(listing.len())
    }
}
