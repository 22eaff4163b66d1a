//! Verified small orthogonal Latin hypercubes, one per run size, and the
//! on-disk cache format shared with user-discovered designs.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::tables::sixteen_run_olh;
use crate::design::{DesignMatrix, Recipe};
use crate::error::{Error, Result};

const EMBEDDED: &str = include_str!("../../data/catalog.json");

/// Largest known column counts for small run sizes; every catalog entry
/// must reach the count listed here.
pub const SMALL_RUN_TARGETS: [(usize, usize); 14] = [
    (4, 2),
    (5, 2),
    (7, 3),
    (8, 4),
    (9, 5),
    (11, 7),
    (12, 6),
    (13, 6),
    (15, 6),
    (16, 12),
    (17, 6),
    (19, 6),
    (20, 6),
    (21, 6),
];

pub fn small_run_target(n: usize) -> Option<usize> {
    SMALL_RUN_TARGETS
        .iter()
        .find(|&&(k, _)| k == n)
        .map(|&(_, m)| m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    EmbeddedTable,
    Search,
    DerivedRecipe,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::EmbeddedTable => "paper-table",
            Source::Search => "search",
            Source::DerivedRecipe => "derived-recipe",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub n: usize,
    pub m: usize,
    pub design: DesignMatrix,
    pub source: Source,
}

/// Serialized form: `{"n", "m", "doubled", "source"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DesignRecord {
    pub n: usize,
    pub m: usize,
    pub doubled: Vec<Vec<i64>>,
    pub source: Source,
}

impl DesignRecord {
    pub fn from_design(design: &DesignMatrix, source: Source) -> Self {
        Self {
            n: design.runs(),
            m: design.factors(),
            doubled: design.to_rows(),
            source,
        }
    }

    /// Rebuild the design, checking shape and the orthogonal Latin
    /// hypercube property.
    pub fn into_entry(self, name: &str) -> Result<CatalogEntry> {
        let design = DesignMatrix::from_rows(self.doubled)
            .map_err(|e| Error::Catalog(format!("{name}: {e}")))?;
        if (design.runs(), design.factors()) != (self.n, self.m) {
            return Err(Error::Catalog(format!(
                "{name}: labelled {}x{} but holds {}x{}",
                self.n,
                self.m,
                design.runs(),
                design.factors()
            )));
        }
        if !design.is_latin_hypercube() {
            return Err(Error::Catalog(format!("{name}: not a Latin hypercube")));
        }
        if !design.is_orthogonal() {
            return Err(Error::Catalog(format!("{name}: columns are not orthogonal")));
        }
        Ok(CatalogEntry {
            n: self.n,
            m: self.m,
            design: design.with_recipe(Recipe::seed(name)),
            source: self.source,
        })
    }
}

fn load_embedded() -> Result<Vec<CatalogEntry>> {
    let records: Vec<DesignRecord> = serde_json::from_str(EMBEDDED)?;
    let mut entries = vec![CatalogEntry {
        n: 16,
        m: 12,
        design: sixteen_run_olh(),
        source: Source::EmbeddedTable,
    }];
    for r in records {
        let name = format!("catalog{}x{}", r.n, r.m);
        entries.push(r.into_entry(&name)?);
    }
    entries.sort_by_key(|e| e.n);
    if entries.windows(2).any(|w| w[0].n == w[1].n) {
        return Err(Error::Catalog("duplicate run size".into()));
    }
    for &(n, m) in &SMALL_RUN_TARGETS {
        match entries.iter().find(|e| e.n == n) {
            Some(e) if e.m >= m => {}
            Some(e) => {
                return Err(Error::Catalog(format!(
                    "entry for n = {n} has {} columns, expected {m}",
                    e.m
                )))
            }
            None => return Err(Error::Catalog(format!("missing entry for n = {n}"))),
        }
    }
    Ok(entries)
}

/// All catalog entries, validated once on first use.
pub fn catalog() -> Result<&'static [CatalogEntry]> {
    static CATALOG: OnceLock<std::result::Result<Vec<CatalogEntry>, String>> = OnceLock::new();
    CATALOG
        .get_or_init(|| load_embedded().map_err(|e| e.to_string()))
        .as_deref()
        .map_err(|e| Error::Catalog(e.clone()))
}

/// The catalog design for `n` runs.
pub fn seed_olh(n: usize) -> Result<CatalogEntry> {
    catalog()?
        .iter()
        .find(|e| e.n == n)
        .cloned()
        .ok_or(Error::NotInCatalog(n))
}

/// `olh_{n}x{m}_{seed}.json` inside `dir`.
pub fn cache_path(dir: &Path, n: usize, m: usize, seed: u64) -> PathBuf {
    dir.join(format!("olh_{n}x{m}_{seed}.json"))
}

/// Write a design as a one-element catalog document.
pub fn store_cached(dir: &Path, design: &DesignMatrix, seed: u64) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, design.runs(), design.factors(), seed);
    let record = DesignRecord::from_design(design, Source::Search);
    fs::write(&path, serde_json::to_string(&[record])?)?;
    Ok(path)
}

/// Read back a cached design, or `None` if no file exists. Invalid files
/// are errors rather than silently ignored.
pub fn load_cached(dir: &Path, n: usize, m: usize, seed: u64) -> Result<Option<CatalogEntry>> {
    let path = cache_path(dir, n, m, seed);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path)?;
    let records: Vec<DesignRecord> = serde_json::from_str(&text)?;
    let [record] = <[DesignRecord; 1]>::try_from(records).map_err(|r| {
        Error::Catalog(format!(
            "{}: expected one design, found {}",
            path.display(),
            r.len()
        ))
    })?;
    let name = path
        .file_stem()
        .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let entry = record.into_entry(&name)?;
    if (entry.n, entry.m) != (n, m) {
        return Err(Error::Catalog(format!(
            "{}: holds a {}x{} design",
            path.display(),
            entry.n,
            entry.m
        )));
    }
    Ok(Some(entry))
}
