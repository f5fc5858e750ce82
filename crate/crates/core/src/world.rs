//! Read-only model of the open world: countries, indicators and the time
//! series observed for (country, indicator) pairs.
//!
//! A [`WorldSnapshot`] is immutable once built. Programs never mutate it;
//! "changing the world" means building a new snapshot (see
//! [`crate::harness::Mutation`]).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::diag::{codes, Diagnostic, SourceSpan};

/// One observation series: `(year, value)` pairs in fixture order.
pub type Series = Vec<(i64, f64)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entity {
    pub code: String,
    pub name: String,
}

impl Entity {
    pub fn new(code: impl Into<String>, name: impl Into<String>) -> Self {
        Entity {
            code: code.into(),
            name: name.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueEntry {
    pub country: String,
    pub indicator: String,
    pub series: Series,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WorldFile {
    countries: Vec<Entity>,
    indicators: Vec<Entity>,
    values: Vec<ValueEntry>,
}

#[derive(Debug, thiserror::Error)]
pub enum WorldLoadError {
    #[error("cannot read world file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed world document: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone)]
pub struct WorldSnapshot {
    countries: Vec<Entity>,
    indicators: Vec<Entity>,
    values: Vec<ValueEntry>,
    index: HashMap<(String, String), usize>,
}

impl WorldSnapshot {
    pub fn new(countries: Vec<Entity>, indicators: Vec<Entity>, values: Vec<ValueEntry>) -> Self {
        let mut index = HashMap::new();
        for (i, v) in values.iter().enumerate() {
            index.entry((v.country.clone(), v.indicator.clone())).or_insert(i);
        }
        WorldSnapshot {
            countries,
            indicators,
            values,
            index,
        }
    }

    pub fn empty() -> Self {
        WorldSnapshot::new(Vec::new(), Vec::new(), Vec::new())
    }

    pub fn from_json(text: &str) -> Result<Self, WorldLoadError> {
        let file: WorldFile = serde_json::from_str(text)?;
        Ok(WorldSnapshot::new(file.countries, file.indicators, file.values))
    }

    pub fn load(path: &Path) -> Result<Self, WorldLoadError> {
        let text = std::fs::read_to_string(path).map_err(|source| WorldLoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        WorldSnapshot::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        let file = WorldFile {
            countries: self.countries.clone(),
            indicators: self.indicators.clone(),
            values: self.values.clone(),
        };
        serde_json::to_string_pretty(&file).expect("world snapshot serializes")
    }

    pub fn countries(&self) -> &[Entity] {
        &self.countries
    }

    pub fn indicators(&self) -> &[Entity] {
        &self.indicators
    }

    pub fn values(&self) -> &[ValueEntry] {
        &self.values
    }

    pub fn country(&self, code: &str) -> Option<&Entity> {
        self.countries.iter().find(|c| c.code == code)
    }

    pub fn indicator(&self, code: &str) -> Option<&Entity> {
        self.indicators.iter().find(|c| c.code == code)
    }

    /// The stored series iff `(country, indicator)` is in the domain of the
    /// value mapping.
    pub fn lookup(&self, country: &str, indicator: &str) -> Option<&Series> {
        self.index
            .get(&(country.to_string(), indicator.to_string()))
            .map(|&i| &self.values[i].series)
    }

    /// The domain of the value mapping.
    pub fn pairs(&self) -> BTreeSet<(String, String)> {
        self.index.keys().cloned().collect()
    }

    /// Content hash over the canonical (sorted) form.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for c in self.sorted_entities(&self.countries) {
            h.update(format!("c\0{}\0{}\n", c.code, c.name));
        }
        for i in self.sorted_entities(&self.indicators) {
            h.update(format!("i\0{}\0{}\n", i.code, i.name));
        }
        for ((c, i), s) in self.sorted_values() {
            h.update(format!("v\0{c}\0{i}\0"));
            for (y, v) in s {
                h.update(format!("{y}:{:016x};", v.to_bits()));
            }
            h.update("\n");
        }
        hex::encode(h.finalize())
    }

    fn sorted_entities<'a>(&self, es: &'a [Entity]) -> Vec<&'a Entity> {
        let mut v: Vec<_> = es.iter().collect();
        v.sort();
        v
    }

    fn sorted_values(&self) -> BTreeMap<(&str, &str), &Series> {
        self.values
            .iter()
            .map(|v| ((v.country.as_str(), v.indicator.as_str()), &v.series))
            .collect()
    }
}

/// Extensional equality: declaration order does not matter.
impl PartialEq for WorldSnapshot {
    fn eq(&self, other: &Self) -> bool {
        self.sorted_entities(&self.countries) == other.sorted_entities(&other.countries)
            && self.sorted_entities(&self.indicators) == other.sorted_entities(&other.indicators)
            && self.sorted_values() == other.sorted_values()
    }
}

/// Checks the snapshot invariants; one diagnostic per violation.
pub fn validate_world(snapshot: &WorldSnapshot) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let span = SourceSpan::DUMMY;
    let mut seen = BTreeSet::new();
    for c in &snapshot.countries {
        if !seen.insert(c.code.as_str()) {
            diags.push(Diagnostic::error(
                codes::WORLD_DUP_COUNTRY,
                span,
                format!("duplicate country code {:?}", c.code),
            ));
        }
    }
    let mut seen = BTreeSet::new();
    for i in &snapshot.indicators {
        if !seen.insert(i.code.as_str()) {
            diags.push(Diagnostic::error(
                codes::WORLD_DUP_INDICATOR,
                span,
                format!("duplicate indicator code {:?}", i.code),
            ));
        }
    }
    let mut seen = BTreeSet::new();
    for v in &snapshot.values {
        if snapshot.country(&v.country).is_none() {
            diags.push(Diagnostic::error(
                codes::WORLD_DANGLING_KEY,
                span,
                format!("value keyed by undeclared country {:?}", v.country),
            ));
        }
        if snapshot.indicator(&v.indicator).is_none() {
            diags.push(Diagnostic::error(
                codes::WORLD_DANGLING_KEY,
                span,
                format!("value keyed by undeclared indicator {:?}", v.indicator),
            ));
        }
        if !seen.insert((v.country.as_str(), v.indicator.as_str())) {
            diags.push(Diagnostic::error(
                codes::WORLD_DUP_VALUE,
                span,
                format!("duplicate value key ({:?}, {:?})", v.country, v.indicator),
            ));
        }
    }
    diags
}

/// `w(country, indicator)`: the series, or `None` outside the domain.
pub fn world_lookup<'w>(snapshot: &'w WorldSnapshot, country: &str, indicator: &str) -> Option<&'w Series> {
    snapshot.lookup(country, indicator)
}

/// Why a world source could not produce a snapshot.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("world source unreachable: {0}")]
pub struct Unreachable(pub String);

/// Where a data provider obtains the world at compile time.
pub trait WorldSource: Send + Sync {
    fn load(&self) -> Result<Arc<WorldSnapshot>, Unreachable>;

    fn describe(&self) -> String;
}

/// A JSON fixture on disk.
#[derive(Debug, Clone)]
pub struct FileWorld {
    pub path: PathBuf,
}

impl FileWorld {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        FileWorld { path: path.into() }
    }
}

impl WorldSource for FileWorld {
    fn load(&self) -> Result<Arc<WorldSnapshot>, Unreachable> {
        let snap = WorldSnapshot::load(&self.path).map_err(|e| Unreachable(e.to_string()))?;
        let diags = validate_world(&snap);
        if let Some(d) = diags.first() {
            return Err(Unreachable(format!("invalid world file: {}", d.message)));
        }
        Ok(Arc::new(snap))
    }

    fn describe(&self) -> String {
        self.path.display().to_string()
    }
}

/// An in-memory snapshot.
#[derive(Debug, Clone)]
pub struct MemoryWorld(pub Arc<WorldSnapshot>);

impl WorldSource for MemoryWorld {
    fn load(&self) -> Result<Arc<WorldSnapshot>, Unreachable> {
        Ok(self.0.clone())
    }

    fn describe(&self) -> String {
        "<memory>".to_string()
    }
}

/// A source that is never reachable ("offline").
#[derive(Debug, Clone, Default)]
pub struct OfflineWorld;

impl WorldSource for OfflineWorld {
    fn load(&self) -> Result<Arc<WorldSnapshot>, Unreachable> {
        Err(Unreachable("no world source configured".into()))
    }

    fn describe(&self) -> String {
        "<offline>".to_string()
    }
}

/// Wraps a source and counts `load` calls.
pub struct CountingWorld<S> {
    inner: S,
    reads: AtomicUsize,
}

impl<S: WorldSource> CountingWorld<S> {
    pub fn new(inner: S) -> Self {
        CountingWorld {
            inner,
            reads: AtomicUsize::new(0),
        }
    }

    pub fn reads(&self) -> usize {
        self.reads.load(Ordering::SeqCst)
    }
}

impl<S: WorldSource> WorldSource for CountingWorld<S> {
    fn load(&self) -> Result<Arc<WorldSnapshot>, Unreachable> {
        self.reads.fetch_add(1, Ordering::SeqCst);
        self.inner.load()
    }

    fn describe(&self) -> String {
        self.inner.describe()
    }
}

/// Schema cache in front of another source.
///
/// A successful load writes the countries and indicators (no values) to
/// `dir`; when the inner source later fails, the cached schema is served.
/// Entries are never evicted.
pub struct CachedWorld<S> {
    inner: S,
    dir: PathBuf,
}

impl<S: WorldSource> CachedWorld<S> {
    pub fn new(inner: S, dir: impl Into<PathBuf>) -> Self {
        CachedWorld { inner, dir: dir.into() }
    }

    fn cache_file(&self) -> PathBuf {
        let mut h = Sha256::new();
        h.update(self.inner.describe());
        let key = hex::encode(h.finalize());
        self.dir.join(format!("world-schema-{}.json", &key[..16]))
    }
}

impl<S: WorldSource> WorldSource for CachedWorld<S> {
    fn load(&self) -> Result<Arc<WorldSnapshot>, Unreachable> {
        match self.inner.load() {
            Ok(snap) => {
                let schema = WorldSnapshot::new(snap.countries().to_vec(), snap.indicators().to_vec(), Vec::new());
                // A failed cache write only loses the cache.
                let _ = std::fs::create_dir_all(&self.dir)
                    .and_then(|_| std::fs::write(self.cache_file(), schema.to_json()));
                Ok(snap)
            }
            Err(e) => match WorldSnapshot::load(&self.cache_file()) {
                Ok(schema) => Ok(Arc::new(schema)),
                Err(_) => Err(e),
            },
        }
    }

    fn describe(&self) -> String {
        format!("{} (cached in {})", self.inner.describe(), self.dir.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> WorldSnapshot {
        WorldSnapshot::new(
            vec![
                Entity::new("CZE", "Czech Republic"),
                Entity::new("USA", "United States"),
            ],
            vec![Entity::new("SE.TER.ENRR", "School enrollment, tertiary (% gross)")],
            vec![ValueEntry {
                country: "CZE".into(),
                indicator: "SE.TER.ENRR".into(),
                series: vec![(2010, 63.5), (2011, 64.2)],
            }],
        )
    }

    #[test]
    fn empty_snapshot_is_valid() {
        assert!(validate_world(&WorldSnapshot::empty()).is_empty());
    }

    #[test]
    fn duplicate_country_is_reported_once() {
        let w = WorldSnapshot::new(
            vec![Entity::new("CZE", "Czech Republic"), Entity::new("CZE", "Czechia")],
            vec![],
            vec![],
        );
        let d = validate_world(&w);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "world.dup-country");
    }

    #[test]
    fn dangling_indicator_key() {
        let w = WorldSnapshot::new(
            vec![Entity::new("CZE", "Czech Republic")],
            vec![],
            vec![ValueEntry {
                country: "CZE".into(),
                indicator: "NOPE".into(),
                series: vec![],
            }],
        );
        let d = validate_world(&w);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].code, "world.dangling-key");
    }

    #[test]
    fn lookup_domain() {
        let w = sample();
        assert_eq!(world_lookup(&w, "CZE", "SE.TER.ENRR").unwrap().len(), 2);
        assert!(world_lookup(&w, "USA", "SE.TER.ENRR").is_none());
        assert!(world_lookup(&WorldSnapshot::empty(), "CZE", "SE.TER.ENRR").is_none());
    }

    #[test]
    fn equality_ignores_declaration_order() {
        let a = sample();
        let mut countries = a.countries().to_vec();
        countries.reverse();
        let b = WorldSnapshot::new(countries, a.indicators().to_vec(), a.values().to_vec());
        assert_eq!(a, b);
        assert_eq!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn json_rejects_unknown_keys() {
        let text = r#"{"countries": [], "indicators": [], "values": [], "extra": 1}"#;
        assert!(WorldSnapshot::from_json(text).is_err());
        let text = r#"{"countries": [{"code": "X", "name": "Y", "iso": 3}], "indicators": [], "values": []}"#;
        assert!(WorldSnapshot::from_json(text).is_err());
    }

    #[test]
    fn json_round_trip() {
        let w = sample();
        assert_eq!(WorldSnapshot::from_json(&w.to_json()).unwrap(), w);
    }

    #[test]
    fn cache_serves_schema_when_offline() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.json");
        std::fs::write(&path, sample().to_json()).unwrap();
        let cache = dir.path().join("cache");
        let src = CachedWorld::new(FileWorld::new(&path), &cache);
        assert_eq!(src.load().unwrap().values().len(), 1);
        std::fs::remove_file(&path).unwrap();
        let schema = src.load().unwrap();
        assert_eq!(schema.countries().len(), 2);
        assert!(schema.values().is_empty());
        let cold = CachedWorld::new(FileWorld::new(dir.path().join("other.json")), &cache);
        assert!(cold.load().is_err());
    }
}
