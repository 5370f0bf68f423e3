//! Named example functions with their claimed classifications and golden
//! transducers. Every claim is re-checked when an entry is loaded.

use serde::Deserialize;

use crate::builder::{build_residual_transducer, validate_residual_transducer, BuildConfig};
use crate::error::{Error, Result};
use crate::resorder::{member, Flavor, Level};
use crate::transducer::{HTransducer, TransducerSpec};
use crate::zseries::spec::FunctionSpec;
use crate::zseries::{Alphabet, Series};

const SOURCES: [(&str, &str); 9] = [
    ("badexok", include_str!("../../data/gallery/badexok.json")),
    ("badexko", include_str!("../../data/gallery/badexko.json")),
    ("zero", include_str!("../../data/gallery/zero.json")),
    ("identity", include_str!("../../data/gallery/identity.json")),
    ("parity", include_str!("../../data/gallery/parity.json")),
    ("choose2", include_str!("../../data/gallery/choose2.json")),
    ("count-ab", include_str!("../../data/gallery/count-ab.json")),
    ("even-a", include_str!("../../data/gallery/even-a.json")),
    ("has-b", include_str!("../../data/gallery/has-b.json")),
];

/// Longest word on which alternate representations are compared.
const ALTERNATE_CHECK_LEN: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Claim {
    Member { class: Flavor, level: Level, holds: bool },
    /// Whether the `k`-residual transducer is counter-free.
    CounterFree { k: usize, holds: bool },
}

#[derive(Debug, Clone)]
pub struct Golden {
    pub name: String,
    pub k: usize,
    /// True if this is the `k`-residual transducer; false for machines that
    /// compute the function without being residual.
    pub residual: bool,
    pub transducer: HTransducer,
}

#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: String,
    pub description: String,
    pub series: Series,
    /// Other representations of the same function.
    pub alternates: Vec<Series>,
    pub claims: Vec<Claim>,
    pub goldens: Vec<Golden>,
}

impl GalleryEntry {
    pub fn golden(&self, name: &str) -> Option<&Golden> {
        self.goldens.iter().find(|g| g.name == name)
    }

    /// The golden `k`-residual transducer, if the entry has one.
    pub fn residual_golden(&self, k: usize) -> Option<&Golden> {
        self.goldens.iter().find(|g| g.residual && g.k == k)
    }

    fn verify(&self) -> Result<()> {
        let fail = |what: String| Err(Error::Spec(format!("gallery entry '{}': {what}", self.name)));
        for alt in &self.alternates {
            for w in self.series.alphabet().words_up_to(ALTERNATE_CHECK_LEN) {
                if alt.eval(&w)? != self.series.eval(&w)? {
                    return fail(format!("{} alternate differs at {w}", alt.kind()));
                }
            }
        }
        for claim in &self.claims {
            match *claim {
                Claim::Member { class, level, holds } => {
                    if member(class, &self.series, level)? != holds {
                        return fail(format!("membership in {class} at level {} is not {holds}", level.value()));
                    }
                }
                Claim::CounterFree { k, holds } => {
                    let built = build_residual_transducer(&self.series, &BuildConfig::new(k))
                        .map_err(|e| Error::Spec(format!("gallery entry '{}': {e}", self.name)))?;
                    if built.transducer.is_counter_free() != holds {
                        return fail(format!("counter-freeness at k = {k} is not {holds}"));
                    }
                }
            }
        }
        for g in &self.goldens {
            let report = validate_residual_transducer(&self.series, g.k, &g.transducer)?;
            if report.is_valid() != g.residual {
                return fail(format!("golden '{}': residual is not {}", g.name, g.residual));
            }
            if report.conditions().contains(&1) {
                return fail(format!("golden '{}' does not compute the function", g.name));
            }
        }
        Ok(())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryFile {
    name: String,
    description: String,
    series: FunctionSpec,
    #[serde(default)]
    alternates: Vec<FunctionSpec>,
    claims: Vec<ClaimFile>,
    goldens: Vec<GoldenFile>,
}

#[derive(Deserialize)]
#[serde(tag = "claim", rename_all = "kebab-case", deny_unknown_fields)]
enum ClaimFile {
    Member { class: String, level: i64, holds: bool },
    CounterFree { k: usize, holds: bool },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GoldenFile {
    name: String,
    k: usize,
    residual: bool,
    transducer: TransducerSpec,
}

fn parse(text: &str) -> Result<GalleryEntry> {
    let file: EntryFile = serde_json::from_str(text)?;
    let series = file.series.to_series(None)?;
    let alternates = file
        .alternates
        .iter()
        .map(|s| s.to_series(Some(series.alphabet())))
        .collect::<Result<Vec<_>>>()?;
    let claims = file
        .claims
        .into_iter()
        .map(|c| {
            Ok(match c {
                ClaimFile::Member { class, level, holds } => {
                    Claim::Member { class: class.parse()?, level: Level::new(level)?, holds }
                }
                ClaimFile::CounterFree { k, holds } => Claim::CounterFree { k, holds },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let goldens = file
        .goldens
        .into_iter()
        .map(|g| {
            Ok(Golden { name: g.name, k: g.k, residual: g.residual, transducer: g.transducer.to_transducer()? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GalleryEntry { name: file.name, description: file.description, series, alternates, claims, goldens })
}

pub fn names() -> Vec<&'static str> {
    SOURCES.iter().map(|(n, _)| *n).collect()
}

/// The raw JSON of an entry.
pub fn source(name: &str) -> Result<&'static str> {
    SOURCES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::UnknownEntry(format!("'{name}' (known: {})", names().join(", "))))
}

/// Loads an entry and re-checks its claims and goldens.
pub fn load(name: &str) -> Result<GalleryEntry> {
    let entry = parse(source(name)?)?;
    entry.verify()?;
    Ok(entry)
}

pub fn load_all() -> Result<Vec<GalleryEntry>> {
    names().into_iter().map(load).collect()
}

/// Gallery entries over the given alphabet.
pub fn over(alphabet: &Alphabet) -> Result<Vec<GalleryEntry>> {
    Ok(load_all()?.into_iter().filter(|e| e.series.alphabet() == alphabet).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn all_entries_load() {
        let all = load_all().unwrap();
        assert_eq!(all.len(), SOURCES.len());
        for e in &all {
            assert_eq!(names().iter().filter(|n| **n == e.name).count(), 1);
        }
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(load("nope"), Err(Error::UnknownEntry(_))));
    }

    #[test]
    fn values() {
        let ok = load("badexok").unwrap().series;
        let ko = load("badexko").unwrap().series;
        let a = |n| crate::zseries::Word::power('a', n);
        assert_eq!(ok.eval(&a(0)).unwrap(), BigInt::from(1));
        for n in 1..=200 {
            assert_eq!(ok.eval(&a(n)).unwrap(), BigInt::from(n as i64 - 1));
        }
        let start: Vec<i64> = (0..7).map(|n| ko.eval(&a(n)).unwrap().try_into().unwrap()).collect();
        assert_eq!(start, [1, 0, 1, 0, 1, 2, 3]);
        for n in 3..=200 {
            assert_eq!(ko.eval(&a(n)).unwrap(), BigInt::from(n as i64 - 3));
        }
    }

    #[test]
    fn broken_claim_is_rejected() {
        let text = source("parity").unwrap().replace(
            r#"{"claim": "member", "class": "nsf", "level": 0, "holds": false}"#,
            r#"{"claim": "member", "class": "nsf", "level": 0, "holds": true}"#,
        );
        let entry = parse(&text).unwrap();
        assert!(entry.verify().is_err());
    }

    #[test]
    fn right_machine_is_not_residual() {
        let e = load("badexok").unwrap();
        assert!(!e.golden("non-residual").unwrap().residual);
        assert_eq!(e.residual_golden(1).unwrap().name, "residual");
    }
}
