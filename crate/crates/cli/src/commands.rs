use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use strutforge::basis::BasisSpec;
use strutforge::counting::{self, format_ratio, CountReport};
use strutforge::relations::{ihx_relations, link_configurations, relations_for, y_link_configurations, RelationRow};
use strutforge::{compute, Basis, Limits, Mode, Space, System};

use crate::cache::Cache;
use crate::record::{error_row, ResultRecord, CSV_HEADER};

/// Which family of spaces a command ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Y,
    Full,
}

impl SpaceKind {
    pub fn with_param(self, param: usize) -> Space {
        match self {
            SpaceKind::Y => Space::Y { n: param },
            SpaceKind::Full => Space::Full { degree: param },
        }
    }
}

pub fn count_json(k: u32, n: u64) -> Result<Value> {
    let report = CountReport::new(n, k)?;
    let crossing = match counting::crossing_n(k) {
        Ok(c) => Value::String(c.ceiling.to_string()),
        Err(_) => Value::Null,
    };
    Ok(json!({
        "k": k,
        "n": n,
        "type": report.invariant_type(),
        "u": report.u.to_string(),
        "r": report.r.to_string(),
        "ratio": format_ratio(&report.ratio),
        "ratio_limit": format_ratio(&counting::ratio_limit(k)?),
        "existence_bound": report.existence_bound.to_string(),
        "crossing_n": crossing,
        "note": count_note(&report),
    }))
}

fn count_note(report: &CountReport) -> String {
    if report.existence_bound.is_positive() {
        format!(
            "more diagrams than relations: a nontrivial diagram of type {} exists",
            report.invariant_type()
        )
    } else {
        format!("relations are at least as many as diagrams at type {}: no conclusion", report.invariant_type())
    }
}

pub fn count_table(k: u32, n: u64) -> Result<String> {
    let v = count_json(k, n)?;
    let mut out = String::new();
    for key in ["k", "n", "type", "u", "r", "ratio", "ratio_limit", "existence_bound", "crossing_n", "note"] {
        let cell = match &v[key] {
            Value::String(s) => s.clone(),
            Value::Null => "-".to_string(),
            other => other.to_string(),
        };
        out.push_str(&format!("{key:<16}{cell}\n"));
    }
    Ok(out)
}

/// Computes (or fetches from the cache) one quotient dimension.
/// Returns the record and whether it came from the cache.
pub fn dim(spec: BasisSpec, primes: &[u64], limits: Limits, cache: Option<&Cache>) -> Result<(ResultRecord, bool)> {
    if let Some(cache) = cache {
        if let Some(rec) = cache.lookup(spec.mode, spec.space, spec.k)? {
            return Ok((rec, true));
        }
    }
    let outcome = compute(spec, limits, primes)?;
    let rec = ResultRecord::from_outcome(&outcome);
    if let Some(cache) = cache {
        cache.append(&rec)?;
    }
    Ok((rec, false))
}

/// Accepts `a..b`, `a..=b`, `a-b`, comma lists, or a single value; ranges are inclusive.
pub fn parse_range(text: &str) -> Result<Vec<usize>> {
    let text = text.trim();
    let parse = |s: &str| -> Result<usize> {
        s.trim().parse::<usize>().with_context(|| format!("bad range bound {s:?} in {text:?}"))
    };
    let bounds = text
        .split_once("..=")
        .or_else(|| text.split_once(".."))
        .or_else(|| text.split_once('-'));
    let values: Vec<usize> = if let Some((a, b)) = bounds {
        let (a, b) = (parse(a)?, parse(b)?);
        if a > b {
            bail!("empty range {text:?}");
        }
        (a..=b).collect()
    } else {
        text.split(',').map(parse).collect::<Result<_>>()?
    };
    if values.is_empty() {
        bail!("empty range {text:?}");
    }
    Ok(values)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub computed: usize,
    pub cached: usize,
    pub failed: usize,
}

/// Writes one CSV row per `(k, param)` in lexicographic order, flushing after
/// each. A failing cell writes an error row and the sweep continues.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    mode: Mode,
    kind: SpaceKind,
    ks: &[usize],
    params: &[usize],
    primes: &[u64],
    limits: Limits,
    cache: Option<&Cache>,
    out: &Path,
    log: &mut dyn Write,
) -> Result<SweepSummary> {
    let mut writer = csv::Writer::from_path(out).with_context(|| format!("creating {}", out.display()))?;
    writer.write_record(CSV_HEADER)?;
    writer.flush()?;
    let mut summary = SweepSummary::default();
    for &k in ks {
        for &param in params {
            let space = kind.with_param(param);
            let row = match u8::try_from(k)
                .map_err(anyhow::Error::from)
                .and_then(|k| dim(BasisSpec { mode, k, space }, primes, limits, cache))
            {
                Ok((rec, hit)) => {
                    if hit {
                        summary.cached += 1;
                    } else {
                        summary.computed += 1;
                    }
                    rec.csv_row()
                }
                Err(e) => {
                    summary.failed += 1;
                    writeln!(log, "k={k} {}={param}: {e:#}", space.name())?;
                    error_row(mode, space, u8::try_from(k).unwrap_or(u8::MAX))
                }
            };
            writer.write_record(&row)?;
            writer.flush()?;
        }
    }
    Ok(summary)
}

/// Cokernel functionals over the diagram basis, serialized for external use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub basis: Vec<String>,
    pub prime: u64,
    pub functionals: Vec<Vec<u64>>,
}

pub fn witness(spec: BasisSpec, primes: &[u64], limits: Limits) -> Result<Witness> {
    let system = System::build(spec, limits)?;
    let rank = system.rank(primes)?;
    let prime = rank.primes[0];
    let functionals = system.functionals(prime)?;
    Ok(Witness {
        basis: system.basis.elements().iter().map(ToString::to_string).collect(),
        prime,
        functionals,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DumpSummary {
    pub printed: usize,
    pub raw: u64,
    pub nonempty: u64,
    pub effective: usize,
}

fn dump_line(out: &mut dyn Write, row: &RelationRow, basis: &Basis) -> Result<()> {
    writeln!(out, "{}\t# {}", row.format_terms(basis), row.provenance())?;
    Ok(())
}

/// Prints every configuration that grafts onto at least one leg, then the
/// IHX rows, then a summary line. Rows are shown before sign normalization.
pub fn dump_relations(spec: BasisSpec, limits: Limits, out: &mut dyn Write) -> Result<DumpSummary> {
    let basis = spec.enumerate(limits)?;
    let mut printed = 0;
    let configs = match spec.space {
        Space::Y { n } => y_link_configurations(spec.k, n, spec.mode, &basis)?,
        Space::Full { degree } => link_configurations(spec.k, degree, spec.mode, &basis)?,
    };
    for cr in configs.iter().filter(|cr| cr.targets > 0) {
        dump_line(out, &cr.row, &basis)?;
        printed += 1;
    }
    if let Space::Full { degree } = spec.space {
        for row in ihx_relations(spec.k, degree, spec.mode, &basis)?.rows {
            dump_line(out, &row, &basis)?;
            printed += 1;
        }
    }
    let set = relations_for(&basis)?;
    let summary = DumpSummary { printed, raw: set.raw, nonempty: set.nonempty, effective: set.rows.len() };
    writeln!(
        out,
        "# printed={} raw={} nonempty={} effective={}",
        summary.printed, summary.raw, summary.nonempty, summary.effective
    )?;
    Ok(summary)
}

/// Parses one dumped line back into its row (terms only; the comment is ignored).
pub fn parse_dump_line(line: &str, basis: &Basis, provenance: strutforge::relations::Provenance) -> Result<RelationRow> {
    let terms = line.split_once("\t#").map_or(line, |(t, _)| t);
    Ok(RelationRow::parse_terms(terms, basis, provenance)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..5").unwrap(), [3, 4, 5]);
        assert_eq!(parse_range("3..=5").unwrap(), [3, 4, 5]);
        assert_eq!(parse_range("0-3").unwrap(), [0, 1, 2, 3]);
        assert_eq!(parse_range("6,7").unwrap(), [6, 7]);
        assert_eq!(parse_range("4").unwrap(), [4]);
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn count_fields() {
        let v = count_json(9, 209).unwrap();
        assert_eq!(v["ratio"], "1/1");
        assert_eq!(v["existence_bound"], "0");
        let v = count_json(9, 210).unwrap();
        assert!(v["note"].as_str().unwrap().contains("type 212"));
        assert_eq!(v["crossing_n"], "209");
        let v = count_json(3, 1).unwrap();
        assert_eq!((v["u"].as_str(), v["r"].as_str()), (Some("3"), Some("36")));
        assert_eq!(v["crossing_n"], Value::Null);
        assert!(count_json(2, 0).is_err());
    }

    #[test]
    fn dim_uses_cache() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let spec = BasisSpec::y(Mode::Homotopy, 3, 1);
        let (first, hit) = dim(spec, &strutforge::DEFAULT_PRIMES, Limits::default(), Some(&cache)).unwrap();
        assert!(!hit);
        assert_eq!((first.num_diagrams, first.rank, first.quotient_dim), (3, 3, 0));
        let (second, hit) = dim(spec, &strutforge::DEFAULT_PRIMES, Limits::default(), Some(&cache)).unwrap();
        assert!(hit);
        assert_eq!(first, second);
    }

    #[test]
    fn dump_counts_for_smallest_y_space() {
        let mut out = Vec::new();
        let summary = dump_relations(BasisSpec::y(Mode::Homotopy, 3, 0), Limits::default(), &mut out).unwrap();
        assert_eq!((summary.printed, summary.raw, summary.nonempty, summary.effective), (12, 18, 12, 1));
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 13);
    }
}
