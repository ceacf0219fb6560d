use std::fmt;
use std::path::PathBuf;

use splint_core::affine::AffineWeight;
use splint_core::splint::{self, CatalogEntry};
use splint_core::{RootSystem, Weight};

use crate::cache::Cache;
use crate::output::Format;

/// Upper bound on `--grade-max`; affine characters grow quickly past it.
pub const MAX_GRADE: i64 = 40;

/// Raw global options as given on the command line.
#[derive(Clone, Debug, Default)]
pub struct RawOptions {
    pub algebra: Option<String>,
    pub splint: Option<String>,
    pub weight: Option<String>,
    pub level: Option<i64>,
    pub grade_max: Option<i64>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub no_cache: bool,
    pub oracle: bool,
}

/// Which options a command needs.
#[derive(Clone, Copy, Debug, Default)]
pub struct Needs {
    pub algebra: bool,
    pub splint: bool,
    pub weight: bool,
    pub level: bool,
    pub simple: bool,
}

/// Every problem found while validating options, reported together.
#[derive(Debug)]
pub struct ConfigErrors(pub Vec<String>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration:")?;
        for p in &self.0 {
            writeln!(f, "  - {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigErrors {}

pub struct JobConfig {
    pub algebra: Option<RootSystem>,
    pub splint: Option<&'static CatalogEntry>,
    pub labels: Option<Vec<i64>>,
    pub weight: Option<Weight>,
    pub level: i64,
    pub grade_max: usize,
    pub format: Format,
    pub cache: Option<Cache>,
    pub oracle: bool,
}

impl JobConfig {
    pub fn algebra(&self) -> &RootSystem {
        self.algebra.as_ref().expect("validated")
    }

    pub fn entry(&self) -> &'static CatalogEntry {
        self.splint.expect("validated")
    }

    pub fn weight(&self) -> &Weight {
        self.weight.as_ref().expect("validated")
    }

    pub fn labels(&self) -> &[i64] {
        self.labels.as_deref().expect("validated")
    }

    pub fn affine_weight(&self) -> AffineWeight {
        AffineWeight::highest(self.algebra(), self.weight().clone(), self.level).expect("validated")
    }
}

pub fn parse_labels(s: &str) -> Result<Vec<i64>, String> {
    let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
    if trimmed.trim().is_empty() {
        return Err(format!("weight '{s}' has no labels"));
    }
    trimmed
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| format!("weight label '{t}' is not an integer"))
        })
        .collect()
}

/// Validates everything a command needs before any computation starts.
pub fn resolve(raw: &RawOptions, needs: Needs) -> Result<JobConfig, ConfigErrors> {
    let mut problems = Vec::new();

    let mut algebra = match &raw.algebra {
        Some(a) => match RootSystem::parse(a) {
            Ok(rs) => Some(rs),
            Err(e) => {
                problems.push(format!("--algebra: {e}"));
                None
            }
        },
        None => None,
    };
    let algebra_failed = raw.algebra.is_some() && algebra.is_none();

    let mut splint = None;
    if let Some(name) = &raw.splint {
        match splint::find_splint(name, raw.algebra.as_deref().filter(|_| !algebra_failed)) {
            Ok(entry) => {
                if let Some(rs) = &algebra {
                    if rs.descriptor() != entry.splint.ambient().descriptor() {
                        problems.push(format!(
                            "--splint {} lives in {}, not {}",
                            entry.splint.qualified_name(),
                            entry.splint.ambient().descriptor(),
                            rs.descriptor()
                        ));
                    }
                }
                if algebra.is_none() && !algebra_failed {
                    algebra = Some(entry.splint.ambient().clone());
                }
                splint = Some(entry);
            }
            Err(e) => problems.push(format!("--splint: {e}")),
        }
    } else if needs.splint {
        problems.push("a splint is required (--splint, e.g. G2:A2A2)".into());
    }

    if needs.algebra && algebra.is_none() && !algebra_failed && raw.splint.is_none() {
        problems.push("an algebra is required (--algebra, e.g. G2)".into());
    }
    if needs.simple {
        if let Some(rs) = &algebra {
            if !rs.is_simple() {
                problems.push(format!(
                    "affine modules need a simple algebra, got {}",
                    rs.descriptor()
                ));
            }
        }
    }

    let mut labels = None;
    let mut weight = None;
    match &raw.weight {
        Some(w) => match parse_labels(w) {
            Ok(l) => {
                if let Some(rs) = &algebra {
                    match rs.weight_from_labels(&l) {
                        Ok(mu) => {
                            if l.iter().any(|x| *x < 0) {
                                problems.push(format!("--weight {w} is not dominant"));
                            } else {
                                weight = Some(mu);
                            }
                        }
                        Err(e) => problems.push(format!("--weight: {e}")),
                    }
                }
                labels = Some(l);
            }
            Err(e) => problems.push(format!("--weight: {e}")),
        },
        None if needs.weight => {
            problems.push("a highest weight is required (--weight, Dynkin labels like 1,0)".into())
        }
        None => {}
    }

    let level = raw.level.unwrap_or(1);
    if needs.level {
        if level < 0 {
            problems.push(format!("--level {level} must be nonnegative"));
        } else if let (Some(rs), Some(mu)) = (&algebra, &weight) {
            if rs.is_simple() {
                if let Err(e) = AffineWeight::highest(rs, mu.clone(), level) {
                    problems.push(format!("--weight/--level: {e}"));
                }
            }
        }
    }

    let grade_max = raw.grade_max.unwrap_or(4);
    if !(0..=MAX_GRADE).contains(&grade_max) {
        problems.push(format!(
            "--grade-max {grade_max} must lie in 0..={MAX_GRADE}"
        ));
    }

    let cache = if raw.no_cache {
        None
    } else {
        raw.cache_dir
            .clone()
            .or_else(default_cache_dir)
            .map(Cache::new)
    };

    if !problems.is_empty() {
        return Err(ConfigErrors(problems));
    }
    Ok(JobConfig {
        algebra,
        splint,
        labels,
        weight,
        level,
        grade_max: grade_max as usize,
        format: raw.format,
        cache,
        oracle: raw.oracle,
    })
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(x) = std::env::var_os("XDG_CACHE_HOME").filter(|x| !x.is_empty()) {
        return Some(PathBuf::from(x).join("splint"));
    }
    std::env::var_os("HOME")
        .filter(|x| !x.is_empty())
        .map(|h| PathBuf::from(h).join(".cache").join("splint"))
}
