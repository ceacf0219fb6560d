//! On-disk cache of affine characters.
//!
//! Files live at `<dir>/<sha256 of key>.txt` and are plain text:
//!
//! ```text
//! splint-cache 1
//! key affine-character
//! key algebra G2
//! ...
//! layers 3
//! layer 0 1
//! 1 0 0 0
//! layer 1 7
//! ...
//! ```
//!
//! Each term line is the multiplicity followed by the weight's ambient
//! coordinates as exact rationals. A file whose key lines differ from the
//! requested key, or that fails to parse, is ignored and rewritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use sha2::{Digest, Sha256};
use splint_core::affine::{self, AffineWeight, GradedCharacter};
use splint_core::character::FormalCharacter;
use splint_core::{Rational, RootSystem, Weight};

const MAGIC: &str = "splint-cache 1";

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &[String]) -> PathBuf {
        let digest = Sha256::digest(key.join("\n").as_bytes());
        self.dir.join(format!("{}.txt", hex::encode(digest)))
    }

    fn load(&self, key: &[String]) -> Option<GradedCharacter> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).ok()?;
        match parse(&text, key) {
            Ok(ch) => {
                log::info!("cache hit {}", path.display());
                Some(ch)
            }
            Err(e) => {
                log::warn!("ignoring cache file {}: {e:#}", path.display());
                None
            }
        }
    }

    fn store(&self, key: &[String], ch: &GradedCharacter) -> anyhow::Result<()> {
        fs::create_dir_all(&self.dir)
            .with_context(|| format!("creating {}", self.dir.display()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(render(key, ch).as_bytes())?;
        let path = self.path_for(key);
        tmp.persist(&path)?;
        log::info!("cache store {}", path.display());
        Ok(())
    }
}

pub fn affine_key(rs: &RootSystem, mu: &AffineWeight, cutoff: usize) -> Vec<String> {
    let roots: Vec<String> = rs.simple_roots().iter().map(coords).collect();
    let labels = rs.dynkin_labels(&mu.finite).expect("dominant integral");
    vec![
        "affine-character".to_string(),
        format!("algebra {}", rs.descriptor()),
        format!("simple-roots {}", roots.join(" ; ")),
        format!("labels {}", splint_core::weight::format_labels(&labels)),
        format!("level {}", mu.level),
        format!("grades {cutoff}"),
    ]
}

/// The affine character, from the cache when present and valid.
pub fn affine_character(
    cache: Option<&Cache>,
    rs: &RootSystem,
    mu: &AffineWeight,
    cutoff: usize,
) -> anyhow::Result<Arc<GradedCharacter>> {
    let key = affine_key(rs, mu, cutoff);
    if let Some(c) = cache {
        if let Some(ch) = c.load(&key) {
            if ch.cutoff() == cutoff {
                return Ok(affine::insert_character(rs, mu, ch)?);
            }
        }
    }
    let ch = affine::affine_character(rs, mu, cutoff)?;
    if let Some(c) = cache {
        if let Err(e) = c.store(&key, &ch) {
            log::warn!("could not write cache in {}: {e:#}", c.dir().display());
        }
    }
    Ok(ch)
}

fn coords(w: &Weight) -> String {
    w.coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn render(key: &[String], ch: &GradedCharacter) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    for k in key {
        out.push_str(&format!("key {k}\n"));
    }
    out.push_str(&format!("layers {}\n", ch.layers.len()));
    for (n, layer) in ch.layers.iter().enumerate() {
        out.push_str(&format!("layer {n} {}\n", layer.len()));
        for (w, c) in layer.iter() {
            out.push_str(&format!("{c} {}\n", coords(w)));
        }
    }
    out
}

fn parse(text: &str, key: &[String]) -> anyhow::Result<GradedCharacter> {
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        bail!("unknown header");
    }
    for k in key {
        let line = lines.next().unwrap_or_default();
        if line.strip_prefix("key ") != Some(k.as_str()) {
            bail!("key mismatch");
        }
    }
    let count: usize = lines
        .next()
        .and_then(|l| l.strip_prefix("layers "))
        .context("missing layer count")?
        .parse()?;
    let mut layers = Vec::with_capacity(count);
    for n in 0..count {
        let header = lines.next().context("missing layer header")?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("layer") || parts.next() != Some(&n.to_string()) {
            bail!("bad layer header '{header}'");
        }
        let terms: usize = parts.next().context("missing term count")?.parse()?;
        let mut layer = FormalCharacter::new();
        for _ in 0..terms {
            let line = lines.next().context("truncated layer")?;
            let mut fields = line.split_whitespace();
            let c: i64 = fields.next().context("empty term")?.parse()?;
            let w = fields
                .map(|f| {
                    f.parse::<Rational>()
                        .map_err(|e| anyhow::anyhow!("bad coordinate '{f}': {e}"))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            layer.add_term(Weight::new(w), c);
        }
        layers.push(layer);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        bail!("trailing data");
    }
    Ok(GradedCharacter { layers })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let rs = RootSystem::parse("B2").unwrap();
        let mu = AffineWeight::from_labels(&rs, &[0, 1], 1).unwrap();
        let ch = affine::affine_character(&rs, &mu, 2).unwrap();
        let key = affine_key(&rs, &mu, 2);
        let text = render(&key, &ch);
        assert_eq!(parse(&text, &key).unwrap(), *ch);
        let mut other = key.clone();
        other[5] = "grades 3".into();
        assert!(parse(&text, &other).is_err());
        let without_last_line = &text[..text.trim_end().rfind('\n').unwrap()];
        assert!(parse(without_last_line, &key).is_err());
    }

    #[test]
    fn store_then_load() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        let rs = RootSystem::parse("A1").unwrap();
        let mu = AffineWeight::from_labels(&rs, &[1], 1).unwrap();
        let first = affine_character(Some(&cache), &rs, &mu, 3).unwrap();
        let key = affine_key(&rs, &mu, 3);
        assert!(cache.path_for(&key).exists());
        assert_eq!(cache.load(&key).unwrap(), *first);
    }
}
