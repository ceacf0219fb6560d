//! Embeddings of root systems, splints, injection fans and splint branching.
//!
//! A splint of `Δ` is a pair of embeddings `φ₁: Δ₁ → Δ`, `φ₂: Δ₂ → Δ` whose
//! images partition `Δ`. When `Im φ₁` is a closed subsystem it is the root
//! system of a regular subalgebra `𝔞`, and the stem `Δ₂` controls branching
//! `𝔤 ↓ 𝔞`: the branching coefficients of `L^μ` are weight multiplicities of
//! the stem module with the same Dynkin labels, shifted by `φ₂`.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::character::{self, FormalCharacter};
use crate::error::{LieError, Result};
use crate::lattice::RootSystem;
use crate::weight::{format_labels, Weight};

/// A map of root systems stored on the source's positive roots and extended
/// by `φ(−α) = −φ(α)`.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: RootSystem,
    target: RootSystem,
    images: Vec<Weight>,
}

impl Embedding {
    /// `images[i]` is the image of `source.positive_roots()[i]`. Nothing is
    /// verified here beyond shapes; see [`check_embedding`].
    pub fn new(source: RootSystem, target: RootSystem, images: Vec<Weight>) -> Result<Self> {
        if images.len() != source.positive_roots().len() {
            return Err(LieError::DimensionMismatch {
                expected: source.positive_roots().len(),
                found: images.len(),
            });
        }
        for w in &images {
            if w.dim() != target.ambient_dim() {
                return Err(LieError::DimensionMismatch {
                    expected: target.ambient_dim(),
                    found: w.dim(),
                });
            }
        }
        Ok(Embedding {
            source,
            target,
            images,
        })
    }

    /// Images given in the target's simple-root coordinates.
    pub fn from_root_coords(
        source: RootSystem,
        target: RootSystem,
        coords: &[Vec<i64>],
    ) -> Result<Self> {
        let images = coords
            .iter()
            .map(|c| {
                if c.len() == target.rank() {
                    Ok(target.from_root_coords(c))
                } else {
                    Err(LieError::DimensionMismatch {
                        expected: target.rank(),
                        found: c.len(),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Embedding::new(source, target, images)
    }

    pub fn source(&self) -> &RootSystem {
        &self.source
    }

    pub fn target(&self) -> &RootSystem {
        &self.target
    }

    /// Images of the source's positive roots.
    pub fn images(&self) -> &[Weight] {
        &self.images
    }

    /// Images of the source's simple roots, which define the linear extension.
    pub fn simple_images(&self) -> &[Weight] {
        &self.images[..self.source.rank()]
    }

    /// All images: positive roots followed by their negatives.
    pub fn image_set(&self) -> Vec<Weight> {
        let mut out = self.images.clone();
        out.extend(self.images.iter().map(|w| -w));
        out
    }

    /// Image of a source root, `None` if `alpha` is not a root of the source.
    pub fn map_root(&self, alpha: &Weight) -> Option<Weight> {
        let pos = self.source.positive_roots();
        if let Some(i) = pos.iter().position(|p| p == alpha) {
            return Some(self.images[i].clone());
        }
        pos.iter()
            .position(|p| &-p == alpha)
            .map(|i| -&self.images[i])
    }

    /// Linear extension to the source's root span: `Σ c_k α_k ↦ Σ c_k φ(α_k)`.
    pub fn map_vector(&self, v: &Weight) -> Weight {
        let coords = self.source.root_coords(v);
        let mut out = Weight::zero(self.target.ambient_dim());
        for (c, img) in coords.iter().zip(self.simple_images()) {
            if !num_traits::Zero::is_zero(c) {
                out = out.add_scaled(*c, img);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmbeddingViolation {
    NotARoot {
        root: Weight,
        image: Weight,
    },
    NotInjective {
        first: Weight,
        second: Weight,
        image: Weight,
    },
    Negation {
        root: Weight,
    },
    Additivity {
        first: Weight,
        second: Weight,
        sum_image: Weight,
        image_sum: Weight,
    },
}

impl fmt::Display for EmbeddingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmbeddingViolation::NotARoot { root, image } => {
                write!(f, "image {image} of {root} is not a root of the target")
            }
            EmbeddingViolation::NotInjective {
                first,
                second,
                image,
            } => {
                write!(f, "{first} and {second} both map to {image}")
            }
            EmbeddingViolation::Negation { root } => write!(f, "φ(−α) ≠ −φ(α) at α = {root}"),
            EmbeddingViolation::Additivity {
                first,
                second,
                sum_image,
                image_sum,
            } => write!(
                f,
                "φ({first} + {second}) = {sum_image} but φ({first}) + φ({second}) = {image_sum}"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub violations: Vec<EmbeddingViolation>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the images are roots, the map is injective, commutes with
/// negation, and `φ(α+β) = φ(α) + φ(β)` whenever `α + β` is a root.
pub fn check_embedding(e: &Embedding) -> EmbeddingReport {
    let mut violations = Vec::new();
    let roots = e.source.roots();
    let image = |a: &Weight| e.map_root(a).expect("source roots have images");
    let mut seen: Vec<(Weight, Weight)> = Vec::new();
    for a in &roots {
        let img = image(a);
        if !e.target.is_root(&img) {
            violations.push(EmbeddingViolation::NotARoot {
                root: a.clone(),
                image: img.clone(),
            });
        }
        if image(&-a) != -&img {
            violations.push(EmbeddingViolation::Negation { root: a.clone() });
        }
        if let Some((prev, _)) = seen.iter().find(|(_, i)| *i == img) {
            violations.push(EmbeddingViolation::NotInjective {
                first: prev.clone(),
                second: a.clone(),
                image: img.clone(),
            });
        }
        seen.push((a.clone(), img));
    }
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            let s = a + b;
            if e.source.is_root(&s) {
                let sum_image = image(&s);
                let image_sum = &image(a) + &image(b);
                if sum_image != image_sum {
                    violations.push(EmbeddingViolation::Additivity {
                        first: a.clone(),
                        second: b.clone(),
                        sum_image,
                        image_sum,
                    });
                }
            }
        }
    }
    EmbeddingReport { violations }
}

/// A splint `Δ = φ₁(Δ₁) ⊔ φ₂(Δ₂)` with a stored label correspondence for
/// the stem.
#[derive(Clone, Debug)]
pub struct Splint {
    name: String,
    ambient: RootSystem,
    phi1: Embedding,
    phi2: Embedding,
    correspondence: Vec<usize>,
}

impl Splint {
    /// Assembles a splint without verifying it; see [`check_splint`].
    ///
    /// Empty stems are rejected outright. `correspondence` may be empty when
    /// the stem rank differs from the ambient rank.
    pub fn new(
        name: impl Into<String>,
        phi1: Embedding,
        phi2: Embedding,
        correspondence: Vec<usize>,
    ) -> Result<Self> {
        let name = name.into();
        if phi1.images.is_empty() || phi2.images.is_empty() {
            return Err(LieError::InvalidSplint(format!("{name}: a stem is empty")));
        }
        let ambient = phi1.target.clone();
        if phi2.target.descriptor() != ambient.descriptor()
            || phi2.target.simple_roots() != ambient.simple_roots()
        {
            return Err(LieError::InvalidSplint(format!(
                "{name}: embeddings have different targets"
            )));
        }
        if !correspondence.is_empty() {
            let mut sorted = correspondence.clone();
            sorted.sort_unstable();
            if correspondence.len() != ambient.rank()
                || phi2.source.rank() != ambient.rank()
                || sorted != (0..ambient.rank()).collect::<Vec<_>>()
            {
                return Err(LieError::InvalidSplint(format!(
                    "{name}: correspondence must be a permutation of the {} ambient labels",
                    ambient.rank()
                )));
            }
        }
        Ok(Splint {
            name,
            ambient,
            phi1,
            phi2,
            correspondence,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `G2:A2A2` style identifier.
    pub fn qualified_name(&self) -> String {
        format!("{}:{}", self.ambient.descriptor(), self.name)
    }

    pub fn ambient(&self) -> &RootSystem {
        &self.ambient
    }

    pub fn phi1(&self) -> &Embedding {
        &self.phi1
    }

    pub fn phi2(&self) -> &Embedding {
        &self.phi2
    }

    /// Abstract stem `Δ₂`.
    pub fn stem(&self) -> &RootSystem {
        &self.phi2.source
    }

    pub fn correspondence(&self) -> &[usize] {
        &self.correspondence
    }

    /// `𝔞` realized inside the ambient space through `φ₁`.
    pub fn subalgebra(&self) -> Result<RootSystem> {
        RootSystem::from_simple_roots(
            self.phi1.source.factors(),
            self.phi1.simple_images().to_vec(),
            self.ambient.metric().to_vec(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplintViolation {
    Phi1(EmbeddingViolation),
    Phi2(EmbeddingViolation),
    Overlap(Weight),
    Uncovered(Weight),
    Extraneous(Weight),
    Rank { stem: usize, ambient: usize },
    NotClosed(String),
}

impl fmt::Display for SplintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplintViolation::Phi1(v) => write!(f, "φ₁: {v}"),
            SplintViolation::Phi2(v) => write!(f, "φ₂: {v}"),
            SplintViolation::Overlap(w) => write!(f, "root {w} lies in both images"),
            SplintViolation::Uncovered(w) => write!(f, "root {w} lies in neither image"),
            SplintViolation::Extraneous(w) => write!(f, "image {w} is not an ambient root"),
            SplintViolation::Rank { stem, ambient } => {
                write!(f, "stem rank {stem} exceeds ambient rank {ambient}")
            }
            SplintViolation::NotClosed(msg) => write!(f, "Im φ₁ is not a subsystem: {msg}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplintReport {
    pub violations: Vec<SplintViolation>,
}

impl SplintReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Both embeddings valid, images disjoint and covering `Δ`, stem ranks at
/// most the ambient rank, and `Im φ₁` a closed subsystem.
pub fn check_splint(s: &Splint) -> SplintReport {
    let mut violations = Vec::new();
    violations.extend(
        check_embedding(&s.phi1)
            .violations
            .into_iter()
            .map(SplintViolation::Phi1),
    );
    violations.extend(
        check_embedding(&s.phi2)
            .violations
            .into_iter()
            .map(SplintViolation::Phi2),
    );
    for stem in [s.phi1.source.rank(), s.phi2.source.rank()] {
        if stem > s.ambient.rank() {
            violations.push(SplintViolation::Rank {
                stem,
                ambient: s.ambient.rank(),
            });
        }
    }
    let im1: HashSet<Weight> = s.phi1.image_set().into_iter().collect();
    let im2: HashSet<Weight> = s.phi2.image_set().into_iter().collect();
    let mut overlap: Vec<_> = im1.intersection(&im2).cloned().collect();
    overlap.sort();
    violations.extend(overlap.into_iter().map(SplintViolation::Overlap));
    for r in s.ambient.roots() {
        if !im1.contains(&r) && !im2.contains(&r) {
            violations.push(SplintViolation::Uncovered(r));
        }
    }
    let mut extra: Vec<_> = im1
        .union(&im2)
        .filter(|w| !s.ambient.is_root(w))
        .cloned()
        .collect();
    extra.sort();
    violations.extend(extra.into_iter().map(SplintViolation::Extraneous));
    if im1.iter().all(|w| s.ambient.is_root(w)) {
        let roots: Vec<Weight> = s.phi1.image_set();
        if let Err(e) = s.ambient.root_subsystem(&roots) {
            violations.push(SplintViolation::NotClosed(e.to_string()));
        }
    }
    SplintReport { violations }
}

/// Coefficients of `Π_{β∈Δ₂⁺}(1 − e^{−φ₂β}) = −Σ_γ s(γ) e^{−γ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub coefficients: BTreeMap<Weight, i64>,
}

impl Fan {
    pub fn get(&self, gamma: &Weight) -> i64 {
        self.coefficients.get(gamma).copied().unwrap_or(0)
    }

    /// `−Σ_γ s(γ) e^{−γ}`.
    pub fn reconstruct(&self) -> FormalCharacter {
        FormalCharacter::from_terms(self.coefficients.iter().map(|(g, s)| (-g, -s)))
    }
}

pub fn fan_coefficients(s: &Splint) -> Fan {
    let product = stem_denominator(&s.phi2);
    Fan {
        coefficients: product.iter().map(|(w, c)| (-w, -c)).collect(),
    }
}

/// `Π (1 − e^{−φβ})` over the images of the source's positive roots.
pub fn stem_denominator(e: &Embedding) -> FormalCharacter {
    let dim = e.target.ambient_dim();
    e.images.iter().fold(FormalCharacter::one(dim), |acc, b| {
        acc.mul(&FormalCharacter::from_terms([
            (Weight::zero(dim), 1),
            (-b, -1),
        ]))
    })
}

/// Stem weight with the same Dynkin labels as `μ`, read through the stored
/// correspondence.
pub fn tilde_weight(s: &Splint, mu: &Weight) -> Result<Weight> {
    let labels = s.ambient.require_dominant_integral(mu)?;
    if s.stem().rank() != s.ambient.rank() || s.correspondence.is_empty() {
        return Err(LieError::RankMismatch(format!(
            "stem {} has rank {}, ambient {} has rank {}",
            s.stem().descriptor(),
            s.stem().rank(),
            s.ambient.descriptor(),
            s.ambient.rank()
        )));
    }
    let mut stem_labels = vec![0; labels.len()];
    for (k, &j) in s.correspondence.iter().enumerate() {
        stem_labels[j] = labels[k];
    }
    s.stem().weight_from_labels(&stem_labels)
}

/// Branching coefficients `b^{(μ)}_ν` of `L^μ_𝔤 ↓ 𝔞`, keyed by `𝔞`-dominant
/// weights in the ambient space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BranchingTable {
    pub entries: BTreeMap<Weight, i64>,
}

impl BranchingTable {
    pub fn get(&self, nu: &Weight) -> i64 {
        self.entries.get(nu).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ b_ν · dim L^ν_𝔞`.
    pub fn total_dimension(&self, sub: &RootSystem) -> Result<u64> {
        let mut total = 0u64;
        for (nu, b) in &self.entries {
            total += *b as u64 * character::weyl_dimension(sub, nu)?;
        }
        Ok(total)
    }

    /// Entries sorted by `(ρ_𝔞, ν)` ascending, then by `𝔤` Dynkin labels.
    pub fn sorted(&self, g: &RootSystem, sub: &RootSystem) -> Vec<(Weight, i64)> {
        let mut v: Vec<_> = self.entries.iter().map(|(w, c)| (w.clone(), *c)).collect();
        v.sort_by_cached_key(|(w, _)| (sub.ip(sub.rho(), w), g.labels(w)));
        v
    }
}

/// Raw splint route: `ν = μ − φ₂(μ̃ − ν̃)` with coefficient `m^{(μ̃)}_{ν̃}`
/// for every weight `ν̃` of the stem module, before any restriction.
pub fn branch_via_splint_raw(s: &Splint, mu: &Weight) -> Result<FormalCharacter> {
    let mu_tilde = tilde_weight(s, mu)?;
    let stem_char = character::freudenthal_character(s.stem(), &mu_tilde)?;
    let mut out = FormalCharacter::new();
    for (nu_tilde, m) in stem_char.iter() {
        let depth = s.phi2.map_vector(&(&mu_tilde - nu_tilde));
        out.add_term(mu - &depth, *m);
    }
    Ok(out)
}

/// Splint route restricted to `𝔞`-dominant weights.
pub fn branch_via_splint(s: &Splint, mu: &Weight) -> Result<BranchingTable> {
    let sub = s.subalgebra()?;
    let raw = branch_via_splint_raw(s, mu)?;
    Ok(BranchingTable {
        entries: raw
            .iter()
            .filter(|(w, _)| sub.is_dominant(w))
            .map(|(w, c)| (w.clone(), *c))
            .collect(),
    })
}

/// Splint route with non-dominant terms folded by the `ρ_𝔞`-shifted Weyl
/// action instead of discarded.
pub fn branch_via_splint_folded(s: &Splint, mu: &Weight) -> Result<BranchingTable> {
    let sub = s.subalgebra()?;
    let raw = branch_via_splint_raw(s, mu)?;
    let mut entries: BTreeMap<Weight, i64> = BTreeMap::new();
    for (w, c) in raw.iter() {
        let (d, sign, regular) = sub.dominant_representative(&(w + sub.rho()));
        if regular {
            *entries.entry(&d - sub.rho()).or_insert(0) += sign as i64 * c;
        }
    }
    entries.retain(|_, c| *c != 0);
    Ok(BranchingTable { entries })
}

/// Brute-force branching: decompose `ch L^μ_𝔤` into characters of the
/// subalgebra realized in the same ambient space.
pub fn branch_direct(g: &RootSystem, sub: &RootSystem, mu: &Weight) -> Result<BranchingTable> {
    if sub.ambient_dim() != g.ambient_dim() || sub.positive_roots().iter().any(|r| !g.is_root(r)) {
        return Err(LieError::Precondition(format!(
            "{} is not realized as a root subsystem of {}",
            sub.descriptor(),
            g.descriptor()
        )));
    }
    let ch = character::freudenthal_character(g, mu)?;
    Ok(BranchingTable {
        entries: character::decompose(sub, &ch)?,
    })
}

/// Outcome of comparing the splint route against the brute-force route.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplintBranching {
    /// Both routes agree on every probe weight.
    Verified { probes: usize },
    /// The splint itself is valid but the routes differ at these labels.
    NotApplicable { labels: Vec<i64> },
}

impl fmt::Display for SplintBranching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SplintBranching::Verified { probes } => {
                write!(f, "splint branching verified on {probes} probes")
            }
            SplintBranching::NotApplicable { labels } => write!(
                f,
                "splint verified, splint branching not applicable (differs at [{}])",
                format_labels(labels)
            ),
        }
    }
}

/// Dominant weights with every Dynkin label in `0..=max`.
pub fn label_box(rs: &RootSystem, max: i64) -> Vec<Weight> {
    let r = rs.rank();
    let mut out = Vec::new();
    let mut labels = vec![0i64; r];
    loop {
        out.push(rs.weight_from_labels(&labels).expect("rank matches"));
        let mut i = 0;
        while i < r && labels[i] == max {
            labels[i] = 0;
            i += 1;
        }
        if i == r {
            return out;
        }
        labels[i] += 1;
    }
}

/// Compares both branching routes on the weights with labels `≤ max_label`.
pub fn probe_splint_branching(s: &Splint, max_label: i64) -> Result<SplintBranching> {
    let sub = s.subalgebra()?;
    let probes = label_box(&s.ambient, max_label);
    for mu in &probes {
        if tilde_weight(s, mu).is_err() {
            return Ok(SplintBranching::NotApplicable {
                labels: s.ambient.dynkin_labels(mu)?,
            });
        }
        if branch_via_splint(s, mu)? != branch_direct(&s.ambient, &sub, mu)? {
            return Ok(SplintBranching::NotApplicable {
                labels: s.ambient.dynkin_labels(mu)?,
            });
        }
    }
    Ok(SplintBranching::Verified {
        probes: probes.len(),
    })
}

/// A catalog splint with its branching-probe result.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub splint: Splint,
    pub branching: SplintBranching,
}

#[derive(Deserialize)]
struct SplintFile {
    splint: Vec<SplintRecord>,
}

#[derive(Deserialize)]
struct SplintRecord {
    name: String,
    ambient: String,
    subalgebra: String,
    stem: String,
    phi1: Vec<Vec<i64>>,
    phi2: Vec<Vec<i64>>,
    #[serde(default)]
    correspondence: Vec<usize>,
}

const BUILTIN: &str = include_str!("../data/splints.toml");

/// Labels of the probe box run at catalog load.
const LOAD_PROBE_LABEL: i64 = 1;

/// Parses splints from the catalog text format without verifying them.
pub fn parse_splints(text: &str) -> Result<Vec<Splint>> {
    let file: SplintFile = toml::from_str(text).map_err(|e| LieError::Catalog(e.to_string()))?;
    file.splint
        .into_iter()
        .map(|r| {
            let ambient = RootSystem::parse(&r.ambient)?;
            let sub = RootSystem::parse(&r.subalgebra)?;
            let stem = RootSystem::parse(&r.stem)?;
            let phi1 = Embedding::from_root_coords(sub, ambient.clone(), &r.phi1)?;
            let phi2 = Embedding::from_root_coords(stem, ambient, &r.phi2)?;
            Splint::new(r.name, phi1, phi2, r.correspondence)
        })
        .collect()
}

fn builtin_catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let splints = parse_splints(BUILTIN).expect("built-in splint catalog parses");
        splints
            .into_iter()
            .map(|splint| {
                let report = check_splint(&splint);
                assert!(
                    report.passed(),
                    "built-in splint {} fails verification: {:?}",
                    splint.qualified_name(),
                    report.violations
                );
                let branching =
                    probe_splint_branching(&splint, LOAD_PROBE_LABEL).unwrap_or_else(|e| {
                        log::warn!("probe of {} failed: {e}", splint.qualified_name());
                        SplintBranching::NotApplicable { labels: vec![] }
                    });
                log::debug!("catalog {}: {}", splint.qualified_name(), branching);
                CatalogEntry { splint, branching }
            })
            .collect()
    })
}

/// Every built-in splint with its probe status.
pub fn catalog_entries() -> &'static [CatalogEntry] {
    builtin_catalog()
}

/// Built-in splints of `rs`; empty for algebras without catalog entries.
pub fn splint_catalog(rs: &RootSystem) -> Vec<Splint> {
    builtin_catalog()
        .iter()
        .filter(|e| e.splint.ambient.descriptor() == rs.descriptor())
        .map(|e| e.splint.clone())
        .collect()
}

/// Looks up `G2:A2A2`, or `A2A2` when `algebra` is given.
pub fn find_splint(name: &str, algebra: Option<&str>) -> Result<&'static CatalogEntry> {
    let (alg, short) = match name.split_once(':') {
        Some((a, n)) => (Some(a.to_string()), n.to_string()),
        None => (algebra.map(str::to_string), name.to_string()),
    };
    let alg = alg
        .map(|a| RootSystem::parse(&a).map(|rs| rs.descriptor()))
        .transpose()?;
    builtin_catalog()
        .iter()
        .find(|e| {
            e.splint.name == short
                && alg
                    .as_ref()
                    .is_none_or(|a| *a == e.splint.ambient.descriptor())
        })
        .ok_or_else(|| LieError::UnknownSplint {
            name: name.to_string(),
            available: builtin_catalog()
                .iter()
                .map(|e| e.splint.qualified_name())
                .collect::<Vec<_>>()
                .join(", "),
        })
}
