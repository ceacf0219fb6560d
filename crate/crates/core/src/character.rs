//! Formal characters and weight multiplicities of finite-dimensional modules.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_traits::{Signed, Zero};

use crate::error::{LieError, Result};
use crate::lattice::RootSystem;
use crate::weight::{Rational, Weight};

/// An element of the group ring of the weight lattice: weight ↦ integer.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FormalCharacter {
    terms: BTreeMap<Weight, i64>,
}

impl FormalCharacter {
    pub fn new() -> Self {
        Self::default()
    }

    /// `c · e^w`.
    pub fn monomial(w: Weight, c: i64) -> Self {
        let mut ch = Self::new();
        ch.add_term(w, c);
        ch
    }

    /// The unit `e^0` of an ambient space of dimension `dim`.
    pub fn one(dim: usize) -> Self {
        Self::monomial(Weight::zero(dim), 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Weight, i64)>>(terms: I) -> Self {
        let mut ch = Self::new();
        for (w, c) in terms {
            ch.add_term(w, c);
        }
        ch
    }

    pub fn add_term(&mut self, w: Weight, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0 {
                    o.remove();
                }
            }
        }
    }

    pub fn get(&self, w: &Weight) -> i64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &i64)> {
        self.terms.iter()
    }

    pub fn terms(&self) -> &BTreeMap<Weight, i64> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients; the dimension of a module character.
    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn add_assign_scaled(&mut self, other: &FormalCharacter, c: i64) {
        if c == 0 {
            return;
        }
        for (w, m) in &other.terms {
            self.add_term(w.clone(), c * m);
        }
    }

    pub fn add(&self, other: &FormalCharacter) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, 1);
        out
    }

    pub fn sub(&self, other: &FormalCharacter) -> Self {
        let mut out = self.clone();
        out.add_assign_scaled(other, -1);
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::new();
        out.add_assign_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &FormalCharacter) -> Self {
        let mut out = Self::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    /// Multiplication by `e^w`.
    pub fn shift(&self, w: &Weight) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, v)| (k + w, *v)).collect(),
        }
    }

    /// Applies `f` to every weight, merging coefficients that collide.
    pub fn map_weights(&self, f: impl Fn(&Weight) -> Weight) -> Self {
        let mut out = Self::new();
        for (w, c) in &self.terms {
            out.add_term(f(w), *c);
        }
        out
    }

    /// Keeps the terms whose weight satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Weight) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), *c))
                .collect(),
        }
    }

    /// Exact division in the group ring.
    ///
    /// Terms are ordered by `(height(w), w)`, an order compatible with
    /// addition, and leading terms are eliminated until the remainder
    /// vanishes. A quotient term falling below the lowest height any exact
    /// quotient could reach proves the division inexact.
    pub fn div_exact(
        &self,
        divisor: &FormalCharacter,
        height: impl Fn(&Weight) -> Rational,
    ) -> Result<FormalCharacter> {
        let keyed = |ch: &FormalCharacter| -> BTreeMap<(Rational, Weight), i64> {
            ch.terms
                .iter()
                .map(|(w, c)| ((height(w), w.clone()), *c))
                .collect()
        };
        let div = keyed(divisor);
        let Some(((lead_h, lead_w), lead_c)) = div.iter().next_back().map(|(k, c)| (k.clone(), *c))
        else {
            return Err(LieError::Consistency("division by zero character".into()));
        };
        let mut rem = keyed(self);
        let (Some(min_dividend), Some(min_divisor)) = (
            rem.keys().next().map(|k| k.0),
            div.keys().next().map(|k| k.0),
        ) else {
            return Ok(FormalCharacter::new());
        };
        let floor = min_dividend - min_divisor;
        let mut quotient = FormalCharacter::new();
        while let Some(((h, w), c)) = rem.iter().next_back().map(|(k, c)| (k.clone(), *c)) {
            if c % lead_c != 0 || h - lead_h < floor {
                return Err(LieError::Consistency(format!(
                    "group-ring division leaves a remainder at {w}"
                )));
            }
            let q = c / lead_c;
            let shift = &w - &lead_w;
            let shift_h = h - lead_h;
            quotient.add_term(shift.clone(), q);
            for ((dh, dw), dc) in &div {
                let key = (*dh + shift_h, dw + &shift);
                let v = rem.entry(key.clone()).or_insert(0);
                *v -= q * dc;
                if *v == 0 {
                    rem.remove(&key);
                }
            }
        }
        Ok(quotient)
    }
}

impl fmt::Debug for FormalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// `Π_{α>0} (1 − e^{−α})`.
pub fn weyl_denominator(rs: &RootSystem) -> FormalCharacter {
    let dim = rs.ambient_dim();
    rs.positive_roots()
        .iter()
        .fold(FormalCharacter::one(dim), |acc, a| {
            let factor = FormalCharacter::from_terms([(Weight::zero(dim), 1), (-a, -1)]);
            acc.mul(&factor)
        })
}

/// `Σ_{w∈W} ε(w) e^{w(μ+ρ)−ρ}`.
pub fn singular_element(rs: &RootSystem, mu: &Weight) -> Result<FormalCharacter> {
    rs.require_dominant_integral(mu)?;
    let shifted = mu + rs.rho();
    let orbit = rs.weyl_orbit(&shifted)?;
    Ok(FormalCharacter::from_terms(
        orbit.into_iter().map(|(w, s)| (&w - rs.rho(), s as i64)),
    ))
}

/// Dominant weights of `L^μ` with their multiplicities, highest first in
/// order of increasing depth `ht(μ − λ)`.
#[derive(Clone, Debug)]
pub struct DominantCharacter {
    pub highest: Weight,
    pub entries: Vec<(Weight, i64)>,
}

impl DominantCharacter {
    pub fn multiplicity(&self, w: &Weight) -> i64 {
        self.entries
            .iter()
            .find(|(x, _)| x == w)
            .map(|e| e.1)
            .unwrap_or(0)
    }
}

type CacheKey = (Vec<Weight>, Vec<Rational>, Weight);

struct Caches {
    dominant: RwLock<HashMap<CacheKey, Arc<DominantCharacter>>>,
    full: RwLock<HashMap<CacheKey, Arc<FormalCharacter>>>,
}

fn caches() -> &'static Caches {
    static CACHES: OnceLock<Caches> = OnceLock::new();
    CACHES.get_or_init(|| Caches {
        dominant: RwLock::new(HashMap::new()),
        full: RwLock::new(HashMap::new()),
    })
}

fn cache_key(rs: &RootSystem, mu: &Weight) -> CacheKey {
    (rs.simple_roots().to_vec(), rs.metric().to_vec(), mu.clone())
}

fn cached<V>(
    map: &RwLock<HashMap<CacheKey, Arc<V>>>,
    key: CacheKey,
    compute: impl FnOnce() -> Result<V>,
) -> Result<Arc<V>> {
    if let Some(v) = map.read().expect("character cache poisoned").get(&key) {
        return Ok(v.clone());
    }
    let v = Arc::new(compute()?);
    let mut guard = map.write().expect("character cache poisoned");
    Ok(guard.entry(key).or_insert(v).clone())
}

/// Freudenthal's recursion over dominant weights.
///
/// The dominant weights below `μ` are reached from `μ` by subtracting
/// positive roots while staying dominant; every one of them is a weight of
/// `L^μ`, so `α`-strings can be cut at the first weight outside the set.
pub fn dominant_character(rs: &RootSystem, mu: &Weight) -> Result<Arc<DominantCharacter>> {
    rs.require_dominant_integral(mu)?;
    cached(&caches().dominant, cache_key(rs, mu), || {
        Ok(compute_dominant(rs, mu))
    })
}

fn compute_dominant(rs: &RootSystem, mu: &Weight) -> DominantCharacter {
    let depth = |w: &Weight| rs.height(&(mu - w));
    let mut found: Vec<Weight> = vec![mu.clone()];
    let mut seen: std::collections::HashSet<Weight> = found.iter().cloned().collect();
    let mut i = 0;
    while i < found.len() {
        let lambda = found[i].clone();
        for a in rs.positive_roots() {
            let next = &lambda - a;
            if rs.is_dominant(&next) && !seen.contains(&next) {
                seen.insert(next.clone());
                found.push(next);
            }
        }
        i += 1;
    }
    found.sort_by(|a, b| depth(a).cmp(&depth(b)).then_with(|| b.cmp(a)));

    let shifted = mu + rs.rho();
    let top = rs.norm2(&shifted);
    let mut mult: HashMap<Weight, i64> = HashMap::new();
    let mut entries = Vec::with_capacity(found.len());
    for lambda in found {
        if &lambda == mu {
            mult.insert(lambda.clone(), 1);
            entries.push((lambda, 1));
            continue;
        }
        let mut sum = Rational::zero();
        for a in rs.positive_roots() {
            let mut x = &lambda + a;
            loop {
                let (d, _, _) = rs.dominant_representative(&x);
                let Some(&m) = mult.get(&d) else { break };
                sum += Rational::from_integer(m) * rs.ip(&x, a);
                x = &x + a;
            }
        }
        let denom = top - rs.norm2(&(&lambda + rs.rho()));
        debug_assert!(denom.is_positive());
        let m = sum * 2 / denom;
        debug_assert!(m.is_integer());
        let m = m.to_integer();
        mult.insert(lambda.clone(), m);
        entries.push((lambda, m));
    }
    DominantCharacter {
        highest: mu.clone(),
        entries,
    }
}

/// Full character of `L^μ` via Freudenthal, expanded over Weyl orbits. Cached.
pub fn freudenthal_character(rs: &RootSystem, mu: &Weight) -> Result<Arc<FormalCharacter>> {
    let dom = dominant_character(rs, mu)?;
    cached(&caches().full, cache_key(rs, mu), || {
        let mut ch = FormalCharacter::new();
        for (lambda, m) in &dom.entries {
            for (w, _) in rs.weyl_orbit(lambda)? {
                ch.add_term(w, *m);
            }
        }
        Ok(ch)
    })
}

/// Character of `L^μ` as the singular element divided by the Weyl denominator.
pub fn character_via_weyl(rs: &RootSystem, mu: &Weight) -> Result<FormalCharacter> {
    let num = singular_element(rs, mu)?;
    num.div_exact(&weyl_denominator(rs), |w| rs.height(w))
}

/// `Π_{α>0} (μ+ρ, α)/(ρ, α)`.
pub fn weyl_dimension(rs: &RootSystem, mu: &Weight) -> Result<u64> {
    rs.require_dominant_integral(mu)?;
    let shifted = mu + rs.rho();
    let d = rs
        .positive_roots()
        .iter()
        .fold(Rational::from_integer(1), |acc, a| {
            acc * rs.ip(&shifted, a) / rs.ip(rs.rho(), a)
        });
    if !d.is_integer() || d.is_negative() {
        return Err(LieError::Consistency(format!(
            "Weyl dimension {d} is not a natural number"
        )));
    }
    Ok(d.to_integer() as u64)
}

/// Splits a module character into irreducibles: `ch = Σ b_ν ch L^ν`.
///
/// Repeatedly removes the highest remaining term, which must be a dominant
/// weight with positive coefficient for a genuine module character.
pub fn decompose(rs: &RootSystem, ch: &FormalCharacter) -> Result<BTreeMap<Weight, i64>> {
    let mut rem: BTreeMap<(Rational, Weight), i64> = ch
        .iter()
        .map(|(w, c)| ((rs.height(w), w.clone()), *c))
        .collect();
    let mut out = BTreeMap::new();
    while let Some(((_, nu), c)) = rem.iter().next_back().map(|(k, c)| (k.clone(), *c)) {
        if c < 0 || rs.require_dominant_integral(&nu).is_err() {
            return Err(LieError::Consistency(format!(
                "leading term {c}·e^{nu} is not a dominant highest weight"
            )));
        }
        let irr = freudenthal_character(rs, &nu)?;
        for (w, m) in irr.iter() {
            let key = (rs.height(w), w.clone());
            let v = rem.entry(key.clone()).or_insert(0);
            *v -= c * m;
            if *v == 0 {
                rem.remove(&key);
            }
        }
        out.insert(nu, c);
    }
    Ok(out)
}

/// Same decomposition by a different route: in `ch · Π(1 − e^{−α})` each
/// `Ψ^{(ν)}` has exactly one dominant term, `e^ν`, so the dominant part of
/// the product is the decomposition.
pub fn decompose_by_denominator(rs: &RootSystem, ch: &FormalCharacter) -> BTreeMap<Weight, i64> {
    ch.mul(&weyl_denominator(rs))
        .iter()
        .filter(|(w, _)| rs.is_dominant(w))
        .map(|(w, c)| (w.clone(), *c))
        .collect()
}
