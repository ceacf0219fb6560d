//! Truncated q-series with rational exponents, eta and theta functions, and
//! the affine denominator and theta identities attached to a splint.
//!
//! A series is exact for every exponent up to its cutoff. Coefficients are
//! either rationals or elements of the group ring of a weight lattice; in the
//! latter mode `e^{(ξ,z)}` is kept formal, so equality of series means
//! equality of every (exponent, weight) coefficient.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::character::FormalCharacter;
use crate::error::{LieError, Result};
use crate::lattice::RootSystem;
use crate::splint::{Embedding, Splint};
use crate::weight::{Rational, Weight};

/// Coefficient ring of a [`QSeries`].
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: i64) -> Self;
}

impl Coefficient for Rational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: i64) -> Self {
        self * Rational::from_integer(c)
    }
}

impl Coefficient for FormalCharacter {
    fn is_zero(&self) -> bool {
        self.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        self.add_assign_scaled(other, 1);
    }
    fn mul(&self, other: &Self) -> Self {
        FormalCharacter::mul(self, other)
    }
    fn scale(&self, c: i64) -> Self {
        FormalCharacter::scale(self, c)
    }
}

/// `Σ c_e q^e` over exponents `e ≤ cutoff`, all multiples of `1/d`.
///
/// Equality compares cutoff and terms; `d` is bookkeeping and may be coarser
/// than the terms require.
#[derive(Clone)]
pub struct QSeries<C: Coefficient> {
    denominator: i64,
    cutoff: Rational,
    terms: BTreeMap<Rational, C>,
}

impl<C: Coefficient> PartialEq for QSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        self.cutoff == other.cutoff && self.terms == other.terms
    }
}

pub type ScalarSeries = QSeries<Rational>;
pub type LatticeSeries = QSeries<FormalCharacter>;

impl<C: Coefficient> QSeries<C> {
    pub fn zero(cutoff: Rational) -> Self {
        QSeries {
            denominator: 1,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exponent: Rational, c: C, cutoff: Rational) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(exponent, c);
        s
    }

    /// Adds `c q^e`; terms beyond the cutoff are dropped.
    pub fn add_term(&mut self, exponent: Rational, c: C) {
        if exponent > self.cutoff || c.is_zero() {
            return;
        }
        self.denominator = self.denominator.lcm(exponent.denom());
        match self.terms.get_mut(&exponent) {
            Some(existing) => {
                existing.add_assign(&c);
                if existing.is_zero() {
                    self.terms.remove(&exponent);
                }
            }
            None => {
                self.terms.insert(exponent, c);
            }
        }
    }

    pub fn cutoff(&self) -> Rational {
        self.cutoff
    }

    /// Common denominator `d` of the exponents.
    pub fn exponent_denominator(&self) -> i64 {
        self.denominator
    }

    pub fn terms(&self) -> &BTreeMap<Rational, C> {
        &self.terms
    }

    pub fn coefficient(&self, exponent: &Rational) -> Option<&C> {
        self.terms.get(exponent)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational> {
        self.terms.keys().next().copied()
    }

    pub fn truncate(&self, cutoff: Rational) -> Self {
        let cutoff = cutoff.min(self.cutoff);
        let mut out = Self::zero(cutoff);
        out.denominator = self.denominator;
        for (e, c) in self.terms.range(..=cutoff) {
            out.terms.insert(*e, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(self.cutoff.min(other.cutoff));
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out.denominator = out.denominator.lcm(&other.denominator);
        out
    }

    pub fn scale(&self, c: i64) -> Self {
        let mut out = Self::zero(self.cutoff);
        out.denominator = self.denominator;
        for (e, x) in &self.terms {
            out.add_term(*e, x.scale(c));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: Rational) -> Self {
        QSeries {
            denominator: self.denominator.lcm(e.denom()),
            cutoff: self.cutoff + e,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k + e, c.clone()))
                .collect(),
        }
    }

    /// The product is known up to the smaller cutoff, or less when an
    /// operand has negative valuation.
    pub fn product_cutoff(&self, other: &Self) -> Rational {
        let mut cut = self.cutoff.min(other.cutoff);
        if let Some(v) = other.valuation() {
            cut = cut.min(self.cutoff + v);
        }
        if let Some(v) = self.valuation() {
            cut = cut.min(other.cutoff + v);
        }
        cut
    }

    pub fn mul(&self, other: &Self) -> Self {
        let cutoff = self.product_cutoff(other);
        let mut out = Self::zero(cutoff);
        for (e1, c1) in &self.terms {
            for (e2, c2) in other.terms.range(..=cutoff - e1) {
                out.add_term(*e1 + e2, c1.mul(c2));
            }
        }
        out.denominator = out
            .denominator
            .lcm(&self.denominator)
            .lcm(&other.denominator);
        out
    }

    /// `self^n` for `n ≥ 1`.
    pub fn pow(&self, n: u32) -> Self {
        assert!(n >= 1, "pow needs a positive exponent");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> QSeries<D> {
        let mut out = QSeries::zero(self.cutoff);
        for (e, c) in &self.terms {
            out.add_term(*e, f(c));
        }
        out.denominator = out.denominator.lcm(&self.denominator);
        out
    }
}

impl QSeries<Rational> {
    /// Scalar series as a lattice series with coefficients at weight 0.
    pub fn to_lattice(&self, dim: usize) -> LatticeSeries {
        self.map_coefficients(|c| {
            assert!(c.is_integer(), "lattice coefficients are integral");
            FormalCharacter::monomial(Weight::zero(dim), c.to_integer())
        })
    }
}

impl QSeries<FormalCharacter> {
    /// Applies `f` to every weight of every coefficient.
    pub fn map_lattice(&self, f: impl Fn(&Weight) -> Weight) -> Self {
        self.map_coefficients(|c| c.map_weights(&f))
    }

    /// Multiplies by `(1 − q^e e^w)`.
    pub fn mul_one_minus(&self, e: Rational, w: &Weight) -> Self {
        let mut out = self.clone();
        for (k, c) in self.terms.range(..=self.cutoff - e) {
            out.add_term(*k + e, c.shift(w).scale(-1));
        }
        out.denominator = out.denominator.lcm(e.denom());
        out
    }
}

impl<C: Coefficient> fmt::Debug for QSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries(cutoff {}) ", self.cutoff)?;
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Lowest exponent `≤ upto` at which the two series differ.
pub fn first_difference<C: Coefficient>(
    a: &QSeries<C>,
    b: &QSeries<C>,
    upto: Rational,
) -> Option<Rational> {
    let mut exps: Vec<Rational> = a
        .terms
        .keys()
        .chain(b.terms.keys())
        .filter(|e| **e <= upto)
        .copied()
        .collect();
    exps.sort();
    exps.dedup();
    exps.into_iter().find(|e| a.terms.get(e) != b.terms.get(e))
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `Π_{n≥1} (1 − q^n)^e` up to integer grade `max`, as integer coefficients.
fn euler_power(e: u32, max: i64) -> Vec<i64> {
    let len = max.max(0) as usize + 1;
    let mut coeffs = vec![0i64; len];
    coeffs[0] = 1;
    for n in 1..len {
        for _ in 0..e {
            for k in (n..len).rev() {
                coeffs[k] -= coeffs[k - n];
            }
        }
    }
    coeffs
}

/// `η^e = q^{e/24} Π (1 − q^n)^e`, exact up to `cutoff`.
pub fn eta_power(e: u32, cutoff: Rational) -> ScalarSeries {
    let offset = Rational::new(e as i64, 24);
    let mut out = ScalarSeries::zero(cutoff);
    if cutoff >= offset {
        let max = (cutoff - offset).floor().to_integer();
        for (n, c) in euler_power(e, max).into_iter().enumerate() {
            out.add_term(offset + rat(n as i64), rat(c));
        }
    }
    out.denominator = out.denominator.lcm(&24);
    out
}

/// Dedekind eta `q^{1/24} Π_{n≥1}(1 − q^n)`, exact up to `cutoff`.
pub fn eta(cutoff: Rational) -> ScalarSeries {
    eta_power(1, cutoff)
}

/// Lattice summed over by a theta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaLattice {
    /// Root lattice `Q`.
    Root,
    /// Coroot lattice spanned by `2α/(α,α)`; equals `Q` for simply-laced systems.
    Coroot,
}

/// `Θ_{λ,k} = Σ_{ξ ∈ L + λ/k} q^{k(ξ,ξ)/2} e^{kξ}` up to `cutoff`.
///
/// The sum runs over the ellipsoid `(ξ,ξ) ≤ 2N/k`, enumerated exactly by
/// [`RootSystem::lattice_ball`].
pub fn theta(
    rs: &RootSystem,
    lambda: &Weight,
    k: i64,
    cutoff: Rational,
    lattice: ThetaLattice,
) -> Result<LatticeSeries> {
    if k < 1 {
        return Err(LieError::Precondition(format!(
            "theta level must be positive, got {k}"
        )));
    }
    rs.dynkin_labels(lambda)?;
    let basis = match lattice {
        ThetaLattice::Root => rs.simple_roots().to_vec(),
        ThetaLattice::Coroot => rs.simple_coroots(),
    };
    let center = lambda.scale(Rational::new(1, k));
    let mut out = LatticeSeries::zero(cutoff);
    for b in rs.lattice_ball(&basis, &-&center, cutoff * 2 / rat(k)) {
        let xi = &center + &b;
        let exponent = rat(k) * rs.norm2(&xi) / 2;
        out.add_term(exponent, FormalCharacter::monomial(xi.scale_int(k), 1));
    }
    Ok(out)
}

/// `Σ_{w∈W} ε(w) Θ_{wρ, h∨}` over the coroot lattice, taken per simple factor
/// (each at its own dual Coxeter number) and multiplied.
///
/// Expects a system with the standard normalization (long roots of squared
/// length 2 in each factor).
pub fn alternating_theta(rs: &RootSystem, cutoff: Rational) -> Result<LatticeSeries> {
    alternating_theta_with(rs, cutoff, None)
}

fn alternating_theta_with(
    rs: &RootSystem,
    cutoff: Rational,
    drop_term: Option<usize>,
) -> Result<LatticeSeries> {
    let dim = rs.ambient_dim();
    let mut acc = LatticeSeries::monomial(Rational::zero(), FormalCharacter::one(dim), cutoff);
    for k in 0..rs.factors().len() {
        let f = rs.factor_system(k)?;
        let h = f.factors()[0].dual_coxeter() as i64;
        let mut sum = LatticeSeries::zero(cutoff);
        for (i, (w, s)) in f.weyl_orbit(f.rho())?.into_iter().enumerate() {
            if k == 0 && drop_term == Some(i) {
                continue;
            }
            sum = sum.add(&theta(&f, &w, h, cutoff, ThetaLattice::Coroot)?.scale(s as i64));
        }
        acc = acc.mul(&sum);
    }
    Ok(acc)
}

/// `Π_{α∈roots}(1 − e^{−α}) · Π_{n≥1} (1 − q^n)^{m} Π_{α∈roots} (1 − q^n e^{−α})(1 − q^n e^{α})`
/// up to `cutoff`, for an explicit list of positive roots. All exponents are
/// integers, so the result is exact up to a fractional cutoff as well.
pub fn affine_denominator_from_roots(
    dim: usize,
    roots: &[Weight],
    imaginary_mult: u32,
    cutoff: Rational,
) -> LatticeSeries {
    let cut = cutoff;
    let mut acc = LatticeSeries::monomial(Rational::zero(), FormalCharacter::one(dim), cut);
    let zero = Weight::zero(dim);
    for a in roots {
        acc = acc.mul_one_minus(Rational::zero(), &-a);
    }
    for n in 1..=cutoff.floor().to_integer() {
        let e = rat(n);
        for _ in 0..imaginary_mult {
            acc = acc.mul_one_minus(e, &zero);
        }
        for a in roots {
            acc = acc.mul_one_minus(e, &-a);
            acc = acc.mul_one_minus(e, a);
        }
    }
    acc
}

/// Affine Weyl denominator `Π_{γ∈Δ̂⁺}(1 − e^{−γ})^{mult γ}` with `e^{−δ} = q`.
pub fn denominator_product(rs: &RootSystem, cutoff: i64) -> LatticeSeries {
    affine_denominator_from_roots(
        rs.ambient_dim(),
        rs.positive_roots(),
        rs.rank() as u32,
        rat(cutoff),
    )
}

/// Outcome of an identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity: String,
    pub splint: String,
    /// Number of grades compared above the lowest-order term.
    pub grades: Rational,
    pub passed: bool,
    /// Power of `q` applied to the right side to align lowest-order terms.
    pub normalization_shift: Rational,
    pub mismatch: Option<Mismatch>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    /// Exponent relative to the lowest-order term.
    pub relative_grade: Rational,
    pub lhs: FormalCharacter,
    pub rhs: FormalCharacter,
}

fn compare(
    identity: &str,
    s: &Splint,
    lhs: &LatticeSeries,
    rhs: &LatticeSeries,
    grades: Rational,
    normalize: bool,
) -> IdentityReport {
    let (vl, vr) = (
        lhs.valuation().unwrap_or(Rational::zero()),
        rhs.valuation().unwrap_or(Rational::zero()),
    );
    let (base, shift) = if normalize {
        (vl, vl - vr)
    } else {
        (Rational::zero(), Rational::zero())
    };
    let rhs = rhs.shift(shift);
    let upto = base + grades;
    debug_assert!(
        lhs.cutoff() >= upto && rhs.cutoff() >= upto,
        "series computed too short"
    );
    let mismatch = first_difference(lhs, &rhs, upto).map(|e| Mismatch {
        relative_grade: e - base,
        lhs: lhs.coefficient(&e).cloned().unwrap_or_default(),
        rhs: rhs.coefficient(&e).cloned().unwrap_or_default(),
    });
    IdentityReport {
        identity: identity.to_string(),
        splint: s.qualified_name(),
        grades,
        passed: mismatch.is_none(),
        normalization_shift: shift,
        mismatch,
    }
}

/// Affine denominator identity of a splint:
/// `Π_{Δ̂₁⁺} · Π_{φ₂(Δ̂₂⁺)} = Π_{Δ̂⁺} · Π_n (1 − q^n)^{r₁ + r₂ − r}`,
/// the left side built from the embedding images as stored.
pub fn verify_denominator_splint(s: &Splint, cutoff: i64) -> IdentityReport {
    let g = s.ambient();
    let dim = g.ambient_dim();
    let (r1, r2, r) = (s.phi1().source().rank(), s.stem().rank(), g.rank());
    let lhs = affine_denominator_from_roots(dim, s.phi1().images(), r1 as u32, rat(cutoff)).mul(
        &affine_denominator_from_roots(dim, s.phi2().images(), r2 as u32, rat(cutoff)),
    );
    let extra = (r1 + r2).saturating_sub(r) as u32;
    let mut rhs = denominator_product(g, cutoff);
    for n in 1..=cutoff {
        for _ in 0..extra {
            rhs = rhs.mul_one_minus(rat(n), &Weight::zero(dim));
        }
    }
    compare("denominator", s, &lhs, &rhs, rat(cutoff), false)
}

/// `Σ_{w∈W_{A1}} ε(w) Θ_{wρ,2}` of the abstract `A1`, pushed to the root `alpha`.
fn a1_theta_along(a1_theta: &LatticeSeries, a1: &RootSystem, alpha: &Weight) -> LatticeSeries {
    a1_theta.map_lattice(|w| alpha.scale(a1.root_coords(w)[0]))
}

/// Jacobi triple product form of the `A1` alternating theta along `alpha`:
/// `q^{1/8} e^{α/2} (1 − e^{−α}) Π_n (1 − q^n)(1 − q^n e^{−α})(1 − q^n e^{α})`.
fn triple_product(dim: usize, alpha: &Weight, cutoff: Rational) -> LatticeSeries {
    let base = affine_denominator_from_roots(
        dim,
        std::slice::from_ref(alpha),
        1,
        cutoff - Rational::new(1, 8),
    );
    let half = alpha.scale(Rational::new(1, 2));
    base.map_lattice(|w| w + &half).shift(Rational::new(1, 8))
}

/// Theta relation in product form: with `e = r + |Δ⁺|` for each algebra,
///
/// `η^{e₁} η^{e₂} Π_{α∈Δ₁⁺} Θ_{φ₁α} Π_{β∈Δ₂⁺} Θ_{φ₂β} = η^{r₁+r₂−r} η^{r+|Δ⁺|} Π_{γ∈Δ⁺} Θ_γ`
///
/// where `Θ_α` is the `Â1` alternating theta along `α`: a lattice sum on the
/// left and its Jacobi triple product on the right. Checked for `grades`
/// orders above the lowest term after aligning lowest-order terms.
pub fn verify_theta_product(s: &Splint, grades: i64) -> Result<IdentityReport> {
    let g = s.ambient();
    let dim = g.ambient_dim();
    let (a, st) = (s.phi1().source(), s.stem());
    let e1 = a.rank() + a.positive_roots().len();
    let e2 = st.rank() + st.positive_roots().len();
    let images: Vec<&Weight> = s.phi1().images().iter().chain(s.phi2().images()).collect();
    let lead = Rational::new((e1 + e2) as i64, 24) + Rational::new(images.len() as i64, 8);
    let cutoff = lead + rat(grades);

    let a1 = RootSystem::parse("A1")?;
    let a1_theta = alternating_theta(&a1, cutoff)?;
    let mut lhs = eta_power((e1 + e2) as u32, cutoff).to_lattice(dim);
    for img in &images {
        lhs = lhs.mul(&a1_theta_along(&a1_theta, &a1, img));
    }

    let extra = (a.rank() + st.rank()) as i64 - g.rank() as i64;
    let eta_exp = extra + (g.rank() + g.positive_roots().len()) as i64;
    if eta_exp < 0 {
        return Err(LieError::Precondition("negative eta power".into()));
    }
    let mut rhs = eta_power(eta_exp as u32, cutoff).to_lattice(dim);
    for gamma in g.positive_roots() {
        rhs = rhs.mul(&triple_product(dim, gamma, cutoff));
    }
    Ok(compare("theta-product", s, &lhs, &rhs, rat(grades), true))
}

/// Variants of the alternating-theta relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlternatingThetaOptions {
    /// Omit one Weyl term from the right-hand sum (negative control).
    pub drop_weyl_term: bool,
    /// Multiply the right side by `η^{r₁+r₂−r}`; without it the relation
    /// fails whenever `r₁ + r₂ > r`.
    pub eta_correction: bool,
}

impl Default for AlternatingThetaOptions {
    fn default() -> Self {
        AlternatingThetaOptions {
            drop_weyl_term: false,
            eta_correction: true,
        }
    }
}

/// Alternating theta of an abstract system pushed forward along an embedding.
fn pushed_alternating_theta(e: &Embedding, cutoff: Rational) -> Result<LatticeSeries> {
    Ok(alternating_theta(e.source(), cutoff)?.map_lattice(|w| e.map_vector(w)))
}

/// `(Σ_{W₁} ε Θ^{(â)}_{vρ₁}) · (Σ_{W₂} ε Θ^{(ŝ)}_{φ(uρ₂)}) = (Σ_W ε Θ^{(ĝ)}_{wρ}) · η^{r₁+r₂−r}`,
/// each alternating sum at its dual Coxeter level over its coroot lattice.
pub fn verify_theta_alternating(
    s: &Splint,
    grades: i64,
    options: AlternatingThetaOptions,
) -> Result<IdentityReport> {
    let g = s.ambient();
    let dim = g.ambient_dim();
    let extra = (s.phi1().source().rank() + s.stem().rank()) as i64 - g.rank() as i64;
    let lead = Rational::new(g.dimension() as i64 + extra.max(0), 24);
    let cutoff = lead + rat(grades);
    let lhs = pushed_alternating_theta(s.phi1(), cutoff)?
        .mul(&pushed_alternating_theta(s.phi2(), cutoff)?);
    let drop = options
        .drop_weyl_term
        .then(|| g.factor_system(0).map(|f| f.weyl_order() as usize - 1))
        .transpose()?;
    let mut rhs = alternating_theta_with(g, cutoff, drop)?;
    if options.eta_correction && extra > 0 {
        rhs = rhs.mul(&eta_power(extra as u32, cutoff).to_lattice(dim));
    }
    Ok(compare(
        "theta-alternating",
        s,
        &lhs,
        &rhs,
        rat(grades),
        true,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::splint::find_splint;

    fn rs(s: &str) -> RootSystem {
        RootSystem::parse(s).unwrap()
    }

    #[test]
    fn eta_leading_terms() {
        let e = eta(Rational::new(1, 24));
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.coefficient(&Rational::new(1, 24)), Some(&rat(1)));
        let e = eta(rat(13));
        let got: Vec<(i64, i64)> = e
            .terms()
            .iter()
            .map(|(k, c)| ((*k - Rational::new(1, 24)).to_integer(), c.to_integer()))
            .collect();
        assert_eq!(
            got,
            vec![(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1)]
        );
        assert_eq!(e.exponent_denominator(), 24);
    }

    #[test]
    fn theta_a1_and_a2() {
        let a1 = rs("A1");
        let t = theta(&a1, &Weight::zero(2), 1, rat(0), ThetaLattice::Root).unwrap();
        assert_eq!(t.terms().len(), 1);
        let t = theta(&a1, &Weight::zero(2), 1, rat(1), ThetaLattice::Root).unwrap();
        assert_eq!(t.coefficient(&rat(1)).unwrap().len(), 2);

        let a2 = rs("A2");
        let t = theta(&a2, &Weight::zero(3), 1, rat(1), ThetaLattice::Root).unwrap();
        let grade1 = t.coefficient(&rat(1)).unwrap();
        assert_eq!(grade1.len(), 6);
        assert!(grade1.iter().all(|(w, _)| a2.is_root(w)));
    }

    #[test]
    fn denominator_a1_small() {
        let a1 = rs("A1");
        let alpha = a1.simple_roots()[0].clone();
        let d = denominator_product(&a1, 0);
        assert_eq!(
            d.coefficient(&rat(0)).unwrap(),
            &FormalCharacter::from_terms([(Weight::zero(2), 1), (-&alpha, -1)])
        );
        let d1 = denominator_product(&a1, 1);
        assert_eq!(d1.terms().len(), 2);
    }

    #[test]
    fn alternating_theta_is_shifted_denominator() {
        for name in ["A1", "A2", "B2", "G2"] {
            let g = rs(name);
            let lead = Rational::new(g.dimension() as i64, 24);
            let n = 4;
            let a = alternating_theta(&g, lead + rat(n)).unwrap();
            let d = denominator_product(&g, n)
                .map_lattice(|w| w + g.rho())
                .shift(lead);
            assert_eq!(first_difference(&a, &d, lead + rat(n)), None, "{name}");
        }
    }

    #[test]
    fn triple_product_matches_lattice_sum() {
        let a1 = rs("A1");
        let alpha = a1.simple_roots()[0].clone();
        let cut = rat(6);
        let lattice = a1_theta_along(&alternating_theta(&a1, cut).unwrap(), &a1, &alpha);
        let product = triple_product(2, &alpha, cut);
        assert_eq!(first_difference(&lattice, &product, cut), None);
    }

    #[test]
    fn splint_identities_small() {
        for name in ["G2:A2A2", "B2:A1A1"] {
            let s = &find_splint(name, None).unwrap().splint;
            assert!(verify_denominator_splint(s, 3).passed, "{name}");
            assert!(verify_theta_product(s, 2).unwrap().passed, "{name}");
            assert!(
                verify_theta_alternating(s, 2, AlternatingThetaOptions::default())
                    .unwrap()
                    .passed,
                "{name}"
            );
            let literal = AlternatingThetaOptions {
                eta_correction: false,
                ..AlternatingThetaOptions::default()
            };
            assert!(
                !verify_theta_alternating(s, 2, literal).unwrap().passed,
                "{name}"
            );
        }
    }

    #[test]
    fn product_cutoff_is_min() {
        let a = eta(rat(3));
        let b = eta(rat(5));
        assert_eq!(a.mul(&b).cutoff(), rat(3));
    }
}
