//! Root systems, weight lattices and Weyl group actions.
//!
//! Every simple factor is realized in Bourbaki's orthogonal coordinates with a
//! diagonal metric chosen so that long roots have squared length 2:
//!
//! | family | ambient | simple roots | metric |
//! |--------|---------|--------------|--------|
//! | `A_n`  | `R^{n+1}` | `e_i - e_{i+1}` | 1 |
//! | `B_n`  | `R^n` | `e_i - e_{i+1}`, `e_n` | 1 |
//! | `C_n`  | `R^n` | `e_i - e_{i+1}`, `2 e_n` | 1/2 |
//! | `D_n`  | `R^n` | `e_i - e_{i+1}`, `e_{n-1} + e_n` | 1 |
//! | `E_6,7,8` | `R^8` | Bourbaki's first 6, 7, 8 roots of `E_8` | 1 |
//! | `F_4`  | `R^4` | `e_2-e_3`, `e_3-e_4`, `e_4`, `(e_1-e_2-e_3-e_4)/2` | 1 |
//! | `G_2`  | `R^3` | `e_1 - e_2`, `-2e_1 + e_2 + e_3` | 1/3 |
//!
//! Semisimple systems are orthogonal direct sums of their factors.
//!
//! The Cartan matrix follows the convention `A[i][j] = 2(α_i, α_j)/(α_j, α_j)`,
//! so that `α_i = Σ_j A[i][j] ω_j` in the fundamental-weight basis.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{LieError, Result};
use crate::linalg::{self, RatMatrix};
use crate::weight::{as_integer, Rational, Weight};

/// Largest Weyl group the library will enumerate element by element.
pub const WEYL_ORDER_LIMIT: u64 = 51_840;

/// Largest total rank accepted by [`build_root_system`].
pub const MAX_RANK: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A simple Lie algebra type such as `G2` or `B3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    /// Accepts `A_n (n≥1)`, `B_n (n≥2)`, `C_n (n≥2)`, `D_n (n≥3)`, `E_6..8`, `F_4`, `G_2`.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(LieError::InvalidRank {
                family: family.letter(),
                rank,
            })
        }
    }

    /// Standard Cartan matrix, Bourbaki labelling.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut bond = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..n - 1 {
                    bond(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..n - 2 {
                    bond(i, i + 1);
                }
                bond(n - 3, n - 1);
            }
            Family::E => {
                bond(0, 2);
                bond(1, 3);
                for i in 2..n - 1 {
                    bond(i, i + 1);
                }
            }
            Family::F => {
                bond(0, 1);
                bond(1, 2);
                bond(2, 3);
            }
            Family::G => bond(0, 1),
        }
        // Multiple bonds: A[i][j] = 2(α_i,α_j)/(α_j,α_j) is -2 or -3 when α_j is short.
        match self.family {
            Family::B => a[n - 2][n - 1] = -2,
            Family::C => a[n - 1][n - 2] = -2,
            Family::F => a[1][2] = -2,
            Family::G => a[1][0] = -3,
            _ => {}
        }
        a
    }

    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => match n {
                6 => 36,
                7 => 63,
                _ => 120,
            },
            Family::F => 24,
            Family::G => 6,
        }
    }

    pub fn dimension(&self) -> usize {
        self.rank + 2 * self.positive_root_count()
    }

    pub fn dual_coxeter(&self) -> u32 {
        let n = self.rank as u32;
        match self.family {
            Family::A => n + 1,
            Family::B => 2 * n - 1,
            Family::C => n + 1,
            Family::D => 2 * n - 2,
            Family::E => match n {
                6 => 12,
                7 => 18,
                _ => 30,
            },
            Family::F => 9,
            Family::G => 4,
        }
    }

    pub fn weyl_order(&self) -> u64 {
        let n = self.rank as u64;
        let fact = |k: u64| (1..=k).product::<u64>();
        match self.family {
            Family::A => fact(n + 1),
            Family::B | Family::C => (1u64 << n) * fact(n),
            Family::D => (1u64 << (n - 1)) * fact(n),
            Family::E => match n {
                6 => 51_840,
                7 => 2_903_040,
                _ => 696_729_600,
            },
            Family::F => 1152,
            Family::G => 12,
        }
    }

    /// Bourbaki simple roots, ambient dimension and metric scale.
    fn bourbaki(&self) -> (Vec<Weight>, usize, Rational) {
        let n = self.rank;
        let e = |dim: usize, i: usize| Weight::unit(dim, i);
        let diff = |dim: usize, i: usize, j: usize| &e(dim, i) - &e(dim, j);
        let half = Rational::new(1, 2);
        match self.family {
            Family::A => {
                let roots = (0..n).map(|i| diff(n + 1, i, i + 1)).collect();
                (roots, n + 1, Rational::one())
            }
            Family::B => {
                let mut roots: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                roots.push(e(n, n - 1));
                (roots, n, Rational::one())
            }
            Family::C => {
                let mut roots: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                roots.push(e(n, n - 1).scale_int(2));
                (roots, n, half)
            }
            Family::D => {
                let mut roots: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1)).collect();
                roots.push(&e(n, n - 2) + &e(n, n - 1));
                (roots, n, Rational::one())
            }
            Family::E => {
                let mut a1 = vec![-half; 8];
                a1[0] = half;
                a1[7] = half;
                let mut roots = vec![Weight::new(a1), &e(8, 0) + &e(8, 1), diff(8, 1, 0)];
                for i in 2..7 {
                    roots.push(diff(8, i, i - 1));
                }
                roots.truncate(n);
                (roots, 8, Rational::one())
            }
            Family::F => {
                let a4 = Weight::new(vec![half, -half, -half, -half]);
                (
                    vec![diff(4, 1, 2), diff(4, 2, 3), e(4, 3), a4],
                    4,
                    Rational::one(),
                )
            }
            Family::G => {
                let a2 = Weight::from_ints(&[-2, 1, 1]);
                (vec![diff(3, 0, 1), a2], 3, Rational::new(1, 3))
            }
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self> {
        let types = parse_algebra(s)?;
        match types.as_slice() {
            [t] => Ok(*t),
            _ => Err(LieError::Parse {
                input: s.to_string(),
                reason: "expected a single simple type".into(),
            }),
        }
    }
}

/// Parses `G2`, `A1xA1`, `A1+A2`, `A1A1` into a list of simple factors.
pub fn parse_algebra(s: &str) -> Result<Vec<SimpleType>> {
    let err = |reason: &str| LieError::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    let mut out = Vec::new();
    let chars: Vec<char> = s.trim().chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if matches!(c, 'x' | '+' | '*' | ',' | ' ' | '⊕') {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(err("expected a family letter"));
        }
        let family =
            Family::from_letter(c).ok_or_else(|| LieError::UnknownFamily(c.to_string()))?;
        i += 1;
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        if start == i {
            return Err(err("missing rank after family letter"));
        }
        let rank: usize = chars[start..i]
            .iter()
            .collect::<String>()
            .parse()
            .map_err(|_| err("bad rank"))?;
        out.push(SimpleType::new(family, rank)?);
    }
    if out.is_empty() {
        return Err(err("empty algebra"));
    }
    Ok(out)
}

/// A (semi)simple root system realized in an ambient Euclidean space.
///
/// Immutable once built. The ambient metric is diagonal; the realized simple
/// roots are listed factor by factor, each factor in Bourbaki order.
#[derive(Clone, Debug)]
pub struct RootSystem {
    factors: Vec<SimpleType>,
    factor_offsets: Vec<usize>,
    metric: Vec<Rational>,
    simple_roots: Vec<Weight>,
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Weight>,
    positive_root_coords: Vec<Vec<i64>>,
    fundamental_weights: Vec<Weight>,
    rho: Weight,
    rho_check: Weight,
    gram_inv: RatMatrix,
    root_set: HashSet<Weight>,
}

/// Builds the Bourbaki realization of a direct sum of simple types.
pub fn build_root_system(types: &[SimpleType]) -> Result<RootSystem> {
    if types.is_empty() {
        return Err(LieError::Parse {
            input: String::new(),
            reason: "empty algebra".into(),
        });
    }
    let total: usize = types.iter().map(|t| t.rank).sum();
    if total > MAX_RANK {
        return Err(LieError::RankTooLarge(total));
    }
    let parts: Vec<_> = types.iter().map(|t| t.bourbaki()).collect();
    let dim: usize = parts.iter().map(|p| p.1).sum();
    let mut metric = Vec::with_capacity(dim);
    let mut simple = Vec::new();
    let mut offset = 0;
    for (roots, d, scale) in &parts {
        metric.extend(std::iter::repeat_n(*scale, *d));
        for r in roots {
            let mut v = Weight::zero(offset);
            v = v.concat(r);
            v = v.concat(&Weight::zero(dim - offset - d));
            simple.push(v);
        }
        offset += d;
    }
    RootSystem::from_simple_roots(types, simple, metric)
}

impl RootSystem {
    /// Parses an algebra string and builds its standard realization.
    pub fn parse(s: &str) -> Result<Self> {
        build_root_system(&parse_algebra(s)?)
    }

    /// Realizes a root system from explicit simple roots in an ambient space.
    ///
    /// The roots must be listed factor by factor in Bourbaki order; the Cartan
    /// matrix they produce is checked against the declared types. Lengths are
    /// not required to be normalized (realized subsystems keep the ambient
    /// metric).
    pub fn from_simple_roots(
        types: &[SimpleType],
        simple_roots: Vec<Weight>,
        metric: Vec<Rational>,
    ) -> Result<Self> {
        let rank: usize = types.iter().map(|t| t.rank).sum();
        if simple_roots.len() != rank {
            return Err(LieError::DimensionMismatch {
                expected: rank,
                found: simple_roots.len(),
            });
        }
        for r in &simple_roots {
            if r.dim() != metric.len() {
                return Err(LieError::DimensionMismatch {
                    expected: metric.len(),
                    found: r.dim(),
                });
            }
        }
        let ip = |x: &Weight, y: &Weight| -> Rational {
            x.coords()
                .iter()
                .zip(y.coords())
                .zip(&metric)
                .map(|((a, b), m)| a * b * m)
                .sum()
        };

        // Block-diagonal standard Cartan matrix for the declared types.
        let mut expected = vec![vec![0i64; rank]; rank];
        let mut factor_offsets = Vec::with_capacity(types.len());
        let mut off = 0;
        for t in types {
            factor_offsets.push(off);
            let c = t.cartan_matrix();
            for i in 0..t.rank {
                for j in 0..t.rank {
                    expected[off + i][off + j] = c[i][j];
                }
            }
            off += t.rank;
        }
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                let num = ip(&simple_roots[i], &simple_roots[j]) * 2;
                let den = ip(&simple_roots[j], &simple_roots[j]);
                if den.is_zero() {
                    return Err(LieError::CartanMismatch(describe(types)));
                }
                let v = as_integer(&(num / den))
                    .ok_or_else(|| LieError::CartanMismatch(describe(types)))?;
                cartan[i][j] = v;
            }
        }
        if cartan != expected {
            return Err(LieError::CartanMismatch(describe(types)));
        }

        let positive_root_coords = generate_positive_roots(&cartan);
        let expected_count: usize = types.iter().map(|t| t.positive_root_count()).sum();
        if positive_root_coords.len() != expected_count {
            return Err(LieError::Consistency(format!(
                "{} positive roots generated for {}, expected {}",
                positive_root_coords.len(),
                describe(types),
                expected_count
            )));
        }
        let dim = metric.len();
        let combine = |coeffs: &[Rational]| -> Weight {
            let mut w = Weight::zero(dim);
            for (c, a) in coeffs.iter().zip(&simple_roots) {
                if !c.is_zero() {
                    w = w.add_scaled(*c, a);
                }
            }
            w
        };
        let positive_roots: Vec<Weight> = positive_root_coords
            .iter()
            .map(|c| {
                combine(
                    &c.iter()
                        .map(|&x| Rational::from_integer(x))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();

        let cartan_inv = linalg::invert(&linalg::from_int(&cartan))
            .ok_or_else(|| LieError::Consistency("singular Cartan matrix".into()))?;
        let fundamental_weights: Vec<Weight> = cartan_inv.iter().map(|row| combine(row)).collect();

        let gram: RatMatrix = simple_roots
            .iter()
            .map(|a| simple_roots.iter().map(|b| ip(a, b)).collect())
            .collect();
        let gram_inv = linalg::invert(&gram)
            .ok_or_else(|| LieError::Consistency("singular Gram matrix".into()))?;
        // ρ∨ = Σ fundamental coweights; (ρ∨, α_j) = 1 for every simple root.
        let ones = vec![Rational::one(); rank];
        let rho_check = combine(&linalg::mat_vec(&gram_inv, &ones));

        let half_sum = positive_roots
            .iter()
            .fold(Weight::zero(dim), |acc, r| &acc + r)
            .scale(Rational::new(1, 2));
        let rho = fundamental_weights
            .iter()
            .fold(Weight::zero(dim), |acc, w| &acc + w);
        if rho != half_sum {
            return Err(LieError::Consistency(
                "Σ fundamental weights differs from half the sum of positive roots".into(),
            ));
        }

        let root_set = positive_roots
            .iter()
            .flat_map(|r| [r.clone(), -r])
            .collect();

        Ok(RootSystem {
            factors: types.to_vec(),
            factor_offsets,
            metric,
            simple_roots,
            cartan,
            positive_roots,
            positive_root_coords,
            fundamental_weights,
            rho,
            rho_check,
            gram_inv,
            root_set,
        })
    }

    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn is_simple(&self) -> bool {
        self.factors.len() == 1
    }

    /// Canonical name such as `G2` or `A1xA1`.
    pub fn descriptor(&self) -> String {
        describe(&self.factors)
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// Dimension of the ambient space.
    pub fn ambient_dim(&self) -> usize {
        self.metric.len()
    }

    pub fn metric(&self) -> &[Rational] {
        &self.metric
    }

    /// Dimension of the Lie algebra.
    pub fn dimension(&self) -> usize {
        self.rank() + 2 * self.positive_roots.len()
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Positive roots sorted by height; the simple roots come first in index order.
    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    /// Positive roots in the simple-root basis, aligned with [`Self::positive_roots`].
    pub fn positive_root_coords(&self) -> &[Vec<i64>] {
        &self.positive_root_coords
    }

    /// All roots: positive ones followed by their negatives.
    pub fn roots(&self) -> Vec<Weight> {
        let mut out = self.positive_roots.clone();
        out.extend(self.positive_roots.iter().map(|r| -r));
        out
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        self.root_set.contains(w)
    }

    pub fn is_positive_root(&self, w: &Weight) -> bool {
        self.is_root(w) && self.height(w).is_positive()
    }

    pub fn fundamental_weights(&self) -> &[Weight] {
        &self.fundamental_weights
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    /// Dual Coxeter number of each simple factor.
    pub fn dual_coxeter(&self) -> Vec<u32> {
        self.factors.iter().map(|t| t.dual_coxeter()).collect()
    }

    pub fn weyl_order(&self) -> u64 {
        self.factors.iter().map(|t| t.weyl_order()).product()
    }

    /// Range of simple-root indices belonging to factor `k`.
    pub fn factor_range(&self, k: usize) -> std::ops::Range<usize> {
        let start = self.factor_offsets[k];
        start..start + self.factors[k].rank
    }

    /// Factor `k` realized as its own root system in the same ambient space.
    pub fn factor_system(&self, k: usize) -> Result<RootSystem> {
        let simple = self.simple_roots[self.factor_range(k)].to_vec();
        RootSystem::from_simple_roots(&self.factors[k..=k], simple, self.metric.clone())
    }

    /// Highest root of factor `k`.
    pub fn highest_root(&self, k: usize) -> &Weight {
        let range = self.factor_range(k);
        let idx = self
            .positive_root_coords
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.iter()
                    .enumerate()
                    .all(|(i, &x)| x == 0 || range.contains(&i))
            })
            .max_by_key(|(_, c)| c.iter().sum::<i64>())
            .map(|(i, _)| i)
            .expect("every factor has a root");
        &self.positive_roots[idx]
    }

    fn check_dim(&self, w: &Weight) -> Result<()> {
        if w.dim() == self.ambient_dim() {
            Ok(())
        } else {
            Err(LieError::DimensionMismatch {
                expected: self.ambient_dim(),
                found: w.dim(),
            })
        }
    }

    /// Symmetric bilinear form of the ambient space.
    pub fn inner_product(&self, x: &Weight, y: &Weight) -> Result<Rational> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.ip(x, y))
    }

    pub(crate) fn ip(&self, x: &Weight, y: &Weight) -> Rational {
        x.coords()
            .iter()
            .zip(y.coords())
            .zip(&self.metric)
            .map(|((a, b), m)| a * b * m)
            .sum()
    }

    pub fn norm2(&self, x: &Weight) -> Rational {
        self.ip(x, x)
    }

    /// `2(w, α)/(α, α)`.
    pub fn pairing(&self, w: &Weight, alpha: &Weight) -> Rational {
        self.ip(w, alpha) * 2 / self.ip(alpha, alpha)
    }

    /// Dynkin labels as rationals; integral weights have integer labels.
    pub fn labels(&self, w: &Weight) -> Vec<Rational> {
        self.simple_roots
            .iter()
            .map(|a| self.pairing(w, a))
            .collect()
    }

    pub fn dynkin_labels(&self, w: &Weight) -> Result<Vec<i64>> {
        self.check_dim(w)?;
        self.labels(w)
            .iter()
            .map(|l| as_integer(l).ok_or_else(|| LieError::NotIntegral(w.to_string())))
            .collect()
    }

    /// `Σ m_k ω_k`.
    pub fn weight_from_labels(&self, labels: &[i64]) -> Result<Weight> {
        if labels.len() != self.rank() {
            return Err(LieError::DimensionMismatch {
                expected: self.rank(),
                found: labels.len(),
            });
        }
        let mut w = Weight::zero(self.ambient_dim());
        for (m, om) in labels.iter().zip(&self.fundamental_weights) {
            if *m != 0 {
                w = w.add_scaled_int(*m, om);
            }
        }
        Ok(w)
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        self.labels(w).iter().all(|l| !l.is_negative())
    }

    /// Integral and dominant, with labels returned.
    pub fn require_dominant_integral(&self, w: &Weight) -> Result<Vec<i64>> {
        let labels = self.dynkin_labels(w)?;
        if labels.iter().any(|&l| l < 0) {
            return Err(LieError::NotDominant(w.to_string()));
        }
        Ok(labels)
    }

    /// Height functional `(w, ρ∨)`; equals Σ of simple-root coordinates on the root span.
    pub fn height(&self, w: &Weight) -> Rational {
        self.ip(w, &self.rho_check)
    }

    /// Coordinates of the projection of `w` onto the root span, in the simple-root basis.
    pub fn root_coords(&self, w: &Weight) -> Vec<Rational> {
        let b: Vec<Rational> = self.simple_roots.iter().map(|a| self.ip(w, a)).collect();
        linalg::mat_vec(&self.gram_inv, &b)
    }

    /// `Σ c_i α_i`.
    pub fn from_root_coords(&self, coeffs: &[i64]) -> Weight {
        let mut w = Weight::zero(self.ambient_dim());
        for (c, a) in coeffs.iter().zip(&self.simple_roots) {
            if *c != 0 {
                w = w.add_scaled_int(*c, a);
            }
        }
        w
    }

    /// Simple reflection `s_i`.
    pub fn reflect(&self, i: usize, w: &Weight) -> Weight {
        let a = &self.simple_roots[i];
        w.add_scaled(-self.pairing(w, a), a)
    }

    /// Reflection in an arbitrary root.
    pub fn reflect_in(&self, alpha: &Weight, w: &Weight) -> Weight {
        w.add_scaled(-self.pairing(w, alpha), alpha)
    }

    /// Simple coroots `2α_i/(α_i, α_i)`, a basis of the translation lattice of the affine Weyl group.
    pub fn simple_coroots(&self) -> Vec<Weight> {
        self.simple_roots
            .iter()
            .map(|a| a.scale(Rational::from_integer(2) / self.ip(a, a)))
            .collect()
    }

    /// Reflects `w` into the dominant chamber.
    ///
    /// Returns the dominant weight, the parity `(-1)^ℓ` of the word used, and
    /// whether `w` is regular (fixed by no reflection). For non-regular input
    /// the sign carries no meaning.
    pub fn dominant_representative(&self, w: &Weight) -> (Weight, i32, bool) {
        let mut v = w.clone();
        let mut sign = 1;
        loop {
            let labels = self.labels(&v);
            match labels.iter().position(|l| l.is_negative()) {
                Some(i) => {
                    v = v.add_scaled(-labels[i], &self.simple_roots[i]);
                    sign = -sign;
                }
                None => {
                    let regular = labels.iter().all(|l| l.is_positive());
                    return (v, sign, regular);
                }
            }
        }
    }

    pub fn is_regular(&self, w: &Weight) -> bool {
        self.dominant_representative(w).2
    }

    /// Full Weyl orbit of `w` by breadth-first search over simple reflections.
    ///
    /// Each element carries `(-1)^d` where `d` is its BFS distance from `w`.
    /// For regular `w` this is `ε(u)` of the unique `u` with `u(w)` equal to the
    /// element; for non-regular `w` it is only defined per stabilizer coset and
    /// alternating sums over such orbits must be dropped by the caller.
    pub fn weyl_orbit(&self, w: &Weight) -> Result<Vec<(Weight, i32)>> {
        self.check_dim(w)?;
        let order = self.weyl_order();
        if order > WEYL_ORDER_LIMIT {
            return Err(LieError::WeylGroupTooLarge {
                order,
                limit: WEYL_ORDER_LIMIT,
            });
        }
        let mut seen: HashMap<Weight, i32> = HashMap::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(w.clone(), 1);
        queue.push_back(w.clone());
        while let Some(x) = queue.pop_front() {
            let s = seen[&x];
            out.push((x.clone(), s));
            for i in 0..self.rank() {
                let y = self.reflect(i, &x);
                if !seen.contains_key(&y) {
                    seen.insert(y.clone(), -s);
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    /// All `b` in the `Z`-span of `basis` with `|b − center|² ≤ radius2`.
    ///
    /// Coordinates in the basis are bounded by `|x_i − c_i| ≤ sqrt(R² (G⁻¹)_{ii})`
    /// with `G` the Gram matrix of the basis; every candidate in that box is
    /// then checked exactly. `center` must lie in the span of `basis`.
    pub fn lattice_ball(
        &self,
        basis: &[Weight],
        center: &Weight,
        radius2: Rational,
    ) -> Vec<Weight> {
        if radius2.is_negative() {
            return Vec::new();
        }
        let r = basis.len();
        let gram: RatMatrix = basis
            .iter()
            .map(|a| basis.iter().map(|b| self.ip(a, b)).collect())
            .collect();
        let gram_inv = linalg::invert(&gram).expect("lattice basis is independent");
        let rhs: Vec<Rational> = basis.iter().map(|b| self.ip(center, b)).collect();
        let c = linalg::mat_vec(&gram_inv, &rhs);
        let to_f64 = |x: Rational| *x.numer() as f64 / *x.denom() as f64;
        let bounds: Vec<(i64, i64)> = (0..r)
            .map(|i| {
                let span = to_f64(radius2 * gram_inv[i][i]).max(0.0).sqrt() + 1.0;
                let ci = to_f64(c[i]);
                ((ci - span).floor() as i64, (ci + span).ceil() as i64)
            })
            .collect();
        let mut out = Vec::new();
        let mut n: Vec<i64> = bounds.iter().map(|b| b.0).collect();
        loop {
            let mut b = Weight::zero(self.ambient_dim());
            for (ni, v) in n.iter().zip(basis) {
                if *ni != 0 {
                    b = b.add_scaled_int(*ni, v);
                }
            }
            if self.norm2(&(&b - center)) <= radius2 {
                out.push(b);
            }
            let mut i = 0;
            while i < r && n[i] == bounds[i].1 {
                n[i] = bounds[i].0;
                i += 1;
            }
            if i == r {
                return out;
            }
            n[i] += 1;
        }
    }

    /// Identifies the closed subsystem spanned by `roots` (closed under
    /// negation and under addition within Δ).
    pub fn root_subsystem(&self, roots: &[Weight]) -> Result<Subsystem> {
        let set: HashSet<Weight> = roots.iter().cloned().collect();
        for r in &set {
            if !self.is_root(r) {
                return Err(LieError::NotARoot(r.to_string()));
            }
            if !set.contains(&-r) {
                return Err(LieError::NotClosed(format!(
                    "{} is present but {} is not",
                    r, -r
                )));
            }
        }
        let mut sorted: Vec<&Weight> = set.iter().collect();
        sorted.sort();
        for (i, a) in sorted.iter().enumerate() {
            for b in &sorted[i..] {
                let s = *a + *b;
                if self.is_root(&s) && !set.contains(&s) {
                    return Err(LieError::NotClosed(format!(
                        "{a} + {b} = {s} is a root outside the subset"
                    )));
                }
            }
        }
        let positives: Vec<Weight> = self
            .positive_roots
            .iter()
            .filter(|r| set.contains(*r))
            .cloned()
            .collect();
        if positives.is_empty() {
            return Err(LieError::NotClosed("empty subset".into()));
        }
        let pos_set: HashSet<&Weight> = positives.iter().collect();
        let simple: Vec<Weight> = positives
            .iter()
            .filter(|p| {
                !positives
                    .iter()
                    .any(|a| pos_set.contains(&(*p - a)) && (*p - a) != **p)
            })
            .cloned()
            .collect();

        // Connected components of the Dynkin diagram.
        let n = simple.len();
        let mut comp = vec![usize::MAX; n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut k = 0;
            while k < members.len() {
                let i = members[k];
                for j in 0..n {
                    if comp[j] == usize::MAX && !self.ip(&simple[i], &simple[j]).is_zero() {
                        comp[j] = id;
                        members.push(j);
                    }
                }
                k += 1;
            }
            components.push(members);
        }

        let mut types = Vec::new();
        let mut ordered = Vec::new();
        for members in components {
            let roots: Vec<Weight> = members.iter().map(|&i| simple[i].clone()).collect();
            let (t, order) = self.identify_component(&roots)?;
            types.push(t);
            ordered.extend(order.into_iter().map(|i| roots[i].clone()));
        }
        let total: usize = types.iter().map(|t| t.rank).sum();
        if total > MAX_RANK {
            return Err(LieError::RankTooLarge(total));
        }
        let abstract_system = build_root_system(&types)?;
        let realized = RootSystem::from_simple_roots(&types, ordered.clone(), self.metric.clone())?;
        Ok(Subsystem {
            abstract_system,
            simple_images: ordered,
            realized,
        })
    }

    /// Finds a simple type and an ordering of `roots` whose Cartan matrix is standard.
    fn identify_component(&self, roots: &[Weight]) -> Result<(SimpleType, Vec<usize>)> {
        let r = roots.len();
        let actual: Vec<Vec<i64>> = roots
            .iter()
            .map(|a| {
                roots
                    .iter()
                    .map(|b| as_integer(&self.pairing(a, b)).unwrap_or(i64::MIN))
                    .collect()
            })
            .collect();
        let candidates = [
            (Family::A, r >= 1),
            (Family::B, r >= 2),
            (Family::C, r >= 3),
            (Family::D, r >= 4),
            (Family::E, (6..=8).contains(&r)),
            (Family::F, r == 4),
            (Family::G, r == 2),
        ];
        for (family, ok) in candidates {
            if !ok {
                continue;
            }
            let t = SimpleType::new(family, r)?;
            let target = t.cartan_matrix();
            let mut perm = Vec::with_capacity(r);
            let mut used = vec![false; r];
            if match_permutation(&actual, &target, &mut perm, &mut used) {
                return Ok((t, perm));
            }
        }
        Err(LieError::Consistency(
            "subsystem component matches no Cartan type".into(),
        ))
    }
}

/// Backtracking search for `perm` with `actual[perm[i]][perm[j]] == target[i][j]`.
fn match_permutation(
    actual: &[Vec<i64>],
    target: &[Vec<i64>],
    perm: &mut Vec<usize>,
    used: &mut [bool],
) -> bool {
    let k = perm.len();
    if k == target.len() {
        return true;
    }
    for cand in 0..actual.len() {
        if used[cand] {
            continue;
        }
        let consistent = perm
            .iter()
            .enumerate()
            .all(|(i, &p)| actual[p][cand] == target[i][k] && actual[cand][p] == target[k][i]);
        if consistent {
            used[cand] = true;
            perm.push(cand);
            if match_permutation(actual, target, perm, used) {
                return true;
            }
            perm.pop();
            used[cand] = false;
        }
    }
    false
}

/// A closed root subsystem: its abstract type, where its simple roots land,
/// and the same system realized in the ambient coordinates.
#[derive(Clone, Debug)]
pub struct Subsystem {
    pub abstract_system: RootSystem,
    /// Images of the abstract simple roots, in order.
    pub simple_images: Vec<Weight>,
    pub realized: RootSystem,
}

pub(crate) fn describe(types: &[SimpleType]) -> String {
    types
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join("x")
}

/// Positive roots in the simple-root basis, closing the simple roots under
/// simple reflections while staying positive. Sorted by height, ties broken
/// by descending lexicographic order so the simple roots come first in index
/// order.
fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        queue.push_back(e);
    }
    while let Some(c) = queue.pop_front() {
        for i in 0..n {
            let pairing: i64 = (0..n).map(|j| c[j] * cartan[j][i]).sum();
            if pairing == 0 {
                continue;
            }
            let mut d = c.clone();
            d[i] -= pairing;
            if d.iter().all(|&x| x >= 0) && d.iter().any(|&x| x > 0) && !seen.contains(&d) {
                seen.insert(d.clone());
                queue.push_back(d);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    out
}
