//! Vectors of the ambient Euclidean space with exact rational coordinates.

use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_rational::Rational64;
use num_traits::{One, Zero};

pub type Rational = Rational64;

/// A vector in the orthogonal ambient basis of a root system.
///
/// `Rational64` keeps every coordinate reduced, so derived equality, ordering
/// and hashing are canonical.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Weight(Vec<Rational>);

impl Weight {
    pub fn new(coords: Vec<Rational>) -> Self {
        Weight(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Weight(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    /// Unit vector `e_i` of an ambient space of dimension `dim`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut w = Self::zero(dim);
        w.0[i] = Rational::one();
        w
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: Rational) -> Self {
        Weight(self.0.iter().map(|x| x * c).collect())
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(Rational::from_integer(c))
    }

    /// `self + c * other`, the workhorse of every reflection and lattice walk.
    pub fn add_scaled(&self, c: Rational, other: &Weight) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Weight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + c * b)
                .collect(),
        )
    }

    pub fn add_scaled_int(&self, c: i64, other: &Weight) -> Self {
        self.add_scaled(Rational::from_integer(c), other)
    }

    /// Direct sum: concatenation of coordinates.
    pub fn concat(&self, other: &Weight) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Weight(v)
    }
}

impl From<Vec<Rational>> for Weight {
    fn from(v: Vec<Rational>) -> Self {
        Weight(v)
    }
}

impl<'a> Add<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.dim(), rhs.dim());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a Weight> for &'a Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.dim(), rhs.dim());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl AddAssign<&Weight> for Weight {
    fn add_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a += b;
        }
    }
}

impl SubAssign<&Weight> for Weight {
    fn sub_assign(&mut self, rhs: &Weight) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a -= b;
        }
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|x| -x).collect())
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact rational to integer, if it is one.
pub(crate) fn as_integer(r: &Rational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer())
}

/// Format a list of integers as `a,b,c`, the CLI and cache convention for
/// Dynkin labels.
pub fn format_labels(labels: &[i64]) -> String {
    labels
        .iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
