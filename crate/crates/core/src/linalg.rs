//! Dense rational linear algebra for rank ≤ 8 systems.

use num_traits::{One, Zero};

use crate::weight::Rational;

pub type RatMatrix = Vec<Vec<Rational>>;

/// Gauss–Jordan inverse; `None` if singular.
pub fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_vec(m: &RatMatrix, v: &[Rational]) -> Vec<Rational> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn from_int(m: &[Vec<i64>]) -> RatMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| Rational::from_integer(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_a2_cartan() {
        let a = from_int(&[vec![2, -1], vec![-1, 2]]);
        let inv = invert(&a).unwrap();
        let third = Rational::new(1, 3);
        assert_eq!(inv, vec![vec![third * 2, third], vec![third, third * 2]]);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        assert!(invert(&from_int(&[vec![1, 2], vec![2, 4]])).is_none());
    }
}
