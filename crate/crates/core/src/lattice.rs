//! Integer vectors in the character lattice `M` and the cocharacter lattice `N`.
//!
//! The two lattices are distinguished at the type level, so the pairing can only ever be
//! evaluated between one `M`-vector and one `N`-vector.

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub trait Space:
    Copy
    + Clone
    + fmt::Debug
    + Default
    + PartialEq
    + Eq
    + Hash
    + PartialOrd
    + Ord
    + Send
    + Sync
    + 'static
{
    type Dual: Space<Dual = Self>;
    const NAME: &'static str;
}

/// Characters of the torus.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct M;

/// One-parameter subgroups of the torus.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct N;

impl Space for M {
    type Dual = N;
    const NAME: &'static str = "M";
}

impl Space for N {
    type Dual = M;
    const NAME: &'static str = "N";
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector<S: Space> {
    coords: Vec<i64>,
    #[serde(skip)]
    space: PhantomData<S>,
}

pub type MVec = LatticeVector<M>;
pub type NVec = LatticeVector<N>;

impl<S: Space> LatticeVector<S> {
    pub fn new(coords: Vec<i64>) -> Self {
        Self {
            coords,
            space: PhantomData,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![0; dim])
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.coords.iter().map(|x| x * k).collect())
    }

    /// Gcd of the coordinates (0 for the zero vector).
    pub fn content(&self) -> i64 {
        self.coords.iter().fold(0i64, |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    /// The primitive vector on the same ray. `None` for the zero vector.
    pub fn primitive(&self) -> Option<Self> {
        let g = self.content();
        (g != 0).then(|| Self::new(self.coords.iter().map(|x| x / g).collect()))
    }

    /// Pairing with a vector of the dual lattice; lengths must agree.
    pub(crate) fn pair(&self, other: &LatticeVector<S::Dual>) -> i64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub(crate) fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() == dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: dim,
                got: self.dim(),
            })
        }
    }
}

/// The perfect pairing `M x N -> Z`.
pub fn pairing(m: &MVec, n: &NVec) -> Result<i64> {
    n.check_dim(m.dim())?;
    Ok(m.pair(n))
}

impl<S: Space> fmt::Debug for LatticeVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", S::NAME, self.coords)
    }
}

impl<S: Space> fmt::Display for LatticeVector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl<S: Space> From<Vec<i64>> for LatticeVector<S> {
    fn from(coords: Vec<i64>) -> Self {
        Self::new(coords)
    }
}

impl<S: Space, const D: usize> From<[i64; D]> for LatticeVector<S> {
    fn from(coords: [i64; D]) -> Self {
        Self::new(coords.to_vec())
    }
}

impl<S: Space> Add for &LatticeVector<S> {
    type Output = LatticeVector<S>;
    fn add(self, rhs: Self) -> LatticeVector<S> {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl<S: Space> Sub for &LatticeVector<S> {
    type Output = LatticeVector<S>;
    fn sub(self, rhs: Self) -> LatticeVector<S> {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl<S: Space> Neg for &LatticeVector<S> {
    type Output = LatticeVector<S>;
    fn neg(self) -> LatticeVector<S> {
        LatticeVector::new(self.coords.iter().map(|a| -a).collect())
    }
}

/// A rational point `num / den` with `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalPoint<S: Space> {
    num: Vec<i64>,
    den: i64,
    space: PhantomData<S>,
}

pub type MPoint = RationalPoint<M>;

impl<S: Space> RationalPoint<S> {
    pub fn new(num: Vec<i64>, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let g = num.iter().fold(den, |g, x| g.gcd(x));
        Self {
            num: num.iter().map(|x| x / g).collect(),
            den: den / g,
            space: PhantomData,
        }
    }

    pub fn numerator(&self) -> &[i64] {
        &self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn dim(&self) -> usize {
        self.num.len()
    }

    /// `den * <self, n>`, an integer.
    pub(crate) fn scaled_pair(&self, n: &LatticeVector<S::Dual>) -> i64 {
        self.num.iter().zip(n.coords()).map(|(a, b)| a * b).sum()
    }

    /// `<self, n> >= c`
    pub fn pair_at_least(&self, n: &LatticeVector<S::Dual>, c: i64) -> bool {
        self.scaled_pair(n) >= c * self.den
    }

    /// `(1 - t) * from + t * self` for `t = 1/2`.
    pub fn midpoint_with(&self, from: &LatticeVector<S>) -> Self {
        let num = self
            .num
            .iter()
            .zip(from.coords())
            .map(|(s, v)| s + v * self.den)
            .collect();
        Self::new(num, 2 * self.den)
    }

    pub fn translate(&self, by: &LatticeVector<S>) -> Self {
        let num = self
            .num
            .iter()
            .zip(by.coords())
            .map(|(s, v)| s + v * self.den)
            .collect();
        Self::new(num, self.den)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.num
            .iter()
            .map(|&x| x as f64 / self.den as f64)
            .collect()
    }
}

impl<S: Space> From<&LatticeVector<S>> for RationalPoint<S> {
    fn from(v: &LatticeVector<S>) -> Self {
        Self::new(v.coords.clone(), 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_examples() {
        let zero = MVec::zero(2);
        assert_eq!(pairing(&zero, &NVec::from([5, -7])).unwrap(), 0);
        assert_eq!(
            pairing(&MVec::from([1, 2]), &NVec::from([3, -1])).unwrap(),
            1
        );
    }

    #[test]
    fn pairing_f1_rays() {
        let m = MVec::from([0, 1]);
        let rays: [NVec; 4] = [[0, 1].into(), [1, 0].into(), [0, -1].into(), [-1, 1].into()];
        let vals: Vec<i64> = rays.iter().map(|n| pairing(&m, n).unwrap()).collect();
        assert_eq!(vals, vec![1, 0, -1, 1]);
    }

    #[test]
    fn pairing_length_mismatch() {
        assert!(matches!(
            pairing(&MVec::from([1, 2]), &NVec::from([1, 2, 3])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(NVec::from([2, -4]).primitive(), Some(NVec::from([1, -2])));
        assert_eq!(NVec::zero(3).primitive(), None);
        assert!(NVec::from([0, -1]).is_primitive());
    }

    #[test]
    fn rational_points_reduce() {
        let p = MPoint::new(vec![2, 4], 4);
        assert_eq!(p.numerator(), &[1, 2]);
        assert_eq!(p.denominator(), 2);
        let mid = p.midpoint_with(&MVec::from([0, 0]));
        assert_eq!(mid, MPoint::new(vec![1, 2], 4));
        assert!(p.pair_at_least(&NVec::from([1, 0]), 0));
        assert!(!p.pair_at_least(&NVec::from([1, 0]), 1));
    }
}
