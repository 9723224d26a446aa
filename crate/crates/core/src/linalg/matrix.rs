use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinalgError;

/// Exact rational scalar, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Coefficient field for ranks and cohomology dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Field {
    #[default]
    Rational,
    /// The prime field with the given characteristic.
    Prime(u64),
}

impl Field {
    /// Builds a prime field, rejecting non-primes.
    pub fn prime(p: u64) -> Result<Self, LinalgError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(LinalgError::NotPrime(p))
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("fp:")
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| LinalgError::BadField(s.to_string()))?;
        Field::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(LinalgError::RaggedRows { row: bad });
        }
        let n = rows.len();
        Ok(Self {
            rows: n,
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| Rational::from_integer(x.into()))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::ShapeMismatch {
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rank_bigint_rows(self.integral_rows())
    }

    /// Rank over the given field. Over a prime field every denominator must be a unit.
    pub fn rank_over(&self, field: Field) -> Result<usize, LinalgError> {
        match field {
            Field::Rational => Ok(self.rank()),
            Field::Prime(p) => {
                let mut rows = Vec::with_capacity(self.rows);
                for r in 0..self.rows {
                    let mut row = Vec::with_capacity(self.cols);
                    for x in self.row(r) {
                        row.push(rational_mod_p(x, p)?);
                    }
                    rows.push(row);
                }
                Ok(rank_mod_p(rows, p))
            }
        }
    }

    /// Each row scaled by the lcm of its denominators.
    fn integral_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect()
    }

    /// Unique solution of `self * x = b`.
    pub fn solve(&self, b: &[Rational]) -> Solution {
        assert_eq!(b.len(), self.rows, "right-hand side length");
        let n = self.cols;
        let mut aug: Vec<Vec<Rational>> = (0..self.rows)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.push(b[r].clone());
                row
            })
            .collect();
        let pivots = rref(&mut aug, n);
        // inconsistent row: zero coefficients, nonzero rhs
        if aug.iter().skip(pivots.len()).any(|row| !row[n].is_zero()) {
            return Solution::Inconsistent;
        }
        if pivots.len() < n {
            return Solution::Underdetermined;
        }
        let mut x = vec![Rational::zero(); n];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[r][n].clone();
        }
        Solution::Unique(x)
    }

    /// A basis of the right kernel.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let n = self.cols;
        let mut a: Vec<Vec<Rational>> = (0..self.rows).map(|r| self.row(r).to_vec()).collect();
        let pivots = rref(&mut a, n);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); n];
                v[f] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -a[r][f].clone();
                }
                v
            })
            .collect()
    }
}

/// Outcome of [`RationalMatrix::solve`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Underdetermined,
    Inconsistent,
}

/// Reduced row echelon form on the first `ncols` columns, in place. Returns pivot columns.
fn rref(a: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..a[i].len() {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    pivots
}

/// Dense row-major integer matrix. Coboundary maps of cochain complexes live here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(LinalgError::RaggedRows { row: bad });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// `true` iff `self * rhs` is the zero matrix. Shapes must chain.
    pub fn product_is_zero(&self, rhs: &Self) -> bool {
        debug_assert_eq!(self.cols, rhs.rows);
        let mut acc = vec![0i128; rhs.cols];
        for i in 0..self.rows {
            acc.fill(0);
            for (k, &a) in self.row(i).iter().enumerate() {
                if a != 0 {
                    for (x, &b) in acc.iter_mut().zip(rhs.row(k)) {
                        *x += i128::from(a) * i128::from(b);
                    }
                }
            }
            if acc.iter().any(|&x| x != 0) {
                return false;
            }
        }
        true
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect(),
        }
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<i128>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|&x| i128::from(x)).collect())
            .filter(|r: &Vec<i128>| r.iter().any(|&x| x != 0))
            .collect();
        match eliminate(rows.clone()) {
            Some(r) => r,
            None => eliminate(
                rows.into_iter()
                    .map(|r| r.into_iter().map(BigInt::from).collect())
                    .collect(),
            )
            .expect("bigint elimination cannot overflow"),
        }
    }

    pub fn rank_over(&self, field: Field) -> usize {
        match field {
            Field::Rational => self.rank(),
            Field::Prime(p) => {
                let rows = (0..self.rows)
                    .map(|r| {
                        self.row(r)
                            .iter()
                            .map(|&x| (i128::from(x).rem_euclid(i128::from(p))) as u64)
                            .collect()
                    })
                    .collect();
                rank_mod_p(rows, p)
            }
        }
    }
}

fn rank_bigint_rows(rows: Vec<Vec<BigInt>>) -> usize {
    let rows: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|x| !Zero::is_zero(x)))
        .collect();
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(ToPrimitive::to_i128).collect())
        .collect();
    if let Some(small) = small {
        if let Some(r) = eliminate(small) {
            return r;
        }
    }
    eliminate(rows).expect("bigint elimination cannot overflow")
}

/// Integer arithmetic needed by the fraction-free eliminator; `None` signals overflow.
trait ElimInt: Clone + PartialEq {
    fn is_zero(&self) -> bool;
    fn abs_key(&self) -> BigIntKey;
    fn gcd(&self, other: &Self) -> Self;
    fn div_exact(&self, d: &Self) -> Self;
    /// `a * x - b * y`
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    fn is_unit(&self) -> bool;
    /// Worth dividing out the row content.
    fn is_large(&self) -> bool;
}

/// Ordering key for pivot selection (smallest magnitude first).
#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum BigIntKey {
    Small(u128),
    Big(usize, BigInt),
}

impl ElimInt for i128 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn abs_key(&self) -> BigIntKey {
        BigIntKey::Small(self.unsigned_abs())
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        a.checked_mul(*x)?.checked_sub(b.checked_mul(*y)?)
    }
    fn is_unit(&self) -> bool {
        self.unsigned_abs() == 1
    }
    fn is_large(&self) -> bool {
        self.unsigned_abs() > 1 << 32
    }
}

impl ElimInt for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn abs_key(&self) -> BigIntKey {
        let a = self.abs();
        BigIntKey::Big(a.bits() as usize, a)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
    fn mul_sub(a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self> {
        Some(a * x - b * y)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn is_large(&self) -> bool {
        self.bits() > 32
    }
}

/// Fraction-free row elimination: rows are made primitive again once an entry grows
/// past 32 bits, pivots of smallest magnitude are preferred, rows with a zero in the pivot
/// column are left untouched. Returns the rank, or `None` on overflow.
fn eliminate<T: ElimInt>(mut rows: Vec<Vec<T>>) -> Option<usize> {
    let n = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        if rank == n {
            break;
        }
        let mut best: Option<usize> = None;
        for i in rank..n {
            if rows[i][c].is_zero() {
                continue;
            }
            if rows[i][c].is_unit() {
                best = Some(i);
                break;
            }
            if best.map_or(true, |b| rows[i][c].abs_key() < rows[b][c].abs_key()) {
                best = Some(i);
            }
        }
        let Some(p) = best else { continue };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let g = pivot.gcd(&row[c]);
            let mp = pivot.div_exact(&g);
            let ma = row[c].div_exact(&g);
            let mut large = false;
            for j in c..ncols {
                let v = T::mul_sub(&mp, &row[j], &ma, &pivot_row[j])?;
                large |= v.is_large();
                row[j] = v;
            }
            if large {
                let content = row[c..]
                    .iter()
                    .filter(|x| !x.is_zero())
                    .fold(None, |g: Option<T>, x| {
                        Some(g.map_or_else(|| x.clone(), |g| g.gcd(x)))
                    });
                if let Some(g) = content.filter(|g| !g.is_unit()) {
                    for x in row[c..].iter_mut() {
                        *x = x.div_exact(&g);
                    }
                }
            }
        }
        rank += 1;
    }
    Some(rank)
}

fn rational_mod_p(x: &Rational, p: u64) -> Result<u64, LinalgError> {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64().expect("reduced below p");
    let den = x.denom().mod_floor(&pb).to_u64().expect("reduced below p");
    if den == 0 {
        return Err(LinalgError::DenominatorNotInvertible(p));
    }
    Ok(mul_mod(num, inv_mod(den, p), p))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(p)) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Gaussian elimination over the prime field with `p` elements.
pub(crate) fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let n = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(piv) = (rank..n).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][c], p);
        for j in c..ncols {
            rows[rank][j] = mul_mod(rows[rank][j], inv, p);
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for j in c..ncols {
                let sub = mul_mod(f, prow[j], p);
                row[j] = (row[j] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(rows: &[Vec<i64>]) -> RationalMatrix {
        RationalMatrix::from_integer_rows(rows).unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(RationalMatrix::identity(2).rank(), 2);
    }

    #[test]
    fn proportional_rows() {
        assert_eq!(q(&[vec![2, 4], vec![1, 2]]).rank(), 1);
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![1, 2]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn empty_matrices() {
        assert_eq!(RationalMatrix::zeros(0, 3).rank(), 0);
        assert_eq!(IntegerMatrix::zeros(3, 0).rank(), 0);
    }

    #[test]
    fn fractional_entries() {
        let half = Rational::new(1.into(), 2.into());
        let m = RationalMatrix::from_rows(vec![
            vec![half.clone(), Rational::one()],
            vec![Rational::one(), Rational::from_integer(2.into())],
        ])
        .unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.rank_over(Field::Prime(3)).unwrap(), 1);
        assert!(matches!(
            m.rank_over(Field::Prime(2)),
            Err(LinalgError::DenominatorNotInvertible(2))
        ));
    }

    #[test]
    fn characteristic_matters() {
        // det = 2
        let m = IntegerMatrix::from_rows(&[vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(m.rank_over(Field::Rational), 2);
        assert_eq!(m.rank_over(Field::Prime(2)), 1);
        assert_eq!(m.rank_over(Field::Prime(3)), 2);
    }

    #[test]
    fn overflowing_entries_fall_back_to_bigint() {
        let big = i64::MAX;
        let m = IntegerMatrix::from_rows(&[
            vec![big, big - 1, 3],
            vec![big - 2, big, 5],
            vec![7, big - 3, big],
        ])
        .unwrap();
        let r = m.to_rational().rank();
        assert_eq!(m.rank(), r);
        assert_eq!(r, 3);
    }

    #[test]
    fn solve_unique_and_degenerate() {
        let a = q(&[vec![1, 1], vec![1, -1]]);
        let b = [
            Rational::from_integer(3.into()),
            Rational::from_integer(1.into()),
        ];
        assert_eq!(
            a.solve(&b),
            Solution::Unique(vec![
                Rational::from_integer(2.into()),
                Rational::from_integer(1.into())
            ])
        );
        let a = q(&[vec![1, 1], vec![2, 2]]);
        assert_eq!(
            a.solve(&[Rational::one(), Rational::one()]),
            Solution::Inconsistent
        );
        assert_eq!(
            a.solve(&[Rational::one(), Rational::from_integer(2.into())]),
            Solution::Underdetermined
        );
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = q(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let ker = a.nullspace();
        assert_eq!(ker.len(), 2);
        for v in ker {
            for r in 0..a.rows() {
                let dot: Rational = a.row(r).iter().zip(&v).map(|(x, y)| x * y).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn field_parsing() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("fp:7".parse::<Field>().unwrap(), Field::Prime(7));
        assert!("fp:8".parse::<Field>().is_err());
        assert!("r".parse::<Field>().is_err());
        assert_eq!(Field::Prime(7).to_string(), "fp:7");
    }
}
