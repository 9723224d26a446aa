use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// A system of linear inequalities `a . x >= b` over the reals, decided exactly by
/// Fourier-Motzkin elimination. Meant for the handful of variables that cone and fan
/// checks need.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    nvars: usize,
    rows: Vec<(Vec<BigInt>, BigInt)>,
}

impl LinearSystem {
    pub fn new(nvars: usize) -> Self {
        Self {
            nvars,
            rows: Vec::new(),
        }
    }

    /// `a . x >= b`
    pub fn ge(&mut self, a: &[i64], b: i64) -> &mut Self {
        assert_eq!(a.len(), self.nvars, "coefficient count");
        self.rows.push((
            a.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::from(b),
        ));
        self
    }

    /// `a . x <= b`
    pub fn le(&mut self, a: &[i64], b: i64) -> &mut Self {
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        self.ge(&neg, -b)
    }

    /// `a . x = b`
    pub fn eq(&mut self, a: &[i64], b: i64) -> &mut Self {
        self.ge(a, b);
        self.le(a, b)
    }

    pub fn is_feasible(&self) -> bool {
        let mut rows: HashSet<(Vec<BigInt>, BigInt)> =
            self.rows.iter().cloned().filter_map(normalize).collect();
        let mut remaining: Vec<usize> = (0..self.nvars).collect();
        while !remaining.is_empty() {
            if rows
                .iter()
                .any(|(a, b)| a.iter().all(Zero::is_zero) && b.is_positive())
            {
                return false;
            }
            // eliminate the variable producing the fewest new rows
            let (pick, _) = remaining
                .iter()
                .enumerate()
                .map(|(k, &v)| {
                    let pos = rows.iter().filter(|(a, _)| a[v].is_positive()).count();
                    let neg = rows.iter().filter(|(a, _)| a[v].is_negative()).count();
                    (k, pos * neg)
                })
                .min_by_key(|&(_, cost)| cost)
                .expect("non-empty");
            let v = remaining.swap_remove(pick);
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            let mut next = HashSet::new();
            for row in rows {
                if row.0[v].is_positive() {
                    pos.push(row);
                } else if row.0[v].is_negative() {
                    neg.push(row);
                } else {
                    next.insert(row);
                }
            }
            for (pa, pb) in &pos {
                for (na, nb) in &neg {
                    let cp = -&na[v];
                    let cn = &pa[v];
                    let a: Vec<BigInt> = pa.iter().zip(na).map(|(x, y)| &cp * x + cn * y).collect();
                    let b = &cp * pb + cn * nb;
                    if let Some(r) = normalize((a, b)) {
                        next.insert(r);
                    }
                }
            }
            rows = next;
        }
        rows.iter().all(|(_, b)| !b.is_positive())
    }
}

/// Divide out the content; drop trivially satisfied rows.
fn normalize((a, b): (Vec<BigInt>, BigInt)) -> Option<(Vec<BigInt>, BigInt)> {
    let g = a.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        // 0 >= b
        return if b.is_positive() {
            Some((a, BigInt::from(1)))
        } else {
            None
        };
    }
    // real solutions: only a common positive factor of both sides may be removed
    let g = g.gcd(&b);
    Some((a.iter().map(|x| x / &g).collect(), b / g))
}
