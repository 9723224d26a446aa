use super::{Field, IntegerMatrix, LinalgError};

/// A bounded cochain complex `0 -> C^0 -> C^1 -> ... -> C^p -> 0` of finite-dimensional
/// vector spaces, given by dimensions and coboundary matrices.
///
/// `boundaries[p]` maps `C^p -> C^{p+1}`, so it has `dims[p]` columns and `dims[p+1]` rows.
/// Trailing coboundaries may be omitted; they are treated as zero maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexDims {
    dims: Vec<usize>,
    boundaries: Vec<IntegerMatrix>,
}

impl ChainComplexDims {
    pub fn new(dims: Vec<usize>, boundaries: Vec<IntegerMatrix>) -> Result<Self, LinalgError> {
        if boundaries.len() > dims.len().saturating_sub(1) {
            return Err(LinalgError::TooManyBoundaries {
                dims: dims.len(),
                boundaries: boundaries.len(),
            });
        }
        for (p, b) in boundaries.iter().enumerate() {
            if b.cols() != dims[p] || b.rows() != dims[p + 1] {
                return Err(LinalgError::BoundaryShape {
                    degree: p,
                    expected: (dims[p + 1], dims[p]),
                    got: (b.rows(), b.cols()),
                });
            }
        }
        Ok(Self { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundaries(&self) -> &[IntegerMatrix] {
        &self.boundaries
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(&self.dims)
    }
}

pub(crate) fn alternating_sum(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(p, &d)| if p % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

/// `dim H^p = dim C^p - rank d^p - rank d^{p-1}` for every `p`.
///
/// Fails if some composite `d^{p+1} d^p` is nonzero.
pub fn cohomology_dims(c: &ChainComplexDims, field: Field) -> Result<Vec<usize>, LinalgError> {
    for (p, pair) in c.boundaries.windows(2).enumerate() {
        if !pair[1].product_is_zero(&pair[0]) {
            return Err(LinalgError::NotAComplex { degree: p });
        }
    }
    let ranks: Vec<usize> = c.boundaries.iter().map(|b| b.rank_over(field)).collect();
    let rank_at = |p: usize| ranks.get(p).copied().unwrap_or(0);
    let out: Vec<usize> = (0..c.dims.len())
        .map(|p| {
            let incoming = if p == 0 { 0 } else { rank_at(p - 1) };
            c.dims[p] - rank_at(p) - incoming
        })
        .collect();
    debug_assert_eq!(alternating_sum(&out), c.euler_characteristic());
    Ok(out)
}
