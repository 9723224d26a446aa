//! Two oracles independent of the Čech construction: the simplicial model of the classical
//! sets `V_{D,m}`, and global sections by polyhedral containment.

use std::collections::{BTreeMap, BTreeSet};

use crate::divisor::{ToricDivisor, VirtualPolyhedron};
use crate::error::{Error, Result};
use crate::fan::{Fan, RaySet};
use crate::lattice::MVec;
use crate::linalg::{cohomology_dims, ChainComplexDims, Field, IntegerMatrix};

use super::truncate;

pub fn classical_cohomology(d: &ToricDivisor, fan: &Fan, m: &MVec) -> Result<Vec<usize>> {
    classical_cohomology_over(d, fan, m, Field::Rational)
}

/// `H^i = H̃^{i-1}(K(m))` where `K(m)` is the full subcomplex of the fan on the rays with
/// `<m, ρ> < -λ_ρ`. The empty complex has `H̃^{-1} = k`.
pub fn classical_cohomology_over(
    d: &ToricDivisor,
    fan: &Fan,
    m: &MVec,
    field: Field,
) -> Result<Vec<usize>> {
    if let Some(cone) = fan.first_non_simplicial() {
        return Err(Error::NonSimplicialFan { cone });
    }
    if d.len() != fan.rays().len() {
        return Err(Error::DimensionMismatch {
            expected: fan.rays().len(),
            got: d.len(),
        });
    }
    m.check_dim(fan.dim())?;
    let vertices = RaySet::from_indices(
        (0..fan.rays().len()).filter(|&i| m.pair(fan.ray(i)) < -d.coefficients()[i]),
    );

    // simplices grouped by size; size 0 is the augmentation
    let mut simplices: Vec<BTreeSet<RaySet>> = vec![BTreeSet::new(); fan.dim() + 1];
    for &s in fan.max_cones() {
        for face in s.intersection(vertices).subsets() {
            simplices[face.len()].insert(face);
        }
    }
    simplices[0].insert(RaySet::empty());
    while simplices.last().is_some_and(BTreeSet::is_empty) {
        simplices.pop();
    }

    let index: Vec<BTreeMap<RaySet, usize>> = simplices
        .iter()
        .map(|level| level.iter().enumerate().map(|(k, &s)| (s, k)).collect())
        .collect();
    let dims: Vec<usize> = simplices.iter().map(BTreeSet::len).collect();
    let mut boundaries = Vec::new();
    for p in 0..dims.len().saturating_sub(1) {
        let mut delta = IntegerMatrix::zeros(dims[p + 1], dims[p]);
        for (&t, &row) in &index[p + 1] {
            for (position, v) in t.iter().enumerate() {
                let mut face = t;
                face = RaySet::from_indices(face.iter().filter(|&i| i != v));
                let sign = if position % 2 == 0 { 1 } else { -1 };
                delta.set(row, index[p][&face], sign);
            }
        }
        boundaries.push(delta);
    }
    let complex = ChainComplexDims::new(dims, boundaries)?;
    Ok(truncate(cohomology_dims(&complex, field)?, fan.dim()))
}

/// 1 if `Δ⁻ + m ⊆ Δ⁺`, else 0, testing each generator of `Δ⁻` against the ray inequalities
/// of `Δ⁺`.
pub fn h0_containment(l: &VirtualPolyhedron, m: &MVec) -> usize {
    let fan = l.fan();
    let mins: Vec<i64> = fan
        .rays()
        .iter()
        .map(|r| l.plus().support_min(r).expect("compatible"))
        .collect();
    let inside = l.minus().points().iter().all(|q| {
        let shifted = q + m;
        fan.rays()
            .iter()
            .zip(&mins)
            .all(|(r, &min)| shifted.pair(r) >= min)
    });
    usize::from(inside)
}
