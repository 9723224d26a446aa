//! Torus-invariant divisors and the polyhedron/divisor dictionary.
//!
//! A compatible polyhedron `Δ` gives the divisor with `λ_ρ = -min<Δ, ρ>`, so that
//! `Δ = {x : <x, ρ> >= -λ_ρ for all rays ρ}`. A formal difference `Δ⁺ - Δ⁻` of two such
//! polyhedra is a [`VirtualPolyhedron`].

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::{Fan, RaySet};
use crate::lattice::{MVec, M};
use crate::linalg::{Rational, RationalMatrix, Solution};
use crate::polyhedron::LatticePolyhedron;

/// `D = Σ λ_ρ D_ρ`, one coefficient per ray of the ambient fan, in ray order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ToricDivisor {
    coefficients: Vec<i64>,
}

impl ToricDivisor {
    pub fn new(coefficients: Vec<i64>) -> Self {
        Self { coefficients }
    }

    pub fn zero(rays: usize) -> Self {
        Self::new(vec![0; rays])
    }

    /// The canonical divisor `-Σ D_ρ`.
    pub fn canonical(rays: usize) -> Self {
        Self::new(vec![-1; rays])
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self::new(
            self.coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(self.coefficients.iter().map(|a| a * k).collect())
    }

    fn check_fan(&self, fan: &Fan) -> Result<()> {
        if self.len() == fan.rays().len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: fan.rays().len(),
                got: self.len(),
            })
        }
    }
}

impl fmt::Display for ToricDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coefficients)
    }
}

pub fn divisor_of_polyhedron(p: &LatticePolyhedron, fan: &Fan) -> Result<ToricDivisor> {
    if let crate::polyhedron::Compatibility::Incompatible { witness } = p.is_compatible(fan) {
        return Err(Error::NotCompatible { witness });
    }
    fan.rays()
        .iter()
        .map(|r| p.support_min(r).map(|m| -m))
        .collect::<Result<Vec<_>>>()
        .map(ToricDivisor::new)
}

/// The line bundle `O(Δ⁺ - Δ⁻)`: two polyhedra with a common tail cone, both compatible
/// with the fan. The vertices `v_σ^±` are computed once, per maximal cone.
#[derive(Clone, Debug)]
pub struct VirtualPolyhedron {
    plus: LatticePolyhedron,
    minus: LatticePolyhedron,
    fan: Arc<Fan>,
    v_plus: Vec<MVec>,
    v_minus: Vec<MVec>,
}

impl VirtualPolyhedron {
    pub fn new(plus: LatticePolyhedron, minus: LatticePolyhedron, fan: Arc<Fan>) -> Result<Self> {
        for p in [&plus, &minus] {
            if p.dim() != fan.dim() {
                return Err(Error::DimensionMismatch {
                    expected: fan.dim(),
                    got: p.dim(),
                });
            }
        }
        if !plus.same_tail(&minus) {
            return Err(Error::TailMismatch);
        }
        let v_plus = plus.vertices_on(&fan)?;
        let v_minus = minus.vertices_on(&fan)?;
        Ok(Self {
            plus,
            minus,
            fan,
            v_plus,
            v_minus,
        })
    }

    /// `O(Δ)`, i.e. `Δ - δ`.
    pub fn nef(p: LatticePolyhedron, fan: Arc<Fan>) -> Result<Self> {
        let neutral = LatticePolyhedron::neutral(p.tail());
        Self::new(p, neutral, fan)
    }

    pub fn plus(&self) -> &LatticePolyhedron {
        &self.plus
    }

    pub fn minus(&self) -> &LatticePolyhedron {
        &self.minus
    }

    pub fn fan(&self) -> &Arc<Fan> {
        &self.fan
    }

    pub fn tail(&self) -> &Cone<M> {
        self.plus.tail()
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    /// `(v_τ⁺, v_τ⁻)`, taken from the least-index maximal cone containing `τ`.
    pub fn vertex_pair(&self, tau: RaySet) -> Option<(&MVec, &MVec)> {
        let i = self.fan.containing_max_cone(tau)?;
        Some((&self.v_plus[i], &self.v_minus[i]))
    }

    pub fn divisor(&self) -> ToricDivisor {
        let rays = self.fan.rays();
        ToricDivisor::new(
            rays.iter()
                .map(|r| {
                    let plus = self.plus.support_min(r).expect("compatible");
                    let minus = self.minus.support_min(r).expect("compatible");
                    minus - plus
                })
                .collect(),
        )
    }

    /// `(Δ⁺ + s, Δ⁻)`, the bundle `χ^s · O(Δ⁺ - Δ⁻)`.
    pub fn shift(&self, s: &MVec) -> Self {
        Self {
            plus: self.plus.translate(s),
            minus: self.minus.clone(),
            fan: self.fan.clone(),
            v_plus: self.v_plus.iter().map(|v| v + s).collect(),
            v_minus: self.v_minus.clone(),
        }
    }

    /// `(Δ⁺ + P, Δ⁻ + P)`; the same element of the Grothendieck group.
    pub fn add_to_both(&self, p: &LatticePolyhedron) -> Result<Self> {
        Self::new(
            self.plus.minkowski_sum(p)?,
            self.minus.minkowski_sum(p)?,
            self.fan.clone(),
        )
    }

    /// `(Δ⁻, Δ⁺)`, the dual bundle.
    pub fn dual(&self) -> Self {
        Self {
            plus: self.minus.clone(),
            minus: self.plus.clone(),
            fan: self.fan.clone(),
            v_plus: self.v_minus.clone(),
            v_minus: self.v_plus.clone(),
        }
    }
}

pub fn divisor_of_virtual(l: &VirtualPolyhedron) -> ToricDivisor {
    l.divisor()
}

/// Per maximal cone, the lattice point `v_σ` with `<v_σ, ρ> = -λ_ρ` for all `ρ ∈ σ(1)`.
/// Fails if some maximal cone admits no integral solution.
pub fn cartier_data(d: &ToricDivisor, fan: &Fan) -> Result<Vec<MVec>> {
    d.check_fan(fan)?;
    fan.max_cones()
        .iter()
        .map(|&s| {
            let rows: Vec<Vec<i64>> = s.iter().map(|i| fan.ray(i).coords().to_vec()).collect();
            let rhs: Vec<Rational> = s
                .iter()
                .map(|i| Rational::from_integer((-d.coefficients()[i]).into()))
                .collect();
            let a = RationalMatrix::from_integer_rows(&rows)?;
            match a.solve(&rhs) {
                Solution::Unique(v) => v
                    .iter()
                    .map(|x| {
                        if x.is_integer() {
                            i64::try_from(x.to_integer()).map_err(|_| Error::NotCartier { cone: s })
                        } else {
                            Err(Error::NotCartier { cone: s })
                        }
                    })
                    .collect::<Result<Vec<i64>>>()
                    .map(MVec::new),
                Solution::Inconsistent => Err(Error::NotCartier { cone: s }),
                Solution::Underdetermined => Err(Error::InvalidInput(format!(
                    "maximal cone {s} is not full-dimensional"
                ))),
            }
        })
        .collect()
}

/// Nef test: Cartier on every maximal cone, and the assembled piecewise linear function is
/// concave, i.e. `<v_σ, ρ> >= -λ_ρ` for every maximal cone `σ` and every ray `ρ`.
pub fn is_nef(d: &ToricDivisor, fan: &Fan) -> Result<bool> {
    let data = cartier_data(d, fan)?;
    let nef = concavity_gaps(d, fan, &data).all(|(_, _, gap)| gap >= 0);
    Ok(nef)
}

/// `(σ, ρ, <v_σ, ρ> + λ_ρ)` for all rays `ρ` outside `σ`.
fn concavity_gaps<'a>(
    d: &'a ToricDivisor,
    fan: &'a Fan,
    data: &'a [MVec],
) -> impl Iterator<Item = (usize, usize, i64)> + 'a {
    fan.max_cones().iter().enumerate().flat_map(move |(k, &s)| {
        (0..fan.rays().len())
            .filter(move |&i| !s.contains(i))
            .map(move |i| (k, i, data[k].pair(fan.ray(i)) + d.coefficients()[i]))
    })
}

/// `{x : <x, ρ> >= -λ_ρ}` for a nef divisor, as `conv{v_σ} + δ`.
pub fn polyhedron_of(d: &ToricDivisor, fan: &Fan, tail: &Cone<M>) -> Result<LatticePolyhedron> {
    let data = cartier_data(d, fan)?;
    if !concavity_gaps(d, fan, &data).all(|(_, _, gap)| gap >= 0) {
        return Err(Error::NotNef);
    }
    LatticePolyhedron::with_tail(data, tail.clone())
}

#[derive(Clone, Debug)]
pub struct NefDecomposition {
    /// The smallest `N` with `D + N·A` nef.
    pub multiple: u32,
    /// `(polyhedron of D + N·A, N·A)`.
    pub bundle: VirtualPolyhedron,
}

/// Writes `D` as `Δ⁺ - N·A` with `A` ample, `N` minimal.
pub fn nef_decompose(
    d: &ToricDivisor,
    fan: &Arc<Fan>,
    ample: Option<&LatticePolyhedron>,
) -> Result<NefDecomposition> {
    let ample = ample.ok_or(Error::NoAmpleGiven)?;
    let a = divisor_of_polyhedron(ample, fan)?;
    let a_data = cartier_data(&a, fan)?;
    let d_data = cartier_data(d, fan)?;

    // upper cutoff from strict convexity of the ample support function
    let a_gaps: Vec<(usize, usize, i64)> = concavity_gaps(&a, fan, &a_data).collect();
    let mut cutoff: i64 = 0;
    for ((k, i, need), (_, _, gain)) in concavity_gaps(d, fan, &d_data).zip(&a_gaps) {
        if *gain <= 0 {
            return Err(Error::NotAmple(format!(
                "support function is not strictly convex across cone {k} and ray {i}"
            )));
        }
        if need < 0 {
            cutoff = cutoff.max((-need + gain - 1) / gain);
        }
    }

    let mut n = 0i64;
    let shifted = loop {
        let candidate = d.add(&a.scale(n));
        if is_nef(&candidate, fan)? {
            break candidate;
        }
        assert!(n < cutoff, "cutoff bounds the search");
        n += 1;
    };
    let multiple =
        u32::try_from(n).map_err(|_| Error::InvalidInput("multiple too large".into()))?;
    let plus = polyhedron_of(&shifted, fan, ample.tail())?;
    let minus = ample.dilate(multiple);
    Ok(NefDecomposition {
        multiple,
        bundle: VirtualPolyhedron::new(plus, minus, fan.clone())?,
    })
}

/// `m` with `λ¹_ρ - λ²_ρ = <m, ρ>` for all rays, if one exists in `M`. The rays of a
/// full-dimensional fan span `N_R`, so `m` is unique when it exists.
pub fn linearly_equivalent(d1: &ToricDivisor, d2: &ToricDivisor, fan: &Fan) -> Option<MVec> {
    d1.check_fan(fan).ok()?;
    d2.check_fan(fan).ok()?;
    let diff = d1.sub(d2);
    if diff.coefficients().iter().all(Zero::is_zero) {
        return Some(MVec::zero(fan.dim()));
    }
    let rows: Vec<Vec<i64>> = fan.rays().iter().map(|r| r.coords().to_vec()).collect();
    let a = RationalMatrix::from_integer_rows(&rows).ok()?;
    let rhs: Vec<Rational> = diff
        .coefficients()
        .iter()
        .map(|&x| Rational::from_integer(x.into()))
        .collect();
    match a.solve(&rhs) {
        Solution::Unique(v) => v
            .iter()
            .map(|x| {
                x.is_integer()
                    .then(|| i64::try_from(x.to_integer()).ok())
                    .flatten()
            })
            .collect::<Option<Vec<i64>>>()
            .map(MVec::new),
        _ => None,
    }
}
