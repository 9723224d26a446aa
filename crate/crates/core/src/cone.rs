//! Finitely generated rational cones given by ray generators.

use crate::error::{Error, Result};
use crate::fan::RaySet;
use crate::lattice::{LatticeVector, RationalPoint, Space};
use crate::linalg::{IntegerMatrix, LinearSystem};

/// The cone spanned by finitely many primitive lattice vectors. Tail cones of polyhedra
/// live in `M`, fan cones in `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone<S: Space> {
    dim: usize,
    rays: Vec<LatticeVector<S>>,
    index: Option<RaySet>,
}

impl<S: Space> Cone<S> {
    /// Rays are replaced by their primitive generators and deduplicated. Zero rays are
    /// rejected; pointedness is *not* checked here (see [`Cone::is_pointed`]).
    pub fn new(dim: usize, rays: Vec<LatticeVector<S>>) -> Result<Self> {
        let mut out: Vec<LatticeVector<S>> = Vec::with_capacity(rays.len());
        for r in rays {
            r.check_dim(dim)?;
            let p = r
                .primitive()
                .ok_or_else(|| Error::InvalidInput("zero ray generator".into()))?;
            if !out.contains(&p) {
                out.push(p);
            }
        }
        Ok(Self {
            dim,
            rays: out,
            index: None,
        })
    }

    /// The zero cone.
    pub fn origin(dim: usize) -> Self {
        Self {
            dim,
            rays: Vec::new(),
            index: None,
        }
    }

    pub(crate) fn with_index(dim: usize, rays: Vec<LatticeVector<S>>, index: RaySet) -> Self {
        Self {
            dim,
            rays,
            index: Some(index),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector<S>] {
        &self.rays
    }

    /// Ray indices into the ambient fan, when the cone came from one.
    pub fn index(&self) -> Option<RaySet> {
        self.index
    }

    /// Dimension of the linear span.
    pub fn rank(&self) -> usize {
        rank_of(&self.rays)
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn is_simplicial(&self) -> bool {
        self.rank() == self.rays.len()
    }

    /// `σ ∩ (−σ) = {0}`: some linear form is strictly positive on every ray.
    pub fn is_pointed(&self) -> bool {
        let mut sys = LinearSystem::new(self.dim);
        for r in &self.rays {
            sys.ge(r.coords(), 1);
        }
        sys.is_feasible()
    }

    /// Membership of `m` in the dual cone: `<m, ρ> >= 0` for every ray.
    pub fn dual_contains(&self, m: &LatticeVector<S::Dual>) -> bool {
        self.rays.iter().all(|r| r.pair(m) >= 0)
    }

    /// Rational variant of [`Cone::dual_contains`].
    pub fn dual_contains_point(&self, m: &RationalPoint<S::Dual>) -> bool {
        self.rays.iter().all(|r| m.pair_at_least(r, 0))
    }

    /// Exact membership of a lattice vector in the cone.
    pub fn contains(&self, v: &LatticeVector<S>) -> bool {
        if v.is_zero() {
            return true;
        }
        if self.rays.is_empty() {
            return false;
        }
        // v = sum λ_i r_i, λ >= 0
        let k = self.rays.len();
        let mut sys = LinearSystem::new(k);
        for coord in 0..self.dim {
            let row: Vec<i64> = self.rays.iter().map(|r| r.coords()[coord]).collect();
            sys.eq(&row, v.coords()[coord]);
        }
        for i in 0..k {
            let mut e = vec![0; k];
            e[i] = 1;
            sys.ge(&e, 0);
        }
        sys.is_feasible()
    }

    /// Same point set as `other`.
    pub fn same_cone(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.rays.iter().all(|r| other.contains(r))
            && other.rays.iter().all(|r| self.contains(r))
    }

    /// Whether the rays with local indices in `subset` span a face, i.e. some linear form
    /// vanishes on them and is positive on all other rays.
    pub fn is_face(&self, subset: RaySet) -> bool {
        let mut sys = LinearSystem::new(self.dim);
        for (i, r) in self.rays.iter().enumerate() {
            if subset.contains(i) {
                sys.eq(r.coords(), 0);
            } else {
                sys.ge(r.coords(), 1);
            }
        }
        sys.is_feasible()
    }

    /// All faces, as sets of local ray indices (including the empty face and the cone
    /// itself). Assumes the cone is pointed.
    pub fn faces(&self) -> Vec<RaySet> {
        let k = self.rays.len();
        assert!(k <= RaySet::CAPACITY, "too many rays");
        let simplicial = self.is_simplicial();
        let all = RaySet::full(k);
        all.subsets()
            .filter(|&s| simplicial || s == all || self.is_face(s))
            .collect()
    }
}

pub(crate) fn rank_of<S: Space>(vs: &[LatticeVector<S>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<i64>> = vs.iter().map(|v| v.coords().to_vec()).collect();
    IntegerMatrix::from_rows(&rows)
        .expect("equal lengths")
        .rank()
}
