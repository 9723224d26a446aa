#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_cohom::catalog::{nef_models, NefModel};
use toric_cohom::{Fan, LatticePolyhedron, MVec, VirtualPolyhedron};

pub const CORPUS_SEED: u64 = 20_240_611;
pub const CORPUS_SIZE: usize = 200;

pub struct Instance {
    pub model: &'static str,
    pub plus_coeffs: Vec<u32>,
    pub minus_coeffs: Vec<u32>,
    pub bundle: VirtualPolyhedron,
}

impl std::fmt::Debug for Instance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {:?} - {:?}",
            self.model, self.plus_coeffs, self.minus_coeffs
        )
    }
}

pub fn origin(dim: usize) -> LatticePolyhedron {
    LatticePolyhedron::polytope(vec![MVec::zero(dim)]).unwrap()
}

/// `Σ c_i G_i`
pub fn combination(model: &NefModel, coeffs: &[u32]) -> LatticePolyhedron {
    model
        .generators
        .iter()
        .zip(coeffs)
        .fold(origin(model.fan.dim()), |acc, (g, &c)| {
            acc.minkowski_sum(&g.dilate(c)).unwrap()
        })
}

pub fn bundle(model: &NefModel, plus: &[u32], minus: &[u32]) -> VirtualPolyhedron {
    let fan = Arc::new(model.fan.clone());
    VirtualPolyhedron::new(combination(model, plus), combination(model, minus), fan).unwrap()
}

pub fn model(name: &str) -> NefModel {
    nef_models().into_iter().find(|m| m.name == name).unwrap()
}

/// Random virtual polyhedra over P1, P2, P1xP1 and F1, coefficients 0..=3 on each side.
pub fn corpus(size: usize, seed: u64) -> Vec<Instance> {
    let models = nef_models();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..size)
        .map(|k| {
            let model = &models[k % models.len()];
            let n = model.generators.len();
            let plus: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            let minus: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            Instance {
                model: model.name,
                bundle: bundle(model, &plus, &minus),
                plus_coeffs: plus,
                minus_coeffs: minus,
            }
        })
        .collect()
}

pub fn f1() -> Arc<Fan> {
    Arc::new(toric_cohom::catalog::hirzebruch1())
}
