//! Seeded random group elements and on-shell momenta.
//!
//! Words have at most three primitives, angles uniform in `[0, 2π)`,
//! rapidities uniform in `[0, 2]` and axes uniform on the sphere. On-shell
//! momenta have rapidity uniform in `[0, 2]` and a uniform direction.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lorentz::{FourVector, LorentzWord, Primitive, PrimitiveKind};

pub const MAX_RAPIDITY: f64 = 2.0;
pub const MAX_PRIMITIVES: usize = 3;

/// A deterministic stream of random draws.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    /// A uniformly distributed unit vector.
    pub fn axis(&mut self) -> [f64; 3] {
        let z = self.uniform(-1.0, 1.0);
        let phi = self.uniform(0.0, TAU);
        let s = (1.0 - z * z).sqrt();
        let v = [s * phi.cos(), s * phi.sin(), z];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.map(|x| x / n)
    }

    pub fn rapidity(&mut self) -> f64 {
        self.rng.random_range(0.0..=MAX_RAPIDITY)
    }
}

fn primitive(s: &mut Sampler, kind: PrimitiveKind) -> Primitive {
    let axis = s.axis();
    let parameter = match kind {
        PrimitiveKind::Rotation => s.uniform(0.0, TAU),
        PrimitiveKind::Boost => s.rapidity(),
    };
    Primitive { kind, axis, parameter }
}

/// One to three primitives, each a rotation or a boost with equal odds.
pub fn random_word(s: &mut Sampler) -> LorentzWord {
    let n = 1 + s.index(MAX_PRIMITIVES);
    LorentzWord(
        (0..n)
            .map(|_| {
                let kind = if s.index(2) == 0 { PrimitiveKind::Rotation } else { PrimitiveKind::Boost };
                primitive(s, kind)
            })
            .collect(),
    )
}

/// One to three rotation primitives.
pub fn random_rotation(s: &mut Sampler) -> LorentzWord {
    let n = 1 + s.index(MAX_PRIMITIVES);
    LorentzWord((0..n).map(|_| primitive(s, PrimitiveKind::Rotation)).collect())
}

pub fn random_on_shell(s: &mut Sampler, m: f64) -> FourVector {
    let axis = s.axis();
    let k = m * s.rapidity().sinh();
    FourVector::on_shell(axis.map(|x| k * x), m)
}

pub fn on_shell_batch(seed: u64, m: f64, n: usize) -> Vec<FourVector> {
    let mut s = Sampler::new(seed);
    (0..n).map(|_| random_on_shell(&mut s, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let a = on_shell_batch(42, 1.0, 5);
        let b = on_shell_batch(42, 1.0, 5);
        assert_eq!(a, b);
        assert_ne!(a, on_shell_batch(43, 1.0, 5));
    }

    #[test]
    fn words_respect_bounds() {
        let mut s = Sampler::new(1);
        for _ in 0..200 {
            let w = random_word(&mut s);
            assert!((1..=MAX_PRIMITIVES).contains(&w.len()));
            for p in &w.0 {
                let n = p.axis.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((n - 1.0).abs() < 1e-12);
                match p.kind {
                    PrimitiveKind::Rotation => assert!((0.0..TAU).contains(&p.parameter)),
                    PrimitiveKind::Boost => assert!((0.0..=MAX_RAPIDITY).contains(&p.parameter)),
                }
            }
        }
    }

    #[test]
    fn momenta_on_shell() {
        for p in on_shell_batch(9, 1.7, 100) {
            p.check_on_shell(1.7, 1e-12).unwrap();
            assert!(p.0[0] <= 1.7 * MAX_RAPIDITY.cosh() * (1.0 + 1e-12));
        }
    }
}
