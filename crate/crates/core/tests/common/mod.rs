#![allow(dead_code)]

use gatelim::circuit::{Circuit, CircuitBuilder, VertexId};
use gatelim::rewrite::{normalize_circuit, Strategy};
use rand::Rng;

#[derive(Clone, Copy, Debug)]
pub struct GenConfig {
    pub inputs: u32,
    pub gates: usize,
    /// Chance that a constant joins the argument pool before each gate.
    pub constant_rate: f64,
}

/// A random DeMorgan circuit with at most `gates` binary gates.
///
/// Each gate takes two arguments drawn uniformly from the inputs, earlier
/// gates and any constants added so far; each argument is negated through a
/// fresh NOT edge with probability 1/4, as is the output.
pub fn random_circuit<R: Rng>(rng: &mut R, cfg: GenConfig) -> Circuit {
    let mut b = CircuitBuilder::demorgan(cfg.inputs);
    let mut pool: Vec<VertexId> = (1..=cfg.inputs).map(|i| b.input(i)).collect();
    let mut last = None;
    for _ in 0..cfg.gates {
        if cfg.constant_rate > 0.0 && rng.gen_bool(cfg.constant_rate) {
            let k = b.constant(rng.gen());
            pool.push(k);
        }
        if pool.is_empty() {
            let k = b.constant(rng.gen());
            pool.push(k);
        }
        let arg = |b: &mut CircuitBuilder, rng: &mut R| {
            let v = pool[rng.gen_range(0..pool.len())];
            if rng.gen_bool(0.25) {
                b.not(v)
            } else {
                v
            }
        };
        let l = arg(&mut b, rng);
        let r = arg(&mut b, rng);
        let g = if rng.gen() { b.and(l, r) } else { b.or(l, r) };
        pool.push(g);
        last = Some(g);
    }
    let mut out = match last {
        Some(g) => g,
        None if cfg.inputs > 0 => b.input(1),
        None => b.constant(true),
    };
    if rng.gen_bool(0.25) {
        out = b.not(out);
    }
    b.finish(out).expect("generated circuits are valid")
}

/// Random circuit that keeps sampling until it has at least one binary
/// gate after normalization.
pub fn random_nondegenerate_circuit<R: Rng>(rng: &mut R, cfg: GenConfig) -> Circuit {
    assert!(cfg.inputs >= 2 && cfg.gates > 0);
    loop {
        let c = random_circuit(rng, cfg);
        let (n, _) = normalize_circuit(&c, Strategy::Deterministic).expect("normalization succeeds");
        if n.size() > 0 {
            return c;
        }
    }
}
