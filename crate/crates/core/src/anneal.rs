//! Simulated annealing over the assignment of Majorana pairs to modes.

use std::thread;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fermion::{HamiltonianModel, MajoranaSet};

/// Identifier of the generator behind every random choice in this module.
pub const RNG_ALGORITHM: &str = "chacha8";

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealConfig {
    pub t0: f64,
    pub t1: f64,
    /// Linear temperature step.
    pub alpha: f64,
    /// Proposals per temperature.
    pub iters: usize,
    pub k: f64,
    pub seed: u64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            t0: 100.0,
            t1: 0.0,
            alpha: 1.0,
            iters: 500,
            k: 1.0,
            seed: 0,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if !(self.t0 > self.t1 && self.t1 >= 0.0) {
            return bad("temperatures need t0 > t1 >= 0");
        }
        if !(self.alpha > 0.0) {
            return bad("alpha must be positive");
        }
        if self.iters == 0 {
            return bad("iters must be at least 1");
        }
        if !(self.k > 0.0) {
            return bad("k must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnnealResult {
    pub best: MajoranaSet,
    pub weight: usize,
    pub initial_weight: usize,
    pub proposed: usize,
    pub accepted: usize,
    pub seed: u64,
}

/// Metropolis rule: improvements and ties always pass, uphill moves with
/// probability `exp(-delta·k/t)`. Nothing uphill passes at `t <= 0`.
pub fn metropolis_accept<R: Rng + ?Sized>(delta: i64, k: f64, t: f64, rng: &mut R) -> bool {
    if delta <= 0 {
        return true;
    }
    if t <= 0.0 {
        return false;
    }
    rng.random::<f64>() < (-(delta as f64) * k / t).exp()
}

/// Hamiltonian weight that can be updated after a mode swap by revisiting
/// only the products that touch the swapped modes.
struct IncrementalWeight {
    products: Vec<(Vec<usize>, usize)>,
    by_mode: Vec<Vec<usize>>,
    cached: Vec<usize>,
    total: usize,
}

impl IncrementalWeight {
    fn new(model: &HamiltonianModel, enc: &MajoranaSet) -> Self {
        let products: Vec<(Vec<usize>, usize)> = model
            .weighted_products()
            .into_iter()
            .map(|(p, m)| (p.indices().to_vec(), m))
            .collect();
        let mut by_mode = vec![Vec::new(); model.modes + 1];
        for (i, (idx, _)) in products.iter().enumerate() {
            let mut modes: Vec<usize> = idx.iter().map(|k| k.div_ceil(2)).collect();
            modes.dedup();
            for m in modes {
                by_mode[m].push(i);
            }
        }
        let cached: Vec<usize> = products
            .iter()
            .map(|(idx, m)| enc.product(idx).weight() * m)
            .collect();
        let total = cached.iter().sum();
        IncrementalWeight {
            products,
            by_mode,
            cached,
            total,
        }
    }

    fn touched(&self, x: usize, y: usize) -> Vec<usize> {
        let mut t: Vec<usize> = self.by_mode[x]
            .iter()
            .chain(&self.by_mode[y])
            .copied()
            .collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// Weight of `enc` (already swapped) assuming only `touched` changed.
    fn evaluate(&self, enc: &MajoranaSet, touched: &[usize]) -> (usize, Vec<usize>) {
        let fresh: Vec<usize> = touched
            .iter()
            .map(|&i| {
                let (idx, m) = &self.products[i];
                enc.product(idx).weight() * m
            })
            .collect();
        let old: usize = touched.iter().map(|&i| self.cached[i]).sum();
        (self.total - old + fresh.iter().sum::<usize>(), fresh)
    }

    fn commit(&mut self, touched: &[usize], fresh: Vec<usize>, total: usize) {
        for (&i, w) in touched.iter().zip(fresh) {
            self.cached[i] = w;
        }
        self.total = total;
    }
}

/// Anneals the pairing of `enc` for `model` and returns the best encoding
/// seen.
pub fn anneal_pairing(
    enc: &MajoranaSet,
    model: &HamiltonianModel,
    cfg: &AnnealConfig,
) -> Result<AnnealResult> {
    cfg.validate()?;
    if enc.modes() != model.modes {
        return Err(Error::ModeMismatch {
            encoding: enc.modes(),
            model: model.modes,
        });
    }
    let n = enc.modes();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut current = enc.clone();
    let mut weight = IncrementalWeight::new(model, &current);
    let initial_weight = weight.total;
    let mut best = (current.clone(), weight.total);
    let (mut proposed, mut accepted) = (0, 0);

    if n >= 2 {
        let mut t = cfg.t0;
        while t > cfg.t1 {
            for _ in 0..cfg.iters {
                let x = rng.random_range(1..=n);
                let mut y = rng.random_range(1..n);
                if y >= x {
                    y += 1;
                }
                proposed += 1;
                current.swap_modes(x, y)?;
                let touched = weight.touched(x, y);
                let (w, fresh) = weight.evaluate(&current, &touched);
                let delta = w as i64 - weight.total as i64;
                if metropolis_accept(delta, cfg.k, t, &mut rng) {
                    accepted += 1;
                    weight.commit(&touched, fresh, w);
                    if w < best.1 {
                        best = (current.clone(), w);
                    }
                } else {
                    current.swap_modes(x, y)?;
                }
            }
            t -= cfg.alpha;
        }
    }
    Ok(AnnealResult {
        best: best.0,
        weight: best.1,
        initial_weight,
        proposed,
        accepted,
        seed: cfg.seed,
    })
}

/// Independent runs with seeds `cfg.seed, cfg.seed + 1, …` on separate
/// threads. The lowest weight wins; ties go to the lower seed.
pub fn anneal_restarts(
    enc: &MajoranaSet,
    model: &HamiltonianModel,
    cfg: &AnnealConfig,
    restarts: usize,
) -> Result<AnnealResult> {
    let restarts = restarts.max(1);
    let results: Vec<Result<AnnealResult>> = thread::scope(|s| {
        let handles: Vec<_> = (0..restarts as u64)
            .map(|r| {
                let cfg = AnnealConfig {
                    seed: cfg.seed.wrapping_add(r),
                    ..cfg.clone()
                };
                s.spawn(move || anneal_pairing(enc, model, &cfg))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("annealing thread panicked"))
            .collect()
    });
    let mut best: Option<AnnealResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.weight < b.weight) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one restart"))
}
