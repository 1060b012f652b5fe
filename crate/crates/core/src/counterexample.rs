//! The sum inequality
//! `sum b_i^2 - sum a_i^2 <= 2 (sum b_i - sum a_i)` for `a_i, b_i` in `(0, 1]`,
//! together with witnesses of its failure.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Entries at or below this value are treated as outside `(0, 1]`.
pub const DOMAIN_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub violation: f64,
}

fn check_domain(values: &[f64]) -> Result<()> {
    match values.iter().find(|&&x| !(x > DOMAIN_FLOOR && x <= 1.0)) {
        Some(&x) => Err(Error::Domain(x)),
        None => Ok(()),
    }
}

/// Left side minus right side of the inequality; positive means it fails.
pub fn violation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::InvalidParameter(alloc::format!(
            "need equal nonempty lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    check_domain(a)?;
    check_domain(b)?;
    let sum = |v: &[f64]| v.iter().sum::<f64>();
    let squares = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>();
    Ok(squares(b) - squares(a) - 2.0 * (sum(b) - sum(a)))
}

/// Largest violation found by seeded uniform sampling.
///
/// The violation is a sum of independent terms `(b_i - a_i)(a_i + b_i - 2)`,
/// so the search samples `trials` pairs `(a, b)` from `(0, 1]^2`, keeps the
/// pair with the largest term and uses it in every coordinate. Each term is
/// below 1 on the domain, so the supremum is `k`, approached as `a_i -> 1`
/// and `b_i -> 0`.
pub fn search_max_violation(k: usize, trials: usize, seed: u64) -> Result<Witness> {
    if k == 0 || trials == 0 {
        return Err(Error::InvalidParameter("need k >= 1 and trials >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = || -> f64 {
        loop {
            // gen::<f64>() is in [0, 1); 1 - x lands in (0, 1].
            let x = 1.0 - rng.gen::<f64>();
            if x > DOMAIN_FLOOR {
                return x;
            }
        }
    };
    let mut best = (f64::NEG_INFINITY, 1.0, 1.0);
    for _ in 0..trials {
        let a = sample();
        let b = sample();
        let term = (b - a) * (a + b - 2.0);
        if term > best.0 {
            best = (term, a, b);
        }
    }
    let a = alloc::vec![best.1; k];
    let b = alloc::vec![best.2; k];
    let violation = violation(&a, &b)?;
    Ok(Witness { a, b, violation })
}

/// Upper bound `k` on the violation over the domain.
pub fn violation_supremum(k: usize) -> f64 {
    k as f64
}
