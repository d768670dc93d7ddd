use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KappaError {
    #[error("label vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("label vectors are empty")]
    Empty,
}

/// Cohen's kappa between two aligned label vectors.
///
/// Computed from integer counts as `(n·agree − Σ a_l·b_l) / (n² − Σ a_l·b_l)`,
/// which equals `(p_o − p_e) / (1 − p_e)` and cannot exceed 1. When both
/// annotators use one single label throughout (`p_e = 1`) the result is 1.
pub fn cohen_kappa<S: Scalar, L: Eq + Hash>(a: &[L], b: &[L]) -> Result<S, KappaError> {
    if a.len() != b.len() {
        return Err(KappaError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(KappaError::Empty);
    }
    let n = a.len() as i128;
    let agree = a.iter().zip(b).filter(|(x, y)| x == y).count() as i128;

    let mut marginals: HashMap<&L, (i128, i128)> = HashMap::new();
    for x in a {
        marginals.entry(x).or_default().0 += 1;
    }
    for y in b {
        marginals.entry(y).or_default().1 += 1;
    }
    let chance: i128 = marginals.values().map(|(ca, cb)| ca * cb).sum();

    let den = n * n - chance;
    if den == 0 {
        return Ok(S::one());
    }
    Ok(S::from_ratio(n * agree - chance, den))
}
