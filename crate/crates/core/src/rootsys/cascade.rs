use super::{RootSystem, RootSystemError};

fn strongly_orthogonal(rs: &RootSystem, i: usize, j: usize) -> bool {
    i != j && rs.sum_index(i, j).is_none() && rs.difference_index(i, j).is_none()
}

/// Exhaustive search for a largest set of pairwise strongly orthogonal long
/// roots among `candidates`. Candidates are visited in root order (descending
/// lexicographic), and the first largest set found wins, which makes the
/// choice the lexicographically smallest index sequence among the maxima.
pub(crate) fn maximal_strongly_orthogonal(rs: &RootSystem, candidates: &[usize]) -> Vec<usize> {
    let long: Vec<usize> = candidates.iter().copied().filter(|&i| rs.is_long(i)).collect();
    let mut best = Vec::new();
    let mut current = Vec::new();
    search(rs, &long, 0, &mut current, &mut best);
    best
}

fn search(rs: &RootSystem, pool: &[usize], from: usize, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    if current.len() + (pool.len() - from) <= best.len() {
        return;
    }
    for k in from..pool.len() {
        let cand = pool[k];
        if current.iter().all(|&c| strongly_orthogonal(rs, c, cand)) {
            current.push(cand);
            search(rs, pool, k + 1, current, best);
            current.pop();
        }
    }
}

/// The cascade `Γ = [γ₁, …, γ_r]` of pairwise strongly orthogonal long roots
/// in `Δ_n⁺`, as root indices.
pub fn strongly_orthogonal_cascade(rs: &RootSystem) -> Result<Vec<usize>, RootSystemError> {
    let candidates = rs.noncompact_positive();
    if candidates.is_empty() {
        return Err(RootSystemError::EmptyNoncompact);
    }
    Ok(maximal_strongly_orthogonal(rs, &candidates))
}
