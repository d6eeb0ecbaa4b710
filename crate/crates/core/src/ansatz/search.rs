use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tensor::CMat;
use crate::verify::{verify_gybe, GybeSignature};

/// Largest matrix size searched without `force`.
pub const SEARCH_CAP: usize = 16;

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub limit: Option<usize>,
    pub force: bool,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { limit: None, force: false, jobs: None, tol: 1e-12 }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Exact check on basis indices. `A = π⊗id` and `B = id⊗π` act as index maps,
/// so `ABA = BAB` holds iff the two composites agree on every index. The
/// first mismatch ends the check.
fn permutation_solves(perm: &[usize], n: usize, pad: usize) -> bool {
    let a = |idx: usize| perm[idx / pad] * pad + idx % pad;
    let b = |idx: usize| (idx / n) * n + perm[idx % n];
    (0..n * pad).all(|idx| a(b(a(idx))) == b(a(b(idx))))
}

fn block(first: usize, n: usize, pad: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&k| k != first)).collect();
    let mut hits = Vec::new();
    loop {
        if permutation_solves(&p, n, pad) {
            hits.push(p.clone());
        }
        if !next_permutation(&mut p) || p[0] != first {
            return hits;
        }
    }
}

/// Images `perm` (column `j` maps to row `perm[j]`) of every permutation
/// matrix solving the equation, in lexicographic order.
pub fn search_permutation_images(sig: GybeSignature, opts: SearchOptions) -> Result<Vec<Vec<usize>>> {
    let n = sig.r_dim();
    if n > SEARCH_CAP && !opts.force {
        return Err(Error::CapExceeded { dim: n as u128, cap: SEARCH_CAP as u128 });
    }
    let pad = sig.d.pow(sig.l as u32);
    let run = || -> Vec<Vec<usize>> {
        let blocks: Vec<Vec<Vec<usize>>> = (0..n).into_par_iter().map(|f| block(f, n, pad)).collect();
        blocks.into_iter().flatten().collect()
    };
    let mut found = match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run),
        None => run(),
    };
    // confirm each hit numerically
    let mut confirmed = Vec::with_capacity(found.len());
    for p in found.drain(..) {
        if verify_gybe(&CMat::permutation(&p), sig, opts.tol)?.passed {
            confirmed.push(p);
        }
        if opts.limit.is_some_and(|l| confirmed.len() >= l) {
            break;
        }
    }
    Ok(confirmed)
}

pub fn search_permutation_solutions(sig: GybeSignature, opts: SearchOptions) -> Result<Vec<CMat>> {
    Ok(search_permutation_images(sig, opts)?.iter().map(|p| CMat::permutation(p)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::swap_operator;

    fn inverse(p: &[usize]) -> Vec<usize> {
        let mut inv = vec![0; p.len()];
        for (j, &i) in p.iter().enumerate() {
            inv[i] = j;
        }
        inv
    }

    #[test]
    fn lexicographic_enumeration_is_complete() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
        assert_eq!(p, vec![3, 2, 1, 0]);
    }

    #[test]
    fn braided_qubit_search_contains_identity_and_swap() {
        let sig = GybeSignature::braided(2).unwrap();
        let sols = search_permutation_solutions(sig, SearchOptions::default()).unwrap();
        assert!(sols.contains(&CMat::identity(4)));
        assert!(sols.contains(&swap_operator(2)));
    }

    #[test]
    fn large_padding_leaves_only_identity() {
        let sig = GybeSignature::new(2, 3, 3).unwrap();
        let sols = search_permutation_images(sig, SearchOptions::default()).unwrap();
        assert_eq!(sols, vec![(0..8).collect::<Vec<_>>()]);
    }

    #[test]
    fn results_are_closed_under_inverse_and_ordered() {
        let sig = GybeSignature::new(2, 3, 2).unwrap();
        let sols = search_permutation_images(sig, SearchOptions { jobs: Some(2), ..Default::default() }).unwrap();
        assert!(!sols.is_empty());
        assert!(sols.windows(2).all(|w| w[0] < w[1]));
        for p in &sols {
            assert!(sols.contains(&inverse(p)));
        }
        let limited = search_permutation_images(sig, SearchOptions { limit: Some(3), ..Default::default() }).unwrap();
        assert_eq!(limited, sols[..3]);
    }

    #[test]
    fn cap_is_enforced() {
        let sig = GybeSignature::new(3, 3, 1).unwrap();
        assert!(matches!(
            search_permutation_images(sig, SearchOptions::default()),
            Err(Error::CapExceeded { dim: 27, cap: 16 })
        ));
    }
}
