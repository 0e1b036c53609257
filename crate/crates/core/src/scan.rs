//! Exhaustive passes over `S_n`.
//!
//! Permutations are addressed by lexicographic rank so that a whole map
//! `S_n -> S_n` fits in one `Vec<u32>`. Work is split across the rayon pool;
//! every merge is order-insensitive, so results do not depend on the number
//! of threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::machine::MachineSpec;
use crate::perm::{factorial, Permutation};

/// Largest `n` for which a full table over `S_n` is built.
pub const SCAN_LIMIT: usize = 10;

pub fn check_bound(n: usize, bound: usize) -> Result<()> {
    if n > bound {
        Err(Error::Resource { n, bound })
    } else {
        Ok(())
    }
}

/// A machine tabulated on `S_n`: `image[r]` is the rank of the image of
/// the permutation with rank `r`.
#[derive(Clone, Debug)]
pub struct MapTable {
    n: usize,
    image: Vec<u32>,
}

impl MapTable {
    pub fn build(spec: &MachineSpec, n: usize) -> Result<Self> {
        check_bound(n, SCAN_LIMIT)?;
        let image = (0..factorial(n))
            .into_par_iter()
            .map(|r| spec.run(&Permutation::unrank(n, r)).rank() as u32)
            .collect();
        Ok(MapTable { n, image })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image_of(&self, rank: usize) -> usize {
        self.image[rank] as usize
    }

    pub fn perm(&self, rank: usize) -> Permutation {
        Permutation::unrank(self.n, rank as u64)
    }

    /// Number of preimages of each permutation, indexed by rank.
    pub fn tally(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.image.len()];
        for &t in &self.image {
            counts[t as usize] += 1;
        }
        counts
    }

    /// Marks the ranks lying on a cycle of the map.
    pub fn periodic_mask(&self) -> Vec<bool> {
        // Peel off everything with no remaining preimage; what is left
        // is exactly the union of cycles.
        let mut indeg = self.tally();
        let mut alive = vec![true; self.image.len()];
        let mut queue: Vec<usize> = (0..self.image.len()).filter(|&r| indeg[r] == 0).collect();
        while let Some(r) = queue.pop() {
            alive[r] = false;
            let t = self.image[r] as usize;
            indeg[t] -= 1;
            if indeg[t] == 0 {
                queue.push(t);
            }
        }
        alive
    }

    /// Length of the cycle through a periodic rank.
    pub fn cycle_length(&self, rank: usize) -> usize {
        let mut r = self.image_of(rank);
        let mut len = 1;
        while r != rank {
            r = self.image_of(r);
            len += 1;
        }
        len
    }

    /// Steps needed to reach `target` from each rank, with `target` closed
    /// under the map. Errors if some orbit never reaches it.
    pub fn depths(&self, target: &[bool]) -> Result<Vec<u32>> {
        const UNKNOWN: u32 = u32::MAX;
        let mut depth: Vec<u32> = target.iter().map(|&t| if t { 0 } else { UNKNOWN }).collect();
        let mut path = Vec::new();
        for start in 0..self.image.len() {
            let mut r = start;
            path.clear();
            while depth[r] == UNKNOWN {
                path.push(r);
                if path.len() > self.image.len() {
                    return Err(Error::Internal(format!(
                        "orbit of {} never reaches the target set",
                        self.perm(start)
                    )));
                }
                r = self.image_of(r);
            }
            let mut d = depth[r];
            for &p in path.iter().rev() {
                d += 1;
                depth[p] = d;
            }
        }
        Ok(depth)
    }
}

/// Number of permutations in `S_n` satisfying `pred`.
pub fn count_where(n: usize, bound: usize, pred: impl Fn(&Permutation) -> bool + Sync) -> Result<u64> {
    check_bound(n, bound)?;
    Ok((0..factorial(n))
        .into_par_iter()
        .filter(|&r| pred(&Permutation::unrank(n, r)))
        .count() as u64)
}

/// Members of `S_n` satisfying `pred`, in lexicographic order.
pub fn collect_where(
    n: usize,
    bound: usize,
    pred: impl Fn(&Permutation) -> bool + Sync,
) -> Result<Vec<Permutation>> {
    check_bound(n, bound)?;
    Ok((0..factorial(n))
        .into_par_iter()
        .map(|r| Permutation::unrank(n, r))
        .filter(|p| pred(p))
        .collect())
}
