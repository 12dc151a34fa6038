use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_BASIS_CAP: usize = 200_000;

/// Occupation-number basis of the symmetric `N`-particle space over `M`
/// modes, enumerated in lexicographic order of `(n_0, …, n_{M−1})`.
/// `N = 0` gives the one-dimensional vacuum space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricBasis {
    n_modes: usize,
    n_particles: usize,
    occupations: Vec<u8>,
    // counts[m][r]: number of ways to place r particles in m modes
    counts: Vec<Vec<usize>>,
}

/// Number of occupation vectors, saturating at `usize::MAX`.
pub fn symmetric_dimension(n_modes: usize, n_particles: usize) -> usize {
    if n_modes == 0 {
        return usize::from(n_particles == 0);
    }
    // binom(M + N − 1, N), multiplied out in a form that stays integral
    let mut acc: u128 = 1;
    for i in 1..=n_particles as u128 {
        acc = acc * (n_modes as u128 - 1 + i) / i;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

impl SymmetricBasis {
    pub fn new(n_modes: usize, n_particles: usize) -> Result<Self> {
        Self::with_cap(n_modes, n_particles, DEFAULT_BASIS_CAP)
    }

    pub fn with_cap(n_modes: usize, n_particles: usize, cap: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::Config("basis needs at least one mode".into()));
        }
        if n_particles > u8::MAX as usize {
            return Err(Error::Size { required: n_particles, cap: u8::MAX as usize });
        }
        let dim = symmetric_dimension(n_modes, n_particles);
        if dim > cap {
            return Err(Error::Size { required: dim, cap });
        }
        let counts = (0..=n_modes).map(|m| (0..=n_particles).map(|r| symmetric_dimension(m, r)).collect()).collect();
        let mut occupations = Vec::with_capacity(dim * n_modes);
        let mut current = vec![0u8; n_modes];
        enumerate(&mut current, 0, n_particles, &mut occupations);
        debug_assert_eq!(occupations.len(), dim * n_modes);
        Ok(Self { n_modes, n_particles, occupations, counts })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dimension(&self) -> usize {
        self.occupations.len() / self.n_modes
    }

    pub fn occupation(&self, index: usize) -> &[u8] {
        &self.occupations[index * self.n_modes..(index + 1) * self.n_modes]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> {
        self.occupations.chunks_exact(self.n_modes)
    }

    /// Position of `occ` in the enumeration; `None` if it is not a valid
    /// occupation vector of this basis.
    pub fn index_of(&self, occ: &[u8]) -> Option<usize> {
        if occ.len() != self.n_modes || occ.iter().map(|&n| n as usize).sum::<usize>() != self.n_particles {
            return None;
        }
        Some(self.rank(occ))
    }

    pub(crate) fn rank(&self, occ: &[u8]) -> usize {
        let mut remaining = self.n_particles;
        let mut index = 0;
        for (i, &n) in occ[..self.n_modes - 1].iter().enumerate() {
            let rest = self.n_modes - i - 1;
            // vectors with a smaller value in slot i come first
            for v in 0..n as usize {
                index += self.counts[rest][remaining - v];
            }
            remaining -= n as usize;
        }
        index
    }
}

fn enumerate(current: &mut [u8], slot: usize, remaining: usize, out: &mut Vec<u8>) {
    if slot == current.len() - 1 {
        current[slot] = remaining as u8;
        out.extend_from_slice(current);
        return;
    }
    for v in 0..=remaining {
        current[slot] = v as u8;
        enumerate(current, slot + 1, remaining - v, out);
    }
    current[slot] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(SymmetricBasis::new(2, 2).unwrap().dimension(), 3);
        assert_eq!(SymmetricBasis::new(4, 3).unwrap().dimension(), 20);
        for d in 1..=8 {
            assert_eq!(SymmetricBasis::new(2 * d, 1).unwrap().dimension(), 2 * d);
        }
        assert_eq!(symmetric_dimension(16, 8), 490_314);
    }

    #[test]
    fn rank_is_inverse_of_enumeration() {
        for (m, n) in [(2, 5), (4, 3), (6, 4), (8, 3), (3, 7)] {
            let b = SymmetricBasis::new(m, n).unwrap();
            assert_eq!(b.dimension(), symmetric_dimension(m, n));
            for (i, occ) in b.iter().enumerate() {
                assert_eq!(occ.iter().map(|&x| x as usize).sum::<usize>(), n);
                assert_eq!(b.index_of(occ), Some(i));
            }
        }
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let b = SymmetricBasis::new(4, 3).unwrap();
        let occs: Vec<&[u8]> = b.iter().collect();
        assert!(occs.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cap_is_enforced() {
        match SymmetricBasis::with_cap(16, 8, 1000) {
            Err(Error::Size { required, cap }) => assert_eq!((required, cap), (490_314, 1000)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_foreign_occupations() {
        let b = SymmetricBasis::new(3, 2).unwrap();
        assert_eq!(b.index_of(&[1, 1, 1]), None);
        assert_eq!(b.index_of(&[2, 0]), None);
    }
}
