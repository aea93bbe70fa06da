use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest branch count the bitmask encoding supports.
pub const MAX_BRANCHES: u32 = 31;

/// Default cap used by front ends, since most operations enumerate `2^r` subsets.
pub const DEFAULT_BRANCH_CAP: u32 = 16;

pub fn check_branches(r: u32) -> Result<()> {
    if r == 0 || r > MAX_BRANCHES {
        return Err(Error::BranchCount {
            r,
            max: MAX_BRANCHES,
        });
    }
    Ok(())
}

fn full_mask(r: u32) -> u32 {
    (1u32 << r) - 1
}

/// A nonempty subset `I ⊆ {1,…,r}`, naming the closed stratum `Y_I` (the
/// intersection of the branches in `I`) and its open part `Y_I^0`.
///
/// Encoded as a characteristic vector; bit `i - 1` is set when branch `i`
/// belongs to the subset. Strata order lexicographically on their sorted
/// member lists, so `{1} < {1,2} < {1,2,3} < {1,3} < {2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Stratum {
    mask: u32,
    r: u32,
}

#[allow(clippy::len_without_is_empty)] // a stratum is never empty
impl Stratum {
    pub fn new<I: IntoIterator<Item = u32>>(members: I, r: u32) -> Result<Self> {
        check_branches(r)?;
        let mut mask = 0u32;
        for member in members {
            if member == 0 || member > r {
                return Err(Error::BranchOutOfRange { member, r });
            }
            mask |= 1 << (member - 1);
        }
        Self::from_mask(mask, r)
    }

    pub fn from_mask(mask: u32, r: u32) -> Result<Self> {
        check_branches(r)?;
        if mask == 0 {
            return Err(Error::EmptyStratum);
        }
        if mask & !full_mask(r) != 0 {
            let member = 32 - mask.leading_zeros();
            return Err(Error::BranchOutOfRange { member, r });
        }
        Ok(Stratum { mask, r })
    }

    /// The deepest stratum `{1,…,r}`.
    pub fn full(r: u32) -> Result<Self> {
        check_branches(r)?;
        Ok(Stratum {
            mask: full_mask(r),
            r,
        })
    }

    pub fn singleton(member: u32, r: u32) -> Result<Self> {
        Self::new([member], r)
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of branches through the stratum (`♯I`).
    pub fn len(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn is_full(&self) -> bool {
        self.mask == full_mask(self.r)
    }

    pub fn contains(&self, member: u32) -> bool {
        member >= 1 && member <= self.r && self.mask & (1 << (member - 1)) != 0
    }

    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        (1..=self.r).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.members().collect()
    }

    pub fn is_subset(&self, other: &Stratum) -> bool {
        self.r == other.r && self.mask & !other.mask == 0
    }

    /// `self ⊂ other` with exactly one extra branch in `other`.
    pub fn is_covered_by(&self, other: &Stratum) -> bool {
        self.is_subset(other) && other.len() == self.len() + 1
    }

    pub fn union(&self, other: &Stratum) -> Stratum {
        debug_assert_eq!(self.r, other.r);
        Stratum {
            mask: self.mask | other.mask,
            r: self.r,
        }
    }

    pub fn with_member(&self, member: u32) -> Result<Stratum> {
        if member == 0 || member > self.r {
            return Err(Error::BranchOutOfRange { member, r: self.r });
        }
        Ok(Stratum {
            mask: self.mask | (1 << (member - 1)),
            r: self.r,
        })
    }

    /// All strata `J ⊇ self`, in lexicographic order.
    pub fn supersets(&self) -> Vec<Stratum> {
        let complement = full_mask(self.r) & !self.mask;
        let mut out: Vec<Stratum> = submasks(complement)
            .map(|extra| Stratum {
                mask: self.mask | extra,
                r: self.r,
            })
            .collect();
        out.sort();
        out
    }

    /// All nonempty strata `J ⊆ self`, in lexicographic order.
    pub fn subsets(&self) -> Vec<Stratum> {
        let mut out: Vec<Stratum> = submasks(self.mask)
            .filter(|&m| m != 0)
            .map(|mask| Stratum { mask, r: self.r })
            .collect();
        out.sort();
        out
    }

    /// Size-`p` subsets of this stratum, in lexicographic order.
    pub fn subsets_of_size(&self, p: u32) -> Vec<Stratum> {
        self.subsets()
            .into_iter()
            .filter(|s| s.len() == p)
            .collect()
    }
}

/// Every submask of `mask`, including 0 and `mask` itself.
fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            Some((current - 1) & mask)
        };
        Some(current)
    })
}

/// Every nonempty stratum for `r` branches, in lexicographic order.
pub fn all_strata(r: u32) -> Result<Vec<Stratum>> {
    Ok(Stratum::full(r)?.subsets())
}

/// Strata with exactly `h` branches, in lexicographic order.
pub fn strata_of_size(r: u32, h: u32) -> Result<Vec<Stratum>> {
    Ok(Stratum::full(r)?.subsets_of_size(h))
}

impl Ord for Stratum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.r
            .cmp(&other.r)
            .then_with(|| self.members().cmp(other.members()))
    }
}

impl PartialOrd for Stratum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/r={}", self.r)
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> i64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}
