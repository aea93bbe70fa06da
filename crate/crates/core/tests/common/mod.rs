//! Brute-force reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's own combinatorics: subsets are plain
//! sorted vectors, classes are maps keyed by them, and ranks come from
//! textbook elimination over exact fractions.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

pub type Term = (Vec<u32>, i32);
pub type Oracle = BTreeMap<Term, i64>;

/// Every nonempty subset of `{1..r}` as a sorted vector.
pub fn all_subsets(r: u32) -> Vec<Vec<u32>> {
    (1u32..(1 << r))
        .map(|mask| (1..=r).filter(|x| mask & (1 << (x - 1)) != 0).collect())
        .collect()
}

pub fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Number of `q`-element subsets of an `n`-set, by counting bitmasks.
pub fn count_subsets(n: u32, q: u32) -> i64 {
    (0u64..(1u64 << n)).filter(|m| m.count_ones() == q).count() as i64
}

pub fn add(map: &mut Oracle, key: Term, c: i64) {
    *map.entry(key.clone()).or_insert(0) += c;
    if map[&key] == 0 {
        map.remove(&key);
    }
}

/// `j_{I,!}Λ_I(a/2)` in the IC basis: each `J ⊇ I` once, twist raised by the
/// codimension of `Y_J` in `Y_I`.
pub fn shriek_oracle(i: &[u32], a: i32, r: u32) -> Oracle {
    let mut out = Oracle::new();
    for j in all_subsets(r) {
        if is_subset(i, &j) {
            add(&mut out, (j.clone(), a + (j.len() - i.len()) as i32), 1);
        }
    }
    out
}

/// The class of Ψ, summed cell by cell over the grid.
pub fn psi_oracle(r: u32) -> Oracle {
    let mut out = Oracle::new();
    for j in all_subsets(r) {
        let h = j.len() as i32;
        for k in 1..=h {
            add(&mut out, (j.clone(), h - 1 - 2 * (k - 1)), 1);
        }
    }
    out
}

/// Stalk multiplicities of `R^qΨ` at a point on exactly `n` branches,
/// indexed `(q, twist)`.
pub fn psi_stalk_oracle(n: u32, d: i32) -> BTreeMap<(i32, i32), i64> {
    (0..n)
        .map(|q| ((q as i32, d - 1 - 2 * q as i32), count_subsets(n - 1, q)))
        .collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rank over ℚ by Gauss–Jordan on reduced fractions.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<(i128, i128)>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| (x as i128, 1)).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(p) = (rank..n_rows).find(|&i| a[i][col].0 != 0) else {
            continue;
        };
        a.swap(rank, p);
        let (pn, pd) = a[rank][col];
        for i in 0..n_rows {
            if i == rank || a[i][col].0 == 0 {
                continue;
            }
            let (fn_, fd) = (a[i][col].0 * pd, a[i][col].1 * pn);
            for j in 0..n_cols {
                let (x, y) = a[rank][j];
                let (u, v) = a[i][j];
                let num = u * fd * y - fn_ * x * v;
                let den = v * fd * y;
                let g = gcd(num, den).max(1);
                let s = if den < 0 { -1 } else { 1 };
                a[i][j] = (s * num / g, s * den / g);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over 𝔽_p.
pub fn mod_rank(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x.rem_euclid(p)).collect())
        .collect();
    let n_rows = a.len();
    let n_cols = a.first().map_or(0, Vec::len);
    let inv = |x: i64| {
        let mut result = 1;
        let mut base = x;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result
    };
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(piv) = (rank..n_rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let scale = inv(a[rank][col]);
        for j in 0..n_cols {
            a[rank][j] = a[rank][j] * scale % p;
        }
        for i in 0..n_rows {
            if i != rank && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..n_cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Size-`p` subsets of `{1..m}` in lexicographic order of their sorted lists.
pub fn lex_subsets(m: u32, p: u32) -> Vec<Vec<u32>> {
    let mut all: Vec<Vec<u32>> = all_subsets(m)
        .into_iter()
        .filter(|s| s.len() == p as usize)
        .collect();
    if p == 0 {
        all.push(Vec::new());
    }
    all.sort();
    all
}

/// Matrix of the signed inclusion `C^p → C^{p+1}`: the coefficient of
/// `J ↦ J ∪ {x}` is `(−1)` to the position of `x` in the enlarged set.
pub fn inclusion_oracle(m: u32, p: u32) -> Vec<Vec<i64>> {
    let src = lex_subsets(m, p);
    let dst = lex_subsets(m, p + 1);
    dst.iter()
        .map(|k| {
            src.iter()
                .map(|j| {
                    if !is_subset(j, k) {
                        return 0;
                    }
                    let x = k.iter().find(|x| !j.contains(x)).unwrap();
                    let pos = k.iter().position(|y| y == x).unwrap();
                    if pos % 2 == 0 {
                        1
                    } else {
                        -1
                    }
                })
                .collect()
        })
        .collect()
}

/// Cohomology dimensions of the complex with positions `k..=m`.
pub fn koszul_cohomology_oracle(m: u32, k: u32, rank: impl Fn(&[Vec<i64>]) -> usize) -> Vec<usize> {
    let ranks: Vec<usize> = (k..m).map(|p| rank(&inclusion_oracle(m, p))).collect();
    (k..=m)
        .map(|p| {
            let i = (p - k) as usize;
            let dim = lex_subsets(m, p).len();
            let out = ranks.get(i).copied().unwrap_or(0);
            let inc = if i > 0 { ranks[i - 1] } else { 0 };
            dim - out - inc
        })
        .collect()
}
