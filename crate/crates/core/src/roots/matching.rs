//! Pairing two root sets, and Ostrowski's bound on how far apart they can be.

use num_complex::Complex64;

use super::ComplexPoly;
use crate::error::{Error, Result};

/// Largest set size solved by exhaustive search.
const EXHAUSTIVE_LIMIT: usize = 8;

/// `left[i]` is paired with `right[partner[i]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub partner: Vec<usize>,
    pub max_distance: f64,
}

impl Matching {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.partner.iter().copied().enumerate()
    }
}

/// Bijection minimizing the largest pairwise distance. Up to eight points the
/// search is exhaustive and ties are broken by the smaller total distance;
/// beyond that a bottleneck threshold search is used.
pub fn match_roots(left: &[Complex64], right: &[Complex64]) -> Result<Matching> {
    if left.len() != right.len() {
        return Err(Error::LengthMismatch {
            expected: left.len(),
            found: right.len(),
        });
    }
    let n = left.len();
    let dist: Vec<Vec<f64>> = left
        .iter()
        .map(|a| right.iter().map(|b| (a - b).norm()).collect())
        .collect();
    let partner = if n <= EXHAUSTIVE_LIMIT {
        exhaustive(&dist)
    } else {
        bottleneck(&dist)
    };
    let max_distance = partner
        .iter()
        .enumerate()
        .map(|(i, &j)| dist[i][j])
        .fold(0.0, f64::max);
    Ok(Matching {
        partner,
        max_distance,
    })
}

fn exhaustive(dist: &[Vec<f64>]) -> Vec<usize> {
    struct Search<'a> {
        dist: &'a [Vec<f64>],
        used: Vec<bool>,
        current: Vec<usize>,
        best: Vec<usize>,
        best_cost: (f64, f64),
    }

    impl Search<'_> {
        fn go(&mut self, i: usize, max: f64, sum: f64) {
            if (max, sum) >= self.best_cost {
                return;
            }
            if i == self.dist.len() {
                self.best_cost = (max, sum);
                self.best = self.current.clone();
                return;
            }
            for j in 0..self.dist.len() {
                if self.used[j] {
                    continue;
                }
                let d = self.dist[i][j];
                self.used[j] = true;
                self.current.push(j);
                self.go(i + 1, max.max(d), sum + d);
                self.current.pop();
                self.used[j] = false;
            }
        }
    }

    let n = dist.len();
    let mut s = Search {
        dist,
        used: vec![false; n],
        current: Vec::with_capacity(n),
        best: (0..n).collect(),
        best_cost: (f64::INFINITY, f64::INFINITY),
    };
    s.go(0, 0.0, 0.0);
    s.best
}

fn bottleneck(dist: &[Vec<f64>]) -> Vec<usize> {
    let n = dist.len();
    let mut thresholds: Vec<f64> = dist.iter().flatten().copied().collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    let (mut lo, mut hi) = (0, thresholds.len() - 1);
    let mut best = perfect_matching(dist, thresholds[hi]).expect("complete graph has a matching");
    while lo < hi {
        let mid = (lo + hi) / 2;
        match perfect_matching(dist, thresholds[mid]) {
            Some(m) => {
                best = m;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    debug_assert_eq!(best.len(), n);
    best
}

/// Kuhn's augmenting paths on edges with `dist <= limit`.
fn perfect_matching(dist: &[Vec<f64>], limit: f64) -> Option<Vec<usize>> {
    fn augment(
        i: usize,
        dist: &[Vec<f64>],
        limit: f64,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..dist.len() {
            if dist[i][j] <= limit && !seen[j] {
                seen[j] = true;
                if owner[j].is_none() || augment(owner[j].unwrap(), dist, limit, seen, owner) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }

    let n = dist.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, dist, limit, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut partner = vec![0; n];
    for (j, i) in owner.into_iter().enumerate() {
        partner[i.unwrap()] = j;
    }
    Some(partner)
}

/// `2D (sum_v |a_v - b_v| G^(D-v))^(1/D)` with
/// `G = max(1, |a_v|^(1/v), |b_v|^(1/v))`: after a suitable relabeling every
/// root of `p` lies within this distance of its partner root of `q`.
pub fn ostrowski_bound(p: &ComplexPoly, q: &ComplexPoly) -> Result<f64> {
    if p.degree() != q.degree() {
        return Err(Error::DegreeMismatch {
            left: p.degree(),
            right: q.degree(),
        });
    }
    let d = p.degree();
    let a = p.coeffs();
    let b = q.coeffs();
    let gamma = (1..=d)
        .flat_map(|v| [a[v].norm(), b[v].norm()].map(|x| x.powf(1.0 / v as f64)))
        .fold(1.0, f64::max);
    let sum: f64 = (1..=d)
        .map(|v| (a[v] - b[v]).norm() * gamma.powi((d - v) as i32))
        .sum();
    Ok(2.0 * d as f64 * sum.powf(1.0 / d as f64))
}
