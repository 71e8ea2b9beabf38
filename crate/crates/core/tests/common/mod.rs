//! Generators shared by the property and acceptance suites.
#![allow(dead_code)]

use std::ops::RangeInclusive;

use parabolica::calculus::{dual, tensor};
use parabolica::{q, DecomposableBundle, MarkedCurve, PairedBundle, PairingKind, ParabolicLineBundle, Rational};
use rand::Rng;

/// Distinct rationals in `[0,1)` with denominator at most `max_den`.
pub fn weight_values(max_den: i64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (1..=max_den)
        .flat_map(|d| (0..d).map(move |n| q(n, d)))
        .collect();
    out.sort();
    out.dedup();
    out
}

pub fn all_lines(points: usize, degrees: RangeInclusive<i64>, max_den: i64) -> Vec<ParabolicLineBundle> {
    let values = weight_values(max_den);
    let mut tuples: Vec<Vec<Rational>> = vec![vec![]];
    for _ in 0..points {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                values.iter().map(move |w| {
                    let mut t = t.clone();
                    t.push(w.clone());
                    t
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for d in degrees {
        for w in &tuples {
            out.push(ParabolicLineBundle::new(d, w.clone()).unwrap());
        }
    }
    out
}

/// All multisets of size `k` drawn from `0..n`, as nondecreasing index lists.
pub fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[derive(Clone, Debug)]
pub struct Family {
    pub points: usize,
    pub degrees: RangeInclusive<i64>,
    pub max_den: i64,
    pub max_rank: usize,
}

impl Family {
    pub fn describe(&self) -> String {
        format!(
            "n={} points, degrees {:?}, denominators <= {}, rank <= {}",
            self.points, self.degrees, self.max_den, self.max_rank
        )
    }
}

/// Visits every valid paired bundle of the family once up to relabeling of
/// summands: 2-cycles occupy indices `(0,1), (2,3), ...` with the left legs
/// forming a multiset, followed by a multiset of self-paired summands.
///
/// Every summand and the value line have degree in the family's range.
pub fn for_each_paired(family: &Family, mut visit: impl FnMut(&PairedBundle)) -> usize {
    let lines = all_lines(family.points, family.degrees.clone(), family.max_den);
    let curve = MarkedCurve::with_points(family.points).unwrap();
    let in_range = |b: &ParabolicLineBundle| {
        let d: i64 = b.degree().try_into().unwrap();
        family.degrees.contains(&d)
    };
    let mut count = 0;
    for l in &lines {
        let legs: Vec<(ParabolicLineBundle, ParabolicLineBundle)> = lines
            .iter()
            .map(|m| (m.clone(), tensor(&dual(m), l).unwrap()))
            .filter(|(_, partner)| in_range(partner))
            .collect();
        let self_dual: Vec<&ParabolicLineBundle> =
            lines.iter().filter(|m| &tensor(m, m).unwrap() == l).collect();
        for kind in [PairingKind::Orthogonal, PairingKind::Symplectic] {
            for rank in 1..=family.max_rank {
                for pairs in 0..=rank / 2 {
                    let fixed = rank - 2 * pairs;
                    if kind == PairingKind::Symplectic && fixed > 0 {
                        continue;
                    }
                    let fixed_choices = multisets(self_dual.len(), fixed);
                    for leg_choice in multisets(legs.len(), pairs) {
                        for fixed_choice in &fixed_choices {
                            let mut summands = Vec::with_capacity(rank);
                            let mut matching = Vec::with_capacity(rank);
                            for (n, &i) in leg_choice.iter().enumerate() {
                                summands.push(legs[i].0.clone());
                                summands.push(legs[i].1.clone());
                                matching.push(2 * n + 1);
                                matching.push(2 * n);
                            }
                            for &i in fixed_choice {
                                matching.push(summands.len());
                                summands.push(self_dual[i].clone());
                            }
                            let bundle = DecomposableBundle::new(curve.clone(), summands).unwrap();
                            let p = PairedBundle::new(bundle, l.clone(), kind, matching).unwrap();
                            visit(&p);
                            count += 1;
                        }
                    }
                }
            }
        }
    }
    count
}

pub fn random_weight(rng: &mut impl Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    q(rng.gen_range(0..d), d)
}

pub fn random_line(
    rng: &mut impl Rng,
    points: usize,
    degrees: RangeInclusive<i64>,
    max_den: i64,
) -> ParabolicLineBundle {
    let weights = (0..points).map(|_| random_weight(rng, max_den)).collect();
    ParabolicLineBundle::new(rng.gen_range(degrees), weights).unwrap()
}

/// Brute-force nondegeneracy test, written against `M_k ⊗ M_σ(k) = L`
/// rather than the `M_k* ⊗ L` form used by the validator.
pub fn is_valid_oracle(p: &PairedBundle) -> bool {
    let sigma = p.matching();
    let l = p.value_line();
    (0..p.rank()).all(|k| {
        let j = sigma[k];
        sigma[j] == k
            && !(p.kind() == PairingKind::Symplectic && j == k)
            && &tensor(p.bundle().summand(k), p.bundle().summand(j)).unwrap() == l
    })
}
