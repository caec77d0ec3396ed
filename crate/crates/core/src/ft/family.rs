//! Cut-set families over indexed basic events, with probability
//! truncation and absorption.

use std::cmp::Ordering;

use super::FtError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Set {
    /// Sorted, distinct event indices.
    pub events: Vec<u32>,
    pub prob: f64,
    sig: u64,
}

impl Set {
    fn new(events: Vec<u32>, prob: f64) -> Self {
        let sig = events.iter().fold(0u64, |acc, &e| acc | 1 << (e % 64));
        Set { events, prob, sig }
    }

    fn is_subset_of(&self, other: &Set) -> bool {
        if self.events.len() > other.events.len() || self.sig & !other.sig != 0 {
            return false;
        }
        let mut it = other.events.iter();
        self.events.iter().all(|e| it.by_ref().any(|o| o == e))
    }
}

/// A disjunction of conjunctions. The empty family is FALSE; a family
/// holding the empty set is TRUE.
pub(crate) type Family = Vec<Set>;

pub(crate) fn truth() -> Family {
    vec![Set::new(Vec::new(), 1.0)]
}

fn union(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Removes duplicates and every set that contains another set of the family.
pub(crate) fn minimize(mut family: Family) -> Family {
    family.sort_by(|a, b| a.events.len().cmp(&b.events.len()).then_with(|| a.events.cmp(&b.events)));
    family.dedup_by(|a, b| a.events == b.events);
    let mut kept: Family = Vec::with_capacity(family.len());
    for s in family {
        if !kept.iter().any(|k| k.is_subset_of(&s)) {
            kept.push(s);
        }
    }
    kept
}

pub(crate) struct Algebra<'a> {
    probs: &'a [f64],
    truncation: f64,
    /// Multiplier applied before comparing against the truncation limit.
    scale: f64,
    cap: usize,
    pub discarded_mass: f64,
}

impl<'a> Algebra<'a> {
    pub fn new(probs: &'a [f64], truncation: f64, cap: usize) -> Self {
        Algebra { probs, truncation, scale: 1.0, cap, discarded_mass: 0.0 }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn prob(&self, events: &[u32]) -> f64 {
        events.iter().map(|&e| self.probs[e as usize]).product()
    }

    fn keep(&mut self, events: Vec<u32>, out: &mut Family) -> Result<(), FtError> {
        let prob = self.prob(&events);
        let scaled = self.scale * prob;
        if scaled < self.truncation {
            self.discarded_mass += scaled;
            return Ok(());
        }
        if out.len() >= self.cap {
            return Err(FtError::ResourceLimit { cap: self.cap });
        }
        out.push(Set::new(events, prob));
        Ok(())
    }

    pub fn event(&mut self, e: u32) -> Result<Family, FtError> {
        let mut out = Vec::new();
        self.keep(vec![e], &mut out)?;
        Ok(out)
    }

    pub fn or(&mut self, families: Vec<Family>) -> Result<Family, FtError> {
        let total: usize = families.iter().map(Vec::len).sum();
        if total > self.cap {
            return Err(FtError::ResourceLimit { cap: self.cap });
        }
        Ok(minimize(families.into_iter().flatten().collect()))
    }

    pub fn and(&mut self, mut families: Vec<Family>) -> Result<Family, FtError> {
        families.sort_by_key(Vec::len);
        let mut acc = truth();
        for f in &families {
            if acc.is_empty() {
                break;
            }
            let mut next = Vec::new();
            for a in &acc {
                for b in f {
                    self.keep(union(&a.events, &b.events), &mut next)?;
                }
            }
            acc = minimize(next);
        }
        Ok(acc)
    }

    /// At least `k` of the children: the disjunction over every k-subset of
    /// the conjunction of its members.
    pub fn k_of_n(&mut self, k: usize, families: Vec<Family>) -> Result<Family, FtError> {
        let n = families.len();
        if k == 0 || k > n {
            return Err(FtError::InvalidGate(format!("KOFN({k}) over {n} children")));
        }
        if k == 1 {
            return self.or(families);
        }
        if k == n {
            return self.and(families);
        }
        let mut terms = Vec::new();
        for combo in itertools::Itertools::combinations(0..n, k) {
            let term = self.and(combo.iter().map(|&i| families[i].clone()).collect())?;
            terms.push(term);
            let size: usize = terms.iter().map(Vec::len).sum();
            if size > self.cap {
                return Err(FtError::ResourceLimit { cap: self.cap });
            }
        }
        self.or(terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(f: &Family) -> Vec<Vec<u32>> {
        f.iter().map(|s| s.events.clone()).collect()
    }

    #[test]
    fn absorption() {
        let probs = [0.1, 0.2, 0.3];
        let mut alg = Algebra::new(&probs, 0.0, 1000);
        let a = alg.event(0).unwrap();
        let b = alg.event(1).unwrap();
        let ab = alg.and(vec![a.clone(), b]).unwrap();
        assert_eq!(ids(&ab), vec![vec![0, 1]]);
        let f = alg.or(vec![a, ab]).unwrap();
        assert_eq!(ids(&f), vec![vec![0]]);
    }

    #[test]
    fn shared_events_are_not_double_counted() {
        let probs = [0.5, 0.5];
        let mut alg = Algebra::new(&probs, 0.0, 1000);
        let a = alg.event(0).unwrap();
        let b = alg.event(1).unwrap();
        let ab = alg.and(vec![a.clone(), b]).unwrap();
        let again = alg.and(vec![a, ab]).unwrap();
        assert_eq!(ids(&again), vec![vec![0, 1]]);
        assert_eq!(again[0].prob, 0.25);
    }

    #[test]
    fn truncation_tracks_discarded_mass() {
        let probs = [1e-7, 1e-6];
        let mut alg = Algebra::new(&probs, 1e-12, 1000);
        let a = alg.event(0).unwrap();
        let b = alg.event(1).unwrap();
        let ab = alg.and(vec![a, b]).unwrap();
        assert!(ab.is_empty());
        assert!((alg.discarded_mass - 1e-13).abs() < 1e-25);
    }

    #[test]
    fn cap_is_enforced() {
        let probs = [0.5; 8];
        let mut alg = Algebra::new(&probs, 0.0, 5);
        let fams: Vec<Family> = (0..8).map(|e| alg.event(e).unwrap()).collect();
        assert_eq!(alg.k_of_n(2, fams), Err(FtError::ResourceLimit { cap: 5 }));
    }

    #[test]
    fn subset_check() {
        let a = Set::new(vec![1, 3], 1.0);
        let b = Set::new(vec![1, 2, 3], 1.0);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert!(!Set::new(vec![65], 1.0).is_subset_of(&Set::new(vec![1], 1.0)));
    }
}
