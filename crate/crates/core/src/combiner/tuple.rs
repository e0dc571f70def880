use std::collections::BTreeSet;

use crate::lattice::CosetLabel;

/// Upper bound on `distinct · (w+1)² · |G|` for the exhaustive fallback.
const DP_WORK_LIMIT: usize = 400_000_000;

/// `(Z mod q)^n` with elements stored as mixed-radix indices.
#[derive(Clone, Debug)]
pub(crate) struct Group {
    q: usize,
    n: usize,
    size: usize,
}

impl Group {
    pub(crate) fn new(q: u32, n: usize) -> Self {
        let size = (q as usize)
            .checked_pow(n as u32)
            .expect("label group too large");
        Group {
            q: q as usize,
            n,
            size,
        }
    }

    pub(crate) fn size(&self) -> usize {
        self.size
    }

    fn combine(&self, mut a: usize, mut b: usize, sign: i64) -> usize {
        let q = self.q as i64;
        let (mut out, mut place) = (0usize, 1usize);
        for _ in 0..self.n {
            let (da, db) = ((a % self.q) as i64, (b % self.q) as i64);
            out += ((da + sign * db).rem_euclid(q)) as usize * place;
            place *= self.q;
            a /= self.q;
            b /= self.q;
        }
        out
    }

    pub(crate) fn add(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, 1)
    }

    pub(crate) fn sub(&self, a: usize, b: usize) -> usize {
        self.combine(a, b, -1)
    }
}

/// Label-bucket index over a shrinking pool of items.
///
/// Every query reads labels only; within a bucket the lowest live index is used.
#[derive(Clone, Debug)]
pub struct TupleIndex {
    group: Group,
    labels: Vec<usize>,
    buckets: Vec<BTreeSet<usize>>,
    live: BTreeSet<usize>,
}

impl TupleIndex {
    pub fn new(labels: &[CosetLabel]) -> Self {
        let (q, n) = labels
            .first()
            .map_or((2, 0), |l| (l.modulus, l.residues.len()));
        let group = Group::new(q, n);
        let idx: Vec<usize> = labels.iter().map(CosetLabel::index).collect();
        let mut buckets = vec![BTreeSet::new(); group.size()];
        for (i, &g) in idx.iter().enumerate() {
            buckets[g].insert(i);
        }
        TupleIndex {
            group,
            labels: idx,
            buckets,
            live: (0..labels.len()).collect(),
        }
    }

    pub fn live(&self) -> usize {
        self.live.len()
    }

    pub fn remove(&mut self, items: &[usize]) {
        for &i in items {
            if self.live.remove(&i) {
                self.buckets[self.labels[i]].remove(&i);
            }
        }
    }

    /// `w` distinct live items whose labels sum to `target`.
    pub fn find(&self, target: &CosetLabel, w: usize) -> Option<Vec<usize>> {
        let t = target.index();
        if w == 0 {
            return (t == 0).then(Vec::new);
        }
        if self.live.len() < w {
            return None;
        }
        self.prefix_then_pair(t, w)
            .or_else(|| self.exhaustive(t, w))
    }

    /// Fix the first `w − 2` live items, then solve the last two by a scan over labels.
    fn prefix_then_pair(&self, t: usize, w: usize) -> Option<Vec<usize>> {
        let g = &self.group;
        let k = w.saturating_sub(2);
        let prefix: Vec<usize> = self.live.iter().take(k).copied().collect();
        let mut need = t;
        for &i in &prefix {
            need = g.sub(need, self.labels[i]);
        }
        let used = |label: usize| prefix.iter().filter(|&&i| self.labels[i] == label).count();
        let pick = |label: usize, skip: usize| {
            self.buckets[label]
                .iter()
                .filter(|i| !prefix.contains(i))
                .nth(skip)
                .copied()
        };
        if w == 1 {
            return pick(need, 0).map(|i| vec![i]);
        }
        for a in 0..g.size() {
            let b = g.sub(need, a);
            if b < a {
                continue;
            }
            let have_a = self.buckets[a].len() - used(a);
            let have_b = self.buckets[b].len() - used(b);
            let ok = if a == b {
                have_a >= 2
            } else {
                have_a >= 1 && have_b >= 1
            };
            if ok {
                let first = pick(a, 0)?;
                let second = pick(b, usize::from(a == b))?;
                let mut out = prefix;
                out.push(first);
                out.push(second);
                return Some(out);
            }
        }
        None
    }

    /// Bounded-multiplicity subset-sum over the label group; complete for the live pool.
    fn exhaustive(&self, t: usize, w: usize) -> Option<Vec<usize>> {
        let g = &self.group;
        let size = g.size();
        let present: Vec<(usize, usize)> = (0..size)
            .filter(|&l| !self.buckets[l].is_empty())
            .map(|l| (l, self.buckets[l].len().min(w)))
            .collect();
        if present.len() * (w + 1) * (w + 1) * size > DP_WORK_LIMIT {
            log::warn!(
                "tuple search: exhaustive fallback skipped ({} labels, group {size})",
                present.len()
            );
            return None;
        }
        let cell = |k: usize, s: usize| k * size + s;
        let mut layers: Vec<Vec<bool>> = Vec::with_capacity(present.len() + 1);
        let mut start = vec![false; (w + 1) * size];
        start[cell(0, 0)] = true;
        layers.push(start);
        for &(label, count) in &present {
            let prev = layers.last().unwrap();
            let mut next = prev.clone();
            for k in 0..w {
                for s in 0..size {
                    if !prev[cell(k, s)] {
                        continue;
                    }
                    let mut sum = s;
                    for m in 1..=count.min(w - k) {
                        sum = g.add(sum, label);
                        next[cell(k + m, sum)] = true;
                    }
                }
            }
            layers.push(next);
        }
        if !layers.last().unwrap()[cell(w, t)] {
            return None;
        }
        let mut out = Vec::with_capacity(w);
        let (mut k, mut s) = (w, t);
        for j in (0..present.len()).rev() {
            let (label, count) = present[j];
            let prev = &layers[j];
            let mut rem = s;
            for m in 0..=count.min(k) {
                if prev[cell(k - m, rem)] {
                    out.extend(self.buckets[label].iter().take(m).copied());
                    k -= m;
                    s = rem;
                    break;
                }
                rem = g.sub(rem, label);
            }
        }
        debug_assert_eq!(k, 0);
        out.sort_unstable();
        Some(out)
    }
}

/// `w` distinct indices whose labels sum to `target` mod `q`, if any exist.
pub fn find_matching_tuple(
    labels: &[CosetLabel],
    target: &CosetLabel,
    w: usize,
) -> Option<Vec<usize>> {
    if labels.is_empty() {
        return (w == 0).then(Vec::new);
    }
    TupleIndex::new(labels).find(target, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;
    use rand::Rng;

    fn label(r: &[u32], q: u32) -> CosetLabel {
        CosetLabel {
            residues: r.to_vec(),
            modulus: q,
        }
    }

    fn sum(labels: &[CosetLabel], idx: &[usize], n: usize, q: u32) -> CosetLabel {
        idx.iter()
            .fold(CosetLabel::zero(n, q), |acc, &i| acc.add(&labels[i]))
    }

    #[test]
    fn all_zero_labels() {
        let labels: Vec<_> = (0..12).map(|_| label(&[0, 0], 3)).collect();
        let t = find_matching_tuple(&labels, &label(&[0, 0], 3), 8).unwrap();
        assert_eq!(t.len(), 8);
    }

    #[test]
    fn parity_blocks_a_match() {
        let labels: Vec<_> = [1, 1, 1, 1, 1, 1, 1, 0]
            .iter()
            .map(|&r| label(&[r], 2))
            .collect();
        assert_eq!(find_matching_tuple(&labels, &label(&[0], 2), 8), None);
    }

    fn brute(
        labels: &[CosetLabel],
        target: &CosetLabel,
        w: usize,
        start: usize,
        acc: CosetLabel,
        left: usize,
    ) -> bool {
        if left == 0 {
            return &acc == target;
        }
        (start..labels.len())
            .any(|i| brute(labels, target, w, i + 1, acc.add(&labels[i]), left - 1))
    }

    #[test]
    fn agrees_with_tuple_scan() {
        let mut rng = stream_rng(5, 0);
        let (q, n, w) = (3u32, 3usize, 8usize);
        for trial in 0..60 {
            let len = rng.random_range(8..=14);
            let skew = trial % 3 == 0;
            let labels: Vec<_> = (0..len)
                .map(|_| {
                    let r: Vec<u32> = (0..n)
                        .map(|_| {
                            if skew {
                                rng.random_range(0..2)
                            } else {
                                rng.random_range(0..q)
                            }
                        })
                        .collect();
                    label(&r, q)
                })
                .collect();
            let target = label(
                &(0..n).map(|_| rng.random_range(0..q)).collect::<Vec<_>>(),
                q,
            );
            let found = find_matching_tuple(&labels, &target, w);
            let exists = brute(&labels, &target, w, 0, CosetLabel::zero(n, q), w);
            assert_eq!(found.is_some(), exists, "trial {trial}");
            if let Some(idx) = found {
                let set: BTreeSet<_> = idx.iter().collect();
                assert_eq!(set.len(), w);
                assert_eq!(sum(&labels, &idx, n, q), target);
            }
        }
    }
}
