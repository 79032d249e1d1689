//! Colored partitions: multisets of `(part, color)` pairs with positive parts.
//!
//! These index the monomial bases of Heisenberg Fock spaces: a part `n` with
//! color `i` stands for one factor `h_i(-n)`.  The canonical storage order is
//! parts descending, ties broken by color ascending, which makes the derived
//! `Ord`/`Hash` impls usable as deterministic map keys.

/// A colored partition.  `parts` is kept in canonical order at all times.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ColoredPartition {
    parts: Vec<(u32, u16)>,
}

impl ColoredPartition {
    pub fn empty() -> Self {
        ColoredPartition { parts: Vec::new() }
    }

    /// Build from arbitrary `(part, color)` pairs; zero parts are rejected.
    pub fn new(mut parts: Vec<(u32, u16)>) -> Self {
        assert!(parts.iter().all(|&(n, _)| n > 0), "partition parts must be positive");
        parts.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        ColoredPartition { parts }
    }

    pub fn parts(&self) -> &[(u32, u16)] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    /// Sum of the parts (the conformal weight carried by the partition).
    pub fn total(&self) -> u64 {
        self.parts.iter().map(|&(n, _)| n as u64).sum()
    }

    /// Largest part, or 0 for the empty partition.
    pub fn max_part(&self) -> u32 {
        self.parts.first().map_or(0, |&(n, _)| n)
    }

    /// New partition with one extra `(part, color)` factor.
    pub fn with_part(&self, part: u32, color: u16) -> Self {
        assert!(part > 0);
        let mut parts = self.parts.clone();
        let pos = parts
            .binary_search_by(|probe| probe.0.cmp(&part).reverse().then(probe.1.cmp(&color)))
            .unwrap_or_else(|e| e);
        parts.insert(pos, (part, color));
        ColoredPartition { parts }
    }

    /// New partition with the entry at `index` removed.
    pub fn without_index(&self, index: usize) -> Self {
        let mut parts = self.parts.clone();
        parts.remove(index);
        ColoredPartition { parts }
    }

    /// Head entry plus the remaining tail, for structural recursion.
    pub fn split_first(&self) -> Option<((u32, u16), Self)> {
        self.parts.split_first().map(|(&head, tail)| {
            (head, ColoredPartition { parts: tail.to_vec() })
        })
    }

    /// Entries grouped as `((part, color), multiplicity)` in canonical order.
    pub fn grouped(&self) -> Vec<((u32, u16), u32)> {
        let mut out: Vec<((u32, u16), u32)> = Vec::new();
        for &entry in &self.parts {
            match out.last_mut() {
                Some((e, m)) if *e == entry => *m += 1,
                _ => out.push((entry, 1)),
            }
        }
        out
    }

    /// Multiset union of two partitions.
    pub fn union(&self, other: &Self) -> Self {
        let mut parts = self.parts.clone();
        parts.extend_from_slice(&other.parts);
        ColoredPartition::new(parts)
    }
}

/// All colored partitions of `n` with colors `1..=colors`, in a fixed
/// deterministic order.  `n = 0` yields exactly the empty partition.
pub fn colored_partitions(n: u32, colors: u16) -> Vec<ColoredPartition> {
    assert!(colors >= 1, "need at least one color");
    let mut out = Vec::new();
    let mut current: Vec<(u32, u16)> = Vec::new();
    // Entries are emitted in canonical order; each successive entry must be
    // <= its predecessor in the (part desc, color asc) total order.
    fn recurse(
        remaining: u32,
        max_part: u32,
        min_color_at_max: u16,
        colors: u16,
        current: &mut Vec<(u32, u16)>,
        out: &mut Vec<ColoredPartition>,
    ) {
        if remaining == 0 {
            out.push(ColoredPartition { parts: current.clone() });
            return;
        }
        let mut part = max_part.min(remaining);
        while part >= 1 {
            let start_color = if part == max_part { min_color_at_max } else { 1 };
            for color in start_color..=colors {
                current.push((part, color));
                recurse(remaining - part, part, color, colors, current, out);
                current.pop();
            }
            part -= 1;
        }
    }
    recurse(n, n.max(1), 1, colors, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: coefficients of prod_{k>=1} (1 - q^k)^{-colors}
    /// computed by truncated power-series multiplication over u64.
    fn series_counts(nmax: u32, colors: u16) -> Vec<u64> {
        let n = nmax as usize;
        let mut series = vec![0u64; n + 1];
        series[0] = 1;
        for _ in 0..colors {
            for k in 1..=n {
                // Multiply by 1/(1-q^k): cumulative sums with stride k.
                for i in k..=n {
                    series[i] += series[i - k];
                }
            }
        }
        series
    }

    #[test]
    fn counts_match_generating_function() {
        for colors in 1u16..=3 {
            let oracle = series_counts(8, colors);
            for n in 0u32..=8 {
                assert_eq!(
                    colored_partitions(n, colors).len() as u64,
                    oracle[n as usize],
                    "count mismatch at n={n}, colors={colors}"
                );
            }
        }
    }

    #[test]
    fn frozen_counts() {
        assert_eq!(colored_partitions(4, 1).len(), 5);
        assert_eq!(colored_partitions(0, 1).len(), 1);
        assert_eq!(colored_partitions(0, 3).len(), 1);
        assert_eq!(colored_partitions(2, 2).len(), 5);
    }

    #[test]
    fn canonical_order_and_no_duplicates() {
        for n in 0u32..=7 {
            for colors in 1u16..=2 {
                let all = colored_partitions(n, colors);
                let mut seen = std::collections::BTreeSet::new();
                for p in &all {
                    assert_eq!(p.total(), n as u64);
                    // canonical: parts descending, ties by color ascending
                    for w in p.parts().windows(2) {
                        let (a, b) = (w[0], w[1]);
                        assert!(a.0 > b.0 || (a.0 == b.0 && a.1 <= b.1));
                    }
                    assert!(seen.insert(p.clone()), "duplicate partition {p:?}");
                }
            }
        }
    }

    #[test]
    fn with_part_keeps_canonical_form() {
        let p = ColoredPartition::new(vec![(2, 1), (1, 2)]);
        let q = p.with_part(2, 2);
        assert_eq!(q.parts(), &[(2, 1), (2, 2), (1, 2)]);
        let r = q.with_part(3, 1);
        assert_eq!(r.parts(), &[(3, 1), (2, 1), (2, 2), (1, 2)]);
        assert_eq!(r.total(), 8);
        assert_eq!(r.max_part(), 3);
    }

    #[test]
    fn grouped_multiplicities() {
        let p = ColoredPartition::new(vec![(1, 1), (1, 1), (2, 1), (1, 2)]);
        assert_eq!(p.grouped(), vec![((2, 1), 1), ((1, 1), 2), ((1, 2), 1)]);
    }
}
