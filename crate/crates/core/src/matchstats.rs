//! Intra-relation synonymy/antonymy matches and their significance tests.

use std::collections::BTreeMap;
use std::fmt;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::argrep::{vectorize_corpus, ArgumentVector, RelationVectors};
use crate::bagset::Lexicon;
use crate::corpus::{Explicitness, RelationRecord, Sense};
use crate::error::{Error, Result};
use crate::lexdb::LexicalDatabase;

/// Positive and negative coordinates of the element-wise product of the
/// two argument vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MatchCounts {
    pub n_syn: usize,
    pub n_ant: usize,
}

impl MatchCounts {
    pub fn total(&self) -> usize {
        self.n_syn + self.n_ant
    }
}

pub fn match_counts(r1: &ArgumentVector, r2: &ArgumentVector) -> Result<MatchCounts> {
    if r1.dimension() != r2.dimension() {
        return Err(Error::DimensionMismatch {
            expected: r1.dimension(),
            actual: r2.dimension(),
        });
    }
    let (short, long) = if r1.nnz() <= r2.nnz() { (r1, r2) } else { (r2, r1) };
    let mut counts = MatchCounts::default();
    for (j, a) in short.nonzero() {
        let product = i64::from(a) * i64::from(long.get(j));
        if product > 0 {
            counts.n_syn += 1;
        } else if product < 0 {
            counts.n_ant += 1;
        }
    }
    Ok(counts)
}

/// Relation shares per `(n_syn, n_ant)` cell for one group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeatmapGrid {
    pub label: String,
    pub counts: BTreeMap<(usize, usize), usize>,
    pub total: usize,
}

impl HeatmapGrid {
    pub fn proportion(&self, n_syn: usize, n_ant: usize) -> f64 {
        self.counts.get(&(n_syn, n_ant)).copied().unwrap_or(0) as f64 / self.total as f64
    }

    /// `((n_syn, n_ant), count, proportion)` for every occupied cell.
    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), usize, f64)> + '_ {
        self.counts
            .iter()
            .map(|(&cell, &count)| (cell, count, count as f64 / self.total as f64))
    }

    pub fn max_syn(&self) -> usize {
        self.counts.keys().map(|c| c.0).max().unwrap_or(0)
    }

    pub fn max_ant(&self) -> usize {
        self.counts.keys().map(|c| c.1).max().unwrap_or(0)
    }

    /// Counts with both axes clipped at `cap`; cell `cap` collects every
    /// value `>= cap` (the overflow margin).
    pub fn capped(&self, cap: usize) -> BTreeMap<(usize, usize), usize> {
        let mut out = BTreeMap::new();
        for (&(s, a), &count) in &self.counts {
            *out.entry((s.min(cap), a.min(cap))).or_insert(0) += count;
        }
        out
    }
}

pub fn heatmap(label: &str, group: &[MatchCounts]) -> Result<HeatmapGrid> {
    if group.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut counts = BTreeMap::new();
    for m in group {
        *counts.entry((m.n_syn, m.n_ant)).or_insert(0) += 1;
    }
    Ok(HeatmapGrid {
        label: label.to_string(),
        counts,
        total: group.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestMethod {
    Exact,
    NormalApprox,
}

impl TestMethod {
    pub fn name(self) -> &'static str {
        match self {
            TestMethod::Exact => "exact",
            TestMethod::NormalApprox => "normal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestResult {
    pub u1: f64,
    pub u2: f64,
    /// Two-sided.
    pub p: f64,
    pub n1: usize,
    pub n2: usize,
    pub method: TestMethod,
}

/// Largest sample size (per side) for which the exact null distribution is used.
pub const EXACT_MAX_N: usize = 8;

/// Two-sided Mann-Whitney-Wilcoxon test. Exact when both samples have at
/// most [`EXACT_MAX_N`] values and there are no ties; otherwise the normal
/// approximation with tie and continuity corrections.
pub fn mann_whitney(sample1: &[f64], sample2: &[f64]) -> Result<TestResult> {
    let ranked = rank_samples(sample1, sample2)?;
    let method = if sample1.len() <= EXACT_MAX_N && sample2.len() <= EXACT_MAX_N && !ranked.has_ties {
        TestMethod::Exact
    } else {
        TestMethod::NormalApprox
    };
    Ok(ranked.finish(method))
}

/// Same test with the method forced. `Exact` on tied data falls back to
/// the normal approximation.
pub fn mann_whitney_with(sample1: &[f64], sample2: &[f64], method: TestMethod) -> Result<TestResult> {
    let ranked = rank_samples(sample1, sample2)?;
    let method = if ranked.has_ties { TestMethod::NormalApprox } else { method };
    Ok(ranked.finish(method))
}

struct Ranked {
    n1: usize,
    n2: usize,
    u1: f64,
    tie_term: f64,
    has_ties: bool,
}

fn rank_samples(sample1: &[f64], sample2: &[f64]) -> Result<Ranked> {
    if sample1.is_empty() || sample2.is_empty() {
        return Err(Error::EmptySample);
    }
    let (n1, n2) = (sample1.len(), sample2.len());
    let mut pooled: Vec<(f64, bool)> = sample1
        .iter()
        .map(|&x| (x, true))
        .chain(sample2.iter().map(|&y| (y, false)))
        .collect();
    pooled.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut rank_sum1 = 0.0;
    let mut tie_term = 0.0;
    let mut has_ties = false;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i + 1;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        // positions i..j share the midrank of ranks i+1..=j
        let midrank = (i + 1 + j) as f64 / 2.0;
        let t = (j - i) as f64;
        if j - i > 1 {
            has_ties = true;
            tie_term += t * t * t - t;
        }
        rank_sum1 += midrank * pooled[i..j].iter().filter(|p| p.1).count() as f64;
        i = j;
    }
    let u1 = rank_sum1 - (n1 * (n1 + 1)) as f64 / 2.0;
    Ok(Ranked {
        n1,
        n2,
        u1,
        tie_term,
        has_ties,
    })
}

impl Ranked {
    fn finish(&self, method: TestMethod) -> TestResult {
        let nn = (self.n1 * self.n2) as f64;
        let u2 = nn - self.u1;
        let p = match method {
            TestMethod::Exact => exact_p(self.u1.min(u2) as usize, self.n1, self.n2),
            TestMethod::NormalApprox => self.normal_p(),
        };
        TestResult {
            u1: self.u1,
            u2,
            p,
            n1: self.n1,
            n2: self.n2,
            method,
        }
    }

    fn normal_p(&self) -> f64 {
        let (n1, n2) = (self.n1 as f64, self.n2 as f64);
        let n = n1 + n2;
        let mean = n1 * n2 / 2.0;
        let tie_correction = if n > 1.0 { self.tie_term / (n * (n - 1.0)) } else { 0.0 };
        let variance = n1 * n2 / 12.0 * ((n + 1.0) - tie_correction);
        if variance <= 0.0 {
            return 1.0;
        }
        let z = ((self.u1 - mean).abs() - 0.5).max(0.0) / variance.sqrt();
        let standard = Normal::standard();
        (2.0 * standard.sf(z)).min(1.0)
    }
}

/// Number of rank arrangements giving each value of U, for sample sizes
/// `n1`, `n2` without ties. Index `u` holds the count for `U = u`.
pub fn u_distribution(n1: usize, n2: usize) -> Vec<u64> {
    // table[j] holds the distribution for (i, j) while sweeping i upward
    let mut table: Vec<Vec<u64>> = (0..=n2).map(|_| vec![1]).collect();
    for i in 1..=n1 {
        let mut row: Vec<Vec<u64>> = Vec::with_capacity(n2 + 1);
        row.push(vec![1]);
        for j in 1..=n2 {
            let mut dist = vec![0u64; i * j + 1];
            // largest value from sample 1: it exceeds all j values of sample 2
            for (u, &c) in table[j].iter().enumerate() {
                dist[u + j] += c;
            }
            // largest value from sample 2: contributes nothing
            for (u, &c) in row[j - 1].iter().enumerate() {
                dist[u] += c;
            }
            row.push(dist);
        }
        table = row;
    }
    table.pop().expect("n2 + 1 entries")
}

/// Exact two-sided p for the smaller of the two U statistics.
pub fn exact_p(u_min: usize, n1: usize, n2: usize) -> f64 {
    let dist = u_distribution(n1, n2);
    let total: u64 = dist.iter().sum();
    let tail: u64 = dist.iter().take(u_min + 1).sum();
    ((2 * tail) as f64 / total as f64).min(1.0)
}

/// Per-relation value fed to the test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScalarMode {
    /// `n_syn + n_ant`
    #[default]
    Total,
    Syn,
    Ant,
}

impl ScalarMode {
    pub fn of(self, m: MatchCounts) -> f64 {
        match self {
            ScalarMode::Total => m.total() as f64,
            ScalarMode::Syn => m.n_syn as f64,
            ScalarMode::Ant => m.n_ant as f64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalarMode::Total => "total",
            ScalarMode::Syn => "syn",
            ScalarMode::Ant => "ant",
        }
    }

    pub fn parse(s: &str) -> Option<ScalarMode> {
        match s {
            "total" => Some(ScalarMode::Total),
            "syn" => Some(ScalarMode::Syn),
            "ant" => Some(ScalarMode::Ant),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Group {
    pub sense: Sense,
    pub explicitness: Explicitness,
}

impl Group {
    pub const ALL: [Group; 4] = [
        Group::new(Sense::Contrast, Explicitness::Explicit),
        Group::new(Sense::Contrast, Explicitness::Implicit),
        Group::new(Sense::Concession, Explicitness::Explicit),
        Group::new(Sense::Concession, Explicitness::Implicit),
    ];

    pub const fn new(sense: Sense, explicitness: Explicitness) -> Group {
        Group { sense, explicitness }
    }

    /// e.g. `Contrast-Explicit`
    pub fn label(&self) -> String {
        let cap = |s: &str| {
            let mut c = s.chars();
            c.next()
                .map(|f| f.to_uppercase().chain(c).collect::<String>())
                .unwrap_or_default()
        };
        format!("{}-{}", cap(self.sense.name()), cap(self.explicitness.name()))
    }

    /// e.g. `contrast_explicit`
    pub fn slug(&self) -> String {
        format!("{}_{}", self.sense.name(), self.explicitness.name())
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// The four comparisons, in reporting order.
pub const COMPARISONS: [(Group, Group); 4] = [
    (
        Group::new(Sense::Contrast, Explicitness::Explicit),
        Group::new(Sense::Concession, Explicitness::Explicit),
    ),
    (
        Group::new(Sense::Contrast, Explicitness::Implicit),
        Group::new(Sense::Concession, Explicitness::Implicit),
    ),
    (
        Group::new(Sense::Contrast, Explicitness::Explicit),
        Group::new(Sense::Contrast, Explicitness::Implicit),
    ),
    (
        Group::new(Sense::Concession, Explicitness::Explicit),
        Group::new(Sense::Concession, Explicitness::Implicit),
    ),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceRow {
    pub test_id: usize,
    pub group1: Group,
    pub group2: Group,
    pub n1: usize,
    pub n2: usize,
    /// `None` when either group is empty.
    pub result: Option<TestResult>,
}

/// Match counts of every retained relation, grouped by sense and explicitness.
pub fn group_match_counts(relations: &[RelationVectors]) -> Result<BTreeMap<Group, Vec<MatchCounts>>> {
    let mut groups: BTreeMap<Group, Vec<MatchCounts>> = Group::ALL.iter().map(|&g| (g, Vec::new())).collect();
    for r in relations.iter().filter(|r| !r.discarded) {
        let counts = match_counts(&r.r1, &r.r2)?;
        groups
            .entry(Group::new(r.sense, r.explicitness))
            .or_default()
            .push(counts);
    }
    Ok(groups)
}

pub fn significance_from_groups(groups: &BTreeMap<Group, Vec<MatchCounts>>, scalar: ScalarMode) -> Result<Vec<SignificanceRow>> {
    let sample = |g: &Group| -> Vec<f64> {
        groups
            .get(g)
            .map(|v| v.iter().map(|&m| scalar.of(m)).collect())
            .unwrap_or_default()
    };
    COMPARISONS
        .iter()
        .enumerate()
        .map(|(i, (g1, g2))| {
            let (s1, s2) = (sample(g1), sample(g2));
            let result = if s1.is_empty() || s2.is_empty() {
                None
            } else {
                Some(mann_whitney(&s1, &s2)?)
            };
            Ok(SignificanceRow {
                test_id: i + 1,
                group1: *g1,
                group2: *g2,
                n1: s1.len(),
                n2: s2.len(),
                result,
            })
        })
        .collect()
}

/// The four group comparisons under the full lexicon.
pub fn significance_report(
    corpus: &[RelationRecord],
    lexicon: &Lexicon,
    db: &LexicalDatabase,
    scalar: ScalarMode,
) -> Result<Vec<SignificanceRow>> {
    let full = vectorize_corpus(corpus, lexicon, db);
    significance_from_groups(&group_match_counts(&full)?, scalar)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc(a: &[i32], b: &[i32]) -> MatchCounts {
        match_counts(&ArgumentVector::from_dense(a), &ArgumentVector::from_dense(b)).unwrap()
    }

    #[test]
    fn worked_product_example() {
        assert_eq!(mc(&[-2, 0, 1, 0], &[1, -1, 1, 0]), MatchCounts { n_syn: 1, n_ant: 1 });
    }

    #[test]
    fn zero_and_self_products() {
        assert_eq!(mc(&[3, -1], &[0, 0]), MatchCounts::default());
        assert_eq!(mc(&[3, -1], &[3, -1]), MatchCounts { n_syn: 2, n_ant: 0 });
        assert!(match_counts(&ArgumentVector::zeros(2), &ArgumentVector::zeros(3)).is_err());
    }

    #[test]
    fn heatmap_proportions() {
        let g = [(1, 1), (1, 1), (0, 0), (2, 0)].map(|(s, a)| MatchCounts { n_syn: s, n_ant: a });
        let h = heatmap("x", &g).unwrap();
        assert_eq!(h.proportion(1, 1), 0.5);
        assert_eq!(h.proportion(0, 0), 0.25);
        assert_eq!(h.proportion(2, 0), 0.25);
        assert_eq!(h.counts.len(), 3);
        assert_eq!((h.max_syn(), h.max_ant()), (2, 1));
        assert!(heatmap("x", &[]).is_err());
    }

    #[test]
    fn heatmap_single_cell() {
        let h = heatmap("x", &[MatchCounts::default(); 7]).unwrap();
        assert_eq!(h.proportion(0, 0), 1.0);
    }

    #[test]
    fn seventy_percent_presence() {
        let mut group = vec![MatchCounts::default(); 30];
        group.extend((0..70).map(|i| MatchCounts { n_syn: 1 + i % 3, n_ant: i % 2 }));
        let h = heatmap("x", &group).unwrap();
        let present: f64 = h.cells().filter(|(c, _, _)| *c != (0, 0)).map(|(_, _, p)| p).sum();
        assert!((present - 0.70).abs() < 1e-12);
    }

    #[test]
    fn capping_folds_overflow() {
        let g = [(0, 0), (13, 2), (20, 0)].map(|(s, a)| MatchCounts { n_syn: s, n_ant: a });
        let h = heatmap("x", &g).unwrap();
        let c = h.capped(12);
        assert_eq!(c[&(12, 2)], 1);
        assert_eq!(c[&(12, 0)], 1);
    }

    #[test]
    fn identical_samples() {
        let r = mann_whitney(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!((r.u1, r.u2), (4.5, 4.5));
        assert!((r.p - 1.0).abs() < 1e-12);
        assert_eq!(r.method, TestMethod::NormalApprox);
    }

    #[test]
    fn separated_samples_exact() {
        let r = mann_whitney(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!((r.u1, r.u2), (0.0, 9.0));
        assert_eq!(r.method, TestMethod::Exact);
        assert!((r.p - 0.1).abs() < 1e-15);
    }

    #[test]
    fn distribution_sums_to_binomial() {
        let d = u_distribution(3, 3);
        assert_eq!(d, vec![1, 1, 2, 3, 3, 3, 3, 2, 1, 1]);
        assert_eq!(u_distribution(8, 8).iter().sum::<u64>(), 12870);
        assert_eq!(u_distribution(0, 4), vec![1]);
    }

    #[test]
    fn empty_sample_is_an_error() {
        assert!(matches!(mann_whitney(&[], &[1.0]), Err(Error::EmptySample)));
    }

    #[test]
    fn large_samples_use_normal() {
        let a: Vec<f64> = (0..20).map(f64::from).collect();
        let b: Vec<f64> = (10..30).map(f64::from).collect();
        let r = mann_whitney(&a, &b).unwrap();
        assert_eq!(r.method, TestMethod::NormalApprox);
        assert_eq!(r.u1 + r.u2, 400.0);
        assert!(r.p < 0.01);
    }

    #[test]
    fn group_labels() {
        let g = Group::new(Sense::Concession, Explicitness::Implicit);
        assert_eq!(g.label(), "Concession-Implicit");
        assert_eq!(g.slug(), "concession_implicit");
    }

    #[test]
    fn empty_group_is_not_computable() {
        let mut groups = BTreeMap::new();
        groups.insert(Group::ALL[0], vec![MatchCounts { n_syn: 1, n_ant: 0 }]);
        groups.insert(Group::ALL[2], vec![MatchCounts::default()]);
        let rows = significance_from_groups(&groups, ScalarMode::Total).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].result.is_some());
        assert!(rows[1].result.is_none());
        assert!(rows[3].result.is_none());
    }
}
