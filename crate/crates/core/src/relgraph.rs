//! Per-connective relation graphs over argument vectors, eigenvector
//! centrality and the max/mean centrality ratio φ.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::argrep::{apply_mask, vectorize_corpus, ArgumentVector, RelationVectors};
use crate::bagset::{mask_from_boundaries, AblationKind, Lexicon};
use crate::corpus::{Explicitness, RelationRecord, Sense};
use crate::error::{Error, Result};
use crate::lexdb::LexicalDatabase;

pub const CONVERGENCE_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 10_000;
/// Relations needed for a connective to fall in class A.
pub const CLASS_A_MIN: usize = 100;

/// Node identity: the vector, plus the argument position when nodes are
/// position-tagged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeKey {
    pub position: Option<u8>,
    pub vector: ArgumentVector,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GraphOptions {
    /// Keep arg1 and arg2 nodes apart even when their vectors coincide.
    pub position_tagged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationGraph {
    nodes: Vec<NodeKey>,
    /// Unordered edges `(a, b)` with `a <= b`, mapped to relation counts.
    edges: BTreeMap<(usize, usize), usize>,
}

impl RelationGraph {
    pub fn nodes(&self) -> &[NodeKey] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_multiplicity(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.edges
    }

    pub fn topology(&self) -> Topology {
        Topology::new(self.nodes.len(), self.edges.keys().copied())
    }

    /// `node_id node_id multiplicity` lines.
    pub fn export_edges(&self) -> String {
        let mut out = String::new();
        for (&(a, b), &count) in &self.edges {
            let _ = writeln!(out, "{a} {b} {count}");
        }
        out
    }

    /// `node_id sparse-vector` lines, with an `arg1:`/`arg2:` prefix on
    /// position-tagged nodes.
    pub fn export_nodes(&self) -> String {
        let mut out = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            match node.position {
                Some(p) => {
                    let _ = writeln!(out, "{i} arg{p}:{}", node.vector);
                }
                None => {
                    let _ = writeln!(out, "{i} {}", node.vector);
                }
            }
        }
        out
    }
}

/// One node per distinct vector, one undirected edge per relation.
pub fn build_graph(relations: &[RelationVectors], options: GraphOptions) -> Result<RelationGraph> {
    let mut ids: HashMap<NodeKey, usize> = HashMap::new();
    let mut nodes = Vec::new();
    let mut edges = BTreeMap::new();
    let mut intern = |key: NodeKey, nodes: &mut Vec<NodeKey>| {
        *ids.entry(key.clone()).or_insert_with(|| {
            nodes.push(key);
            nodes.len() - 1
        })
    };
    for r in relations {
        if r.discarded {
            return Err(Error::DiscardedRelation { id: r.id.clone() });
        }
        let tag = |p: u8| options.position_tagged.then_some(p);
        let a = intern(
            NodeKey {
                position: tag(1),
                vector: r.r1.clone(),
            },
            &mut nodes,
        );
        let b = intern(
            NodeKey {
                position: tag(2),
                vector: r.r2.clone(),
            },
            &mut nodes,
        );
        *edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
    }
    Ok(RelationGraph { nodes, edges })
}

/// Bare undirected structure: node count and adjacency lists.
/// A self-loop appears once in its node's list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    adjacency: Vec<Vec<usize>>,
}

impl Topology {
    pub fn new<I>(n: usize, edges: I) -> Topology
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (a, b) in edges {
            assert!(a < n && b < n, "edge ({a}, {b}) outside {n} nodes");
            if adjacency[a].contains(&b) {
                continue;
            }
            adjacency[a].push(b);
            if a != b {
                adjacency[b].push(a);
            }
        }
        Topology { adjacency }
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    fn has_edges(&self) -> bool {
        self.adjacency.iter().any(|a| !a.is_empty())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    /// Unit L2 norm, non-negative, indexed by node.
    pub scores: Vec<f64>,
    pub iterations: usize,
}

pub fn eigencentrality(g: &RelationGraph) -> Result<CentralityScores> {
    centrality_of(&g.topology())
}

/// Dominant eigenvector of the adjacency matrix by power iteration from the
/// all-ones vector.
///
/// Iterates with `A + I`, which has the same eigenvectors as `A` but a
/// strictly dominant top eigenvalue on bipartite components (stars, paths,
/// sticks), where plain `A` would oscillate between two vectors.
pub fn centrality_of(t: &Topology) -> Result<CentralityScores> {
    let n = t.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let uniform = 1.0 / (n as f64).sqrt();
    let mut x = vec![uniform; n];
    if !t.has_edges() {
        return Ok(CentralityScores {
            scores: x,
            iterations: 0,
        });
    }
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    for iteration in 1..=MAX_ITERATIONS {
        for (v, slot) in next.iter_mut().enumerate() {
            *slot = x[v] + t.neighbors(v).iter().map(|&u| x[u]).sum::<f64>();
        }
        let norm = next.iter().map(|a| a * a).sum::<f64>().sqrt();
        for a in next.iter_mut() {
            *a /= norm;
        }
        residual = x
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        std::mem::swap(&mut x, &mut next);
        if residual < CONVERGENCE_TOLERANCE {
            return Ok(CentralityScores {
                scores: x,
                iterations: iteration,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual,
    })
}

/// Maximum centrality over mean centrality, the mean taken over all nodes.
pub fn phi(g: &RelationGraph) -> Result<f64> {
    phi_of(&g.topology())
}

pub fn phi_of(t: &Topology) -> Result<f64> {
    let c = centrality_of(t)?;
    Ok(phi_from_scores(&c.scores))
}

pub fn phi_from_scores(scores: &[f64]) -> f64 {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    if max == min {
        // the summed mean can miss max by an ulp
        return 1.0;
    }
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    max / mean
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    A,
    B,
}

impl Class {
    pub fn of(count: usize) -> Class {
        if count >= CLASS_A_MIN {
            Class::A
        } else {
            Class::B
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Class::A => "A",
            Class::B => "B",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectiveClass {
    pub connective: String,
    pub sense: Sense,
    pub count: usize,
    pub class: Class,
}

/// Relation counts per `(sense, connective)`, explicit and implicit pooled.
pub fn classify_connectives(corpus: &[RelationRecord]) -> Vec<ConnectiveClass> {
    let mut counts: BTreeMap<(Sense, &str), usize> = BTreeMap::new();
    for r in corpus {
        *counts.entry((r.sense, r.connective.as_str())).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|((sense, connective), count)| ConnectiveClass {
            connective: connective.to_string(),
            sense,
            count,
            class: Class::of(count),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiOptions {
    pub masks: Vec<AblationKind>,
    /// One graph per (connective, explicitness) instead of per connective.
    pub split_explicitness: bool,
    pub graph: GraphOptions,
}

impl Default for PhiOptions {
    fn default() -> Self {
        PhiOptions {
            masks: AblationKind::REPORT_ORDER.to_vec(),
            split_explicitness: false,
            graph: GraphOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiRow {
    pub sense: Sense,
    pub class: Class,
    pub mask: AblationKind,
    pub connective: String,
    /// Set only when graphs are split by explicitness.
    pub explicitness: Option<Explicitness>,
    pub relations: usize,
    pub nodes: usize,
    pub edges: usize,
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiSummary {
    pub sense: Sense,
    pub class: Class,
    pub mask: AblationKind,
    pub graphs: usize,
    /// Unweighted mean over the cell's graphs; `None` for an empty cell.
    pub mean_phi: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiReport {
    pub rows: Vec<PhiRow>,
    pub summary: Vec<PhiSummary>,
}

impl PhiReport {
    pub fn summary_for(&self, sense: Sense, class: Class, mask: AblationKind) -> Option<&PhiSummary> {
        self.summary
            .iter()
            .find(|s| s.sense == sense && s.class == class && s.mask == mask)
    }

    pub fn rows_for(&self, sense: Sense, class: Class, mask: AblationKind) -> impl Iterator<Item = &PhiRow> {
        self.rows
            .iter()
            .filter(move |r| r.sense == sense && r.class == class && r.mask == mask)
    }
}

pub fn phi_report(
    corpus: &[RelationRecord],
    lexicon: &Lexicon,
    db: &LexicalDatabase,
    options: &PhiOptions,
) -> Result<PhiReport> {
    let full = vectorize_corpus(corpus, lexicon, db);
    phi_report_from_vectors(&full, lexicon, &classify_connectives(corpus), options)
}

type GroupKey = (Sense, Class, String, Option<Explicitness>);

/// φ per connective graph and per-cell means, from full-lexicon vectors.
pub fn phi_report_from_vectors(
    full: &[RelationVectors],
    lexicon: &Lexicon,
    classes: &[ConnectiveClass],
    options: &PhiOptions,
) -> Result<PhiReport> {
    let class_of: HashMap<(Sense, &str), Class> = classes
        .iter()
        .map(|c| ((c.sense, c.connective.as_str()), c.class))
        .collect();

    let mut rows = Vec::new();
    for &kind in &options.masks {
        let mask = mask_from_boundaries(lexicon.boundaries(), kind);
        let masked = apply_mask(full, &mask)?;
        let mut groups: BTreeMap<GroupKey, Vec<RelationVectors>> = BTreeMap::new();
        for r in masked.into_iter().filter(|r| !r.discarded) {
            let class = class_of
                .get(&(r.sense, r.connective.as_str()))
                .copied()
                .unwrap_or(Class::B);
            let split = options.split_explicitness.then_some(r.explicitness);
            groups
                .entry((r.sense, class, r.connective.clone(), split))
                .or_default()
                .push(r);
        }
        let groups: Vec<_> = groups.into_iter().collect();
        let computed: Vec<Result<PhiRow>> = groups
            .par_iter()
            .map(|((sense, class, connective, explicitness), rels)| {
                let g = build_graph(rels, options.graph)?;
                Ok(PhiRow {
                    sense: *sense,
                    class: *class,
                    mask: kind,
                    connective: connective.clone(),
                    explicitness: *explicitness,
                    relations: rels.len(),
                    nodes: g.node_count(),
                    edges: g.edge_count(),
                    phi: phi(&g)?,
                })
            })
            .collect();
        for row in computed {
            rows.push(row?);
        }
    }
    let mask_rank = |k: AblationKind| options.masks.iter().position(|&m| m == k);
    rows.sort_by(|a, b| {
        (a.sense, a.class, mask_rank(a.mask), &a.connective, a.explicitness).cmp(&(
            b.sense,
            b.class,
            mask_rank(b.mask),
            &b.connective,
            b.explicitness,
        ))
    });

    let mut summary = Vec::new();
    for sense in Sense::ALL {
        for class in [Class::A, Class::B] {
            for &mask in &options.masks {
                let phis: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.sense == sense && r.class == class && r.mask == mask)
                    .map(|r| r.phi)
                    .collect();
                let mean_phi = (!phis.is_empty()).then(|| phis.iter().sum::<f64>() / phis.len() as f64);
                summary.push(PhiSummary {
                    sense,
                    class,
                    mask,
                    graphs: phis.len(),
                    mean_phi,
                });
            }
        }
    }
    Ok(PhiReport { rows, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-9;

    fn stick(id: &str, a: &[i32], b: &[i32]) -> RelationVectors {
        RelationVectors {
            id: id.into(),
            sense: Sense::Contrast,
            explicitness: Explicitness::Explicit,
            connective: "but".into(),
            r1: ArgumentVector::from_dense(a),
            r2: ArgumentVector::from_dense(b),
            discarded: false,
        }
    }

    #[test]
    fn distinct_vectors_give_sticks() {
        let rels: Vec<_> = (0..4)
            .map(|i| stick("r", &[i, 0], &[0, i + 10]))
            .collect();
        let g = build_graph(&rels, GraphOptions::default()).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (8, 4));
        assert!((phi(&g).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn shared_arg1_branches() {
        let rels = vec![
            stick("1", &[1, 0], &[0, 1]),
            stick("2", &[1, 0], &[0, 2]),
            stick("3", &[1, 0], &[0, 3]),
            stick("4", &[5, 0], &[0, 5]),
        ];
        let g = build_graph(&rels, GraphOptions::default()).unwrap();
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.topology().neighbors(0).len(), 3);
    }

    #[test]
    fn identical_relations_collapse() {
        let rels = vec![stick("1", &[1], &[2]); 5];
        let g = build_graph(&rels, GraphOptions::default()).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));
        assert_eq!(g.edge_multiplicity()[&(0, 1)], 5);

        let rels = vec![stick("1", &[1], &[1]); 3];
        let g = build_graph(&rels, GraphOptions::default()).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (1, 1));
        assert!((phi(&g).unwrap() - 1.0).abs() < TOL);
        assert_eq!(g.export_edges(), "0 0 3\n");
    }

    #[test]
    fn position_tagging_keeps_arguments_apart() {
        let rels = vec![stick("1", &[1], &[2]), stick("2", &[2], &[1])];
        let pooled = build_graph(&rels, GraphOptions::default()).unwrap();
        assert_eq!((pooled.node_count(), pooled.edge_count()), (2, 1));
        let tagged = build_graph(&rels, GraphOptions { position_tagged: true }).unwrap();
        assert_eq!((tagged.node_count(), tagged.edge_count()), (4, 2));
        assert_eq!(tagged.export_nodes(), "0 arg1:{1:1}\n1 arg2:{1:2}\n2 arg1:{1:2}\n3 arg2:{1:1}\n");
    }

    #[test]
    fn discarded_relations_are_rejected() {
        let mut r = stick("x", &[0], &[0]);
        r.discarded = true;
        assert!(matches!(
            build_graph(&[r], GraphOptions::default()),
            Err(Error::DiscardedRelation { .. })
        ));
    }

    #[test]
    fn single_edge_scores() {
        let c = centrality_of(&Topology::new(2, [(0, 1)])).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((c.scores[0] - h).abs() < TOL && (c.scores[1] - h).abs() < TOL);
    }

    #[test]
    fn star_scores_and_phi() {
        let t = Topology::new(5, (1..5).map(|i| (0, i)));
        let c = centrality_of(&t).unwrap();
        assert!((c.scores[0] - 1.0 / 2f64.sqrt()).abs() < TOL);
        for leaf in &c.scores[1..] {
            assert!((leaf - 1.0 / (2.0 * 2f64.sqrt())).abs() < TOL);
        }
        assert!((phi_of(&t).unwrap() - 5.0 / 3.0).abs() < TOL);
    }

    #[test]
    fn edgeless_graph_is_uniform() {
        let c = centrality_of(&Topology::new(4, [])).unwrap();
        assert!(c.scores.iter().all(|&s| (s - 0.5).abs() < 1e-15));
        assert!(matches!(centrality_of(&Topology::new(0, [])), Err(Error::EmptyGraph)));
    }

    #[test]
    fn class_threshold() {
        assert_eq!(Class::of(99), Class::B);
        assert_eq!(Class::of(100), Class::A);
        assert_eq!(Class::of(3000), Class::A);
    }
}
