//! Building consistent matrices from a minimal set of comparisons, and
//! greedily pushing an inconsistent matrix toward a tolerance.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indicators::{kii_triad, matrix_kii, DEFAULT_TOLERANCE};
use crate::matrix::{PcMatrix, Triad};

/// The `n - 1` entries just above the diagonal, `g_i = a_(i, i+1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    generators: Vec<f64>,
}

impl GeneratorSet {
    pub fn new(generators: Vec<f64>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::TooSmall { n: 1, min: 2 });
        }
        for (index, &value) in generators.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositiveGenerator { index, value });
            }
        }
        Ok(Self { generators })
    }

    pub fn n(&self) -> usize {
        self.generators.len() + 1
    }

    pub fn generators(&self) -> &[f64] {
        &self.generators
    }
}

/// `a_ik = g_i * g_(i+1) * ... * g_(k-1)` for `i < k`.
pub fn complete_from_generators(g: &GeneratorSet) -> PcMatrix {
    let n = g.n();
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        let mut acc = 1.0;
        for &gk in &g.generators[i..] {
            acc *= gk;
            upper.push(acc);
        }
    }
    PcMatrix::from_upper_triangle(n, &upper).expect("products of positive generators")
}

/// Consistent completion from comparisons on the edges of a spanning tree.
///
/// An edge `(i, j, r)` fixes `a_ij = r`. Every other entry is the product of
/// edge ratios (or their reciprocals, when walked backwards) along the unique
/// tree path. On the chain `(0,1), (1,2), ...` the products are formed in the
/// same order as [`complete_from_generators`].
pub fn complete_from_tree(n: usize, edges: &[(usize, usize, f64)]) -> Result<PcMatrix> {
    if n < 2 {
        return Err(Error::TooSmall { n, min: 2 });
    }
    if edges.len() != n - 1 {
        return Err(Error::NotATree {
            reason: format!(
                "{} edges given, a spanning tree on {n} nodes has {}",
                edges.len(),
                n - 1
            ),
        });
    }
    let mut adjacency: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (index, &(i, j, r)) in edges.iter().enumerate() {
        if i >= n || j >= n {
            return Err(Error::NotATree {
                reason: format!("edge {index} ({i}, {j}) refers to a node outside 0..{n}"),
            });
        }
        if i == j {
            return Err(Error::NotATree {
                reason: format!("edge {index} is a self-loop on node {i}"),
            });
        }
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::NonPositiveRatio { index, value: r });
        }
        adjacency[i].push((j, r));
        adjacency[j].push((i, 1.0 / r));
    }

    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    let mut from_source = vec![f64::NAN; n];
    let mut queue = VecDeque::new();
    for source in 0..n {
        from_source.fill(f64::NAN);
        from_source[source] = 1.0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            for &(v, r) in &adjacency[u] {
                if from_source[v].is_nan() {
                    from_source[v] = if u == source { r } else { from_source[u] * r };
                    queue.push_back(v);
                }
            }
        }
        if let Some(lost) = from_source.iter().position(|v| v.is_nan()) {
            // n - 1 edges that fail to connect must contain a cycle
            return Err(Error::NotATree {
                reason: format!("node {lost} is unreachable from node {source}; edges contain a cycle"),
            });
        }
        upper.extend_from_slice(&from_source[source + 1..]);
    }
    PcMatrix::from_upper_triangle(n, &upper)
}

/// Replacement values that make a triad consistent when substituted for
/// `x`, `y` or `z` respectively: `(y / z, x * z, y / x)`.
pub fn consistent_alternatives(t: &Triad) -> (f64, f64, f64) {
    (t.y / t.z, t.x * t.z, t.y / t.x)
}

/// Which element of a triad a reduction step replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriadElement {
    X,
    Y,
    Z,
}

impl TriadElement {
    fn position(self, (i, j, k): (usize, usize, usize)) -> (usize, usize) {
        match self {
            Self::X => (i, j),
            Self::Y => (i, k),
            Self::Z => (j, k),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub step: usize,
    pub worst_triad: (usize, usize, usize),
    pub element: TriadElement,
    pub rule: ReplacementRule,
    pub old_value: f64,
    pub new_value: f64,
    pub matrix_kii_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub converged: bool,
    pub initial_kii: f64,
    pub final_kii: f64,
    pub matrix: PcMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionOptions {
    pub tolerance: f64,
    pub max_iter: usize,
    pub blend: f64,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            max_iter: 1000,
            blend: 1.0,
        }
    }
}

fn check_blend(blend: f64) -> Result<()> {
    if blend > 0.0 && blend <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "blend",
            reason: format!("{blend} is outside (0, 1]"),
        })
    }
}

/// Where a reduction step took its target value from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplacementRule {
    /// The value making the worst triad itself consistent.
    TriadFix,
    /// Geometric mean of the consistent values implied by every triad
    /// through the entry.
    Consensus,
}

/// Geometric mean of `a_ik * a_kj` over all `k` other than `i`, `j`: the
/// value of `a_ij` minimizing the squared log-errors of every triad that
/// contains it.
pub fn consensus_value(m: &PcMatrix, i: usize, j: usize) -> f64 {
    let n = m.n();
    let log_sum: f64 = (0..n)
        .filter(|&k| k != i && k != j)
        .map(|k| (m.get(i, k) * m.get(k, j)).ln())
        .sum();
    (log_sum / (n - 2) as f64).exp()
}

fn total_kii(m: &PcMatrix) -> f64 {
    m.triad_iter()
        .map(|t| kii_triad(t.x, t.y, t.z).expect("valid triad"))
        .sum()
}

/// One greedy step. Returns `None` when the matrix is already consistent.
fn step_once(m: &PcMatrix, blend: f64, step: usize) -> Result<Option<(PcMatrix, ReductionStep)>> {
    let (worst_kii, worst) = matrix_kii(m)?;
    if worst_kii == 0.0 {
        return Ok(None);
    }
    let triad = m.triad_at(worst.0, worst.1, worst.2);
    let (fx, fy, fz) = consistent_alternatives(&triad);
    let elements = [TriadElement::X, TriadElement::Y, TriadElement::Z];
    let fixes = elements
        .into_iter()
        .zip([fx, fy, fz])
        .map(|(e, v)| (e, ReplacementRule::TriadFix, v));
    let consensus = elements.into_iter().map(|e| {
        let (i, j) = e.position(worst);
        (e, ReplacementRule::Consensus, consensus_value(m, i, j))
    });

    // ranked by resulting matrix Kii, then by total Kii to get off plateaus
    // where two triads sharing an entry would otherwise trade places forever
    let mut best: Option<(PcMatrix, ReductionStep, f64)> = None;
    for (element, rule, target) in fixes.chain(consensus) {
        let (i, j) = element.position(worst);
        let old_value = m.get(i, j);
        let new_value = old_value.powf(1.0 - blend) * target.powf(blend);
        let candidate = m.with_entry(i, j, new_value)?;
        let (after, _) = matrix_kii(&candidate)?;
        let total = total_kii(&candidate);
        let better = best.as_ref().is_none_or(|(_, s, best_total)| {
            after < s.matrix_kii_after || (after == s.matrix_kii_after && total < *best_total)
        });
        if better {
            let record = ReductionStep {
                step,
                worst_triad: worst,
                element,
                rule,
                old_value,
                new_value,
                matrix_kii_after: after,
            };
            best = Some((candidate, record, total));
        }
    }
    Ok(best.map(|(next, record, _)| (next, record)))
}

/// Moves one entry of the worst triad (maximum Kii, lexicographically first
/// on ties) toward a target by the geometric blend
/// `old^(1 - blend) * target^blend`.
///
/// Six candidates are tried: each of x, y, z moved toward the value that
/// makes the worst triad consistent (see [`consistent_alternatives`]), and
/// each moved toward its [`consensus_value`]. The candidate with the smallest
/// resulting matrix Kii wins; equal matrix Kii is broken by the sum of all
/// triad Kii values, then by candidate order.
pub fn reduce_step(m: &PcMatrix, blend: f64) -> Result<PcMatrix> {
    if m.n() < 3 {
        return Err(Error::TooSmall { n: m.n(), min: 3 });
    }
    check_blend(blend)?;
    Ok(step_once(m, blend, 0)?.map_or_else(|| m.clone(), |(next, _)| next))
}

/// Repeats [`reduce_step`] until matrix Kii drops below `tolerance` or
/// `max_iter` steps have been taken. Running out of steps is reported through
/// `converged = false`, not as an error.
pub fn reduce(m: &PcMatrix, opts: ReductionOptions) -> Result<ReductionTrace> {
    if m.n() < 3 {
        return Err(Error::TooSmall { n: m.n(), min: 3 });
    }
    check_blend(opts.blend)?;
    if !(opts.tolerance > 0.0 && opts.tolerance < 1.0) {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            reason: format!("{} is outside (0, 1)", opts.tolerance),
        });
    }
    let (initial_kii, _) = matrix_kii(m)?;
    let mut current = m.clone();
    let mut kii = initial_kii;
    let mut steps = Vec::new();
    while kii >= opts.tolerance && steps.len() < opts.max_iter {
        match step_once(&current, opts.blend, steps.len() + 1)? {
            Some((next, record)) => {
                kii = record.matrix_kii_after;
                current = next;
                steps.push(record);
            }
            None => break,
        }
    }
    Ok(ReductionTrace {
        steps,
        converged: kii < opts.tolerance,
        initial_kii,
        final_kii: kii,
        matrix: current,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> PcMatrix {
        PcMatrix::from_upper_triangle(3, &[2.0, 5.0, 3.0]).unwrap()
    }

    #[test]
    fn generator_examples() {
        let m = complete_from_generators(&GeneratorSet::new(vec![2.0, 3.0]).unwrap());
        assert_eq!(
            m.to_rows(),
            vec![
                vec![1.0, 2.0, 6.0],
                vec![0.5, 1.0, 3.0],
                vec![1.0 / 6.0, 1.0 / 3.0, 1.0]
            ]
        );
        let ones = complete_from_generators(&GeneratorSet::new(vec![1.0; 3]).unwrap());
        assert_eq!(ones, PcMatrix::identity(4).unwrap());

        let m = complete_from_generators(&GeneratorSet::new(vec![2.0; 3]).unwrap());
        assert_eq!(m.get(0, 3), 8.0);
        for t in m.triads() {
            assert!((t.y - t.x * t.z).abs() <= 1e-12 * t.y);
        }
    }

    #[test]
    fn generator_validation() {
        assert!(matches!(
            GeneratorSet::new(vec![1.0, -2.0]),
            Err(Error::NonPositiveGenerator { index: 1, .. })
        ));
        assert!(GeneratorSet::new(vec![]).is_err());
    }

    #[test]
    fn star_tree() {
        let m = complete_from_tree(3, &[(0, 1, 2.0), (0, 2, 6.0)]).unwrap();
        assert_eq!(m.get(1, 2), 3.0);
        assert!(m.is_consistent(1e-12));
    }

    #[test]
    fn reversed_edges_use_reciprocals() {
        let m = complete_from_tree(3, &[(1, 0, 0.5), (2, 1, 1.0 / 3.0)]).unwrap();
        assert_eq!(m.get(0, 1), 2.0);
        assert!((m.get(0, 2) - 6.0).abs() < 1e-14);
    }

    #[test]
    fn chain_tree_matches_generators() {
        let g = vec![2.0, 0.7, 5.5, 1.3];
        let tree: Vec<_> = g.iter().enumerate().map(|(i, &r)| (i, i + 1, r)).collect();
        let a = complete_from_tree(5, &tree).unwrap();
        let b = complete_from_generators(&GeneratorSet::new(g).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn tree_errors() {
        let cycle = [(0, 1, 2.0), (1, 2, 2.0), (2, 0, 0.25)];
        assert!(matches!(complete_from_tree(4, &cycle), Err(Error::NotATree { .. })));
        let cycle_plus_isolated = [(0, 1, 2.0), (1, 2, 2.0), (2, 0, 0.25)];
        assert!(matches!(
            complete_from_tree(4, &cycle_plus_isolated),
            Err(Error::NotATree { .. })
        ));
        assert!(matches!(
            complete_from_tree(3, &[(0, 1, 2.0)]),
            Err(Error::NotATree { .. })
        ));
        assert!(matches!(
            complete_from_tree(3, &[(0, 1, 2.0), (1, 1, 2.0)]),
            Err(Error::NotATree { .. })
        ));
        assert!(matches!(
            complete_from_tree(3, &[(0, 1, 2.0), (1, 5, 2.0)]),
            Err(Error::NotATree { .. })
        ));
        assert!(matches!(
            complete_from_tree(3, &[(0, 1, 2.0), (1, 2, 0.0)]),
            Err(Error::NonPositiveRatio { index: 1, .. })
        ));
    }

    #[test]
    fn fig2_alternatives() {
        let t = Triad::new(2.0, 5.0, 3.0).unwrap();
        assert_eq!(consistent_alternatives(&t), (5.0 / 3.0, 6.0, 2.5));
        let ones = Triad::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(consistent_alternatives(&ones), (1.0, 1.0, 1.0));
        let stick = Triad::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!(consistent_alternatives(&stick), (2.0, 1.0, 2.0));
    }

    #[test]
    fn reduce_step_examples() {
        let fixed = reduce_step(&fig2(), 1.0).unwrap();
        assert!(matrix_kii(&fixed).unwrap().0 < 1e-15);

        let consistent = complete_from_generators(&GeneratorSet::new(vec![2.0, 3.0, 4.0]).unwrap());
        let after = reduce_step(&consistent, 1.0).unwrap();
        // generator completion can leave round-off sized Kii; the step only
        // touches one entry and keeps the matrix consistent
        assert!(matrix_kii(&after).unwrap().0 < 1e-15);
        assert_eq!(
            reduce_step(&PcMatrix::identity(4).unwrap(), 1.0).unwrap(),
            PcMatrix::identity(4).unwrap()
        );

        assert!(matches!(
            reduce_step(&PcMatrix::identity(2).unwrap(), 1.0),
            Err(Error::TooSmall { .. })
        ));
        assert!(reduce_step(&fig2(), 0.0).is_err());
        assert!(reduce_step(&fig2(), 1.5).is_err());
    }

    #[test]
    fn partial_blend_decreases_worst_triad() {
        let m = fig2();
        for blend in [0.1, 0.5, 0.9] {
            let next = reduce_step(&m, blend).unwrap();
            let t = next.triad_at(0, 1, 2);
            assert!(kii_triad(t.x, t.y, t.z).unwrap() < 1.0 / 6.0);
        }
    }

    #[test]
    fn perturbed_4x4_step_is_greedy_optimum() {
        let base = complete_from_generators(&GeneratorSet::new(vec![2.0, 3.0, 0.5]).unwrap());
        let m = base.with_entry(0, 2, base.get(0, 2) * 2.5).unwrap();
        let (before, worst) = matrix_kii(&m).unwrap();
        let next = reduce_step(&m, 1.0).unwrap();
        let (after, _) = matrix_kii(&next).unwrap();
        assert!(after < before);

        // brute force over the three candidate replacements
        let t = m.triad_at(worst.0, worst.1, worst.2);
        let (fx, fy, fz) = consistent_alternatives(&t);
        let (i, j, k) = worst;
        let candidates = [
            m.with_entry(i, j, fx).unwrap(),
            m.with_entry(i, k, fy).unwrap(),
            m.with_entry(j, k, fz).unwrap(),
        ];
        let best = candidates
            .iter()
            .map(|c| matrix_kii(c).unwrap().0)
            .fold(f64::INFINITY, f64::min);
        assert!(after <= best);
    }

    #[test]
    fn consensus_of_consistent_matrix_is_the_entry() {
        let m = complete_from_generators(&GeneratorSet::new(vec![2.0, 3.0, 0.5, 4.0]).unwrap());
        for (i, j) in [(0, 1), (1, 4), (0, 4), (2, 3)] {
            assert!((consensus_value(&m, i, j) - m.get(i, j)).abs() < 1e-12 * m.get(i, j));
        }
    }

    #[test]
    fn plateau_does_not_cycle() {
        // two triads sharing entry (0, 1) whose fixes pull it in opposite
        // directions by the same ratio
        let base = PcMatrix::identity(4).unwrap();
        let m = base.with_entry(0, 2, 2.0).unwrap().with_entry(0, 3, 0.5).unwrap();
        let trace = reduce(
            &m,
            ReductionOptions {
                tolerance: 1e-9,
                max_iter: 50,
                blend: 1.0,
            },
        )
        .unwrap();
        assert!(trace.converged, "{:?}", trace.steps);
        assert!(trace.steps.len() < 10);
    }

    #[test]
    fn reduce_examples() {
        let consistent = PcMatrix::identity(5).unwrap();
        let trace = reduce(&consistent, ReductionOptions::default()).unwrap();
        assert!(trace.converged && trace.steps.is_empty());

        let trace = reduce(&fig2(), ReductionOptions::default()).unwrap();
        assert!(trace.converged && trace.steps.is_empty());

        let opts = ReductionOptions {
            tolerance: 0.01,
            ..Default::default()
        };
        let trace = reduce(&fig2(), opts).unwrap();
        assert!(trace.converged);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].worst_triad, (0, 1, 2));
    }

    #[test]
    fn reduce_respects_max_iter() {
        let m = PcMatrix::from_upper_triangle(4, &[9.0, 0.2, 7.0, 0.1, 8.0, 0.3]).unwrap();
        let opts = ReductionOptions {
            tolerance: 1e-12,
            max_iter: 2,
            blend: 0.1,
        };
        let trace = reduce(&m, opts).unwrap();
        assert!(!trace.converged);
        assert_eq!(trace.steps.len(), 2);
        assert_eq!(trace.final_kii, trace.steps[1].matrix_kii_after);
    }
}
