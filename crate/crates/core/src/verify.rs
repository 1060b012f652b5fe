//! Exhaustive verification at desk scale.
//!
//! For each `(n, k)` the k-trees are enumerated up to isomorphism, ranked by
//! `q_1`, and the extremal claims are checked against the ranking: the
//! k-star first, `G_1` second, `G_2` third, the characterizations of
//! `l(G)` and `|S_1|`, the orderings among `G_2..G_5`, and the strict
//! increase of `q_1` under Perron-guided shifts.
//!
//! A claim is only asserted at orders where its statement is free of
//! small-order coincidences; elsewhere it is reported as inapplicable.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::canon::{canonical_label, CanonicalLabel};
use crate::ktree::{cliques, enumerate_labeled, Budget, Family, NamedFamily};
use crate::rewire::{apply_shift, climb, family_shift, increase_l_step, perron_le, two_tip_l_step, Branch, ShiftMove};
use crate::spectral::{compare_values, graph_spectrum, perron_vector, q1, Q1Order};
use crate::stats::{check_facts, family_facts_min_order, l_max, simplicial_vertices};
use crate::{Error, Graph, Result};

/// One isomorphism class with its statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct RankRow {
    pub label: CanonicalLabel,
    pub graph: Graph,
    pub q1: f64,
    pub simplicial: usize,
    pub l: usize,
}

impl RankRow {
    pub fn compute(label: CanonicalLabel, graph: Graph, k: usize) -> Result<RankRow> {
        Ok(RankRow {
            q1: q1(&graph)?,
            simplicial: simplicial_vertices(&graph, k).len(),
            l: l_max(&graph, k)?.0,
            label,
            graph,
        })
    }
}

/// Sorts by `q_1` descending; equal values fall back to the label.
pub fn sort_ranking(rows: &mut [RankRow]) {
    rows.sort_by(|a, b| b.q1.total_cmp(&a.q1).then_with(|| a.label.cmp(&b.label)));
}

/// All k-trees on `n` vertices up to isomorphism, ranked by `q_1`.
pub fn rank_ktrees(n: usize, k: usize) -> Result<Vec<RankRow>> {
    let mut rows = enumerate_labeled(n, k, Budget::default())?
        .into_iter()
        .map(|(label, graph)| RankRow::compute(label, graph, k))
        .collect::<Result<Vec<_>>>()?;
    sort_ranking(&mut rows);
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Claim {
    /// The k-star is the unique maximizer of `q_1`.
    StarFirst,
    /// `G_1` is the unique second.
    G1Second,
    /// `G_2` is the unique third.
    G2Third,
    /// `l = n-k` exactly for the k-star.
    LStar,
    /// No k-tree has `l = n-k-1`.
    LGap,
    /// `l = n-k-2` exactly for `G_1`.
    LG1,
    /// `l = n-k-3` exactly for `G_2..G_5`.
    LFamilies,
    /// `|S_1|` of `G_2..G_5` is `n-k-1, n-k-2, n-k-1, n-k-2`.
    FamilyS1,
    /// The simplicial-set facts hold for every class.
    Facts,
    G3BelowG2,
    G4BelowG2,
    G5BelowG3,
}

impl Claim {
    pub fn name(self) -> &'static str {
        match self {
            Claim::StarFirst => "star-first",
            Claim::G1Second => "g1-second",
            Claim::G2Third => "g2-third",
            Claim::LStar => "l-star",
            Claim::LGap => "l-gap",
            Claim::LG1 => "l-g1",
            Claim::LFamilies => "l-families",
            Claim::FamilyS1 => "family-s1",
            Claim::Facts => "facts",
            Claim::G3BelowG2 => "g3-below-g2",
            Claim::G4BelowG2 => "g4-below-g2",
            Claim::G5BelowG3 => "g5-below-g3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// A relevant gap is within tolerance; rerun with more precision.
    Inconclusive,
    /// The claim is not asserted at this order.
    Inapplicable,
    /// The two graphs compared are isomorphic at this order.
    Isomorphic,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Inapplicable => "inapplicable",
            Verdict::Isomorphic => "isomorphic",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClaimVerdict {
    pub claim: Claim,
    pub verdict: Verdict,
    /// The strict gap the claim rests on, when there is one.
    pub gap: Option<f64>,
    pub detail: String,
}

impl ClaimVerdict {
    fn new(claim: Claim, verdict: Verdict, gap: Option<f64>, detail: impl Into<String>) -> Self {
        ClaimVerdict {
            claim,
            verdict,
            gap,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub n: usize,
    pub k: usize,
    pub class_size: usize,
    pub ranking: Vec<RankRow>,
    pub verdicts: Vec<ClaimVerdict>,
    /// Smallest gap among the strict inequalities that were asserted.
    pub min_gap: Option<f64>,
}

impl VerificationReport {
    pub fn verdict(&self, claim: Claim) -> Option<Verdict> {
        self.verdicts.iter().find(|v| v.claim == claim).map(|v| v.verdict)
    }

    pub fn any(&self, verdict: Verdict) -> bool {
        self.verdicts.iter().any(|v| v.verdict == verdict)
    }
}

/// Orders from which each ranking claim is asserted.
pub fn second_min_order(k: usize) -> usize {
    k + 3
}

pub fn third_min_order(k: usize) -> usize {
    k + 4
}

/// Labels of the named families defined at `(n, k)`.
fn family_labels(n: usize, k: usize) -> Result<BTreeMap<Family, CanonicalLabel>> {
    let mut out = BTreeMap::new();
    for family in Family::ALL {
        match NamedFamily::new(family, n, k) {
            Ok(f) => {
                out.insert(family, canonical_label(&f.build())?);
            }
            Err(Error::InfeasibleFamily { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// Checks that `expected` sits at `position` of the ranking, strictly above
/// the next class.
fn position_verdict(
    claim: Claim,
    ranking: &[RankRow],
    position: usize,
    expected: &CanonicalLabel,
    gap_tol: f64,
) -> ClaimVerdict {
    let Some(row) = ranking.get(position) else {
        return ClaimVerdict::new(claim, Verdict::Fail, None, "ranking too short");
    };
    let above = position.checked_sub(1).map(|i| ranking[i].q1 - row.q1);
    let below = ranking.get(position + 1).map(|next| row.q1 - next.q1);
    let tight = [above, below].into_iter().flatten().any(|gap| gap <= gap_tol);
    let verdict = match (&row.label == expected, tight) {
        (_, true) => Verdict::Inconclusive,
        (true, false) => Verdict::Pass,
        (false, false) => Verdict::Fail,
    };
    let detail = if &row.label == expected {
        format!("q1 = {:.11e}", row.q1)
    } else {
        format!("class at position {} is {}", position + 1, row.label.to_hex())
    };
    ClaimVerdict::new(claim, verdict, below, detail)
}

fn iff_verdict(claim: Claim, failures: usize, what: &str) -> ClaimVerdict {
    if failures == 0 {
        ClaimVerdict::new(claim, Verdict::Pass, None, what)
    } else {
        ClaimVerdict::new(
            claim,
            Verdict::Fail,
            None,
            format!("{failures} classes violate: {what}"),
        )
    }
}

fn inapplicable(claim: Claim, why: impl Into<String>) -> ClaimVerdict {
    ClaimVerdict::new(claim, Verdict::Inapplicable, None, why)
}

/// Ranking claims: the k-star, `G_1`, `G_2` in the first three places.
pub fn verify_top3(n: usize, k: usize, ranking: &[RankRow], gap_tol: f64) -> Result<Vec<ClaimVerdict>> {
    let labels = family_labels(n, k)?;
    let mut out = Vec::new();
    let star = &labels[&Family::KStar];
    out.push(position_verdict(Claim::StarFirst, ranking, 0, star, gap_tol));

    match labels.get(&Family::G1) {
        Some(g1) if n >= second_min_order(k) && g1 != star => {
            out.push(position_verdict(Claim::G1Second, ranking, 1, g1, gap_tol));
        }
        _ => out.push(inapplicable(
            Claim::G1Second,
            format!("asserted for n >= {}", second_min_order(k)),
        )),
    }

    match (labels.get(&Family::G1), labels.get(&Family::G2)) {
        (Some(g1), Some(g2)) if n >= third_min_order(k) && g1 != g2 => {
            out.push(position_verdict(Claim::G2Third, ranking, 2, g2, gap_tol));
        }
        (Some(g1), Some(g2)) if g1 == g2 => out.push(inapplicable(Claim::G2Third, "G_2 is isomorphic to G_1")),
        _ => out.push(inapplicable(
            Claim::G2Third,
            format!("asserted for n >= {}", third_min_order(k)),
        )),
    }
    Ok(out)
}

/// The characterizations of `l(G)` and `|S_1|` over every class.
pub fn verify_l_characterizations(n: usize, k: usize, ranking: &[RankRow]) -> Result<Vec<ClaimVerdict>> {
    let labels = family_labels(n, k)?;
    let star = &labels[&Family::KStar];
    let mut out = Vec::new();
    let count = |pred: &dyn Fn(&RankRow) -> bool| ranking.iter().filter(|r| pred(r)).count();

    out.push(iff_verdict(
        Claim::LStar,
        count(&|r| (r.l == n - k) != (&r.label == star)),
        "l = n-k iff k-star",
    ));
    out.push(iff_verdict(
        Claim::LGap,
        count(&|r| n > k && r.l == n - k - 1),
        "no class has l = n-k-1",
    ));
    match labels.get(&Family::G1) {
        Some(g1) if n >= second_min_order(k) => out.push(iff_verdict(
            Claim::LG1,
            count(&|r| (r.l == n - k - 2) != (&r.label == g1)),
            "l = n-k-2 iff G_1",
        )),
        _ => out.push(inapplicable(
            Claim::LG1,
            format!("asserted for n >= {}", second_min_order(k)),
        )),
    }

    let families = [(Family::G2, 1), (Family::G3, 2), (Family::G4, 1), (Family::G5, 2)];
    if n >= family_facts_min_order(k) {
        let g1 = labels.get(&Family::G1);
        let members: Vec<&CanonicalLabel> = families
            .iter()
            .filter_map(|(f, _)| labels.get(f))
            .filter(|&label| Some(label) != g1)
            .collect();
        let what = if members.len() < families.iter().filter(|(f, _)| labels.contains_key(f)).count() {
            "l = n-k-3 iff one of G_2..G_5 (G_2 coincides with G_1 here and is excluded)"
        } else {
            "l = n-k-3 iff one of G_2..G_5"
        };
        out.push(iff_verdict(
            Claim::LFamilies,
            count(&|r| (r.l == n - k - 3) != members.contains(&&r.label)),
            what,
        ));
        let mut wrong = Vec::new();
        for (family, deficit) in families {
            if let Some(label) = labels.get(&family) {
                let row = ranking
                    .iter()
                    .find(|r| &r.label == label)
                    .ok_or_else(|| Error::Postcondition(format!("{family:?} missing from the enumeration")))?;
                if row.simplicial != n - k - deficit {
                    wrong.push(family.name());
                }
            }
        }
        out.push(iff_verdict(Claim::FamilyS1, wrong.len(), "|S_1| of G_2..G_5"));
    } else {
        let why = format!("asserted for n >= {}", family_facts_min_order(k));
        out.push(inapplicable(Claim::LFamilies, why.clone()));
        out.push(inapplicable(Claim::FamilyS1, why));
    }

    let mut broken = 0;
    for row in ranking {
        if !check_facts(&row.graph, k)?.all_hold() {
            broken += 1;
        }
    }
    out.push(iff_verdict(Claim::Facts, broken, "simplicial-set facts"));
    Ok(out)
}

/// `q_1(G_3) < q_1(G_2)`, `q_1(G_4) < q_1(G_2)`, `q_1(G_5) < q_1(G_3)`,
/// each checked numerically and by the corresponding Perron-guided shift.
pub fn verify_family_order(n: usize, k: usize, gap_tol: f64) -> Result<Vec<ClaimVerdict>> {
    let mut out = Vec::new();
    for (claim, low, high) in [
        (Claim::G3BelowG2, Family::G3, Family::G2),
        (Claim::G4BelowG2, Family::G4, Family::G2),
        (Claim::G5BelowG3, Family::G5, Family::G3),
    ] {
        let (Ok(lo), Ok(hi)) = (NamedFamily::new(low, n, k), NamedFamily::new(high, n, k)) else {
            out.push(inapplicable(
                claim,
                format!("{} or {} undefined", low.name(), high.name()),
            ));
            continue;
        };
        let (lo, hi) = (lo.build(), hi.build());
        if canonical_label(&lo)? == canonical_label(&hi)? {
            out.push(ClaimVerdict::new(
                claim,
                Verdict::Isomorphic,
                Some(0.0),
                "the two graphs coincide",
            ));
            continue;
        }
        let cmp = compare_values(q1(&hi)?, q1(&lo)?, gap_tol);
        let shift = family_shift(low, n, k, gap_tol)?;
        let shift_ok = shift
            .as_ref()
            .is_none_or(|s| s.lands_on_target && s.verdict.comparison.order == Q1Order::Greater);
        let verdict = match cmp.order {
            Q1Order::Greater if shift_ok => Verdict::Pass,
            Q1Order::Tie => Verdict::Inconclusive,
            _ => Verdict::Fail,
        };
        let detail = match &shift {
            Some(s) => format!("shift {} -> {}: {:?}", s.mv.source, s.mv.target, s.mv.shifted),
            None => String::from("shift branch needs an empty vertex set; numeric check only"),
        };
        out.push(ClaimVerdict::new(claim, verdict, Some(cmp.gap), detail));
    }
    Ok(out)
}

fn min_gap(verdicts: &[ClaimVerdict]) -> Option<f64> {
    verdicts
        .iter()
        .filter(|v| v.verdict == Verdict::Pass)
        .filter_map(|v| v.gap)
        .min_by(f64::total_cmp)
}

/// Runs every claim against a precomputed ranking.
pub fn report_from_ranking(n: usize, k: usize, ranking: Vec<RankRow>, gap_tol: f64) -> Result<VerificationReport> {
    for pair in ranking.windows(2) {
        if pair[0].q1 < pair[1].q1 {
            return Err(Error::Precondition("ranking is not sorted by q1".into()));
        }
    }
    let mut verdicts = verify_top3(n, k, &ranking, gap_tol)?;
    verdicts.extend(verify_l_characterizations(n, k, &ranking)?);
    verdicts.extend(verify_family_order(n, k, gap_tol)?);
    Ok(VerificationReport {
        n,
        k,
        class_size: ranking.len(),
        min_gap: min_gap(&verdicts),
        ranking,
        verdicts,
    })
}

pub fn verify_point(n: usize, k: usize, gap_tol: f64) -> Result<VerificationReport> {
    report_from_ranking(n, k, rank_ktrees(n, k)?, gap_tol)
}

/// The default grid: `k` in 1..=4 and `n` from `k+1` to `min(k+8, 13)`.
pub fn default_grid() -> Vec<(usize, usize)> {
    grid(1, 4, 13)
}

pub fn grid(k_min: usize, k_max: usize, n_max: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in k_min.max(1)..=k_max {
        for n in k + 1..=(k + 8).min(n_max) {
            out.push((n, k));
        }
    }
    out
}

/// Outcome of a campaign of shift moves.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShiftCampaign {
    /// Moves whose Perron hypothesis held and were compared.
    pub checked: usize,
    /// Valid moves skipped because `x_v > x_u`.
    pub excluded: usize,
    /// Checked moves where `q_1` did not strictly increase.
    pub violations: usize,
    pub min_gap: Option<f64>,
}

impl ShiftCampaign {
    fn record(&mut self, gap: f64, gap_tol: f64) {
        self.checked += 1;
        if compare_values(gap, 0.0, gap_tol).order != Q1Order::Greater {
            self.violations += 1;
        }
        self.min_gap = Some(self.min_gap.map_or(gap, |m| m.min(gap)));
    }

    pub fn merge(&mut self, other: &ShiftCampaign) {
        self.checked += other.checked;
        self.excluded += other.excluded;
        self.violations += other.violations;
        self.min_gap = match (self.min_gap, other.min_gap) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }
}

fn shift_candidates(g: &Graph, v: usize, u: usize) -> Vec<usize> {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(|&w| w != u && !g.has_edge(u, w))
        .collect()
}

/// Every valid shift on every k-tree at `(n, k)`: all sources, targets and
/// nonempty shifted sets of at most `max_shifted` vertices.
pub fn exhaustive_shift_campaign(n: usize, k: usize, max_shifted: usize, gap_tol: f64) -> Result<ShiftCampaign> {
    let mut out = ShiftCampaign::default();
    for g in enumerate_labeled(n, k, Budget::default())?.values() {
        let x = perron_vector(g)?;
        let before = q1(g)?;
        for v in 0..n {
            for u in (0..n).filter(|&u| u != v) {
                let candidates = shift_candidates(g, v, u);
                let masks = (1usize..1 << candidates.len()).filter(|m| m.count_ones() as usize <= max_shifted);
                if !perron_le(x[v], x[u]) {
                    out.excluded += masks.count();
                    continue;
                }
                for mask in masks {
                    let shifted = (0..candidates.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| candidates[i])
                        .collect();
                    let after = apply_shift(g, &ShiftMove::new(v, u, shifted))?;
                    out.record(q1(&after)? - before, gap_tol);
                }
            }
        }
    }
    Ok(out)
}

/// A uniformly random extension sequence from `K_k` to `n` vertices.
pub fn random_k_tree(n: usize, k: usize, rng: &mut impl Rng) -> Result<Graph> {
    if k == 0 || n < k {
        return Err(Error::InvalidParameter(format!(
            "need n >= k >= 1, got n = {n}, k = {k}"
        )));
    }
    let mut g = Graph::complete(k);
    while g.n() < n {
        let all = cliques(&g, k);
        let clique = all.choose(rng).expect("a k-tree has a k-clique");
        g = g.with_vertex(clique)?;
    }
    Ok(g)
}

/// `trials` random shifts satisfying the Perron hypothesis, each on a fresh
/// random k-tree. Draws violating the hypothesis are counted as excluded
/// and redrawn.
pub fn random_shift_campaign(n: usize, k: usize, trials: usize, seed: u64, gap_tol: f64) -> Result<ShiftCampaign> {
    if n < k + 2 {
        return Err(Error::InvalidParameter(format!(
            "need n >= k+2 for a shift, got n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ShiftCampaign::default();
    while out.checked < trials {
        let g = random_k_tree(n, k, &mut rng)?;
        let v = rng.gen_range(0..n);
        let u = (v + rng.gen_range(1..n)) % n;
        let candidates = shift_candidates(&g, v, u);
        if candidates.is_empty() {
            continue;
        }
        let x = perron_vector(&g)?;
        if !perron_le(x[v], x[u]) {
            out.excluded += 1;
            continue;
        }
        let shifted: Vec<usize> = loop {
            let pick: Vec<usize> = candidates.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
            if !pick.is_empty() {
                break pick;
            }
        };
        let after = apply_shift(&g, &ShiftMove::new(v, u, shifted))?;
        out.record(q1(&after)? - q1(&g)?, gap_tol);
    }
    Ok(out)
}

/// Outcome of running the constructive steps over an enumeration.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepCampaign {
    pub climbs: usize,
    /// Longest climb to the k-star, in steps.
    pub longest_climb: usize,
    pub l_steps: usize,
    pub two_tip_steps: usize,
    pub two_tip_branches: BTreeMap<Branch, usize>,
    /// Inputs whose step returned an error, with the error text.
    pub failures: Vec<String>,
    pub min_gap: Option<f64>,
}

impl StepCampaign {
    fn gap(&mut self, before: f64, after: f64) {
        let gap = after - before;
        self.min_gap = Some(self.min_gap.map_or(gap, |m| m.min(gap)));
    }
}

/// Climbs from every class to the k-star, and runs the `l`-raising steps on
/// every class in their precondition sets.
pub fn step_campaign(n: usize, k: usize, gap_tol: f64) -> Result<StepCampaign> {
    let mut out = StepCampaign::default();
    let g1 = NamedFamily::new(Family::G1, n, k)
        .ok()
        .map(|f| canonical_label(&f.build()))
        .transpose()?;
    let star = canonical_label(&NamedFamily::new(Family::KStar, n, k)?.build())?;
    for (label, g) in enumerate_labeled(n, k, Budget::default())? {
        match climb(&g, k, gap_tol) {
            Ok(path) => {
                out.climbs += 1;
                out.longest_climb = out.longest_climb.max(path.len() - 1);
                for pair in path.windows(2) {
                    out.gap(pair[0].q1, pair[1].q1);
                }
                let end = &path.last().expect("nonempty").graph;
                if canonical_label(end)? != star {
                    out.failures
                        .push(format!("climb from {} ended off the k-star", label.to_hex()));
                }
            }
            Err(e) => out.failures.push(format!("climb from {}: {e}", label.to_hex())),
        }
        if n < k + 3 {
            continue;
        }
        let count = simplicial_vertices(&g, k).len();
        let l = l_max(&g, k)?.0;
        if count == n - k - 1 && Some(&label) != g1.as_ref() {
            out.l_steps += 1;
            match increase_l_step(&g, k, gap_tol) {
                Ok(step) => out.gap(step.q1_before, step.q1_after),
                Err(e) => out.failures.push(format!("l step from {}: {e}", label.to_hex())),
            }
        }
        if n >= k + 4 && count == n - k - 2 && l + 3 < n - k {
            out.two_tip_steps += 1;
            match two_tip_l_step(&g, k, gap_tol) {
                Ok(step) => {
                    out.gap(step.q1_before, step.q1_after);
                    *out.two_tip_branches.entry(step.branch).or_insert(0) += 1;
                }
                Err(e) => out
                    .failures
                    .push(format!("l step (|S_1| = n-k-2) from {}: {e}", label.to_hex())),
            }
        }
    }
    Ok(out)
}

/// Trace and second-moment identities of the `Q`-spectrum:
/// `sum q_i = 2m` and `sum q_i^2 = sum d_i^2 + sum d_i`.
pub fn spectral_identity_errors(g: &Graph) -> Result<(f64, f64)> {
    let spec = graph_spectrum(g)?;
    let trace: f64 = spec.eigenvalues.iter().sum();
    let second: f64 = spec.eigenvalues.iter().map(|q| q * q).sum();
    let degrees = g.degrees();
    let expected: usize = degrees.iter().map(|d| d * d + d).sum();
    Ok((
        libm::fabs(trace - 2.0 * g.m() as f64),
        libm::fabs(second - expected as f64),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktree::{make_g1, make_g2, make_k_star};
    use crate::DEFAULT_GAP_TOL;

    #[test]
    fn small_rankings() {
        for k in 1..5 {
            let r = rank_ktrees(k + 1, k).unwrap();
            assert_eq!(r.len(), 1);
            assert!((r[0].q1 - 2.0 * k as f64).abs() < 1e-10);
        }
        let r = rank_ktrees(6, 1).unwrap();
        assert_eq!(r.len(), 6);
        assert!((r[0].q1 - 6.0).abs() < 1e-10);
        assert_eq!(rank_ktrees(8, 2).unwrap().len(), 39);
    }

    #[test]
    fn top_three_at_7_2() {
        let report = verify_point(7, 2, DEFAULT_GAP_TOL).unwrap();
        let labels = [
            make_k_star(2, 5).unwrap(),
            make_g1(7, 2).unwrap(),
            make_g2(7, 2).unwrap(),
        ]
        .map(|g| canonical_label(&g).unwrap());
        for (row, label) in report.ranking.iter().zip(&labels) {
            assert_eq!(&row.label, label);
        }
        for claim in [Claim::StarFirst, Claim::G1Second, Claim::G2Third] {
            assert_eq!(report.verdict(claim), Some(Verdict::Pass));
        }
        assert!(report.min_gap.unwrap() > DEFAULT_GAP_TOL);
    }

    #[test]
    fn degenerate_orders() {
        let report = verify_point(4, 2, DEFAULT_GAP_TOL).unwrap();
        assert_eq!(report.class_size, 1);
        assert_eq!(report.verdict(Claim::StarFirst), Some(Verdict::Pass));
        assert_eq!(report.verdict(Claim::G1Second), Some(Verdict::Inapplicable));
        assert_eq!(report.verdict(Claim::G2Third), Some(Verdict::Inapplicable));
        // For trees on five vertices G_2 and G_1 are the same graph.
        let report = verify_point(5, 1, DEFAULT_GAP_TOL).unwrap();
        assert_eq!(report.verdict(Claim::G2Third), Some(Verdict::Inapplicable));
        assert_eq!(report.verdict(Claim::G1Second), Some(Verdict::Pass));
    }

    #[test]
    fn l_values_at_7_2_and_8_2() {
        let r = rank_ktrees(7, 2).unwrap();
        let star = canonical_label(&make_k_star(2, 5).unwrap()).unwrap();
        let top: Vec<_> = r.iter().filter(|row| row.l == 5).collect();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].label, star);
        assert!(r.iter().all(|row| row.l != 4));
        let report = verify_point(8, 2, DEFAULT_GAP_TOL).unwrap();
        assert_eq!(report.verdict(Claim::LFamilies), Some(Verdict::Pass));
        assert_eq!(report.verdict(Claim::FamilyS1), Some(Verdict::Pass));
    }

    #[test]
    fn family_orderings() {
        for (n, k) in [(9, 3), (8, 2)] {
            for v in verify_family_order(n, k, DEFAULT_GAP_TOL).unwrap() {
                assert_eq!(v.verdict, Verdict::Pass, "{v:?}");
                assert!(v.gap.unwrap() > DEFAULT_GAP_TOL);
            }
        }
        let at_k1 = verify_family_order(6, 1, DEFAULT_GAP_TOL).unwrap();
        assert_eq!(at_k1[1].verdict, Verdict::Inapplicable);
    }

    #[test]
    fn shift_campaigns() {
        let c = exhaustive_shift_campaign(6, 2, usize::MAX, DEFAULT_GAP_TOL).unwrap();
        assert!(c.checked > 0 && c.excluded > 0);
        assert_eq!(c.violations, 0);
        assert!(c.min_gap.unwrap() > DEFAULT_GAP_TOL);
        let single = exhaustive_shift_campaign(6, 2, 1, DEFAULT_GAP_TOL).unwrap();
        assert!(single.checked < c.checked);
        assert_eq!(single.violations, 0);
        let r = random_shift_campaign(10, 2, 100, 42, DEFAULT_GAP_TOL).unwrap();
        assert_eq!(r.checked, 100);
        assert_eq!(r.violations, 0);
        assert_eq!(r, random_shift_campaign(10, 2, 100, 42, DEFAULT_GAP_TOL).unwrap());
    }

    #[test]
    fn random_k_trees_are_k_trees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 1..4 {
            for n in k..k + 6 {
                let g = random_k_tree(n, k, &mut rng).unwrap();
                assert!(crate::ktree::is_k_tree(&g, k).is_some());
            }
        }
    }

    #[test]
    fn steps_at_8_2() {
        let c = step_campaign(8, 2, DEFAULT_GAP_TOL).unwrap();
        assert!(c.failures.is_empty(), "{:?}", c.failures);
        assert_eq!(c.climbs, 39);
        assert!(c.longest_climb <= 5);
        assert!(c.l_steps > 0 && c.two_tip_steps > 0);
        assert!(c.min_gap.unwrap() > DEFAULT_GAP_TOL);
    }

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.first(), Some(&(2, 1)));
        assert_eq!(g.last(), Some(&(12, 4)));
        assert!(g.iter().all(|&(n, k)| n > k && n <= (k + 8).min(13)));
        assert_eq!(g.len(), 8 + 8 + 8 + 8);
    }

    #[test]
    fn identities_hold() {
        for g in enumerate_labeled(7, 2, Budget::default()).unwrap().values() {
            let (t, s) = spectral_identity_errors(g).unwrap();
            assert!(t < 1e-9 && s < 1e-8);
        }
    }
}
