use std::collections::BTreeMap;

use rayon::prelude::*;

use super::table::{Cell, Table};
use super::{check_count, check_grid, check_range, invalid, native_length, theta_grid, Execution, LabError};
use super::{build_walk, MAX_RESOURCE_LEN, MAX_SWEEP_LEN};
use crate::analysis::{self, discrimination_success, enumerate_strings, jaro, membership, reference_word, words_of_length};
use crate::engine::ArcStateVector;
use crate::language::{
    encode_spatial_prefix, superpose_words, target_word, BuildError, BuiltWalk, LanguageId, Mode, QuantumWord, Word,
};

/// A row type with a fixed CSV layout.
pub trait TableRow {
    const EXPERIMENT: &'static str;
    const COLUMNS: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

pub fn to_table<R: TableRow>(rows: &[R]) -> Table {
    let mut t = Table::new(R::EXPERIMENT, R::COLUMNS);
    for r in rows {
        t.push(r.cells());
    }
    t
}

fn map_rows<T: Sync, R: Send>(
    items: &[T],
    exec: Execution,
    f: impl Fn(&T) -> Result<R, LabError> + Sync + Send,
) -> Result<Vec<R>, LabError> {
    match exec {
        Execution::Parallel => items.par_iter().map(f).collect(),
        Execution::Serial => items.iter().map(f).collect(),
    }
}

fn at(w: &Word) -> impl FnOnce(LabError) -> LabError + '_ {
    move |e| LabError::AtString {
        string: w.to_string(),
        source: Box::new(e),
    }
}

fn fidelity_or_zero(psi: &ArcStateVector, phi: Option<&ArcStateVector>) -> Result<f64, LabError> {
    Ok(match phi {
        Some(phi) => analysis::fidelity(psi, phi)?,
        None => 0.0,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    /// 1-based position in the enumeration.
    pub index: usize,
    pub string: Word,
    pub fidelity: f64,
    pub jaro: f64,
    pub acceptance: f64,
    pub in_language: bool,
}

impl TableRow for CurveRow {
    const EXPERIMENT: &'static str = "fidelity_curve";
    const COLUMNS: &'static [&'static str] =
        &["index", "string", "length", "fidelity", "jaro", "acceptance", "in_language"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.index.into(),
            self.string.to_string().into(),
            self.string.len().into(),
            self.fidelity.into(),
            self.jaro.into(),
            self.acceptance.into(),
            self.in_language.into(),
        ]
    }
}

/// The acceptor length used for a string of length `len`: odd lengths run
/// on the next even acceptor with the last position left empty.
fn curve_walk_length(language: &LanguageId, len: usize) -> Result<usize, LabError> {
    match language {
        LanguageId::SpecificWord(w) if len > w.len() => Err(invalid(format!(
            "strings longer than the target {w} have no acceptor"
        ))),
        LanguageId::SpecificWord(w) => Ok(w.len()),
        _ => Ok(len + len % 2),
    }
}

struct CurveWalk {
    walk: BuiltWalk,
    accepting: Option<ArcStateVector>,
}

impl CurveWalk {
    fn new(language: &LanguageId, mode: Mode, n: usize) -> Result<Self, LabError> {
        let walk = build_walk(language, mode, n)?;
        let target = target_word(language, n).ok_or(BuildError::NoTarget {
            language: language.clone(),
            n,
        })?;
        let accepting = walk.accepting_state(&QuantumWord::classical(&target)?)?;
        Ok(Self { walk, accepting })
    }

    fn final_state(&self, w: &Word) -> Result<ArcStateVector, LabError> {
        let input = QuantumWord::classical(w)?;
        let psi = match self.walk.mode() {
            Mode::Spatial => encode_spatial_prefix(&self.walk, &input)?,
            Mode::Sequential => self.walk.encode(&input)?,
        };
        Ok(self.walk.evolve(&psi)?)
    }
}

/// Fidelity, Jaro similarity and acceptance for the first `count` strings
/// of the length-lexicographic enumeration.
///
/// Fidelity is taken against the acceptor's accepting state; Jaro against
/// the reference word of the string's length.
pub fn exp_fidelity_curve(
    language: &LanguageId,
    mode: Mode,
    count: usize,
    exec: Execution,
) -> Result<Vec<CurveRow>, LabError> {
    check_count(count)?;
    let strings = enumerate_strings(count);
    let mut walks = BTreeMap::new();
    for s in &strings {
        let n = curve_walk_length(language, s.len()).map_err(at(s))?;
        if let std::collections::btree_map::Entry::Vacant(slot) = walks.entry(n) {
            slot.insert(CurveWalk::new(language, mode, n).map_err(at(s))?);
        }
    }
    let indexed: Vec<(usize, &Word)> = strings.iter().enumerate().collect();
    map_rows(&indexed, exec, |&(i, s)| {
        let eval = || -> Result<CurveRow, LabError> {
            let cw = &walks[&curve_walk_length(language, s.len())?];
            let psi = cw.final_state(s)?;
            let reference = reference_word(language, s.len()).unwrap_or_default();
            Ok(CurveRow {
                index: i + 1,
                string: s.clone(),
                fidelity: fidelity_or_zero(&psi, cw.accepting.as_ref())?,
                jaro: jaro(s, &reference),
                acceptance: cw.walk.accept_probability(&psi)?,
                in_language: membership(language, s),
            })
        };
        eval().map_err(at(s))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantumInputRow {
    pub theta: f64,
    pub other: Word,
    pub match_count: usize,
    pub fidelity: f64,
}

impl TableRow for QuantumInputRow {
    const EXPERIMENT: &'static str = "quantum_input";
    const COLUMNS: &'static [&'static str] = &["theta", "other_string", "match_count", "fidelity"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.theta.into(),
            self.other.to_string().into(),
            self.match_count.into(),
            self.fidelity.into(),
        ]
    }
}

fn spatial_for(base: &Word, language: Option<&LanguageId>) -> Result<BuiltWalk, LabError> {
    let language = match language {
        Some(l) => l.clone(),
        None => LanguageId::specific(base.clone())?,
    };
    Ok(build_walk(&language, Mode::Spatial, base.len())?)
}

/// Quantum inputs `cos θ·base + sin θ·other` for every other word of the
/// base's length, scored against the accepting state of `base`.
pub fn exp_quantum_input(
    base: &Word,
    language: Option<&LanguageId>,
    grid: usize,
) -> Result<Vec<QuantumInputRow>, LabError> {
    check_grid(grid)?;
    let walk = spatial_for(base, language)?;
    let accepting = walk.accepting_state(&QuantumWord::classical(base)?)?;
    let thetas = theta_grid(grid);
    let mut rows = Vec::new();
    for other in words_of_length(base.len()).filter(|o| o != base) {
        for &theta in &thetas {
            let out = walk.run(&superpose_words(base, &other, theta)?)?;
            rows.push(QuantumInputRow {
                theta,
                match_count: base.matches(&other),
                fidelity: fidelity_or_zero(&out.state, accepting.as_ref())?,
                other: other.clone(),
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub n: usize,
    pub target: Option<Word>,
    pub nonword_count: usize,
    pub max_accept: f64,
    pub argmax: Word,
    pub paper_claim: Option<f64>,
    pub claim_met: Option<bool>,
}

impl TableRow for BoundRow {
    const EXPERIMENT: &'static str = "bounds";
    const COLUMNS: &'static [&'static str] = &[
        "n",
        "target",
        "nonword_count",
        "max_accept",
        "argmax_string",
        "paper_claim",
        "claim_met",
    ];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.n.into(),
            self.target.as_ref().map(ToString::to_string).into(),
            self.nonword_count.into(),
            self.max_accept.into(),
            self.argmax.to_string().into(),
            self.paper_claim.into(),
            self.claim_met.into(),
        ]
    }
}

/// Published upper bound on non-word acceptance, where one exists.
fn claimed_bound(language: &LanguageId, mode: Mode, n: usize) -> Option<f64> {
    match (mode, language) {
        (Mode::Spatial, _) => Some(2.0 / (n * n) as f64),
        (Mode::Sequential, LanguageId::SpecificWord(_)) => None,
        (Mode::Sequential, _) => Some(0.5),
    }
}

/// Ties within this distance keep the earlier string as argmax.
const TIE: f64 = 1e-12;

/// Exhaustive maximum acceptance over non-words, for every length in
/// `1..=max_len` that has an acceptor.
pub fn exp_bound_sweep(
    language: &LanguageId,
    mode: Mode,
    max_len: usize,
    exec: Execution,
) -> Result<Vec<BoundRow>, LabError> {
    check_range("max length", max_len, MAX_SWEEP_LEN)?;
    let mut rows = Vec::new();
    for n in (1..=max_len).filter(|&n| native_length(language, mode, n)) {
        let walk = build_walk(language, mode, n)?;
        let nonwords: Vec<Word> = words_of_length(n).filter(|w| !membership(language, w)).collect();
        let accepts = map_rows(&nonwords, exec, |w| walk.acceptance(w).map_err(|e| at(w)(e.into())))?;
        let mut best = 0;
        for (i, &p) in accepts.iter().enumerate() {
            if p > accepts[best] + TIE {
                best = i;
            }
        }
        let max_accept = accepts[best];
        let paper_claim = claimed_bound(language, mode, n);
        rows.push(BoundRow {
            n,
            target: target_word(language, n),
            nonword_count: nonwords.len(),
            max_accept,
            argmax: nonwords[best].clone(),
            paper_claim,
            claim_met: paper_claim.map(|c| max_accept <= c + 1e-9),
        });
    }
    if rows.is_empty() {
        return Err(invalid(format!("{language} has no {mode} acceptor of length <= {max_len}")));
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceRow {
    pub n: usize,
    pub mode: Mode,
    pub language: LanguageId,
    /// Stable series label: mode plus language kind.
    pub family: &'static str,
    pub nodes: usize,
    pub steps: usize,
    pub paper_nodes: Option<usize>,
    pub paper_steps: Option<usize>,
}

impl TableRow for ResourceRow {
    const EXPERIMENT: &'static str = "resources";
    const COLUMNS: &'static [&'static str] =
        &["n", "mode", "language", "family", "nodes", "steps", "paper_nodes", "paper_steps"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.n.into(),
            self.mode.to_string().into(),
            self.language.to_string().into(),
            self.family.into(),
            self.nodes.into(),
            self.steps.into(),
            self.paper_nodes.into(),
            self.paper_steps.into(),
        ]
    }
}

/// Node and step counts of every builder up to `max_len`. Spatial counts
/// include the input nodes; sequential counts exclude the input rail.
pub fn exp_resources(max_len: usize) -> Result<Vec<ResourceRow>, LabError> {
    check_range("max length", max_len, MAX_RESOURCE_LEN)?;
    let mut rows = Vec::new();
    for n in 1..=max_len {
        let mut jobs: Vec<(Mode, LanguageId, &'static str)> = Vec::new();
        if n.is_multiple_of(2) {
            jobs.push((Mode::Spatial, LanguageId::Leq, "spatial-eq"));
            jobs.push((Mode::Spatial, LanguageId::Lab, "spatial-ab"));
        }
        jobs.push((Mode::Sequential, LanguageId::Lab, "sequential-ab"));
        if n.is_multiple_of(2) {
            jobs.push((Mode::Sequential, LanguageId::Leq, "sequential-eq"));
            let w = target_word(&LanguageId::Lab, n).expect("even length");
            jobs.push((Mode::Sequential, LanguageId::SpecificWord(w), "sequential-word"));
        }
        for (mode, language, family) in jobs {
            let walk = build_walk(&language, mode, n)?;
            let (nodes, paper_nodes, paper_steps) = match (mode, family) {
                (Mode::Spatial, _) => (walk.vertex_count(), Some(4 * n + 3), Some(3)),
                (_, "sequential-word") if n == 4 => (walk.processing_vertex_count(), Some(8), Some(6)),
                (_, "sequential-ab") if n == 4 => (walk.processing_vertex_count(), None, Some(5)),
                _ => (walk.processing_vertex_count(), None, None),
            };
            rows.push(ResourceRow {
                n,
                mode,
                language,
                family,
                nodes,
                steps: walk.steps(),
                paper_nodes,
                paper_steps,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationRow {
    pub theta: f64,
    pub p_accept_1: f64,
    pub p_accept_2: f64,
    pub success: f64,
}

impl TableRow for DiscriminationRow {
    const EXPERIMENT: &'static str = "discriminate";
    const COLUMNS: &'static [&'static str] = &["theta", "p_accept_1", "p_accept_2", "success"];

    fn cells(&self) -> Vec<Cell> {
        vec![
            self.theta.into(),
            self.p_accept_1.into(),
            self.p_accept_2.into(),
            self.success.into(),
        ]
    }
}

/// Distinguishing `w1` from `cos θ·w1 + sin θ·w2` with one run of the
/// spatial acceptor (for `w1` unless `language` is given).
pub fn exp_discriminate(
    w1: &Word,
    w2: &Word,
    language: Option<&LanguageId>,
    grid: usize,
) -> Result<Vec<DiscriminationRow>, LabError> {
    check_grid(grid)?;
    if w1.len() != w2.len() {
        return Err(BuildError::LengthMismatch {
            expected: w1.len(),
            found: w2.len(),
        }
        .into());
    }
    let walk = spatial_for(w1, language)?;
    let p1 = walk.acceptance(w1)?;
    theta_grid(grid)
        .into_iter()
        .map(|theta| {
            let p2 = walk.run(&superpose_words(w1, w2, theta)?)?.accept;
            Ok(DiscriminationRow {
                theta,
                p_accept_1: p1,
                p_accept_2: p2,
                success: discrimination_success(p1, p2)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn curve_peaks_on_language() {
        let rows = exp_fidelity_curve(&LanguageId::Leq, Mode::Spatial, 30, Execution::Serial).unwrap();
        assert_eq!(rows.len(), 30);
        assert_eq!(rows[17].string, w("aabb"));
        assert_eq!(rows[17].index, 18);
        for r in &rows {
            assert!((0.0..=1.0 + 1e-12).contains(&r.fidelity));
            let peak = (r.fidelity - 1.0).abs() < 1e-9;
            assert_eq!(peak, r.in_language, "{}", r.string);
        }
        // abbb: one mismatch out of four.
        let abbb = rows.iter().find(|r| r.string == w("abbb")).unwrap();
        assert!((abbb.acceptance - 9.0 / 16.0).abs() < 1e-12);
        assert!((abbb.fidelity - 9.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn curve_sequential_lab() {
        let rows = exp_fidelity_curve(&LanguageId::Lab, Mode::Sequential, 30, Execution::Serial).unwrap();
        for r in &rows {
            if r.in_language {
                assert!((r.fidelity - 1.0).abs() < 1e-9, "{}", r.string);
                assert!((r.acceptance - 1.0).abs() < 1e-9);
            }
        }
        let bb = rows.iter().find(|r| r.string == w("bb")).unwrap();
        assert!((bb.acceptance - 0.5).abs() < 1e-12);
    }

    #[test]
    fn serial_equals_parallel() {
        for mode in [Mode::Spatial, Mode::Sequential] {
            let a = exp_fidelity_curve(&LanguageId::Lab, mode, 62, Execution::Serial).unwrap();
            let b = exp_fidelity_curve(&LanguageId::Lab, mode, 62, Execution::Parallel).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn specific_word_curve_rejects_long_strings() {
        let lang = LanguageId::SpecificWord(w("ab"));
        let err = exp_fidelity_curve(&lang, Mode::Spatial, 10, Execution::Serial).unwrap_err();
        assert!(matches!(err, LabError::AtString { ref string, .. } if string == "aaa"), "{err}");
        assert_eq!(exp_fidelity_curve(&lang, Mode::Spatial, 6, Execution::Serial).unwrap().len(), 6);
    }

    #[test]
    fn quantum_input_classes() {
        let rows = exp_quantum_input(&w("aabb"), Some(&LanguageId::Leq), 11).unwrap();
        assert_eq!(rows.len(), 15 * 11);
        for r in &rows {
            let m = r.match_count as f64;
            let expect = ((m + (4.0 - m) * r.theta.cos()) / 4.0).powi(2);
            assert!((r.fidelity - expect).abs() < 1e-12, "{r:?}");
        }
        let bbaa_end = rows.iter().find(|r| r.other == w("bbaa") && r.theta == FRAC_PI_2).unwrap();
        assert!(bbaa_end.fidelity < 1e-12);
    }

    #[test]
    fn bounds_spatial() {
        let rows = exp_bound_sweep(&LanguageId::Leq, Mode::Spatial, 6, Execution::Parallel).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), [2, 4, 6]);
        for r in &rows {
            let n = r.n as f64;
            assert!((r.max_accept - (n - 1.0).powi(2) / (n * n)).abs() < 1e-12);
            assert_eq!(r.nonword_count, (1 << r.n) - 1);
        }
        assert_eq!(rows[0].claim_met, Some(true));
        assert_eq!(rows[1].claim_met, Some(false));
        assert_eq!(rows[1].argmax, w("aaab"));
    }

    #[test]
    fn bounds_sequential() {
        let rows = exp_bound_sweep(&LanguageId::Lab, Mode::Sequential, 4, Execution::Serial).unwrap();
        assert_eq!(rows.len(), 4);
        assert!((rows[1].max_accept - 0.5).abs() < 1e-12);
        assert!((rows[3].max_accept - 0.75).abs() < 1e-12);
        assert_eq!(rows[0].target, None);
        assert!(exp_bound_sweep(&LanguageId::Leq, Mode::Sequential, 1, Execution::Serial).is_err());
    }

    #[test]
    fn resources_counts() {
        let rows = exp_resources(4).unwrap();
        let spatial = rows.iter().find(|r| r.n == 4 && r.family == "spatial-eq").unwrap();
        assert_eq!((spatial.nodes, spatial.steps), (20, 3));
        assert_eq!(spatial.paper_nodes, Some(19));
        let word = rows.iter().find(|r| r.n == 4 && r.family == "sequential-word").unwrap();
        assert_eq!((word.nodes, word.steps), (9, 5));
        assert_eq!(rows.iter().filter(|r| r.n == 1).count(), 1);
    }

    #[test]
    fn discrimination() {
        let same = exp_discriminate(&w("aabb"), &w("aabb"), None, 5).unwrap();
        assert!(same.iter().all(|r| (r.success - 0.5).abs() < 1e-12));
        let far = exp_discriminate(&w("aabb"), &w("bbaa"), None, 5).unwrap();
        assert!((far.last().unwrap().success - 1.0).abs() < 1e-9);
        assert!((far[0].success - 0.5).abs() < 1e-12);
        let near = exp_discriminate(&w("aabb"), &w("abbb"), None, 3).unwrap();
        assert!((near[2].success - 0.71875).abs() < 1e-12);
        assert!(exp_discriminate(&w("aabb"), &w("ab"), None, 3).is_err());
    }
}
