//! Rail-fed acceptors for sequentially streamed input.
//!
//! The input sits on a rail `R_n … R_1` of conveyor nodes joined by parallel
//! edge pairs, one edge per lane. Rail ports are `(prev-a, prev-b, next-a,
//! next-b)`; `next` faces the head `R_1`. Position `j` starts on `R_j`'s
//! `prev` ports (the `(α, 0, 0, 0)` / `(0, α, 0, 0)` layout) and reaches the
//! gadget after `j` steps. The far end of the rail is capped by a self-loop
//! between `R_n`'s two `prev` ports.
//!
//! [`build_sequential`] attaches a splitter that sends the a-lane through a
//! delay path of `δ` swap nodes and the b-lane straight to a Hadamard merge.
//! An `a` at position `p` therefore meets a `b` at position `p + δ` and the
//! pair leaves entirely by the accept port. A lone symbol splits evenly.
//!
//! [`build_sequential_word`] uses only permutations: the splitter feeds each
//! lane into its own chain, and because amplitude from position `j` has
//! travelled `n + 1 − j` nodes down the chain after `n + 1` steps, the chain
//! node it stops on identifies its position. That node is labelled accept or
//! reject according to whether the lane matches the expected symbol.

use super::walk::{InputSlots, Mode, WalkParts};
use super::{lane, BuildError, BuiltWalk, LanguageId, QuantumWord, Word};
use crate::engine::{ArcStateVector, CoinSpec, CoinTable, GraphBuilder, PortRef, VertexId};

struct Rail {
    nodes: Vec<VertexId>,
    input_map: Vec<InputSlots>,
}

/// Adds `R_1..R_n` and returns them head first. `R_1`'s `next` ports are
/// left for the caller to bind.
fn add_rail(b: &mut GraphBuilder, coins: &mut Vec<CoinSpec>, n: usize) -> Rail {
    let nodes: Vec<_> = (0..n)
        .map(|_| {
            coins.push(CoinSpec::Conveyor);
            b.add_vertex(4)
        })
        .collect();
    for w in nodes.windows(2) {
        let (down, up) = (w[0], w[1]);
        b.link(up, 2, down, 0).link(up, 3, down, 1);
    }
    let tail = nodes[n - 1];
    b.link(tail, 0, tail, 1);
    let input_map = nodes
        .iter()
        .map(|&r| InputSlots {
            a: PortRef::new(r, 0),
            b: PortRef::new(r, 1),
        })
        .collect();
    Rail { nodes, input_map }
}

/// A path of `len` nodes hanging off `from`. Interior nodes swap; the last
/// node has degree 1.
fn add_chain(
    b: &mut GraphBuilder,
    coins: &mut Vec<CoinSpec>,
    from: PortRef,
    len: usize,
) -> Vec<VertexId> {
    let mut prev = from;
    (0..len)
        .map(|k| {
            let last = k + 1 == len;
            let v = b.add_vertex(if last { 1 } else { 2 });
            coins.push(if last {
                CoinSpec::Identity { d: 1 }
            } else {
                CoinSpec::swap()
            });
            b.connect(prev, PortRef::new(v, 0));
            prev = PortRef::new(v, 1);
            v
        })
        .collect()
}

/// Rail, splitter, delay path and Hadamard merge for `Lab` (`δ = 1`) or
/// `Leq` (`δ = n/2`, `n` even). Runs for `n + δ + 2` steps.
pub fn build_sequential(language: &LanguageId, n: usize) -> Result<BuiltWalk, BuildError> {
    if n == 0 {
        return Err(BuildError::EmptyInput);
    }
    let delay = match language {
        LanguageId::Lab => 1,
        LanguageId::Leq if n.is_multiple_of(2) => n / 2,
        LanguageId::Leq => {
            return Err(BuildError::NoTarget {
                language: language.clone(),
                n,
            })
        }
        LanguageId::SpecificWord(_) => {
            return Err(BuildError::Unsupported {
                language: language.clone(),
                mode: Mode::Sequential,
            })
        }
    };

    let mut b = GraphBuilder::new();
    let mut coins = Vec::new();
    let rail = add_rail(&mut b, &mut coins, n);
    let head = rail.nodes[0];

    let splitter = b.add_vertex(4);
    coins.push(CoinSpec::Conveyor);
    b.link(head, 2, splitter, 0).link(head, 3, splitter, 1);

    let delay_path = add_delay(&mut b, &mut coins, PortRef::new(splitter, 2), delay);
    let merge = b.add_vertex(4);
    coins.push(CoinSpec::HadamardMerge);
    b.link(delay_path[delay - 1], 1, merge, 0);
    b.link(splitter, 3, merge, 1);

    let chain_len = n + delay;
    let accept = add_chain(&mut b, &mut coins, PortRef::new(merge, 2), chain_len);
    let reject = add_chain(&mut b, &mut coins, PortRef::new(merge, 3), chain_len);

    let graph = b.build()?;
    let coins = CoinTable::new(&graph, coins)?;
    BuiltWalk::from_parts(WalkParts {
        graph,
        coins,
        input_map: rail.input_map,
        accept,
        reject,
        steps: n + delay + 2,
        mode: Mode::Sequential,
        language: language.clone(),
        input_vertices: rail.nodes,
    })
}

/// A path of `len ≥ 1` swap nodes whose far end (port 1 of the last node)
/// is left for the caller to bind.
fn add_delay(
    b: &mut GraphBuilder,
    coins: &mut Vec<CoinSpec>,
    from: PortRef,
    len: usize,
) -> Vec<VertexId> {
    let mut prev = from;
    (0..len)
        .map(|_| {
            let v = b.add_vertex(2);
            coins.push(CoinSpec::swap());
            b.connect(prev, PortRef::new(v, 0));
            prev = PortRef::new(v, 1);
            v
        })
        .collect()
}

/// Permutation-only acceptor for exactly `w`. Runs for `|w| + 1` steps.
pub fn build_sequential_word(w: &Word) -> Result<BuiltWalk, BuildError> {
    let language = LanguageId::specific(w.clone())?;
    let n = w.len();

    let mut b = GraphBuilder::new();
    let mut coins = Vec::new();
    let rail = add_rail(&mut b, &mut coins, n);
    let head = rail.nodes[0];

    let splitter = b.add_vertex(4);
    coins.push(CoinSpec::Conveyor);
    b.link(head, 2, splitter, 0).link(head, 3, splitter, 1);
    let lanes = [
        add_chain(&mut b, &mut coins, PortRef::new(splitter, 2), n),
        add_chain(&mut b, &mut coins, PortRef::new(splitter, 3), n),
    ];

    let (mut accept, mut reject) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for (j, &sym) in w.symbols().iter().enumerate() {
        // position j (0-based) stops on chain node n - 1 - j at step n + 1
        let k = n - 1 - j;
        accept.push(lanes[lane(sym)][k]);
        reject.push(lanes[lane(sym.other())][k]);
    }

    let graph = b.build()?;
    let coins = CoinTable::new(&graph, coins)?;
    BuiltWalk::from_parts(WalkParts {
        graph,
        coins,
        input_map: rail.input_map,
        accept,
        reject,
        steps: n + 1,
        mode: Mode::Sequential,
        language,
        input_vertices: rail.nodes,
    })
}

/// Places position `j` on rail node `R_j`'s `prev` ports, `α = 1/√len`.
pub fn encode_sequential(walk: &BuiltWalk, input: &QuantumWord) -> Result<ArcStateVector, BuildError> {
    if walk.mode() != Mode::Sequential {
        return Err(BuildError::ModeMismatch {
            expected: Mode::Sequential,
            found: walk.mode(),
        });
    }
    walk.place(input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Stepper;
    use num_complex::Complex64;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn accept(walk: &BuiltWalk, s: &str) -> f64 {
        walk.run_word(&w(s)).unwrap().accept
    }

    #[test]
    fn lab_examples() {
        let walk = build_sequential(&LanguageId::Lab, 8).unwrap();
        assert!((accept(&walk, "abab") - 1.0).abs() < 1e-12);
        let walk = build_sequential(&LanguageId::Lab, 4).unwrap();
        assert!((accept(&walk, "bb") - 0.5).abs() < 1e-12);
        assert!((accept(&walk, "ba") - 0.5).abs() < 1e-12);
        assert!((accept(&walk, "aaab") - 0.75).abs() < 1e-12);
        assert!((accept(&walk, "abba") - 0.75).abs() < 1e-12);
        assert!((accept(&walk, "abab") - 1.0).abs() < 1e-12);
    }

    #[test]
    fn leq_examples() {
        for m in 1..=4 {
            let walk = build_sequential(&LanguageId::Leq, 2 * m).unwrap();
            let word = "a".repeat(m) + &"b".repeat(m);
            assert!((accept(&walk, &word) - 1.0).abs() < 1e-12, "m = {m}");
        }
        let walk = build_sequential(&LanguageId::Leq, 4).unwrap();
        assert!(accept(&walk, "abab") < 1.0 - 1e-9);
        assert!(matches!(build_sequential(&LanguageId::Leq, 3), Err(BuildError::NoTarget { .. })));
    }

    #[test]
    fn unsupported_and_empty() {
        let sw = LanguageId::specific(w("ab")).unwrap();
        assert!(matches!(build_sequential(&sw, 2), Err(BuildError::Unsupported { .. })));
        assert!(matches!(build_sequential(&LanguageId::Lab, 0), Err(BuildError::EmptyInput)));
        assert!(matches!(build_sequential_word(&Word::empty()), Err(BuildError::EmptyInput)));
    }

    #[test]
    fn rail_encoding_layout() {
        let walk = build_sequential(&LanguageId::Lab, 2).unwrap();
        let psi = walk.encode(&QuantumWord::classical(&w("ab")).unwrap()).unwrap();
        let g = walk.graph();
        let alpha = 1.0 / 2f64.sqrt();
        let r1 = walk.input_vertices()[0];
        let r2 = walk.input_vertices()[1];
        let block = |v| psi.amplitudes()[g.port_block(v)].iter().map(|z| z.re).collect::<Vec<_>>();
        assert_eq!(block(r1), vec![alpha, 0.0, 0.0, 0.0]);
        assert_eq!(block(r2), vec![0.0, alpha, 0.0, 0.0]);
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        let long = QuantumWord::classical(&w("aba")).unwrap();
        assert!(matches!(walk.encode(&long), Err(BuildError::Capacity { .. })));
    }

    fn merge_vertex(walk: &BuiltWalk) -> VertexId {
        walk.graph()
            .vertices()
            .find(|&v| *walk.coins().spec(v) == CoinSpec::HadamardMerge)
            .unwrap()
    }

    /// Steps until a unit amplitude on `slot` first touches the merge node.
    fn arrival(walk: &BuiltWalk, slot: PortRef) -> usize {
        let g = walk.graph();
        let merge = merge_vertex(walk);
        let mut psi = ArcStateVector::zeros(g);
        psi.set(g, slot, Complex64::new(1.0, 0.0)).unwrap();
        let mut stepper = Stepper::new(g, walk.coins());
        for t in 1..100 {
            stepper.step(&mut psi).unwrap();
            if psi.amplitudes()[g.port_block(merge)].iter().any(|z| z.norm() > 0.5) {
                return t;
            }
        }
        panic!("never arrived");
    }

    #[test]
    fn a_meets_the_b_delta_positions_later() {
        for (language, n, delta) in [(LanguageId::Lab, 6, 1), (LanguageId::Leq, 6, 3)] {
            let walk = build_sequential(&language, n).unwrap();
            for p in 0..n - delta {
                let a = arrival(&walk, walk.input_map()[p].a);
                let b = arrival(&walk, walk.input_map()[p + delta].b);
                assert_eq!(a, b, "{language} p = {p}");
                assert_eq!(a, p + delta + 2);
            }
        }
    }

    #[test]
    fn specific_word_acceptor() {
        let walk = build_sequential_word(&w("abab")).unwrap();
        assert!((accept(&walk, "abab") - 1.0).abs() < 1e-12);
        assert!((accept(&walk, "abaa") - 0.75).abs() < 1e-12);
        assert!(accept(&walk, "baba") < 1e-12);
        assert_eq!(walk.steps(), 5);
        assert_eq!(walk.processing_vertex_count(), 9);

        let single = build_sequential_word(&w("a")).unwrap();
        assert_eq!(single.processing_vertex_count(), 3);
        assert!((accept(&single, "a") - 1.0).abs() < 1e-12);
        assert!(accept(&single, "b") < 1e-12);
    }
}
