//! Star-funnel acceptors for spatially distributed input.
//!
//! Layout for a target word `t` of even length `n`:
//!
//! ```text
//!   input nodes (2n, degree 1)      hubs (degree 2n)     collectors      sinks
//!   pos j, symbol t_j   ─────────▶  H_A port j   ─┬─▶  C_A,k (swap)  ─▶  A port k
//!   pos j, other symbol ─────────▶  H_R port j   ─┴─▶  C_R,k (swap)  ─▶  R port k
//! ```
//!
//! Hub ports `0..n` face the input nodes; ports `n..2n` face the collectors.
//! Both hubs carry `Grover(2n)`. A hub whose `n` input ports are loaded
//! evenly sends everything to its collector ports, so the target word lands
//! entirely on `A` after step 3. With `k` mismatches only `n − k` input ports
//! of `H_A` are loaded and `A` receives `(n − k)²/n²`.

use super::walk::{InputSlots, Mode, WalkParts};
use super::{target_word, BuildError, BuiltWalk, LanguageId, QuantumWord, Symbol};
use crate::engine::{ArcStateVector, CoinSpec, CoinTable, GraphBuilder, PortRef, VertexId};

/// Steps after which the spatial acceptors are read out.
pub const SPATIAL_STEPS: usize = 3;

pub fn build_spatial(language: &LanguageId, n: usize) -> Result<BuiltWalk, BuildError> {
    if n == 0 {
        return Err(BuildError::EmptyInput);
    }
    let target = match target_word(language, n) {
        Some(t) if n.is_multiple_of(2) => t,
        _ => {
            return Err(BuildError::NoTarget {
                language: language.clone(),
                n,
            })
        }
    };

    let mut b = GraphBuilder::new();
    let mut coins = Vec::new();
    let mut input_map = Vec::with_capacity(n);
    let mut input_vertices = Vec::with_capacity(2 * n);
    let mut lanes = Vec::with_capacity(n);
    for _ in 0..n {
        let a = b.add_vertex(1);
        let bb = b.add_vertex(1);
        coins.extend([CoinSpec::Identity { d: 1 }, CoinSpec::Identity { d: 1 }]);
        input_map.push(InputSlots {
            a: PortRef::new(a, 0),
            b: PortRef::new(bb, 0),
        });
        input_vertices.extend([a, bb]);
        lanes.push([a, bb]);
    }

    let hub_a = b.add_vertex(2 * n);
    let hub_r = b.add_vertex(2 * n);
    coins.extend([CoinSpec::Grover { d: 2 * n }, CoinSpec::Grover { d: 2 * n }]);
    for (j, (&[a, bb], sym)) in lanes.iter().zip(target.symbols()).enumerate() {
        let (hit, miss) = match sym {
            Symbol::A => (a, bb),
            Symbol::B => (bb, a),
        };
        b.link(hit, 0, hub_a, j).link(miss, 0, hub_r, j);
    }

    let collect = |b: &mut GraphBuilder, coins: &mut Vec<CoinSpec>, hub: VertexId| -> Vec<VertexId> {
        (0..n)
            .map(|k| {
                let c = b.add_vertex(2);
                coins.push(CoinSpec::swap());
                b.link(hub, n + k, c, 0);
                c
            })
            .collect()
    };
    let collectors_a = collect(&mut b, &mut coins, hub_a);
    let collectors_r = collect(&mut b, &mut coins, hub_r);

    let sink_a = b.add_vertex(n);
    let sink_r = b.add_vertex(n);
    coins.extend([CoinSpec::Grover { d: n }, CoinSpec::Grover { d: n }]);
    for k in 0..n {
        b.link(collectors_a[k], 1, sink_a, k);
        b.link(collectors_r[k], 1, sink_r, k);
    }

    let graph = b.build()?;
    let coins = CoinTable::new(&graph, coins)?;
    BuiltWalk::from_parts(WalkParts {
        graph,
        coins,
        input_map,
        accept: vec![sink_a],
        reject: vec![sink_r],
        steps: SPATIAL_STEPS,
        mode: Mode::Spatial,
        language: language.clone(),
        input_vertices,
    })
}

fn require_spatial(walk: &BuiltWalk) -> Result<(), BuildError> {
    if walk.mode() != Mode::Spatial {
        return Err(BuildError::ModeMismatch {
            expected: Mode::Spatial,
            found: walk.mode(),
        });
    }
    Ok(())
}

/// Places `x_j` on position `j`'s a-node and `y_j` on its b-node. The input
/// must fill every position and satisfy `α = 1/√n`.
pub fn encode_spatial(walk: &BuiltWalk, input: &QuantumWord) -> Result<ArcStateVector, BuildError> {
    require_spatial(walk)?;
    if input.len() != walk.input_length() {
        return Err(BuildError::LengthMismatch {
            expected: walk.input_length(),
            found: input.len(),
        });
    }
    walk.place(input)
}

/// Like [`encode_spatial`] but fills only the first `input.len()` positions,
/// leaving the rest empty. `α = 1/√len` keeps the state normalised.
pub fn encode_spatial_prefix(walk: &BuiltWalk, input: &QuantumWord) -> Result<ArcStateVector, BuildError> {
    require_spatial(walk)?;
    walk.place(input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::Word;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn target_accepted_in_three_steps() {
        let walk = build_spatial(&LanguageId::Leq, 4).unwrap();
        let psi = walk.encode(&QuantumWord::classical(&w("aabb")).unwrap()).unwrap();
        let before = walk.evolve_steps(&psi, 2).unwrap();
        assert!(walk.accept_probability(&before).unwrap() < 1e-12);
        let out = walk.evolve(&psi).unwrap();
        assert!((walk.accept_probability(&out).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_mismatch_values() {
        let walk = build_spatial(&LanguageId::Leq, 4).unwrap();
        let o = walk.run_word(&w("abbb")).unwrap();
        assert!((o.accept - 9.0 / 16.0).abs() < 1e-12);
        assert!((o.reject - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn vertex_count_is_four_n_plus_four() {
        for n in [2, 4, 6, 8] {
            let walk = build_spatial(&LanguageId::Lab, n).unwrap();
            assert_eq!(walk.vertex_count(), 4 * n + 4);
            assert_eq!(walk.steps(), 3);
        }
    }

    #[test]
    fn encoding_layout() {
        let walk = build_spatial(&LanguageId::Leq, 4).unwrap();
        let psi = walk.encode(&QuantumWord::classical(&w("aabb")).unwrap()).unwrap();
        let g = walk.graph();
        for (j, s) in walk.input_map().iter().enumerate() {
            let (a, b) = (psi.get(g, s.a).unwrap(), psi.get(g, s.b).unwrap());
            let (want_a, want_b) = if j < 2 { (0.5, 0.0) } else { (0.0, 0.5) };
            assert!((a.re - want_a).abs() < 1e-15 && (b.re - want_b).abs() < 1e-15);
        }
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn builder_errors() {
        assert!(matches!(build_spatial(&LanguageId::Leq, 3), Err(BuildError::NoTarget { .. })));
        assert!(matches!(build_spatial(&LanguageId::Leq, 0), Err(BuildError::EmptyInput)));
        let sw = LanguageId::specific(w("aba")).unwrap();
        assert!(matches!(build_spatial(&sw, 3), Err(BuildError::NoTarget { .. })));
        let walk = build_spatial(&LanguageId::Leq, 4).unwrap();
        assert!(matches!(
            walk.run_word(&w("ab")),
            Err(BuildError::LengthMismatch { expected: 4, found: 2 })
        ));
    }

    #[test]
    fn specific_word_spatial() {
        let walk = build_spatial(&LanguageId::specific(w("abba")).unwrap(), 4).unwrap();
        assert!((walk.run_word(&w("abba")).unwrap().accept - 1.0).abs() < 1e-12);
        assert!((walk.run_word(&w("aaaa")).unwrap().accept - 0.25).abs() < 1e-12);
        assert!(walk.run_word(&w("baab")).unwrap().accept < 1e-12);
    }
}
