use gyb_braid::braidrep::{eval_word, operator_order, rho_sigma, BraidWord, RepContext};
use gyb_braid::gates::{exp_involution, PauliWord};
use gyb_braid::image_group::{
    braid_gen_symbolic, pair_action, pairs, word_to_symbolic, ExponentVector, ImageElement,
    ImageEvaluator, Permutation,
};
use gyb_braid::qlinalg::{
    apply_local, apply_local_vec, canonical_key, embed_local, kron, matmul, max_entry_distance,
    vec_distance, Operator, C64,
};
use proptest::prelude::*;
use std::f64::consts::PI;

fn random_operator(qubits: usize, seed: &[f64]) -> Operator {
    let dim = 1 << qubits;
    let data = (0..dim * dim)
        .map(|i| C64::new(seed[(2 * i) % seed.len()], seed[(2 * i + 1) % seed.len()]))
        .collect();
    Operator::from_row_major(data).unwrap()
}

fn word_strategy(n: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let gens = (n - 1) as i32;
    prop::collection::vec((1..=gens, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(j, s)| if s { j } else { -j }).collect())
}

/// Rewrites a braid word by one relation chosen by `choice` at `pos`:
/// insert `σσ⁻¹`, swap far-commuting neighbours, or apply `σiσi+1σi → σi+1σiσi+1`.
fn rewrite(letters: &[i32], n: usize, choice: u8, pos: usize, gen: i32) -> Vec<i32> {
    let mut out = letters.to_vec();
    let at = if out.is_empty() { 0 } else { pos % (out.len() + 1) };
    match choice % 3 {
        0 => {
            let g = 1 + gen.rem_euclid(n as i32 - 1);
            out.splice(at..at, [g, -g]);
        }
        1 => {
            if out.len() >= 2 {
                let i = pos % (out.len() - 1);
                if (out[i].abs() - out[i + 1].abs()).abs() >= 2 {
                    out.swap(i, i + 1);
                }
            }
        }
        _ => {
            for i in 0..out.len().saturating_sub(2) {
                let (a, b, c) = (out[i], out[i + 1], out[i + 2]);
                if a > 0 && c == a && (b == a + 1 || b == a - 1) {
                    out[i] = b;
                    out[i + 1] = a;
                    out[i + 2] = b;
                    break;
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn apply_local_agrees_with_embedding(
        total in 3usize..=7,
        k in 1usize..=3,
        start_seed in 0usize..10,
        coeffs in prop::collection::vec(-1.0f64..1.0, 16..64),
        state in prop::collection::vec(-1.0f64..1.0, 2..256),
    ) {
        let start = 1 + start_seed % (total - k + 1);
        let op = random_operator(k, &coeffs);
        let dim = 1 << total;
        let psi: Vec<C64> = (0..dim).map(|i| C64::new(state[i % state.len()], state[(i + 1) % state.len()])).collect();
        let full = embed_local(&op, start, total).unwrap();
        let expected = full.apply(&psi).unwrap();
        let got = apply_local_vec(&op, start, &psi).unwrap();
        prop_assert!(vec_distance(&expected, &got) < 1e-12);
        let mat = random_operator(total, &state);
        let got_m = apply_local(&op, start, &mat).unwrap();
        prop_assert!(max_entry_distance(&matmul(&full, &mat).unwrap(), &got_m).unwrap() < 1e-12);
    }

    #[test]
    fn kron_is_associative_and_embedding_is_exact(
        a in prop::collection::vec(-2.0f64..2.0, 8),
        b in prop::collection::vec(-2.0f64..2.0, 8),
        c in prop::collection::vec(-2.0f64..2.0, 8),
    ) {
        let (a, b, c) = (random_operator(1, &a), random_operator(1, &b), random_operator(2, &c));
        prop_assert!(max_entry_distance(&kron(&kron(&a, &b), &c), &kron(&a, &kron(&b, &c))).unwrap() < 1e-14);
        let padded = kron(&kron(&Operator::identity(2), &c), &Operator::identity(2));
        prop_assert_eq!(embed_local(&c, 2, 4).unwrap(), padded);
    }

    #[test]
    fn pauli_words_multiply_like_matrices(
        bits_a in prop::collection::vec((any::<bool>(), any::<bool>()), 3),
        bits_b in prop::collection::vec((any::<bool>(), any::<bool>()), 3),
        pa in 0u8..4, pb in 0u8..4,
    ) {
        let build = |bits: &[(bool, bool)], phase: u8| {
            bits.iter().enumerate().fold(PauliWord::identity(3).with_phase(phase), |w, (q, &(x, z))| {
                let mut w = w;
                if x { w = w.mul(&PauliWord::x(q + 1, 3).unwrap()).unwrap(); }
                if z { w = w.mul(&PauliWord::z(q + 1, 3).unwrap()).unwrap(); }
                w
            })
        };
        let (p, q) = (build(&bits_a, pa), build(&bits_b, pb));
        let prod = p.mul(&q).unwrap();
        let expected = matmul(&p.to_operator(), &q.to_operator()).unwrap();
        prop_assert!(max_entry_distance(&prod.to_operator(), &expected).unwrap() < 1e-15);
        let sq = p.square();
        prop_assert!(sq.is_identity_up_to_phase() && sq.phase() % 2 == 0);
    }

    #[test]
    fn eval_word_is_a_homomorphism(
        (n, m) in (2usize..=5, prop::sample::select(vec![3u32, 5, 7])),
        seed_u in prop::collection::vec((1i32..5, any::<bool>()), 0..20),
        seed_v in prop::collection::vec((1i32..5, any::<bool>()), 0..20),
    ) {
        let ctx = RepContext::new(n, m).unwrap();
        let to_word = |s: &[(i32, bool)]| {
            let letters = s.iter().map(|&(j, pos)| {
                let j = 1 + (j - 1) % (n as i32 - 1);
                if pos { j } else { -j }
            }).collect();
            BraidWord::new(n, letters).unwrap()
        };
        let (u, v) = (to_word(&seed_u), to_word(&seed_v));
        let uv = eval_word(&u.concat(&v).unwrap(), &ctx).unwrap();
        let prod = matmul(&eval_word(&u, &ctx).unwrap(), &eval_word(&v, &ctx).unwrap()).unwrap();
        prop_assert!(max_entry_distance(&uv, &prod).unwrap() < 1e-9);
        prop_assert!(uv.is_unitary(1e-10));
        let su = word_to_symbolic(&u, &ctx).unwrap();
        let sv = word_to_symbolic(&v, &ctx).unwrap();
        prop_assert_eq!(word_to_symbolic(&u.concat(&v).unwrap(), &ctx).unwrap(), su.mul(&sv).unwrap());
    }

    #[test]
    fn braid_rewrites_preserve_both_evaluations(
        letters in word_strategy(5, 16),
        steps in prop::collection::vec((0u8..3, 0usize..64, -8i32..8), 1..8),
        m in prop::sample::select(vec![3u32, 5]),
    ) {
        let n = 5;
        let ctx = RepContext::new(n, m).unwrap();
        let mut rewritten = letters.clone();
        for (choice, pos, g) in steps {
            rewritten = rewrite(&rewritten, n, choice, pos, g);
        }
        let w0 = BraidWord::new(n, letters).unwrap();
        let w1 = BraidWord::new(n, rewritten).unwrap();
        let d = max_entry_distance(&eval_word(&w0, &ctx).unwrap(), &eval_word(&w1, &ctx).unwrap()).unwrap();
        prop_assert!(d < 1e-9, "distance {}", d);
        prop_assert_eq!(word_to_symbolic(&w0, &ctx).unwrap(), word_to_symbolic(&w1, &ctx).unwrap());
    }

    #[test]
    fn symbolic_evaluation_matches_matrix_evaluation(
        letters in word_strategy(4, 30),
        m in prop::sample::select(vec![3u32, 5, 7]),
    ) {
        let ctx = RepContext::new(4, m).unwrap();
        let eval = ImageEvaluator::new(&ctx).unwrap();
        let w = BraidWord::new(4, letters).unwrap();
        let sym = eval.to_matrix(&word_to_symbolic(&w, &ctx).unwrap()).unwrap();
        prop_assert!(max_entry_distance(&sym, &eval_word(&w, &ctx).unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn pair_action_is_a_group_action(
        a in 0u64..120, b in 0u64..120,
        coords in prop::collection::vec(0u32..7, 10),
    ) {
        let (pi, sigma) = (Permutation::unrank(5, a), Permutation::unrank(5, b));
        let v = ExponentVector::from_coords(5, 7, coords).unwrap();
        let lhs = pair_action(&pi.compose(&sigma).unwrap(), &v).unwrap();
        let rhs = pair_action(&pi, &pair_action(&sigma, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn export_text_round_trips_exactly(
        coeffs in prop::collection::vec(-1e3f64..1e3, 2..40),
        scale in -300i32..300,
    ) {
        let op = random_operator(2, &coeffs).scale(C64::new(10f64.powi(scale), 0.0));
        prop_assert_eq!(Operator::from_export_text(&op.to_export_text()).unwrap(), op);
    }

    #[test]
    fn image_elements_associate(
        w1 in word_strategy(4, 10), w2 in word_strategy(4, 10), w3 in word_strategy(4, 10),
    ) {
        let ctx = RepContext::new(4, 5).unwrap();
        let g = |l: Vec<i32>| word_to_symbolic(&BraidWord::new(4, l).unwrap(), &ctx).unwrap();
        let (a, b, c) = (g(w1), g(w2), g(w3));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
    }
}

#[test]
fn generator_power_oracle() {
    // direct repeated multiplication, independent of matpow
    let ctx = RepContext::new(2, 5).unwrap();
    let g = rho_sigma(1, &ctx).unwrap();
    let mut acc = Operator::identity(8);
    for k in 1..=10 {
        acc = matmul(&acc, &g).unwrap();
        let dist = max_entry_distance(&acc, &Operator::identity(8)).unwrap();
        assert_eq!(dist < 1e-9, k == 10, "k={k}");
    }
    assert_eq!(operator_order(&g, 100, 1e-9), Some(10));

    let e = exp_involution(&PauliWord::x(2, 3).unwrap(), 2.0 * PI / 3.0).unwrap();
    let cube = matmul(&matmul(&e, &e).unwrap(), &e).unwrap();
    assert!(max_entry_distance(&cube, &Operator::identity(8)).unwrap() < 1e-12);
}

/// Distinct normal forms give distinct matrices over the whole group.
fn assert_faithful(n: usize, m: u32) {
    let ctx = RepContext::new(n, m).unwrap();
    let eval = ImageEvaluator::new(&ctx).unwrap();
    let k = pairs(n).len() as u32;
    let mut keys = std::collections::HashSet::new();
    let mut count = 0;
    for r in 0..(2..=n as u64).product::<u64>() {
        let perm = Permutation::unrank(n, r);
        for code in 0..(m as u64).pow(k) {
            let coords = (0..k).map(|p| ((code / (m as u64).pow(p)) % m as u64) as u32).collect();
            let g = ImageElement::new(ExponentVector::from_coords(n, m, coords).unwrap(), perm.clone()).unwrap();
            keys.insert(canonical_key(&eval.to_matrix(&g).unwrap(), 1e-6).unwrap());
            count += 1;
        }
    }
    assert_eq!(keys.len(), count, "(n,m)=({n},{m})");
}

#[test]
fn faithful_at_small_scale() {
    assert_faithful(2, 3);
    assert_faithful(2, 5);
}

#[test]
fn canonical_keys_absorb_small_noise() {
    // elements of the (3,3) image keep their key under perturbations far below the grid
    let ctx = RepContext::new(3, 3).unwrap();
    let eval = ImageEvaluator::new(&ctx).unwrap();
    for letters in [vec![1], vec![1, 2, -1], vec![2, 2, 1, -2, 1, 1]] {
        let g = word_to_symbolic(&BraidWord::new(3, letters).unwrap(), &ctx).unwrap();
        let a = eval.to_matrix(&g).unwrap();
        let noise = Operator::identity(16).scale(C64::new(3e-9, -2e-9));
        let b = a.add(&noise).unwrap();
        assert_eq!(canonical_key(&a, 1e-6).unwrap(), canonical_key(&b, 1e-6).unwrap());
    }
}

#[test]
fn inverse_letters_match_inverse_elements() {
    let ctx = RepContext::new(4, 7).unwrap();
    for i in 1..4 {
        let g = braid_gen_symbolic(i, &ctx).unwrap();
        assert_eq!(braid_gen_symbolic(-i, &ctx).unwrap(), g.inv());
    }
}
