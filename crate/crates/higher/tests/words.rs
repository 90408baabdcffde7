use mltt_higher::{compose_words, count_reduced_words, invert_word, parse_globular, reduce_word, reduced_words, GlobularSet, Letter, Word};
use proptest::prelude::*;

fn chain() -> GlobularSet {
    parse_globular("cell 0 a\ncell 0 b\ncell 0 c\ncell 0 d\ncell 1 u src a tgt b\ncell 1 v src c tgt b\ncell 1 w src b tgt d\n").unwrap()
}

fn fw(e: usize) -> Letter {
    Letter { edge: e, inverse: false }
}

#[test]
fn a_letter_and_its_inverse_cancel() {
    let g = parse_globular("cell 0 a\ncell 1 e src a tgt a").unwrap();
    let e = Word::letter(&g, fw(0));
    assert_eq!(compose_words(&invert_word(&e), &e).unwrap(), Word::empty(0));
}

#[test]
fn inverting_reverses_and_flips() {
    let g = chain();
    let u = Word::letter(&g, fw(0));
    let w = Word::letter(&g, fw(2));
    let uw = compose_words(&w, &u).unwrap();
    assert_eq!(uw.display(&g), "u.w");
    assert_eq!(invert_word(&uw).display(&g), "w^-1.u^-1");
    assert_eq!(invert_word(&uw), compose_words(&invert_word(&u), &invert_word(&w)).unwrap());
}

#[test]
fn reduction_cancels_inner_pairs() {
    let g = chain();
    let v = fw(1);
    let w = Word::new(&g, 0, vec![fw(0), v.inv(), v, fw(2)]).unwrap();
    assert_eq!(reduce_word(&w).display(&g), "u.w");
    assert!(Word::new(&g, 0, vec![fw(2)]).is_err());
    assert!(compose_words(&Word::letter(&g, fw(0)), &Word::letter(&g, fw(2))).is_err());
}

#[test]
fn reduced_word_counts_on_a_loop_and_a_point() {
    // one loop: words e^k for |k| <= L
    let g = parse_globular("cell 0 a\ncell 1 e src a tgt a").unwrap();
    for l in 0..6 {
        assert_eq!(reduced_words(&g, l).len(), 2 * l + 1);
        assert_eq!(count_reduced_words(&g, l), (2 * l + 1) as u128);
    }
    // two loops: the free group on two generators, 2·3^k - 1 words up to k
    let g2 = parse_globular("cell 0 a\ncell 1 e src a tgt a\ncell 1 f src a tgt a").unwrap();
    for l in 0..5u32 {
        assert_eq!(count_reduced_words(&g2, l as usize), 2 * 3u128.pow(l) - 1);
    }
    assert_eq!(reduced_words(&GlobularSet::new(), 3).len(), 0);
}

fn word_on(g: &GlobularSet) -> impl Strategy<Value = Word> + '_ {
    (0..g.count(0), proptest::collection::vec((0..g.count(1), any::<bool>()), 0..8)).prop_map(move |(start, steps)| {
        // follow the letters that fit, skipping the rest
        let mut letters = Vec::new();
        let mut at = start;
        for (e, inverse) in steps {
            let l = Letter { edge: e, inverse };
            if l.src(g) == at {
                at = l.tgt(g);
                letters.push(l);
            }
        }
        Word::new(g, start, letters).unwrap()
    })
}

fn theta() -> &'static GlobularSet {
    use std::sync::OnceLock;
    static G: OnceLock<GlobularSet> = OnceLock::new();
    G.get_or_init(|| parse_globular("cell 0 a\ncell 0 b\ncell 1 e src a tgt b\ncell 1 f src a tgt b\ncell 1 l src a tgt a").unwrap())
}

proptest! {
    #[test]
    fn reduction_is_idempotent_and_reduced(w in word_on(theta())) {
        let r = reduce_word(&w);
        prop_assert!(r.is_reduced());
        prop_assert_eq!(reduce_word(&r), r.clone());
        prop_assert_eq!((r.src, r.tgt), (w.src, w.tgt));
    }

    #[test]
    fn words_form_a_groupoid(a in word_on(theta()), b in word_on(theta()), c in word_on(theta())) {
        let (a, b, c) = (reduce_word(&a), reduce_word(&b), reduce_word(&c));
        prop_assert_eq!(compose_words(&invert_word(&a), &a).unwrap(), Word::empty(a.src));
        prop_assert_eq!(compose_words(&a, &Word::empty(a.src)).unwrap(), a.clone());
        prop_assert_eq!(invert_word(&invert_word(&a)), a.clone());
        if a.tgt == b.src && b.tgt == c.src {
            let l = compose_words(&c, &compose_words(&b, &a).unwrap()).unwrap();
            let r = compose_words(&compose_words(&c, &b).unwrap(), &a).unwrap();
            prop_assert_eq!(l, r);
        }
    }

    #[test]
    fn listing_agrees_with_counting(l in 0usize..5) {
        let g = theta();
        let ws = reduced_words(g, l);
        prop_assert_eq!(ws.len() as u128, count_reduced_words(g, l));
        prop_assert!(ws.iter().all(|w| w.is_reduced() && w.len() <= l));
    }
}
