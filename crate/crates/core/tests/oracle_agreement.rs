//! Reversing against brute-force closure on finite windows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cubecheck::oracle::{cancellation_scan, equivalence_class, Oracle};
use cubecheck::reversing::{ReversalOutcome, Reverser};
use cubecheck::{catalog_load, Presentation, Word};

const PAIRS: usize = 200;
const MAX_LEN: usize = 4;

fn random_word(rng: &mut ChaCha8Rng, p: &Presentation, len: usize) -> Word {
    let gens = p.alphabet().unwrap();
    Word::positive((0..len).map(|_| gens[rng.gen_range(0..gens.len())]))
}

/// Half the pairs are related by a random walk through relations, half are
/// independent words of the same length.
fn pairs(p: &Presentation, seed: u64) -> Vec<(Word, Word)> {
    let oracle = Oracle::new(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..PAIRS)
        .map(|k| {
            let len = rng.gen_range(1..=MAX_LEN);
            let u = random_word(&mut rng, p, len);
            let v = if k % 2 == 0 {
                let mut v = u.clone();
                for _ in 0..rng.gen_range(1..6) {
                    if let Some(next) = oracle.random_neighbour(&v, &mut |n| rng.gen_range(0..n)) {
                        v = next;
                    }
                }
                v
            } else {
                random_word(&mut rng, p, len)
            };
            (u, v)
        })
        .collect()
}

struct Agreement {
    /// Pairs whose reversal finished, and how many of those were related.
    decided: usize,
    related_decided: usize,
    disagreements: Vec<String>,
}

fn agreement(reversal_pres: &Presentation, oracle_pres: &Presentation, seed: u64) -> Agreement {
    let rev = Reverser::new(reversal_pres);
    let oracle = Oracle::new(oracle_pres).unwrap();
    let mut out = Agreement {
        decided: 0,
        related_decided: 0,
        disagreements: Vec::new(),
    };
    for (k, (u, v)) in pairs(oracle_pres, seed).into_iter().enumerate() {
        let trace = rev.quotient(&u, &v, 10_000).unwrap();
        let by_reversal = match trace.outcome {
            ReversalOutcome::Empty => true,
            ReversalOutcome::Terminal { .. } => false,
            // no common multiple (full) or a missing out-of-window instance
            _ => continue,
        };
        out.decided += 1;
        if k % 2 == 0 {
            out.related_decided += 1;
        }
        if by_reversal != oracle.equal(&u, &v).unwrap() {
            out.disagreements.push(format!("{u} / {v}: reversal says {by_reversal}"));
        }
    }
    out
}

#[test]
fn windowed_reversal_agrees_with_the_oracle() {
    let win = catalog_load("d4:new").unwrap().instantiate_window(2);
    let a = agreement(&win, &win, 0x5eed);
    assert!(a.disagreements.is_empty(), "{:#?}", a.disagreements);
    assert_eq!(a.related_decided, PAIRS / 2);
    assert!(a.decided > PAIRS / 2);
}

#[test]
fn full_reversal_agrees_with_the_windowed_oracle() {
    let full = catalog_load("d4:new").unwrap();
    let win = full.instantiate_window(2);
    let a = agreement(&full, &win, 0xface);
    assert!(a.disagreements.is_empty(), "{:#?}", a.disagreements);
    assert_eq!(a.related_decided, PAIRS / 2);
    assert!(a.decided > PAIRS / 2);
}

#[test]
fn related_pairs_are_really_related() {
    let win = catalog_load("d4:new").unwrap().instantiate_window(2);
    let oracle = Oracle::new(&win).unwrap();
    for (u, v) in pairs(&win, 7).into_iter().step_by(2) {
        assert!(oracle.equal(&u, &v).unwrap(), "{u} / {v}");
    }
}

#[test]
fn classes_grow_with_the_window() {
    let d4 = catalog_load("d4:new").unwrap();
    let (small, large) = (d4.instantiate_window(1), d4.instantiate_window(2));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let len = rng.gen_range(1..=4);
        let w = random_word(&mut rng, &small, len);
        let a = equivalence_class(&w, &small).unwrap();
        let b = equivalence_class(&w, &large).unwrap();
        assert!(a.members.is_subset(&b.members), "{w}");
    }
}

#[test]
fn cancellation_scans_are_clean() {
    let d4 = catalog_load("d4:new").unwrap().instantiate_window(2);
    let report = cancellation_scan(&d4, 3).unwrap();
    assert!(report.counterexamples.is_empty(), "{:?}", report.counterexamples);
    assert_eq!(report.words_scanned, (0..=4).map(|k| 9usize.pow(k)).sum::<usize>());
    for name in ["affine-a:classical:3", "affine-a:classical:4"] {
        let p = catalog_load(name).unwrap();
        assert!(cancellation_scan(&p, 3).unwrap().counterexamples.is_empty(), "{name}");
    }
}
