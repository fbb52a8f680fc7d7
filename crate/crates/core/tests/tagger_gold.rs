mod common;

use registra::tagger::parse_tagged;

#[test]
fn gold_sample_shape() {
    let g = parse_tagged(include_str!("../data/pos_sample.tsv"), "pos_sample").unwrap();
    assert_eq!(g.sentences().len(), 200);
}

#[test]
fn accuracy_on_hand_tagged_sample() {
    let (right, total, confusions) = common::gold_sample_accuracy();
    let accuracy = right as f64 / total as f64;
    for ((gold, got), words) in &confusions {
        eprintln!("{gold} -> {got}: {}", words.join(" "));
    }
    eprintln!("accuracy {right}/{total} = {accuracy:.4}");
    assert!(accuracy >= 0.90, "accuracy {accuracy}");
}

#[test]
fn feature_sentences_precision_and_recall() {
    let (n, scores, mismatches) = common::feature_sentence_scores();
    assert_eq!(n, 30);
    for m in &mismatches {
        eprintln!("{m}");
    }
    for s in &scores {
        assert!(s.tp > 0, "{} never exercised", s.code);
        assert_eq!((s.fp, s.fneg), (0, 0), "{}: precision/recall below 1", s.code);
    }
}
