use mwforge::filterbank::{Signal, SubbandPair};
use mwforge::io;
use mwforge::linalg::CMat;
use mwforge::masks::{MaskPair, MatrixMask};
use mwforge::qmf::PolyphaseMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        -1e3..1e3f64,
        Just(0.0),
        Just(-0.0),
    ]
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((finite(), finite()), rows * cols)
        .prop_map(move |v| CMat::from_iterator(rows, cols, v.into_iter().map(|(a, b)| Complex64::new(a, b))))
}

fn mask_pair() -> impl Strategy<Value = MaskPair> {
    (1usize..=3, 0usize..=5).prop_flat_map(|(m, n)| {
        (
            prop::collection::vec(matrix(m, m), n + 1),
            prop::collection::vec(matrix(m, m), n + 1),
        )
            .prop_map(move |(p, q)| {
                MaskPair::new(MatrixMask::new(m, p).unwrap(), MatrixMask::new(m, q).unwrap()).unwrap()
            })
    })
}

fn same_bits(a: &CMat, b: &CMat) -> bool {
    a.shape() == b.shape()
        && a.iter()
            .zip(b.iter())
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits())
}

proptest! {
    #[test]
    fn mask_json_bit_exact(pair in mask_pair()) {
        let back = io::parse_mask_json(&io::mask_to_json(&pair)).unwrap();
        for (a, b) in pair.p().coeffs().iter().zip(back.p().coeffs()).chain(pair.q().coeffs().iter().zip(back.q().coeffs())) {
            prop_assert!(same_bits(a, b));
        }
    }

    #[test]
    fn polyphase_json_bit_exact(m in 1usize..=2, coeffs in prop::collection::vec(matrix(4, 4), 1..4)) {
        let coeffs: Vec<CMat> = coeffs.into_iter().map(|c| c.view((0, 0), (2 * m, 2 * m)).into_owned()).collect();
        let f = PolyphaseMatrix::new(m, coeffs).unwrap();
        let back = io::parse_polyphase_json(&io::polyphase_to_json(&f)).unwrap();
        for (a, b) in f.coeffs().iter().zip(back.coeffs()) {
            prop_assert!(same_bits(a, b));
        }
    }

    #[test]
    fn signal_csv_round_trip(half in 1usize..16, m in 1usize..=3, seed in any::<u64>()) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let c = Signal::random(&mut rng, 2 * half, m).unwrap();
        let back = io::parse_signal_csv(&io::signal_to_csv(&c)).unwrap();
        prop_assert!(back.max_abs_diff(&c) <= 1e-15);
        prop_assert!(same_bits(back.samples(), c.samples()));
    }

    #[test]
    fn subbands_csv_round_trip(rows in 1usize..8, m in 1usize..=2, low in matrix(8, 2), high in matrix(8, 2)) {
        let s = SubbandPair::new(
            low.view((0, 0), (rows, m)).into_owned(),
            high.view((0, 0), (rows, m)).into_owned(),
        ).unwrap();
        let back = io::parse_subbands_csv(&io::subbands_to_csv(&s)).unwrap();
        prop_assert!(same_bits(back.low(), s.low()) && same_bits(back.high(), s.high()));
    }

    #[test]
    fn parsers_never_panic(text in "\\PC{0,200}") {
        let _ = io::parse_mask_json(&text);
        let _ = io::parse_polyphase_json(&text);
        let _ = io::parse_realization_json(&text);
        let _ = io::parse_signal_csv(&text);
        let _ = io::parse_subbands_csv(&text);
    }
}

#[test]
fn realization_json_round_trip() {
    for fam in mwforge::synthesis::Family::builtin() {
        let f = mwforge::masks::polyphase_assemble(&fam.build().unwrap());
        let r = mwforge::realization::realize(&f).unwrap();
        assert_eq!(io::parse_realization_json(&io::realization_to_json(&r)).unwrap(), r);
    }
}

#[test]
fn rejects_truncated_documents() {
    let text = io::mask_to_json(&mwforge::synthesis::d4().unwrap());
    for cut in (0..text.len()).step_by(7) {
        assert!(io::parse_mask_json(&text[..cut]).is_err());
    }
}

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read_to_string(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    out
}

#[test]
fn fuzz_seeds_are_meaningful() {
    for (name, text) in corpus("parse_mask_json") {
        assert_eq!(io::parse_mask_json(&text).is_ok(), name != "truncated.json", "{name}");
    }
    for (name, text) in corpus("parse_polyphase_json") {
        let f = io::parse_polyphase_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(mwforge::qmf::qmf_residual(&f) < 1e-12, "{name}");
    }
    for (name, text) in corpus("parse_realization_json") {
        assert!(io::parse_realization_json(&text).is_ok(), "{name}");
    }
    for (name, text) in corpus("parse_signal_csv") {
        assert_eq!(io::parse_signal_csv(&text).is_ok(), name != "edge.csv", "{name}");
    }
    for (name, text) in corpus("parse_subbands_csv") {
        assert_eq!(io::parse_subbands_csv(&text).is_ok(), name != "ragged.csv", "{name}");
    }
    let families: Vec<bool> = corpus("parse_family")
        .iter()
        .map(|(_, t)| t.parse::<mwforge::synthesis::Family>().is_ok())
        .collect();
    assert!(families.iter().filter(|ok| **ok).count() >= 9);
}
