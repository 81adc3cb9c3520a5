use stokesflag::poly::DynkinType;
use stokesflag::{run_pipeline, AnalysisReport, Error};

fn presets() -> Vec<(DynkinType, bool)> {
    let mut out: Vec<(DynkinType, bool)> = (2..=9).map(|n| (DynkinType::a(n), false)).collect();
    out.extend([4, 5, 6].map(|n| (DynkinType::d(n), false)));
    out.extend([6, 7, 8].map(|n| (DynkinType::e(n), false)));
    out.extend([(DynkinType::d(4), true), (DynkinType::e(8), true)]);
    out
}

#[test]
fn report_invariants_hold_for_presets() {
    for (t, swap) in presets() {
        let r = run_pipeline(&t.to_string(), 0, 4096, swap).unwrap();
        assert!(r.invariants_hold(), "{t} swap={swap}");
        assert_eq!(r.preset, Some(t));
        assert_eq!(r.growth.points.len(), r.word.rank, "{t} swap={swap}");
    }
}

#[test]
fn homology_rank_is_the_milnor_number_for_exact_presets() {
    for t in (1..=9)
        .map(DynkinType::a)
        .chain([DynkinType::d(4), DynkinType::e(6), DynkinType::e(7), DynkinType::e(8)])
    {
        let r = run_pipeline(&t.to_string(), 0, 4096, false).unwrap();
        assert_eq!(r.homology_rank, t.rank() as u64, "{t}");
    }
}

#[test]
fn reports_are_byte_identical_and_round_trip() {
    for input in ["E7", "D4", "p^3 + x^4 + x p + 1"] {
        let a = serde_json::to_string(&run_pipeline(input, 3, 4096, false).unwrap()).unwrap();
        let b = serde_json::to_string(&run_pipeline(input, 3, 4096, false).unwrap()).unwrap();
        assert_eq!(a, b, "{input}");
        let back: AnalysisReport = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string(&back).unwrap(), a);
    }
}

#[test]
fn dual_word_swaps_generators() {
    let r = run_pipeline("D4", 0, 4096, false).unwrap();
    assert_eq!(r.word.dual, "(s1 s2^2)^4");
}

#[test]
fn errors_carry_their_module() {
    let e = run_pipeline("x^2 p^", 0, 4096, false).unwrap_err();
    assert!(matches!(e, Error::Poly(_)));
    assert!(e.to_string().starts_with("poly: "), "{e}");
    let e = run_pipeline("x + p", 0, 4096, false).unwrap_err();
    assert!(matches!(e, Error::Lattice(_)), "{e}");
}
