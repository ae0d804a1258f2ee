//! Reference values were produced with scikit-learn (`adjusted_rand_score`,
//! `normalized_mutual_info_score` with geometric averaging,
//! `adjusted_mutual_info_score` with arithmetic averaging,
//! `fowlkes_mallows_score`) and scipy's `linear_sum_assignment` for accuracy.

use proptest::prelude::*;
use sktdpc::metrics::{ami, contingency, evaluate, nmi, Index};

struct Case {
    truth: &'static [usize],
    pred: &'static [usize],
    acc: f64,
    ari: f64,
    nmi: f64,
    ami: f64,
    fmi: f64,
}

const CASES: &[Case] = &[
    Case {
        truth: &[0, 1, 0, 0, 0, 0, 1, 1, 1, 1],
        pred: &[0, 0, 2, 0, 0, 0, 2, 1, 0, 0],
        acc: 0.5,
        ari: -0.06930693069306931,
        nmi: 0.10259090462369616,
        ami: -0.1192427022157412,
        fmi: 0.4290581651605166,
    },
    Case {
        truth: &[
            1, 1, 2, 1, 2, 0, 1, 1, 2, 0, 0, 1, 0, 2, 1, 2, 1, 1, 1, 0, 0, 0, 2, 1, 2,
        ],
        pred: &[
            0, 2, 2, 2, 0, 1, 0, 2, 2, 1, 0, 0, 0, 0, 0, 2, 1, 2, 0, 1, 2, 1, 0, 1, 2,
        ],
        acc: 0.52,
        ari: 0.029941949282004277,
        nmi: 0.15070925916950773,
        ami: 0.06886404378333091,
        fmi: 0.3419735023194923,
    },
    Case {
        truth: &[
            1, 1, 1, 1, 1, 3, 0, 3, 0, 0, 1, 0, 2, 0, 0, 3, 3, 2, 3, 1, 0, 3, 0, 1, 1, 2, 0, 0, 0,
            0, 0, 2, 2, 1, 2, 1, 3, 1, 2, 1,
        ],
        pred: &[
            1, 1, 1, 0, 0, 0, 1, 0, 1, 1, 0, 1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0,
            0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1,
        ],
        acc: 0.375,
        ari: -0.017966452023213293,
        nmi: 0.024031701693969662,
        ami: -0.01817087775796045,
        fmi: 0.340902076246575,
    },
    Case {
        truth: &[
            2, 0, 0, 3, 1, 2, 3, 2, 3, 0, 3, 4, 2, 1, 1, 2, 3, 2, 0, 1, 0, 2, 1, 0, 3, 3, 1, 0, 2,
            1, 1, 1, 0, 0, 4, 2, 2, 0, 3, 3, 4, 1, 0, 4, 4, 2, 4, 0, 2, 3, 1, 1, 2, 1, 2, 1, 2, 1,
            2, 3,
        ],
        pred: &[
            2, 3, 1, 0, 4, 5, 3, 1, 2, 2, 2, 0, 5, 2, 0, 4, 0, 1, 2, 5, 4, 3, 2, 3, 5, 5, 4, 3, 1,
            0, 2, 3, 1, 3, 4, 4, 2, 0, 5, 1, 3, 5, 5, 3, 2, 1, 4, 2, 1, 2, 0, 0, 2, 3, 2, 0, 1, 0,
            0, 1,
        ],
        acc: 0.35,
        ari: 0.02217245240761478,
        nmi: 0.1378031310770288,
        ami: 0.019869154603699868,
        fmi: 0.19952804303464164,
    },
    Case {
        truth: &[
            1, 1, 0, 1, 2, 2, 2, 0, 2, 0, 0, 0, 2, 0, 1, 0, 2, 0, 1, 2, 1, 2, 2, 0, 1, 2, 2, 0, 2,
            1, 0, 0, 0, 1, 2, 0, 0, 1, 2, 2, 2, 2, 0, 2, 2, 1, 2, 2, 2, 2, 2, 1, 0, 2, 2, 0, 0, 0,
            1, 2, 2, 0, 1, 0, 0, 1, 1, 2, 0, 1, 1, 1, 0, 2, 0, 2, 2, 0, 1, 2, 0, 1, 0, 2, 0, 1, 1,
            0, 0, 0, 2, 2, 0, 0, 1, 2, 2, 0, 2, 0,
        ],
        pred: &[
            3, 4, 0, 3, 1, 1, 5, 0, 5, 1, 5, 6, 6, 2, 6, 5, 6, 6, 6, 5, 2, 6, 6, 3, 0, 6, 4, 1, 1,
            1, 3, 4, 1, 6, 0, 4, 4, 4, 5, 6, 3, 1, 2, 6, 5, 0, 6, 1, 2, 5, 4, 3, 0, 5, 3, 2, 4, 0,
            3, 4, 4, 4, 3, 0, 1, 4, 0, 5, 4, 6, 0, 4, 1, 4, 5, 4, 5, 2, 3, 3, 2, 3, 1, 3, 6, 4, 3,
            4, 1, 5, 2, 1, 2, 1, 2, 2, 2, 6, 5, 4,
        ],
        acc: 0.26,
        ari: 0.027045201420556036,
        nmi: 0.09748722283983957,
        ami: 0.05274375757691156,
        fmi: 0.24144692517215052,
    },
    Case {
        truth: &[0; 17],
        pred: &[2, 0, 2, 0, 2, 2, 2, 0, 0, 2, 2, 2, 2, 2, 0, 1, 0],
        acc: 0.5882352941176471,
        ari: 0.0,
        nmi: 0.0,
        ami: 0.0,
        fmi: 0.6642111641550714,
    },
];

const TOL: f64 = 1e-12;

#[test]
fn matches_reference_implementation() {
    for (n, case) in CASES.iter().enumerate() {
        let s = evaluate(case.truth, case.pred).unwrap();
        let expected = [
            (Index::Acc, case.acc),
            (Index::Ari, case.ari),
            (Index::Nmi, case.nmi),
            (Index::Ami, case.ami),
            (Index::Fmi, case.fmi),
        ];
        for (index, want) in expected {
            let got = s.get(index);
            assert!(
                (got - want).abs() < TOL,
                "case {n} {index}: {got} vs {want}"
            );
        }
    }
}

fn labelings() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (2usize..80).prop_flat_map(|n| {
        (
            prop::collection::vec(0usize..5, n),
            prop::collection::vec(0usize..6, n),
        )
    })
}

fn permuted(labels: &[usize], shift: usize) -> Vec<usize> {
    // a bijection on label values that also leaves gaps
    labels.iter().map(|&l| (l * 7 + shift) % 101 + 3).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn relabeling_changes_nothing((truth, pred) in labelings(), shift in 0usize..50) {
        let a = evaluate(&truth, &pred).unwrap();
        let b = evaluate(&permuted(&truth, shift), &permuted(&pred, shift + 1)).unwrap();
        for index in Index::ALL {
            prop_assert!((a.get(index) - b.get(index)).abs() < TOL, "{}", index);
        }
    }

    #[test]
    fn symmetric_indices((truth, pred) in labelings()) {
        let a = evaluate(&truth, &pred).unwrap();
        let b = evaluate(&pred, &truth).unwrap();
        for index in [Index::Ari, Index::Nmi, Index::Ami, Index::Fmi] {
            prop_assert!((a.get(index) - b.get(index)).abs() < TOL, "{}", index);
        }
    }

    #[test]
    fn ranges_and_identity((truth, pred) in labelings()) {
        let s = evaluate(&truth, &pred).unwrap();
        prop_assert!((0.0..=1.0).contains(&s.acc));
        prop_assert!((0.0..=1.0 + TOL).contains(&s.nmi));
        prop_assert!((0.0..=1.0 + TOL).contains(&s.fmi));
        prop_assert!(s.ari > -1.0 && s.ari <= 1.0 + TOL);
        prop_assert!(s.ami > -1.0 && s.ami <= 1.0 + TOL);
        let same = evaluate(&truth, &truth).unwrap();
        for index in Index::ALL {
            prop_assert!((same.get(index) - 1.0).abs() < TOL, "{}", index);
        }
    }

    #[test]
    fn adjusted_never_exceeds_normalized((truth, pred) in labelings()) {
        let t = contingency(&truth, &pred).unwrap();
        prop_assert!(ami(&t) <= nmi(&t) + 1e-9);
    }
}
