use proptest::prelude::*;
use zetaline::io::{decode, encode, Format};
use zetaline::{cross_check, load_zero_table, save_zero_table, Error, Source, ZeroTable};

fn ordinates() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.05f64..5.0, 0..60).prop_map(|steps| {
        let mut g = 10.0;
        steps
            .into_iter()
            .map(|d| {
                g += d;
                g
            })
            .collect()
    })
}

fn table(ords: Vec<f64>) -> ZeroTable {
    let hi = ords.last().copied().unwrap_or(10.0) + 1.0;
    ZeroTable::new(0.0, hi, ords, Source::Computed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn save_load_round_trip(ords in ordinates()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.ztbl");
        let t = table(ords);
        save_zero_table(&t, &path).unwrap();
        let back = load_zero_table(&path, Format::Cached).unwrap();
        prop_assert_eq!(back.ordinates(), t.ordinates());
        prop_assert_eq!(back.range_hi().to_bits(), t.range_hi().to_bits());
        prop_assert_eq!(back.source, Source::Ingested);
    }

    #[test]
    fn any_flipped_byte_is_detected(ords in ordinates(), pos in any::<prop::sample::Index>(), bit in 0u8..8) {
        let mut bytes = encode(&table(ords));
        let i = pos.index(bytes.len());
        bytes[i] ^= 1 << bit;
        prop_assert!(decode(&bytes).is_err());
    }

    #[test]
    fn cross_check_is_symmetric(ords in ordinates(), shift in prop::collection::vec(-3e-6f64..3e-6, 60)) {
        let a = table(ords.clone());
        let moved: Vec<f64> = ords.iter().zip(&shift).map(|(g, d)| g + d).collect();
        let b = table(moved);
        let ab = cross_check(&a, &b, 1e-6);
        let ba = cross_check(&b, &a, 1e-6);
        prop_assert_eq!(ab.matched, ba.matched);
        prop_assert_eq!(ab.unmatched_computed.len(), ba.unmatched_ingested.len());
        prop_assert_eq!(ab.unmatched_ingested.len(), ba.unmatched_computed.len());
    }
}

#[test]
fn truncated_file_is_rejected() {
    let bytes = encode(&table(vec![14.1, 21.0, 25.0]));
    for len in [0, 3, 12, bytes.len() - 1] {
        assert!(decode(&bytes[..len]).is_err());
    }
}

#[test]
fn plain_text_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.txt");
    std::fs::write(&path, "# header\n14.134725\n21.022040\n\n20.0\n").unwrap();
    match load_zero_table(&path, Format::PlainText) {
        Err(Error::NonMonotone { line }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
}
