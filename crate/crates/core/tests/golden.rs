//! Golden dumps of the bosonized currents. Regenerate with `UPDATE_GOLDEN=1`.

use std::path::PathBuf;

use yangian_core::boson::Sign;
use yangian_core::cartan::AlgebraData;
use yangian_core::currents::{build_current, BuildOptions, CurrentKind};

fn check(name: &str, n: usize, kind: CurrentKind, i: usize) {
    let alg = AlgebraData::new(n).unwrap();
    let dump = build_current(&alg, kind, i, BuildOptions::default()).unwrap().dump(alg.g);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &dump).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(dump, expected, "{name} drifted from golden file");
}

#[test]
fn sl2_currents() {
    check("sl2_hplus", 2, CurrentKind::H(Sign::Plus), 1);
    check("sl2_hminus", 2, CurrentKind::H(Sign::Minus), 1);
    check("sl2_eplus", 2, CurrentKind::E(Sign::Plus), 1);
    check("sl2_eminus", 2, CurrentKind::E(Sign::Minus), 1);
}

#[test]
fn sl3_currents() {
    check("sl3_eplus_2", 3, CurrentKind::E(Sign::Plus), 2);
    check("sl3_eminus_1", 3, CurrentKind::E(Sign::Minus), 1);
    check("sl3_hminus_2", 3, CurrentKind::H(Sign::Minus), 2);
}
