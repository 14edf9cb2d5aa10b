use std::sync::OnceLock;

use num_bigint::BigInt;
use petdyn_core::dynsys::{self, SubstitutionSystem};
use petdyn_core::IntegralPolynomial;

fn word() -> &'static SubstitutionSystem {
    static SYS: OnceLock<SubstitutionSystem> = OnceLock::new();
    SYS.get_or_init(|| SubstitutionSystem::chacon_with_length(200_000))
}

#[test]
fn short_words_recur_with_stable_gaps() {
    let short = SubstitutionSystem::chacon_with_length(20_000);
    for len in 1..=5 {
        assert_eq!(short.admissible_words(len), word().admissible_words(len));
        assert!(word().recurrence_gaps(len).values().all(|g| g.is_some()));
    }
    assert!(!word().admissible_words(2).contains(&"11".to_string()));
}

#[test]
fn difference_set_agrees_with_return_set() {
    let sys = word();
    for (u, v) in [("0", "0"), ("01", "10"), ("00", "1")] {
        let (cu, cv) = (sys.cylinder(u).unwrap(), sys.cylinder(v).unwrap());
        let rs = dynsys::return_set(sys, &cu, &[(IntegralPolynomial::identity(), cv.clone())], (-300, 300)).unwrap();
        let ou = sys.occurrences(&cu);
        let ov = sys.occurrences(&cv);
        for n in -300..=300i64 {
            let brute = ou.members().any(|m| ov.contains(m + n));
            assert_eq!(rs.members.contains(n), brute, "{u} {v} n={n}");
        }
    }
}

#[test]
fn occurrences_shift_with_the_base_point() {
    let sys = word();
    let c = sys.cylinder("0100").unwrap();
    let at0 = sys.occurrences(&c);
    for base in [1i64, 7, 1000] {
        let moved = sys.occurrences_from(&c, base);
        for m in at0.members().take(500) {
            assert!(moved.contains(m - base));
        }
        assert_eq!(moved.count(), at0.count());
    }
}

#[test]
fn diagonal_return_sets_are_syndetic() {
    let sys = word();
    let n = IntegralPolynomial::identity();
    let sq = n.mul(&n);
    for family in [vec![n.clone(), n.scale(&BigInt::from(2))], vec![n.clone(), sq]] {
        let u = sys.cylinder("0").unwrap();
        let pairs: Vec<_> = family.iter().map(|p| (p.clone(), sys.cylinder("0").unwrap())).collect();
        let rs = dynsys::return_set(sys, &u, &pairs, (0, 300)).unwrap();
        let v = rs.decided().unwrap().is_syndetic_at(50).unwrap();
        assert!(v.holds, "max gap {}", v.witness);
    }
}

#[test]
fn substitution_file_round_trip() {
    let def = dynsys::SubstitutionDef::chacon(5000);
    let text = serde_json::to_string(&def).unwrap();
    let sys = SubstitutionSystem::from_json_str(&text).unwrap();
    assert_eq!(sys.prefix(13), "0010001010010");
    assert_eq!(sys.len(), 5000);
}
