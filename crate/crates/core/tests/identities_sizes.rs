use supergeom::identities::verify_structure_identities;
use supergeom::StructureConstants;

#[test]
fn structure_identities_at_all_sizes() {
    for (n, m) in [(2, 1), (1, 2), (3, 1), (2, 0), (3, 0)] {
        let t = std::time::Instant::now();
        let k = StructureConstants::canonical(n, m).unwrap();
        let report = verify_structure_identities(&k);
        for e in report.failures() {
            eprintln!("({n}|{m}) {} failed: {:?}", e.name, e.counterexample);
        }
        eprintln!("({n}|{m}) {:?}", t.elapsed());
        assert!(report.passed, "({n}|{m})");
    }
}
