//! The mechanical covariance audit: every generator must map every
//! defining relation to zero, satisfy the antipode-star identity, and obey
//! the operator relations degree by degree. A deliberately wrong coproduct
//! convention and a corrupted relation table both fail with a concrete
//! counterexample.
//!
//! Run with: `cargo run --example covariance_audit`

use qmball::action::{validate_covariance, HopfConvention};
use qmball::algebra::{Algebra, Shape};

fn main() {
    let standard = HopfConvention::standard();

    println!("== shipped convention across shapes ==");
    for (m, n) in [(1u8, 1u8), (1, 2), (2, 1), (2, 2)] {
        let alg = Algebra::new(Shape::new(m, n).unwrap());
        let report = validate_covariance(&alg, &standard);
        println!(
            "shape ({m},{n}): {} ({} relation, {} star, {} operator checks)",
            if report.passed() { "PASS" } else { "FAIL" },
            report.relation_checks,
            report.star_checks,
            report.operator_checks
        );
        assert!(report.passed());
    }

    println!("\n== negative control: the swapped coproduct ==");
    let alg = Algebra::new(Shape::new(1, 1).unwrap());
    let report = validate_covariance(&alg, &HopfConvention::swapped());
    assert!(!report.passed());
    println!("first counterexample: {}", report.failure.unwrap());

    println!("\n== negative control: a corrupted relation table ==");
    let sabotaged = Algebra::with_rprime_defect(Shape::new(1, 2).unwrap());
    let report = validate_covariance(&sabotaged, &standard);
    assert!(!report.passed());
    println!("first counterexample: {}", report.failure.unwrap());
}
