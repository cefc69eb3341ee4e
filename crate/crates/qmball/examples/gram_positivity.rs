//! Gram matrices of the canonical scalar product, degree by degree, and
//! their exact positive definiteness at rational `q`.
//!
//! Run with: `cargo run --example gram_positivity`

use qmball::algebra::Shape;
use qmball::harmonic::{positive_definite, Harmonic};
use qmball::scalar::Rational;

fn main() {
    let grid = [
        Rational::new(1.into(), 4.into()),
        Rational::new(1.into(), 2.into()),
        Rational::new(3.into(), 4.into()),
    ];

    for (m, n) in [(1u8, 1u8), (1, 2), (2, 2)] {
        let h = Harmonic::standard(Shape::new(m, n).unwrap());
        println!("== shape (m, n) = ({m}, {n}) ==");
        for degree in 0..=3usize {
            let gram = h.gram(degree);
            println!("degree {degree}: dim = {}", gram.dim());
            if gram.dim() <= 4 {
                for row in &gram.entries {
                    let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
                    println!("    [{}]", cells.join(", "));
                }
            }
            for q in &grid {
                let values = gram.evaluate_at(q);
                let ok = positive_definite(&values);
                println!("    positive definite at q = {q}: {ok}");
                assert!(ok);
            }
        }
        println!();
    }

    // Negative control: flipping one diagonal entry breaks definiteness.
    let h = Harmonic::standard(Shape::new(1, 2).unwrap());
    let mut values = h.gram(2).evaluate_at(&Rational::new(1.into(), 2.into()));
    values[1][1] = -values[1][1].clone();
    println!(
        "negative control (negated diagonal entry): positive definite = {}",
        positive_definite(&values)
    );
    assert!(!positive_definite(&values));
}
