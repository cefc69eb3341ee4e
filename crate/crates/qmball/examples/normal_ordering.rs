//! Normal-ordering walkthrough: free words in the letters `z[a,α]`,
//! `zs[a,α]`, `f0` are rewritten into the canonical basis
//! `z-word · f0? · z*-word`.
//!
//! Run with: `cargo run --example normal_ordering`

use qmball::algebra::{Algebra, Element, Letter, Shape};
use qmball::scalar::Scalar;

fn show(alg: &Algebra, label: &str, word: &[Letter]) -> Element {
    let result = alg.normal_form(Scalar::one(), word);
    let pretty: Vec<String> = word.iter().map(|l| l.to_string()).collect();
    println!("{label:28} {} = {}", pretty.join("*"), result);
    result
}

fn main() {
    // The quantum disc: one variable, one relation.
    let disc = Algebra::new(Shape::new(1, 1).unwrap());
    println!("== quantum disc (m = n = 1) ==");
    show(
        &disc,
        "corner relation:",
        &[Letter::zs(1, 1), Letter::z(1, 1)],
    );
    show(
        &disc,
        "double contraction:",
        &[
            Letter::zs(1, 1),
            Letter::zs(1, 1),
            Letter::z(1, 1),
            Letter::z(1, 1),
        ],
    );
    show(&disc, "delta annihilation:", &[Letter::F0, Letter::z(1, 1)]);
    show(
        &disc,
        "full delta sandwich:",
        &[Letter::F0, Letter::zs(1, 1), Letter::z(1, 1), Letter::F0],
    );

    // A genuine 2x2 matrix of generators.
    let alg = Algebra::new(Shape::new(2, 2).unwrap());
    println!("\n== quantum 2x2 matrix ball ==");
    show(&alg, "same row:", &[Letter::z(1, 2), Letter::z(1, 1)]);
    show(&alg, "same column:", &[Letter::z(2, 1), Letter::z(1, 1)]);
    show(
        &alg,
        "diagonal exchange:",
        &[Letter::z(2, 2), Letter::z(1, 1)],
    );
    show(&alg, "mixed swap:", &[Letter::zs(2, 2), Letter::z(1, 1)]);
    show(&alg, "mixed corner:", &[Letter::zs(2, 2), Letter::z(2, 2)]);

    // Products of elements associate even though every product rewrites.
    println!("\n== associativity through rewriting ==");
    let u = alg.normal_form(Scalar::one(), &[Letter::zs(1, 2), Letter::z(2, 1)]);
    let v = alg.normal_form(Scalar::q_pow(-1), &[Letter::z(1, 1), Letter::F0]);
    let w = alg.normal_form(Scalar::one(), &[Letter::zs(2, 1)]);
    let left = alg.multiply(&alg.multiply(&u, &v), &w);
    let right = alg.multiply(&u, &alg.multiply(&v, &w));
    println!("(u·v)·w = {left}");
    println!("u·(v·w) = {right}");
    assert_eq!(left, right);
    println!("equal, exactly.");
}
