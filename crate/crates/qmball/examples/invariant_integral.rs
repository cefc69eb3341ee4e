//! The invariant integral as a twisted trace: exact values on finite
//! functions, and the invariance identity `∫ g·f = ε(g) ∫ f` checked on
//! the nose.
//!
//! Run with: `cargo run --example invariant_integral`

use qmball::action::QGen;
use qmball::algebra::{Element, NormalMonomial, Shape, ZIndex};
use qmball::harmonic::Harmonic;
use qmball::scalar::{Rational, Scalar};

fn main() {
    let h = Harmonic::standard(Shape::new(1, 1).unwrap());
    let z = ZIndex::new(1, 1);
    let half = Rational::new(1.into(), 2.into());

    println!("== integrals of delta sandwiches on the quantum disc ==");
    for j in 0..4usize {
        let mono = NormalMonomial::from_parts(vec![z; j], true, vec![z; j]);
        let f = Element::from_monomial(mono.clone(), Scalar::one());
        let integral = h.integrate(&f).unwrap();
        let value = integral.evaluate_at(&half).unwrap();
        println!("  ∫ {mono} dν = {integral}   (= {value} at q = 1/2)");
    }

    println!("\n== the integral is positive on star-squares ==");
    let f = {
        let mut e = Element::from_monomial(
            NormalMonomial::from_parts(vec![z], true, vec![]),
            Scalar::one(),
        );
        e.add_term(
            NormalMonomial::f0(),
            &Scalar::q_pow(1) - &Scalar::from_int(2),
        );
        e
    };
    let square = h.algebra().multiply(&f.star(), &f);
    let integral = h.integrate(&square).unwrap();
    println!("  f = {f}");
    println!("  ∫ f*·f dν = {integral}");
    println!("  at q = 1/2: {}", integral.evaluate_at(&half).unwrap());

    println!("\n== invariance: every generator integrates to its counit ==");
    let sample = Element::from_monomial(
        NormalMonomial::from_parts(vec![z], true, vec![z]),
        Scalar::one(),
    );
    for g in QGen::all(h.shape()) {
        let residual = h.check_invariance(g, &sample).unwrap();
        println!("  ∫ {g}·f - ε({g})·∫f = {residual}");
        assert!(residual.is_zero());
    }

    println!("\n== a bigger shape: (m, n) = (1, 2) ==");
    let h = Harmonic::standard(Shape::new(1, 2).unwrap());
    let z21 = ZIndex::new(2, 1);
    let sample = Element::from_monomial(
        NormalMonomial::from_parts(vec![z21], true, vec![z21]),
        Scalar::one(),
    );
    let integral = h.integrate(&sample).unwrap();
    println!(
        "  ∫ z[2,1]*f0*zs[2,1] dν = {integral}   (= {} at q = 1/2)",
        integral.evaluate_at(&half).unwrap()
    );
    for g in [QGen::e(1), QGen::f(2), QGen::k_plus(1)] {
        assert!(h.check_invariance(g, &sample).unwrap().is_zero());
    }
    println!("  invariance holds for all generators.");
}
