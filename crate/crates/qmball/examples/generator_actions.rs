//! The quantum symmetry in action: `E_k`, `F_k`, `K_k^(±1)` applied to
//! letters, the delta element, and products via the coproduct Leibniz rule.
//!
//! Run with: `cargo run --example generator_actions`

use qmball::action::{weight_of, Action, QGen};
use qmball::algebra::{Algebra, Element, NormalMonomial, Shape, ZIndex};
use qmball::scalar::Scalar;

fn main() {
    let shape = Shape::new(1, 2).unwrap(); // one column, two rows
    let alg = Algebra::new(shape);
    let action = Action::standard(&alg);

    println!(
        "shape: m = {}, n = {}; generators E/F/K at nodes 1..{}",
        shape.m(),
        shape.n(),
        shape.size() - 1
    );

    println!("\n== base actions on the letters ==");
    for z in shape.letters() {
        let mono = NormalMonomial::single_z(z);
        println!("letter {mono}, weight {:?}", weight_of(shape, &mono).0);
        for k in 1..shape.size() {
            for g in [QGen::e(k), QGen::f(k), QGen::k_plus(k)] {
                let image = action.act_on_z(g, z.a, z.alpha);
                if !image.is_zero() {
                    println!("  {g:>3} · {mono} = {image}");
                }
            }
        }
    }

    println!("\n== the delta element ==");
    let f0 = Element::from_monomial(NormalMonomial::f0(), Scalar::one());
    for k in 1..shape.size() {
        for g in [QGen::e(k), QGen::f(k)] {
            let image = action.act_on_f0(g);
            println!("  {g:>3} · f0 = {image}");
        }
    }

    println!("\n== starred letters, derived through the antipode ==");
    let corner = ZIndex::new(shape.n(), shape.m());
    for g in [
        QGen::e(shape.n()),
        QGen::f(shape.n()),
        QGen::k_plus(shape.n()),
    ] {
        println!(
            "  {g:>3} · zs[{},{}] = {}",
            corner.a,
            corner.alpha,
            action.act_on_zstar(g, corner.a, corner.alpha)
        );
    }

    println!("\n== Leibniz rule on a product ==");
    let z2 = alg.multiply(
        &Element::from_monomial(NormalMonomial::single_z(corner), Scalar::one()),
        &Element::from_monomial(NormalMonomial::single_z(corner), Scalar::one()),
    );
    println!("  v = {z2}");
    println!("  En · v = {}", action.act(QGen::e(shape.n()), &z2));
    println!("  Fn · v = {}", action.act(QGen::f(shape.n()), &z2));

    println!("\n== the commutator [En, Fn] is the quantum weight ==");
    let z = Element::from_monomial(NormalMonomial::single_z(corner), Scalar::one());
    let ef = action.act(QGen::e(shape.n()), &action.act(QGen::f(shape.n()), &z));
    let fe = action.act(QGen::f(shape.n()), &action.act(QGen::e(shape.n()), &z));
    println!("  [En, Fn] · z = {}", ef.sub(&fe));
    let _ = f0;
}
