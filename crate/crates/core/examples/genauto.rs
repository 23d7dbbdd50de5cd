//! A diagram automorphism twisted by fourth roots of unity: the twining
//! character picks up orbit phases, which amounts to shifting its argument.

use orbitlie::automorphism::DiagramAutomorphism;
use orbitlie::cartan::CartanDatum;
use orbitlie::characters::twining_irr;
use orbitlie::fold::FoldedDatum;
use orbitlie::genauto::{
    lifted_eval, phases_with_inverses, transform_twining, PhaseValue, DEFAULT_MAX_TAIL,
};
use orbitlie::rational::q;

pub fn main() {
    let a3 = CartanDatum::from_ints(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]).unwrap();
    let flip = DiagramAutomorphism::validate_one_based(&a3, &[3, 2, 1]).unwrap();
    let fd = FoldedDatum::new(&a3, &flip).unwrap();
    let i = PhaseValue::root_of_unity(4, 1);
    let pd = phases_with_inverses(&a3, &flip, vec![i.clone(), PhaseValue::one(), i]).unwrap();

    let plain = twining_irr(&fd, &[q(1), q(0), q(1)], 8).unwrap();
    let phased = transform_twining(&pd, &flip, &plain);
    print!("{}", phased.to_tsv());

    let (points, results) = lifted_eval(&pd, &phased, &plain, 3, DEFAULT_MAX_TAIL).unwrap();
    for (p, r) in points.iter().zip(&results) {
        println!(
            "Re α(h) = {:.1}: |lhs − rhs| = {:.2e}, tail {:.2e}, {}",
            p.alpha[0].re,
            (r.lhs - r.rhs).norm(),
            r.tail,
            if r.passed { "ok" } else { "FAIL" }
        );
    }
}
