//! Weyl orbits under ordinary and folded reflections, and the Coxeter
//! relations of the folded generators.

use orbitlie::automorphism::DiagramAutomorphism;
use orbitlie::cartan::CartanDatum;
use orbitlie::fold::FoldedDatum;
use orbitlie::rational::q;
use orbitlie::weight::Weight;
use orbitlie::weyl::{coxeter_relations_check, hat_orbit, random_symmetric_weights, weyl_orbit};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn main() {
    let a3 = CartanDatum::from_ints(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]).unwrap();
    let rho = Weight::rho(&a3);
    let orbit = weyl_orbit(&a3, &rho, 100, 10_000).unwrap();
    println!("|W ρ| for A3 = {}", orbit.len());

    let flip = DiagramAutomorphism::validate_one_based(&a3, &[3, 2, 1]).unwrap();
    let fd = FoldedDatum::new(&a3, &flip).unwrap();
    let start = Weight::anchored(vec![q(1), q(1), q(1)]);
    for p in hat_orbit(&fd, &start, 100, 10_000).unwrap() {
        println!("{:?}\t{}", p.weight.exponents(), p.parity);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let weights = random_symmetric_weights(&fd, 20, &mut rng);
    assert_eq!(coxeter_relations_check(&fd, &weights).unwrap(), None);
    println!("folded reflections satisfy the B2 Coxeter relations");
}
