//! Twining characters of A3 under its flip, compared with characters of the
//! orbit algebra.

use orbitlie::automorphism::DiagramAutomorphism;
use orbitlie::cartan::CartanDatum;
use orbitlie::characters::{
    orbit_character_check, twining_irr, twining_verma, twining_verma_product,
};
use orbitlie::fold::FoldedDatum;
use orbitlie::rational::q;

pub fn main() {
    let a3 = CartanDatum::from_ints(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]).unwrap();
    let flip = DiagramAutomorphism::validate_one_based(&a3, &[3, 2, 1]).unwrap();
    let fd = FoldedDatum::new(&a3, &flip).unwrap();
    let lam = [q(1), q(1), q(1)];

    let chi = twining_irr(&fd, &lam, 6).unwrap();
    println!("twining character of L(1,1,1):");
    print!("{}", chi.to_tsv());

    let report = orbit_character_check(&fd, &lam, 6).unwrap();
    println!("orbit-algebra comparison passed: {}", report.passed());

    let product = twining_verma_product(&fd, &lam, 6).unwrap();
    assert_eq!(product, twining_verma(&fd, &lam, 6).unwrap());
    println!("product formula matches the twining Verma character");
}
