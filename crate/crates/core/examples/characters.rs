//! Irreducible and Verma characters of A2 from the Weyl-Kac formula, and
//! root multiplicities of an affine algebra.

use orbitlie::cartan::CartanDatum;
use orbitlie::characters::{irr_character, root_multiplicities, verma_character};
use orbitlie::rational::q;

pub fn main() {
    let a2 = CartanDatum::from_ints(&[&[2, -1], &[-1, 2]]).unwrap();
    let adjoint = irr_character(&a2, &[q(1), q(1)], 4).unwrap();
    println!("L(ρ) of A2, exponents of Λ − λ and multiplicities:");
    print!("{}", adjoint.to_tsv());

    let verma = verma_character(&a2, &[q(0), q(0)], 3).unwrap();
    println!("M(0) of A2 up to height 3 has {} weights", verma.len());

    let affine = CartanDatum::from_ints(&[&[2, -2], &[-2, 2]]).unwrap();
    let mults = root_multiplicities(&affine, 6).unwrap();
    for (root, m) in &mults {
        println!("A1^(1) root {root:?}: multiplicity {m}");
    }
}
