//! Weight multiplicities and twining traces computed directly from the
//! contravariant form on words in the lowering operators.

use orbitlie::automorphism::DiagramAutomorphism;
use orbitlie::cartan::CartanDatum;
use orbitlie::characters::twining_irr;
use orbitlie::fold::FoldedDatum;
use orbitlie::oracle::{oracle_irr, oracle_twining_irr, oracle_twining_verma};
use orbitlie::rational::q;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn main() {
    let a2 = CartanDatum::from_ints(&[&[2, -1], &[-1, 2]]).unwrap();
    let ranks = oracle_irr(&a2, &[q(1), q(1)], 4, 5000).unwrap();
    println!("Gram ranks of L(ρ) for A2:");
    print!("{}", ranks.to_tsv());

    let swap = DiagramAutomorphism::validate_one_based(&a2, &[2, 1]).unwrap();
    let fd = FoldedDatum::new(&a2, &swap).unwrap();
    let traces = oracle_twining_irr(&fd, &[q(1), q(1)], 4, 5000).unwrap();
    assert_eq!(traces, twining_irr(&fd, &[q(1), q(1)], 4).unwrap());
    println!("twining traces agree with the formula");

    let verma =
        oracle_twining_verma(&fd, &[q(1), q(1)], 4, ChaCha8Rng::seed_from_u64(1), 5000).unwrap();
    println!("twining Verma traces from a generic anchor:");
    print!("{}", verma.to_tsv());
}
