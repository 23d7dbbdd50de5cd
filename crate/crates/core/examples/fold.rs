//! Folds D4 along its triality and A3 along its flip, and transports a
//! weight to the orbit algebra and back.

use orbitlie::automorphism::DiagramAutomorphism;
use orbitlie::cartan::CartanDatum;
use orbitlie::fold::FoldedDatum;
use orbitlie::rational::{fmt_q, q};
use orbitlie::weight::Weight;

pub fn main() {
    let d4 = CartanDatum::from_ints(&[
        &[2, -1, 0, 0],
        &[-1, 2, -1, -1],
        &[0, -1, 2, 0],
        &[0, -1, 0, 2],
    ])
    .unwrap();
    let triality = DiagramAutomorphism::validate_one_based(&d4, &[3, 2, 4, 1]).unwrap();
    let fd = FoldedDatum::new(&d4, &triality).unwrap();
    println!("D4 / triality: orbit Cartan matrix");
    let a = fd.breve_matrix();
    for r in 0..a.rows() {
        println!(
            "  {}",
            a.row(r).iter().map(fmt_q).collect::<Vec<_>>().join(" ")
        );
    }

    let a3 = CartanDatum::from_ints(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]]).unwrap();
    let flip = DiagramAutomorphism::validate_one_based(&a3, &[3, 2, 1]).unwrap();
    let fd = FoldedDatum::new(&a3, &flip).unwrap();
    let s: Vec<i64> = fd.breve_indices().iter().map(|&i| fd.s(i)).collect();
    println!("A3 / flip: s = {s:?}");

    let w = Weight::new(vec![q(1), q(0), q(1)], vec![2, 2, 2]).unwrap();
    let t = fd.transport(&w).unwrap();
    println!(
        "transport of Λ=(1,0,1) − 2(α1+α2+α3): anchor {:?}, orbit exponents {:?}",
        t.weight.anchor().iter().map(fmt_q).collect::<Vec<_>>(),
        t.weight.exponents()
    );
    assert_eq!(fd.transport_back(&t), w);
}
