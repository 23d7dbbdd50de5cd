//! Runs the comparator suite on the rank-3 algebra with two imaginary simple
//! roots, then again with an injected fault.

use orbitlie::automorphism::DiagramAutomorphism;
use orbitlie::cartan::CartanDatum;
use orbitlie::fold::FoldedDatum;
use orbitlie::rational::q;
use orbitlie::verify::{parse_perturbation, verify, Outcome, VerifyConfig};

pub fn main() {
    let cd = CartanDatum::from_ints(&[&[0, 0, -1], &[0, 0, -1], &[-1, -1, 2]]).unwrap();
    let da = DiagramAutomorphism::validate_one_based(&cd, &[2, 1, 3]).unwrap();
    let fd = FoldedDatum::new(&cd, &da).unwrap();
    let lam = [q(0), q(0), q(2)];

    let cfg = VerifyConfig {
        depth: 6,
        oracle_depth: 4,
        ..VerifyConfig::default()
    };
    let report = verify(&fd, &lam, &cfg).unwrap();
    for c in &report.checks {
        let status = match &c.outcome {
            Outcome::Passed => "pass".to_string(),
            Outcome::Skipped(why) => format!("skip ({why})"),
            Outcome::Failed(d) => format!("FAIL {d}"),
        };
        println!("{:<22}{status}", c.name);
    }

    let faulty = VerifyConfig {
        perturbations: vec![parse_perturbation("cartan:1,3,1").unwrap()],
        ..cfg
    };
    let report = verify(&fd, &lam, &faulty).unwrap();
    let (name, diag) = report.failure().expect("fault is detected");
    println!("with a_13 shifted by +1: {name} fails with {diag}");
}
