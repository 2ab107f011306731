//! Conradian and convexity certificates, with witnesses checked again.

use leftorder::cone::{dynamical_cone, integer_cone, lex_cone, slope_cone, Sign, Variant};
use leftorder::conrad::{conradian_check, convexity_check, lex_witness_pattern, Outcome, Subgroup};
use leftorder::group::{zvec_word, Group};
use leftorder::ses::Ses;

fn main() -> Result<(), leftorder::error::Error> {
    let p = slope_cone([1, -1], Variant::PlusPlus)?;
    println!("slope cone: {:?}", conradian_check(&p, 4)?);

    let z2 = Group::zpow(2);
    let diagonal = Subgroup::cyclic(&z2, &zvec_word(&[1, 1]))?;
    println!("<(1,1)> convex: {:?}", convexity_check(&p, &diagonal, 5)?);
    let axis = Subgroup::cyclic(&z2, &zvec_word(&[1, 0]))?;
    if let Outcome::Witness(v) = convexity_check(&p, &axis, 5)? {
        let show = |w| z2.display_word(w);
        println!("<(1,0)> not convex: {} < {} < {}, verified {}", show(&v.c1), show(&v.f), show(&v.c2), v.verify(&p, &axis)?);
    }

    let d = dynamical_cone();
    match conradian_check(&d, 3)? {
        Outcome::Witness(v) => {
            let f2 = Group::free(2);
            let (g, h) = (f2.display_word(&v.g), f2.display_word(&v.h));
            println!("dynamical cone: g = {g}, h = {h}, verified {}", v.verify(&d)?);
        }
        Outcome::Pass(r) => println!("dynamical cone: no witness in B_{r}"),
    }

    let lex = lex_cone(Ses::direct(Group::zpow(1), Group::free(2)), integer_cone(Sign::Positive), dynamical_cone())?;
    if let Outcome::Witness(v) = conradian_check(&lex, 3)? {
        println!("lex over a dynamical quotient: in kernel {:?}", lex_witness_pattern(&lex, &v)?);
    }
    Ok(())
}
