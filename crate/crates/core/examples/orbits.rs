//! Conjugation orbits: finite for the Klein bottle group, unbounded in Sol.

use leftorder::action::{orbit, restricted_orbit_sample, Strategy};
use leftorder::cone::{integer_cone, klein_cones, lex_cone, slope_cone, Sign, Variant};
use leftorder::group::{KLEIN_X, KLEIN_Y, SOL_T};
use leftorder::ses::Ses;
use leftorder::word::Word;

fn main() -> Result<(), leftorder::error::Error> {
    let conj = [Word::gen(KLEIN_X), Word::gen(KLEIN_Y)];
    for c in klein_cones() {
        let rep = orbit(&c, &conj, Strategy::DescriptorExact, 8)?;
        println!("{c:?}: {:?}, {:?}", rep.size, rep.representatives);
    }

    let ses = Ses::sol();
    let lex = lex_cone(ses.clone(), slope_cone([1, 0], Variant::PlusPlus)?, integer_cone(Sign::Positive))?;
    let rep = orbit(&lex, &[Word::gen(SOL_T)], Strategy::DescriptorExact, 10)?;
    println!("sol lex under t: {:?} after {} cones", rep.size, rep.representatives.len());

    for s in restricted_orbit_sample(&lex, &ses.kernel_embedding()?, &[Word::gen(SOL_T)], 5)? {
        println!("restricted to Z² after conjugating by t^{}: {:?}", s.conjugator.len(), s.detection);
    }
    Ok(())
}
