//! Normal forms in <a, b | a^m = b^n> and the malnormality search.

use leftorder::amalgam::{amalgam_normal_form, malnormality_check, Amalgam, Malnormality};
use leftorder::group::Group;
use leftorder::json::parse_word;

fn main() -> Result<(), leftorder::error::Error> {
    let f2 = Group::free(2);
    let am = Amalgam::klein_amalgam();
    for text in ["a^2 b^-1", "b^3 a", "a b a^-1 b^-1", "a^3 b^5 a^-1"] {
        let nf = amalgam_normal_form(&am, &parse_word(&f2, text)?)?;
        println!("{text:>14} -> {}", nf.display("c"));
    }
    let trefoil = Amalgam::cyclic(2, 3)?;
    println!("in <a, b | a^2 = b^3>: a^5 b -> {}", amalgam_normal_form(&trefoil, &parse_word(&f2, "a^5 b")?)?.display("c"));

    println!("Z*Z: {:?}", malnormality_check(&Amalgam::free(), 4)?);
    if let Malnormality::Witness { a, w } = malnormality_check(&am, 4)? {
        let (a, w) = (f2.display_word(&a), f2.display_word(&w));
        println!("a^2 = b^2: ({w})^-1 {a} ({w}) stays in <a> although {w} does not");
    }
    Ok(())
}
