//! Sign oracles for the basic cone families, and a ball check of their axioms.

use leftorder::cone::{
    check_cone_axioms_on_ball, cone_sign, dynamical_cone, integer_cone, klein_cones, lex_cone, slope_cone, Sign,
    Variant,
};
use leftorder::group::{klein_word, zvec_word, Group};
use leftorder::json::{cone_to_json, parse_word};
use leftorder::ses::Ses;

fn main() -> Result<(), leftorder::error::Error> {
    let p = slope_cone([1, -1], Variant::PlusPlus)?;
    for v in [[1, -5], [-1, -1], [1, 1], [3, 2]] {
        println!("P_(1,-1)^++ at {v:?}: {}", cone_sign(&p, &zvec_word(&v))?.symbol());
    }

    let k = Group::Klein;
    for c in klein_cones() {
        let w = klein_word(3, -1);
        println!("{} : sign({}) = {}", cone_to_json(&c), k.display_word(&w), cone_sign(&c, &w)?.symbol());
    }

    let lex = lex_cone(Ses::sol(), slope_cone([1, 0], Variant::PlusPlus)?, integer_cone(Sign::Negative))?;
    let sol = Group::sol();
    for text in ["t", "e1^-4 t^-1", "e2 e1^-1"] {
        let w = parse_word(&sol, text)?;
        println!("sol lex: sign({text}) = {}", cone_sign(&lex, &w)?.symbol());
    }

    let d = dynamical_cone();
    let f2 = Group::free(2);
    for text in ["a", "b", "a b^-1", "b a^-2 b"] {
        println!("dynamical: sign({text}) = {}", cone_sign(&d, &parse_word(&f2, text)?)?.symbol());
    }
    println!("dynamical axioms on B_4: {:?}", check_cone_axioms_on_ball(&d, 4)?);
    Ok(())
}
