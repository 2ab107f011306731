//! The commutator basis of ker(Z∗Z → Z×Z) and the exponent-sum test.

use leftorder::freeprod::{
    check_identities, conj_basis, kernel_decompose, normal_closure_criterion, ClosureVerdict, FreeProduct2,
};
use leftorder::json::parse_word;
use leftorder::word::Word;

fn main() -> Result<(), leftorder::error::Error> {
    let fp = FreeProduct2::z_star_z();
    let g = fp.group();
    let w = parse_word(&g, "a b a^2 b^-1 a^-3")?;
    let k = kernel_decompose(&fp, &w)?;
    println!("{} = {}", g.display_word(&w), k.display(&fp));

    let (s, t) = (Word::gen(0), Word::gen(0));
    let by = parse_word(&g, "a^2 b^-1")?;
    let conj = conj_basis(&fp, (&s, &t), &by)?;
    println!("a^2 b^-1 . x[a, b] . (a^2 b^-1)^-1 = {}", conj.display(&fp));

    let set = [(s.clone(), t.clone()), (Word::pow(0, 2), Word::pow(0, 2))];
    match normal_closure_criterion(&conj, &set) {
        ClosureVerdict::Consistent => println!("exponent sums vanish outside S"),
        ClosureVerdict::Violates { g: x, h: y, sum } => println!(
            "x[{}, {}] has exponent sum {sum}, so the conjugate is outside the normal closure of S",
            g.display_word(&fp.lift_g(&x)),
            g.display_word(&fp.lift_h(&y))
        ),
    }

    let ok = check_identities(&fp, &Word::pow(0, 3), &Word::pow(0, -2), &Word::pow(0, -1), &Word::pow(0, 4))?;
    println!("conjugation identities at g = a^3, h = b^-2, a^-1, b^4: {ok:?}");
    Ok(())
}
