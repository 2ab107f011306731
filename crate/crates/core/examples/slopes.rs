//! Slope detection on Z², and how conjugation in Sol moves slopes.

use leftorder::action::conj_cone;
use leftorder::cone::{detect_slope, detect_slope_scan, integer_cone, lex_cone, restrict_cone, slope_cone, Sign, Variant};
use leftorder::group::SOL_T;
use leftorder::ses::Ses;
use leftorder::word::Word;

fn main() -> Result<(), leftorder::error::Error> {
    let c = slope_cone([2, 3], Variant::PlusMinus)?;
    println!("descriptor read-back: {:?}", detect_slope(&c, 4)?);
    // an opaque scan only sees B_r, so it returns a sector with its readings
    println!("scan at r = 4: {:?}", detect_slope_scan(&c, 4)?);

    let ses = Ses::sol();
    let lex = lex_cone(ses.clone(), slope_cone([1, 0], Variant::PlusPlus)?, integer_cone(Sign::Positive))?;
    let kernel = ses.kernel_embedding()?;
    for k in 0..=6 {
        let moved = conj_cone(&lex, &Word::pow(SOL_T, k))?;
        println!("t^{k}: {:?}", detect_slope(&restrict_cone(&moved, &kernel)?, 4)?);
    }
    Ok(())
}
