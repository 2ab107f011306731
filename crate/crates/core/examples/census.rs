//! Enumerating sign patterns on small balls that extend to larger balls.

use leftorder::census::{digest, enumerate_ball_cones, extendable_filter};
use leftorder::error::Limits;
use leftorder::group::Group;

fn main() -> Result<(), leftorder::error::Error> {
    let limits = Limits::from_env();
    for (group, r, target) in [(Group::Klein, 4, 8), (Group::zpow(2), 2, 5), (Group::free(2), 1, 3)] {
        let cones = enumerate_ball_cones(&group, r, &limits)?;
        let survivors = extendable_filter(&group, &cones, target, &limits)?;
        println!(
            "{:?}: {} ball cones on B_{r}, {} extend to B_{target}, digest {}",
            group,
            cones.len(),
            survivors.len(),
            digest(&group, &survivors)
        );
    }
    Ok(())
}
