use cvsteer::bell::{bell_optimize, BellOptions};
use cvsteer::entropy::GridOptions;
use cvsteer::reid::reid_test;
use cvsteer::steering::entropic_test_family;
use cvsteer::StateFamily;

fn main() -> cvsteer::Result<()> {
    let fam = StateFamily::PhotonSubtracted { r: 0.8, order: 1, k: 1 };
    let w = fam.wigner()?;
    let reid = reid_test(&w, 0.0, std::f64::consts::FRAC_PI_2)?;
    let ent = entropic_test_family(&fam, &GridOptions::default())?;
    let bell = bell_optimize(&fam, &BellOptions::default())?;
    println!("{} {} {}", reid.product, ent.ratio, bell.abs_bi);
    Ok(())
}
