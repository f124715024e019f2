//! Benchmark fixtures shared by the criterion targets.

use cvsteer::StateFamily;

/// States covering each family at sizes that appear in the tables.
pub fn fixtures() -> Vec<(&'static str, StateFamily)> {
    vec![
        ("lg10", StateFamily::Lg { n: 10, m: 0 }),
        ("tmsv", StateFamily::Tmsv { r: 1.0 }),
        ("sub2", StateFamily::PhotonSubtracted { r: 1.0, order: 2, k: 1 }),
        ("noon3", StateFamily::Noon { n: 3 }),
    ]
}
