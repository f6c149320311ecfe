//! Deviation cost of a detour around an obstacle, and how the length
//! weight trades it off.

use devrrt::costs::{edge_cost, root_cost};
use devrrt::{deviation_cost, path_cost, path_length, CostConfig, NominalPath, StateVec};

fn main() -> devrrt::Result<()> {
    let nominal = NominalPath::new(vec![
        StateVec::xy(0.0, 0.0),
        StateVec::xy(100.0, 0.0),
        StateVec::xy(100.0, 100.0),
    ])?;
    let detour = [
        StateVec::xy(0.0, 0.0),
        StateVec::xy(40.0, 0.0),
        StateVec::xy(50.0, 15.0),
        StateVec::xy(60.0, 0.0),
        StateVec::xy(100.0, 0.0),
        StateVec::xy(100.0, 100.0),
    ];
    let cut_corner = [StateVec::xy(0.0, 0.0), StateVec::xy(100.0, 100.0)];

    for eps in [10.0, 2.0, 0.5] {
        let cfg = CostConfig::new(0.0, eps)?;
        println!(
            "eps {eps:>4}: detour c_d {:>9.3}   corner cut c_d {:>9.3}",
            deviation_cost(&detour, &nominal, &cfg)?,
            deviation_cost(&cut_corner, &nominal, &cfg)?
        );
    }

    let cfg = CostConfig::new(0.0, 2.0)?;
    let by_edges: f64 = root_cost(&detour[0], &nominal, &cfg)
        + detour.windows(2).map(|w| edge_cost(&w[0], &w[1], &nominal, &cfg)).sum::<f64>();
    println!("edge sum {by_edges:.6} = whole path {:.6}", deviation_cost(&detour, &nominal, &cfg)?);

    for omega in [0.0, 0.5, 0.9] {
        let cfg = CostConfig::new(omega, 2.0)?;
        println!(
            "omega {omega}: detour {:>9.3} (length {:.1})   corner cut {:>9.3} (length {:.1})",
            path_cost(&detour, &nominal, &cfg),
            path_length(&detour),
            path_cost(&cut_corner, &nominal, &cfg),
            path_length(&cut_corner)
        );
    }
    Ok(())
}
