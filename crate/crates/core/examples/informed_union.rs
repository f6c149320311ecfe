//! Builds the spheroid union around a deviation, decides whether to switch
//! to it, and samples from it.

use devrrt::informed::{IntersectionMode, SampleSource};
use devrrt::{biased_sample, build_union, should_switch, BiasConfig, NominalPath, StateVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> devrrt::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let nominal = NominalPath::new(vec![
        StateVec::xy(100.0, 100.0),
        StateVec::xy(400.0, 600.0),
        StateVec::xy(700.0, 400.0),
        StateVec::xy(900.0, 900.0),
    ])?;
    let deviation = vec![
        StateVec::xy(100.0, 100.0),
        StateVec::xy(300.0, 520.0),
        StateVec::xy(430.0, 640.0),
        StateVec::xy(650.0, 380.0),
        StateVec::xy(760.0, 470.0),
        StateVec::xy(900.0, 900.0),
    ];
    let rect = 1000.0 * 1000.0;

    for mode in [IntersectionMode::Zero, IntersectionMode::MonteCarlo(100_000)] {
        let union = build_union(&nominal, &deviation, mode, &mut rng)?;
        println!("mode {mode}");
        for (i, phs) in union.spheroids().iter().enumerate() {
            println!(
                "  segment {i}: c_min {:7.2}  c_best {:7.2}  measure {:10.1}",
                phs.c_min(),
                phs.c_best(),
                phs.measure()
            );
        }
        println!(
            "  union estimate {:.1} vs rect {rect:.1}: switch {}",
            union.measure_estimate(),
            should_switch(&union, rect)
        );
    }

    let union = build_union(&nominal, &deviation, IntersectionMode::Zero, &mut rng)?;
    let bias = BiasConfig::new(0.1)?;
    let mut from_nominal = 0;
    for _ in 0..1000 {
        let (x, source) = biased_sample(|r: &mut ChaCha8Rng| union.sample(r), &nominal, bias, &mut rng);
        assert!(union.contains(&x) || source == SampleSource::Nominal);
        from_nominal += (source == SampleSource::Nominal) as usize;
    }
    println!("1000 biased draws: {from_nominal} nominal waypoints, the rest inside the union");
    Ok(())
}
