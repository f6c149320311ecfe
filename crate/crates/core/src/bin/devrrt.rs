use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use devrrt::bench::commands::{run_bench_command, run_plan_command, write_fixtures, RunOptions};
use devrrt::{fixture, fixture_names};

#[derive(Parser)]
#[command(name = "devrrt", version, about = "Minimum-deviation informed RRT* planner and benchmark")]
struct Cli {
    /// JSON file with default values for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan once and write the path, cost trace and map.
    Plan(RunOptions),
    /// Run seeded trial batches and write statistics.
    Bench(RunOptions),
    /// List or export the bundled scenarios.
    Fixtures {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        write: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> devrrt::Result<()> {
    match cli.command {
        Command::Plan(flags) => {
            let opts = RunOptions::resolve(cli.config.as_deref(), flags)?;
            let (r, out) = run_plan_command(&opts)?;
            println!(
                "best cost {:.6} after {} iterations, {} nodes, informed from {}; wrote {}",
                r.best_cost,
                r.iterations,
                r.tree_size,
                r.informed_activated_at.map_or("never".into(), |i| i.to_string()),
                out.display()
            );
        }
        Command::Bench(flags) => {
            let opts = RunOptions::resolve(cli.config.as_deref(), flags)?;
            let (report, out) = run_bench_command(&opts)?;
            println!(
                "{}: threshold {:.3} from {}",
                report.scenario_name,
                report.reference.threshold(),
                report.reference.variant
            );
            for s in &report.stats {
                println!(
                    "  {:<20} median final {:>12.3}  median time-to-3sigma {:>9.4}s ({} it)",
                    s.variant.name(),
                    s.median_final(),
                    s.median_time_to_3sigma(),
                    s.median_iterations_to_3sigma()
                );
            }
            println!("wrote {}", out.display());
        }
        Command::Fixtures { list, write } => {
            if list || write.is_none() {
                for name in fixture_names() {
                    let fx = fixture(name).expect("known fixture");
                    println!("{name}\tA_r {:.3}", fx.target_area_ratio);
                }
            }
            if let Some(dir) = write {
                for p in write_fixtures(&dir)? {
                    println!("wrote {}", p.display());
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
