use std::path::Path;
use std::process::ExitCode;

use fnls_cli::runner;

const USAGE: &str = "\
fnls — coupled fractional NLS laboratory

USAGE:
    fnls <command> <config-file> <output-dir>

COMMANDS:
    groundstate    minimize the coupled energy on the mass spheres
    scalar         single-component constrained ground state
    evolve         split-step time evolution of a stored state
    stability      perturb-and-evolve orbital stability experiment
    scan-subadd    subadditivity margins over a mass grid
    check-gn       empirical Gagliardo-Nirenberg constants on a random corpus
    concentration  concentration function of a stored state
    verify-ops     fractional-operator oracle suite

Config files are flat `key = value` text; see README.md for the key set.
Exit codes: 0 success, 2 unknown command, 3 config error, 4 numerical failure.
The FRAC_NLS_WORKERS environment variable overrides the worker count.
";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.len() == 2 && (args[1] == "help" || args[1] == "--help" || args[1] == "-h") {
        print!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    if args.len() != 4 {
        eprint!("{USAGE}");
        return ExitCode::from(2);
    }
    let code = runner::run(&args[1], Path::new(&args[2]), Path::new(&args[3]));
    ExitCode::from(code as u8)
}
