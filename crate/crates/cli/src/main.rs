use clap::Parser;
use pslet_cli::commands::{cmd_scan, cmd_solve, cmd_table, validate_scan};
use pslet_cli::{exit_code_for, Cli, Command};

// Exit codes: 0 success, 2 validation error, 3 numerical failure,
// 4 binding tolerance failure in a table reproduction.
fn main() {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Solve(spec) => match cmd_solve(spec) {
            Ok(out) => {
                println!("{out}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code_for(&e)
            }
        },
        Command::Table(args) => match cmd_table(args) {
            Ok((out, all_ok)) => {
                println!("{out}");
                if all_ok {
                    0
                } else {
                    4
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code_for(&e)
            }
        },
        Command::Scan(args) => match validate_scan(args).and_then(|()| cmd_scan(args)) {
            Ok(out) => {
                print!("{out}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code_for(&e)
            }
        },
    };
    std::process::exit(code);
}
