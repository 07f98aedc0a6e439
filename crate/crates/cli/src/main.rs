fn main() {
    let outcome = bigalois_cli::run_args(std::env::args_os());
    if outcome.code == bigalois_cli::EXIT_INPUT {
        eprint!("{}", outcome.output);
    } else {
        print!("{}", outcome.output);
    }
    std::process::exit(outcome.code);
}
