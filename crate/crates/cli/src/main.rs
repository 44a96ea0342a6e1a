fn main() {
    let outcome = primegap_cli::run(std::env::args_os());
    std::process::exit(outcome.exit_code);
}
