fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(hermcount_cli::run_command(args));
}
