fn main() {
    std::process::exit(cstar_cli::run(std::env::args_os()));
}
