fn main() {
    std::process::exit(dephasing_cli::run(std::env::args_os()));
}
