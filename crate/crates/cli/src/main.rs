fn main() {
    std::process::exit(casimir_cli::main_with_args(std::env::args_os()));
}
