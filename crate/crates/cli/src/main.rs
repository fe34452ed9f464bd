fn main() {
    std::process::exit(triea_cli::main_with_args(std::env::args_os()));
}
