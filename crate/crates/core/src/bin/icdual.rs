fn main() {
    std::process::exit(icdual::cli::main_from_args(std::env::args_os()));
}
