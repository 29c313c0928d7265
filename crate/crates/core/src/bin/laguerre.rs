fn main() {
    std::process::exit(laguerre::cli::main_with_args(std::env::args_os()));
}
