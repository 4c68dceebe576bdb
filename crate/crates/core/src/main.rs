fn main() {
    std::process::exit(fluxmag::cli::main_with_args(std::env::args_os()));
}
