fn main() {
    std::process::exit(contagion_core::cli::main_with_args(std::env::args_os()));
}
