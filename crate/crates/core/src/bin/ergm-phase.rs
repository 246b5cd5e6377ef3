fn main() {
    std::process::exit(ergm_phase::cli::main_with_args(std::env::args_os()));
}
