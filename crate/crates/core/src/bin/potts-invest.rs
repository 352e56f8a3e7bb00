fn main() {
    std::process::exit(potts_invest::cli::main_with_args(std::env::args_os()));
}
