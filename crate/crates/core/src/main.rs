fn main() {
    std::process::exit(bhht_core::cli::main_with_args(std::env::args_os()));
}
