fn main() {
    std::process::exit(glat::cli::main_with_args(std::env::args_os()));
}
