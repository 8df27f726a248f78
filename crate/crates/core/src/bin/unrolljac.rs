fn main() {
    std::process::exit(unrolljac::cli::main_with_args(std::env::args_os()));
}
