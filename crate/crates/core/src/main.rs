fn main() {
    std::process::exit(rhfact::cli::main_with_args(std::env::args_os()));
}
