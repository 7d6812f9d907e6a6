fn main() {
    polyproj::cli::init_logging();
    std::process::exit(polyproj::cli::main_with_args(std::env::args_os()));
}
