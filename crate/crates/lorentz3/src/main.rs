fn main() {
    std::process::exit(lorentz3::cli::run(std::env::args_os()));
}
