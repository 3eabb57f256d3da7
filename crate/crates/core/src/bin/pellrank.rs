fn main() {
    std::process::exit(pellrank::cli::run(std::env::args_os()));
}
