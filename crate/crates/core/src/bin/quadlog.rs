fn main() {
    std::process::exit(quadlog::cli::run(std::env::args_os()));
}
