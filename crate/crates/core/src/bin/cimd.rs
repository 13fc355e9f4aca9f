fn main() {
    std::process::exit(cimd::cli::run(std::env::args_os()));
}
