fn main() {
    std::process::exit(thetawh::cli::run(std::env::args().collect()));
}
