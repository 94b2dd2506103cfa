fn main() {
    std::process::exit(herdq_cli::run(std::env::args().collect()));
}
