fn main() {
    std::process::exit(iqp_tools::cli::run(std::env::args()));
}
