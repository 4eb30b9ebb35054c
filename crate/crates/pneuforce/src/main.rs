fn main() {
    std::process::exit(pneuforce::cli::run());
}
