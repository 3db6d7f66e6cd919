fn main() {
    std::process::exit(netform::cli::run());
}
