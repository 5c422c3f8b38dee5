fn main() {
    std::process::exit(scanstat::cli::run());
}
