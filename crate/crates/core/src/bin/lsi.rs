fn main() {
    std::process::exit(lsi_core::cli::run());
}
