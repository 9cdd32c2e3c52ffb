fn main() {
    std::process::exit(qcoinv::cli::run());
}
