fn main() {
    std::process::exit(floquet_circuits::cli::run());
}
