fn main() {
    std::process::exit(measlescast::cli::main());
}
