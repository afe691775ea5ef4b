fn main() {
    std::process::exit(cartankit::cli::main());
}
