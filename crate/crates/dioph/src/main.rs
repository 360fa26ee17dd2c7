fn main() {
    std::process::exit(dioph::cli::main());
}
