fn main() {
    std::process::exit(duofreyd::cli::main());
}
