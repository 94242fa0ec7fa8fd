fn main() {
    std::process::exit(bakerlab::cli::main_entry());
}
