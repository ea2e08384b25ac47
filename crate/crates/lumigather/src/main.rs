fn main() {
    std::process::exit(lumigather::cli::main_entry());
}
