fn main() {
    std::process::exit(sonine::cli::main_exit_code());
}
