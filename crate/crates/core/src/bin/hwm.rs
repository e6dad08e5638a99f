fn main() {
    std::process::exit(hwm::cli::run(std::env::args_os()));
}
