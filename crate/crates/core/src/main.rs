fn main() {
    std::process::exit(heavy::cli::run(std::env::args_os()));
}
