fn main() {
    std::process::exit(expgap::cli::run(std::env::args_os()));
}
