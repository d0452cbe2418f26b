fn main() {
    std::process::exit(zmexp::cli::run(std::env::args_os()));
}
