fn main() {
    std::process::exit(leftorder::cli::run(std::env::args_os()));
}
