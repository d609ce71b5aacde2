fn main() {
    std::process::exit(discmax::cli::run(std::env::args_os()));
}
