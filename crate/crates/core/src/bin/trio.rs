fn main() {
    std::process::exit(trio_formation::cli::run(std::env::args_os()));
}
