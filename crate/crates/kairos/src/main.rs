fn main() {
    std::process::exit(kairos::cli::run(std::env::args_os().collect()));
}
