fn main() {
    std::process::exit(levelstat::cli::run(std::env::args_os()));
}
