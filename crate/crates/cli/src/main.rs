fn main() {
    std::process::exit(lyness_cli::app::run(std::env::args_os()));
}
