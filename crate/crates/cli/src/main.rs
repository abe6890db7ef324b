fn main() {
    std::process::exit(polyharm_cli::run(std::env::args_os()));
}
