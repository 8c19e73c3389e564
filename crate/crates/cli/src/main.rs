fn main() {
    std::process::exit(lsu_cli::run_from_args(std::env::args_os()));
}
