fn main() {
    std::process::exit(col_cli::run(std::env::args_os()));
}
