fn main() {
    std::process::exit(blockmatch::cli::run(std::env::args_os()));
}
