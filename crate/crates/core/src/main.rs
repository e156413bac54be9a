fn main() {
    std::process::exit(batchlab::cli::run(std::env::args_os()));
}
