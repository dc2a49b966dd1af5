fn main() {
    std::process::exit(dfsl::cli::run(std::env::args_os()));
}
