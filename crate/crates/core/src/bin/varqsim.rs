fn main() {
    std::process::exit(varqsim::cli::run(std::env::args_os()));
}
