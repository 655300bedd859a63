fn main() {
    std::process::exit(freqdev::cli::main_with_args(std::env::args_os()));
}
