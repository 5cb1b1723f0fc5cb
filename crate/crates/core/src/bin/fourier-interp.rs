fn main() {
    std::process::exit(fourier_interp::cli::run_from(std::env::args_os()));
}
