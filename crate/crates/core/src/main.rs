fn main() {
    std::process::exit(rectkernel::cli::run(std::env::args_os()));
}
