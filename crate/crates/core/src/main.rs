fn main() {
    std::process::exit(tvdepth::cli::run(std::env::args_os()));
}
