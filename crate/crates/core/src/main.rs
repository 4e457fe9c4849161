fn main() {
    std::process::exit(mabody::cli::run(std::env::args_os()));
}
