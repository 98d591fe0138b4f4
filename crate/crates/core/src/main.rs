fn main() {
    std::process::exit(stabmix::cli::run(std::env::args_os()));
}
