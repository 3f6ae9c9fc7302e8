fn main() {
    env_logger::init();
    std::process::exit(wdmt::cli::run(std::env::args_os()));
}
