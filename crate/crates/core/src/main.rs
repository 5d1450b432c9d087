fn main() {
    env_logger::init();
    std::process::exit(snowflake_core::cli::run(std::env::args_os()));
}
