fn main() {
    std::process::exit(dunkl_moment::cli::run(std::env::args_os()));
}
