fn main() {
    std::process::exit(apollonius::cli::run(std::env::args_os()));
}
