fn main() {
    std::process::exit(ngtmst::cli::run(std::env::args_os()));
}
