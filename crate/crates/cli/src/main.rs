fn main() {
    std::process::exit(l2p_cli::run(std::env::args_os()));
}
