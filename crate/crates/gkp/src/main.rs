fn main() {
    std::process::exit(gkp::run_cli(std::env::args_os()));
}
