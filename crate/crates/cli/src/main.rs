fn main() {
    std::process::exit(spreadlab_cli::run(std::env::args_os()));
}
