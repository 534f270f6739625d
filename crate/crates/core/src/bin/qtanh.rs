fn main() {
    std::process::exit(qtanh_core::cli::run(std::env::args_os()));
}
