fn main() {
    std::process::exit(ck_holmgren::cli::main_with_args(std::env::args_os()));
}
