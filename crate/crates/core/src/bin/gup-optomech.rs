fn main() {
    std::process::exit(gup_optomech::cli::main_with_args(std::env::args_os()));
}
