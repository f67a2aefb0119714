fn main() {
    std::process::exit(streakbench::run(std::env::args_os()));
}
