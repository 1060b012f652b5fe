fn main() {
    std::process::exit(kspectra::run(std::env::args_os()));
}
