fn main() {
    std::process::exit(corridor_channel::cli::run());
}
