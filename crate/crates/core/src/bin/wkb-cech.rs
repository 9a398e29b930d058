fn main() {
    std::process::exit(wkb_cech::cli::run());
}
