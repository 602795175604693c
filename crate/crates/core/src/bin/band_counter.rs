fn main() {
    std::process::exit(band_counter::cli::run());
}
