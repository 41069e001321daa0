fn main() {
    std::process::exit(qpt_geom::cli::run(std::env::args_os()));
}
