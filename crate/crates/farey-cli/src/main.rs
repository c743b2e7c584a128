mod cli;
mod formats;
mod render;

fn main() {
    std::process::exit(cli::run());
}
