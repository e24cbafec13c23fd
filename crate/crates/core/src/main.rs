use std::io;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let seed = std::env::var(fqm::cli::SEED_ENV).ok();
    let code = fqm::cli::main_with(
        std::env::args_os(),
        seed,
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
