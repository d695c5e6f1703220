use std::io::{IsTerminal, Write};

fn main() {
    let eps = std::env::var(toepnorm::cli::EPS_ENV).ok();
    let tty = std::io::stderr().is_terminal();
    let out = toepnorm::cli::run(
        std::env::args_os(),
        &mut std::io::stdin().lock(),
        eps.as_deref(),
        tty,
    );
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    std::process::exit(out.code);
}
