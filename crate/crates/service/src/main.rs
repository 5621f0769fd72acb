use clap::Parser;
use nadea_service::cli::{self, Cli, Command};

fn main() {
    let args: Vec<_> = std::env::args_os().collect();
    let code = match Cli::try_parse_from(&args) {
        Ok(Cli { command: Command::Serve { config, bind, data_dir } }) => {
            tracing_subscriber::fmt().with_writer(std::io::stderr).init();
            let runtime = tokio::runtime::Runtime::new().expect("tokio runtime");
            runtime.block_on(cli::serve(config, bind, data_dir))
        }
        _ => cli::run(args, &mut std::io::stdout(), &mut std::io::stderr()),
    };
    std::process::exit(code);
}
