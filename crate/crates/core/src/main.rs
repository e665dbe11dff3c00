use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bept::io::read_model;
use bept::pipeline::{Config, OutputFormat, Pipeline, Stage, LEXICON_ENV};
use bept::Error;

#[derive(Parser)]
#[command(name = "bept", version, about = "Translate Petri-net process models into text")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Md,
    Json,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Rpst,
    Cfp,
    Segments,
    Paths,
    Rdt,
}

#[derive(Subcommand)]
enum Command {
    /// Generate text for a model (.pnet or .pnml).
    Translate {
        input: PathBuf,
        /// Directory for the generated files; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 75)]
        max_paragraph_words: usize,
        #[arg(long, env = LEXICON_ENV)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        templates: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        #[arg(long)]
        default_role: Option<String>,
        /// Leave out dead transitions and deadlocks.
        #[arg(long)]
        no_diagnosis: bool,
        #[arg(long, default_value_t = bept::petri::DEFAULT_STATE_BOUND)]
        state_bound: usize,
        #[arg(long, default_value_t = bept::unfold::DEFAULT_EVENT_BOUND)]
        event_bound: usize,
        /// Print warnings, neglected activities and timings to stderr.
        #[arg(long)]
        report: bool,
    },
    /// Dump an intermediate result.
    Analyze {
        input: PathBuf,
        #[arg(long, value_enum)]
        stage: StageArg,
        /// DOT instead of JSON (prefix and paths only).
        #[arg(long)]
        dot: bool,
    },
    /// Score a generated document against its model.
    Eval {
        model: PathBuf,
        generated: PathBuf,
        #[arg(long)]
        reproduced: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> bept::Result<()> {
    match cli.command {
        Command::Translate {
            input,
            out,
            max_paragraph_words,
            lexicon,
            templates,
            format,
            default_role,
            no_diagnosis,
            state_bound,
            event_bound,
            report,
        } => {
            let config = Config {
                max_paragraph_words,
                lexicon_path: lexicon,
                template_path: templates,
                output_format: match format {
                    Format::Md => OutputFormat::Md,
                    Format::Json => OutputFormat::Json,
                    Format::Both => OutputFormat::Both,
                },
                include_diagnosis: !no_diagnosis,
                default_role,
                state_bound,
                event_bound,
                ..Config::default()
            };
            let pipeline = Pipeline::new(config)?;
            let t = pipeline.translate_file(&input)?;
            let json = t.document.to_json()?;
            let fmt = pipeline.config.output_format;
            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
                    if fmt != OutputFormat::Json {
                        std::fs::write(dir.join(format!("{stem}.md")), &t.document.markdown)?;
                    }
                    if fmt != OutputFormat::Md {
                        std::fs::write(dir.join(format!("{stem}.json")), &json)?;
                    }
                }
                None => {
                    if fmt != OutputFormat::Json {
                        print!("{}", t.document.markdown);
                    }
                    if fmt != OutputFormat::Md {
                        print!("{json}");
                    }
                }
            }
            if report {
                eprintln!("{}", serde_json::to_string_pretty(&t.report)?);
            }
        }
        Command::Analyze { input, stage, dot } => {
            let pipeline = Pipeline::new(Config::default())?;
            let model = read_model(&input)?;
            let stage = match stage {
                StageArg::Rpst => Stage::Rpst,
                StageArg::Cfp => Stage::Cfp,
                StageArg::Segments => Stage::Segments,
                StageArg::Paths => Stage::Paths,
                StageArg::Rdt => Stage::Rdt,
            };
            println!("{}", pipeline.analyze(&model, stage, dot)?);
        }
        Command::Eval { model, generated, reproduced } => {
            let pipeline = Pipeline::new(Config::default())?;
            let model = read_model(&model)?;
            let generated = read_text(&generated)?;
            let reproduced = reproduced.as_deref().map(read_model).transpose()?;
            let report = pipeline.eval(&model, &generated, reproduced.as_ref())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn read_text(path: &Path) -> bept::Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            if is_input(&e) {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn is_input(e: &Error) -> bool {
    e.is_input_error()
}
