use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use micromap_core::ingest::DataRoot;
use micromap_core::model::PlotSpec;
use micromap_core::stats::{location_quotient, LqInput};
use micromap_service::{render_request, ApiError, RenderRequest, ServiceConfig};

#[derive(Parser, Debug)]
#[command(name = "micromap", version, about = "Linked micromap renderer")]
struct Cli {
    /// Data root holding datasets/, atlases/ and figures/.
    #[arg(long, global = true, value_name = "DIR")]
    root: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render a spec to SVG.
    Render(RenderArgs),
    /// Check a spec against a dataset and atlas without rendering.
    Validate(Target),
    /// Location quotient of one area and category.
    Lq(LqArgs),
    /// List the datasets under the data root.
    Datasets {
        /// Print the summaries as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Args, Debug)]
struct Target {
    /// Plot spec JSON file.
    #[arg(long, required_unless_present = "figure")]
    spec: Option<PathBuf>,
    /// Dataset id.
    #[arg(long, required_unless_present = "figure")]
    dataset: Option<String>,
    /// Atlas id; defaults to the dataset's atlas.
    #[arg(long)]
    atlas: Option<String>,
    /// Bundled figure recipe id from figures/index.json.
    #[arg(long, conflicts_with_all = ["spec", "dataset"])]
    figure: Option<String>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    target: Target,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
    /// Also write the layout report; without a path it goes next to the SVG.
    #[arg(long, num_args = 0..=1, value_name = "PATH")]
    report: Option<Option<PathBuf>>,
}

#[derive(Args, Debug)]
struct LqArgs {
    /// Area employment in the category.
    #[arg(long, allow_hyphen_values = true)]
    area_cat: Option<f64>,
    /// Area total employment.
    #[arg(long, allow_hyphen_values = true)]
    area_total: Option<f64>,
    /// National employment in the category.
    #[arg(long, allow_hyphen_values = true)]
    nat_cat: Option<f64>,
    /// National total employment.
    #[arg(long, allow_hyphen_values = true)]
    nat_total: Option<f64>,
    /// The same four numbers in order, as an alternative to the flags.
    #[arg(
        num_args = 4,
        value_names = ["AREA_CAT", "AREA_TOTAL", "NAT_CAT", "NAT_TOTAL"],
        allow_negative_numbers = true, conflicts_with_all = ["area_cat", "area_total", "nat_cat", "nat_total"])]
    values: Vec<f64>,
}

#[derive(Args, Debug)]
struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: IpAddr,
    /// Browser origin allowed to call the API; repeatable, `*` for any.
    #[arg(long = "cors-origin", value_name = "ORIGIN")]
    cors_origins: Vec<String>,
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl From<ApiError> for Failure {
    fn from(e: ApiError) -> Failure {
        match e {
            ApiError::Invalid(report) => Failure::Invalid(report.to_string()),
            ApiError::BadRequest(m) | ApiError::NotFound(m) | ApiError::Internal(m) => {
                Failure::Io(m)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let root = DataRoot::resolve(cli.root.as_deref());
    match run(cli.command, root) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Invalid(m) | Failure::Io(m)) = &f;
            eprintln!("{m}");
            ExitCode::from(f.code())
        }
    }
}

fn run(command: Command, root: DataRoot) -> Result<(), Failure> {
    match command {
        Command::Render(args) => render(&root, args),
        Command::Validate(target) => {
            let req = request(&root, target)?;
            render_request(&root, &req)?;
            println!("ok");
            Ok(())
        }
        Command::Lq(args) => lq(args),
        Command::Datasets { json } => datasets(&root, json),
        Command::Serve(args) => serve(root, args),
    }
}

#[derive(Deserialize)]
struct Recipe {
    id: String,
    spec: String,
    dataset: String,
    atlas: String,
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn request(root: &DataRoot, target: Target) -> Result<RenderRequest, Failure> {
    let (spec_path, dataset, atlas) = match target.figure {
        Some(id) => {
            let dir = root.path().join("figures");
            let index = dir.join("index.json");
            let recipes: Vec<Recipe> = serde_json::from_str(&read(&index)?)
                .map_err(|e| Failure::Io(format!("{}: {e}", index.display())))?;
            let r = recipes
                .into_iter()
                .find(|r| r.id == id)
                .ok_or_else(|| Failure::Io(format!("unknown figure {id}")))?;
            (dir.join(r.spec), r.dataset, target.atlas.or(Some(r.atlas)))
        }
        None => (
            target.spec.expect("clap requires --spec"),
            target.dataset.expect("clap requires --dataset"),
            target.atlas,
        ),
    };
    let spec = PlotSpec::from_json(&read(&spec_path)?)
        .map_err(|e| Failure::Io(format!("{}: {e}", spec_path.display())))?;
    Ok(RenderRequest {
        dataset,
        atlas,
        spec,
    })
}

/// Writes through a temporary file in the target directory so readers
/// never see a partial file.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut builder = tempfile::Builder::new();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        builder.permissions(std::fs::Permissions::from_mode(0o644));
    }
    let mut tmp = builder.tempfile_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn render(root: &DataRoot, args: RenderArgs) -> Result<(), Failure> {
    let req = request(root, args.target)?;
    let fig = render_request(root, &req)?;
    write_atomic(&args.out, &fig.svg)?;
    if let Some(report) = args.report {
        let path = report.unwrap_or_else(|| args.out.with_extension("report.json"));
        write_atomic(&path, &fig.report.to_json())?;
    }
    for w in &fig.report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn lq(args: LqArgs) -> Result<(), Failure> {
    let [a, b, c, d] = match args.values[..] {
        [a, b, c, d] => [a, b, c, d],
        _ => {
            let named = [args.area_cat, args.area_total, args.nat_cat, args.nat_total];
            let names = ["--area-cat", "--area-total", "--nat-cat", "--nat-total"];
            let missing: Vec<&str> = named
                .iter()
                .zip(names)
                .filter(|(v, _)| v.is_none())
                .map(|(_, n)| n)
                .collect();
            if !missing.is_empty() {
                return Err(Failure::Io(format!("missing {}", missing.join(", "))));
            }
            named.map(Option::unwrap)
        }
    };
    let q = location_quotient(LqInput {
        emp_cat_area: a,
        emp_total_area: b,
        emp_cat_nat: c,
        emp_total_nat: d,
    })
    .map_err(|e| Failure::Invalid(e.to_string()))?;
    println!("{q}");
    Ok(())
}

fn datasets(root: &DataRoot, json: bool) -> Result<(), Failure> {
    let list = root.dataset_summaries();
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&list).expect("summaries serialize")
        );
        return Ok(());
    }
    for d in &list {
        match &d.error {
            Some(e) => println!("{}\terror: {e}", d.id),
            None => println!("{}\t{}\t{} rows\t{}", d.id, d.atlas, d.rows, d.title),
        }
    }
    Ok(())
}

fn serve(root: DataRoot, args: ServeArgs) -> Result<(), Failure> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let config = ServiceConfig {
        root: root.path().to_path_buf(),
        cors_origins: args.cors_origins,
    };
    let addr = SocketAddr::new(args.host, args.port);
    let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    rt.block_on(micromap_service::serve(addr, config))
        .map_err(|e| Failure::Io(format!("{addr}: {e}")))
}
