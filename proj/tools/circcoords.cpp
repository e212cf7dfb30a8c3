// circcoords: generate datasets, compute persistence diagrams and circular
// coordinates, evaluate them against ground truth, and plot them.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "circcoords/circcoords.hpp"

namespace fs = std::filesystem;
using namespace circcoords;

namespace {

struct GenerateArgs {
  std::string dataset;
  std::size_t n = 0;
  std::uint64_t seed = 1;
  double mean = std::numbers::pi;
  std::optional<double> stddev;
  std::optional<double> noise;
  double sigma = 0.4 * std::numbers::pi;
  bool no_rotation = false;
  std::string output;
};

struct DiagramArgs {
  std::string input;
  std::optional<double> threshold;
  std::uint32_t prime = 47;
};

struct CoordsArgs {
  DiagramArgs diagram;
  std::size_t pair = 0;
  std::string method = "l2";
  std::optional<double> epsilon;
  std::optional<double> t;
  double tol = 1e-10;
  std::size_t max_iter = 0;
  double p = 4.0;
  double eta = 0.005;
  double tau = 1e-4;
  std::string schedule = "2..50";
  double temperature = 1.0;
  std::size_t epochs = 200000;
  std::string init = "l2";
  bool dump_weights = false;
  std::string output;
};

struct EvalArgs {
  std::string coords;
  std::string input;
  std::size_t truth_col = 0;
  std::optional<double> epsilon;
  std::optional<std::size_t> restrict_col;
  double restrict_value = 0.0;
  std::string output;
};

struct PlotArgs {
  std::string coords;
  std::string input;
  std::string output;
};

fs::path out_path(const std::string& out_dir, const std::string& explicit_path, const std::string& default_name) {
  if (!explicit_path.empty()) return explicit_path;
  fs::create_directories(out_dir);
  return fs::path(out_dir) / default_name;
}

PSchedule parse_schedule(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw std::invalid_argument("schedule must look like START..END, got '" + s + "'");
  PSchedule out;
  try {
    out.start = std::stoi(s.substr(0, dots));
    out.end = std::stoi(s.substr(dots + 2));
  } catch (const std::exception&) {
    throw std::invalid_argument("schedule must look like START..END, got '" + s + "'");
  }
  return out;
}

std::vector<PersistencePair> load_diagram(const DistanceMatrix& d, const DiagramArgs& a) {
  if (!is_prime(a.prime)) throw NotPrimeError(a.prime);
  return persistence_diagram(d, a.threshold ? *a.threshold : enclosing_radius(d), a.prime);
}

void run_generate(const GenerateArgs& a, const std::string& out_dir) {
  PointCloud cloud;
  if (a.dataset == "circle") {
    SamplingParams p;
    p.mean = a.mean;
    if (a.stddev) p.stddev = *a.stddev;
    if (a.noise) p.noise_std = *a.noise;
    cloud = gen_noisy_circle(a.n ? a.n : 300, p, a.seed);
  } else if (a.dataset == "trefoil") {
    SamplingParams p;
    p.mean = a.mean;
    p.noise_std = 0.04;
    if (a.stddev) p.stddev = *a.stddev;
    if (a.noise) p.noise_std = *a.noise;
    cloud = gen_trefoil(a.n ? a.n : 900, p, a.seed);
  } else if (a.dataset == "conjoined") {
    ConjoinedParams p;
    if (a.stddev) p.stddev = *a.stddev;
    if (a.noise) p.noise_std = *a.noise;
    p.random_rotation = !a.no_rotation;
    cloud = gen_conjoined_circles(a.n ? a.n : 300, p, a.seed);
  } else {
    cloud = gen_torus(a.n ? a.n : 800, a.sigma, a.seed);
  }
  const auto path = out_path(out_dir, a.output, a.dataset + ".csv");
  io::write_file(path.string(), io::cloud_csv(cloud));
  std::cout << path.string() << '\n';
}

void run_diagram(const DiagramArgs& a, const std::string& out_dir) {
  const auto cloud = io::read_cloud(a.input);
  const auto d = pairwise_distances(cloud);
  const auto pairs = load_diagram(d, a);
  fs::create_directories(out_dir);
  io::write_file((fs::path(out_dir) / "diagram.csv").string(), io::diagram_csv(pairs));
  for (std::size_t k = 0; k < pairs.size(); ++k)
    io::write_file((fs::path(out_dir) / ("cocycle_" + std::to_string(k) + ".csv")).string(), io::cocycle_csv(pairs[k]));
  std::cout << pairs.size() << " pairs written to " << out_dir << '\n';
}

void run_coords(const CoordsArgs& a, const std::string& out_dir) {
  MethodConfig cfg;
  cfg.method = parse_method(a.method);
  cfg.epsilon = a.epsilon;
  cfg.t = a.t;
  cfg.solver.tol = a.tol;
  cfg.solver.max_iter = a.max_iter;
  cfg.lp.p = a.p;
  cfg.lp.eta = a.eta;
  cfg.lp.tau = a.tau;
  cfg.lp.temperature_start = a.temperature;
  cfg.lp.max_epochs = a.epochs;
  if (a.init == "zeros") cfg.lp.init = InitKind::Zeros;
  else if (a.init == "l2") cfg.lp.init = InitKind::L2Solution;
  else throw std::invalid_argument("init must be 'zeros' or 'l2', got '" + a.init + "'");
  if (cfg.method == Method::LinfSchedule) cfg.lp.schedule = parse_schedule(a.schedule);
  cfg.lp.validate();

  const auto cloud = io::read_cloud(a.diagram.input);
  const auto d = pairwise_distances(cloud);
  const auto pairs = load_diagram(d, a.diagram);
  if (a.pair >= pairs.size())
    throw std::invalid_argument("pair " + std::to_string(a.pair) + " out of range; diagram has " +
                                std::to_string(pairs.size()) + " pairs");
  const auto& pair = pairs[a.pair];
  const auto result = circular_coordinates(d, pair, cfg);

  const auto path = out_path(out_dir, a.output, "coords.csv");
  io::write_file(path.string(), io::coords_csv(result.f, result.map));
  nlohmann::ordered_json meta;
  meta["method"] = result.map.source;
  meta["pair_id"] = a.pair;
  meta["birth"] = pair.birth;
  meta["death"] = pair.death;
  meta["epsilon"] = result.epsilon;
  meta["n_vertices"] = result.complex.n_vertices();
  meta["n_edges"] = result.complex.n_edges();
  meta["n_triangles"] = result.complex.n_triangles();
  if (result.weights && result.weights->kind == WeightKind::Wdgl) meta["t"] = result.weights->t;
  if (result.trace) meta["epochs"] = result.trace->size();
  auto sidecar = path;
  io::write_file(sidecar.replace_extension(".json").string(), meta.dump(2) + "\n");

  const auto dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  if (result.trace) io::write_file((dir / "trace.csv").string(), io::trace_csv(*result.trace));
  if (a.dump_weights && result.weights)
    io::write_file((dir / "weights.csv").string(), io::weights_csv(result.complex, *result.weights));
  std::cout << path.string() << '\n';
}

void run_eval(const EvalArgs& a, const std::string& out_dir) {
  const auto table = io::parse_coords_csv(io::read_file(a.coords));
  const auto cloud = io::read_cloud(a.input);
  if (cloud.size() != table.map.size())
    throw std::invalid_argument("coords has " + std::to_string(table.map.size()) + " vertices but the cloud has " +
                                std::to_string(cloud.size()) + " points");
  if (a.truth_col >= cloud.truth_dims) throw std::invalid_argument("input has no truth column " + std::to_string(a.truth_col));

  auto map = table.map;
  std::optional<double> eps = a.epsilon;
  const auto sidecar = fs::path(a.coords).replace_extension(".json");
  if (fs::exists(sidecar)) {
    const auto meta = nlohmann::json::parse(io::read_file(sidecar.string()));
    if (!eps) eps = meta.at("epsilon").get<double>();
    map.source = meta.at("method").get<std::string>();
  }
  if (!eps) throw std::invalid_argument("no --epsilon given and no " + sidecar.string());

  const auto truth = cloud.truth_column(a.truth_col);
  std::vector<char> allowed;
  std::vector<std::uint32_t> order;
  if (a.restrict_col) {
    if (*a.restrict_col >= cloud.truth_dims)
      throw std::invalid_argument("input has no truth column " + std::to_string(*a.restrict_col));
    allowed.resize(cloud.size());
    for (std::size_t v = 0; v < cloud.size(); ++v) allowed[v] = cloud.truth_at(v, *a.restrict_col) == a.restrict_value;
  }
  for (auto v : order_by_angle(truth))
    if (allowed.empty() || allowed[v]) order.push_back(v);
  if (order.empty()) throw std::invalid_argument("no points match the restriction");

  const auto complex = build_rips(pairwise_distances(cloud), *eps, 1);
  const auto loop = loop_through(complex, order, allowed);
  std::vector<double> theta(order.size()), sub_truth(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    theta[k] = map.theta[order[k]];
    sub_truth[k] = truth[order[k]];
  }
  CircularMap sub{theta, std::vector<std::uint32_t>(order.size(), 0), map.source};
  const auto report = evaluate(sub, sub_truth, winding_number(map, complex, loop));

  const auto path = out_path(out_dir, a.output, "report.json");
  auto j = io::report_json(report);
  j["epsilon"] = *eps;
  io::write_file(path.string(), j.dump(2) + "\n");
  const auto dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  io::write_file((dir / "scatter.csv").string(), io::scatter_csv(report));
  std::cout << "winding " << report.winding << " linearity_score " << io::format_double(report.linearity_score)
            << '\n';
}

void run_plot(const PlotArgs& a, const std::string& out_dir) {
  const auto table = io::parse_coords_csv(io::read_file(a.coords));
  const auto cloud = io::read_cloud(a.input);
  if (cloud.size() != table.map.size())
    throw std::invalid_argument("coords has " + std::to_string(table.map.size()) + " vertices but the cloud has " +
                                std::to_string(cloud.size()) + " points");
  const auto view = project_2d(cloud);
  SvgOptions opt;
  opt.title = fs::path(a.coords).filename().string() + (view.pca ? " (PCA)" : "");
  const auto path = out_path(out_dir, a.output, "plot.svg");
  io::write_file(path.string(), scatter_svg(view.xy, table.map.theta, opt));
  std::cout << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circular coordinates from point clouds via persistent cohomology"};
  app.set_config("--config", "", "TOML file with option values; command-line flags take precedence");
  app.require_subcommand(1);
  std::string out_dir = ".";
  app.add_option("--out-dir", out_dir, "Directory for output files")->envname("CIRCCOORDS_OUTDIR");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  generate->add_option("dataset", gen.dataset, "circle | trefoil | conjoined | torus")
      ->required()
      ->check(CLI::IsMember({"circle", "trefoil", "conjoined", "torus"}));
  generate->add_option("--n", gen.n, "Number of points (per circle for conjoined)");
  generate->add_option("--seed", gen.seed, "PRNG seed");
  generate->add_option("--mean", gen.mean, "Mean sampling angle (circle, trefoil)");
  generate->add_option("--std", gen.stddev, "Sampling angle standard deviation");
  generate->add_option("--noise", gen.noise, "Ambient Gaussian noise standard deviation");
  generate->add_option("--sigma", gen.sigma, "Torus mixture standard deviation");
  generate->add_flag("--no-rotation", gen.no_rotation, "Conjoined circles without random rotation");
  generate->add_option("-o,--output", gen.output, "Output CSV path");

  DiagramArgs dia;
  auto add_diagram_opts = [](CLI::App* cmd, DiagramArgs& a) {
    cmd->add_option("input", a.input, "Point cloud CSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--threshold", a.threshold, "Largest filtration scale (default: enclosing radius)");
    cmd->add_option("--prime", a.prime, "Coefficient field Z_p");
  };
  auto* diagram = app.add_subcommand("diagram", "Degree-1 persistence diagram and representative cocycles");
  add_diagram_opts(diagram, dia);

  CoordsArgs crd;
  auto* coords = app.add_subcommand("coords", "Circular coordinate for one persistence class");
  add_diagram_opts(coords, crd.diagram);
  coords->add_option("--pair", crd.pair, "Class index in the diagram, longest-lived first");
  coords->add_option("--method", crd.method,
                     "l2 | wdgl | invdegsum | invsqrtdegprod | lp | linf-direct | linf-schedule | linf-softmax");
  coords->add_option("--epsilon", crd.epsilon, "Complex scale (default: midpoint of the class interval)");
  coords->add_option("--t", crd.t, "WDGL kernel bandwidth (default: 0.2 x mean edge length)");
  coords->add_option("--tol", crd.tol, "Relative residual tolerance of the harmonic solve");
  coords->add_option("--max-iter", crd.max_iter, "Iteration cap of the harmonic solve (0: 10 x vertices)");
  coords->add_option("--p", crd.p, "Exponent for method lp");
  coords->add_option("--eta", crd.eta, "Learning rate");
  coords->add_option("--tau", crd.tau, "Convergence threshold on successive losses");
  coords->add_option("--schedule", crd.schedule, "p range for linf-schedule, START..END");
  coords->add_option("--temperature", crd.temperature, "Starting temperature for linf-softmax");
  coords->add_option("--epochs", crd.epochs, "Epoch budget for descent methods");
  coords->add_option("--init", crd.init, "Descent initialization: zeros | l2");
  coords->add_flag("--dump-weights", crd.dump_weights, "Also write the edge weights as weights.csv");
  coords->add_option("-o,--output", crd.output, "Output CSV path");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Winding number and linearity score against ground truth");
  eval->add_option("coords", ev.coords, "Coordinates CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("input", ev.input, "Point cloud CSV with truth columns")->required()->check(CLI::ExistingFile);
  eval->add_option("--truth-col", ev.truth_col, "Truth column holding the reference angle");
  eval->add_option("--epsilon", ev.epsilon, "Complex scale for the winding loop (default: from the coords sidecar)");
  eval->add_option("--restrict-col", ev.restrict_col, "Only use points whose truth column equals --restrict-value");
  eval->add_option("--restrict-value", ev.restrict_value, "Value for --restrict-col");
  eval->add_option("-o,--output", ev.output, "Output JSON path");

  PlotArgs pl;
  auto* plot = app.add_subcommand("plot", "SVG scatter colored by the circular coordinate");
  plot->add_option("coords", pl.coords, "Coordinates CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("input", pl.input, "Point cloud CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--output", pl.output, "Output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*generate) run_generate(gen, out_dir);
    else if (*diagram) run_diagram(dia, out_dir);
    else if (*coords) run_coords(crd, out_dir);
    else if (*eval) run_eval(ev, out_dir);
    else if (*plot) run_plot(pl, out_dir);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    std::cerr << "error: " << msg << '\n';
    return 1;
  }
  return 0;
}
