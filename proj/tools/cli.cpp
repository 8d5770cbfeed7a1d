#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "copdyn/calendar.hpp"
#include "copdyn/copula.hpp"
#include "copdyn/errors.hpp"
#include "copdyn/format.hpp"
#include "copdyn/gaussian.hpp"
#include "copdyn/ingest.hpp"
#include "copdyn/synth.hpp"
#include "copdyn/version.hpp"

namespace copdyn::cli {

namespace fs = std::filesystem;

namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw OutputError("cannot read back '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

// Files created by one run. Unless commit() is called they are deleted on
// destruction, together with any directories the run created.
class OutputSet {
 public:
  explicit OutputSet(fs::path root) : root_(std::move(root)) {}
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;

  ~OutputSet() {
    if (committed_) return;
    std::error_code ec;
    for (auto it = files_.rbegin(); it != files_.rend(); ++it) fs::remove(root_ / *it, ec);
    for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) fs::remove(*it, ec);  // only removes if empty
  }

  void write(const fs::path& relative, const std::string& content) {
    make_dirs((root_ / relative).parent_path());
    files_.push_back(relative);
    std::ofstream out(root_ / relative, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw OutputError("failed to write '" + (root_ / relative).string() + "'");
  }

  const std::vector<fs::path>& files() const noexcept { return files_; }
  const fs::path& root() const noexcept { return root_; }
  void commit() { committed_ = true; }

 private:
  void make_dirs(const fs::path& dir) {
    std::vector<fs::path> missing;
    for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) {
      missing.push_back(p);
      if (p == p.parent_path()) break;
    }
    for (auto it = missing.rbegin(); it != missing.rend(); ++it) {
      std::error_code ec;
      if (!fs::create_directory(*it, ec) && ec) throw OutputError("cannot create directory '" + it->string() + "'");
      dirs_.push_back(*it);
    }
  }

  fs::path root_;
  std::vector<fs::path> files_;
  std::vector<fs::path> dirs_;
  bool committed_ = false;
};

const char* convention_name(UpperTailConvention c) {
  return c == UpperTailConvention::survival ? "survival" : "literal";
}

TradingCalendar load_calendar(const RunConfig& config) {
  if (config.calendar.empty()) return TradingCalendar{};
  return TradingCalendar::load(config.calendar);
}

ReturnMatrix load_returns(const RunConfig& config, const TradingCalendar& calendar, std::ostream& log) {
  std::ifstream in(config.input, std::ios::binary);
  if (!in) throw ParseError("cannot open input '" + config.input + "'");
  const PricePanel panel = load_prices(in, calendar);
  if (panel.excluded_rows > 0) {
    log << "note: " << panel.excluded_rows << " row(s) outside trading sessions were excluded\n";
  }
  return compute_returns(panel, config.dt);
}

template <class Writer>
std::string render(Writer&& writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

void warn_sparse(const CopulaGrid& grid, std::ostream& log) {
  if (grid.sparse()) {
    log << "warning: " << grid.sample_count() << " returns per series is below the grid resolution "
        << grid.resolution() << "\n";
  }
}

nlohmann::json config_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["input"] = c.input;
  j["calendar"] = c.calendar;
  j["dt_minutes"] = c.dt;
  j["grid"] = c.grid;
  j["alphas"] = c.alphas;
  j["window_days"] = c.window_days;
  j["out"] = c.out;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["upper_tail_convention"] = convention_name(c.convention);
  j["permille"] = c.permille;
  if (c.command == "synth") {
    j["kind"] = c.kind;
    j["corr"] = c.corr;
    j["assets"] = c.assets;
    j["days"] = c.days;
    j["start"] = c.start;
    if (c.switch_day) {
      j["switch_day"] = *c.switch_day;
      j["corr_after"] = c.corr_after;
    }
  }
  return j;
}

void write_manifest(OutputSet& outputs, const RunConfig& config) {
  nlohmann::json manifest;
  manifest["tool"] = "copdyn";
  manifest["version"] = kVersion;
  manifest["config"] = config_json(config);
  manifest["reproduce"] = reproduce_args(config);
  nlohmann::json inputs = nlohmann::json::array();
  for (const std::string& path : {config.input, config.calendar}) {
    if (!path.empty()) inputs.push_back({{"path", path}, {"sha256", sha256_file(path)}});
  }
  manifest["inputs"] = inputs;
  nlohmann::json files = nlohmann::json::array();
  for (const fs::path& f : outputs.files()) {
    files.push_back({{"path", f.generic_string()}, {"sha256", sha256_file(outputs.root() / f)}});
  }
  manifest["outputs"] = files;
  outputs.write("manifest.json", manifest.dump(2) + "\n");
}

SynthKind parse_kind(const std::string& kind) {
  static const std::map<std::string, SynthKind> kinds = {{"gaussian", SynthKind::gaussian},
                                                         {"independent", SynthKind::independent},
                                                         {"comonotone", SynthKind::comonotone},
                                                         {"countermonotone", SynthKind::countermonotone}};
  return kinds.at(kind);
}

void run_command(const RunConfig& config, OutputSet& outputs, std::ostream& log) {
  const TradingCalendar calendar = load_calendar(config);

  if (config.command == "synth") {
    SynthSpec spec;
    spec.kind = parse_kind(config.kind);
    spec.correlation = config.corr;
    spec.assets = config.assets;
    spec.seed = config.seed;
    spec.interval_minutes = config.dt;
    spec.calendar = calendar;
    spec.start = parse_date(config.start);
    const auto steps = static_cast<std::size_t>(calendar.session_minutes() / config.dt);
    spec.length = config.days * steps;
    std::optional<ReturnMatrix> panel;
    if (config.switch_day) {
      const std::vector<Regime> regimes = {{*config.switch_day * steps, config.corr},
                                           {(config.days - *config.switch_day) * steps, config.corr_after}};
      panel.emplace(sample_regime_panel(spec, regimes));
    } else {
      panel.emplace(sample_panel(spec));
    }
    outputs.write("prices.csv", render([&](std::ostream& os) { write_price_csv(os, *panel); }));
    return;
  }

  const ReturnMatrix returns = load_returns(config, calendar, log);

  if (config.command == "dynamics") {
    WindowOptions options;
    options.resolution = config.grid;
    options.alphas = config.alphas;
    options.convention = config.convention;
    options.threads = config.threads;
    const auto reports = run_dynamics(returns, config.window_days, options);
    for (std::size_t w = 0; w < reports.size(); ++w) {
      char name[32];
      std::snprintf(name, sizeof name, "window_%03zu.csv", w);
      warn_sparse(reports[w].grid, log);
      outputs.write(fs::path("windows") / name,
                    render([&](std::ostream& os) { write_grid_csv(os, reports[w].grid, config.permille); }));
    }
    outputs.write("relation.csv", render([&](std::ostream& os) { write_relation_csv(os, reports); }));
    return;
  }

  const CopulaGrid grid = average_pairwise_density(returns, config.grid, config.threads);
  warn_sparse(grid, log);
  if (config.command == "copula") {
    outputs.write("copula_grid.csv", render([&](std::ostream& os) { write_grid_csv(os, grid, config.permille); }));
    return;
  }

  const CorrelationMatrix corr = pearson_matrix(returns, config.threads);
  if (config.command == "diff") {
    const DifferenceGrid diff = difference_map(grid, corr, nullptr, config.threads);
    outputs.write("difference_map.csv", render([&](std::ostream& os) { write_difference_csv(os, diff); }));
  } else if (config.command == "taildep") {
    const TailCurve empirical = tail_curve(grid, config.alphas, config.convention);
    const TailCurve gaussian = gaussian_tail_curve(corr, config.alphas, config.convention, config.threads);
    outputs.write("tail_curve.csv", render([&](std::ostream& os) { write_tail_curve_csv(os, empirical, gaussian); }));
  }
}

}  // namespace

std::optional<std::string> validate(const RunConfig& c) {
  static const std::vector<std::string> commands = {"copula", "diff", "taildep", "dynamics", "synth"};
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) {
    return "unknown command '" + c.command + "'";
  }
  if (c.dt != 30 && c.dt != 60 && c.dt != 120 && c.dt != 240) return "--dt must be one of 30, 60, 120, 240";
  if (c.grid < 2) return "--grid must be at least 2";
  for (double a : c.alphas) {
    if (!(a > 0.0 && a <= 0.5)) return "--alpha values must lie in (0, 0.5]";
  }
  if (c.alphas.empty()) return "at least one --alpha is required";
  if (c.window_days < 1) return "--window-days must be at least 1";
  if (c.command == "synth") {
    if (c.kind != "gaussian" && c.kind != "independent" && c.kind != "comonotone" && c.kind != "countermonotone") {
      return "--kind must be gaussian, independent, comonotone or countermonotone";
    }
    if (c.assets < 2) return "--assets must be at least 2";
    if (c.days < 1) return "--days must be at least 1";
    if (c.switch_day && (*c.switch_day == 0 || *c.switch_day >= c.days)) {
      return "--switch-day must lie strictly inside the sample";
    }
  } else if (c.input.empty()) {
    return "--input is required";
  }
  return std::nullopt;
}

std::vector<std::string> reproduce_args(const RunConfig& c) {
  std::vector<std::string> args = {"copdyn", c.command};
  auto add = [&](const std::string& flag, const std::string& value) {
    args.push_back(flag);
    args.push_back(value);
  };
  if (c.command == "synth") {
    add("--kind", c.kind);
    add("--corr", format_double(c.corr));
    add("--assets", std::to_string(c.assets));
    add("--days", std::to_string(c.days));
    add("--start", c.start);
    add("--seed", std::to_string(c.seed));
    if (c.switch_day) {
      add("--switch-day", std::to_string(*c.switch_day));
      add("--corr-after", format_double(c.corr_after));
    }
  } else {
    add("--input", c.input);
    add("--grid", std::to_string(c.grid));
    for (double a : c.alphas) add("--alpha", format_double(a));
    add("--window-days", std::to_string(c.window_days));
    add("--upper-tail-convention", convention_name(c.convention));
    if (c.permille) args.push_back("--permille");
  }
  if (!c.calendar.empty()) add("--calendar", c.calendar);
  add("--dt", std::to_string(c.dt));
  add("--out", c.out);
  add("--threads", std::to_string(c.threads));
  return args;
}

int run(const RunConfig& config, std::ostream& log) {
  if (auto problem = validate(config)) {
    log << "usage error: " << *problem << "\n";
    return kUsageError;
  }
  try {
    OutputSet outputs{fs::path(config.out)};
    run_command(config, outputs, log);
    write_manifest(outputs, config);
    outputs.commit();
    return kOk;
  } catch (const ParseError& e) {
    log << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const OutputError& e) {
    log << "output error: " << e.what() << "\n";
    return kOutputError;
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"Empirical copulae and tail dependence of asset return panels"};
  app.require_subcommand(1);
  RunConfig config;
  std::string convention = "literal";
  std::optional<std::size_t> switch_day;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--calendar", config.calendar, "Trading calendar config (default 09:30-16:00 weekdays)");
    sub->add_option("--dt", config.dt, "Return interval in minutes")->check(CLI::IsMember({30, 60, 120, 240}));
    sub->add_option("--out", config.out, "Output directory");
    sub->add_option("--seed", config.seed, "Random seed");
    sub->add_option("--threads", config.threads, "Worker threads (0 = all cores)");
  };
  auto add_analysis = [&](CLI::App* sub) {
    sub->add_option("--input", config.input, "Price CSV (timestamp,symbol,price)")->required();
    sub->add_option("--grid", config.grid, "Grid resolution m")->check(CLI::Range(std::size_t{2}, std::size_t{65535}));
    sub->add_option("--alpha", config.alphas, "Tail quantile (repeatable)")->check(CLI::Range(1e-300, 0.5));
    sub->add_option("--window-days", config.window_days, "Window length in trading days")
        ->check(CLI::PositiveNumber);
    sub->add_option("--upper-tail-convention", convention, "literal | survival")
        ->check(CLI::IsMember({"literal", "survival"}));
    sub->add_flag("--permille", config.permille, "Report grid densities in permille");
  };

  for (const char* name : {"copula", "diff", "taildep", "dynamics"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    add_analysis(sub);
  }
  app.get_subcommand("copula")->description("Average pairwise copula grid");
  app.get_subcommand("diff")->description("Empirical minus Gaussian copula difference map");
  app.get_subcommand("taildep")->description("Tail dependence curve against the Gaussian copula");
  app.get_subcommand("dynamics")->description("Per-window copula grids and the correlation/tail relation");

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic price panel");
  add_common(synth);
  synth->add_option("--kind", config.kind, "gaussian | independent | comonotone | countermonotone")
      ->check(CLI::IsMember({"gaussian", "independent", "comonotone", "countermonotone"}));
  synth->add_option("--corr", config.corr, "Equicorrelation (gaussian)");
  synth->add_option("--assets", config.assets, "Number of assets");
  synth->add_option("--days", config.days, "Trading days");
  synth->add_option("--start", config.start, "First calendar date (YYYY-MM-DD)");
  synth->add_option("--switch-day", switch_day, "Trading day at which the correlation switches");
  synth->add_option("--corr-after", config.corr_after, "Equicorrelation after --switch-day");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }
  config.command = app.get_subcommands().front()->get_name();
  config.convention = convention == "survival" ? UpperTailConvention::survival : UpperTailConvention::literal;
  config.switch_day = switch_day;
  return run(config, std::cerr);
}

}  // namespace copdyn::cli
